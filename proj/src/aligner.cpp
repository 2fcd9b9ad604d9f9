#include "phonograph/aligner.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "file_io.hpp"
#include "phonograph/checksum.hpp"
#include "phonograph/error.hpp"

namespace phonograph {
namespace {

// Fills a full row-major matrix with stride len(b)+1 and returns the last cell.
template <typename Sim>
int fill_matrix(PhonemeSeq a, PhonemeSeq b, int gap, std::int32_t* m, Sim&& sim) {
  const auto la = a.size();
  const auto lb = b.size();
  const auto stride = lb + 1;
  for (std::size_t j = 0; j <= lb; ++j) m[j] = gap * static_cast<int>(j);
  for (std::size_t i = 1; i <= la; ++i) {
    std::int32_t* row = m + i * stride;
    const std::int32_t* up = row - stride;
    row[0] = gap * static_cast<int>(i);
    const auto ai = a[i - 1];
    for (std::size_t j = 1; j <= lb; ++j) {
      const std::int32_t diag = up[j - 1] + sim(ai, b[j - 1]);
      const std::int32_t del = up[j] + gap;
      const std::int32_t ins = row[j - 1] + gap;
      row[j] = std::max(diag, std::max(del, ins));
    }
  }
  return m[la * stride + lb];
}

template <typename Sim>
int rolling_score(PhonemeSeq a, PhonemeSeq b, int gap, Sim&& sim) {
  const auto lb = b.size();
  std::vector<std::int32_t> prev(lb + 1), cur(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) prev[j] = gap * static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = gap * static_cast<int>(i);
    const auto ai = a[i - 1];
    for (std::size_t j = 1; j <= lb; ++j) {
      cur[j] = std::max(prev[j - 1] + sim(ai, b[j - 1]), std::max(prev[j] + gap, cur[j - 1] + gap));
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

std::optional<int> parse_int(std::string_view s) {
  s = detail::trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  constexpr std::string_view kSpace = " \t";
  std::size_t pos = 0;
  while (true) {
    const auto b = line.find_first_not_of(kSpace, pos);
    if (b == std::string_view::npos) break;
    const auto e = line.find_first_of(kSpace, b);
    out.push_back(line.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos) break;
    pos = e;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScoringScheme

ScoringScheme::ScoringScheme(int match, int mismatch, int gap)
    : match_(match), mismatch_(mismatch), gap_(gap) {}

void ScoringScheme::set_pair(PhonemeId a, PhonemeId b, int value, std::size_t inventory_size) {
  if (a >= inventory_size || b >= inventory_size) throw DataError("scheme override outside inventory");
  if (table_.empty() || table_dim_ < inventory_size) {
    const auto old_dim = table_dim_;
    auto old = std::move(table_);
    table_dim_ = inventory_size;
    table_.assign(table_dim_ * table_dim_, mismatch_);
    for (std::size_t i = 0; i < table_dim_; ++i) table_[i * table_dim_ + i] = match_;
    for (std::size_t i = 0; i < old_dim; ++i) {
      for (std::size_t j = 0; j < old_dim; ++j) table_[i * table_dim_ + j] = old[i * old_dim + j];
    }
  }
  table_[static_cast<std::size_t>(a) * table_dim_ + b] = value;
  table_[static_cast<std::size_t>(b) * table_dim_ + a] = value;
}

int ScoringScheme::max_similarity() const noexcept {
  int m = std::max(match_, mismatch_);
  for (const auto v : table_) m = std::max(m, v);
  return m;
}

int ScoringScheme::min_similarity() const noexcept {
  int m = std::min(match_, mismatch_);
  for (const auto v : table_) m = std::min(m, v);
  return m;
}

std::string ScoringScheme::describe() const {
  std::string out = "match " + std::to_string(match_) + "\nmismatch " + std::to_string(mismatch_) +
                    "\ngap " + std::to_string(gap_) + "\n";
  for (std::size_t i = 0; i < table_dim_; ++i) {
    for (std::size_t j = i; j < table_dim_; ++j) {
      const auto v = table_[i * table_dim_ + j];
      if (v != (i == j ? match_ : mismatch_)) {
        out += std::to_string(i) + " " + std::to_string(j) + " " + std::to_string(v) + "\n";
      }
    }
  }
  return out;
}

std::string ScoringScheme::hash() const {
  Checksum64 sum;
  sum.update(describe());
  return sum.hex();
}

// ---------------------------------------------------------------------------
// SchemeFile

SchemeFile SchemeFile::parse(std::string_view text) {
  SchemeFile f;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto fields = split_ws(line);
    if (fields.empty()) return;
    const auto where = "scheme line " + std::to_string(line_no) + ": ";
    if (fields.size() == 2) {
      const auto v = parse_int(fields[1]);
      if (!v) throw DataError(where + "bad integer \"" + std::string(fields[1]) + "\"");
      if (fields[0] == "match") f.match = *v;
      else if (fields[0] == "mismatch") f.mismatch = *v;
      else if (fields[0] == "gap") f.gap = *v;
      else throw DataError(where + "unknown key \"" + std::string(fields[0]) + "\"");
    } else if (fields.size() == 3) {
      const auto v = parse_int(fields[2]);
      if (!v) throw DataError(where + "bad integer \"" + std::string(fields[2]) + "\"");
      f.overrides.emplace_back(normalize_nfc(fields[0]), normalize_nfc(fields[1]), *v);
    } else {
      throw DataError(where + "expected `key value` or `tokenA tokenB value`");
    }
  });
  return f;
}

SchemeFile SchemeFile::load(const std::filesystem::path& path) {
  return parse(detail::read_text_file(path));
}

ScoringScheme SchemeFile::resolve(const PhonemeInventory& inventory) const {
  ScoringScheme scheme(match, mismatch, gap);
  std::vector<std::tuple<PhonemeId, PhonemeId, int>> seen;
  for (const auto& [ta, tb, value] : overrides) {
    const auto a = inventory.find(ta);
    const auto b = inventory.find(tb);
    if (!a || !b) throw DataError("scheme override names unknown phoneme \"" + (a ? tb : ta) + "\"");
    const auto lo = std::min(*a, *b);
    const auto hi = std::max(*a, *b);
    for (const auto& [sa, sb, sv] : seen) {
      if (sa == lo && sb == hi && sv != value) {
        throw DataError("conflicting scheme overrides for " + ta + " / " + tb);
      }
    }
    seen.emplace_back(lo, hi, value);
    scheme.set_pair(*a, *b, value, inventory.size());
  }
  return scheme;
}

// ---------------------------------------------------------------------------
// Scoring

int nw_score(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme) {
  if (scheme.is_uniform()) {
    const int match = scheme.match();
    const int mismatch = scheme.mismatch();
    return rolling_score(a, b, scheme.gap(),
                         [=](PhonemeId x, PhonemeId y) { return x == y ? match : mismatch; });
  }
  return rolling_score(a, b, scheme.gap(),
                       [&](PhonemeId x, PhonemeId y) { return scheme.similarity(x, y); });
}

int nw_score(const EncodedWord& a, const EncodedWord& b, const ScoringScheme& scheme) {
  return nw_score(PhonemeSeq{a.phonemes}, PhonemeSeq{b.phonemes}, scheme);
}

ScoreWorkspace::ScoreWorkspace(std::size_t max_length)
    : max_length_(max_length), cells_((max_length + 1) * (max_length + 1)) {}

int ScoreWorkspace::score(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme) {
  if (a.size() > max_length_ || b.size() > max_length_) {
    throw UsageError("sequence longer than workspace capacity " + std::to_string(max_length_));
  }
  if (scheme.is_uniform()) {
    const int match = scheme.match();
    const int mismatch = scheme.mismatch();
    return fill_matrix(a, b, scheme.gap(), cells_.data(),
                       [=](PhonemeId x, PhonemeId y) { return x == y ? match : mismatch; });
  }
  return fill_matrix(a, b, scheme.gap(), cells_.data(),
                     [&](PhonemeId x, PhonemeId y) { return scheme.similarity(x, y); });
}

Alignment nw_align(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme) {
  const auto la = a.size();
  const auto lb = b.size();
  const auto stride = lb + 1;
  std::vector<std::int32_t> m((la + 1) * stride);
  const int gap = scheme.gap();
  Alignment out;
  out.score = fill_matrix(a, b, gap, m.data(),
                          [&](PhonemeId x, PhonemeId y) { return scheme.similarity(x, y); });

  auto i = la;
  auto j = lb;
  while (i > 0 || j > 0) {
    const auto here = m[i * stride + j];
    if (i > 0 && j > 0 && here == m[(i - 1) * stride + (j - 1)] + scheme.similarity(a[i - 1], b[j - 1])) {
      out.pairs.push_back({a[i - 1], b[j - 1]});
      --i;
      --j;
    } else if (i > 0 && here == m[(i - 1) * stride + j] + gap) {
      out.pairs.push_back({a[i - 1], std::nullopt});
      --i;
    } else {
      out.pairs.push_back({std::nullopt, b[j - 1]});
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

Alignment nw_align(const EncodedWord& a, const EncodedWord& b, const ScoringScheme& scheme) {
  return nw_align(PhonemeSeq{a.phonemes}, PhonemeSeq{b.phonemes}, scheme);
}

int alignment_score(const Alignment& alignment, const ScoringScheme& scheme) {
  int total = 0;
  for (const auto& p : alignment.pairs) {
    total += (p.a && p.b) ? scheme.similarity(*p.a, *p.b) : scheme.gap();
  }
  return total;
}

namespace {

int enumerate_alignments(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme) {
  if (a.empty() && b.empty()) return 0;
  int best = std::numeric_limits<int>::min();
  if (!a.empty() && !b.empty()) {
    best = std::max(best, scheme.similarity(a[0], b[0]) + enumerate_alignments(a.subspan(1), b.subspan(1), scheme));
  }
  if (!a.empty()) best = std::max(best, scheme.gap() + enumerate_alignments(a.subspan(1), b, scheme));
  if (!b.empty()) best = std::max(best, scheme.gap() + enumerate_alignments(a, b.subspan(1), scheme));
  return best;
}

}  // namespace

int oracle_score(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme) {
  if (a.size() + b.size() > kOracleMaxTotalLength) {
    throw UsageError("oracle_score limited to len(a)+len(b) <= " + std::to_string(kOracleMaxTotalLength));
  }
  return enumerate_alignments(a, b, scheme);
}

}  // namespace phonograph
