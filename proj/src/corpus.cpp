#include "phonograph/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "file_io.hpp"
#include "phonograph/checksum.hpp"
#include "phonograph/error.hpp"

namespace phonograph {
namespace {

using detail::trim;

std::string line_error(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::string_view strip_slashes(std::string_view ipa) {
  if (ipa.size() >= 2 && ipa.front() == '/' && ipa.back() == '/') {
    ipa.remove_prefix(1);
    ipa.remove_suffix(1);
  }
  return trim(ipa);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<CorpusRow> parse_corpus(std::string_view text, std::optional<std::size_t> limit) {
  if (limit && *limit == 0) throw UsageError("limit must be positive");
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<CorpusRow> rows;
  std::unordered_set<std::string> seen;
  std::vector<std::string_view> fields;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    detail::split(line, '\t', fields);
    if (fields.size() < 3) {
      throw DataError(line_error(line_no, "expected word<TAB>ipa<TAB>frequency, found " +
                                              std::to_string(fields.size()) + " field(s)"));
    }
    CorpusRow row;
    row.word = std::string(trim(fields[0]));
    row.ipa = std::string(strip_slashes(fields[1]));
    if (row.word.empty()) throw DataError(line_error(line_no, "empty word"));
    if (row.ipa.empty()) throw DataError(line_error(line_no, "empty transcription for " + row.word));
    const auto freq = parse_double(fields[2]);
    if (!freq) throw DataError(line_error(line_no, "unparsable frequency \"" + std::string(fields[2]) + "\""));
    if (!std::isfinite(*freq) || *freq < 0.0) {
      throw DataError(line_error(line_no, "frequency must be a non-negative number"));
    }
    row.frequency = *freq;
    if (seen.insert(row.word).second) rows.push_back(std::move(row));
  });
  if (rows.empty()) throw DataError("corpus is empty");

  std::stable_sort(rows.begin(), rows.end(), [](const CorpusRow& a, const CorpusRow& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.word < b.word;
  });
  if (limit && rows.size() > *limit) rows.resize(*limit);
  return rows;
}

std::vector<CorpusRow> load_corpus(const std::filesystem::path& path, std::optional<std::size_t> limit) {
  if (limit && *limit == 0) throw UsageError("limit must be positive");
  const auto text = detail::read_text_file(path);
  try {
    return parse_corpus(text, limit);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// PhonemeInventory

PhonemeId PhonemeInventory::intern(const std::string& token) {
  if (const auto it = ids_.find(token); it != ids_.end()) return it->second;
  if (symbols_.size() > std::numeric_limits<PhonemeId>::max()) {
    throw DataError("phoneme inventory overflow");
  }
  const auto id = static_cast<PhonemeId>(symbols_.size());
  symbols_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

std::optional<PhonemeId> PhonemeInventory::find(std::string_view token) const {
  if (const auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::string PhonemeInventory::serialize() const {
  std::string out;
  for (std::size_t id = 0; id < symbols_.size(); ++id) {
    out += symbols_[id];
    out += '\t';
    out += std::to_string(id);
    out += '\n';
  }
  return out;
}

PhonemeInventory PhonemeInventory::parse(std::string_view text) {
  std::vector<std::optional<std::string>> by_id;
  std::unordered_set<std::string> tokens;
  std::vector<std::string_view> fields;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    detail::split(line, '\t', fields);
    if (fields.size() != 2 || fields[0].empty()) {
      throw DataError("inventory " + line_error(line_no, "expected token<TAB>id"));
    }
    const auto id = parse_int<std::size_t>(fields[1]);
    if (!id || *id > std::numeric_limits<PhonemeId>::max()) {
      throw DataError("inventory " + line_error(line_no, "bad id"));
    }
    const auto token = normalize_nfc(fields[0]);
    if (!tokens.insert(token).second) {
      throw DataError("inventory " + line_error(line_no, "duplicate token " + token));
    }
    if (by_id.size() <= *id) by_id.resize(*id + 1);
    if (by_id[*id]) throw DataError("inventory " + line_error(line_no, "duplicate id " + std::to_string(*id)));
    by_id[*id] = token;
  });
  PhonemeInventory inv;
  for (std::size_t id = 0; id < by_id.size(); ++id) {
    if (!by_id[id]) throw DataError("inventory ids are not dense: missing " + std::to_string(id));
    inv.intern(*by_id[id]);
  }
  return inv;
}

void PhonemeInventory::save(const std::filesystem::path& path) const {
  detail::write_text_file(path, serialize());
}

PhonemeInventory PhonemeInventory::load(const std::filesystem::path& path) {
  return parse(detail::read_text_file(path));
}

// ---------------------------------------------------------------------------

PhonemeInventory build_inventory(const std::vector<CorpusRow>& rows, const IpaTokenizer& tokenizer) {
  if (rows.empty()) throw DataError("cannot build an inventory from an empty corpus");
  PhonemeInventory inv;
  for (const auto& row : rows) {
    std::vector<std::string> tokens;
    try {
      tokens = tokenizer.tokenize(row.ipa);
    } catch (const DataError& e) {
      throw DataError("word \"" + row.word + "\": " + e.what());
    }
    for (const auto& t : tokens) inv.intern(t);
  }
  return inv;
}

EncodedWord encode_word(const CorpusRow& row, const PhonemeInventory& inventory,
                        const IpaTokenizer& tokenizer) {
  EncodedWord out{row.word, row.ipa, {}, row.frequency};
  std::vector<std::string> tokens;
  try {
    tokens = tokenizer.tokenize(row.ipa);
  } catch (const DataError& e) {
    throw DataError("word \"" + row.word + "\": " + e.what());
  }
  out.phonemes.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto id = inventory.find(t);
    if (!id) throw DataError("unknown phoneme \"" + t + "\" in word \"" + row.word + "\"");
    out.phonemes.push_back(*id);
  }
  return out;
}

std::vector<EncodedWord> encode_corpus(const std::vector<CorpusRow>& rows,
                                       const PhonemeInventory& inventory,
                                       const IpaTokenizer& tokenizer) {
  std::vector<EncodedWord> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(encode_word(row, inventory, tokenizer));
  return out;
}

std::string words_digest(const std::vector<EncodedWord>& words) {
  Checksum64 sum;
  for (const auto& w : words) {
    sum.update(w.word);
    sum.update("\t");
    sum.update(w.ipa);
    sum.update("\n");
  }
  return sum.hex();
}

std::size_t max_word_length(const std::vector<EncodedWord>& words) {
  std::size_t q = 0;
  for (const auto& w : words) q = std::max(q, w.phonemes.size());
  return q;
}

std::string serialize_words(const std::vector<EncodedWord>& words) {
  std::string out = "# word\tipa\tlength\tfrequency\tphonemes\n";
  for (const auto& w : words) {
    out += w.word;
    out += '\t';
    out += w.ipa;
    out += '\t';
    out += std::to_string(w.phonemes.size());
    out += '\t';
    out += format_double(w.frequency);
    out += '\t';
    for (std::size_t i = 0; i < w.phonemes.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(w.phonemes[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<EncodedWord> parse_words(std::string_view text) {
  std::vector<EncodedWord> words;
  std::vector<std::string_view> fields;
  std::vector<std::string_view> ids;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    detail::split(line, '\t', fields);
    if (fields.size() != 5) throw DataError("words " + line_error(line_no, "expected 5 fields"));
    EncodedWord w;
    w.word = std::string(fields[0]);
    w.ipa = std::string(fields[1]);
    const auto length = parse_int<std::size_t>(fields[2]);
    const auto freq = parse_double(fields[3]);
    if (!length || !freq) throw DataError("words " + line_error(line_no, "bad length or frequency"));
    w.frequency = *freq;
    detail::split(fields[4], ',', ids);
    for (const auto id : ids) {
      const auto v = parse_int<PhonemeId>(id);
      if (!v) throw DataError("words " + line_error(line_no, "bad phoneme id \"" + std::string(id) + "\""));
      w.phonemes.push_back(*v);
    }
    if (w.phonemes.size() != *length || w.word.empty()) {
      throw DataError("words " + line_error(line_no, "length does not match phoneme list"));
    }
    words.push_back(std::move(w));
  });
  return words;
}

void save_words(const std::filesystem::path& path, const std::vector<EncodedWord>& words) {
  detail::write_text_file(path, serialize_words(words));
}

std::vector<EncodedWord> load_words(const std::filesystem::path& path) {
  try {
    return parse_words(detail::read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::optional<std::size_t> find_word(const std::vector<EncodedWord>& words, std::string_view word) {
  const auto it = std::find_if(words.begin(), words.end(), [&](const EncodedWord& w) { return w.word == word; });
  if (it == words.end()) return std::nullopt;
  return static_cast<std::size_t>(it - words.begin());
}

}  // namespace phonograph
