#include "phonograph/edge_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <map>
#include <optional>

#include "file_io.hpp"
#include "phonograph/aligner.hpp"
#include "phonograph/error.hpp"

namespace phonograph {
namespace {

constexpr std::string_view kPayloadSuffix = ".nwedges";
constexpr std::string_view kManifestSuffix = ".manifest";

std::string errno_text() { return std::strerror(errno); }

template <typename Int>
Int parse_field(const std::map<std::string, std::string, std::less<>>& kv, std::string_view key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DataError("manifest missing key \"" + std::string(key) + "\"");
  Int v{};
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("manifest key \"" + std::string(key) + "\" has bad value \"" + s + "\"");
  }
  return v;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 4);
  return std::string(buf, ptr);
}

// Floor division for a positive divisor.
long floor_div(long a, long b) {
  const auto q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifest

EdgeStoreManifest EdgeStoreManifest::for_corpus(const std::vector<EncodedWord>& words,
                                                const ScoringScheme& scheme) {
  EdgeStoreManifest m;
  m.n = words.size();
  m.num_edges = phonograph::num_edges(m.n);
  m.match = scheme.match();
  m.mismatch = scheme.mismatch();
  m.gap = scheme.gap();
  m.scheme_hash = scheme.hash();
  m.words_digest = phonograph::words_digest(words);
  return m;
}

std::string EdgeStoreManifest::serialize() const {
  std::string out;
  const auto put = [&out](std::string_view key, const std::string& value) {
    out.append(key);
    out += '\t';
    out += value;
    out += '\n';
  };
  put("format_version", std::to_string(format_version));
  put("n", std::to_string(n));
  put("num_edges", std::to_string(num_edges));
  put("match", std::to_string(match));
  put("mismatch", std::to_string(mismatch));
  put("gap", std::to_string(gap));
  put("scheme_hash", scheme_hash);
  put("words_digest", words_digest);
  put("payload_digest", payload_digest);
  put("complete", complete ? "true" : "false");
  return out;
}

EdgeStoreManifest EdgeStoreManifest::parse(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("manifest line " + std::to_string(line_no) + ": expected key<TAB>value");
    }
    kv.emplace(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  });
  EdgeStoreManifest m;
  m.format_version = parse_field<int>(kv, "format_version");
  if (m.format_version != kFormatVersion) {
    throw DataError("unsupported store format_version " + std::to_string(m.format_version));
  }
  m.n = parse_field<NodeIndex>(kv, "n");
  m.num_edges = parse_field<EdgeIndex>(kv, "num_edges");
  m.match = parse_field<int>(kv, "match");
  m.mismatch = parse_field<int>(kv, "mismatch");
  m.gap = parse_field<int>(kv, "gap");
  m.scheme_hash = kv.count("scheme_hash") ? kv.at("scheme_hash") : "";
  m.words_digest = kv.count("words_digest") ? kv.at("words_digest") : "";
  m.payload_digest = kv.count("payload_digest") ? kv.at("payload_digest") : "";
  const auto complete = kv.find("complete");
  if (complete == kv.end() || (complete->second != "true" && complete->second != "false")) {
    throw DataError("manifest key \"complete\" must be true or false");
  }
  m.complete = complete->second == "true";
  if (m.num_edges != phonograph::num_edges(m.n)) {
    throw DataError("manifest num_edges " + std::to_string(m.num_edges) + " != n(n-1)/2 for n=" +
                    std::to_string(m.n));
  }
  return m;
}

StorePaths store_paths(const std::filesystem::path& path) {
  StorePaths p;
  p.payload = path;
  if (!path.string().ends_with(kPayloadSuffix)) p.payload += std::string(kPayloadSuffix);
  p.manifest = p.payload;
  p.manifest += std::string(kManifestSuffix);
  return p;
}

// ---------------------------------------------------------------------------
// Writer

EdgeStoreWriter::EdgeStoreWriter(const std::filesystem::path& path, EdgeStoreManifest manifest)
    : paths_(store_paths(path)), manifest_(std::move(manifest)) {
  if (manifest_.num_edges != num_edges(manifest_.n)) throw DataError("manifest num_edges inconsistent with n");
  manifest_.complete = false;
  manifest_.payload_digest.clear();
  detail::write_text_file(paths_.manifest, manifest_.serialize());
  out_.open(paths_.payload, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot create " + paths_.payload.string());
}

void EdgeStoreWriter::write(std::span<const std::int8_t> weights) {
  if (finished_) throw UsageError("write after finish");
  if (weights.size() > manifest_.num_edges - written_) {
    throw DataError("payload longer than num_edges=" + std::to_string(manifest_.num_edges));
  }
  const auto bytes = std::as_bytes(weights);
  out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out_) throw IoError("write failed: " + paths_.payload.string());
  digest_.update(bytes);
  written_ += weights.size();
}

void EdgeStoreWriter::finish() {
  if (finished_) return;
  if (written_ != manifest_.num_edges) {
    throw DataError("payload length " + std::to_string(written_) + " != num_edges " +
                    std::to_string(manifest_.num_edges));
  }
  out_.flush();
  out_.close();
  if (out_.fail()) throw IoError("cannot close " + paths_.payload.string());
  manifest_.payload_digest = digest_.hex();
  manifest_.complete = true;
  detail::write_text_file(paths_.manifest, manifest_.serialize());
  finished_ = true;
}

void write_store(const std::filesystem::path& path, EdgeStoreManifest manifest,
                 std::span<const std::int8_t> payload) {
  EdgeStoreWriter writer(path, std::move(manifest));
  writer.write(payload);
  writer.finish();
}

// ---------------------------------------------------------------------------
// Reader

EdgeStore::EdgeStore(StorePaths paths, EdgeStoreManifest manifest, int fd)
    : paths_(std::move(paths)), manifest_(std::move(manifest)), fd_(fd) {}

EdgeStore::EdgeStore(EdgeStore&& other) noexcept
    : paths_(std::move(other.paths_)), manifest_(std::move(other.manifest_)), fd_(other.fd_) {
  other.fd_ = -1;
}

EdgeStore& EdgeStore::operator=(EdgeStore&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    paths_ = std::move(other.paths_);
    manifest_ = std::move(other.manifest_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

EdgeStore::~EdgeStore() {
  if (fd_ >= 0) ::close(fd_);
}

EdgeStore EdgeStore::open(const std::filesystem::path& path, bool force) {
  auto paths = store_paths(path);
  if (!std::filesystem::exists(paths.manifest)) throw IoError("missing manifest " + paths.manifest.string());
  auto manifest = EdgeStoreManifest::parse(detail::read_text_file(paths.manifest));
  if (!manifest.complete && !force) {
    throw DataError("store " + paths.payload.string() + " is incomplete (aborted run)");
  }
  const int fd = ::open(paths.payload.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) throw IoError("cannot open " + paths.payload.string() + ": " + errno_text());
  EdgeStore store(std::move(paths), std::move(manifest), fd);
  std::error_code ec;
  const auto size = std::filesystem::file_size(store.paths_.payload, ec);
  if (ec) throw IoError("cannot stat " + store.paths_.payload.string());
  if (store.manifest_.complete && size != store.manifest_.num_edges) {
    throw DataError("payload is " + std::to_string(size) + " bytes, manifest says " +
                    std::to_string(store.manifest_.num_edges));
  }
  return store;
}

void EdgeStore::read_range(EdgeIndex first, std::span<std::int8_t> out) const {
  if (first > manifest_.num_edges || out.size() > manifest_.num_edges - first) {
    throw UsageError("edge range out of bounds");
  }
  auto* dst = reinterpret_cast<char*>(out.data());
  std::size_t remaining = out.size();
  auto offset = static_cast<off_t>(first);
  while (remaining > 0) {
    const auto got = ::pread(fd_, dst, remaining, offset);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw IoError("read failed: " + paths_.payload.string() + ": " + errno_text());
    }
    if (got == 0) throw IoError("unexpected end of payload " + paths_.payload.string());
    dst += got;
    remaining -= static_cast<std::size_t>(got);
    offset += got;
  }
}

int EdgeStore::read_index(EdgeIndex idx) const {
  std::int8_t w = 0;
  read_range(idx, std::span{&w, 1});
  return w;
}

int EdgeStore::read_weight(NodeIndex r, NodeIndex c) const {
  return read_index(index_of(r, c, manifest_.n));
}

void EdgeStore::scan(const std::function<void(EdgeIndex, std::span<const std::int8_t>)>& fn,
                     std::size_t block_size) const {
  std::vector<std::int8_t> buf(std::max<std::size_t>(1, block_size));
  for (EdgeIndex first = 0; first < manifest_.num_edges;) {
    const auto len = static_cast<std::size_t>(std::min<EdgeIndex>(buf.size(), manifest_.num_edges - first));
    const std::span block{buf.data(), len};
    read_range(first, block);
    fn(first, block);
    first += len;
  }
}

std::string EdgeStore::compute_payload_digest() const {
  Checksum64 sum;
  scan([&](EdgeIndex, std::span<const std::int8_t> block) { sum.update(std::as_bytes(block)); });
  return sum.hex();
}

void EdgeStore::check_words(const std::vector<EncodedWord>& words) const {
  if (words.size() != manifest_.n) {
    throw DataError("store has n=" + std::to_string(manifest_.n) + " but words file has " +
                    std::to_string(words.size()) + " words");
  }
  if (!manifest_.words_digest.empty() && words_digest(words) != manifest_.words_digest) {
    throw DataError("words digest mismatch: store was computed from a different corpus");
  }
}

// ---------------------------------------------------------------------------
// Normalization & histograms

double normalize(int score, std::size_t len_a, std::size_t len_b) {
  if (len_a == 0 || len_b == 0) throw UsageError("normalize needs non-empty words");
  return 100.0 * static_cast<double>(score) / static_cast<double>(std::max(len_a, len_b));
}

int normalized_bin(int score, std::size_t len_a, std::size_t len_b) {
  if (len_a == 0 || len_b == 0) throw UsageError("normalize needs non-empty words");
  return static_cast<int>(floor_div(100L * score, static_cast<long>(std::max(len_a, len_b))));
}

std::uint64_t Histogram::count_at(int bin) const {
  const auto k = static_cast<long>(bin) - first_bin;
  if (k < 0 || k >= static_cast<long>(counts.size())) return 0;
  return counts[static_cast<std::size_t>(k)];
}

std::string Histogram::to_text() const {
  std::string out = normalized ? "# normalized edge weights\n" : "# raw edge weights\n";
  out += "bin\tcount\n";
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    out += std::to_string(first_bin + static_cast<int>(k)) + "\t" + std::to_string(counts[k]) + "\n";
  }
  out += "total\t" + std::to_string(total) + "\n";
  out += "mean\t" + format_real(mean) + "\n";
  out += "min\t" + format_real(min) + "\n";
  out += "max\t" + format_real(max) + "\n";
  return out;
}

Histogram histogram(const EdgeStore& store, const std::vector<EncodedWord>& words, bool normalized) {
  if (!store.manifest().complete) throw DataError("histogram requires a complete store");
  store.check_words(words);

  // Raw scores are i8 and lengths >= 1, so normalized values lie in [-12800, 12700].
  constexpr int kLowest = -12800;
  constexpr int kHighest = 12700;
  std::vector<std::uint64_t> bins(static_cast<std::size_t>(kHighest - kLowest + 1));
  std::vector<std::size_t> lengths;
  for (const auto& w : words) lengths.push_back(w.phonemes.size());

  Histogram h;
  h.normalized = normalized;
  std::int64_t raw_sum = 0;
  long double norm_sum = 0.0L;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  store.scan_edges([&](NodeIndex r, NodeIndex c, int w) {
    double value = w;
    int bin = w;
    if (normalized) {
      value = normalize(w, lengths[r], lengths[c]);
      bin = normalized_bin(w, lengths[r], lengths[c]);
      norm_sum += value;
    } else {
      raw_sum += w;
    }
    ++bins[static_cast<std::size_t>(bin - kLowest)];
    if (first || value < lo) lo = value;
    if (first || value > hi) hi = value;
    first = false;
    ++h.total;
  });

  if (h.total == 0) return h;
  h.min = lo;
  h.max = hi;
  h.mean = normalized ? static_cast<double>(norm_sum / static_cast<long double>(h.total))
                      : static_cast<double>(raw_sum) / static_cast<double>(h.total);
  const auto first_nz = std::find_if(bins.begin(), bins.end(), [](auto v) { return v != 0; });
  const auto last_nz = std::find_if(bins.rbegin(), bins.rend(), [](auto v) { return v != 0; }).base();
  h.first_bin = kLowest + static_cast<int>(first_nz - bins.begin());
  h.counts.assign(first_nz, last_nz);
  return h;
}

}  // namespace phonograph
