#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonograph/checksum.hpp"
#include "phonograph/corpus.hpp"
#include "phonograph/triangle_index.hpp"

namespace phonograph {

class ScoringScheme;

/// Sidecar describing a payload: `<name>.nwedges.manifest`, one `key<TAB>value`
/// per line.
struct EdgeStoreManifest {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  NodeIndex n = 0;
  EdgeIndex num_edges = 0;
  int match = 1;
  int mismatch = -1;
  int gap = -1;
  std::string scheme_hash;
  std::string words_digest;
  std::string payload_digest;
  bool complete = false;

  /// Manifest for scoring `words` with `scheme`; digests of the payload unset.
  static EdgeStoreManifest for_corpus(const std::vector<EncodedWord>& words, const ScoringScheme& scheme);

  [[nodiscard]] std::string serialize() const;
  static EdgeStoreManifest parse(std::string_view text);
};

struct StorePaths {
  std::filesystem::path payload;
  std::filesystem::path manifest;
};

/// Accepts either `<name>` or `<name>.nwedges`.
StorePaths store_paths(const std::filesystem::path& path);

/// Receives edge weights in row-major edge order.
class EdgeSink {
 public:
  virtual ~EdgeSink() = default;
  virtual void write(std::span<const std::int8_t> weights) = 0;
};

class MemorySink final : public EdgeSink {
 public:
  void write(std::span<const std::int8_t> weights) override {
    bytes.insert(bytes.end(), weights.begin(), weights.end());
  }
  std::vector<std::int8_t> bytes;
};

/// Single-writer payload + manifest output.
///
/// The manifest is written with `complete=false` on construction and rewritten
/// with `complete=true` and the payload digest by finish(). A writer destroyed
/// without finish() leaves the incomplete marker in place.
class EdgeStoreWriter final : public EdgeSink {
 public:
  EdgeStoreWriter(const std::filesystem::path& path, EdgeStoreManifest manifest);
  EdgeStoreWriter(const EdgeStoreWriter&) = delete;
  EdgeStoreWriter& operator=(const EdgeStoreWriter&) = delete;

  void write(std::span<const std::int8_t> weights) override;

  /// Throws DataError if fewer than num_edges weights were written.
  void finish();

  [[nodiscard]] EdgeIndex written() const noexcept { return written_; }
  [[nodiscard]] const StorePaths& paths() const noexcept { return paths_; }

 private:
  StorePaths paths_;
  EdgeStoreManifest manifest_;
  std::ofstream out_;
  Checksum64 digest_;
  EdgeIndex written_ = 0;
  bool finished_ = false;
};

/// Writes a whole payload at once.
void write_store(const std::filesystem::path& path, EdgeStoreManifest manifest,
                 std::span<const std::int8_t> payload);

/// Read-only store. Reads go through pread(2), so one instance may be shared
/// by concurrent readers.
class EdgeStore {
 public:
  /// Refuses incomplete stores unless `force`.
  static EdgeStore open(const std::filesystem::path& path, bool force = false);

  EdgeStore(EdgeStore&& other) noexcept;
  EdgeStore& operator=(EdgeStore&& other) noexcept;
  EdgeStore(const EdgeStore&) = delete;
  EdgeStore& operator=(const EdgeStore&) = delete;
  ~EdgeStore();

  [[nodiscard]] const EdgeStoreManifest& manifest() const noexcept { return manifest_; }
  [[nodiscard]] NodeIndex n() const noexcept { return manifest_.n; }
  [[nodiscard]] EdgeIndex num_edges() const noexcept { return manifest_.num_edges; }
  [[nodiscard]] const StorePaths& paths() const noexcept { return paths_; }

  /// Score of the undirected edge (r, c); requires r < c < n.
  [[nodiscard]] int read_weight(NodeIndex r, NodeIndex c) const;
  [[nodiscard]] int read_index(EdgeIndex idx) const;
  void read_range(EdgeIndex first, std::span<std::int8_t> out) const;

  /// Streams the whole payload in order as (first edge index, block) pairs.
  void scan(const std::function<void(EdgeIndex, std::span<const std::int8_t>)>& fn,
            std::size_t block_size = 1 << 20) const;

  /// Calls fn(row, col, score) for every edge in row-major order.
  template <typename Fn>
  void scan_edges(Fn&& fn) const {
    const auto n = this->n();
    NodeIndex r = 0;
    NodeIndex c = 1;
    scan([&](EdgeIndex, std::span<const std::int8_t> block) {
      for (const auto w : block) {
        fn(r, c, static_cast<int>(w));
        if (++c == n) {
          ++r;
          c = r + 1;
        }
      }
    });
  }

  [[nodiscard]] std::string compute_payload_digest() const;

  /// Throws DataError unless `words` is the corpus this store was computed from.
  void check_words(const std::vector<EncodedWord>& words) const;

 private:
  EdgeStore(StorePaths paths, EdgeStoreManifest manifest, int fd);

  StorePaths paths_;
  EdgeStoreManifest manifest_;
  int fd_ = -1;
};

/// 100 * score / max(len_a, len_b).
double normalize(int score, std::size_t len_a, std::size_t len_b);

/// floor(normalize(...)) in exact integer arithmetic.
int normalized_bin(int score, std::size_t len_a, std::size_t len_b);

/// Width-1 integer bins; bin k covers [first_bin + k, first_bin + k + 1).
struct Histogram {
  bool normalized = false;
  int first_bin = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;

  [[nodiscard]] std::uint64_t count_at(int bin) const;
  [[nodiscard]] std::string to_text() const;
};

/// Single streaming pass over a complete store.
Histogram histogram(const EdgeStore& store, const std::vector<EncodedWord>& words, bool normalized);

}  // namespace phonograph
