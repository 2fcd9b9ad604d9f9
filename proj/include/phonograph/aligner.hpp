#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "phonograph/corpus.hpp"

namespace phonograph {

/// Similarity function over phoneme IDs plus a linear gap penalty.
///
/// The uniform scheme scores `match` on equal IDs and `mismatch` otherwise.
/// Per-pair overrides are stored symmetrically in a dense table sized to the
/// inventory.
class ScoringScheme {
 public:
  /// Match +1, mismatch -1, gap -1.
  ScoringScheme() = default;
  ScoringScheme(int match, int mismatch, int gap);

  /// Sets similarity(a, b) and similarity(b, a). `inventory_size` bounds the IDs.
  void set_pair(PhonemeId a, PhonemeId b, int value, std::size_t inventory_size);

  [[nodiscard]] int similarity(PhonemeId a, PhonemeId b) const noexcept {
    if (table_.empty()) return a == b ? match_ : mismatch_;
    if (a >= table_dim_ || b >= table_dim_) return a == b ? match_ : mismatch_;
    return table_[static_cast<std::size_t>(a) * table_dim_ + b];
  }

  [[nodiscard]] int match() const noexcept { return match_; }
  [[nodiscard]] int mismatch() const noexcept { return mismatch_; }
  [[nodiscard]] int gap() const noexcept { return gap_; }
  [[nodiscard]] bool is_uniform() const noexcept { return table_.empty(); }

  /// Largest and smallest value similarity() can return.
  [[nodiscard]] int max_similarity() const noexcept;
  [[nodiscard]] int min_similarity() const noexcept;

  /// Canonical text form; hashing it identifies the scheme in store manifests.
  [[nodiscard]] std::string describe() const;
  [[nodiscard]] std::string hash() const;

 private:
  int match_ = 1;
  int mismatch_ = -1;
  int gap_ = -1;
  std::size_t table_dim_ = 0;
  std::vector<int> table_;
};

/// Parsed scheme file, before token names are resolved against an inventory.
///
///   # comment
///   match     1
///   mismatch  -1
///   gap       -1
///   ɑ̃<TAB>ɑ<TAB>0
struct SchemeFile {
  int match = 1;
  int mismatch = -1;
  int gap = -1;
  std::vector<std::tuple<std::string, std::string, int>> overrides;

  static SchemeFile parse(std::string_view text);
  static SchemeFile load(const std::filesystem::path& path);

  /// Throws DataError if an override names a token missing from `inventory`.
  [[nodiscard]] ScoringScheme resolve(const PhonemeInventory& inventory) const;
};

using PhonemeSeq = std::span<const PhonemeId>;

/// Optimal global alignment score (bottom-right cell of the DP matrix), using
/// two rolling rows.
int nw_score(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme);
int nw_score(const EncodedWord& a, const EncodedWord& b, const ScoringScheme& scheme);

/// Reusable full score matrix of (q+1)^2 cells, row-major with stride
/// len(b)+1. One per worker thread.
class ScoreWorkspace {
 public:
  explicit ScoreWorkspace(std::size_t max_length);

  [[nodiscard]] std::size_t max_length() const noexcept { return max_length_; }

  /// Same result as nw_score(). Both sequences must fit max_length().
  int score(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme);

 private:
  std::size_t max_length_;
  std::vector<std::int32_t> cells_;
};

struct AlignedPair {
  std::optional<PhonemeId> a;  // nullopt = gap
  std::optional<PhonemeId> b;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;
  int score = 0;
};

/// One optimal alignment. Traceback prefers diagonal, then up (a-symbol
/// against gap), then left (gap against b-symbol).
Alignment nw_align(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme);
Alignment nw_align(const EncodedWord& a, const EncodedWord& b, const ScoringScheme& scheme);

/// Sum of per-column scores of an alignment.
int alignment_score(const Alignment& alignment, const ScoringScheme& scheme);

/// Maximum score over every global alignment, by exhaustive recursion.
/// Exponential: throws UsageError when len(a) + len(b) > 16.
int oracle_score(PhonemeSeq a, PhonemeSeq b, const ScoringScheme& scheme);

inline constexpr std::size_t kOracleMaxTotalLength = 16;

}  // namespace phonograph
