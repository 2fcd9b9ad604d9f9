#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phonograph {

using PhonemeId = std::uint16_t;

struct CorpusRow {
  std::string word;
  std::string ipa;
  double frequency = 0.0;
};

/// Reads a `word<TAB>ipa<TAB>frequency[<TAB>...]` file.
///
/// Rows are deduplicated by word (first occurrence wins), sorted by frequency
/// descending with ties broken by byte-wise orthography, then truncated to
/// `limit`. Throws DataError naming the line for malformed input, UsageError
/// for `limit == 0` and IoError when the file cannot be read.
std::vector<CorpusRow> load_corpus(const std::filesystem::path& path,
                                   std::optional<std::size_t> limit = std::nullopt);

/// Same as load_corpus() but over in-memory text.
std::vector<CorpusRow> parse_corpus(std::string_view text,
                                    std::optional<std::size_t> limit = std::nullopt);

/// NFC normalization of UTF-8 text. Throws DataError on invalid UTF-8.
std::string normalize_nfc(std::string_view text);

/// Splits IPA transcriptions into phoneme tokens.
///
/// Input is NFC-normalized first. Stress marks, syllable dots and whitespace
/// are dropped. Combining marks and modifier letters stay with the preceding
/// base symbol. A tie bar joins its neighbours into one token; when the joined
/// pair (without the tie bar) is a registered digraph the bare digraph is
/// emitted, so `d͡ʒ` and `dʒ` share a token. Untied digraphs are matched
/// greedily, longest first.
class IpaTokenizer {
 public:
  /// Affricates handled as single phonemes by default.
  static std::vector<std::string> default_digraphs();

  IpaTokenizer();
  explicit IpaTokenizer(const std::vector<std::string>& digraphs);

  /// Throws DataError("no phonemes") if nothing but separators remains.
  [[nodiscard]] std::vector<std::string> tokenize(std::string_view ipa) const;

  [[nodiscard]] const std::vector<std::string>& digraphs() const noexcept { return digraphs_; }

 private:
  std::vector<std::string> digraphs_;  // NFC, longest first
  std::size_t max_digraph_units_ = 0;
};

/// Bijection between IPA tokens and dense integer IDs.
class PhonemeInventory {
 public:
  PhonemeInventory() = default;

  /// Returns the ID of `token`, assigning the next free one if unseen.
  PhonemeId intern(const std::string& token);

  [[nodiscard]] std::optional<PhonemeId> find(std::string_view token) const;
  [[nodiscard]] const std::string& symbol(PhonemeId id) const { return symbols_.at(id); }
  [[nodiscard]] const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }

  /// `token<TAB>id` lines sorted by id.
  [[nodiscard]] std::string serialize() const;
  static PhonemeInventory parse(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static PhonemeInventory load(const std::filesystem::path& path);

  friend bool operator==(const PhonemeInventory& a, const PhonemeInventory& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, PhonemeId> ids_;
};

struct EncodedWord {
  std::string word;
  std::string ipa;
  std::vector<PhonemeId> phonemes;
  double frequency = 0.0;
};

/// IDs are assigned in order of first occurrence while scanning `rows`.
PhonemeInventory build_inventory(const std::vector<CorpusRow>& rows, const IpaTokenizer& tokenizer);

/// Throws DataError naming the token and word if a token is not in `inventory`.
EncodedWord encode_word(const CorpusRow& row, const PhonemeInventory& inventory,
                        const IpaTokenizer& tokenizer);

std::vector<EncodedWord> encode_corpus(const std::vector<CorpusRow>& rows,
                                       const PhonemeInventory& inventory,
                                       const IpaTokenizer& tokenizer);

/// Digest of the ordered (word, ipa) list; binds an edge store to its corpus.
std::string words_digest(const std::vector<EncodedWord>& words);

/// Longest phoneme sequence in `words` (0 for an empty list).
std::size_t max_word_length(const std::vector<EncodedWord>& words);

// Words file: `word<TAB>ipa<TAB>length<TAB>frequency<TAB>id,id,...` per line,
// preceded by a `#` header line.
std::string serialize_words(const std::vector<EncodedWord>& words);
std::vector<EncodedWord> parse_words(std::string_view text);
void save_words(const std::filesystem::path& path, const std::vector<EncodedWord>& words);
std::vector<EncodedWord> load_words(const std::filesystem::path& path);

/// Index of `word` in `words` if present.
std::optional<std::size_t> find_word(const std::vector<EncodedWord>& words, std::string_view word);

}  // namespace phonograph
