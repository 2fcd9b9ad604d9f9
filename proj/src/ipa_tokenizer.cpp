#include <algorithm>
#include <string>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "phonograph/corpus.hpp"
#include "phonograph/error.hpp"

namespace phonograph {
namespace {

constexpr UChar32 kTieAbove = 0x0361;
constexpr UChar32 kTieBelow = 0x035C;
constexpr UChar32 kPrimaryStress = 0x02C8;
constexpr UChar32 kSecondaryStress = 0x02CC;

bool is_separator(UChar32 cp) {
  return cp == '.' || cp == kPrimaryStress || cp == kSecondaryStress || u_isUWhiteSpace(cp);
}

bool is_tie(UChar32 cp) { return cp == kTieAbove || cp == kTieBelow; }

bool attaches_to_base(UChar32 cp) {
  switch (u_charType(cp)) {
    case U_NON_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_COMBINING_SPACING_MARK:
    case U_MODIFIER_LETTER:
      return true;
    default:
      return false;
  }
}

void append_utf8(std::string& out, UChar32 cp) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, cp);
  out.append(buf, static_cast<std::size_t>(len));
}

// A base symbol with its attached marks. `tie` holds the tie bar that binds
// it to the previous unit, empty when untied.
struct Unit {
  std::string text;
  std::string tie;
};

std::vector<Unit> split_units(const std::string& nfc) {
  std::vector<Unit> units;
  std::string pending_tie;
  const auto* s = reinterpret_cast<const uint8_t*>(nfc.data());
  const auto length = static_cast<int32_t>(nfc.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 cp = 0;
    U8_NEXT(s, i, length, cp);
    if (cp < 0) throw DataError("invalid UTF-8 in transcription");
    if (is_separator(cp)) continue;
    if (is_tie(cp)) {
      // Nothing to join before the first symbol.
      if (!units.empty()) append_utf8(pending_tie, cp);
      continue;
    }
    if (attaches_to_base(cp) && !units.empty()) {
      // A mark between a tie bar and the next base demotes the tie bar to a mark.
      units.back().text += pending_tie;
      pending_tie.clear();
      append_utf8(units.back().text, cp);
      continue;
    }
    Unit unit;
    append_utf8(unit.text, cp);
    unit.tie = std::move(pending_tie);
    pending_tie.clear();
    units.push_back(std::move(unit));
  }
  // A trailing tie bar has nothing to join; keep it as a mark.
  if (!pending_tie.empty()) units.back().text += pending_tie;
  return units;
}

}  // namespace

std::string normalize_nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const auto* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw DataError(std::string("ICU NFC unavailable: ") + u_errorName(status));
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  for (int32_t i = 0; i < length;) {
    UChar32 cp = 0;
    U8_NEXT(bytes, i, length, cp);
    if (cp < 0) throw DataError("invalid UTF-8: " + std::string(text));
  }
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), length));
  icu::UnicodeString dst;
  nfc->normalize(src, dst, status);
  if (U_FAILURE(status)) throw DataError(std::string("NFC normalization failed: ") + u_errorName(status));
  std::string out;
  dst.toUTF8String(out);
  return out;
}

std::vector<std::string> IpaTokenizer::default_digraphs() {
  return {"dʒ", "tʃ"};
}

IpaTokenizer::IpaTokenizer() : IpaTokenizer(default_digraphs()) {}

IpaTokenizer::IpaTokenizer(const std::vector<std::string>& digraphs) {
  for (const auto& d : digraphs) {
    const auto units = split_units(normalize_nfc(d));
    if (units.size() < 2) continue;
    std::string bare;
    for (const auto& u : units) bare += u.text;
    if (std::find(digraphs_.begin(), digraphs_.end(), bare) == digraphs_.end()) {
      digraphs_.push_back(bare);
      max_digraph_units_ = std::max(max_digraph_units_, units.size());
    }
  }
}

std::vector<std::string> IpaTokenizer::tokenize(std::string_view ipa) const {
  const auto units = split_units(normalize_nfc(ipa));
  if (units.empty()) throw DataError("no phonemes in \"" + std::string(ipa) + "\"");

  const auto is_digraph = [this](const std::string& s) {
    return std::find(digraphs_.begin(), digraphs_.end(), s) != digraphs_.end();
  };
  const auto tied_to_prev = [&](std::size_t k) { return k < units.size() && !units[k].tie.empty(); };

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < units.size()) {
    if (tied_to_prev(i + 1)) {
      std::string bare = units[i].text;
      std::string tied = units[i].text;
      std::size_t j = i + 1;
      for (; tied_to_prev(j); ++j) {
        bare += units[j].text;
        tied += units[j].tie + units[j].text;
      }
      tokens.push_back(is_digraph(bare) ? bare : tied);
      i = j;
      continue;
    }
    std::size_t taken = 1;
    const auto longest = std::min(max_digraph_units_, units.size() - i);
    for (auto k = longest; k >= 2; --k) {
      bool splits_tie = tied_to_prev(i + k);
      std::string candidate = units[i].text;
      for (std::size_t m = 1; m < k && !splits_tie; ++m) {
        splits_tie = tied_to_prev(i + m);
        candidate += units[i + m].text;
      }
      if (!splits_tie && is_digraph(candidate)) {
        taken = k;
        break;
      }
    }
    std::string token;
    for (std::size_t m = 0; m < taken; ++m) token += units[i + m].text;
    tokens.push_back(std::move(token));
    i += taken;
  }
  return tokens;
}

}  // namespace phonograph
