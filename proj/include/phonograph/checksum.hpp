#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace phonograph {

/// Streaming 64-bit FNV-1a.
class Checksum64 {
 public:
  void update(std::span<const std::byte> bytes) noexcept {
    for (const auto b : bytes) {
      state_ ^= static_cast<std::uint8_t>(b);
      state_ *= kPrime;
    }
  }

  void update(std::string_view text) noexcept {
    update(std::as_bytes(std::span{text.data(), text.size()}));
  }

  [[nodiscard]] std::uint64_t value() const noexcept { return state_; }

  /// 16 lowercase hex digits.
  [[nodiscard]] std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    auto v = state_;
    for (int i = 15; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
      v >>= 4;
    }
    return out;
  }

 private:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t state_ = kOffset;
};

}  // namespace phonograph
