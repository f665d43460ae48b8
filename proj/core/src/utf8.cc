#include "subseg/utf8.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>
#include <cstdio>

#include "subseg/error.h"

namespace subseg::utf8 {

namespace detail {

char32_t next(std::string_view s, std::size_t& i) noexcept {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  int32_t pos = static_cast<int32_t>(i);
  const int32_t len = static_cast<int32_t>(s.size());
  UChar32 c;
  U8_NEXT(bytes, pos, len, c);
  i = static_cast<std::size_t>(pos);
  return c < 0 ? U'�' : static_cast<char32_t>(c);
}

}  // namespace detail

std::size_t find_invalid(std::string_view s) noexcept {
  // Inputs are single lines; U8_NEXT indexes with int32_t.
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t len = static_cast<int32_t>(s.size());
  int32_t pos = 0;
  while (pos < len) {
    const int32_t start = pos;
    UChar32 c;
    U8_NEXT(bytes, pos, len, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return npos;
}

void validate(std::string_view s, std::size_t base_offset) {
  const std::size_t bad = find_invalid(s);
  if (bad != npos) {
    const auto byte = static_cast<unsigned>(static_cast<unsigned char>(s[bad]));
    char hex[8];
    std::snprintf(hex, sizeof(hex), "0x%02X", byte);
    throw DecodeError(base_offset + bad,
                      std::string("ill-formed sequence starting with byte ") + hex);
  }
}

std::vector<std::string_view> split_chars(std::string_view s) {
  std::vector<std::string_view> chars;
  chars.reserve(s.size());
  for_each(s, [&](char32_t, std::string_view bytes) { chars.push_back(bytes); });
  return chars;
}

std::size_t length(std::string_view s) noexcept {
  std::size_t n = 0;
  for (const char c : s) {
    // Count every byte that is not a continuation byte.
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool is_single_char(std::string_view s) noexcept {
  if (s.empty()) return false;
  std::size_t i = 0;
  detail::next(s, i);
  return i == s.size();
}

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for_each(s, [&](char32_t cp, std::string_view) { out.push_back(cp); });
  return out;
}

void append(std::string& out, char32_t cp) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) {
    throw ValidationError("cannot encode codepoint " + std::to_string(cp));
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

bool is_space(char32_t cp) noexcept {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

}  // namespace subseg::utf8
