#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace subseg::utf8 {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Byte offset of the first ill-formed sequence in s, or npos.
std::size_t find_invalid(std::string_view s) noexcept;

// Throws DecodeError at base_offset + the offending position.
void validate(std::string_view s, std::size_t base_offset = 0);

// The functions below expect valid UTF-8.

// One view per Unicode scalar value.
std::vector<std::string_view> split_chars(std::string_view s);
std::size_t length(std::string_view s) noexcept;
bool is_single_char(std::string_view s) noexcept;
std::u32string decode(std::string_view s);

void append(std::string& out, char32_t cp);
std::string encode(char32_t cp);

// Unicode White_Space property.
bool is_space(char32_t cp) noexcept;

namespace detail {
// Decodes the scalar value starting at s[i] and advances i past it.
char32_t next(std::string_view s, std::size_t& i) noexcept;
}  // namespace detail

// Calls f(cp, bytes) for every scalar value.
template <typename F>
void for_each(std::string_view s, F&& f) {
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t start = i;
    const char32_t cp = detail::next(s, i);
    f(cp, s.substr(start, i - start));
  }
}

}  // namespace subseg::utf8
