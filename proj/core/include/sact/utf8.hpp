#ifndef SACT_UTF8_HPP_
#define SACT_UTF8_HPP_

#include <cstddef>
#include <string>
#include <string_view>

namespace sact::utf8 {

inline constexpr char32_t kReplacement = U'\uFFFD';
inline constexpr char32_t kZwnj = U'\u200C';

// Decodes UTF-8; invalid or truncated sequences become U+FFFD.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

// Decodes the code point starting at `pos`, storing its byte length.
char32_t decode_at(std::string_view bytes, std::size_t pos, std::size_t* length);

}  // namespace sact::utf8

#endif  // SACT_UTF8_HPP_
