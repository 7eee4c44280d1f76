#include "offlang/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace offlang::unicode {
namespace {

constexpr char32_t kZwj = 0x200D;

bool is_variation_selector(char32_t cp) { return cp == 0xFE0F || cp == 0xFE0E; }
bool is_tag(char32_t cp) { return cp >= 0xE0020 && cp <= 0xE007F; }
bool is_keycap(char32_t cp) { return cp == 0x20E3; }

bool is_regional_indicator(char32_t cp) {
  return u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_REGIONAL_INDICATOR);
}

// Latin-1 (c) and (R) are Extended_Pictographic but read as ordinary text.
bool is_pictograph(char32_t cp) {
  return cp > 0xFF && u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_EXTENDED_PICTOGRAPHIC);
}

bool is_emoji_modifier(char32_t cp) {
  return u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_EMOJI_MODIFIER);
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? char32_t{0xFFFD} : static_cast<char32_t>(c));
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) {
    append(out, 0xFFFD);
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append(out, cp);
  return out;
}

std::size_t scalar_count(std::string_view utf8) { return decode(utf8).size(); }

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }
bool is_letter(char32_t cp) { return u_isUAlphabetic(static_cast<UChar32>(cp)); }
bool is_upper(char32_t cp) { return u_isUUppercase(static_cast<UChar32>(cp)); }

bool is_punct(char32_t cp) {
  if (cp < 0x80) return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
                        (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  return u_ispunct(static_cast<UChar32>(cp));
}

bool is_word_char(char32_t cp) {
  if (cp == U'_') return true;
  const auto c = static_cast<UChar32>(cp);
  if (u_isUAlphabetic(c) || u_isdigit(c)) return true;
  const auto mask = U_GET_GC_MASK(c);
  return (mask & U_GC_M_MASK) != 0;
}

char32_t to_lower(char32_t cp) { return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))); }

std::string to_lower(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (char32_t cp : decode(utf8)) append(out, to_lower(cp));
  return out;
}

std::size_t emoji_cluster_length(std::u32string_view text, std::size_t pos) {
  if (pos >= text.size()) return 0;
  const char32_t first = text[pos];
  if (is_regional_indicator(first)) {
    if (pos + 1 < text.size() && is_regional_indicator(text[pos + 1])) return 2;
    return 1;
  }
  if (!is_pictograph(first)) return 0;

  std::size_t end = pos + 1;
  for (;;) {
    while (end < text.size() && (is_variation_selector(text[end]) || is_emoji_modifier(text[end]) ||
                                 is_keycap(text[end]) || is_tag(text[end]))) {
      ++end;
    }
    if (end + 1 < text.size() && text[end] == kZwj && is_pictograph(text[end + 1])) {
      end += 2;
      continue;
    }
    return end - pos;
  }
}

bool contains_emoji(std::string_view utf8) {
  const auto text = decode(utf8);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (emoji_cluster_length(text, i) > 0) return true;
  }
  return false;
}

}  // namespace offlang::unicode
