#pragma once

// Code point level helpers. Classification is delegated to ICU so that Danish,
// Greek and Turkish letters behave the same as ASCII ones.

#include <string>
#include <string_view>

namespace offlang::unicode {

// Decodes UTF-8; ill-formed sequences become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

std::size_t scalar_count(std::string_view utf8);

bool is_space(char32_t cp);
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
// Unicode punctuation (P*) plus the ASCII symbol characters.
bool is_punct(char32_t cp);
// Letters, digits, combining marks and underscore.
bool is_word_char(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view utf8);

// Length of the emoji cluster starting at text[pos] (base pictograph plus
// modifiers, variation selectors, keycaps, tag sequences, ZWJ-joined
// pictographs and flag pairs); 0 when no emoji starts there.
std::size_t emoji_cluster_length(std::u32string_view text, std::size_t pos);

bool contains_emoji(std::string_view utf8);

}  // namespace offlang::unicode
