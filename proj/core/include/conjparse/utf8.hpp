#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace conjparse::utf8 {

// Invalid byte sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);

bool is_upper(char32_t cp);
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view text);
std::size_t length(std::string_view text);

}  // namespace conjparse::utf8
