#include "conjparse/utf8.hpp"

#include <locale>
#include <memory>

namespace conjparse::utf8 {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// The classification facet of a UTF-8 locale, if the platform has one.
const std::ctype<wchar_t>* unicode_ctype() {
  static const std::unique_ptr<std::locale> loc = []() -> std::unique_ptr<std::locale> {
    for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8", "en_US.utf8"}) {
      try {
        return std::make_unique<std::locale>(name);
      } catch (const std::runtime_error&) {
      }
    }
    return nullptr;
  }();
  return loc ? &std::use_facet<std::ctype<wchar_t>>(*loc) : nullptr;
}

// Latin-1 fallback used only when no UTF-8 locale is installed.
bool latin_is_upper(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

}  // namespace

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = i + static_cast<std::size_t>(extra) < text.size();
    for (int k = 1; ok && k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_upper(char32_t cp) {
  if (cp < 0x80) return cp >= U'A' && cp <= U'Z';
  if (const auto* ct = unicode_ctype()) {
    return ct->is(std::ctype_base::upper, static_cast<wchar_t>(cp));
  }
  return latin_is_upper(cp);
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
  if (const auto* ct = unicode_ctype()) {
    return static_cast<char32_t>(ct->tolower(static_cast<wchar_t>(cp)));
  }
  return latin_is_upper(cp) ? cp + 32 : cp;
}

std::string to_lower(std::string_view text) {
  std::u32string cps = decode(text);
  for (auto& cp : cps) cp = to_lower(cp);
  return encode(cps);
}

std::size_t length(std::string_view text) { return decode(text).size(); }

}  // namespace conjparse::utf8
