#include "twelect/text.hpp"

#include <cstdint>

namespace twelect {
namespace {

// Decodes one UTF-8 code point starting at `i`; returns its value and
// advances `i`. Malformed bytes decode as U+FFFD over a single byte so the
// tokenizer never stalls.
uint32_t decode_utf8(std::string_view s, size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

void encode_utf8(uint32_t cp, std::string& out) {
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

uint32_t lower_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  // Latin-1: À..Þ -> à..þ except × (U+00D7).
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  // Latin Extended-A is mostly case-paired even/odd.
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return ((cp - 1) | 1) + 1;  // odd upper, even lower
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;  // Ÿ -> ÿ
  if (cp >= 0x179 && cp <= 0x17E) return ((cp - 1) | 1) + 1;
  return cp;
}

bool is_letter_or_digit(uint32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9')) return true;
  if (cp == '_') return true;  // handles and hashtags allow it
  if (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) return true;  // Latin letters
  if (cp == 0xAA || cp == 0xBA) return true;  // ª º ordinal indicators
  return false;
}

bool url_starts_at(std::string_view s, size_t i) {
  const auto starts = [&](std::string_view p) {
    if (i + p.size() > s.size()) return false;
    for (size_t k = 0; k < p.size(); ++k) {
      char c = s[i + k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
      if (c != p[k]) return false;
    }
    return true;
  };
  return starts("http://") || starts("https://") || starts("www.");
}

bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string lower_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    encode_utf8(lower_cp(decode_utf8(text, i)), out);
  }
  return out;
}

std::string strip_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (url_starts_at(text, i)) {
      while (i < text.size() && !is_space_byte(text[i])) ++i;
      continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  const std::string cleaned = lower_utf8(strip_urls(text));
  std::vector<std::string> tokens;
  std::string current;
  bool prefix_pending = false;  // current holds only '#' or '@'

  const auto flush = [&] {
    // A bare '#'/'@' with no word attached is dropped.
    if (!current.empty() && !prefix_pending) tokens.push_back(current);
    current.clear();
    prefix_pending = false;
  };

  size_t i = 0;
  while (i < cleaned.size()) {
    const uint32_t cp = decode_utf8(std::string_view(cleaned), i);
    if (cp == '#' || cp == '@') {
      flush();
      current.push_back(static_cast<char>(cp));
      prefix_pending = true;
    } else if (is_letter_or_digit(cp)) {
      encode_utf8(cp, current);
      prefix_pending = false;
    } else {
      flush();  // punctuation, whitespace, emoji, ... all separate words
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize_ngrams(std::string_view text, int n) {
  std::vector<std::string> tokens = tokenize(text);
  if (n <= 1) return tokens;
  const size_t base = tokens.size();
  for (int order = 2; order <= n; ++order) {
    if (base < static_cast<size_t>(order)) break;
    for (size_t i = 0; i + order <= base; ++i) {
      std::string gram = tokens[i];
      for (int k = 1; k < order; ++k) {
        gram.push_back(' ');
        gram += tokens[i + k];
      }
      tokens.push_back(std::move(gram));
    }
  }
  return tokens;
}

}  // namespace twelect
