#ifndef MINER_UNICODE_HPP
#define MINER_UNICODE_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace miner {

/// Minimal UTF-8 machinery for tokenization. Malformed bytes decode to
/// U+FFFD one byte at a time so offsets stay consistent with the input.
struct Utf8Decoder {
  std::string_view text;
  std::size_t pos = 0;

  explicit Utf8Decoder(std::string_view t) : text(t) {}

  bool done() const { return pos >= text.size(); }

  /// Decodes the codepoint at `pos`, advancing `pos` past it.
  char32_t next() {
    auto byte = [&](std::size_t i) -> unsigned {
      return static_cast<unsigned char>(text[i]);
    };
    unsigned b0 = byte(pos);
    if (b0 < 0x80) {
      pos += 1;
      return b0;
    }
    int len = 0;
    char32_t cp = 0;
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
      pos += 1;
      return 0xFFFD;
    }
    if (pos + len > text.size()) {
      pos += 1;
      return 0xFFFD;
    }
    for (int i = 1; i < len; ++i) {
      unsigned bi = byte(pos + i);
      if ((bi & 0xC0) != 0x80) {
        pos += 1;
        return 0xFFFD;
      }
      cp = (cp << 6) | (bi & 0x3F);
    }
    pos += len;
    return cp;
  }
};

inline void utf8_append(std::string& out, char32_t cp) {
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

inline std::size_t codepoint_count(std::string_view s) {
  Utf8Decoder dec(s);
  std::size_t n = 0;
  while (!dec.done()) {
    dec.next();
    ++n;
  }
  return n;
}

constexpr char32_t kDanda = 0x0964;        // Bangla/Devanagari sentence mark
constexpr char32_t kDoubleDanda = 0x0965;

inline bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

inline bool is_digit_cp(char32_t cp) {
  return is_ascii_digit(cp) || (cp >= 0x09E6 && cp <= 0x09EF);  // Bangla digits
}

/// Case folding for the cased scripts we expect in transcripts: ASCII and
/// Latin-1. Everything else (Bangla in particular) passes through.
inline char32_t fold_case(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

// Punctuation blocks that must break tokens even though they sit above the
// Latin-1 range.
inline bool is_punct_block(char32_t cp) {
  return (cp == kDanda || cp == kDoubleDanda) ||
         (cp >= 0x2000 && cp <= 0x206F) ||   // general punctuation
         (cp >= 0x2E00 && cp <= 0x2E7F) ||   // supplemental punctuation
         (cp >= 0x3000 && cp <= 0x303F) ||   // CJK symbols
         (cp >= 0xFE50 && cp <= 0xFE6F) ||   // small form variants
         (cp >= 0xFF01 && cp <= 0xFF0F) ||   // fullwidth punctuation
         (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65) ||
         cp == 0x00D7 || cp == 0x00F7;
}

/// True for codepoints that belong inside a token: ASCII alphanumerics and
/// any non-punctuation codepoint above Latin-1 punctuation (letters, marks
/// and digits of other scripts, combining vowel signs included).
inline bool is_word_cp(char32_t cp) {
  if (cp < 0x80)
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 'A' && cp <= 'Z');
  if (cp < 0xC0) return false;  // Latin-1 punctuation and symbols
  return !is_punct_block(cp);
}

inline bool is_sentence_terminator(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == kDanda;
}

inline bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x3000;
}

}  // namespace miner

#endif  // MINER_UNICODE_HPP
