#ifndef MINER_UTIL_HPP
#define MINER_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace miner {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

/// Fixed-point decimal formatting with round-half-up (ties toward +inf),
/// locale-independent. Used everywhere a displayed number must be
/// byte-reproducible: centrality tables (4 d.p.), average degree (2 d.p.),
/// SVG coordinates.
inline std::string format_fixed(double value, int decimals) {
  double scale = std::pow(10.0, decimals);
  long long scaled = static_cast<long long>(std::floor(value * scale + 0.5));
  bool neg = scaled < 0;
  unsigned long long mag = neg ? 0ull - static_cast<unsigned long long>(scaled)
                               : static_cast<unsigned long long>(scaled);
  std::string digits = std::to_string(mag);
  if (static_cast<int>(digits.size()) <= decimals)
    digits.insert(0, decimals + 1 - digits.size(), '0');
  std::string out;
  if (neg) out.push_back('-');
  out.append(digits, 0, digits.size() - decimals);
  if (decimals > 0) {
    out.push_back('.');
    out.append(digits, digits.size() - decimals, decimals);
  }
  return out;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace miner

#endif  // MINER_UTIL_HPP
