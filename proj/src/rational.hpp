#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace ct {

// Exact rationals. mpq_class keeps gcd(|num|, den) = 1 and den > 0 after
// every arithmetic operation, which is exactly the invariant we need.
using Rational = mpq_class;

inline bool rat_is_zero(const Rational& q) { return sgn(q) == 0; }

inline std::string rat_str(const Rational& q) { return q.get_str(); }

// Accepts "7", "-7", "3/2", "-3/2". Returns nullopt on malformed input or
// zero denominator.
inline std::optional<Rational> rat_parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return std::nullopt;
  bool slash_seen = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] == '/') {
      if (slash_seen || i == start || i + 1 == s.size()) return std::nullopt;
      slash_seen = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

}  // namespace ct
