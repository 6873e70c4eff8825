#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace hopfcalc {

// Exact scalar type. mpq_class keeps values canonical (gcd(num,den)=1,
// den>0), which is exactly the invariant we need; zero is 0/1.
using Rat = mpq_class;

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

// mpq_class(num, den) does not canonicalize; always build fractions here.
inline Rat frac(long num, long den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Serializes as "num/den", "num" when den == 1.
inline std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  if (q.get_den() <= 0) throw std::invalid_argument("bad rational literal: " + s);
  return q;
}

}  // namespace hopfcalc
