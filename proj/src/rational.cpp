#include "ucc/rational.hpp"

#include <stdexcept>

namespace ucc {

Rat parse_rat(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  auto parse_int = [](std::string_view t) -> Int {
    if (t.empty()) throw std::invalid_argument("empty integer in rational");
    size_t i = 0;
    bool neg = false;
    if (t[0] == '+' || t[0] == '-') {
      neg = t[0] == '-';
      i = 1;
    }
    if (i == t.size()) throw std::invalid_argument("sign without digits");
    Int v = 0;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9')
        throw std::invalid_argument("bad digit in rational: " + std::string(t));
      v = v * 10 + (t[i] - '0');
    }
    return neg ? Int(-v) : v;
  };
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rat(num, den);
}

std::string rat_str(const Rat& r) {
  Int num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rat_double(const Rat& r) { return static_cast<double>(r); }

Int rat_floor(const Rat& r) {
  Int num = numerator(r), den = denominator(r);
  Int q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

Rat pow2_neg(int i) {
  Int den = Int(1) << i;
  return Rat(1, den);
}

}  // namespace ucc
