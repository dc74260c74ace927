#include "weylkern/scalar.hpp"

#include <cmath>

namespace weylkern {

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_digits10_(HighPrec::default_precision()) {
  HighPrec::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1);
}

PrecisionGuard::~PrecisionGuard() { HighPrec::default_precision(saved_digits10_); }

std::string format_rational(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return DomainError("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto parse_int = [&](const std::string& part) {
    if (part.empty()) throw bad();
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) throw bad();
    for (std::size_t i = start; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw bad();
    // Leading zeros would select octal in the GMP string constructor.
    std::size_t first = part.find_first_not_of('0', start);
    std::string digits = first == std::string::npos ? "0" : part.substr(first);
    return part[0] == '-' ? BigInt(-BigInt(digits)) : BigInt(digits);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt p = parse_int(s.substr(0, slash));
    BigInt q = parse_int(s.substr(slash + 1));
    if (q == 0) throw bad();
    return Rational(p, q);
  }
  // Decimal with optional fraction and exponent, read exactly.
  std::string mant = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    std::string ex = s.substr(e + 1);
    exponent = static_cast<long>(parse_int(ex));
  }
  std::string digits = mant;
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    std::string frac = mant.substr(dot + 1);
    digits = mant.substr(0, dot) + frac;
    exponent -= static_cast<long>(frac.size());
    if (digits == "-" || digits == "+" || digits.empty()) throw bad();
  }
  BigInt p = parse_int(digits);
  BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(p * scale) : Rational(p, scale);
}

Rational pochhammer(const Rational& a, int n) {
  Rational out = 1;
  for (int k = 0; k < n; ++k) out *= a + k;
  return out;
}

Rational power_of_two(int k) {
  Rational out = 1;
  for (int i = 0; i < std::abs(k); ++i) out *= 2;
  return k >= 0 ? out : Rational(1) / out;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite coordinate");
  int e = 0;
  double m = std::frexp(x, &e);
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  Rational out(mant);
  return out * power_of_two(e);
}

VectorQ rational_from_double(const Eigen::VectorXd& x) {
  VectorQ out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = rational_from_double(x[i]);
  return out;
}

}  // namespace weylkern
