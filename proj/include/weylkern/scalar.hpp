#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace weylkern {

namespace mp = boost::multiprecision;

using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using BigInt = mp::number<mp::gmp_int, mp::et_off>;
// Runtime-precision binary float; precision is set per thread with PrecisionGuard.
using HighPrec = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorQ = Vector<Rational>;
using MatrixQ = Matrix<Rational>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// The alternating sum is indistinguishable from zero at working precision.
struct CancellationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Two independent computations of the same quantity disagree.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// Sets the thread-local default precision of HighPrec (in bits) for its lifetime.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits10_;
};

std::string format_rational(const Rational& q);
Rational parse_rational(std::string_view text);
Rational pochhammer(const Rational& a, int n);
Rational power_of_two(int k);

template <typename Scalar>
Scalar from_rational(const Rational& q) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return q;
  } else if constexpr (std::is_same_v<Scalar, double>) {
    return q.template convert_to<double>();
  } else {
    return Scalar(mp::numerator(q)) / Scalar(mp::denominator(q));
  }
}

template <typename Scalar>
Vector<Scalar> from_rational(const VectorQ& v) {
  Vector<Scalar> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = from_rational<Scalar>(v[i]);
  return out;
}

template <typename Scalar>
Matrix<Scalar> from_rational(const MatrixQ& m) {
  Matrix<Scalar> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = from_rational<Scalar>(m(i, j));
  return out;
}

template <typename Scalar>
double to_double(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

// Exact conversion of a finite double.
Rational rational_from_double(double x);
VectorQ rational_from_double(const Eigen::VectorXd& x);

}  // namespace weylkern
