#pragma once

#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "weylkern/linexp.hpp"
#include "weylkern/rootsys.hpp"

namespace weylkern {

enum class KernelType { Heat, Newton, Poisson, Green };

struct KernelKind {
  KernelType type = KernelType::Heat;
  double t = 0;  // heat only

  static KernelKind heat(double t) { return {KernelType::Heat, t}; }
  static KernelKind newton() { return {KernelType::Newton, 0}; }
  static KernelKind poisson() { return {KernelType::Poisson, 0}; }
  static KernelKind green() { return {KernelType::Green, 0}; }
  std::string name() const;
};

KernelKind parse_kernel_kind(std::string_view name, double t = 0);

enum class EvalMode { Direct, SingularLimit };
std::string to_string(EvalMode mode);

struct KernelValue {
  double value = 0;
  double max_term = 0;
  double cancellation = 1;  // |W| * max_term / |sum|
  EvalMode mode = EvalMode::Direct;
};

struct EvalOptions {
  double singular_threshold = 1e-8;
  double ambiguous_threshold = 1e-4;
  double cancellation_limit = 1e6;
  // Above this cancellation the direct sum is recomputed in extended precision.
  double escalation_limit = 1e3;
  // Nonzero: evaluate the direct sum at this many bits (oracle mode).
  unsigned precision_bits = 0;
};

// Surface area of the unit sphere in R^d.
template <typename Scalar>
Scalar unit_sphere_area(int d) {
  using std::pow;
  using std::sqrt;
  const Scalar pi = boost::math::constants::pi<Scalar>();
  // Gamma(d/2) from its recursion starting at Gamma(1) or Gamma(1/2).
  Scalar g = d % 2 == 0 ? Scalar(1) : Scalar(sqrt(pi));
  for (int k = d % 2 == 0 ? 2 : 1; k + 2 <= d; k += 2) g *= Scalar(k) / 2;
  return Scalar(2) * pow(pi, Scalar(d) / 2) / g;
}

// Fundamental solution of the Laplacian as a function of r = |X|, with Delta Phi = delta.
template <typename Scalar>
Scalar newton_profile(int d, const Scalar& r) {
  using std::log;
  using std::pow;
  if (d == 1) return r / 2;
  if (d == 2) return log(r) / (2 * boost::math::constants::pi<Scalar>());
  return pow(r, Scalar(2 - d)) / (Scalar(2 - d) * unit_sphere_area<Scalar>(d));
}

namespace detail {

// Euclidean kernel without domain checks; heat takes an extra log-scale shift.
template <typename Scalar>
Scalar euclidean_raw(const KernelKind& kind, int d, const Vector<Scalar>& x, const Vector<Scalar>& y) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  const Scalar pi = boost::math::constants::pi<Scalar>();
  switch (kind.type) {
    case KernelType::Heat: {
      Scalar t(kind.t);
      return exp(-(x - y).squaredNorm() / (4 * t)) / pow(4 * pi * t, Scalar(d) / 2);
    }
    case KernelType::Newton:
      return newton_profile<Scalar>(d, Scalar((x - y).norm()));
    case KernelType::Poisson:
      return (1 - x.squaredNorm()) / (unit_sphere_area<Scalar>(d) * pow(Scalar((x - y).norm()), Scalar(d)));
    case KernelType::Green: {
      Scalar r2 = x.squaredNorm() * y.squaredNorm() - 2 * x.dot(y) + 1;
      return newton_profile<Scalar>(d, Scalar((x - y).norm())) - newton_profile<Scalar>(d, Scalar(sqrt(r2)));
    }
  }
  return Scalar(0);
}

}  // namespace detail

double euclidean_kernel(const KernelKind& kind, int d, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Neumaier-compensated accumulator that also tracks the largest term.
template <typename Scalar>
struct CompensatedSum {
  Scalar sum{0};
  Scalar correction{0};
  Scalar max_term{0};

  void add(const Scalar& x) {
    using std::abs;
    Scalar t = sum + x;
    if (abs(sum) >= abs(x)) {
      correction += (sum - t) + x;
    } else {
      correction += (x - t) + sum;
    }
    sum = t;
    if (abs(x) > max_term) max_term = abs(x);
  }
  Scalar value() const { return sum + correction; }
};

// value = mantissa * exp(log_scale)
template <typename Scalar>
struct ScaledSum {
  Scalar mantissa{0};
  Scalar max_term{0};  // of the scaled terms
  Scalar log_scale{0};
  double cancellation(std::size_t terms) const {
    using std::abs;
    if (mantissa == 0) return std::numeric_limits<double>::infinity();
    return to_double<Scalar>(Scalar(terms) * max_term / abs(mantissa));
  }
};

// sum_w eps(w) K(X, wY), heat terms shifted by the smallest exponent.
template <typename Scalar>
ScaledSum<Scalar> alternating_sum(const RootSystem& rs, const KernelKind& kind, const Vector<Scalar>& x,
                                  const Vector<Scalar>& y) {
  using std::exp;
  using std::pow;
  const auto& group = enumerate_weyl(rs);
  const int d = rs.rank();
  ScaledSum<Scalar> out;
  CompensatedSum<Scalar> acc;
  if (kind.type == KernelType::Heat) {
    std::vector<Scalar> dist(group.size());
    Scalar m = (x - y).squaredNorm();
    for (std::size_t k = 0; k < group.size(); ++k) {
      dist[k] = (x - group[k].apply(y)).squaredNorm();
      if (dist[k] < m) m = dist[k];
    }
    const Scalar four_t = 4 * Scalar(kind.t);
    for (std::size_t k = 0; k < group.size(); ++k) {
      Scalar term = exp(-(dist[k] - m) / four_t);
      acc.add(group[k].sign() > 0 ? term : Scalar(-term));
    }
    const Scalar pi = boost::math::constants::pi<Scalar>();
    Scalar c = 1 / pow(4 * pi * Scalar(kind.t), Scalar(d) / 2);
    out.mantissa = acc.value() * c;
    out.max_term = acc.max_term * c;
    out.log_scale = -m / four_t;
    return out;
  }
  for (const auto& w : group) {
    Scalar term = detail::euclidean_raw<Scalar>(kind, d, x, w.apply(y));
    acc.add(w.sign() > 0 ? term : Scalar(-term));
  }
  out.mantissa = acc.value();
  out.max_term = acc.max_term;
  return out;
}

KernelValue kernel_w(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     const EvalOptions& options = {});

// Direct alternating sum at the given precision; no rerouting (test baseline).
HighPrec kernel_w_oracle(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, unsigned bits);

// sum_w eps(w) exp(<lambda, wY>) as mantissa * exp(max exponent).
template <typename Scalar>
ScaledSum<Scalar> exponential_sum(const RootSystem& rs, const Vector<Scalar>& lambda, const Vector<Scalar>& y) {
  using std::exp;
  const auto& group = enumerate_weyl(rs);
  std::vector<Scalar> a(group.size());
  Scalar m = lambda.dot(y);
  for (std::size_t k = 0; k < group.size(); ++k) {
    a[k] = lambda.dot(group[k].apply(y));
    if (a[k] > m) m = a[k];
  }
  CompensatedSum<Scalar> acc;
  for (std::size_t k = 0; k < group.size(); ++k) {
    Scalar term = exp(a[k] - m);
    acc.add(group[k].sign() > 0 ? term : Scalar(-term));
  }
  return {acc.value(), acc.max_term, m};
}

KernelValue spherical_psi(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                          const EvalOptions& options = {});

// log psi_lambda(Y) at the given precision, both arguments regular (direct formula).
HighPrec spherical_psi_log(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                           unsigned bits);

// Evaluation at exact faces through derivatives of the alternating sum. Coordinates are snapped onto
// the faces described by the vanishing sets.
double singular_spherical(const RootSystem& rs, const ChamberPoint<double>& lambda0, const ChamberPoint<double>& y0);

// Same, as mantissa * exp(log_scale) in extended precision.
ScaledSum<HighPrec> singular_spherical_scaled(const RootSystem& rs, const ChamberPoint<double>& lambda0,
                                              const ChamberPoint<double>& y0, unsigned bits = 256);

double heat_via_spherical(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t,
                          const EvalOptions& options = {});

// log p_t^W(X, Y) through the spherical function; stays finite where the value underflows.
HighPrec heat_log_via_spherical(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t,
                                const EvalOptions& options = {});

struct DetValue {
  double value = 0;
  // Hadamard ratio prod_i |row_i| / |det| of the kernel matrix.
  double cancellation = 1;
};

// det(g_t(x_i, y_j)) / (|W| pi(X) pi(Y)), rescaled to the intrinsic (n-1)-dimensional kernel.
DetValue det_heat_A(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t);

double curved_heat(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t);

// Orthogonal projection of x onto the intersection of the walls in `vanishing`.
Eigen::VectorXd snap_to_face(const RootSystem& rs, const Eigen::VectorXd& x, const std::vector<int>& vanishing);

// Lagrange extrapolation to h = 0 of samples f(h_i).
template <typename Scalar>
Scalar extrapolate_to_zero(const std::vector<double>& h, const std::vector<Scalar>& f) {
  Scalar out(0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    Scalar w(1);
    for (std::size_t j = 0; j < h.size(); ++j)
      if (j != i) w *= Scalar(h[j]) / (Scalar(h[j]) - Scalar(h[i]));
    out += w * f[i];
  }
  return out;
}

}  // namespace weylkern
