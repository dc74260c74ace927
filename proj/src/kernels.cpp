#include "weylkern/kernels.hpp"

#include <cmath>

namespace weylkern {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_point(const RootSystem& rs, const Eigen::VectorXd& x, const char* what) {
  if (x.size() != rs.ambient_dim())
    throw DomainError(std::string(what) + " has dimension " + std::to_string(x.size()) + ", expected " +
                      std::to_string(rs.ambient_dim()));
  if (!x.allFinite()) throw DomainError(std::string(what) + " is not finite");
  if (!in_root_span(rs, x)) throw DomainError(std::string(what) + " is not in the span of the roots");
}

void check_not_in_orbit(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double scale = std::max({1.0, x.norm(), y.norm()});
  for (const auto& w : enumerate_weyl(rs))
    if ((x - w.apply(y)).norm() <= 1e-12 * scale) throw DomainError("X lies in the Weyl orbit of Y");
}

void check_domain(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  check_point(rs, x, "X");
  check_point(rs, y, "Y");
  switch (kind.type) {
    case KernelType::Heat:
      if (!(kind.t > 0) || !std::isfinite(kind.t)) throw DomainError("heat kernel requires t > 0");
      return;
    case KernelType::Newton:
      if (rs.rank() == 1 && rs.spec().family != Family::B)
        throw DomainError("the one-dimensional Newton kernel is only admitted for B1");
      break;
    case KernelType::Poisson:
      if (!(x.norm() < 1)) throw DomainError("Poisson kernel requires |X| < 1");
      if (std::abs(y.norm() - 1) > 1e-10) throw DomainError("Poisson kernel requires |Y| = 1");
      break;
    case KernelType::Green:
      if (x.norm() > 1 + 1e-12 || y.norm() > 1 + 1e-12) throw DomainError("Green kernel requires X, Y in the unit ball");
      break;
  }
  check_not_in_orbit(rs, x, y);
}

template <typename Scalar>
Vector<Scalar> to_scalar(const Eigen::VectorXd& x) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return x;
  } else {
    Vector<Scalar> out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Scalar(x[i]);
    return out;
  }
}

Vector<HighPrec> transpose_apply(const WeylElement& w, const Vector<HighPrec>& v) {
  Vector<HighPrec> out = w.numerator().transpose().cast<HighPrec>() * v;
  if (w.denominator() != 1) out /= HighPrec(w.denominator());
  return out;
}

unsigned bits_for(double cancellation, unsigned floor_bits) {
  if (!std::isfinite(cancellation)) return std::max(floor_bits, 1024u);
  return std::max(floor_bits, static_cast<unsigned>(std::log2(std::max(cancellation, 1.0))) + 128u);
}

// Direct alternating sum in extended precision, increasing precision until the result is trustworthy.
KernelValue direct_high_precision(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, unsigned bits, EvalMode mode) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    PrecisionGuard guard(bits);
    Vector<HighPrec> xh = to_scalar<HighPrec>(x), yh = to_scalar<HighPrec>(y);
    auto s = alternating_sum<HighPrec>(rs, kind, xh, yh);
    double canc = s.cancellation(rs.weyl_order());
    if (std::isfinite(canc) && std::log2(canc) < bits - 80.0) {
      HighPrec denom = HighPrec(static_cast<double>(rs.weyl_order())) * pi_full<HighPrec>(rs, xh) * pi_full<HighPrec>(rs, yh);
      HighPrec value = s.mantissa * exp(s.log_scale) / denom;
      return {value.convert_to<double>(), (s.max_term * exp(s.log_scale)).convert_to<double>(), canc, mode};
    }
    if (bits > 8192) break;
    bits = bits_for(canc, 2 * bits);
  }
  throw CancellationError("alternating sum is indistinguishable from zero at " + std::to_string(bits) + " bits");
}

KernelValue direct_double(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) {
  auto s = alternating_sum<double>(rs, kind, x, y);
  const double denom = static_cast<double>(rs.weyl_order()) * pi_full<double>(rs, x) * pi_full<double>(rs, y);
  const double scale = std::exp(s.log_scale);
  return {s.mantissa * scale / denom, s.max_term * scale, s.cancellation(rs.weyl_order()), EvalMode::Direct};
}

int near_vanishing(const RootSystem& rs, const Eigen::VectorXd& x) {
  const double nx = x.norm();
  if (nx == 0) return rs.gamma();
  int count = 0;
  for (int i = 0; i < rs.gamma(); ++i) {
    auto a = rs.positive_roots_d().row(i);
    count += std::abs(a.dot(x)) < 1e-2 * a.norm() * nx;
  }
  return count;
}

// Limit at singular arguments by evaluating at points pushed into the chamber and extrapolating.
KernelValue richardson_limit(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, const EvalOptions& opt) {
  Eigen::VectorXd xp = project_to_chamber(rs, x).point.coords;
  Eigen::VectorXd yp = project_to_chamber(rs, y).point.coords;
  Eigen::VectorXd v = from_rational<double>(rs.rho());
  v.normalize();
  const bool move_x = wall_distance(rs, xp) < opt.ambiguous_threshold;
  const bool move_y = wall_distance(rs, yp) < opt.ambiguous_threshold;
  // Steps are measured against the nearest singularity, which for chamber points is at X = Y.
  double scale = std::max({xp.norm(), yp.norm(), 1e-300});
  if (kind.type != KernelType::Heat && (xp - yp).norm() > 0) scale = std::min(scale, (xp - yp).norm());
  const std::vector<double> steps{1e-2, 1e-3, 1e-4};
  unsigned bits = 128 + 14 * static_cast<unsigned>(near_vanishing(rs, xp) + near_vanishing(rs, yp)) + 14;
  for (int attempt = 0; attempt < 4; ++attempt) {
    PrecisionGuard guard(bits);
    std::vector<HighPrec> values;
    double worst = 1;
    double max_term = 0;
    for (double h : steps) {
      Vector<HighPrec> xh = to_scalar<HighPrec>(xp), yh = to_scalar<HighPrec>(yp);
      Vector<HighPrec> vh = to_scalar<HighPrec>(v);
      if (move_x) xh += HighPrec(h * scale) * vh;
      if (move_y) yh += HighPrec(h * scale) * vh;
      auto s = alternating_sum<HighPrec>(rs, kind, xh, yh);
      worst = std::max(worst, s.cancellation(rs.weyl_order()));
      max_term = (s.max_term * exp(s.log_scale)).convert_to<double>();
      HighPrec denom = HighPrec(static_cast<double>(rs.weyl_order())) * pi_full<HighPrec>(rs, xh) *
                       pi_full<HighPrec>(rs, yh);
      values.push_back(s.mantissa * exp(s.log_scale) / denom);
    }
    if (std::isfinite(worst) && std::log2(worst) < bits - 80.0) {
      HighPrec limit = extrapolate_to_zero(steps, values);
      return {limit.convert_to<double>(), max_term, worst, EvalMode::SingularLimit};
    }
    bits = bits_for(worst, 2 * bits);
  }
  throw CancellationError("singular limit could not be resolved");
}

// psi = mantissa * exp(log_scale), together with the diagnostics of the sum that produced it.
struct PsiResult {
  HighPrec mantissa;
  HighPrec log_scale;
  KernelValue diag;
};

PsiResult psi_high_precision(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                             unsigned bits, EvalMode mode) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    PrecisionGuard guard(bits);
    Vector<HighPrec> lh = to_scalar<HighPrec>(lambda), yh = to_scalar<HighPrec>(y);
    auto s = exponential_sum<HighPrec>(rs, lh, yh);
    double canc = s.cancellation(rs.weyl_order());
    if (std::isfinite(canc) && std::log2(canc) < bits - 80.0) {
      HighPrec pref = from_rational<HighPrec>(pi_full<Rational>(rs, rs.rho())) /
                      (from_rational<HighPrec>(power_of_two(rs.gamma())) * pi_full<HighPrec>(rs, lh) *
                       pi_full<HighPrec>(rs, yh));
      PsiResult r{s.mantissa * pref, s.log_scale, {}};
      r.diag = {0, (s.max_term * exp(s.log_scale)).convert_to<double>(), canc, mode};
      return r;
    }
    bits = bits_for(canc, 2 * bits);
  }
  throw CancellationError("spherical function sum is indistinguishable from zero");
}

PsiResult psi_singular(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                       double threshold) {
  auto lp = project_to_chamber(rs, lambda).point;
  auto yp = project_to_chamber(rs, y).point;
  lp.vanishing = vanishing_roots(rs, lp.coords, threshold);
  yp.vanishing = vanishing_roots(rs, yp.coords, threshold);
  auto s = singular_spherical_scaled(rs, lp, yp);
  PrecisionGuard guard(256);
  PsiResult r{s.mantissa, s.log_scale, {}};
  r.diag = {0, (s.max_term * exp(s.log_scale)).convert_to<double>(), s.cancellation(rs.weyl_order()),
            EvalMode::SingularLimit};
  return r;
}

PsiResult psi_any(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                  const EvalOptions& opt) {
  if (lambda.isZero(0) || y.isZero(0)) {
    PrecisionGuard guard(128);
    return {HighPrec(1), HighPrec(0), {1, 1, 1, EvalMode::Direct}};
  }
  const double s = std::min(wall_distance(rs, lambda), wall_distance(rs, y));
  if (s < opt.singular_threshold) return psi_singular(rs, lambda, y, opt.singular_threshold);
  if (opt.precision_bits) return psi_high_precision(rs, lambda, y, opt.precision_bits, EvalMode::Direct);
  auto d = exponential_sum<double>(rs, lambda, y);
  const double canc = d.cancellation(rs.weyl_order());
  if (canc > opt.cancellation_limit && s < opt.ambiguous_threshold)
    return psi_high_precision(rs, lambda, y, bits_for(canc, 128), EvalMode::SingularLimit);
  if (!(canc <= opt.escalation_limit)) return psi_high_precision(rs, lambda, y, bits_for(canc, 128), EvalMode::Direct);
  const double pref = pi_full<Rational>(rs, rs.rho()).convert_to<double>() /
                      (std::ldexp(1.0, rs.gamma()) * pi_full<double>(rs, lambda) * pi_full<double>(rs, y));
  PrecisionGuard guard(128);
  PsiResult r{HighPrec(d.mantissa * pref), HighPrec(d.log_scale), {}};
  r.diag = {0, d.max_term * std::exp(d.log_scale), canc, EvalMode::Direct};
  return r;
}

}  // namespace

std::string KernelKind::name() const {
  switch (type) {
    case KernelType::Heat: return "heat";
    case KernelType::Newton: return "newton";
    case KernelType::Poisson: return "poisson";
    case KernelType::Green: return "green";
  }
  return "";
}

KernelKind parse_kernel_kind(std::string_view name, double t) {
  if (name == "heat") return KernelKind::heat(t);
  if (name == "newton") return KernelKind::newton();
  if (name == "poisson") return KernelKind::poisson();
  if (name == "green") return KernelKind::green();
  throw DomainError("unknown kernel '" + std::string(name) + "'");
}

std::string to_string(EvalMode mode) { return mode == EvalMode::Direct ? "direct" : "singular-limit"; }

double euclidean_kernel(const KernelKind& kind, int d, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (d < 1) throw DomainError("dimension must be positive");
  if (x.size() != y.size()) throw DomainError("dimension mismatch");
  switch (kind.type) {
    case KernelType::Heat:
      if (!(kind.t > 0)) throw DomainError("heat kernel requires t > 0");
      break;
    case KernelType::Newton:
      if (x == y) throw DomainError("coincident points");
      break;
    case KernelType::Poisson:
      if (x == y) throw DomainError("coincident points");
      if (std::abs(y.norm() - 1) > 1e-12) throw DomainError("Poisson kernel requires |Y| = 1");
      break;
    case KernelType::Green:
      if (x == y) throw DomainError("coincident points");
      if (x.norm() > 1 || y.norm() > 1) throw DomainError("Green kernel requires X, Y in the closed unit ball");
      break;
  }
  return detail::euclidean_raw<double>(kind, d, x, y);
}

KernelValue kernel_w(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     const EvalOptions& opt) {
  check_domain(rs, kind, x, y);
  // Requested precision applies to the direct sum; singular points always take the limit route.
  const double s = std::min(wall_distance(rs, x), wall_distance(rs, y));
  if (s >= opt.singular_threshold && opt.precision_bits)
    return direct_high_precision(rs, kind, x, y, opt.precision_bits, EvalMode::Direct);
  if (s < opt.singular_threshold) {
    if (kind.type == KernelType::Heat) {
      KernelValue v;
      v.value = heat_via_spherical(rs, x, y, kind.t, opt);
      auto psi = psi_singular(rs, x, y / (2 * kind.t), opt.singular_threshold);
      v.max_term = psi.diag.max_term;
      v.cancellation = psi.diag.cancellation;
      v.mode = EvalMode::SingularLimit;
      return v;
    }
    return richardson_limit(rs, kind, x, y, opt);
  }
  KernelValue v = direct_double(rs, kind, x, y);
  if (v.cancellation > opt.cancellation_limit && s < opt.ambiguous_threshold) {
    if (kind.type == KernelType::Heat)
      return direct_high_precision(rs, kind, x, y, bits_for(v.cancellation, 128), EvalMode::SingularLimit);
    return richardson_limit(rs, kind, x, y, opt);
  }
  if (!(v.cancellation <= opt.escalation_limit))
    return direct_high_precision(rs, kind, x, y, bits_for(v.cancellation, 128), EvalMode::Direct);
  return v;
}

HighPrec kernel_w_oracle(const RootSystem& rs, const KernelKind& kind, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, unsigned bits) {
  check_domain(rs, kind, x, y);
  PrecisionGuard guard(bits);
  Vector<HighPrec> xh = to_scalar<HighPrec>(x), yh = to_scalar<HighPrec>(y);
  auto s = alternating_sum<HighPrec>(rs, kind, xh, yh);
  HighPrec denom = HighPrec(static_cast<double>(rs.weyl_order())) * pi_full<HighPrec>(rs, xh) * pi_full<HighPrec>(rs, yh);
  return s.mantissa * exp(s.log_scale) / denom;
}

KernelValue spherical_psi(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                          const EvalOptions& opt) {
  check_point(rs, lambda, "lambda");
  check_point(rs, y, "Y");
  auto r = psi_any(rs, lambda, y, opt);
  PrecisionGuard guard(128);
  KernelValue v = r.diag;
  v.value = (r.mantissa * exp(r.log_scale)).convert_to<double>();
  return v;
}

HighPrec spherical_psi_log(const RootSystem& rs, const Eigen::VectorXd& lambda, const Eigen::VectorXd& y,
                           unsigned bits) {
  check_point(rs, lambda, "lambda");
  check_point(rs, y, "Y");
  auto r = psi_high_precision(rs, lambda, y, bits, EvalMode::Direct);
  PrecisionGuard guard(bits);
  return log(r.mantissa) + r.log_scale;
}

Eigen::VectorXd snap_to_face(const RootSystem& rs, const Eigen::VectorXd& x, const std::vector<int>& vanishing) {
  if (vanishing.empty()) return x;
  Eigen::MatrixXd a(rs.ambient_dim(), static_cast<Eigen::Index>(vanishing.size()));
  for (std::size_t k = 0; k < vanishing.size(); ++k)
    a.col(static_cast<Eigen::Index>(k)) = rs.positive_roots_d().row(vanishing[k]).transpose();
  Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(x);
  return x - a * c;
}

ScaledSum<HighPrec> singular_spherical_scaled(const RootSystem& rs, const ChamberPoint<double>& lambda0,
                                              const ChamberPoint<double>& y0, unsigned bits) {
  Eigen::VectorXd lam = snap_to_face(rs, lambda0.coords, lambda0.vanishing);
  Eigen::VectorXd yy = snap_to_face(rs, y0.coords, y0.vanishing);
  if (static_cast<int>(lambda0.vanishing.size()) == rs.gamma() || static_cast<int>(y0.vanishing.size()) == rs.gamma() ||
      lam.isZero(0) || yy.isZero(0)) {
    PrecisionGuard guard(bits);
    return {HighPrec(1), HighPrec(1), HighPrec(0)};
  }
  RootSubset sl = make_root_subset(rs, lambda0.vanishing);
  RootSubset sy = make_root_subset(rs, y0.vanishing);
  if (!sl.pi_closure || !sy.pi_closure) throw DomainError("vanishing root sets do not describe chamber faces");
  const Rational cl = c_constant(rs, sl);
  const Rational cy = c_constant(rs, sy);
  const Rational pi_rho = pi_full<Rational>(rs, rs.rho());
  const auto& group = enumerate_weyl(rs);

  for (int attempt = 0; attempt < 4; ++attempt) {
    PrecisionGuard guard(bits);
    Vector<HighPrec> lh = to_scalar<HighPrec>(lam), yh = to_scalar<HighPrec>(yy);
    std::vector<Vector<HighPrec>> directions;
    for (int i : sy.indices) directions.push_back(from_rational<HighPrec>(rs.root(i)));
    std::vector<Vector<HighPrec>> lroots;
    for (int i : sl.indices) lroots.push_back(from_rational<HighPrec>(rs.root(i)));

    HighPrec m = lh.dot(yh);
    std::vector<HighPrec> exps(group.size());
    for (std::size_t k = 0; k < group.size(); ++k) {
      exps[k] = lh.dot(group[k].apply(yh));
      if (exps[k] > m) m = exps[k];
    }
    CompensatedSum<HighPrec> acc;
    for (std::size_t k = 0; k < group.size(); ++k) {
      LinExpPoly<HighPrec> p(rs.ambient_dim());
      LinExpTerm<HighPrec> term{HighPrec(1), {}, transpose_apply(group[k], lh)};
      for (const auto& a : lroots) term.factors.push_back(transpose_apply(group[k], a));
      p.add(std::move(term));
      // Shift the exponential so that the largest term is O(1).
      HighPrec v = p.derivative_at(directions, yh) * exp(-m);
      acc.add(group[k].sign() > 0 ? v : HighPrec(-v));
    }
    HighPrec pl = pi_over<HighPrec>(rs, complement(rs, sl), lh);
    HighPrec py = pi_over<HighPrec>(rs, complement(rs, sy), yh);
    HighPrec pref = from_rational<HighPrec>(pi_rho / (power_of_two(rs.gamma()) * cl * cy)) / (pl * py);
    ScaledSum<HighPrec> out{acc.value() * pref, acc.max_term * abs(pref), m};
    double canc = out.cancellation(group.size());
    if (std::isfinite(canc) && std::log2(canc) < bits - 80.0) return out;
    bits = bits_for(canc, 2 * bits);
  }
  throw CancellationError("singular spherical sum is indistinguishable from zero");
}

double singular_spherical(const RootSystem& rs, const ChamberPoint<double>& lambda0, const ChamberPoint<double>& y0) {
  auto s = singular_spherical_scaled(rs, lambda0, y0);
  PrecisionGuard guard(256);
  return (s.mantissa * exp(s.log_scale)).convert_to<double>();
}

HighPrec heat_log_via_spherical(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t,
                                const EvalOptions& opt) {
  check_point(rs, x, "X");
  check_point(rs, y, "Y");
  if (!(t > 0)) throw DomainError("heat kernel requires t > 0");
  auto psi = psi_any(rs, x, y / (2 * t), opt);
  const int d = rs.rank();
  PrecisionGuard guard(128);
  const double pi_rho = pi_full<Rational>(rs, rs.rho()).convert_to<double>();
  const double log_pref =
      -std::log(static_cast<double>(rs.weyl_order()) * std::ldexp(1.0, d) * std::pow(kPi, d / 2.0) * pi_rho);
  if (!(psi.mantissa > 0)) throw CancellationError("spherical function is not positive at working precision");
  return HighPrec(log_pref) + log(psi.mantissa) + psi.log_scale -
         HighPrec((x.squaredNorm() + y.squaredNorm()) / (4 * t)) - HighPrec((d / 2.0 + rs.gamma()) * std::log(t));
}

double heat_via_spherical(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t,
                          const EvalOptions& opt) {
  HighPrec l = heat_log_via_spherical(rs, x, y, t, opt);
  PrecisionGuard guard(128);
  return exp(l).convert_to<double>();
}

DetValue det_heat_A(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t) {
  if (rs.spec().family != Family::A) throw DomainError("the determinant formula requires an A-family system");
  if (!(t > 0)) throw DomainError("heat kernel requires t > 0");
  const int n = rs.ambient_dim();
  if (x.size() != n || y.size() != n) throw DomainError("dimension mismatch");
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = std::exp(-(x[i] - y[j]) * (x[i] - y[j]) / (4 * t)) / std::sqrt(4 * kPi * t);
  const double det = g.partialPivLu().determinant();
  double hadamard = 1;
  for (int i = 0; i < n; ++i) hadamard *= g.row(i).norm();
  const double shift = x.mean() - y.mean();
  const double intrinsic = std::sqrt(4 * kPi * t) * std::exp(n * shift * shift / (4 * t));
  DetValue out;
  out.value = det * intrinsic /
              (static_cast<double>(rs.weyl_order()) * pi_full<double>(rs, x) * pi_full<double>(rs, y));
  out.cancellation = det == 0 ? std::numeric_limits<double>::infinity() : hadamard / std::abs(det);
  return out;
}

double curved_heat(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t) {
  check_point(rs, x, "X");
  check_point(rs, y, "Y");
  if (!(t > 0)) throw DomainError("heat kernel requires t > 0");
  if (wall_distance(rs, x) < 1e-12 || wall_distance(rs, y) < 1e-12)
    throw DomainError("curved heat kernel requires regular arguments");
  auto s = alternating_sum<double>(rs, KernelKind::heat(t), x, y);
  double sinh_x = 1, sinh_y = 1;
  for (int i = 0; i < rs.gamma(); ++i) {
    sinh_x *= std::sinh(rs.positive_roots_d().row(i).dot(x));
    sinh_y *= std::sinh(rs.positive_roots_d().row(i).dot(y));
  }
  const double rho2 = from_rational<double>(rs.rho()).squaredNorm();
  return std::exp(-rho2 * t + s.log_scale) * s.mantissa / (sinh_x * sinh_y);
}

}  // namespace weylkern
