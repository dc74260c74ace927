#include "weylkern/dyson.hpp"

#include <cmath>

#include "weylkern/quadrature.hpp"

namespace weylkern {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_chamber_point(const RootSystem& rs, const Eigen::VectorXd& p, const char* what) {
  if (p.size() != rs.ambient_dim() || !in_root_span(rs, p))
    throw DomainError(std::string(what) + " is not in the span of the roots");
  if (!p.allFinite()) throw DomainError(std::string(what) + " has non-finite coordinates");
  if (!in_closed_chamber(rs, p, 1e-10)) throw DomainError(std::string(what) + " is not in the closed chamber");
}

// A root vanishes to working precision.
bool on_wall(const RootSystem& rs, const Eigen::VectorXd& p) { return wall_distance(rs, p) <= 1e-15; }

KernelKind flat_kind(const DysonKernelKind& kind) {
  switch (kind.type) {
    case DysonKernelType::Transition:
    case DysonKernelType::Killed:
      return KernelKind::heat(kind.t);
    case DysonKernelType::Poisson:
      return KernelKind::poisson();
    case DysonKernelType::Newton:
      return KernelKind::newton();
  }
  return {};
}

double pi_d(const RootSystem& rs, const Eigen::VectorXd& p) { return pi_full<double>(rs, p); }

}  // namespace

std::string DysonKernelKind::name() const {
  switch (type) {
    case DysonKernelType::Transition:
      return "transition";
    case DysonKernelType::Killed:
      return "killed";
    case DysonKernelType::Poisson:
      return "poisson";
    case DysonKernelType::Newton:
      return "newton";
  }
  return {};
}

DysonKernelKind parse_dyson_kind(std::string_view name, double t) {
  DysonKernelKind k;
  if (name == "transition") {
    k = DysonKernelKind::transition(t);
  } else if (name == "killed") {
    k = DysonKernelKind::killed(t);
  } else if (name == "poisson") {
    return DysonKernelKind::poisson();
  } else if (name == "newton") {
    return DysonKernelKind::newton();
  } else {
    throw DomainError("unknown Dyson kernel '" + std::string(name) + "'");
  }
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("t must be positive");
  return k;
}

double killed_heat(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t,
                   const EvalOptions& opt) {
  check_chamber_point(rs, x, "X");
  check_chamber_point(rs, y, "Y");
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("t must be positive");
  if (on_wall(rs, x) || on_wall(rs, y)) return 0;
  auto s = alternating_sum<double>(rs, KernelKind::heat(t), x, y);
  if (s.cancellation(rs.weyl_order()) <= opt.escalation_limit) return s.mantissa * std::exp(s.log_scale);
  return static_cast<double>(rs.weyl_order()) * pi_d(rs, x) * pi_d(rs, y) *
         kernel_w(rs, KernelKind::heat(t), x, y, opt).value;
}

double killed_heat_det(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t) {
  check_chamber_point(rs, x, "X");
  check_chamber_point(rs, y, "Y");
  if (on_wall(rs, x) || on_wall(rs, y)) return 0;
  return static_cast<double>(rs.weyl_order()) * pi_d(rs, x) * pi_d(rs, y) * det_heat_A(rs, x, y, t).value;
}

double dyson_kernel(const RootSystem& rs, const DysonKernelKind& kind, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y, const EvalOptions& opt) {
  if (kind.type == DysonKernelType::Killed) return killed_heat(rs, x, y, kind.t, opt);
  check_chamber_point(rs, x, "X");
  check_chamber_point(rs, y, "Y");
  const KernelKind flat = flat_kind(kind);
  if (flat.type == KernelType::Heat && (!(flat.t > 0) || !std::isfinite(flat.t))) throw DomainError("t must be positive");
  if (on_wall(rs, y)) {
    // Domain checks still apply at boundary points.
    if (flat.type == KernelType::Poisson && (x.norm() >= 1 || std::abs(y.norm() - 1) > 1e-10))
      throw DomainError("Poisson kernel requires |X| < 1 and |Y| = 1");
    return 0;
  }
  if (wall_distance(rs, x) >= opt.ambiguous_threshold) {
    if (flat.type == KernelType::Poisson && (x.norm() >= 1 || std::abs(y.norm() - 1) > 1e-10))
      throw DomainError("Poisson kernel requires |X| < 1 and |Y| = 1");
    if (flat.type != KernelType::Heat && (x - y).norm() == 0) throw DomainError("X coincides with Y");
    auto s = alternating_sum<double>(rs, flat, x, y);
    if (s.cancellation(rs.weyl_order()) <= opt.escalation_limit)
      return pi_d(rs, y) / pi_d(rs, x) * s.mantissa * std::exp(s.log_scale);
  }
  const double py = pi_d(rs, y);
  return static_cast<double>(rs.weyl_order()) * py * py * kernel_w(rs, flat, x, y, opt).value;
}

double dyson_ratio(const RootSystem& rs, const DysonKernelKind& kind, const Eigen::VectorXd& x,
                   const ChamberPoint<double>& y0, const EvalOptions& opt) {
  check_chamber_point(rs, y0.coords, "Y0");
  const double w = static_cast<double>(rs.weyl_order());
  switch (kind.type) {
    case DysonKernelType::Transition:
      return w * kernel_w(rs, flat_kind(kind), x, y0.coords, opt).value;
    case DysonKernelType::Killed:
      throw UnsupportedError("the killed density has no ratio form");
    default: {
      const double pp = pi_over<double>(rs, complement(rs, make_root_subset(rs, y0.vanishing)), y0.coords);
      return w * pp * pp * kernel_w(rs, flat_kind(kind), x, y0.coords, opt).value;
    }
  }
}

AsymptoticForm dyson_asym_ratio(const RootSystem& rs, KernelType kind, const ChamberPoint<double>& y0) {
  AsymptoticForm f;
  if (kind == KernelType::Poisson) {
    f = poisson_asym(rs, y0);
  } else if (kind == KernelType::Newton) {
    f = newton_asym(rs, y0);
  } else {
    throw UnsupportedError("ratio asymptotics as X -> Y0 exist for the Poisson and Newton kernels");
  }
  const double pp = pi_over<double>(rs, complement(rs, make_root_subset(rs, y0.vanishing)), y0.coords);
  f.constant *= static_cast<double>(rs.weyl_order()) * pp * pp;
  f.description = "conditioned process: " + f.description;
  return f;
}

AsymptoticForm dyson_heat_ratio(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y) {
  AsymptoticForm f = heat_small_t(rs, x, y);
  f.constant *= static_cast<double>(rs.weyl_order());
  f.description = "conditioned process: " + f.description;
  return f;
}

RatioTest dyson_ratio_test(const RootSystem& rs, KernelType kind, const ChamberPoint<double>& y0,
                           const Eigen::VectorXd& x_ref, const std::vector<double>& s, double tol) {
  const AsymptoticForm f = dyson_asym_ratio(rs, kind, y0);
  const DysonKernelKind dk = kind == KernelType::Poisson ? DysonKernelKind::poisson() : DysonKernelKind::newton();
  return ratio_test(
      [&](double h) {
        const Eigen::VectorXd x = y0.coords + h * (x_ref - y0.coords);
        const double weight = kind == KernelType::Poisson ? 1 - x.squaredNorm() : 1.0;
        return dyson_ratio(rs, dk, x, y0) / (weight * f.value((x - y0.coords).norm()));
      },
      s, tol);
}

RatioTest dyson_heat_ratio_test(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y,
                                const std::vector<double>& t, double tol) {
  const AsymptoticForm f = dyson_heat_ratio(rs, x, y);
  const double log_w = std::log(static_cast<double>(rs.weyl_order()));
  return ratio_test(
      [&](double s) {
        const HighPrec lg = heat_log_via_spherical(rs, x.coords, y.coords, s);
        PrecisionGuard guard(128);
        return std::exp((lg + HighPrec(log_w) - HighPrec(f.log_abs(s))).convert_to<double>());
      },
      t, tol);
}

TimeIntegral newton_time_integral(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                  double t_max) {
  check_chamber_point(rs, x, "X");
  check_chamber_point(rs, y, "Y");
  const int d = rs.rank();
  if (d < 3) throw UnsupportedError("the time integral of the transition density diverges in rank <= 2");
  if (!(t_max > 0) || !std::isfinite(t_max)) throw DomainError("T_max must be positive");
  const double dist = (x - y).norm();
  if (dist == 0) throw DomainError("X coincides with Y");
  TimeIntegral out;
  if (on_wall(rs, y)) return out;

  auto p = [&](double t) { return t <= 0 ? 0.0 : dyson_kernel(rs, DysonKernelKind::transition(t), x, y); };
  // Below t_lo every orbit term carries a factor exp(-dist^2 / 4t) < exp(-60).
  const double t_lo = std::min(t_max, dist * dist / 240);
  double hi = t_max;
  while (hi > t_lo) {
    const double lo = std::max(hi / 2, t_lo);
    QuadResult q = integrate_1d(p, lo, hi, 1e-10);
    out.value += q.value;
    out.quadrature_error += q.error;
    hi = lo;
  }
  const double py = pi_d(rs, y);
  const double pi_rho = pi_full<Rational>(rs, rs.rho()).convert_to<double>();
  const double a = d / 2.0 + rs.gamma();
  // p_t^D(X, Y) <= |W| pi(Y)^2 p_t^W(0, 0), which is explicit.
  out.tail_bound = py * py * std::pow(t_max, 1 - a) / (std::ldexp(1.0, d) * std::pow(kPi, d / 2.0) * pi_rho * (a - 1));
  // Contribution of (0, t_lo); the bound needs pi(X) > 0 and is below double resolution otherwise.
  if (!on_wall(rs, x))
    out.quadrature_error += t_lo * static_cast<double>(rs.weyl_order()) * py / pi_d(rs, x) *
                          std::pow(4 * kPi * t_lo, -d / 2.0) * std::exp(-60.0);
  out.value = -out.value;
  return out;
}

}  // namespace weylkern
