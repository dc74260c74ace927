#include "weylkern/asymptotics.hpp"

#include <cmath>

#include "weylkern/killingmax.hpp"

namespace weylkern {

namespace {

constexpr double kPi = 3.14159265358979323846;

double to_d(const Rational& r) { return r.convert_to<double>(); }

RootSubset closed_subset(const RootSystem& rs, const std::vector<int>& indices) {
  RootSubset s = make_root_subset(rs, indices);
  if (!s.pi_closure) throw DomainError("vanishing roots do not form the root set of a chamber face");
  return s;
}

// pi_S(rho_S)
Rational p_constant(const RootSystem& rs, const RootSubset& s) {
  return pi_over<Rational>(rs, s, rho_of(rs, s));
}

double w_d(int d) { return unit_sphere_area<double>(d); }

std::uint32_t face_mask(const RootSystem& rs, const std::vector<int>& vanishing) {
  std::uint32_t mask = 0;
  const auto& simple = rs.simple_indices();
  for (std::size_t i = 0; i < simple.size(); ++i)
    if (std::find(vanishing.begin(), vanishing.end(), simple[i]) != vanishing.end()) mask |= 1u << i;
  return mask;
}

void check_chamber(const RootSystem& rs, const ChamberPoint<double>& p, const char* what) {
  if (p.coords.size() != rs.ambient_dim() || !in_root_span(rs, p.coords))
    throw DomainError(std::string(what) + " is not in the span of the roots");
  if (!in_closed_chamber(rs, p.coords, 1e-10)) throw DomainError(std::string(what) + " is not in the closed chamber");
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int i : a)
    if (std::find(b.begin(), b.end(), i) != b.end()) out.push_back(i);
  return out;
}

}  // namespace

double AsymptoticForm::log_abs(double s) const {
  const double e = inverse_rate ? rate / s : rate * s;
  return std::log(std::abs(constant)) + to_d(power) * std::log(s) + e;
}

double AsymptoticForm::value(double s) const { return (constant < 0 ? -1 : 1) * std::exp(log_abs(s)); }

double at_zero(const RootSystem& rs, KernelType kind, const Eigen::VectorXd& y) {
  if (y.size() != rs.ambient_dim() || !in_root_span(rs, y)) throw DomainError("Y is not in the span of the roots");
  const int d = rs.rank(), g = rs.gamma();
  const double w = static_cast<double>(rs.weyl_order());
  const double pi_rho = to_d(pi_full<Rational>(rs, rs.rho()));
  const double r = y.norm();
  if (r == 0) throw DomainError("Y must be nonzero");
  switch (kind) {
    case KernelType::Poisson:
      if (std::abs(r - 1) > 1e-10) throw DomainError("Poisson value at the origin requires |Y| = 1");
      return to_d(power_of_two(2 * g) * pochhammer(Rational(d, 2), g)) / (pi_rho * w * w_d(d));
    case KernelType::Newton:
      if (d < 2) throw DomainError("Newton value at the origin requires rank >= 2");
      if (d == 2) {
        Rational f = 1;
        for (int k = 2; k < g; ++k) f *= k;
        return -to_d(power_of_two(2 * g - 1) * f) / (2 * kPi * w * pi_rho) * std::pow(r, -2.0 * g);
      }
      return to_d(power_of_two(2 * g) * pochhammer(Rational(d - 2, 2), g)) / (w * (2 - d) * w_d(d) * pi_rho) *
             std::pow(r, 2.0 - d - 2.0 * g);
    default:
      throw UnsupportedError("closed-form value at the origin exists for the Poisson and Newton kernels only");
  }
}

AsymptoticForm poisson_asym(const RootSystem& rs, const ChamberPoint<double>& y0) {
  check_chamber(rs, y0, "Y0");
  if (std::abs(y0.coords.norm() - 1) > 1e-10) throw DomainError("Y0 must lie on the unit sphere");
  const int d = rs.rank();
  RootSubset s = closed_subset(rs, y0.vanishing);
  const int gp = static_cast<int>(s.indices.size());
  const double pp = pi_over<double>(rs, complement(rs, s), y0.coords);
  AsymptoticForm f;
  f.constant = to_d(power_of_two(2 * gp) * pochhammer(Rational(d, 2), gp) / p_constant(rs, s)) /
               (static_cast<double>(rs.weyl_order()) * w_d(d) * pp * pp);
  f.power = -(2 * gp + d);
  f.description = "Poisson kernel near a boundary point, " + std::to_string(gp) + " vanishing roots";
  return f;
}

AsymptoticForm newton_asym(const RootSystem& rs, const ChamberPoint<double>& y0) {
  check_chamber(rs, y0, "Y0");
  const int d = rs.rank();
  if (d < 2) throw DomainError("Newton asymptotics require rank >= 2");
  RootSubset s = closed_subset(rs, y0.vanishing);
  const int gp = static_cast<int>(s.indices.size());
  const double pp = pi_over<double>(rs, complement(rs, s), y0.coords);
  const double w = static_cast<double>(rs.weyl_order());
  const Rational prho = p_constant(rs, s);
  AsymptoticForm f;
  if (d == 2) {
    if (gp == 0) throw UnsupportedError("rank 2 Newton kernel at a regular point has a logarithmic singularity");
    Rational fact = 1;
    for (int k = 2; k < gp; ++k) fact *= k;
    f.constant = -to_d(power_of_two(2 * gp - 1) * fact / prho) / (2 * kPi * w * pp * pp);
    f.power = -2 * gp;
  } else {
    f.constant = to_d(power_of_two(2 * gp) * pochhammer(Rational(d - 2, 2), gp) / prho) / (w * (2 - d) * w_d(d) * pp * pp);
    f.power = -(2 * gp + d - 2);
  }
  f.description = "Newton kernel near a point with " + std::to_string(gp) + " vanishing roots";
  return f;
}

AsymptoticForm spherical_asym(const RootSystem& rs, const ChamberPoint<double>& lambda0,
                              const ChamberPoint<double>& y0) {
  check_chamber(rs, lambda0, "lambda0");
  check_chamber(rs, y0, "Y0");
  auto report = verify_face_pair(rs, make_face(rs, face_mask(rs, lambda0.vanishing)),
                                 make_face(rs, face_mask(rs, y0.vanishing)));
  if (!report.holds) throw UnsupportedError("W(lambda0, Y0) is larger than the product of the stabilizers");

  RootSubset sl = closed_subset(rs, lambda0.vanishing);
  RootSubset sy = closed_subset(rs, y0.vanishing);
  RootSubset sly = closed_subset(rs, intersect(sl.indices, sy.indices));
  std::vector<int> m_roots;
  for (int i = 0; i < rs.gamma(); ++i)
    if (std::find(sl.indices.begin(), sl.indices.end(), i) == sl.indices.end() &&
        std::find(sy.indices.begin(), sy.indices.end(), i) == sy.indices.end())
      m_roots.push_back(i);
  RootSubset mset{m_roots, false};
  const int gl = static_cast<int>(sl.indices.size()), gy = static_cast<int>(sy.indices.size()),
            gly = static_cast<int>(sly.indices.size());
  const int m = static_cast<int>(m_roots.size());
  if (m != rs.gamma() - (gl + gy - gly)) throw ConsistencyError("inclusion-exclusion count of M failed");

  const double pm = pi_over<double>(rs, mset, lambda0.coords) * pi_over<double>(rs, mset, y0.coords);
  const Rational pi_rho = pi_full<Rational>(rs, rs.rho());

  // Two expressions of the same constant: through c constants and through pi_S(rho_S).
  const Rational via_c = c_constant(rs, sly) / (c_constant(rs, sl) * c_constant(rs, sy)) *
                         Rational(report.stab_lambda * report.stab_y) / Rational(report.intersection);
  const Rational via_p =
      power_of_two(gl + gy - gly) * p_constant(rs, sly) / (p_constant(rs, sl) * p_constant(rs, sy));
  if (via_c != via_p) throw ConsistencyError("asymptotic constant routes disagree");

  AsymptoticForm f;
  f.constant = to_d(pi_rho / power_of_two(rs.gamma()) * via_p) / pm;
  f.power = -m;
  f.rate = lambda0.coords.dot(y0.coords);
  f.description = "spherical function along t Y0, " + std::to_string(m) + " roots off both faces";
  return f;
}

AsymptoticForm heat_small_t(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y) {
  AsymptoticForm s = spherical_asym(rs, x, y);
  const int d = rs.rank(), g = rs.gamma();
  const int m = static_cast<int>(-s.power);
  std::vector<int> uni = x.vanishing;
  for (int i : y.vanishing)
    if (std::find(uni.begin(), uni.end(), i) == uni.end()) uni.push_back(i);
  if (static_cast<int>(uni.size()) != g - m) throw ConsistencyError("small-time exponent forms disagree");

  AsymptoticForm f;
  f.constant = s.constant * std::ldexp(1.0, m - d) /
               (static_cast<double>(rs.weyl_order()) * std::pow(kPi, d / 2.0) * to_d(pi_full<Rational>(rs, rs.rho())));
  f.power = -Rational(d, 2) - (g - m);
  f.rate = -(x.coords - y.coords).squaredNorm() / 4;
  f.inverse_rate = true;
  f.description = "heat kernel as t -> 0, " + std::to_string(g - m) + " roots vanishing on X or Y";
  return f;
}

NormalizationIdentity normalization_identity(const RootSystem& rs) {
  NormalizationIdentity out;
  const VectorQ& rho = rs.rho();
  out.lhs = pi_full<Rational>(rs, rho) * Rational(rs.weyl_order()) / power_of_two(rs.gamma());
  out.rhs = 1;
  for (int i = 0; i < rs.gamma(); ++i) {
    VectorQ a = rs.root(i);
    Rational n2 = a.squaredNorm();
    out.rhs *= n2 / 2 * (a.dot(rho) / n2 + 1);
  }
  out.equal = out.lhs == out.rhs;
  return out;
}

RatioTest ratio_test(const std::function<double(double)>& ratio, const std::vector<double>& params, double tol) {
  RatioTest r;
  r.params = params;
  for (double p : params) {
    r.ratios.push_back(ratio(p));
    r.deviations.push_back(std::abs(r.ratios.back() - 1));
  }
  r.monotone = true;
  for (std::size_t i = 1; i < r.deviations.size(); ++i)
    if (!(r.deviations[i] < r.deviations[i - 1] || r.deviations[i] < 1e-9)) r.monotone = false;
  r.pass = r.monotone && !r.deviations.empty() && r.deviations.back() <= tol;
  return r;
}

RatioTest poisson_ratio_test(const RootSystem& rs, const ChamberPoint<double>& y0, const Eigen::VectorXd& x_ref,
                             const std::vector<double>& s, double tol) {
  const AsymptoticForm f = poisson_asym(rs, y0);
  return ratio_test(
      [&](double h) {
        const Eigen::VectorXd x = y0.coords + h * (x_ref - y0.coords);
        const double p = kernel_w(rs, KernelKind::poisson(), x, y0.coords).value;
        return p / ((1 - x.squaredNorm()) * f.value((x - y0.coords).norm()));
      },
      s, tol);
}

RatioTest newton_ratio_test(const RootSystem& rs, const ChamberPoint<double>& y0, const Eigen::VectorXd& x_ref,
                            const std::vector<double>& s, double tol) {
  const AsymptoticForm f = newton_asym(rs, y0);
  return ratio_test(
      [&](double h) {
        const Eigen::VectorXd x = y0.coords + h * (x_ref - y0.coords);
        return kernel_w(rs, KernelKind::newton(), x, y0.coords).value / f.value((x - y0.coords).norm());
      },
      s, tol);
}

RatioTest spherical_ratio_test(const RootSystem& rs, const ChamberPoint<double>& lambda0,
                               const ChamberPoint<double>& y0, const std::vector<double>& t, unsigned bits,
                               double tol) {
  const AsymptoticForm f = spherical_asym(rs, lambda0, y0);
  return ratio_test(
      [&](double s) {
        const ChamberPoint<double> ty{s * y0.coords, y0.vanishing};
        const auto psi = singular_spherical_scaled(rs, lambda0, ty, bits);
        PrecisionGuard guard(bits);
        const HighPrec lg = log(psi.mantissa) + psi.log_scale;
        return std::exp((lg - HighPrec(f.log_abs(s))).convert_to<double>());
      },
      t, tol);
}

RatioTest heat_small_t_ratio_test(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y,
                                  const std::vector<double>& t, double tol) {
  const AsymptoticForm f = heat_small_t(rs, x, y);
  return ratio_test(
      [&](double s) {
        const HighPrec lg = heat_log_via_spherical(rs, x.coords, y.coords, s);
        PrecisionGuard guard(128);
        return std::exp((lg - HighPrec(f.log_abs(s))).convert_to<double>());
      },
      t, tol);
}

}  // namespace weylkern
