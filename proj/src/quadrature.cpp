#include "weylkern/quadrature.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace weylkern {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr unsigned kMaxDepth = 15;

void require_low_rank(const RootSystem& rs) {
  if (rs.rank() > 2) throw UnsupportedError("chamber quadrature is implemented for rank 1 and 2");
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  QuadResult r;
  if (a == b) return r;
  if (!std::isfinite(b)) {
    r.value = Rule::integrate(f, a, b, kMaxDepth, rel_tol, &r.error);
    return r;
  }
  // The rule's acceptance test mixes a tolerance in x with an error estimate on its reference
  // interval, so short intervals never converge; integrate over a unit interval instead.
  const double len = b - a;
  r.value = Rule::integrate([&](double u) { return f(a + len * u) * len; }, 0.0, 1.0, kMaxDepth, rel_tol, &r.error);
  return r;
}

Eigen::VectorXd chamber_ray(const RootSystem& rs) {
  if (rs.rank() != 1) throw DomainError("chamber ray requires rank 1");
  Eigen::VectorXd e = from_rational<double>(rs.fundamental_weights()[0]);
  return e.normalized();
}

Eigen::VectorXd ChamberWedge::direction(double theta) const { return std::cos(theta) * e0 + std::sin(theta) * e1; }

ChamberWedge chamber_wedge(const RootSystem& rs) {
  if (rs.rank() != 2) throw DomainError("chamber wedge requires rank 2");
  Eigen::VectorXd a = from_rational<double>(rs.fundamental_weights()[0]).normalized();
  Eigen::VectorXd b = from_rational<double>(rs.fundamental_weights()[1]).normalized();
  ChamberWedge w;
  w.e0 = a;
  w.e1 = (b - b.dot(a) * a).normalized();
  w.angle = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  return w;
}

QuadResult integrate_chamber(const RootSystem& rs, const std::function<double(const Eigen::VectorXd&)>& f,
                             double radius, double rel_tol) {
  require_low_rank(rs);
  if (rs.rank() == 1) {
    const Eigen::VectorXd e = chamber_ray(rs);
    return integrate_1d([&](double r) { return f(r * e); }, 0, radius, rel_tol);
  }
  const ChamberWedge w = chamber_wedge(rs);
  double inner_error = 0;
  auto radial = [&](double theta) {
    const Eigen::VectorXd u = w.direction(theta);
    QuadResult q = integrate_1d([&](double r) { return r == 0 ? 0.0 : f(r * u) * r; }, 0, radius, rel_tol / 10);
    inner_error = std::max(inner_error, q.error);
    return q.value;
  };
  QuadResult out = integrate_1d(radial, 0, w.angle, rel_tol);
  out.error += inner_error * w.angle;
  return out;
}

QuadResult integrate_chamber_sphere(const RootSystem& rs, const std::function<double(const Eigen::VectorXd&)>& f,
                                    double rel_tol) {
  require_low_rank(rs);
  if (rs.rank() == 1) return {f(chamber_ray(rs)), 0};
  const ChamberWedge w = chamber_wedge(rs);
  return integrate_1d([&](double theta) { return f(w.direction(theta)); }, 0, w.angle, rel_tol);
}

std::vector<Eigen::VectorXd> chamber_lattice(const RootSystem& rs, int n, double extent) {
  const int d = rs.rank();
  if (n <= 0 || !(extent > 0)) throw DomainError("lattice needs n > 0 and extent > 0");
  if (std::pow(double(n), d) > 1e7) throw ResourceLimitError("lattice has more than 1e7 cells");
  const Eigen::MatrixXd& basis = rs.span_basis();
  std::vector<Eigen::VectorXd> out;
  std::vector<int> idx(d, 0);
  while (true) {
    Eigen::VectorXd c(d);
    for (int k = 0; k < d; ++k) c[k] = -extent + (idx[k] + 0.5) * 2 * extent / n;
    const Eigen::VectorXd x = basis * c;
    if (in_closed_chamber(rs, x) && wall_distance(rs, x) > 1e-12) out.push_back(x);
    int k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
  return out;
}

}  // namespace weylkern
