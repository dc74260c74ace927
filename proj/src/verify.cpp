#include "weylkern/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "weylkern/asymptotics.hpp"
#include "weylkern/dyson.hpp"
#include "weylkern/linexp.hpp"
#include "weylkern/montecarlo.hpp"
#include "weylkern/quadrature.hpp"

namespace weylkern {

namespace {

// Above this order the exhaustive subset enumeration is skipped.
constexpr std::uint64_t kEnumerationLimit = 20000;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Check make_check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value, tolerance, value <= tolerance, std::move(detail)};
}

Eigen::VectorXd unit(const VectorQ& v) { return from_rational<double>(v).normalized(); }

// Runs f over the pairs and returns the worst relative deviation; exceptions count as infinite.
template <typename F>
Check worst_deviation(std::string name, int pairs, double tolerance, F&& f) {
  double worst = 0;
  std::string detail = std::to_string(pairs) + " pairs";
  for (int i = 0; i < pairs; ++i) {
    try {
      const double d = f(i);
      worst = std::max(worst, std::isfinite(d) ? d : std::numeric_limits<double>::infinity());
    } catch (const std::exception& e) {
      worst = std::numeric_limits<double>::infinity();
      detail = e.what();
    }
  }
  return make_check(std::move(name), worst, tolerance, std::move(detail));
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json to_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}, {"detail", c.detail}};
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite}, {"system", r.system}, {"pass", r.pass()}, {"checks", checks}, {"skipped", r.skipped}};
}

std::vector<RootSubset> pi_closure_subsets(const RootSystem& rs) {
  std::set<std::vector<int>> seen;
  std::vector<RootSubset> out;
  const auto& group = enumerate_weyl(rs);
  for (std::uint32_t mask = 0; mask < (1u << rs.rank()); ++mask) {
    std::vector<int> vanish;
    std::vector<Rational> coeff;
    for (int i = 0; i < rs.rank(); ++i) {
      if (mask & (1u << i)) vanish.push_back(i);
      else coeff.push_back(Rational(1));
    }
    const auto face = face_representative(rs, vanish, coeff);
    for (const auto& w : group) {
      auto v = vanishing_roots(rs, VectorQ(w.apply(face.coords)));
      if (seen.insert(v).second) out.push_back(make_root_subset(rs, std::move(v)));
    }
  }
  return out;
}

Eigen::VectorXd random_chamber_point(const RootSystem& rs, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(rs.ambient_dim());
  for (const auto& w : rs.fundamental_weights()) p += u(rng) * from_rational<double>(w);
  return p;
}

SuiteReport exact_suite(const RootSystem& rs) {
  SuiteReport r{"exact", rs.name(), {}, {}};
  const auto n = normalization_identity(rs);
  r.checks.push_back(make_check("normalization identity", n.equal ? 0 : 1, 0,
                                "lhs=" + format_rational(n.lhs) + " rhs=" + format_rational(n.rhs)));
  if (rs.weyl_order() > kEnumerationLimit) {
    r.skipped.push_back("c-constant routes: Weyl group too large to enumerate subsets");
    return r;
  }
  const auto subsets = pi_closure_subsets(rs);
  int mismatches = 0;
  for (const auto& s : subsets) {
    const auto routes = c_constant_routes(rs, s);
    if (routes.formal != routes.closed_form) ++mismatches;
  }
  r.checks.push_back(
      make_check("c-constant routes", mismatches, 0, std::to_string(subsets.size()) + " pi-closure subsets"));
  return r;
}

SuiteReport formula_suite(const RootSystem& rs, std::uint64_t seed, int pairs) {
  SuiteReport r{"formulas", rs.name(), {}, {}};
  constexpr double tol = 1e-10;
  const double t = 0.5;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> points;
  for (int i = 0; i < pairs; ++i) {
    Eigen::VectorXd x = random_chamber_point(rs, rng);
    points.emplace_back(x, random_chamber_point(rs, rng));
  }
  if (rs.spec().family == Family::A) {
    r.checks.push_back(worst_deviation("determinant heat kernel", pairs, tol, [&](int i) {
      const auto& [x, y] = points[i];
      return rel(det_heat_A(rs, x, y, t).value, kernel_w(rs, KernelKind::heat(t), x, y).value);
    }));
    r.checks.push_back(worst_deviation("killed heat by determinant", pairs, tol, [&](int i) {
      const auto& [x, y] = points[i];
      return rel(killed_heat_det(rs, x, y, t), killed_heat(rs, x, y, t));
    }));
  } else {
    r.skipped.push_back("determinant formulas: type A only");
  }
  r.checks.push_back(worst_deviation("heat through spherical function", pairs, tol, [&](int i) {
    const auto& [x, y] = points[i];
    return rel(heat_via_spherical(rs, x, y, t), kernel_w(rs, KernelKind::heat(t), x, y).value);
  }));
  return r;
}

SuiteReport identity_suite(const RootSystem& rs, std::uint64_t seed) {
  SuiteReport r = exact_suite(rs);
  SuiteReport f = formula_suite(rs, seed, 20);
  r.suite = "identities";
  r.checks.insert(r.checks.end(), f.checks.begin(), f.checks.end());
  r.skipped.insert(r.skipped.end(), f.skipped.begin(), f.skipped.end());
  return r;
}

SuiteReport conservation_suite(const RootSystem& rs, std::uint64_t seed, int positivity_pairs) {
  SuiteReport r{"conservation", rs.name(), {}, {}};
  constexpr double tol = 1e-3;
  const Eigen::VectorXd rho = unit(rs.rho());
  const Eigen::VectorXd w = unit(rs.fundamental_weights().back());
  if (rs.rank() <= 2) {
    const double t = 0.25;
    const Eigen::VectorXd x = 0.8 * rho;
    const auto mass = integrate_chamber(
        rs, [&](const Eigen::VectorXd& y) { return dyson_kernel(rs, DysonKernelKind::transition(t), x, y); },
        x.norm() + 12 * std::sqrt(t));
    r.checks.push_back(make_check("transition mass", std::abs(mass.value - 1), tol));

    const double s = 0.1;
    const Eigen::VectorXd y = rs.rank() == 1 ? Eigen::VectorXd(1.4 * rho) : Eigen::VectorXd(0.6 * rho + 0.3 * w);
    const auto ck = integrate_chamber(
        rs,
        [&](const Eigen::VectorXd& z) {
          return dyson_kernel(rs, DysonKernelKind::transition(s), x, z) *
                 dyson_kernel(rs, DysonKernelKind::transition(t - s), z, y);
        },
        2 + 12 * std::sqrt(t));
    r.checks.push_back(
        make_check("Chapman-Kolmogorov", rel(ck.value, dyson_kernel(rs, DysonKernelKind::transition(t), x, y)), tol));

    const Eigen::VectorXd xp = 0.3 * rho;
    const auto harmonic = integrate_chamber_sphere(
        rs, [&](const Eigen::VectorXd& z) { return dyson_kernel(rs, DysonKernelKind::poisson(), xp, z); });
    r.checks.push_back(make_check("harmonic measure mass", std::abs(harmonic.value - 1), tol));
  } else {
    r.skipped.push_back("quadrature checks: rank above 2");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.05, 0.95);
  int failures = 0;
  std::string detail = std::to_string(positivity_pairs) + " pairs";
  for (int i = 0; i < positivity_pairs; ++i) {
    const Eigen::VectorXd x = radius(rng) * random_chamber_point(rs, rng).normalized();
    const Eigen::VectorXd y = random_chamber_point(rs, rng).normalized();
    try {
      const double p = kernel_w(rs, KernelKind::poisson(), x, y).value;
      if (!(p > 0) || !std::isfinite(p)) ++failures;
    } catch (const std::exception& e) {
      ++failures;
      detail = e.what();
    }
  }
  r.checks.push_back(make_check("Poisson kernel positivity", failures, 0, detail));
  return r;
}

SuiteReport pde_suite(const RootSystem& rs) {
  SuiteReport r{"pde", rs.name(), {}, {}};
  const Eigen::VectorXd rho = unit(rs.rho());
  const Eigen::VectorXd w = unit(rs.fundamental_weights().front());
  std::vector<Eigen::VectorXd> xs{0.3 * rho, 0.6 * rho};
  Eigen::VectorXd y = rho;
  if (rs.rank() > 1) {
    xs[1] = 0.2 * rho + 0.3 * w;
    y = (rho + w).normalized();
  }
  auto add = [&](const std::string& name, const KernelKind& kind, const Eigen::VectorXd& pole) {
    try {
      const auto c = pde_residual(rs, kind, xs, pole);
      r.checks.push_back({name, c.value, c.threshold, c.pass, c.metadata.dump()});
    } catch (const std::exception& e) {
      r.checks.push_back({name, std::numeric_limits<double>::infinity(), 1e-4, false, e.what()});
    }
  };
  add("heat equation", KernelKind::heat(0.5), y);
  add("Poisson harmonicity", KernelKind::poisson(), y);
  add("Newton harmonicity off the pole", KernelKind::newton(), 2 * y);
  return r;
}

std::vector<std::string> suite_names() { return {"identities", "exact", "formulas", "conservation", "pde"}; }

SuiteReport run_suite(std::string_view suite, const RootSystem& rs, std::uint64_t seed) {
  if (suite == "identities") return identity_suite(rs, seed);
  if (suite == "exact") return exact_suite(rs);
  if (suite == "formulas") return formula_suite(rs, seed);
  if (suite == "conservation") return conservation_suite(rs, seed);
  if (suite == "pde") return pde_suite(rs);
  throw DomainError("unknown suite: " + std::string(suite));
}

}  // namespace weylkern
