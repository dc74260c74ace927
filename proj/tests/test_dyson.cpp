#include <doctest.h>

#include <cmath>
#include <random>

#include "weylkern/dyson.hpp"
#include "weylkern/quadrature.hpp"

using namespace weylkern;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double h(double t, double u) { return std::exp(-u * u / (4 * t)) / std::sqrt(4 * kPi * t); }

// Regular chamber point drawn from positive combinations of the fundamental weights.
Eigen::VectorXd random_chamber(const RootSystem& rs, std::mt19937_64& rng, double lo = 0.2, double hi = 1.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(rs.ambient_dim());
  for (const auto& w : rs.fundamental_weights()) p += u(rng) * from_rational<double>(w);
  return p;
}

}  // namespace

TEST_CASE("quadrature primitives") {
  auto q = integrate_1d([](double x) { return std::exp(-x * x); }, 0, std::numeric_limits<double>::infinity());
  CHECK(rel(q.value, std::sqrt(kPi) / 2) < 1e-12);
  auto b2 = build_root_system("B2");
  auto w = chamber_wedge(b2);
  CHECK(w.angle == doctest::Approx(kPi / 4).epsilon(1e-14));
  // Area of the chamber sector of radius 2 and arc length of the unit sphere piece.
  CHECK(integrate_chamber(b2, [](const Eigen::VectorXd&) { return 1.0; }, 2).value == doctest::Approx(kPi / 2));
  CHECK(integrate_chamber_sphere(b2, [](const Eigen::VectorXd&) { return 1.0; }).value ==
        doctest::Approx(kPi / 4));
  auto a2 = build_root_system("A2");
  CHECK(chamber_wedge(a2).angle == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK(chamber_wedge(build_root_system("G2")).angle == doctest::Approx(kPi / 6).epsilon(1e-14));
  auto b1 = build_root_system("B1");
  CHECK(integrate_chamber(b1, [](const Eigen::VectorXd& y) { return y[0]; }, 3).value == doctest::Approx(4.5));
  CHECK_THROWS_AS(integrate_chamber(build_root_system("A3"), [](const Eigen::VectorXd&) { return 1.0; }, 1),
                  UnsupportedError);
}

TEST_CASE("B1 closed forms") {
  auto b1 = build_root_system("B1");
  for (int k = 1; k <= 9; ++k) {
    Eigen::VectorXd x = vec({k / 10.0});
    CHECK(rel(dyson_kernel(b1, DysonKernelKind::poisson(), x, vec({1})), 1.0) < 1e-12);
    for (double y : {0.3, 1.0, 2.5}) {
      const double t = 0.25;
      CHECK(rel(killed_heat(b1, x, vec({y}), t), h(t, x[0] - y) - h(t, x[0] + y)) < 1e-12);
    }
  }
  CHECK(dyson_kernel(b1, DysonKernelKind::poisson(), vec({0}), vec({1})) == doctest::Approx(1).epsilon(1e-12));
  CHECK(killed_heat(b1, vec({0}), vec({1}), 0.5) == 0);
}

TEST_CASE("identity chain and determinant route") {
  std::mt19937_64 rng(11);
  for (const char* name : {"B1", "A2", "B2", "G2", "A3", "C3"}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd x = random_chamber(rs, rng), y = random_chamber(rs, rng);
      const double t = 0.3;
      const double pd = dyson_kernel(rs, DysonKernelKind::transition(t), x, y);
      const double chain1 = pi_full<double>(rs, y) / pi_full<double>(rs, x) * killed_heat(rs, x, y, t);
      const double py = pi_full<double>(rs, y);
      const double chain2 = static_cast<double>(rs.weyl_order()) * py * py *
                            kernel_w(rs, KernelKind::heat(t), x, y).value;
      CHECK(rel(pd, chain1) < 1e-12);
      CHECK(rel(pd, chain2) < 1e-12);
      CHECK(killed_heat(rs, x, y, t) > 0);
    }
  }
  auto a2 = build_root_system("A2");
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x = random_chamber(a2, rng), y = random_chamber(a2, rng);
    CHECK(rel(killed_heat(a2, x, y, 0.4), killed_heat_det(a2, x, y, 0.4)) < 1e-12);
  }
}

TEST_CASE("boundary values and domain") {
  auto b2 = build_root_system("B2");
  Eigen::VectorXd x = vec({0.5, 0.2});
  CHECK(dyson_kernel(b2, DysonKernelKind::poisson(), x, vec({1, 0})) == 0);
  CHECK(dyson_kernel(b2, DysonKernelKind::newton(), x, vec({1, 1})) == 0);
  CHECK(dyson_kernel(b2, DysonKernelKind::transition(0.2), x, vec({0, 0})) == 0);
  CHECK(killed_heat(b2, vec({1, 0}), x, 0.2) == 0);
  // X on a wall: finite positive limit.
  CHECK(dyson_kernel(b2, DysonKernelKind::transition(0.2), vec({1, 0}), x) > 0);
  CHECK(dyson_kernel(b2, DysonKernelKind::poisson(), vec({0.5, 0.5}), vec({0.8, 0.6})) > 0);
  CHECK_THROWS_AS(dyson_kernel(b2, DysonKernelKind::poisson(), x, vec({2, 1})), DomainError);
  CHECK_THROWS_AS(dyson_kernel(b2, DysonKernelKind::transition(0.2), vec({-1, 0.5}), x), DomainError);
  CHECK_THROWS_AS(parse_dyson_kind("killed", -1), DomainError);
  CHECK(parse_dyson_kind("newton").type == DysonKernelType::Newton);
  CHECK_THROWS_AS(parse_dyson_kind("bogus"), DomainError);
}

TEST_CASE("conservation and sub-probability") {
  const double t = 0.25;
  for (const char* name : {"B1", "B2", "A2"}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    Eigen::VectorXd x = rs.rank() == 1 ? Eigen::VectorXd(vec({0.7})) : Eigen::VectorXd(from_rational<double>(rs.rho()) * 0.4);
    const double radius = x.norm() + 12 * std::sqrt(t);
    auto mass = integrate_chamber(
        rs, [&](const Eigen::VectorXd& y) { return dyson_kernel(rs, DysonKernelKind::transition(t), x, y); }, radius);
    CHECK(std::abs(mass.value - 1) < 1e-6);
    auto killed = [&](double s) {
      return integrate_chamber(rs, [&](const Eigen::VectorXd& y) { return killed_heat(rs, x, y, s); }, x.norm() + 12 * std::sqrt(s))
          .value;
    };
    const double k1 = killed(0.1), k2 = killed(0.4);
    CHECK(k1 <= 1);
    CHECK(k2 < k1);
  }
}

TEST_CASE("Chapman-Kolmogorov") {
  for (const char* name : {"B1", "B2"}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    Eigen::VectorXd x = rs.rank() == 1 ? Eigen::VectorXd(vec({0.6})) : Eigen::VectorXd(vec({0.9, 0.3}));
    Eigen::VectorXd y = rs.rank() == 1 ? Eigen::VectorXd(vec({1.1})) : Eigen::VectorXd(vec({0.7, 0.5}));
    const double s = 0.1, t = 0.15;
    auto q = integrate_chamber(
        rs,
        [&](const Eigen::VectorXd& z) {
          return dyson_kernel(rs, DysonKernelKind::transition(s), x, z) *
                 dyson_kernel(rs, DysonKernelKind::transition(t), z, y);
        },
        2 + 12 * std::sqrt(s + t));
    CHECK(rel(q.value, dyson_kernel(rs, DysonKernelKind::transition(s + t), x, y)) < 1e-6);
  }
}

TEST_CASE("harmonic measure has unit mass") {
  for (const char* name : {"B1", "B2", "A2"}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    Eigen::VectorXd x = rs.rank() == 1 ? Eigen::VectorXd(vec({0.4})) : Eigen::VectorXd(from_rational<double>(rs.rho()));
    if (rs.rank() > 1) x *= 0.3 / x.norm();
    auto q = integrate_chamber_sphere(
        rs, [&](const Eigen::VectorXd& y) { return dyson_kernel(rs, DysonKernelKind::poisson(), x, y); });
    CHECK(std::abs(q.value - 1) < 1e-6);
  }
}

TEST_CASE("ratio asymptotics") {
  auto b2 = build_root_system("B2");
  for (const Eigen::VectorXd& y : std::vector<Eigen::VectorXd>{vec({0.8, 0.6}), vec({1, 0})}) {
    auto y0 = make_chamber_point(b2, y);
    auto f = dyson_asym_ratio(b2, KernelType::Poisson, y0);
    const int gp = static_cast<int>(y0.vanishing.size());
    // 2^(2 gamma') (d/2)_gamma' / (w_d pi'(rho')) with d = 2, where (1)_1 = 1 and pi'(rho') = <e2, e2> = 1.
    CHECK(rel(f.constant, std::ldexp(1.0, 2 * gp) / (2 * kPi)) < 1e-14);
    auto r = dyson_ratio_test(b2, KernelType::Poisson, y0, vec({0.5, 0.2}), {1e-1, 1e-2, 1e-3});
    CAPTURE(r.deviations[2]);
    CHECK(r.pass);
  }
  auto n = dyson_asym_ratio(b2, KernelType::Newton, make_chamber_point(b2, vec({1, 0})));
  // Rank two, one vanishing root e2 with <e2, e2> = 1: -2 / (2 pi).
  CHECK(rel(n.constant, -2.0 / (2 * kPi)) < 1e-14);
  auto nt = dyson_ratio_test(b2, KernelType::Newton, make_chamber_point(b2, vec({1, 0})), vec({1.2, 0.5}),
                             {1e-2, 1e-3, 1e-4});
  CAPTURE(nt.deviations[2]);
  CHECK(nt.pass);
  auto heat = dyson_heat_ratio(b2, make_chamber_point(b2, vec({1, 1})), make_chamber_point(b2, vec({1, 0})));
  CHECK(heat.power == -3);
  auto ht = ratio_test(
      [&](double t) {
        // p^D / pi(Y)^2 extends to singular Y as |W| p^W.
        HighPrec lg = heat_log_via_spherical(b2, vec({1, 1}), vec({1, 0}), t);
        PrecisionGuard g(128);
        return 8 * std::exp((lg - HighPrec(heat.log_abs(t))).convert_to<double>());
      },
      {1e-2, 1e-3, 1e-4});
  CHECK(ht.pass);
  auto helper = dyson_heat_ratio_test(b2, make_chamber_point(b2, vec({1, 1})), make_chamber_point(b2, vec({1, 0})),
                                      {1e-2, 1e-3, 1e-4});
  for (std::size_t i = 0; i < ht.ratios.size(); ++i) CHECK(rel(helper.ratios[i], ht.ratios[i]) < 1e-12);
}

TEST_CASE("Newton kernel as a time integral") {
  auto a3 = build_root_system("A3");
  Eigen::VectorXd x = vec({1.5, 0.5, -0.5, -1.5}), y = vec({1.2, 0.7, -0.6, -1.3});
  auto r = newton_time_integral(a3, x, y, 50);
  const double exact = dyson_kernel(a3, DysonKernelKind::newton(), x, y);
  CAPTURE(r.value);
  CAPTURE(exact);
  CHECK(exact < 0);
  CHECK(std::abs(r.value - exact) <= r.tail_bound + r.quadrature_error + 1e-8 * std::abs(exact));
  CHECK(rel(r.value, exact) < 1e-2);
  auto r2 = newton_time_integral(a3, x, y, 100);
  CHECK(std::abs(r2.value - r.value) <= r.tail_bound);
  CHECK_THROWS_AS(newton_time_integral(build_root_system("B2"), vec({1, 0.5}), vec({0.7, 0.2}), 10), UnsupportedError);
}
