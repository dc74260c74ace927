#include <doctest.h>

#include <cmath>
#include <random>

#include "weylkern/kernels.hpp"

using namespace weylkern;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random point in the root span, pushed into the open chamber.
Eigen::VectorXd random_chamber_point(const RootSystem& rs, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0, 1);
  Eigen::VectorXd c(rs.rank());
  for (int i = 0; i < rs.rank(); ++i) c[i] = n(rng);
  Eigen::VectorXd x = rs.span_basis() * c;
  x = project_to_chamber(rs, x).point.coords;
  return scale * x / x.norm();
}

}  // namespace

TEST_CASE("euclidean kernel examples") {
  CHECK(euclidean_kernel(KernelKind::heat(0.3), 1, vec({0.5}), vec({0.5})) ==
        doctest::Approx(1 / std::sqrt(4 * kPi * 0.3)).epsilon(1e-15));
  // w_3 = 4 pi
  CHECK(euclidean_kernel(KernelKind::poisson(), 3, vec({0, 0, 0}), vec({0, 1, 0})) ==
        doctest::Approx(1 / (4 * kPi)).epsilon(1e-15));
  CHECK(euclidean_kernel(KernelKind::newton(), 3, vec({0, 0, 0}), vec({2, 0, 0})) ==
        doctest::Approx(-1 / (8 * kPi)).epsilon(1e-15));
  CHECK(unit_sphere_area<double>(1) == doctest::Approx(2));
  CHECK(unit_sphere_area<double>(2) == doctest::Approx(2 * kPi));
  CHECK(unit_sphere_area<double>(5) == doctest::Approx(8 * kPi * kPi / 3));
  CHECK_THROWS_AS(euclidean_kernel(KernelKind::newton(), 3, vec({1, 0, 0}), vec({1, 0, 0})), DomainError);
  CHECK_THROWS_AS(euclidean_kernel(KernelKind::poisson(), 2, vec({0, 0}), vec({0.5, 0})), DomainError);
  CHECK_THROWS_AS(euclidean_kernel(KernelKind::green(), 2, vec({2, 0}), vec({0.5, 0})), DomainError);
}

TEST_CASE("B1 Poisson kernel is constant one half") {
  auto rs = build_root_system("B1");
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    auto v = kernel_w(rs, KernelKind::poisson(), vec({x}), vec({1}));
    CHECK(rel(v.value, 0.5) < 1e-12);
    CHECK(v.mode == EvalMode::Direct);
  }
  // Limit at the origin goes through the singular path.
  auto z = kernel_w(rs, KernelKind::poisson(), vec({0}), vec({1}));
  CHECK(z.mode == EvalMode::SingularLimit);
  CHECK(rel(z.value, 0.5) < 1e-9);
}

TEST_CASE("B1 spherical function is sinh(x)/x") {
  auto rs = build_root_system("B1");
  for (double lam : {0.3, 1.0, 2.5})
    for (double x : {0.2, 1.0, 4.0}) {
      double expected = std::sinh(lam * x) / (lam * x);
      CHECK(rel(spherical_psi(rs, vec({lam}), vec({x})).value, expected) < 1e-12);
    }
  CHECK(spherical_psi(rs, vec({0}), vec({3})).value == 1);
  CHECK(spherical_psi(rs, vec({3}), vec({0})).value == 1);
  // Small arguments force the extended-precision path.
  CHECK(rel(spherical_psi(rs, vec({1e-3}), vec({1e-3})).value, std::sinh(1e-6) / 1e-6) < 1e-12);
}

TEST_CASE("domain errors") {
  auto rs = build_root_system("B2");
  CHECK_THROWS_AS(kernel_w(rs, KernelKind::heat(0), vec({1, 0.5}), vec({1, 0.2})), DomainError);
  CHECK_THROWS_AS(kernel_w(rs, KernelKind::newton(), vec({1, 0.5}), vec({-0.5, 1})), DomainError);
  CHECK_THROWS_AS(kernel_w(rs, KernelKind::poisson(), vec({0.5, 0.1}), vec({0.5, 0.5})), DomainError);
  CHECK_THROWS_AS(kernel_w(rs, KernelKind::poisson(), vec({1.5, 0.1}), vec({1, 0})), DomainError);
  CHECK_THROWS_AS(kernel_w(rs, KernelKind::green(), vec({1.5, 0.1}), vec({0.5, 0})), DomainError);
  CHECK_THROWS_AS(kernel_w(rs, KernelKind::heat(1), vec({1}), vec({1, 0})), DomainError);
  auto a2 = build_root_system("A2");
  CHECK_THROWS_AS(kernel_w(a2, KernelKind::heat(1), vec({1, 0, 0}), vec({1, 0, -1})), DomainError);
  CHECK_THROWS_AS(det_heat_A(rs, vec({1, 0}), vec({1, 0}), 1), DomainError);
  CHECK_THROWS_AS(curved_heat(rs, vec({1, 1}), vec({1, 0.5}), 1), DomainError);
  CHECK(parse_kernel_kind("heat", 0.5).t == 0.5);
  CHECK_THROWS_AS(parse_kernel_kind("wave"), DomainError);
}

TEST_CASE("B2 heat agrees with a 200-bit oracle") {
  auto rs = build_root_system("B2");
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x = random_chamber_point(rs, rng, 1.5), y = random_chamber_point(rs, rng, 1.0);
    auto v = kernel_w(rs, KernelKind::heat(0.5), x, y);
    double oracle = kernel_w_oracle(rs, KernelKind::heat(0.5), x, y, 200).convert_to<double>();
    CHECK(rel(v.value, oracle) < 1e-10);
    CHECK(v.cancellation >= 1);
  }
  Eigen::VectorXd x = vec({2, 1}), y = vec({1.5, 0.5});
  double oracle = kernel_w_oracle(rs, KernelKind::heat(0.5), x, y, 200).convert_to<double>();
  CHECK(rel(kernel_w(rs, KernelKind::heat(0.5), x, y).value, oracle) < 1e-12);
}

TEST_CASE("heat kernel symmetry and W-invariance") {
  for (const char* name : {"B2", "G2", "A2", "C3"}) {
    auto rs = build_root_system(name);
    std::mt19937_64 rng(5);
    Eigen::VectorXd x = random_chamber_point(rs, rng, 1.3), y = random_chamber_point(rs, rng, 0.8);
    double base = kernel_w(rs, KernelKind::heat(0.4), x, y).value;
    CHECK(rel(kernel_w(rs, KernelKind::heat(0.4), y, x).value, base) < 1e-12);
    for (const auto& w : enumerate_weyl(rs)) {
      CHECK(rel(kernel_w(rs, KernelKind::heat(0.4), w.apply(x), y).value, base) < 1e-10);
      CHECK(rel(kernel_w(rs, KernelKind::heat(0.4), x, w.apply(y)).value, base) < 1e-10);
    }
    double psi = spherical_psi(rs, x, y).value;
    for (const auto& w : enumerate_weyl(rs)) CHECK(rel(spherical_psi(rs, x, w.apply(y)).value, psi) < 1e-10);
  }
}

TEST_CASE("heat via spherical function matches the alternating sum") {
  auto b1 = build_root_system("B1");
  CHECK(rel(heat_via_spherical(b1, vec({1}), vec({2}), 0.25), kernel_w(b1, KernelKind::heat(0.25), vec({1}), vec({2})).value) <
        1e-10);
  for (const char* name : {"B1", "B2", "A2", "G2"}) {
    auto rs = build_root_system(name);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd x = random_chamber_point(rs, rng, 1.2), y = random_chamber_point(rs, rng, 0.9);
      for (double t : {0.1, 0.5, 2.0}) {
        double a = heat_via_spherical(rs, x, y, t);
        double b = kernel_w(rs, KernelKind::heat(t), x, y).value;
        CHECK(rel(a, b) < 1e-10);
        CHECK(rel(heat_via_spherical(rs, y, x, t), a) < 1e-10);
      }
    }
  }
  // X = 0 reduces to the Gaussian factor alone.
  auto rs = build_root_system("B2");
  Eigen::VectorXd y = vec({1.2, 0.4});
  const double t = 0.3;
  double expected = std::pow(t, -1.0 - 4) * std::exp(-y.squaredNorm() / (4 * t)) / (8 * 4 * kPi * 24);
  CHECK(rel(heat_via_spherical(rs, vec({0, 0}), y, t), expected) < 1e-12);
  auto v = kernel_w(rs, KernelKind::heat(t), vec({0, 0}), y);
  CHECK(v.mode == EvalMode::SingularLimit);
  CHECK(rel(v.value, expected) < 1e-10);
}

TEST_CASE("determinant route on the A family") {
  auto a1 = build_root_system("A1");
  Eigen::VectorXd x1 = vec({0.7, -0.7}), y1 = vec({0.2, -0.2});
  CHECK(rel(det_heat_A(a1, x1, y1, 0.3).value, kernel_w(a1, KernelKind::heat(0.3), x1, y1).value) < 1e-12);
  for (const char* name : {"A2", "A3", "A4"}) {
    auto rs = build_root_system(name);
    std::mt19937_64 rng(23);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd x = random_chamber_point(rs, rng, 2.0), y = random_chamber_point(rs, rng, 1.5);
      CHECK(rel(det_heat_A(rs, x, y, 0.3).value, kernel_w(rs, KernelKind::heat(0.3), x, y).value) < 1e-10);
    }
  }
}

TEST_CASE("determinant route cancels less near a wall") {
  auto rs = build_root_system("A4");
  Eigen::VectorXd x = vec({2, 1, 1e-6, 0, -1});
  x.array() -= x.mean();
  Eigen::VectorXd y = vec({1.5, 0.7, -0.2, -0.6, -1.4});
  y.array() -= y.mean();
  const double t = 0.5;
  auto det = det_heat_A(rs, x, y, t);
  auto s = alternating_sum<double>(rs, KernelKind::heat(t), x, y);
  double sum_cancellation = s.cancellation(rs.weyl_order());
  CHECK(det.cancellation * 10 <= sum_cancellation);
  double oracle = kernel_w_oracle(rs, KernelKind::heat(t), x, y, 200).convert_to<double>();
  CHECK(rel(det.value, oracle) < 1e-6);
  CHECK(rel(kernel_w(rs, KernelKind::heat(t), x, y).value, oracle) < 1e-10);
}

TEST_CASE("curved heat kernel") {
  auto b1 = build_root_system("B1");
  const double x = 0.8, y = 1.3, t = 0.2;
  auto h = [&](double u) { return std::exp(-u * u / (4 * t)) / std::sqrt(4 * kPi * t); };
  double expected = std::exp(-t) * (h(x - y) - h(x + y)) / (std::sinh(x) * std::sinh(y));
  CHECK(rel(curved_heat(b1, vec({x}), vec({y}), t), expected) < 1e-12);

  auto rs = build_root_system("B2");
  Eigen::VectorXd p = vec({1.1, 0.4}), q = vec({0.7, 0.2});
  CHECK(rel(curved_heat(rs, p, q, 0.3), curved_heat(rs, q, p, 0.3)) < 1e-12);

  // Against the flat kernel rescaled by pi^2 / delta the ratio tends to |W|.
  double delta = 1, pi = pi_full<double>(rs, p);
  for (int i = 0; i < rs.gamma(); ++i) delta *= std::pow(std::sinh(rs.positive_roots_d().row(i).dot(p)), 2);
  std::vector<double> dev;
  for (double s : {1e-2, 1e-3, 1e-4}) {
    double flat = kernel_w(rs, KernelKind::heat(s), p, p).value * pi * pi / delta;
    dev.push_back(std::abs(curved_heat(rs, p, p, s) / flat / rs.weyl_order() - 1));
  }
  CHECK(dev[1] < dev[0]);
  CHECK(dev[2] < dev[1]);
  CHECK(dev[2] < 1e-3);
}

TEST_CASE("c constant examples and formal differentiation") {
  auto a1 = build_root_system("A1");
  CHECK(c_constant(a1, full_subset(a1)) == 2);
  CHECK(c_constant(a1, make_root_subset(a1, {})) == 1);
  auto b1 = build_root_system("B1");
  CHECK(c_constant(b1, full_subset(b1)) == 1);
  auto b2 = build_root_system("B2");
  // |W| pi(rho) / 2^gamma = 8 * 24 / 16
  CHECK(c_constant(b2, full_subset(b2)) == 12);
  // The iterated product-rule derivative agrees with the monomial pairing.
  for (const char* name : {"B2", "G2", "A3", "B3"}) {
    auto rs = build_root_system(name);
    for (int i = 0; i < rs.gamma(); ++i) {
      auto s = make_root_subset(rs, {i});
      auto p = pi_derivative_apply<Rational>(rs, pi_polynomial<Rational>(rs, s), s);
      CHECK(p.evaluate(VectorQ::Zero(rs.ambient_dim())) == c_constant(rs, s));
    }
    if (rs.gamma() <= 6) {
      auto s = full_subset(rs);
      auto p = pi_derivative_apply<Rational>(rs, pi_polynomial<Rational>(rs, s), s);
      CHECK(p.evaluate(VectorQ::Zero(rs.ambient_dim())) == c_constant(rs, s));
    }
  }
  // Derivative of an exponential picks up alpha(lambda).
  LinExpPoly<double> e(2);
  e.add({1.0, {}, vec({0.3, 0.7})});
  auto de = e.derivative(vec({1, -1}));
  CHECK(de.evaluate(vec({0.5, 0.1})) == doctest::Approx(-0.4 * std::exp(0.3 * 0.5 + 0.7 * 0.1)));
}

TEST_CASE("singular spherical evaluation") {
  auto rs = build_root_system("B2");
  // Regular pair: identical to the direct formula.
  Eigen::VectorXd l = vec({1.3, 0.4}), y = vec({0.9, 0.2});
  auto lp = make_chamber_point(rs, l), yp = make_chamber_point(rs, y);
  CHECK(rel(singular_spherical(rs, lp, yp), spherical_psi(rs, l, y).value) < 1e-12);
  CHECK(singular_spherical(rs, make_chamber_point(rs, vec({0, 0})), yp) == 1);

  // Wall pair versus Richardson extrapolation of the regular formula.
  const double a = 0.8, b = 1.1;
  Eigen::VectorXd l0 = vec({a, a}), y0 = vec({b, b});
  Eigen::VectorXd v = vec({3, 1}) / std::sqrt(10.0);
  std::vector<double> hs{1e-2, 1e-3, 1e-4};
  std::vector<HighPrec> f;
  for (double h : hs) {
    HighPrec lg = spherical_psi_log(rs, l0 + h * v, y0 + h * v, 256);
    PrecisionGuard g(256);
    f.push_back(exp(lg));
  }
  double richardson;
  {
    PrecisionGuard g(256);
    richardson = extrapolate_to_zero(hs, f).convert_to<double>();
  }
  double exact = singular_spherical(rs, make_chamber_point(rs, l0), make_chamber_point(rs, y0));
  CHECK(rel(exact, richardson) < 1e-8);
  auto routed = spherical_psi(rs, l0, y0);
  CHECK(routed.mode == EvalMode::SingularLimit);
  CHECK(rel(routed.value, exact) < 1e-12);

  // Mixed faces on G2 against points slightly inside the chamber.
  auto g2 = build_root_system("G2");
  Eigen::VectorXd gl = from_rational<double>(fundamental_weights(g2)[0]);
  Eigen::VectorXd gy = from_rational<double>(fundamental_weights(g2)[1]);
  Eigen::VectorXd rho = from_rational<double>(g2.rho()).normalized();
  double near = spherical_psi(g2, gl + 1e-6 * rho, gy + 1e-6 * rho).value;
  double at = spherical_psi(g2, gl, gy).value;
  CHECK(rel(at, near) < 1e-4);
}

TEST_CASE("Newton, Poisson and Green kernels at walls are continuous limits") {
  auto rs = build_root_system("B2");
  Eigen::VectorXd y = vec({0.5, 0.2});
  Eigen::VectorXd x0 = vec({0.3, 0.3});
  Eigen::VectorXd v = vec({1, 0});
  for (auto kind : {KernelKind::newton(), KernelKind::green()}) {
    auto at = kernel_w(rs, kind, x0, y);
    CHECK(at.mode == EvalMode::SingularLimit);
    double near = kernel_w(rs, kind, x0 + 1e-5 * v, y).value;
    CHECK(rel(at.value, near) < 1e-3);
  }
  Eigen::VectorXd s = vec({1, 1}) / std::sqrt(2.0);
  auto at = kernel_w(rs, KernelKind::poisson(), vec({0.4, 0.1}), s);
  CHECK(at.mode == EvalMode::SingularLimit);
  CHECK(at.value > 0);
  CHECK(rel(at.value, kernel_w(rs, KernelKind::poisson(), vec({0.4, 0.1}), vec({std::cos(0.7854), std::sin(0.7854)})).value) <
        1e-3);
}

TEST_CASE("Poisson numerator properties") {
  auto rs = build_root_system("B2");
  auto r = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double s = 0;
    for (const auto& w : enumerate_weyl(rs)) s += w.sign() * std::pow((x - w.apply(y)).norm(), -2.0);
    return s;
  };
  Eigen::VectorXd x = vec({0.5, 0.2}), y = vec({0.9, 0.3});
  CHECK(rel(r(x, y), r(y, x)) < 1e-12);
  for (const auto& w : enumerate_weyl(rs)) CHECK(rel(r(w.apply(x), y), w.sign() * r(x, y)) < 1e-10);
  double prev = std::abs(r(vec({0.5, 0.5 - 1e-2}), y));
  for (double e : {1e-3, 1e-4, 1e-5}) {
    double cur = std::abs(r(vec({0.5, 0.5 - e}), y));
    CHECK(cur < prev);
    prev = cur;
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd p = random_chamber_point(rs, rng, 0.98 * u(rng));
    Eigen::VectorXd q = random_chamber_point(rs, rng, 1.0);
    if (wall_distance(rs, q) < 1e-3) continue;
    CHECK(kernel_w(rs, KernelKind::poisson(), p, q).value > 0);
  }
}

TEST_CASE("Green kernel vanishes at the boundary") {
  auto rs = build_root_system("B2");
  Eigen::VectorXd y = vec({0.4, 0.1});
  Eigen::VectorXd dir = vec({0.8, 0.35}).normalized();
  double prev = std::abs(kernel_w(rs, KernelKind::green(), 0.9 * dir, y).value);
  for (double r : {0.99, 0.999, 0.9999}) {
    double cur = std::abs(kernel_w(rs, KernelKind::green(), r * dir, y).value);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("snap to face and extrapolation helpers") {
  auto rs = build_root_system("B2");
  auto x = make_chamber_point(rs, vec({1.0 + 1e-10, 1.0}), 1e-8);
  REQUIRE(x.vanishing.size() == 1);
  Eigen::VectorXd s = snap_to_face(rs, x.coords, x.vanishing);
  CHECK(s[0] == doctest::Approx(s[1]).epsilon(1e-15));
  std::vector<double> h{1, 2, 3};
  std::vector<double> f{3, 5, 7};
  CHECK(extrapolate_to_zero(h, f) == doctest::Approx(1));
}

TEST_CASE("requested precision does not bypass the singular route") {
  const auto g2 = build_root_system("G2");
  EvalOptions high;
  high.precision_bits = 200;
  const Eigen::VectorXd lambda = vec({3, 2, 1}), y = vec({1, 1, 0});
  const auto psi = spherical_psi(g2, lambda, y, high);
  CHECK(psi.mode == EvalMode::SingularLimit);
  CHECK(rel(psi.value, spherical_psi(g2, lambda, y).value) < 1e-14);
  const auto b2 = build_root_system("B2");
  const auto heat = kernel_w(b2, KernelKind::heat(0.5), vec({1, 0}), vec({0.8, 0.3}), high);
  CHECK(heat.mode == EvalMode::SingularLimit);
  CHECK(rel(heat.value, kernel_w(b2, KernelKind::heat(0.5), vec({1, 0}), vec({0.8, 0.3})).value) < 1e-14);
}
