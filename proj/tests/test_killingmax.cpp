#include <doctest.h>

#include <random>

#include "weylkern/killingmax.hpp"

using namespace weylkern;

namespace {

VectorQ q(std::initializer_list<int> v) {
  VectorQ out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (int x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("faces and representatives") {
  auto rs = build_root_system("B2");
  auto faces = all_faces(rs);
  REQUIRE(faces.size() == 4);
  CHECK(faces[0].representative.regular());
  CHECK(faces[0].representative.coords == q({3, 1}) / 2);
  CHECK(faces[3].representative.coords == q({0, 0}));
  CHECK(faces[1].vanishing_simple == std::vector<int>{0});
  CHECK_THROWS_AS(make_face(rs, 4), DomainError);
}

TEST_CASE("W(lambda, Y) by exact comparison") {
  auto rs = build_root_system("B2");
  auto l = make_chamber_point(rs, q({1, 1}));
  auto y = make_chamber_point(rs, q({1, 0}));
  auto w = w_set_exact(rs, l, y);
  CHECK(w.size() == 4);
  CHECK(product_set(rs, l, y) == w);
  auto zero = make_chamber_point(rs, q({0, 0}));
  CHECK(w_set_exact(rs, zero, y).size() == 8);
  auto reg = make_chamber_point(rs, q({3, 1}));
  CHECK(w_set_exact(rs, reg, make_chamber_point(rs, q({2, 1}))).size() == 1);
}

TEST_CASE("face pair reports") {
  auto rs = build_root_system("B2");
  auto faces = all_faces(rs);
  auto r = verify_face_pair(rs, faces[1], faces[2]);
  CHECK(r.holds);
  CHECK(r.w_set == 4);
  CHECK(r.stab_lambda == 2);
  CHECK(r.stab_y == 2);
  CHECK(r.intersection == 1);
  auto z = verify_face_pair(rs, faces[1], faces[3]);
  CHECK(z.holds);
  CHECK(z.w_set == 8);
}

TEST_CASE("dominance gaps are nonnegative") {
  for (const char* name : {"A1", "B2", "G2", "C3", "D4", "F4", "E6"}) {
    CAPTURE(name);
    CHECK(dominance_gap_check(build_root_system(name)));
  }
}

TEST_CASE("every face pair holds on the classical and exceptional systems") {
  for (const char* name : {"A1", "A2", "A3", "A4", "B1", "B2", "B3", "C2", "C3", "D2", "D3", "D4", "G2", "F4"}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    auto report = verify_system(rs);
    CHECK(report.all_hold);
    CHECK(report.pairs.size() == (std::size_t{1} << (2 * rs.rank())));
    for (const auto& p : report.pairs) {
      CHECK(p.product * p.intersection == p.stab_lambda * p.stab_y);
      CHECK(p.witnesses.empty());
    }
    // Symmetry in the two faces.
    const std::size_t n = std::size_t{1} << rs.rank();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(report.pairs[i * n + j].holds == report.pairs[j * n + i].holds);
  }
}

TEST_CASE("G2 singular pairs") {
  auto rs = build_root_system("G2");
  auto report = verify_system(rs);
  CHECK(report.all_hold);
  // Both faces singular and distinct walls, or both on the same wall.
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {1, 1}, {2, 2}}) {
    const auto& p = report.pairs[static_cast<std::size_t>(a * 4 + b)];
    CHECK(p.holds);
    CHECK(p.stab_lambda == 2);
    CHECK(p.stab_y == 2);
  }
}

TEST_CASE("fundamental weight criterion agrees with random face points") {
  for (const char* name : {"B3", "G2", "D4"}) {
    auto rs = build_root_system(name);
    auto faces = all_faces(rs);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> c(1, 9);
    for (const auto& fl : faces)
      for (const auto& fy : faces) {
        auto r = verify_face_pair(rs, fl, fy);
        for (int trial = 0; trial < 5; ++trial) {
          auto coeffs = [&](const Face& f) {
            std::vector<Rational> v(static_cast<std::size_t>(rs.rank()) - f.vanishing_simple.size());
            for (auto& x : v) x = Rational(c(rng), c(rng));
            return face_representative(rs, f.vanishing_simple, v);
          };
          auto l = coeffs(fl), y = coeffs(fy);
          CHECK(w_set_exact(rs, l, y).size() == r.w_set);
        }
      }
  }
}

TEST_CASE("larger systems and resource limits") {
  auto a5 = verify_system(build_root_system("A5"));
  CHECK(a5.all_hold);
  auto e8 = build_root_system("E8");
  CHECK_THROWS_AS(verify_system(e8, {true, true, 1}), ResourceLimitError);
  CHECK_THROWS_AS(verify_system(build_root_system("E6")), ResourceLimitError);
  CHECK_THROWS_AS(verify_system(build_root_system("E7")), ResourceLimitError);
}
