#include <doctest.h>

#include <map>
#include <random>

#include "weylkern/rootsys.hpp"

using namespace weylkern;

namespace {

VectorQ vq(std::initializer_list<Rational> xs) {
  VectorQ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

Eigen::VectorXd vd(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<std::int64_t> key(const IntMatrix& m) { return {m.data(), m.data() + m.size()}; }

}  // namespace

TEST_CASE("positive root counts and group orders") {
  struct Row {
    const char* name;
    int gamma;
    std::uint64_t order;
  };
  for (Row r : {Row{"A1", 1, 2}, Row{"A2", 3, 6}, Row{"A3", 6, 24}, Row{"A4", 10, 120}, Row{"B1", 1, 2},
                Row{"B2", 4, 8}, Row{"B3", 9, 48}, Row{"C2", 4, 8}, Row{"C3", 9, 48}, Row{"D2", 2, 4},
                Row{"D3", 6, 24}, Row{"D4", 12, 192}, Row{"G2", 6, 12}, Row{"F4", 24, 1152}, Row{"E6", 36, 51840},
                Row{"E7", 63, 2903040}, Row{"E8", 120, 696729600}}) {
    CAPTURE(r.name);
    RootSystem rs = build_root_system(r.name);
    CHECK(rs.gamma() == r.gamma);
    CHECK(rs.weyl_order() == r.order);
    if (r.order <= 51840) CHECK(enumerate_weyl(rs).size() == r.order);
  }
}

TEST_CASE("unsupported systems are rejected") {
  CHECK_THROWS_AS(build_root_system("C1"), UnsupportedError);
  CHECK_THROWS_AS(build_root_system("D1"), UnsupportedError);
  CHECK_THROWS_AS(build_root_system("F3"), UnsupportedError);
  CHECK_THROWS_AS(build_root_system("G3"), UnsupportedError);
  CHECK_THROWS_AS(build_root_system("E5"), UnsupportedError);
  CHECK_THROWS_AS(build_root_system("X2"), UnsupportedError);
  CHECK_THROWS_AS(build_root_system("B"), UnsupportedError);
}

TEST_CASE("A1 and B2 data") {
  RootSystem a1 = build_root_system("A1");
  CHECK(a1.gamma() == 1);
  CHECK(a1.root(0) == vq({1, -1}));
  CHECK(a1.rho() == vq({1, -1}));
  CHECK(a1.fundamental_weights()[0] == vq({Rational(1, 2), Rational(-1, 2)}));

  RootSystem b2 = build_root_system("B2");
  CHECK(b2.rho() == vq({3, 1}));
  CHECK(rho_of(b2, full_subset(b2)) == vq({3, 1}));
  CHECK(rho_of(b2, RootSubset{}) == vq({0, 0}));
  CHECK(b2.fundamental_weights()[0] == vq({1, 0}));
  CHECK(b2.fundamental_weights()[1] == vq({Rational(1, 2), Rational(1, 2)}));
  CHECK(pi_full<Rational>(b2, vq({2, 1})) == 6);
  CHECK(pi_over<Rational>(b2, full_subset(b2), vq({2, 1})) == 6);
  CHECK(pi_full<Rational>(b2, vq({1, 1})) == 0);
}

TEST_CASE("G2 lives on the slice and has the stated chamber") {
  RootSystem g2 = build_root_system("G2");
  CHECK(g2.ambient_dim() == 3);
  CHECK(g2.rank() == 2);
  Eigen::MatrixXi expected(2, 2);
  expected << 2, -3, -1, 2;
  CHECK(g2.cartan_matrix() == expected);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> u(-20, 20);
  for (int k = 0; k < 500; ++k) {
    int a = u(rng), b = u(rng);
    VectorQ h = vq({a, b, a - b});
    CHECK(in_root_span(g2, h));
    bool regular_dominant = true;
    for (int i = 0; i < g2.gamma(); ++i) regular_dominant = regular_dominant && g2.root(i).dot(h) > 0;
    CHECK(regular_dominant == (a > b && b > a - b && a - b > 0));
  }
  CHECK_FALSE(in_root_span(g2, vq({1, 0, 0})));
}

TEST_CASE("F4 chamber condition") {
  RootSystem f4 = build_root_system("F4");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(-6, 12);
  int inside = 0;
  for (int k = 0; k < 4000; ++k) {
    VectorQ x = vq({3 * u(rng), u(rng), u(rng), u(rng)});
    bool regular_dominant = true;
    for (int i = 0; i < f4.gamma(); ++i) regular_dominant = regular_dominant && f4.root(i).dot(x) > 0;
    bool stated = x[0] > x[1] + x[2] + x[3] && x[1] > x[2] && x[2] > x[3] && x[3] > 0;
    CHECK(regular_dominant == stated);
    inside += stated;
  }
  CHECK(inside > 0);
}

TEST_CASE("Weyl group signs") {
  RootSystem b2 = build_root_system("B2");
  const auto& w = enumerate_weyl(b2);
  int plus = 0;
  for (const auto& e : w) plus += e.sign() > 0;
  CHECK(plus == 4);
  CHECK(w[0].numerator() == IntMatrix::Identity(2, 2));

  for (const char* name : {"A1", "A3", "B1", "B3", "C3", "D2", "D4", "G2", "F4"}) {
    CAPTURE(name);
    RootSystem rs = build_root_system(name);
    const auto& group = enumerate_weyl(rs);
    int sum = 0;
    std::map<std::vector<std::int64_t>, std::size_t> index;
    for (std::size_t k = 0; k < group.size(); ++k) {
      sum += group[k].sign();
      double det = group[k].matrix().determinant();
      // Ambient determinant equals the sign on the root span when the span is everything.
      if (rs.rank() == rs.ambient_dim()) CHECK(det == doctest::Approx(group[k].sign()));
      index.emplace(key(group[k].numerator()), k);
    }
    CHECK(sum == 0);
    CHECK(index.size() == group.size());
    // Multiplicativity and closure, exhaustive.
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = 0; j < group.size(); ++j) {
        IntMatrix p = group[i].numerator() * group[j].numerator() / group[i].denominator();
        auto it = index.find(key(p));
        REQUIRE(it != index.end());
        if (group[it->second].sign() != group[i].sign() * group[j].sign()) FAIL("sign is not multiplicative");
      }
    }
  }
}

TEST_CASE("Weyl elements permute the roots and preserve inner products") {
  for (const char* name : {"B3", "G2", "F4", "D4", "A3"}) {
    CAPTURE(name);
    RootSystem rs = build_root_system(name);
    std::map<std::vector<Rational>, int> roots;
    for (int i = 0; i < rs.gamma(); ++i) {
      VectorQ r = rs.root(i);
      roots[{r.data(), r.data() + r.size()}] = 1;
      VectorQ m = -r;
      roots[{m.data(), m.data() + m.size()}] = -1;
    }
    VectorQ x = rs.rho() + rs.fundamental_weights()[0];
    for (const auto& w : enumerate_weyl(rs)) {
      int negatives = 0;
      for (int i = 0; i < rs.gamma(); ++i) {
        VectorQ img = w.apply(rs.root(i));
        auto it = roots.find({img.data(), img.data() + img.size()});
        REQUIRE(it != roots.end());
        negatives += it->second < 0;
      }
      CHECK((negatives % 2 == 0 ? 1 : -1) == w.sign());
      VectorQ wx = w.apply(x);
      CHECK(wx.dot(wx) == x.dot(x));
    }
  }
}

TEST_CASE("streaming enumeration visits the whole group") {
  for (const char* name : {"B3", "G2", "F4", "A4", "D4", "E6"}) {
    CAPTURE(name);
    RootSystem rs = build_root_system(name);
    std::size_t count = 0;
    int sum = 0;
    std::map<std::vector<std::int64_t>, int> seen;
    for_each_weyl(rs, [&](const WeylElement& w) {
      ++count;
      sum += w.sign();
      if (rs.weyl_order() <= 1152) seen[key(w.numerator() * (rs.weyl_denominator() / w.denominator()))] = w.sign();
      return true;
    });
    CHECK(count == rs.weyl_order());
    CHECK(sum == 0);
    if (rs.weyl_order() <= 1152) {
      CHECK(seen.size() == count);
      for (const auto& w : enumerate_weyl(rs)) CHECK(seen.at(key(w.numerator())) == w.sign());
    }
  }
  RootSystem e8 = build_root_system("E8");
  CHECK_THROWS_AS(for_each_weyl(e8, [](const WeylElement&) { return true; }), ResourceLimitError);
  CHECK_THROWS_AS(enumerate_weyl(e8), ResourceLimitError);
  CHECK_THROWS_AS(enumerate_weyl(build_root_system("E7")), ResourceLimitError);
}

TEST_CASE("apply_weyl examples") {
  RootSystem b2 = build_root_system("B2");
  const auto& w = enumerate_weyl(b2);
  VectorQ x = vq({3, 1});
  CHECK(apply_weyl(w[0], x) == x);
  bool found_swap = false, found_flip = false;
  for (const auto& e : w) {
    if (e.apply(x) == vq({1, 3})) {
      found_swap = true;
      CHECK(e.sign() == -1);
    }
    if (e.apply(x) == vq({-3, -1})) {
      found_flip = true;
      CHECK(e.sign() == 1);
    }
  }
  CHECK(found_swap);
  CHECK(found_flip);
  CHECK_THROWS_AS(apply_weyl(w[0], VectorQ(vq({1, 2, 3}))), DomainError);
}

TEST_CASE("pi is skew under W") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const char* name : {"B2", "G2", "A3", "F4"}) {
    RootSystem rs = build_root_system(name);
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd x = rs.span_basis() * Eigen::VectorXd::NullaryExpr(rs.rank(), [&] { return g(rng); });
      double p = pi_full<double>(rs, x);
      for (const auto& w : enumerate_weyl(rs))
        CHECK(pi_full<double>(rs, w.apply(x)) == doctest::Approx(w.sign() * p).epsilon(1e-9));
    }
  }
}

TEST_CASE("stabilizers") {
  RootSystem b2 = build_root_system("B2");
  auto s1 = stabilizer(b2, make_chamber_point(b2, vq({2, 1})));
  CHECK(s1.elements.size() == 1);
  CHECK(s1.roots.indices.empty());
  auto s2 = stabilizer(b2, make_chamber_point(b2, vq({1, 1})));
  CHECK(s2.elements.size() == 2);
  REQUIRE(s2.roots.indices.size() == 1);
  CHECK(b2.root(s2.roots.indices[0]) == vq({1, -1}));
  auto s3 = stabilizer(b2, make_chamber_point(b2, vq({0, 0})));
  CHECK(s3.elements.size() == 8);
  CHECK(s3.roots.indices.size() == 4);

  // Orbit-stabilizer on every face of a few systems.
  for (const char* name : {"B3", "G2", "F4", "D4", "A3"}) {
    CAPTURE(name);
    RootSystem rs = build_root_system(name);
    for (unsigned mask = 0; mask < (1u << rs.rank()); ++mask) {
      std::vector<int> vanish;
      std::vector<Rational> coeff;
      for (int i = 0; i < rs.rank(); ++i) {
        if (mask & (1u << i)) vanish.push_back(i);
        else coeff.push_back(Rational(i + 1, 2));
      }
      auto face = face_representative(rs, vanish, coeff);
      auto st = stabilizer(rs, face);
      std::set<std::vector<Rational>> orbit;
      for (const auto& w : enumerate_weyl(rs)) {
        VectorQ y = w.apply(face.coords);
        orbit.insert({y.data(), y.data() + y.size()});
      }
      CHECK(st.elements.size() * orbit.size() == rs.weyl_order());
      CHECK(st.roots.pi_closure);
    }
  }
}

TEST_CASE("fundamental weights are dual to the simple coroots") {
  for (const char* name : {"A1", "A4", "B1", "B4", "C3", "D2", "D5", "G2", "F4", "E6", "E7", "E8"}) {
    CAPTURE(name);
    RootSystem rs = build_root_system(name);
    const auto& om = fundamental_weights(rs);
    for (int i = 0; i < rs.rank(); ++i) {
      CHECK(in_root_span(rs, om[i]));
      for (int j = 0; j < rs.rank(); ++j) {
        VectorQ a = rs.root(rs.simple_indices()[j]);
        CHECK(om[i].dot(a) * 2 / a.dot(a) == (i == j ? 1 : 0));
      }
    }
    for (int k = 0; k < rs.gamma(); ++k)
      for (int i = 0; i < rs.rank(); ++i) CHECK(rs.simple_coefficients()(k, i) >= 0);
  }
}

TEST_CASE("face representatives") {
  RootSystem b2 = build_root_system("B2");
  auto f = face_representative(b2, {0}, {1});
  CHECK(f.coords == vq({Rational(1, 2), Rational(1, 2)}));
  REQUIRE(f.vanishing.size() == 1);
  CHECK(b2.root(f.vanishing[0]) == vq({1, -1}));
  auto g = face_representative(b2, {}, {1, 1});
  CHECK(g.coords == vq({Rational(3, 2), Rational(1, 2)}));
  CHECK(g.regular());
  auto o = face_representative(b2, {0, 1}, {});
  CHECK(o.coords.isZero());
  CHECK_THROWS_AS(face_representative(b2, {}, {1, 0}), DomainError);
  CHECK_THROWS_AS(face_representative(b2, {}, {1}), DomainError);
}

TEST_CASE("projection to the chamber") {
  RootSystem b2 = build_root_system("B2");
  auto p = project_to_chamber(b2, vd({-1, 2}));
  CHECK(p.point.coords.isApprox(vd({2, 1})));
  CHECK(enumerate_weyl(b2)[p.element].apply(vd({-1, 2})).isApprox(vd({2, 1})));
  auto q = project_to_chamber(b2, vd({2, 1}));
  CHECK(q.element == 0);
  auto r = project_to_chamber(b2, vd({1, 1}));
  CHECK(r.element == 0);
  CHECK(r.point.vanishing.size() == 1);
}

TEST_CASE("pi-closure detection") {
  RootSystem b2 = build_root_system("B2");
  // roots: e1-e2, e2, e1, e1+e2 in some order; find indices by value.
  auto find = [&](VectorQ v) {
    for (int i = 0; i < b2.gamma(); ++i)
      if (b2.root(i) == v) return i;
    return -1;
  };
  int a = find(vq({1, -1})), b = find(vq({0, 1})), c = find(vq({1, 0}));
  CHECK(make_root_subset(b2, {a}).pi_closure);
  CHECK(make_root_subset(b2, {}).pi_closure);
  CHECK_FALSE(make_root_subset(b2, {a, b}).pi_closure);
  CHECK_FALSE(make_root_subset(b2, {b, c}).pi_closure);
  CHECK(make_root_subset(b2, {0, 1, 2, 3}).pi_closure);
}

TEST_CASE("json export round trip") {
  for (const char* name : {"A2", "B2", "G2", "F4", "E6"}) {
    RootSystem rs = build_root_system(name);
    auto doc = to_json(rs);
    RootSystem back = root_system_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(back.spec() == rs.spec());
    CHECK(to_json(back) == doc);
  }
  auto f4 = to_json(build_root_system("F4"));
  CHECK(f4["family"] == "F4");
  CHECK(f4["rho"][0] == "11");
  auto doc = to_json(build_root_system("B2"));
  doc["positive_roots"][0][0] = "7/3";
  CHECK_THROWS_AS(root_system_from_json(doc), DomainError);
}
