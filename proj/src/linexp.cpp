#include "weylkern/linexp.hpp"

#include <map>

namespace weylkern {

namespace {

using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, Rational>;

Polynomial expand_product(const RootSystem& rs, const RootSubset& s) {
  const int n = rs.ambient_dim();
  Polynomial p{{Monomial(n, 0), Rational(1)}};
  for (int idx : s.indices) {
    VectorQ a = rs.root(idx);
    Polynomial q;
    for (const auto& [mono, c] : p) {
      for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        Monomial m = mono;
        ++m[i];
        q[m] += c * a[i];
      }
    }
    for (auto it = q.begin(); it != q.end();) it = it->second == 0 ? q.erase(it) : std::next(it);
    p = std::move(q);
    if (p.size() > 2000000) throw ResourceLimitError("monomial expansion too large");
  }
  return p;
}

}  // namespace

CConstantRoutes c_constant_routes(const RootSystem& rs, const RootSubset& s) {
  RootSubset closed = make_root_subset(rs, s.indices);
  if (!closed.pi_closure) throw DomainError("c constant requires a subset of the form of a point's vanishing roots");

  // p(d) q for homogeneous p, q of equal degree pairs monomials: sum c_m^2 m!.
  Rational formal = 0;
  for (const auto& [mono, c] : expand_product(rs, closed)) {
    BigInt f = 1;
    for (int e : mono)
      for (int k = 2; k <= e; ++k) f *= k;
    formal += c * c * Rational(f);
  }

  VectorQ rho_s = rho_of(rs, closed);
  Rational pi_rho = 1;
  for (int i : closed.indices) pi_rho *= rs.root(i).dot(rho_s);
  Rational closed_form = Rational(reflection_subgroup_order(rs, closed)) * pi_rho /
                         power_of_two(static_cast<int>(closed.indices.size()));
  return {formal, closed_form};
}

Rational c_constant(const RootSystem& rs, const RootSubset& s) {
  auto r = c_constant_routes(rs, s);
  if (r.formal != r.closed_form)
    throw ConsistencyError("c constant routes disagree: " + format_rational(r.formal) + " vs " +
                           format_rational(r.closed_form));
  return r.formal;
}

}  // namespace weylkern
