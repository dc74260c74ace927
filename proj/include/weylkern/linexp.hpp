#pragma once

#include <vector>

#include "weylkern/rootsys.hpp"

namespace weylkern {

// c * prod_k <factors[k], Y> * exp(<exponent, Y>)
template <typename Scalar>
struct LinExpTerm {
  Scalar coeff;
  std::vector<Vector<Scalar>> factors;
  Vector<Scalar> exponent;
};

template <typename Scalar>
class LinExpPoly {
 public:
  explicit LinExpPoly(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::vector<LinExpTerm<Scalar>>& terms() const { return terms_; }

  void add(LinExpTerm<Scalar> term) {
    if (term.exponent.size() == 0) term.exponent = Vector<Scalar>::Zero(dim_);
    terms_.push_back(std::move(term));
  }

  // Directional derivative along h by the product rule; zero terms are dropped.
  LinExpPoly derivative(const Vector<Scalar>& h) const {
    LinExpPoly out(dim_);
    for (const auto& t : terms_) {
      Scalar e = t.exponent.dot(h);
      if (e != 0) out.terms_.push_back({t.coeff * e, t.factors, t.exponent});
      for (std::size_t k = 0; k < t.factors.size(); ++k) {
        Scalar f = t.factors[k].dot(h);
        if (f == 0) continue;
        LinExpTerm<Scalar> d{t.coeff * f, {}, t.exponent};
        d.factors.reserve(t.factors.size() - 1);
        for (std::size_t j = 0; j < t.factors.size(); ++j)
          if (j != k) d.factors.push_back(t.factors[j]);
        out.terms_.push_back(std::move(d));
      }
    }
    return out;
  }

  // Exact for Scalar = Rational only when every exponent vanishes.
  Scalar evaluate(const Vector<Scalar>& y) const {
    Scalar sum(0);
    for (const auto& t : terms_) sum += t.coeff * product(t.factors, y) * exp_of(t.exponent.dot(y));
    return sum;
  }

  // Value at y of the iterated derivative along all directions, without expanding the product rule.
  // Subset dynamic programming over which directions hit which factor; the rest hit the exponential.
  Scalar derivative_at(const std::vector<Vector<Scalar>>& directions, const Vector<Scalar>& y) const {
    const std::size_t m = directions.size();
    if (m > 24) throw ResourceLimitError("too many derivative directions");
    const std::size_t full = std::size_t{1} << m;
    Scalar total(0);
    std::vector<Scalar> dp(full), next(full);
    for (const auto& t : terms_) {
      std::fill(dp.begin(), dp.end(), Scalar(0));
      dp[0] = Scalar(1);
      for (const auto& f : t.factors) {
        Scalar fy = f.dot(y);
        std::vector<Scalar> fh(m);
        for (std::size_t k = 0; k < m; ++k) fh[k] = f.dot(directions[k]);
        for (std::size_t mask = 0; mask < full; ++mask) {
          Scalar v = dp[mask] * fy;
          for (std::size_t k = 0; k < m; ++k)
            if ((mask >> k) & 1u) v += dp[mask ^ (std::size_t{1} << k)] * fh[k];
          next[mask] = v;
        }
        std::swap(dp, next);
      }
      std::vector<Scalar> eh(m);
      for (std::size_t k = 0; k < m; ++k) eh[k] = t.exponent.dot(directions[k]);
      Scalar acc(0);
      for (std::size_t mask = 0; mask < full; ++mask) {
        if (dp[mask] == 0) continue;
        Scalar v = dp[mask];
        for (std::size_t k = 0; k < m; ++k)
          if (!((mask >> k) & 1u)) v *= eh[k];
        acc += v;
      }
      total += t.coeff * acc * exp_of(t.exponent.dot(y));
    }
    return total;
  }

 private:
  static Scalar product(const std::vector<Vector<Scalar>>& fs, const Vector<Scalar>& y) {
    Scalar p(1);
    for (const auto& f : fs) p *= f.dot(y);
    return p;
  }
  static Scalar exp_of(const Scalar& x) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      if (x != 0) throw DomainError("exponential factor cannot be evaluated exactly");
      return Scalar(1);
    } else {
      using std::exp;
      return exp(x);
    }
  }

  int dim_;
  std::vector<LinExpTerm<Scalar>> terms_;
};

// prod_{a in s} d/dH_a applied formally.
template <typename Scalar>
LinExpPoly<Scalar> pi_derivative_apply(const RootSystem& rs, const LinExpPoly<Scalar>& p, const RootSubset& s) {
  LinExpPoly<Scalar> out = p;
  for (int i : s.indices) out = out.derivative(from_rational<Scalar>(rs.root(i)));
  return out;
}

// The polynomial pi_S as a one-term LinExpPoly.
template <typename Scalar>
LinExpPoly<Scalar> pi_polynomial(const RootSystem& rs, const RootSubset& s) {
  LinExpPoly<Scalar> p(rs.ambient_dim());
  LinExpTerm<Scalar> t{Scalar(1), {}, Vector<Scalar>::Zero(rs.ambient_dim())};
  for (int i : s.indices) t.factors.push_back(from_rational<Scalar>(rs.root(i)));
  p.add(std::move(t));
  return p;
}

struct CConstantRoutes {
  Rational formal;       // d(pi_S)(pi_S) by exact differentiation in the monomial basis
  Rational closed_form;  // |W_S| pi_S(rho_S) / 2^{gamma_S}
};

CConstantRoutes c_constant_routes(const RootSystem& rs, const RootSubset& s);
// Throws ConsistencyError when the two routes disagree.
Rational c_constant(const RootSystem& rs, const RootSubset& s);

}  // namespace weylkern
