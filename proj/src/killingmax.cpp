#include "weylkern/killingmax.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

namespace weylkern {

namespace {

// Fundamental weights scaled to a common integer lattice.
struct WeightLattice {
  int rank = 0;
  std::vector<IntVector> omega;
  IntMatrix gram;
};

WeightLattice scaled_weights(const RootSystem& rs) {
  WeightLattice out;
  out.rank = rs.rank();
  BigInt l = 1;
  for (const auto& w : rs.fundamental_weights())
    for (Eigen::Index k = 0; k < w.size(); ++k) l = boost::multiprecision::lcm(l, denominator(w[k]));
  for (const auto& w : rs.fundamental_weights()) {
    IntVector v(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) v[k] = static_cast<std::int64_t>(numerator(w[k] * Rational(l)));
    out.omega.push_back(v);
  }
  out.gram.resize(out.rank, out.rank);
  for (int i = 0; i < out.rank; ++i)
    for (int j = 0; j < out.rank; ++j) out.gram(i, j) = out.omega[i].dot(out.omega[j]);
  return out;
}

// Bit i*rank+j set when <omega_i, w omega_j> = <omega_i, omega_j>.
std::uint64_t equality_pattern(const WeightLattice& lat, const WeylElement& w, bool* gap_ok = nullptr) {
  std::uint64_t bits = 0;
  const std::int64_t den = w.denominator();
  for (int j = 0; j < lat.rank; ++j) {
    IntVector v = w.numerator() * lat.omega[j];
    for (int i = 0; i < lat.rank; ++i) {
      const std::int64_t lhs = lat.omega[i].dot(v);
      const std::int64_t rhs = lat.gram(i, j) * den;
      if (lhs == rhs) bits |= std::uint64_t{1} << (i * lat.rank + j);
      if (gap_ok && lhs > rhs) *gap_ok = false;
    }
  }
  return bits;
}

std::uint64_t pair_bits(int rank, std::uint32_t rows, std::uint32_t cols) {
  std::uint64_t bits = 0;
  for (int i = 0; i < rank; ++i)
    if ((rows >> i) & 1u)
      for (int j = 0; j < rank; ++j)
        if ((cols >> j) & 1u) bits |= std::uint64_t{1} << (i * rank + j);
  return bits;
}

std::uint64_t count_containing(const std::map<std::uint64_t, std::uint64_t>& hist, std::uint64_t need) {
  std::uint64_t n = 0;
  for (const auto& [p, c] : hist)
    if ((p & need) == need) n += c;
  return n;
}

IntVector weight_sum(const WeightLattice& lat, std::uint32_t free) {
  IntVector y = IntVector::Zero(lat.omega.empty() ? 0 : lat.omega[0].size());
  for (int j = 0; j < lat.rank; ++j)
    if ((free >> j) & 1u) y += lat.omega[j];
  return y;
}

struct VectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

std::vector<std::int64_t> as_key(const IntVector& v) { return {v.data(), v.data() + v.size()}; }

void check_budget(const RootSystem& rs, const KillingMaxOptions& opt) {
  if (rs.spec().family != Family::E) return;
  if (rs.rank() == 8) throw ResourceLimitError("E8 face-pair verification is refused (696729600 group elements)");
  if (rs.rank() == 7 && !opt.allow_e7) throw ResourceLimitError("E7 verification requires an explicit opt-in");
  if (rs.rank() == 6 && !opt.allow_e6) throw ResourceLimitError("E6 verification requires an explicit opt-in");
}

}  // namespace

Face make_face(const RootSystem& rs, std::uint32_t mask) {
  const int d = rs.rank();
  if (d >= 32 || (mask >> d) != 0) throw DomainError("face mask out of range");
  Face f;
  f.mask = mask;
  for (int i = 0; i < d; ++i)
    if ((mask >> i) & 1u) f.vanishing_simple.push_back(i);
  std::vector<Rational> ones(static_cast<std::size_t>(d) - f.vanishing_simple.size(), Rational(1));
  f.representative = face_representative(rs, f.vanishing_simple, ones);
  return f;
}

std::vector<Face> all_faces(const RootSystem& rs) {
  std::vector<Face> out;
  for (std::uint32_t m = 0; m < (1u << rs.rank()); ++m) out.push_back(make_face(rs, m));
  return out;
}

std::vector<std::size_t> w_set_exact(const RootSystem& rs, const ChamberPoint<Rational>& lambda,
                                     const ChamberPoint<Rational>& y) {
  const Rational base = lambda.coords.dot(y.coords);
  const auto& group = enumerate_weyl(rs);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < group.size(); ++k)
    if (lambda.coords.dot(group[k].apply(y.coords)) == base) out.push_back(k);
  return out;
}

std::vector<std::size_t> product_set(const RootSystem& rs, const ChamberPoint<Rational>& lambda,
                                     const ChamberPoint<Rational>& y) {
  const auto& group = enumerate_weyl(rs);
  std::unordered_map<std::string, std::size_t> index;
  auto key = [](const IntMatrix& m) {
    std::string s;
    for (Eigen::Index i = 0; i < m.size(); ++i) s += std::to_string(m.data()[i]) + ',';
    return s;
  };
  for (std::size_t k = 0; k < group.size(); ++k) index.emplace(key(group[k].numerator()), k);
  auto fixes = [&](const WeylElement& w, const VectorQ& x) { return w.apply(x) == x; };
  std::vector<std::size_t> sl, sy;
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (fixes(group[k], lambda.coords)) sl.push_back(k);
    if (fixes(group[k], y.coords)) sy.push_back(k);
  }
  std::set<std::size_t> out;
  const std::int64_t den = rs.weyl_denominator();
  for (std::size_t a : sl)
    for (std::size_t b : sy) {
      IntMatrix m = group[a].numerator() * group[b].numerator();
      if (den != 1) m /= den;
      auto it = index.find(key(m));
      if (it == index.end()) throw ConsistencyError("product of group elements not found in the enumeration");
      out.insert(it->second);
    }
  return {out.begin(), out.end()};
}

FacePairReport verify_face_pair(const RootSystem& rs, const Face& lambda, const Face& y) {
  const auto& group = enumerate_weyl(rs);
  const WeightLattice lat = scaled_weights(rs);
  const std::uint32_t full = (1u << lat.rank) - 1;
  const std::uint32_t il = full & ~lambda.mask, iy = full & ~y.mask;
  const std::uint64_t need = pair_bits(lat.rank, il, iy), need_l = pair_bits(lat.rank, il, il),
                      need_y = pair_bits(lat.rank, iy, iy);

  const IntVector yv = weight_sum(lat, iy);
  std::vector<std::uint64_t> patterns(group.size());
  std::unordered_map<std::vector<std::int64_t>, int, VectorHash> orbit;
  for (std::size_t k = 0; k < group.size(); ++k) {
    patterns[k] = equality_pattern(lat, group[k]);
    if ((patterns[k] & need_l) == need_l) orbit.emplace(as_key(group[k].numerator() * yv), 0);
  }
  FacePairReport r;
  r.face_lambda = lambda.mask;
  r.face_y = y.mask;
  for (std::size_t k = 0; k < group.size(); ++k) {
    const std::uint64_t p = patterns[k];
    const bool in_w = (p & need) == need;
    const bool in_product = orbit.count(as_key(group[k].numerator() * yv)) > 0;
    if (in_product && !in_w) throw ConsistencyError("product of stabilizers escapes W(lambda, Y)");
    r.w_set += in_w;
    r.product += in_product;
    r.stab_lambda += (p & need_l) == need_l;
    r.stab_y += (p & need_y) == need_y;
    r.intersection += (p & (need_l | need_y)) == (need_l | need_y);
    if (in_w && !in_product && r.witnesses.size() < 3) r.witnesses.push_back(group[k].exact_matrix());
  }
  if (r.product * r.intersection != r.stab_lambda * r.stab_y)
    throw ConsistencyError("cardinality law |G1 G2| |G1 ∩ G2| = |G1| |G2| violated");
  r.holds = r.w_set == r.product;
  return r;
}

SystemReport verify_system(const RootSystem& rs, const KillingMaxOptions& opt) {
  check_budget(rs, opt);
  const WeightLattice lat = scaled_weights(rs);
  const int d = lat.rank;
  const std::uint32_t full = (1u << d) - 1;
  SystemReport out;
  out.system = rs.name();
  out.group_order = rs.weyl_order();

  const bool streaming = rs.spec().family == Family::E && rs.rank() == 7;
  std::map<std::uint64_t, std::uint64_t> hist;
  if (streaming) {
    for_each_weyl(rs, [&](const WeylElement& w) {
      ++hist[equality_pattern(lat, w)];
      return true;
    });
  } else {
    const auto& group = enumerate_weyl(rs);
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, 64));
    std::vector<std::map<std::uint64_t, std::uint64_t>> partial(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (group.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        const std::size_t lo = t * chunk, hi = std::min(group.size(), lo + chunk);
        for (std::size_t k = lo; k < hi; ++k) ++partial[t][equality_pattern(lat, group[k])];
      });
    for (auto& th : pool) th.join();
    for (const auto& p : partial)
      for (const auto& [k, c] : p) hist[k] += c;
  }
  out.distinct_patterns = hist.size();

  std::uint64_t total = 0;
  for (const auto& [k, c] : hist) total += c;
  if (total != out.group_order) throw ConsistencyError("enumeration size differs from the group order");

  for (std::uint32_t ml = 0; ml <= full; ++ml)
    for (std::uint32_t my = 0; my <= full; ++my) {
      const std::uint32_t il = full & ~ml, iy = full & ~my;
      const std::uint64_t need_l = pair_bits(d, il, il), need_y = pair_bits(d, iy, iy);
      FacePairReport r;
      r.face_lambda = ml;
      r.face_y = my;
      r.w_set = count_containing(hist, pair_bits(d, il, iy));
      r.stab_lambda = count_containing(hist, need_l);
      r.stab_y = count_containing(hist, need_y);
      r.intersection = count_containing(hist, need_l | need_y);
      r.product = r.stab_lambda * r.stab_y / r.intersection;
      if (r.product > r.w_set) throw ConsistencyError("product of stabilizers escapes W(lambda, Y)");
      r.holds = r.w_set == r.product;
      out.all_hold = out.all_hold && r.holds;
      out.pairs.push_back(std::move(r));
    }

  // Witnesses for failing pairs, and an explicit product-set count on materialized groups.
  if (!streaming) {
    const auto faces = all_faces(rs);
    for (auto& r : out.pairs) {
      const bool small = out.group_order <= 1152;
      if (r.holds && !small) continue;
      FacePairReport full_report = verify_face_pair(rs, faces[r.face_lambda], faces[r.face_y]);
      if (full_report.w_set != r.w_set || full_report.product != r.product)
        throw ConsistencyError("pattern histogram and explicit product set disagree");
      r.witnesses = std::move(full_report.witnesses);
    }
  } else if (!out.all_hold) {
    for (auto& r : out.pairs) {
      if (r.holds) continue;
      const std::uint32_t il = full & ~r.face_lambda, iy = full & ~r.face_y;
      const std::uint64_t need = pair_bits(d, il, iy), need_l = pair_bits(d, il, il);
      const IntVector yv = weight_sum(lat, iy);
      std::set<std::vector<std::int64_t>> orbit;
      for_each_weyl(rs, [&](const WeylElement& w) {
        if ((equality_pattern(lat, w) & need_l) == need_l) orbit.insert(as_key(w.numerator() * yv));
        return true;
      });
      for_each_weyl(rs, [&](const WeylElement& w) {
        if ((equality_pattern(lat, w) & need) == need && !orbit.count(as_key(w.numerator() * yv)))
          r.witnesses.push_back(w.exact_matrix());
        return r.witnesses.size() < 3;
      });
    }
  }
  return out;
}

bool dominance_gap_check(const RootSystem& rs) {
  const WeightLattice lat = scaled_weights(rs);
  bool ok = true;
  if (rs.spec().family == Family::E && rs.rank() >= 7) {
    for_each_weyl(rs, [&](const WeylElement& w) {
      equality_pattern(lat, w, &ok);
      return ok;
    });
  } else {
    for (const auto& w : enumerate_weyl(rs)) {
      equality_pattern(lat, w, &ok);
      if (!ok) break;
    }
  }
  return ok;
}

}  // namespace weylkern
