#include "weylkern/rootsys.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "rootsys_data.hpp"

namespace weylkern {

namespace {

struct IntVectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::vector<std::int64_t> key_of(const IntMatrix& m) {
  return std::vector<std::int64_t>(m.data(), m.data() + m.size());
}

VectorQ unit(int n, int i, const Rational& c = 1) {
  VectorQ v = VectorQ::Zero(n);
  v[i] = c;
  return v;
}

std::vector<VectorQ> simple_roots_for(const RootSystemSpec& spec, int& ambient) {
  const int n = spec.rank;
  std::vector<VectorQ> s;
  switch (spec.family) {
    case Family::A:
      ambient = n + 1;
      for (int i = 0; i < n; ++i) s.push_back(unit(ambient, i) - unit(ambient, i + 1));
      break;
    case Family::B:
    case Family::C:
    case Family::D:
      ambient = n;
      for (int i = 0; i + 1 < n; ++i) s.push_back(unit(n, i) - unit(n, i + 1));
      if (spec.family == Family::B) s.push_back(unit(n, n - 1));
      if (spec.family == Family::C) s.push_back(unit(n, n - 1, 2));
      if (spec.family == Family::D) s.push_back(unit(n, n - 2) + unit(n, n - 1));
      break;
    case Family::G: {
      ambient = 3;
      VectorQ a(3), b(3);
      a << 1, -1, 2;
      b << 0, 1, -1;
      s = {a, b};
      break;
    }
    case Family::F: {
      ambient = 4;
      VectorQ last(4);
      last << Rational(1, 2), Rational(-1, 2), Rational(-1, 2), Rational(-1, 2);
      s = {unit(4, 1) - unit(4, 2), unit(4, 2) - unit(4, 3), unit(4, 3), last};
      break;
    }
    case Family::E: {
      ambient = 8;
      VectorQ a1(8);
      a1 << Rational(1, 2), Rational(-1, 2), Rational(-1, 2), Rational(-1, 2), Rational(-1, 2), Rational(-1, 2),
          Rational(-1, 2), Rational(1, 2);
      s.push_back(a1);
      s.push_back(unit(8, 0) + unit(8, 1));
      for (int i = 0; i + 2 < n; ++i) s.push_back(unit(8, i + 1) - unit(8, i));
      break;
    }
  }
  return s;
}

std::uint64_t classical_order(const RootSystemSpec& spec) {
  auto fact = [](int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  const int n = spec.rank;
  switch (spec.family) {
    case Family::A: return fact(n + 1);
    case Family::B:
    case Family::C: return (std::uint64_t{1} << n) * fact(n);
    case Family::D: return (std::uint64_t{1} << (n - 1)) * fact(n);
    case Family::G: return 12;
    case Family::F: return 1152;
    case Family::E: return n == 6 ? 51840 : n == 7 ? 2903040 : 696729600;
  }
  return 0;
}

bool is_classical(Family f) { return f == Family::A || f == Family::B || f == Family::C || f == Family::D; }

std::int64_t to_int64(const Rational& q) {
  if (mp::denominator(q) != 1) throw ConsistencyError("expected an integer value");
  return static_cast<std::int64_t>(mp::numerator(q));
}

// Indices of a maximal linearly independent subset (exact elimination, greedy in order).
std::vector<int> independent_subset(const std::vector<VectorQ>& vs) {
  std::vector<VectorQ> reduced;
  std::vector<int> pivots;
  std::vector<int> chosen;
  for (int k = 0; k < static_cast<int>(vs.size()); ++k) {
    VectorQ v = vs[k];
    for (std::size_t r = 0; r < reduced.size(); ++r) {
      if (v[pivots[r]] != 0) v -= (v[pivots[r]] / reduced[r][pivots[r]]) * reduced[r];
    }
    int p = -1;
    for (int i = 0; i < v.size(); ++i)
      if (v[i] != 0) {
        p = i;
        break;
      }
    if (p >= 0) {
      reduced.push_back(v);
      pivots.push_back(p);
      chosen.push_back(k);
    }
  }
  return chosen;
}

// Exact test that x lies in the span of the given independent vectors.
bool in_span_exact(const std::vector<VectorQ>& basis, const VectorQ& x) {
  if (basis.empty()) return x.isZero();
  const int k = static_cast<int>(basis.size());
  MatrixQ gram(k, k);
  VectorQ rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs[i] = basis[i].dot(x);
    for (int j = 0; j < k; ++j) gram(i, j) = basis[i].dot(basis[j]);
  }
  VectorQ c = inverse_exact(gram) * rhs;
  VectorQ y = VectorQ::Zero(x.size());
  for (int i = 0; i < k; ++i) y += c[i] * basis[i];
  return y == x;
}

}  // namespace

// ---------------------------------------------------------------- names

std::string RootSystemSpec::name() const {
  static const char* letters = "ABCDEFG";
  return std::string(1, letters[static_cast<int>(family)]) + std::to_string(rank);
}

RootSystemSpec RootSystemSpec::parse(std::string_view name) {
  if (name.size() < 2) throw UnsupportedError("unsupported root system '" + std::string(name) + "'");
  RootSystemSpec spec;
  switch (name[0]) {
    case 'A': case 'a': spec.family = Family::A; break;
    case 'B': case 'b': spec.family = Family::B; break;
    case 'C': case 'c': spec.family = Family::C; break;
    case 'D': case 'd': spec.family = Family::D; break;
    case 'E': case 'e': spec.family = Family::E; break;
    case 'F': case 'f': spec.family = Family::F; break;
    case 'G': case 'g': spec.family = Family::G; break;
    default: throw UnsupportedError("unsupported root system '" + std::string(name) + "'");
  }
  std::string digits(name.substr(1));
  if (digits.empty() || digits.size() > 3 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    throw UnsupportedError("unsupported root system '" + std::string(name) + "'");
  spec.rank = std::stoi(digits);
  return spec;
}

// ---------------------------------------------------------------- elements

WeylElement::WeylElement(IntMatrix numerator, std::int64_t denominator, int sign,
                         std::optional<SignedPermutation> perm)
    : numerator_(std::move(numerator)), denominator_(denominator), sign_(sign), perm_(std::move(perm)) {
  matrix_ = numerator_.cast<double>() / static_cast<double>(denominator_);
}

MatrixQ WeylElement::exact_matrix() const {
  MatrixQ m(numerator_.rows(), numerator_.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Rational(numerator_(i, j), denominator_);
  return m;
}

int weyl_sign(const RootSystem::Data& data, const IntMatrix& numerator) {
  IntVector u = numerator.transpose() * data.rho_int;
  IntVector v = data.roots_int * u;
  int negatives = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) negatives += v[i] < 0;
  return negatives % 2 == 0 ? 1 : -1;
}

// ---------------------------------------------------------------- accessors

const RootSystemSpec& RootSystem::spec() const { return data_->spec; }
int RootSystem::ambient_dim() const { return data_->ambient; }
int RootSystem::rank() const { return data_->rank; }
int RootSystem::gamma() const { return data_->gamma; }
const MatrixQ& RootSystem::positive_roots() const { return data_->roots; }
const Eigen::MatrixXd& RootSystem::positive_roots_d() const { return data_->roots_d; }
const std::vector<int>& RootSystem::simple_indices() const { return data_->simple; }
const VectorQ& RootSystem::rho() const { return data_->rho; }
const Eigen::MatrixXi& RootSystem::cartan_matrix() const { return data_->cartan; }
const std::vector<VectorQ>& RootSystem::fundamental_weights() const { return data_->omegas; }
const Eigen::MatrixXi& RootSystem::simple_coefficients() const { return data_->coefficients; }
const Eigen::MatrixXd& RootSystem::span_basis() const { return data_->basis; }
std::uint64_t RootSystem::weyl_order() const { return data_->order; }
std::int64_t RootSystem::weyl_denominator() const { return data_->weyl_den; }

// ---------------------------------------------------------------- construction

MatrixQ inverse_exact(const MatrixQ& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw DomainError("inverse of a non-square matrix");
  MatrixQ a = m;
  MatrixQ inv = MatrixQ::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    if (piv == n) throw DomainError("singular matrix");
    a.row(col).swap(a.row(piv));
    inv.row(col).swap(inv.row(piv));
    Rational p = a(col, col);
    a.row(col) /= p;
    inv.row(col) /= p;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rational f = a(r, col);
      a.row(r) -= f * a.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

RootSystem build_root_system(const RootSystemSpec& spec) {
  const int n = spec.rank;
  bool ok = false;
  switch (spec.family) {
    case Family::A: ok = n >= 1; break;
    case Family::B: ok = n >= 1; break;
    case Family::C: ok = n >= 2; break;
    case Family::D: ok = n >= 2; break;
    case Family::E: ok = n >= 6 && n <= 8; break;
    case Family::F: ok = n == 4; break;
    case Family::G: ok = n == 2; break;
  }
  if (!ok || n > 20) throw UnsupportedError("unsupported root system " + spec.name());

  auto data = std::make_shared<RootSystem::Data>();
  data->spec = spec;
  std::vector<VectorQ> simple = simple_roots_for(spec, data->ambient);
  const int N = data->ambient;
  data->rank = n;

  MatrixQ gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = simple[i].dot(simple[j]);
  MatrixQ gram_inv = inverse_exact(gram);

  auto reflect = [](const VectorQ& x, const VectorQ& a) -> VectorQ {
    return x - (2 * x.dot(a) / a.dot(a)) * a;
  };

  // Closure of the simple roots under simple reflections gives the full root set.
  std::set<std::vector<Rational>> seen;
  std::vector<VectorQ> all;
  auto as_key = [](const VectorQ& v) { return std::vector<Rational>(v.data(), v.data() + v.size()); };
  for (const auto& a : simple) {
    for (const VectorQ& v : {a, VectorQ(-a)}) {
      if (seen.insert(as_key(v)).second) all.push_back(v);
    }
  }
  for (std::size_t k = 0; k < all.size(); ++k) {
    for (const auto& a : simple) {
      VectorQ r = reflect(all[k], a);
      if (seen.insert(as_key(r)).second) all.push_back(r);
    }
  }

  struct Positive {
    VectorQ root;
    std::vector<int> coeff;
    int height;
  };
  std::vector<Positive> positives;
  for (const auto& r : all) {
    VectorQ rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = simple[i].dot(r);
    VectorQ c = gram_inv * rhs;
    std::vector<int> coeff(n);
    bool nonneg = true;
    int height = 0;
    for (int i = 0; i < n; ++i) {
      coeff[i] = static_cast<int>(to_int64(c[i]));
      nonneg = nonneg && coeff[i] >= 0;
      height += coeff[i];
    }
    if (nonneg) positives.push_back({r, coeff, height});
  }
  std::sort(positives.begin(), positives.end(), [](const Positive& a, const Positive& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.coeff > b.coeff;
  });

  data->gamma = static_cast<int>(positives.size());
  data->roots.resize(data->gamma, N);
  data->coefficients.resize(data->gamma, n);
  for (int k = 0; k < data->gamma; ++k) {
    data->roots.row(k) = positives[k].root.transpose();
    for (int i = 0; i < n; ++i) data->coefficients(k, i) = positives[k].coeff[i];
  }
  data->roots_d = from_rational<double>(data->roots);
  // Height-one roots come first, in the order of the simple roots.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < data->gamma; ++k) {
      if (data->roots.row(k).transpose() == simple[i]) data->simple.push_back(k);
    }
  }
  data->rho = data->roots.colwise().sum().transpose();

  data->cartan.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      data->cartan(i, j) = static_cast<int>(to_int64(2 * simple[i].dot(simple[j]) / simple[j].dot(simple[j])));
  MatrixQ cartan_q = data->cartan.cast<Rational>();
  MatrixQ cinv = inverse_exact(cartan_q);
  for (int i = 0; i < n; ++i) {
    VectorQ w = VectorQ::Zero(N);
    for (int k = 0; k < n; ++k) w += cinv(i, k) * simple[k];
    data->omegas.push_back(w);
  }

  Eigen::MatrixXd simple_d(N, n);
  for (int i = 0; i < n; ++i) simple_d.col(i) = from_rational<double>(simple[i]);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(simple_d);
  data->basis = qr.householderQ() * Eigen::MatrixXd::Identity(N, n);
  // Orient each basis vector so the simple-root coordinates are positive on the diagonal.
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) data->basis.col(i) *= -1.0;

  data->order = classical_order(spec);

  // Integer data: simple reflections with a common denominator.
  std::int64_t den = 1;
  std::vector<MatrixQ> refl;
  for (const auto& a : simple) {
    MatrixQ s = MatrixQ::Identity(N, N) - (Rational(2) / a.dot(a)) * (a * a.transpose());
    refl.push_back(s);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      den = std::lcm(den, static_cast<std::int64_t>(mp::denominator(s.data()[i])));
  }
  data->weyl_den = den;
  for (const auto& s : refl) {
    IntMatrix m(N, N);
    for (Eigen::Index i = 0; i < s.size(); ++i) m.data()[i] = to_int64(s.data()[i] * den);
    data->simple_reflections.push_back(m);
  }
  std::int64_t scale = 1;
  for (Eigen::Index i = 0; i < data->roots.size(); ++i)
    scale = std::lcm(scale, static_cast<std::int64_t>(mp::denominator(data->roots.data()[i])));
  data->root_scale = scale;
  data->roots_int.resize(data->gamma, N);
  for (Eigen::Index i = 0; i < data->roots.size(); ++i)
    data->roots_int.data()[i] = to_int64(data->roots.data()[i] * scale);
  data->rho_int = data->roots_int.colwise().sum().transpose();

  return RootSystem(std::move(data));
}

// ---------------------------------------------------------------- enumeration

namespace {

std::vector<WeylElement> enumerate_classical(const RootSystem::Data& data) {
  const Family f = data.spec.family;
  const int n = data.ambient;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const bool signs = f != Family::A;
  const std::uint32_t masks = signs ? (1u << n) : 1u;
  std::vector<WeylElement> out;
  out.reserve(static_cast<std::size_t>(data.order));
  do {
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      if (f == Family::D && std::popcount(mask) % 2 != 0) continue;
      SignedPermutation sp{perm, std::vector<int>(n, 1)};
      IntMatrix m = IntMatrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) sp.sign[i] = -1;
        m(i, perm[i]) = sp.sign[i];
      }
      int s = weyl_sign(data, m);
      out.emplace_back(std::move(m), 1, s, std::move(sp));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

IntMatrix compose(const RootSystem::Data& data, const IntMatrix& left, const IntMatrix& right) {
  IntMatrix p = left * right;
  if (data.weyl_den != 1) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p.data()[i] % data.weyl_den != 0) throw ConsistencyError("Weyl element left the integer lattice");
      p.data()[i] /= data.weyl_den;
    }
  }
  return p;
}

std::vector<WeylElement> enumerate_bfs(const RootSystem::Data& data) {
  const int N = data.ambient;
  std::unordered_map<std::vector<std::int64_t>, std::size_t, IntVectorHash> index;
  std::vector<IntMatrix> mats;
  std::vector<int> signs;
  IntMatrix id = IntMatrix::Identity(N, N) * data.weyl_den;
  mats.push_back(id);
  signs.push_back(1);
  index.emplace(key_of(id), 0);
  for (std::size_t k = 0; k < mats.size(); ++k) {
    for (const auto& s : data.simple_reflections) {
      IntMatrix m = compose(data, s, mats[k]);
      if (index.emplace(key_of(m), mats.size()).second) {
        mats.push_back(m);
        signs.push_back(-signs[k]);
      }
    }
  }
  std::vector<WeylElement> out;
  out.reserve(mats.size());
  for (std::size_t k = 0; k < mats.size(); ++k) {
    int s = weyl_sign(data, mats[k]);
    if (s != signs[k]) throw ConsistencyError("Weyl sign disagrees with word length parity");
    out.emplace_back(std::move(mats[k]), data.weyl_den, s);
  }
  return out;
}

}  // namespace

const std::vector<WeylElement>& RootSystem::weyl() const {
  const Data& d = *data_;
  std::call_once(d.weyl_once, [&d] {
    try {
      if (d.spec.family == Family::E && d.spec.rank >= 7)
        throw ResourceLimitError("the Weyl group of " + d.spec.name() + " has " + std::to_string(d.order) +
                                 " elements; materialization is refused (use streaming enumeration)");
      d.weyl = is_classical(d.spec.family) ? enumerate_classical(d) : enumerate_bfs(d);
      if (d.weyl.size() != d.order) throw ConsistencyError("Weyl group order mismatch for " + d.spec.name());
    } catch (...) {
      d.weyl_error = std::current_exception();
    }
  });
  if (d.weyl_error) std::rethrow_exception(d.weyl_error);
  return d.weyl;
}

const std::vector<WeylElement>& enumerate_weyl(const RootSystem& rs) { return rs.weyl(); }

void for_each_weyl(const RootSystem& rs, const std::function<bool(const WeylElement&)>& visit) {
  const auto& d = rs.data();
  if (d.spec.family == Family::E && d.spec.rank == 8)
    throw ResourceLimitError("E8 Weyl group enumeration (696729600 elements) is refused");
  const int n = d.rank;
  IntMatrix simple_int(n, d.ambient);
  for (int i = 0; i < n; ++i) simple_int.row(i) = d.roots_int.row(d.simple[i]);

  // mu = w * rho, scaled by weyl_den * root_scale.
  struct Frame {
    IntMatrix w;
    IntVector mu;
    int sign;
    int next;
  };
  std::vector<Frame> stack;
  stack.push_back({IntMatrix::Identity(d.ambient, d.ambient) * d.weyl_den, d.rho_int * d.weyl_den, 1, 0});
  if (!visit(WeylElement(stack.back().w, d.weyl_den, 1))) return;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == n) {
      stack.pop_back();
      continue;
    }
    const int j = f.next++;
    IntVector values = simple_int * f.mu;
    if (values[j] <= 0) continue;
    IntVector child_mu = d.simple_reflections[j] * f.mu / d.weyl_den;
    IntVector child_values = simple_int * child_mu;
    bool is_parent = true;
    for (int i = 0; i < j; ++i)
      if (child_values[i] < 0) {
        is_parent = false;
        break;
      }
    if (!is_parent) continue;
    IntMatrix child = compose(d, d.simple_reflections[j], f.w);
    int sign = -f.sign;
    if (!visit(WeylElement(child, d.weyl_den, sign))) return;
    stack.push_back({std::move(child), std::move(child_mu), sign, 0});
  }
}

// ---------------------------------------------------------------- subsets

RootSubset full_subset(const RootSystem& rs) {
  RootSubset s;
  s.indices.resize(rs.gamma());
  std::iota(s.indices.begin(), s.indices.end(), 0);
  s.pi_closure = true;
  return s;
}

RootSubset make_root_subset(const RootSystem& rs, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (int i : indices)
    if (i < 0 || i >= rs.gamma()) throw DomainError("root index out of range");
  std::vector<VectorQ> members;
  for (int i : indices) members.push_back(rs.root(i));
  std::vector<VectorQ> basis;
  for (int k : independent_subset(members)) basis.push_back(members[k]);
  std::vector<int> in_span;
  for (int i = 0; i < rs.gamma(); ++i)
    if (in_span_exact(basis, rs.root(i))) in_span.push_back(i);
  RootSubset s;
  s.pi_closure = in_span == indices;
  s.indices = std::move(indices);
  return s;
}

RootSubset complement(const RootSystem& rs, const RootSubset& s) {
  std::vector<int> out;
  for (int i = 0; i < rs.gamma(); ++i)
    if (!std::binary_search(s.indices.begin(), s.indices.end(), i)) out.push_back(i);
  RootSubset c;
  c.indices = std::move(out);
  return c;
}

VectorQ rho_of(const RootSystem& rs, const RootSubset& s) {
  VectorQ out = VectorQ::Zero(rs.ambient_dim());
  for (int i : s.indices) out += rs.root(i);
  return out;
}

std::uint64_t reflection_subgroup_order(const RootSystem& rs, const RootSubset& s) {
  const auto& d = rs.data();
  // rho is regular for every subsystem, so the subgroup acts freely on its orbit.
  std::unordered_set<std::vector<std::int64_t>, IntVectorHash> seen;
  std::vector<IntVector> queue{d.rho_int};
  seen.insert(std::vector<std::int64_t>(d.rho_int.data(), d.rho_int.data() + d.rho_int.size()));
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (int i : s.indices) {
      IntVector b = d.roots_int.row(i).transpose();
      std::int64_t num = 2 * queue[k].dot(b);
      std::int64_t den = b.dot(b);
      if (num % den != 0) throw ConsistencyError("non-integral coroot pairing");
      IntVector v = queue[k] - (num / den) * b;
      if (seen.insert(std::vector<std::int64_t>(v.data(), v.data() + v.size())).second) queue.push_back(v);
    }
  }
  return queue.size();
}

// ---------------------------------------------------------------- points

std::vector<int> vanishing_roots(const RootSystem& rs, const VectorQ& x) {
  if (x.size() != rs.ambient_dim()) throw DomainError("dimension mismatch");
  std::vector<int> out;
  for (int i = 0; i < rs.gamma(); ++i)
    if (rs.positive_roots().row(i).dot(x) == 0) out.push_back(i);
  return out;
}

std::vector<int> vanishing_roots(const RootSystem& rs, const Eigen::VectorXd& x, double tol) {
  if (x.size() != rs.ambient_dim()) throw DomainError("dimension mismatch");
  std::vector<int> out;
  const double nx = x.norm();
  for (int i = 0; i < rs.gamma(); ++i) {
    double v = rs.positive_roots_d().row(i).dot(x);
    if (nx == 0 || std::abs(v) <= tol * rs.positive_roots_d().row(i).norm() * nx) out.push_back(i);
  }
  return out;
}

bool in_root_span(const RootSystem& rs, const Eigen::VectorXd& x, double tol) {
  if (x.size() != rs.ambient_dim()) return false;
  const auto& b = rs.span_basis();
  Eigen::VectorXd r = x - b * (b.transpose() * x);
  return r.norm() <= tol * std::max(1.0, x.norm());
}

bool in_root_span(const RootSystem& rs, const VectorQ& x) {
  if (x.size() != rs.ambient_dim()) return false;
  std::vector<VectorQ> basis;
  for (int i : rs.simple_indices()) basis.push_back(rs.root(i));
  return in_span_exact(basis, x);
}

ChamberPoint<Rational> make_chamber_point(const RootSystem& rs, const VectorQ& x) {
  if (!in_root_span(rs, x)) throw DomainError("point is not in the span of the roots");
  for (int i = 0; i < rs.gamma(); ++i)
    if (rs.positive_roots().row(i).dot(x) < 0) throw DomainError("point is outside the closed chamber");
  return {x, vanishing_roots(rs, x)};
}

ChamberPoint<double> make_chamber_point(const RootSystem& rs, const Eigen::VectorXd& x, double tol) {
  if (!in_root_span(rs, x)) throw DomainError("point is not in the span of the roots");
  if (!in_closed_chamber(rs, x, tol)) throw DomainError("point is outside the closed chamber");
  return {x, vanishing_roots(rs, x, tol)};
}

bool in_closed_chamber(const RootSystem& rs, const Eigen::VectorXd& x, double tol) {
  const double nx = x.norm();
  for (int i : rs.simple_indices())
    if (rs.positive_roots_d().row(i).dot(x) < -tol * std::max(nx, 1e-300)) return false;
  return true;
}

double wall_distance(const RootSystem& rs, const Eigen::VectorXd& x) {
  const double nx = x.norm();
  if (nx == 0) return 0;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rs.gamma(); ++i) {
    auto a = rs.positive_roots_d().row(i);
    m = std::min(m, std::abs(a.dot(x)) / (a.norm() * nx));
  }
  return m;
}

Stabilizer stabilizer(const RootSystem& rs, const ChamberPoint<Rational>& x) {
  Stabilizer out;
  const auto& group = enumerate_weyl(rs);
  for (std::size_t k = 0; k < group.size(); ++k)
    if (group[k].apply(x.coords) == x.coords) out.elements.push_back(k);
  out.roots = make_root_subset(rs, vanishing_roots(rs, x.coords));
  if (out.elements.size() != reflection_subgroup_order(rs, out.roots))
    throw ConsistencyError("stabilizer order differs from its reflection subgroup order");
  return out;
}

const std::vector<VectorQ>& fundamental_weights(const RootSystem& rs) { return rs.fundamental_weights(); }

ChamberPoint<Rational> face_representative(const RootSystem& rs, const std::vector<int>& vanishing_simple,
                                           const std::vector<Rational>& coefficients) {
  const int n = rs.rank();
  std::vector<bool> vanish(n, false);
  for (int i : vanishing_simple) {
    if (i < 0 || i >= n) throw DomainError("simple root index out of range");
    vanish[i] = true;
  }
  const auto free = static_cast<std::size_t>(std::count(vanish.begin(), vanish.end(), false));
  if (coefficients.size() != free) throw DomainError("one coefficient is required per non-vanishing simple root");
  VectorQ x = VectorQ::Zero(rs.ambient_dim());
  std::size_t c = 0;
  for (int i = 0; i < n; ++i) {
    if (vanish[i]) continue;
    if (coefficients[c] <= 0) throw DomainError("face coefficients must be positive");
    x += coefficients[c++] * rs.fundamental_weights()[i];
  }
  return {x, vanishing_roots(rs, x)};
}

Projection project_to_chamber(const RootSystem& rs, const Eigen::VectorXd& x) {
  if (!in_root_span(rs, x)) throw DomainError("point is not in the span of the roots");
  const auto& group = enumerate_weyl(rs);
  for (std::size_t k = 0; k < group.size(); ++k) {
    Eigen::VectorXd y = group[k].apply(x);
    if (in_closed_chamber(rs, y)) return {ChamberPoint<double>{y, vanishing_roots(rs, y, 1e-12)}, k};
  }
  throw ConsistencyError("no Weyl image of the point lies in the closed chamber");
}

// ---------------------------------------------------------------- json

nlohmann::json to_json(const RootSystem& rs) {
  auto vec = [](const VectorQ& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(format_rational(v[i]));
    return a;
  };
  nlohmann::json doc;
  const auto& spec = rs.spec();
  std::string family = spec.name().substr(0, 1);
  if (spec.family == Family::E || spec.family == Family::F || spec.family == Family::G) family = spec.name();
  doc["family"] = family;
  doc["rank"] = spec.rank;
  doc["ambient_dim"] = rs.ambient_dim();
  doc["positive_roots"] = nlohmann::json::array();
  for (int i = 0; i < rs.gamma(); ++i) doc["positive_roots"].push_back(vec(rs.root(i)));
  doc["simple_indices"] = rs.simple_indices();
  doc["rho"] = vec(rs.rho());
  doc["cartan_matrix"] = nlohmann::json::array();
  for (int i = 0; i < rs.rank(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < rs.rank(); ++j) row.push_back(rs.cartan_matrix()(i, j));
    doc["cartan_matrix"].push_back(row);
  }
  doc["fundamental_weights"] = nlohmann::json::array();
  for (const auto& w : rs.fundamental_weights()) doc["fundamental_weights"].push_back(vec(w));
  return doc;
}

RootSystem root_system_from_json(const nlohmann::json& doc) {
  std::string family = doc.at("family").get<std::string>();
  int rank = doc.at("rank").get<int>();
  RootSystemSpec spec = RootSystemSpec::parse(family.size() == 1 ? family + std::to_string(rank) : family);
  if (spec.rank != rank) throw DomainError("family and rank disagree");
  RootSystem rs = build_root_system(spec);
  const auto& roots = doc.at("positive_roots");
  if (static_cast<int>(roots.size()) != rs.gamma()) throw DomainError("positive root count mismatch");
  for (int i = 0; i < rs.gamma(); ++i) {
    for (int j = 0; j < rs.ambient_dim(); ++j)
      if (parse_rational(roots[i][j].get<std::string>()) != rs.positive_roots()(i, j))
        throw DomainError("positive roots do not match the standard realization");
  }
  return rs;
}

}  // namespace weylkern
