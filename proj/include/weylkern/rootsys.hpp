#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylkern/scalar.hpp"

namespace weylkern {

enum class Family { A, B, C, D, E, F, G };

struct RootSystemSpec {
  Family family = Family::A;
  int rank = 1;

  std::string name() const;
  // Accepts names such as "A2", "B1", "F4", "G2", "E6".
  static RootSystemSpec parse(std::string_view name);
  friend bool operator==(const RootSystemSpec&, const RootSystemSpec&) = default;
};

// (w x)_i = sign[i] * x[source[i]]
struct SignedPermutation {
  std::vector<int> source;
  std::vector<int> sign;
};

class WeylElement {
 public:
  WeylElement(IntMatrix numerator, std::int64_t denominator, int sign,
              std::optional<SignedPermutation> perm = std::nullopt);

  const IntMatrix& numerator() const { return numerator_; }
  std::int64_t denominator() const { return denominator_; }
  int sign() const { return sign_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::optional<SignedPermutation>& signed_permutation() const { return perm_; }
  MatrixQ exact_matrix() const;

  template <typename Scalar>
  Vector<Scalar> apply(const Vector<Scalar>& x) const;

 private:
  IntMatrix numerator_;
  std::int64_t denominator_;
  int sign_;
  Eigen::MatrixXd matrix_;
  std::optional<SignedPermutation> perm_;
};

template <typename Scalar>
Vector<Scalar> WeylElement::apply(const Vector<Scalar>& x) const {
  if (x.size() != numerator_.cols()) throw DomainError("dimension mismatch in Weyl action");
  if (perm_) {
    Vector<Scalar> out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      out[i] = x[perm_->source[i]];
      if (perm_->sign[i] < 0) out[i] = -out[i];
    }
    return out;
  }
  if constexpr (std::is_same_v<Scalar, double>) {
    return matrix_ * x;
  } else {
    Vector<Scalar> out = numerator_.cast<Scalar>() * x;
    if (denominator_ != 1) out /= Scalar(denominator_);
    return out;
  }
}

template <typename Scalar>
struct ChamberPoint {
  Vector<Scalar> coords;
  std::vector<int> vanishing;  // indices into the positive roots
  bool regular() const { return vanishing.empty(); }
};

struct RootSubset {
  std::vector<int> indices;
  bool pi_closure = false;
};

class RootSystem {
 public:
  struct Data;
  explicit RootSystem(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  const RootSystemSpec& spec() const;
  std::string name() const { return spec().name(); }
  int ambient_dim() const;
  // Dimension of the span of the roots (the intrinsic d).
  int rank() const;
  int gamma() const;
  // Positive roots as the rows of a gamma x ambient matrix.
  const MatrixQ& positive_roots() const;
  const Eigen::MatrixXd& positive_roots_d() const;
  VectorQ root(int i) const { return positive_roots().row(i).transpose(); }
  const std::vector<int>& simple_indices() const;
  const VectorQ& rho() const;
  const Eigen::MatrixXi& cartan_matrix() const;
  const std::vector<VectorQ>& fundamental_weights() const;
  // Coefficients of each positive root in the simple roots (gamma x rank).
  const Eigen::MatrixXi& simple_coefficients() const;
  // Orthonormal basis (columns) of the root span.
  const Eigen::MatrixXd& span_basis() const;
  // |W| from the classification; does not enumerate.
  std::uint64_t weyl_order() const;
  // Common denominator of the exact Weyl element matrices.
  std::int64_t weyl_denominator() const;
  // Lazily enumerated, then shared read-only.
  const std::vector<WeylElement>& weyl() const;

  const Data& data() const { return *data_; }

 private:
  std::shared_ptr<const Data> data_;
};

RootSystem build_root_system(const RootSystemSpec& spec);
inline RootSystem build_root_system(std::string_view name) {
  return build_root_system(RootSystemSpec::parse(name));
}

const std::vector<WeylElement>& enumerate_weyl(const RootSystem& rs);

// Streams every element of W (reverse search over the orbit of rho); no materialization.
// The callback returns false to stop early.
void for_each_weyl(const RootSystem& rs, const std::function<bool(const WeylElement&)>& visit);

inline VectorQ apply_weyl(const WeylElement& w, const VectorQ& x) { return w.apply(x); }
inline Eigen::VectorXd apply_weyl(const WeylElement& w, const Eigen::VectorXd& x) { return w.apply(x); }

RootSubset full_subset(const RootSystem& rs);
RootSubset make_root_subset(const RootSystem& rs, std::vector<int> indices);
RootSubset complement(const RootSystem& rs, const RootSubset& s);

template <typename Scalar>
Scalar pi_over(const RootSystem& rs, const RootSubset& s, const Vector<Scalar>& x) {
  Scalar out(1);
  if constexpr (std::is_same_v<Scalar, double>) {
    for (int i : s.indices) out *= rs.positive_roots_d().row(i).dot(x);
  } else {
    for (int i : s.indices) out *= from_rational<Scalar>(rs.root(i)).dot(x);
  }
  return out;
}

template <typename Scalar>
Scalar pi_full(const RootSystem& rs, const Vector<Scalar>& x) {
  Scalar out(1);
  for (int i = 0; i < rs.gamma(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      out *= rs.positive_roots_d().row(i).dot(x);
    } else {
      out *= from_rational<Scalar>(rs.root(i)).dot(x);
    }
  }
  return out;
}

VectorQ rho_of(const RootSystem& rs, const RootSubset& s);

// Order of the reflection subgroup generated by the roots of s.
std::uint64_t reflection_subgroup_order(const RootSystem& rs, const RootSubset& s);

std::vector<int> vanishing_roots(const RootSystem& rs, const VectorQ& x);
std::vector<int> vanishing_roots(const RootSystem& rs, const Eigen::VectorXd& x, double tol);

ChamberPoint<Rational> make_chamber_point(const RootSystem& rs, const VectorQ& x);
ChamberPoint<double> make_chamber_point(const RootSystem& rs, const Eigen::VectorXd& x, double tol = 1e-12);

bool in_root_span(const RootSystem& rs, const Eigen::VectorXd& x, double tol = 1e-10);
bool in_root_span(const RootSystem& rs, const VectorQ& x);

struct Stabilizer {
  std::vector<std::size_t> elements;  // indices into enumerate_weyl
  RootSubset roots;
};

Stabilizer stabilizer(const RootSystem& rs, const ChamberPoint<Rational>& x);

const std::vector<VectorQ>& fundamental_weights(const RootSystem& rs);

ChamberPoint<Rational> face_representative(const RootSystem& rs, const std::vector<int>& vanishing_simple,
                                           const std::vector<Rational>& coefficients);

struct Projection {
  ChamberPoint<double> point;
  std::size_t element;  // index into enumerate_weyl
};

Projection project_to_chamber(const RootSystem& rs, const Eigen::VectorXd& x);

// Cheap dominance test used for canonicalization; tolerance is relative to |x|.
bool in_closed_chamber(const RootSystem& rs, const Eigen::VectorXd& x, double tol = 1e-12);

// Smallest normalized root value min_a |a(x)| / (|a| |x|); 0 for x = 0.
double wall_distance(const RootSystem& rs, const Eigen::VectorXd& x);

MatrixQ inverse_exact(const MatrixQ& m);

nlohmann::json to_json(const RootSystem& rs);
RootSystem root_system_from_json(const nlohmann::json& doc);

}  // namespace weylkern
