#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weylkern/rootsys.hpp"

namespace weylkern {

// A face of the closed chamber, named by the simple roots vanishing on it.
struct Face {
  std::uint32_t mask = 0;  // bit i set: simple root i vanishes
  std::vector<int> vanishing_simple;
  ChamberPoint<Rational> representative;  // sum of the remaining fundamental weights
};

Face make_face(const RootSystem& rs, std::uint32_t mask);
// All 2^rank faces ordered by mask; mask 0 is the open chamber, the full mask the origin.
std::vector<Face> all_faces(const RootSystem& rs);

struct FacePairReport {
  std::uint32_t face_lambda = 0;
  std::uint32_t face_y = 0;
  bool holds = false;
  std::uint64_t w_set = 0;         // |W(lambda, Y)|
  std::uint64_t stab_lambda = 0;   // |W_lambda|
  std::uint64_t stab_y = 0;        // |W_Y|
  std::uint64_t intersection = 0;  // |W_lambda ∩ W_Y|
  std::uint64_t product = 0;       // |W_lambda W_Y|
  std::vector<MatrixQ> witnesses;  // up to three elements of W(lambda, Y) outside the product
};

// {w : <lambda, wY> = <lambda, Y>} by exact comparison; indices into enumerate_weyl.
std::vector<std::size_t> w_set_exact(const RootSystem& rs, const ChamberPoint<Rational>& lambda,
                                     const ChamberPoint<Rational>& y);

// W_lambda W_Y by explicit products with deduplication; indices into enumerate_weyl.
std::vector<std::size_t> product_set(const RootSystem& rs, const ChamberPoint<Rational>& lambda,
                                     const ChamberPoint<Rational>& y);

// Membership in W(lambda, Y) for every point of the two faces at once, through the pairings of
// fundamental weights.
FacePairReport verify_face_pair(const RootSystem& rs, const Face& lambda, const Face& y);

struct SystemReport {
  std::string system;
  std::vector<FacePairReport> pairs;  // ordered by (face_lambda, face_y)
  bool all_hold = true;
  std::uint64_t group_order = 0;
  std::uint64_t distinct_patterns = 0;  // distinct equality patterns seen over W
};

struct KillingMaxOptions {
  bool allow_e6 = false;
  bool allow_e7 = false;
  unsigned threads = 1;
};

// Every face pair. E6 and E7 need explicit opt-in; E8 is refused.
SystemReport verify_system(const RootSystem& rs, const KillingMaxOptions& options = {});

// <omega_i, omega_j> - <omega_i, w omega_j> >= 0 for all fundamental weights and all w.
bool dominance_gap_check(const RootSystem& rs);

}  // namespace weylkern
