#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weylkern/rootsys.hpp"

namespace weylkern {

struct Check {
  std::string name;
  double value = 0;      // deviation or count, compared against tolerance
  double tolerance = 0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::string system;
  std::vector<Check> checks;
  std::vector<std::string> skipped;  // checks that do not apply to this system
  bool pass() const;
};

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const SuiteReport& r);

// Every subset of positive roots of the form {a : a(X) = 0}, found as vanishing sets of the W-images
// of face representatives. Enumerates W.
std::vector<RootSubset> pi_closure_subsets(const RootSystem& rs);

// Regular chamber point sum_i u_i omega_i with u_i uniform in [lo, hi].
Eigen::VectorXd random_chamber_point(const RootSystem& rs, std::mt19937_64& rng, double lo = 0.2, double hi = 1.5);

// Exact checks: normalization identity and both c-constant routes on every pi-closure subset.
SuiteReport exact_suite(const RootSystem& rs);

// Floating-point formula equivalences at random regular pairs, relative tolerance 1e-10: determinant
// against alternating sum (type A), heat through the spherical function, killed heat by determinant.
SuiteReport formula_suite(const RootSystem& rs, std::uint64_t seed = 1, int pairs = 100);

// Exact and formula suites together.
SuiteReport identity_suite(const RootSystem& rs, std::uint64_t seed = 1);

// Quadrature checks in rank <= 2 (mass, Chapman-Kolmogorov, harmonic measure) with tolerance 1e-3, and
// positivity of the Poisson kernel at random admissible pairs in any rank.
SuiteReport conservation_suite(const RootSystem& rs, std::uint64_t seed = 1, int positivity_pairs = 1000);

// Finite-difference residuals of the heat, Poisson and Newton equations, relative tolerance 1e-4.
SuiteReport pde_suite(const RootSystem& rs);

std::vector<std::string> suite_names();
SuiteReport run_suite(std::string_view suite, const RootSystem& rs, std::uint64_t seed = 1);

}  // namespace weylkern
