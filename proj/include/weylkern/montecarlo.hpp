#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylkern/dyson.hpp"

namespace weylkern {

enum class Scheme { Euler, EulerBridge };

std::string to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t paths = 100000;
  double dt = 1e-3;
  Scheme scheme = Scheme::EulerBridge;
  double max_time = 50;
  unsigned threads = 0;  // 0: hardware concurrency
  // Conditioned process: dt_eff = min(dt, kappa * distance^2) to the walls and, for exits, to the sphere.
  double kappa = 0.1;
  double dt_min = 1e-18;
  // A path counts as exited once it is this close to the unit sphere.
  double exit_epsilon = 1e-5;
};

nlohmann::json to_json(const SimConfig& cfg);

struct EmpiricalMeasure {
  std::vector<Eigen::VectorXd> points;  // endpoints (or exit points) in path order
  std::size_t paths = 0;
  std::size_t killed = 0;      // left the chamber (killed process)
  std::size_t aborted = 0;     // step size fell below dt_min
  std::size_t unfinished = 0;  // not exited by max_time (exit measure)
  SimConfig config;
  double survival_fraction() const { return paths == 0 ? 0 : static_cast<double>(points.size()) / paths; }
};

// Brownian motion with generator Delta, killed on leaving the open chamber.
EmpiricalMeasure simulate_killed(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const SimConfig& cfg);

// dX = 2 grad log pi(X) dt + sqrt(2) dB.
EmpiricalMeasure simulate_dyson(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const SimConfig& cfg);

// Exit points of the conditioned process from the unit ball, projected to the sphere.
EmpiricalMeasure exit_measure(const RootSystem& rs, const Eigen::VectorXd& x0, const SimConfig& cfg);

struct Bin {
  std::vector<double> lo, hi;  // (r) in rank 1, (r, theta) in rank 2, (theta) on the sphere
  std::string label;           // set for categorical bins such as "killed"
  double count = 0;
  double expected = 0;
  bool excluded = false;
};

struct Histogram {
  std::string coordinates;  // "r", "r,theta" or "theta"
  std::vector<Bin> bins;
  double total() const;
};

// Bins of equal expected mass under the density, radial in rank 1, radial x angular in rank 2; the
// remaining mass (killed paths) forms one categorical bin when the density has total mass < 1.
// radial_bins <= 0 selects 40 in rank 1 and 8 in rank 2.
Histogram killed_histogram(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const EmpiricalMeasure& m,
                           int radial_bins = 0, int angular_bins = 5);
Histogram dyson_histogram(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const EmpiricalMeasure& m,
                          int radial_bins = 0, int angular_bins = 5);
// Angular bins on the sphere; bins whose closure meets a wall are marked excluded.
Histogram exit_histogram(const RootSystem& rs, const Eigen::VectorXd& x0, const EmpiricalMeasure& m,
                         int angular_bins = 10);

struct ComparisonReport {
  std::string statistic;
  double value = 0;
  double threshold = 0;
  bool pass = false;
  nlohmann::json metadata;
};

// Pearson statistic over the bins that are not excluded, with expected counts renormalized to the
// observed total of those bins; threshold is the (1 - level) quantile with bins - 1 degrees of freedom.
ComparisonReport chi_square(const Histogram& h, double level = 0.01);

using SpaceTimeFunction = std::function<double(const Eigen::VectorXd& x, double t)>;

// t > 0: compare against the time derivative at t; t = 0: the function is harmonic away from the pole.
struct PdeTarget {
  double t = 0;
  Eigen::VectorXd pole;
};

// Relative residual of pi^{-1} Delta(pi f) - df/dt at the sample points, by central differences.
ComparisonReport pde_residual(const RootSystem& rs, const SpaceTimeFunction& f, const PdeTarget& target,
                              const std::vector<Eigen::VectorXd>& xs, double h = 1e-3, double tol = 1e-4);

// Relative residual of Delta^W K = pi^{-1} Delta(pi K) against dK/dt (heat) or 0, in X with Y fixed,
// by central differences with step h; the report also carries the residual at h / 2.
ComparisonReport pde_residual(const RootSystem& rs, const KernelKind& kind, const std::vector<Eigen::VectorXd>& xs,
                              const Eigen::VectorXd& y, double h = 1e-3, double tol = 1e-4);

}  // namespace weylkern
