#include "weylkern/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "weylkern/quadrature.hpp"

namespace weylkern {

namespace {

// Walls in intrinsic coordinates: rows are unit normals of the positive roots.
struct Geometry {
  Eigen::MatrixXd basis;    // ambient x d, orthonormal
  Eigen::MatrixXd normals;  // gamma x d
  Eigen::MatrixXd simple;   // rank x d, unit normals of the simple roots
  Eigen::MatrixXd drift;    // gamma x d, the roots themselves
};

Geometry make_geometry(const RootSystem& rs) {
  Geometry g;
  g.basis = rs.span_basis();
  const Eigen::MatrixXd roots = rs.positive_roots_d() * g.basis;
  g.normals = roots.rowwise().normalized();
  g.drift = roots;
  g.simple.resize(static_cast<Eigen::Index>(rs.simple_indices().size()), roots.cols());
  for (std::size_t i = 0; i < rs.simple_indices().size(); ++i)
    g.simple.row(static_cast<Eigen::Index>(i)) = g.normals.row(rs.simple_indices()[i]);
  return g;
}

void check_config(const SimConfig& cfg, double t) {
  if (cfg.paths < 1) throw DomainError("paths must be at least 1");
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw DomainError("dt must be positive");
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("t must be positive");
  if (cfg.dt > cfg.max_time) throw DomainError("dt exceeds max_time");
}

Eigen::VectorXd intrinsic_start(const RootSystem& rs, const Geometry& g, const Eigen::VectorXd& x0) {
  if (x0.size() != rs.ambient_dim() || !in_root_span(rs, x0)) throw DomainError("X0 is not in the span of the roots");
  Eigen::VectorXd z = g.basis.transpose() * x0;
  if ((g.simple * z).minCoeff() <= 0) throw DomainError("X0 must lie in the open chamber");
  return z;
}

unsigned thread_count(const SimConfig& cfg) {
  unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, cfg.paths));
}

std::mt19937_64 path_rng(std::uint64_t seed, std::size_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(std::uint64_t{path} >> 32)};
  return std::mt19937_64(seq);
}

enum class Outcome { Done, Killed, Aborted, Unfinished };

struct PathResult {
  Outcome outcome = Outcome::Done;
  Eigen::VectorXd z;
};

// Runs `path(index, rng)` for every path, split into contiguous blocks per thread, and merges in path order.
template <typename PathFn>
EmpiricalMeasure run_paths(const Geometry& g, const SimConfig& cfg, PathFn path) {
  std::vector<PathResult> results(cfg.paths);
  const unsigned n = thread_count(cfg);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = path_rng(cfg.seed, i);
      results[i] = path(rng);
    }
  };
  if (n <= 1) {
    work(0, cfg.paths);
  } else {
    std::vector<std::thread> pool;
    const std::size_t block = (cfg.paths + n - 1) / n;
    for (unsigned k = 0; k < n; ++k) {
      const std::size_t b = k * block, e = std::min(cfg.paths, b + block);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  EmpiricalMeasure m;
  m.paths = cfg.paths;
  m.config = cfg;
  for (auto& r : results) {
    switch (r.outcome) {
      case Outcome::Done:
        m.points.push_back(g.basis * r.z);
        break;
      case Outcome::Killed:
        ++m.killed;
        break;
      case Outcome::Aborted:
        ++m.aborted;
        break;
      case Outcome::Unfinished:
        ++m.unfinished;
        break;
    }
  }
  return m;
}

// One step of the conditioned process from z with the given noise; returns the accepted step size or 0
// when the step had to be refined below dt_min.
double dyson_step(const Geometry& g, Eigen::VectorXd& z, const Eigen::VectorXd& xi, double dt, const SimConfig& cfg,
                  bool inside_ball, Eigen::VectorXd& drift, Eigen::VectorXd& trial) {
  const Eigen::VectorXd dist = g.normals * z;
  const double dmin = dist.minCoeff();
  double limit = dmin * dmin;
  if (inside_ball) {
    const double s = 1 - z.norm();
    limit = std::min(limit, s * s);
  }
  double h = std::min(dt, cfg.kappa * limit);
  // grad log pi = sum_a a / <a, X>
  drift.setZero();
  const Eigen::VectorXd values = g.drift * z;
  for (Eigen::Index a = 0; a < values.size(); ++a) drift += g.drift.row(a).transpose() / values[a];
  while (h >= cfg.dt_min) {
    trial = z + 2 * h * drift + std::sqrt(2 * h) * xi;
    if ((g.simple * trial).minCoeff() > 0) {
      z = trial;
      return h;
    }
    h /= 2;
  }
  return 0;
}

double cumulative_at(const std::vector<double>& grid, const std::vector<double>& cdf, double target) {
  auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.begin()) return grid.front();
  if (it == cdf.end()) return grid.back();
  const std::size_t k = static_cast<std::size_t>(it - cdf.begin());
  const double c0 = cdf[k - 1], c1 = cdf[k];
  const double f = c1 > c0 ? (target - c0) / (c1 - c0) : 0;
  return grid[k - 1] + f * (grid[k] - grid[k - 1]);
}

// Edges of `bins` intervals of equal mass for a density tabulated through cell integrals on [a, b].
std::vector<double> equal_mass_edges(const std::function<double(double)>& cell_mass_density, double a, double b,
                                     int cells, int bins) {
  std::vector<double> grid(static_cast<std::size_t>(cells) + 1), cdf(grid.size(), 0.0);
  for (int i = 0; i <= cells; ++i) grid[static_cast<std::size_t>(i)] = a + (b - a) * i / cells;
  for (int i = 0; i < cells; ++i) {
    const auto k = static_cast<std::size_t>(i);
    cdf[k + 1] = cdf[k] + std::max(0.0, integrate_1d(cell_mass_density, grid[k], grid[k + 1], 1e-6).value);
  }
  std::vector<double> edges{a};
  for (int j = 1; j < bins; ++j) edges.push_back(cumulative_at(grid, cdf, cdf.back() * j / bins));
  edges.push_back(b);
  return edges;
}

struct PolarPoint {
  double r, theta;
};

PolarPoint polar(const RootSystem& rs, const Eigen::VectorXd& y) {
  if (rs.rank() == 1) return {y.dot(chamber_ray(rs)), 0};
  const ChamberWedge w = chamber_wedge(rs);
  return {y.norm(), std::clamp(std::atan2(y.dot(w.e1), y.dot(w.e0)), 0.0, w.angle)};
}

std::size_t locate(const std::vector<double>& edges, double v) {
  auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, v);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Histogram density_histogram(const RootSystem& rs, const std::function<double(const Eigen::VectorXd&)>& density,
                            double radius, const EmpiricalMeasure& m, int radial_bins, int angular_bins,
                            bool deficit_bin) {
  if (rs.rank() > 2) throw UnsupportedError("histograms are implemented for rank 1 and 2");
  if (radial_bins <= 0) radial_bins = rs.rank() == 1 ? 40 : 8;
  if (angular_bins < 1) throw DomainError("angular_bins must be positive");
  const double n = static_cast<double>(m.paths);
  Histogram h;
  if (rs.rank() == 1) {
    h.coordinates = "r";
    const Eigen::VectorXd e = chamber_ray(rs);
    auto f = [&](double r) { return r <= 0 ? 0.0 : density(r * e); };
    auto edges = equal_mass_edges(f, 0, radius, 2000, radial_bins);
    for (int i = 0; i < radial_bins; ++i) {
      Bin b;
      b.lo = {edges[static_cast<std::size_t>(i)]};
      b.hi = {i + 1 == radial_bins ? std::numeric_limits<double>::infinity() : edges[static_cast<std::size_t>(i) + 1]};
      b.expected = n * integrate_1d(f, edges[static_cast<std::size_t>(i)], edges[static_cast<std::size_t>(i) + 1], 1e-10).value;
      h.bins.push_back(b);
    }
    for (const auto& p : m.points) h.bins[locate(edges, polar(rs, p).r)].count += 1;
  } else {
    h.coordinates = "r,theta";
    const ChamberWedge w = chamber_wedge(rs);
    auto f = [&](double r, double th) { return r <= 0 ? 0.0 : density(r * w.direction(th)) * r; };
    auto radial = [&](double r) { return integrate_1d([&](double th) { return f(r, th); }, 0, w.angle, 1e-8).value; };
    auto redges = equal_mass_edges(radial, 0, radius, 300, radial_bins);
    std::vector<std::vector<double>> aedges;
    for (int i = 0; i < radial_bins; ++i) {
      const double r0 = redges[static_cast<std::size_t>(i)], r1 = redges[static_cast<std::size_t>(i) + 1];
      auto angular = [&](double th) { return integrate_1d([&](double r) { return f(r, th); }, r0, r1, 1e-8).value; };
      aedges.push_back(equal_mass_edges(angular, 0, w.angle, 100, angular_bins));
      for (int j = 0; j < angular_bins; ++j) {
        const double t0 = aedges.back()[static_cast<std::size_t>(j)], t1 = aedges.back()[static_cast<std::size_t>(j) + 1];
        Bin b;
        b.lo = {r0, t0};
        b.hi = {i + 1 == radial_bins ? std::numeric_limits<double>::infinity() : r1, t1};
        b.expected = n * integrate_1d([&](double th) {
                           return integrate_1d([&](double r) { return f(r, th); }, r0, r1, 1e-11).value;
                         }, t0, t1, 1e-10).value;
        h.bins.push_back(b);
      }
    }
    for (const auto& p : m.points) {
      const PolarPoint q = polar(rs, p);
      const std::size_t i = locate(redges, q.r);
      const std::size_t j = locate(aedges[i], q.theta);
      h.bins[i * static_cast<std::size_t>(angular_bins) + j].count += 1;
    }
  }
  double expected = 0;
  for (const auto& b : h.bins) expected += b.expected;
  if (deficit_bin) {
    Bin k;
    k.label = "killed";
    k.count = static_cast<double>(m.paths - m.points.size());
    k.expected = std::max(0.0, n - expected);
    h.bins.push_back(k);
  } else if (m.points.size() != m.paths) {
    // Paths without an endpoint are reported but carry no expected mass.
    Bin k;
    k.label = "aborted";
    k.count = static_cast<double>(m.paths - m.points.size());
    k.excluded = true;
    h.bins.push_back(k);
  }
  return h;
}

double relative_residual(double residual, double scale) { return scale == 0 ? std::abs(residual) : std::abs(residual) / scale; }

}  // namespace

std::string to_string(Scheme scheme) { return scheme == Scheme::Euler ? "euler" : "euler-bridge"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "euler") return Scheme::Euler;
  if (name == "euler-bridge") return Scheme::EulerBridge;
  throw DomainError("unknown scheme '" + std::string(name) + "'");
}

nlohmann::json to_json(const SimConfig& cfg) {
  return {{"seed", cfg.seed},           {"paths", cfg.paths}, {"dt", cfg.dt},       {"scheme", to_string(cfg.scheme)},
          {"max_time", cfg.max_time},   {"kappa", cfg.kappa}, {"dt_min", cfg.dt_min}, {"exit_epsilon", cfg.exit_epsilon}};
}

double Histogram::total() const {
  double s = 0;
  for (const auto& b : bins) s += b.count;
  return s;
}

EmpiricalMeasure simulate_killed(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const SimConfig& cfg) {
  check_config(cfg, t);
  const Geometry g = make_geometry(rs);
  const Eigen::VectorXd z0 = intrinsic_start(rs, g, x0);
  const Eigen::Index d = z0.size();
  return run_paths(g, cfg, [&](std::mt19937_64& rng) {
    // Bridge draws come from a separate engine so both schemes see the same increments.
    std::mt19937_64 bridge_rng(rng());
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    PathResult r{Outcome::Done, z0};
    Eigen::VectorXd next(d), before = g.simple * r.z, after(before.size());
    double time = 0;
    while (time < t) {
      const double h = std::min(cfg.dt, t - time);
      const double s = std::sqrt(2 * h);
      for (Eigen::Index i = 0; i < d; ++i) next[i] = r.z[i] + s * normal(rng);
      after.noalias() = g.simple * next;
      if (after.minCoeff() <= 0) return PathResult{Outcome::Killed, {}};
      if (cfg.scheme == Scheme::EulerBridge) {
        // Crossing probability of a bridge with variance 2h per coordinate, one wall at a time.
        for (Eigen::Index a = 0; a < after.size(); ++a)
          if (uniform(bridge_rng) < std::exp(-before[a] * after[a] / h)) return PathResult{Outcome::Killed, {}};
      }
      r.z = next;
      before = after;
      time += h;
    }
    return r;
  });
}

EmpiricalMeasure simulate_dyson(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const SimConfig& cfg) {
  check_config(cfg, t);
  const Geometry g = make_geometry(rs);
  const Eigen::VectorXd z0 = intrinsic_start(rs, g, x0);
  const Eigen::Index d = z0.size();
  return run_paths(g, cfg, [&](std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    PathResult r{Outcome::Done, z0};
    Eigen::VectorXd xi(d), drift(d), trial(d);
    double time = 0;
    while (time < t) {
      for (Eigen::Index i = 0; i < d; ++i) xi[i] = normal(rng);
      const double h = dyson_step(g, r.z, xi, std::min(cfg.dt, t - time), cfg, false, drift, trial);
      if (h == 0) return PathResult{Outcome::Aborted, {}};
      time += h;
    }
    return r;
  });
}

EmpiricalMeasure exit_measure(const RootSystem& rs, const Eigen::VectorXd& x0, const SimConfig& cfg) {
  check_config(cfg, cfg.max_time);
  if (!(x0.norm() < 1)) throw DomainError("X0 must lie in the open unit ball");
  const Geometry g = make_geometry(rs);
  const Eigen::VectorXd z0 = intrinsic_start(rs, g, x0);
  const Eigen::Index d = z0.size();
  return run_paths(g, cfg, [&](std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    PathResult r{Outcome::Done, z0};
    Eigen::VectorXd xi(d), drift(d), trial(d);
    double time = 0;
    while (time < cfg.max_time) {
      for (Eigen::Index i = 0; i < d; ++i) xi[i] = normal(rng);
      const double h = dyson_step(g, r.z, xi, cfg.dt, cfg, true, drift, trial);
      if (h == 0) return PathResult{Outcome::Aborted, {}};
      time += h;
      if (r.z.norm() >= 1 - cfg.exit_epsilon) {
        r.z.normalize();
        return r;
      }
    }
    return PathResult{Outcome::Unfinished, {}};
  });
}

Histogram killed_histogram(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const EmpiricalMeasure& m,
                           int radial_bins, int angular_bins) {
  return density_histogram(
      rs, [&](const Eigen::VectorXd& y) { return killed_heat(rs, x0, y, t); }, x0.norm() + 14 * std::sqrt(t), m,
      radial_bins, angular_bins, true);
}

Histogram dyson_histogram(const RootSystem& rs, const Eigen::VectorXd& x0, double t, const EmpiricalMeasure& m,
                          int radial_bins, int angular_bins) {
  return density_histogram(
      rs, [&](const Eigen::VectorXd& y) { return dyson_kernel(rs, DysonKernelKind::transition(t), x0, y); },
      x0.norm() + 14 * std::sqrt(t), m, radial_bins, angular_bins, false);
}

Histogram exit_histogram(const RootSystem& rs, const Eigen::VectorXd& x0, const EmpiricalMeasure& m, int angular_bins) {
  const double n = static_cast<double>(m.paths);
  Histogram h;
  h.coordinates = "theta";
  if (rs.rank() == 1) {
    // The sphere meets the chamber in a single point.
    Bin b;
    b.lo = b.hi = {0};
    b.expected = n * dyson_kernel(rs, DysonKernelKind::poisson(), x0, chamber_ray(rs));
    for (const auto& p : m.points)
      if ((p - chamber_ray(rs)).norm() < 1e-12) b.count += 1;
    h.bins.push_back(b);
  } else if (rs.rank() == 2) {
    const ChamberWedge w = chamber_wedge(rs);
    auto f = [&](double th) { return dyson_kernel(rs, DysonKernelKind::poisson(), x0, w.direction(th)); };
    auto edges = equal_mass_edges(f, 0, w.angle, 400, angular_bins);
    for (int j = 0; j < angular_bins; ++j) {
      Bin b;
      b.lo = {edges[static_cast<std::size_t>(j)]};
      b.hi = {edges[static_cast<std::size_t>(j) + 1]};
      b.expected = n * integrate_1d(f, b.lo[0], b.hi[0], 1e-10).value;
      b.excluded = j == 0 || j + 1 == angular_bins;
      h.bins.push_back(b);
    }
    for (const auto& p : m.points) h.bins[locate(edges, polar(rs, p).theta)].count += 1;
  } else {
    throw UnsupportedError("exit histograms are implemented for rank 1 and 2");
  }
  if (m.points.size() != m.paths) {
    Bin k;
    k.label = "unfinished";
    k.count = static_cast<double>(m.paths - m.points.size());
    k.excluded = true;
    h.bins.push_back(k);
  }
  return h;
}

ComparisonReport chi_square(const Histogram& h, double level) {
  double observed = 0, expected = 0;
  int used = 0;
  for (const auto& b : h.bins)
    if (!b.excluded) {
      observed += b.count;
      expected += b.expected;
      ++used;
    }
  ComparisonReport r;
  r.statistic = "chi-square";
  if (used < 2 || expected <= 0) throw DomainError("chi-square needs at least two bins with expected mass");
  const double scale = observed / expected;
  for (const auto& b : h.bins) {
    if (b.excluded) continue;
    const double e = b.expected * scale;
    if (e > 0) r.value += (b.count - e) * (b.count - e) / e;
    else if (b.count > 0) r.value = std::numeric_limits<double>::infinity();
  }
  boost::math::chi_squared dist(used - 1);
  r.threshold = boost::math::quantile(dist, 1 - level);
  r.pass = r.value <= r.threshold;
  int excluded = 0;
  for (const auto& b : h.bins) excluded += b.excluded ? 1 : 0;
  r.metadata = {{"bins", used}, {"excluded_bins", excluded}, {"degrees_of_freedom", used - 1}, {"level", level}};
  return r;
}

ComparisonReport pde_residual(const RootSystem& rs, const SpaceTimeFunction& f, const PdeTarget& target,
                              const std::vector<Eigen::VectorXd>& xs, double h, double tol) {
  if (!(h > 0)) throw DomainError("step must be positive");
  const bool heat = target.t > 0;
  const Eigen::MatrixXd& basis = rs.span_basis();
  auto residual_at = [&](const Eigen::VectorXd& x, double step) {
    const double px = pi_full<double>(rs, x);
    const double k0 = f(x, target.t);
    double lap = 0, abs_parts = 0;
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
      const Eigen::VectorXd e = step * basis.col(i);
      const double up = pi_full<double>(rs, Eigen::VectorXd(x + e)) * f(x + e, target.t);
      const double um = pi_full<double>(rs, Eigen::VectorXd(x - e)) * f(x - e, target.t);
      const double second = (up - 2 * px * k0 + um) / (step * step);
      lap += second;
      abs_parts += std::abs(second);
    }
    double dt = 0, length2 = 0;
    if (heat) {
      const double s = step * target.t;
      dt = (f(x, target.t + s) - f(x, target.t - s)) / (2 * s);
      length2 = target.t;
    } else {
      length2 = (x - target.pole).squaredNorm();
    }
    // Scale: the function over the squared local length, the separate second differences and the time derivative.
    const double scale = std::abs(k0) / length2 + abs_parts / std::abs(px) + std::abs(dt);
    return relative_residual(lap / px - dt, scale);
  };
  ComparisonReport r;
  r.statistic = "max-relative-residual";
  r.threshold = tol;
  double half = 0;
  for (const auto& x : xs) {
    if (x.size() != rs.ambient_dim() || !in_root_span(rs, x)) throw DomainError("sample point is not in the root span");
    if (wall_distance(rs, x) * x.norm() < 10 * h) throw DomainError("sample point is too close to a wall");
    if (!heat && (x - target.pole).norm() < 10 * h) throw DomainError("sample point is within 10 steps of the pole");
    r.value = std::max(r.value, residual_at(x, h));
    half = std::max(half, residual_at(x, h / 2));
  }
  r.pass = r.value <= tol && half <= tol;
  r.metadata = {{"h", h}, {"residual_half_step", half}, {"samples", xs.size()}};
  return r;
}

ComparisonReport pde_residual(const RootSystem& rs, const KernelKind& kind, const std::vector<Eigen::VectorXd>& xs,
                              const Eigen::VectorXd& y, double h, double tol) {
  const bool heat = kind.type == KernelType::Heat;
  auto f = [&](const Eigen::VectorXd& x, double t) {
    return kernel_w(rs, heat ? KernelKind::heat(t) : kind, x, y).value;
  };
  ComparisonReport r = pde_residual(rs, f, {heat ? kind.t : 0.0, y}, xs, h, tol);
  r.metadata["kernel"] = kind.name();
  return r;
}

}  // namespace weylkern
