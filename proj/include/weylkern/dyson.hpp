#pragma once

#include <string>

#include "weylkern/asymptotics.hpp"

namespace weylkern {

enum class DysonKernelType { Transition, Killed, Poisson, Newton };

struct DysonKernelKind {
  DysonKernelType type = DysonKernelType::Transition;
  double t = 0;  // Transition and Killed only

  static DysonKernelKind transition(double t) { return {DysonKernelType::Transition, t}; }
  static DysonKernelKind killed(double t) { return {DysonKernelType::Killed, t}; }
  static DysonKernelKind poisson() { return {DysonKernelType::Poisson, 0}; }
  static DysonKernelKind newton() { return {DysonKernelType::Newton, 0}; }
  std::string name() const;
};

DysonKernelKind parse_dyson_kind(std::string_view name, double t = 0);

// Transition density, killed density, Poisson and Newton kernels of the process conditioned by pi.
// X and Y lie in the closed chamber; the value is 0 when Y lies on a wall (except for Killed, which
// also vanishes when X does).
double dyson_kernel(const RootSystem& rs, const DysonKernelKind& kind, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y, const EvalOptions& options = {});

// sum_w eps(w) h_t(X - wY).
double killed_heat(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t,
                   const EvalOptions& options = {});

// Karlin-McGregor determinant for the A family, in intrinsic coordinates.
double killed_heat_det(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t);

// lim_{Y -> Y0} K^D(X, Y) / pi'(Y)^2, pi' over the roots vanishing at Y0; for the Transition kind the
// full pi(Y)^2 is divided out.
double dyson_ratio(const RootSystem& rs, const DysonKernelKind& kind, const Eigen::VectorXd& x,
                   const ChamberPoint<double>& y0, const EvalOptions& options = {});

// Asymptotic form of dyson_ratio as X -> Y0 (Poisson, Newton).
AsymptoticForm dyson_asym_ratio(const RootSystem& rs, KernelType kind, const ChamberPoint<double>& y0);

// Asymptotic form of p_t^D(X, Y) / pi(Y)^2 as t -> 0+.
AsymptoticForm dyson_heat_ratio(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y);

// dyson_ratio / form along X = Y0 + s (X_ref - Y0); Poisson divides out 1 - |X|^2 as well.
RatioTest dyson_ratio_test(const RootSystem& rs, KernelType kind, const ChamberPoint<double>& y0,
                           const Eigen::VectorXd& x_ref, const std::vector<double>& s, double tol = 0.02);

// p_t^D(X, Y) / (pi(Y)^2 form) as t -> 0+, in log space; extends to singular Y as |W| p_t^W.
RatioTest dyson_heat_ratio_test(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y,
                                const std::vector<double>& t, double tol = 0.02);

struct TimeIntegral {
  double value = 0;
  double quadrature_error = 0;
  double tail_bound = 0;  // bound on the omitted integral over (T_max, infinity)
};

// Newton kernel as a time integral of the transition density, in the sign convention of the Newton
// kernel (Delta N = delta, so N = -int p dt). Requires rank >= 3.
TimeIntegral newton_time_integral(const RootSystem& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                  double t_max);

}  // namespace weylkern
