#pragma once

#include <functional>
#include <string>
#include <vector>

#include "weylkern/kernels.hpp"

namespace weylkern {

// constant * s^power * exp(rate * s), or exp(rate / s) when inverse_rate is set.
struct AsymptoticForm {
  double constant = 0;
  Rational power = 0;
  double rate = 0;
  bool inverse_rate = false;
  std::string description;

  double log_abs(double s) const;
  double value(double s) const;
};

// Closed-form values at the origin: Poisson P^W(0, Y) and Newton N^W(0, Y).
double at_zero(const RootSystem& rs, KernelType kind, const Eigen::VectorXd& y);

// P^W(X, Y0) / (1 - |X|^2) against |X - Y0| as X -> Y0 on the unit sphere.
AsymptoticForm poisson_asym(const RootSystem& rs, const ChamberPoint<double>& y0);

// N^W(X, Y0) against |X - Y0| as X -> Y0.
AsymptoticForm newton_asym(const RootSystem& rs, const ChamberPoint<double>& y0);

// psi_{lambda0}(t Y0) as t -> infinity.
AsymptoticForm spherical_asym(const RootSystem& rs, const ChamberPoint<double>& lambda0,
                              const ChamberPoint<double>& y0);

// p_t^W(X, Y) as t -> 0+; the Gaussian factor is carried as rate = -|X - Y|^2 / 4 with inverse_rate.
AsymptoticForm heat_small_t(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y);

struct NormalizationIdentity {
  Rational lhs;  // pi(rho) |W| / 2^gamma
  Rational rhs;  // prod_a (|a|^2 / 2) (<a, rho> / |a|^2 + 1)
  bool equal = false;
};

NormalizationIdentity normalization_identity(const RootSystem& rs);

struct RatioTest {
  std::vector<double> params;
  std::vector<double> ratios;
  std::vector<double> deviations;
  bool monotone = false;
  bool pass = false;
};

// Deviations |ratio - 1| must shrink along the parameters and end below tol.
RatioTest ratio_test(const std::function<double(double)>& ratio, const std::vector<double>& params, double tol = 0.02);

// P^W(X, Y0) / ((1 - |X|^2) form) along X = Y0 + s (X_ref - Y0).
RatioTest poisson_ratio_test(const RootSystem& rs, const ChamberPoint<double>& y0, const Eigen::VectorXd& x_ref,
                             const std::vector<double>& s, double tol = 0.02);

// N^W(X, Y0) / form along X = Y0 + s (X_ref - Y0).
RatioTest newton_ratio_test(const RootSystem& rs, const ChamberPoint<double>& y0, const Eigen::VectorXd& x_ref,
                            const std::vector<double>& s, double tol = 0.02);

// psi_lambda0(t Y0) / form, evaluated in log space at the given precision.
RatioTest spherical_ratio_test(const RootSystem& rs, const ChamberPoint<double>& lambda0,
                               const ChamberPoint<double>& y0, const std::vector<double>& t, unsigned bits = 200,
                               double tol = 0.02);

// p_t^W(X, Y) / form as t -> 0+, evaluated in log space.
RatioTest heat_small_t_ratio_test(const RootSystem& rs, const ChamberPoint<double>& x, const ChamberPoint<double>& y,
                                  const std::vector<double>& t, double tol = 0.02);

}  // namespace weylkern
