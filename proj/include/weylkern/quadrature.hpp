#pragma once

#include <functional>
#include <vector>

#include "weylkern/rootsys.hpp"

namespace weylkern {

struct QuadResult {
  double value = 0;
  double error = 0;  // estimate reported by the rule
};

// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

// Integral over the positive chamber intersected with the ball of the given radius, against Lebesgue
// measure on the root span. Rank 1 and 2 only.
QuadResult integrate_chamber(const RootSystem& rs, const std::function<double(const Eigen::VectorXd&)>& f,
                             double radius, double rel_tol = 1e-8);

// Integral over the unit sphere intersected with the closed chamber, against surface measure
// (counting measure in rank 1). Rank 1 and 2 only.
QuadResult integrate_chamber_sphere(const RootSystem& rs, const std::function<double(const Eigen::VectorXd&)>& f,
                                    double rel_tol = 1e-8);

// Unit vectors of the chamber wedge in rank 2: u(theta) for theta in [0, angle].
struct ChamberWedge {
  Eigen::VectorXd e0;  // unit vector along the first bounding ray
  Eigen::VectorXd e1;  // unit vector orthogonal to e0, pointing into the chamber
  double angle = 0;
  Eigen::VectorXd direction(double theta) const;
};

ChamberWedge chamber_wedge(const RootSystem& rs);

// Unit vector spanning the chamber ray in rank 1.
Eigen::VectorXd chamber_ray(const RootSystem& rs);

// Cell centres of an n^rank lattice over [-extent, extent]^rank in orthonormal root-span coordinates,
// kept when they lie in the open chamber.
std::vector<Eigen::VectorXd> chamber_lattice(const RootSystem& rs, int n, double extent);

}  // namespace weylkern
