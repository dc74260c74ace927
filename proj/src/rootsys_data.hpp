#pragma once

#include <exception>
#include <mutex>

#include "weylkern/rootsys.hpp"

namespace weylkern {

struct RootSystem::Data {
  RootSystemSpec spec;
  int ambient = 0;
  int rank = 0;
  int gamma = 0;
  MatrixQ roots;
  Eigen::MatrixXd roots_d;
  std::vector<int> simple;
  VectorQ rho;
  Eigen::MatrixXi cartan;
  std::vector<VectorQ> omegas;
  Eigen::MatrixXi coefficients;
  Eigen::MatrixXd basis;
  std::uint64_t order = 0;

  // Integer data for exact Weyl-group arithmetic. Elements are numerator / weyl_den.
  std::int64_t weyl_den = 1;
  std::vector<IntMatrix> simple_reflections;
  std::int64_t root_scale = 1;  // roots_int = root_scale * roots
  IntMatrix roots_int;
  IntVector rho_int;

  mutable std::once_flag weyl_once;
  mutable std::vector<WeylElement> weyl;
  mutable std::exception_ptr weyl_error;
};

// Sign of w from the number of positive roots it sends to negative roots.
int weyl_sign(const RootSystem::Data& data, const IntMatrix& numerator);

}  // namespace weylkern
