#pragma once

// Independent references for the test suites. Nothing here calls into the
// closed forms: stationary laws come from a sparse linear solve of the
// truncated chain, built straight from the per-slot increment probabilities.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "jamopt/model.hpp"

namespace oracle {

using jamopt::Action;
using jamopt::IncrementKernel;

using PolicyFn = std::function<Action(long)>;

inline PolicyFn threshold(long n) {
  return [n](long s) { return s >= n ? Action::Active : Action::Passive; };
}

/// Smallest cap with c^(cap - n) below `mass` (1 - c), so that the geometric
/// tail beyond it carries less than `mass`.
inline long cap_for_tail(double c, long n, double mass) {
  return n + static_cast<long>(std::ceil(std::log(mass * (1.0 - c)) / std::log(c))) + 1;
}

/// Stationary law of the age chain on [0, cap] with the top state saturating.
inline std::vector<double> stationary_by_solve(const IncrementKernel& kernel, const PolicyFn& policy,
                                               long cap) {
  const long size = cap + 1;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(3 * size));
  // Row 0 of (P^T - I) u = 0 is replaced by sum(u) = 1.
  for (long j = 0; j < size; ++j) entries.emplace_back(0, j, 1.0);
  for (long s = 0; s < size; ++s) {
    const double up = kernel.at(s, policy(s));
    const long to = s == cap ? cap : s + 1;
    // Reset mass lands on row 0, which is overwritten.
    entries.emplace_back(to, s, up);
    if (s != 0) entries.emplace_back(s, s, -1.0);
  }
  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs(0) = 1.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("oracle factorization failed");
  const Eigen::VectorXd u = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw std::runtime_error("oracle solve failed");
  return std::vector<double>(u.data(), u.data() + size);
}

struct Moments {
  double age = 0.0;
  double active = 0.0;
};

inline Moments moments(const std::vector<double>& pmf, const PolicyFn& policy) {
  Moments m;
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    m.age += static_cast<double>(s) * pmf[s];
    if (policy(static_cast<long>(s)) == Action::Active) m.active += pmf[s];
  }
  return m;
}

}  // namespace oracle
