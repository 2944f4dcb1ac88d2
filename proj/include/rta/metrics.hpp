#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "rta/mesh.hpp"

namespace rta {

/// Periodic total variation: sum_j |u_{j+1} - u_j| with u_{N+1} = u_1.
double total_variation(const CellField& field);

/// dx * sum_j |a_j - b_j|.
double l1_abs_error(const CellField& a, const CellField& b);

/// sum_j |a_j - b_j| / sum_j |b_j|. Throws DegenerateDivision if b is zero.
double l1_rel_error(const CellField& a, const CellField& b);

/// Exact L1 distance between a snapshot translated by a fractional part theta
/// of a cell and its cell-average projection: 2 dx (1 - theta) theta TV(u).
double projection_error_l1(const CellField& snapshot, double theta);

struct ErrorReport {
  double e_abs = 0.0;
  double e_rel = 0.0;
  double tv = 0.0;  // of the approximation
  std::size_t k = 0;
  double mu = 0.0;
  double mu_i = 0.0;
  double theta = 0.0;
  std::size_t p = 1;
};

ErrorReport make_error_report(const CellField& approx, const CellField& reference, std::size_t k,
                              double mu, double mu_i, double theta, std::size_t p);

struct RateFit {
  double rate = 0.0;
  double constant = 0.0;  // error ~ constant * dx^rate
};

/// Ordinary least squares of log(error) against log(dx) over all points.
RateFit fit_convergence_rate(std::span<const std::pair<double, double>> points);

}  // namespace rta
