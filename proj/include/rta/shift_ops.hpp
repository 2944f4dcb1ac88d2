#pragma once

#include <cstddef>
#include <cstdint>

#include "rta/mesh.hpp"

namespace rta {

/// Integer/fractional split of a real cell shift s on an N-cell periodic mesh.
///
/// p is (floor(s) + 1) reduced into [0, N-1] and theta = s - floor(s). The
/// integer part floor(s) is kept unreduced as well since callers need its
/// sign-correct value for periodic indexing.
struct ShiftIndex {
  std::size_t p = 1;
  double theta = 0.0;
  std::int64_t whole = 0;  // floor(s)
};

/// Cyclic permutation: out[j] = in[(j - m) mod N]. Positive m moves content right.
CellField apply_L_power(const CellField& field, std::int64_t m);

/// K(omega) = (1 - omega) I + omega L, defined for omega in [0, 1].
CellField apply_K(const CellField& field, double omega);

ShiftIndex decompose_shift(double s, std::size_t n_cells);

/// Generalized shift K({s}) L^floor(s) for any finite real s (in cell units).
CellField apply_generalized_shift(const CellField& field, double s);

/// Same as apply_generalized_shift with the split already made. theta must lie
/// in [0, 1].
CellField apply_split_shift(const CellField& field, std::int64_t whole, double theta);

/// (a mod n) in [0, n) for any sign of a.
std::size_t wrap_index(std::int64_t a, std::size_t n);

}  // namespace rta
