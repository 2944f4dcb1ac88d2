#pragma once

#include <cstddef>
#include <optional>

#include "rta/mesh.hpp"
#include "rta/shift_ops.hpp"
#include "rta/upwind.hpp"

namespace rta {

/// Fractional parts closer than this to 0 or 1 are snapped to the boundary.
inline constexpr double kThetaSnap = 1e-12;

/// Relative tolerance used when checking a trajectory's stored Courant number
/// against the one implied by a model.
inline constexpr double kCourantMatchTol = 1e-12;

/// Mesh and time step a reconstruction request expects the snapshot to carry.
struct Discretization {
  Mesh1D mesh;
  double dt = 0.0;
};

struct Reconstruction {
  CellField field;
  double nu = 0.0;     // target Courant number
  double shift = 0.0;  // k * (nu - nu_i), in cells
  ShiftIndex index;    // after snapping
};

/// k * (nu - nu_i) as a single product.
double relative_shift(std::size_t k, double nu, double nu_i);

/// decompose_shift followed by snapping theta to {0, 1} within kThetaSnap.
ShiftIndex snapped_decomposition(double s, std::size_t n_cells);

/// Fast path: phi_j = (1 - theta) u_{j-p+1} + theta u_{j-p} on the k-th snapshot,
/// for a target whose wavespeed is target_speed.
Reconstruction reconstruct_at_speed(const Trajectory& traj, double target_speed, std::size_t k);

/// Fast path for the scalar transport model. The target Courant number is
/// recomputed from the trajectory's own dt and dx; the trajectory's nu_i must
/// agree with the model, otherwise IncompatibleDiscretization is thrown.
Reconstruction rta_reconstruct_full(const Trajectory& traj, double mu, std::size_t k,
                                    const TransportModel& model,
                                    const std::optional<Discretization>& expected = std::nullopt);

CellField rta_reconstruct(const Trajectory& traj, double mu, std::size_t k,
                          const TransportModel& model);

/// Throws IncompatibleDiscretization if traj was not computed on `expected`.
void check_discretization(const Trajectory& traj, const Discretization& expected);

// Geometric oracle path. Builds the piecewise-constant function of the
// snapshot, translates it by s*dx in physical space and integrates it over
// every cell by explicit interval intersection.

/// Cell averages of the snapshot translated by s cells.
CellField translate_and_average(const CellField& snapshot, double s);

/// L1 distance between the translated piecewise-constant snapshot and its
/// cell-average projection, measured by integration.
double translated_projection_residual_l1(const CellField& snapshot, double s);

CellField rta_reconstruct_oracle(const Trajectory& traj, double mu, std::size_t k,
                                 const TransportModel& model);

}  // namespace rta
