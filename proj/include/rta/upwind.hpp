#pragma once

#include <cstddef>
#include <vector>

#include "rta/mesh.hpp"

namespace rta {

/// Scalar transport with affine wavespeed a(mu) = alpha * mu + beta.
struct TransportModel {
  double alpha = 0.0;
  double beta = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 1.0;

  double wavespeed(double mu) const { return alpha * mu + beta; }
  bool contains(double mu) const { return mu >= mu_lo && mu <= mu_hi; }
};

struct SolveConfig {
  double dt = 0.0;
  std::size_t n_steps = 0;
};

/// Courant number of a wavespeed on a given (dt, dx).
double courant_number(double wavespeed, double dt, double dx);

/// Stored FV trajectory for one parameter value: fields[k] is the solution at t = k*dt.
struct Trajectory {
  Mesh1D mesh;
  double mu_i = 0.0;
  double nu_i = 0.0;
  double dt = 0.0;
  std::vector<CellField> fields;

  std::size_t n_steps() const { return fields.empty() ? 0 : fields.size() - 1; }
  const CellField& at(std::size_t k) const;
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

/// dt = cfl * dx / |a(mu_ref)|.
double cfl_timestep(const TransportModel& model, const Mesh1D& mesh, double cfl, double mu_ref);

/// Number of steps that brings t = k*dt closest to final_time.
std::size_t steps_for_time(double final_time, double dt);

/// One first-order upwind step. nu >= 0 uses the left neighbour (K(nu)), nu < 0
/// the right one. Throws CflViolation when |nu| > 1.
CellField upwind_step(const CellField& field, double nu);

/// Runs n_steps upwind steps from an already projected initial field.
Trajectory run_trajectory(const CellField& initial, double mu, double nu, double dt,
                          std::size_t n_steps);

Trajectory run_trajectory(const TransportModel& model, double mu, const InitialCondition& ic,
                          const Mesh1D& mesh, const SolveConfig& cfg);

}  // namespace rta
