#include "rta/upwind.hpp"

#include <cmath>
#include <string>

#include "rta/errors.hpp"
#include "rta/shift_ops.hpp"

namespace rta {

double courant_number(double wavespeed, double dt, double dx) { return wavespeed * dt / dx; }

const CellField& Trajectory::at(std::size_t k) const {
  if (k >= fields.size()) {
    throw InvalidArgument("trajectory: time index " + std::to_string(k) + " outside [0, " +
                          std::to_string(n_steps()) + "]");
  }
  return fields[k];
}

double cfl_timestep(const TransportModel& model, const Mesh1D& mesh, double cfl, double mu_ref) {
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw InvalidArgument("cfl must lie in (0, 1], got " + std::to_string(cfl));
  }
  const double a = model.wavespeed(mu_ref);
  if (a == 0.0 || !std::isfinite(a)) {
    throw InvalidArgument("cfl_timestep: zero wavespeed at mu_ref = " + std::to_string(mu_ref));
  }
  return cfl * mesh.dx() / std::abs(a);
}

std::size_t steps_for_time(double final_time, double dt) {
  if (!(dt > 0.0) || !(final_time >= 0.0)) {
    throw InvalidArgument("steps_for_time: need dt > 0 and final_time >= 0");
  }
  return static_cast<std::size_t>(std::llround(final_time / dt));
}

CellField upwind_step(const CellField& field, double nu) {
  if (!(std::abs(nu) <= 1.0)) {
    throw CflViolation("upwind step with |nu| = " + std::to_string(std::abs(nu)) + " > 1");
  }
  if (nu >= 0.0) return apply_K(field, nu);

  const std::size_t n = field.size();
  const auto u = field.values();
  const double w = -nu;
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t right = j + 1 == n ? 0 : j + 1;
    out[j] = (1.0 - w) * u[j] + w * u[right];
  }
  return CellField(field.mesh(), std::move(out));
}

Trajectory run_trajectory(const CellField& initial, double mu, double nu, double dt,
                          std::size_t n_steps) {
  if (!(std::abs(nu) <= 1.0)) {
    throw CflViolation("mu = " + std::to_string(mu) + " gives Courant number nu = " +
                       std::to_string(nu) + ", |nu| > 1");
  }
  Trajectory traj{initial.mesh(), mu, nu, dt, {}};
  traj.fields.reserve(n_steps + 1);
  traj.fields.push_back(initial);
  for (std::size_t k = 0; k < n_steps; ++k) {
    traj.fields.push_back(upwind_step(traj.fields.back(), nu));
  }
  return traj;
}

Trajectory run_trajectory(const TransportModel& model, double mu, const InitialCondition& ic,
                          const Mesh1D& mesh, const SolveConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw InvalidArgument("run_trajectory: dt must be positive");
  const double nu = courant_number(model.wavespeed(mu), cfg.dt, mesh.dx());
  if (!(std::abs(nu) <= 1.0)) {
    throw CflViolation("mu = " + std::to_string(mu) + " gives Courant number nu = " +
                       std::to_string(nu) + ", |nu| > 1");
  }
  return run_trajectory(project_initial(ic, mesh), mu, nu, cfg.dt, cfg.n_steps);
}

}  // namespace rta
