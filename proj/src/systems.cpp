#include "rta/systems.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rta/errors.hpp"

namespace rta {

double ElastoModel::celerity(double mu) const {
  const double e = youngs_modulus(mu);
  if (!(e > 0.0)) {
    throw InvalidArgument("elastic model: E(" + std::to_string(mu) + ") = " + std::to_string(e) +
                          " is not positive");
  }
  if (!(rho > 0.0)) throw InvalidArgument("elastic model: density must be positive");
  return std::sqrt(e / rho);
}

EigenBasis build_eigenbasis(double rho, double c) {
  if (!(rho > 0.0) || !(c > 0.0)) {
    throw InvalidArgument("eigenbasis: need rho > 0 and c > 0");
  }
  const double z = rho * c;  // acoustic impedance
  EigenBasis b;
  b.rho = rho;
  b.c = c;
  b.R = {{{z, -z}, {1.0, 1.0}}};
  // det R = 2 z
  b.R_inv = {{{0.5 / z, 0.5}, {-0.5 / z, 0.5}}};
  return b;
}

EigenBasis build_eigenbasis(const ElastoModel& model, double mu) {
  return build_eigenbasis(model.rho, model.celerity(mu));
}

SystemField::SystemField(CellField a, CellField b, FieldKind k)
    : first(std::move(a)), second(std::move(b)), kind(k) {
  if (!(first.mesh() == second.mesh())) {
    throw IncompatibleDiscretization("system field components live on different meshes");
  }
}

SystemField to_characteristics(const SystemField& conservative, const EigenBasis& basis) {
  if (conservative.kind != FieldKind::Conservative) {
    throw InvalidArgument("to_characteristics expects conservative variables");
  }
  const auto& Ri = basis.R_inv;
  const std::size_t n = conservative.first.size();
  std::vector<double> w1(n), w2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double sigma = conservative.first[j];
    const double v = conservative.second[j];
    w2[j] = Ri[0][0] * sigma + Ri[0][1] * v;
    w1[j] = Ri[1][0] * sigma + Ri[1][1] * v;
  }
  const Mesh1D& mesh = conservative.first.mesh();
  return SystemField(CellField(mesh, std::move(w1)), CellField(mesh, std::move(w2)),
                     FieldKind::Characteristic);
}

SystemField from_characteristics(const SystemField& characteristic, const EigenBasis& basis) {
  if (characteristic.kind != FieldKind::Characteristic) {
    throw InvalidArgument("from_characteristics expects characteristic variables");
  }
  const auto& R = basis.R;
  const std::size_t n = characteristic.first.size();
  std::vector<double> sigma(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w1 = characteristic.first[j];
    const double w2 = characteristic.second[j];
    sigma[j] = R[0][0] * w2 + R[0][1] * w1;
    v[j] = R[1][0] * w2 + R[1][1] * w1;
  }
  const Mesh1D& mesh = characteristic.first.mesh();
  return SystemField(CellField(mesh, std::move(sigma)), CellField(mesh, std::move(v)),
                     FieldKind::Conservative);
}

SystemField ElastoOffline::characteristic(std::size_t k) const {
  return SystemField(w1.at(k), w2.at(k), FieldKind::Characteristic);
}

SystemField ElastoOffline::conservative(std::size_t k) const {
  return from_characteristics(characteristic(k), basis);
}

ElastoOffline run_elasto_trajectory(const ElastoModel& model, double mu,
                                    const SystemField& initial, const SolveConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw InvalidArgument("elasto solve: dt must be positive");
  const EigenBasis basis = build_eigenbasis(model, mu);
  const double nu = courant_number(basis.c, cfg.dt, initial.first.mesh().dx());
  if (!(nu <= 1.0)) {
    throw CflViolation("mu = " + std::to_string(mu) + " gives Courant number nu = " +
                       std::to_string(nu) + " > 1");
  }
  const SystemField w0 = to_characteristics(initial, basis);
  return ElastoOffline{mu, basis, run_trajectory(w0.first, mu, nu, cfg.dt, cfg.n_steps),
                       run_trajectory(w0.second, mu, -nu, cfg.dt, cfg.n_steps)};
}

ElastoOffline run_elasto_trajectory(const ElastoModel& model, double mu,
                                    const InitialCondition& sigma0,
                                    const InitialCondition& velocity0, const Mesh1D& mesh,
                                    const SolveConfig& cfg) {
  return run_elasto_trajectory(model, mu,
                               SystemField(project_initial(sigma0, mesh),
                                           project_initial(velocity0, mesh),
                                           FieldKind::Conservative),
                               cfg);
}

ElastoReconstruction rta_elasto_reconstruct(const ElastoOffline& offline, const ElastoModel& model,
                                            double mu, std::size_t k) {
  const EigenBasis target = build_eigenbasis(model, mu);
  Reconstruction r1 = reconstruct_at_speed(offline.w1, target.c, k);
  Reconstruction r2 = reconstruct_at_speed(offline.w2, -target.c, k);
  SystemField chars(r1.field, r2.field, FieldKind::Characteristic);
  SystemField cons = from_characteristics(chars, target);
  return ElastoReconstruction{std::move(cons), std::move(chars), std::move(r1), std::move(r2)};
}

}  // namespace rta
