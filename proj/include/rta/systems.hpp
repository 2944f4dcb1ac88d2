#pragma once

#include <array>
#include <cstddef>

#include "rta/mesh.hpp"
#include "rta/reconstruct.hpp"
#include "rta/upwind.hpp"

namespace rta {

/// 1-D linear elastic bar: E(mu) = c0 * mu + c1, c(mu) = sqrt(E(mu) / rho).
struct ElastoModel {
  double c0 = 0.0;
  double c1 = 0.0;
  double rho = 1.0;

  double youngs_modulus(double mu) const { return c0 * mu + c1; }
  /// Throws InvalidArgument when E(mu) <= 0 or rho <= 0.
  double celerity(double mu) const;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Right eigenvectors of the flux Jacobian, R = [[rho c, -rho c], [1, 1]].
///
/// Column 0 is the eigenvector of speed -c and column 1 that of speed +c, so
/// the characteristic w1 (speed +c) is the second component of R^{-1} u and
/// w2 (speed -c) the first: w1 = (-sigma/(rho c) + v)/2, w2 = (sigma/(rho c) + v)/2.
struct EigenBasis {
  double rho = 0.0;
  double c = 0.0;
  Matrix2 R{};
  Matrix2 R_inv{};
};

EigenBasis build_eigenbasis(double rho, double c);
EigenBasis build_eigenbasis(const ElastoModel& model, double mu);

enum class FieldKind { Conservative, Characteristic };

/// Two cell fields on one mesh: (sigma, v) or (w1, w2).
struct SystemField {
  CellField first;
  CellField second;
  FieldKind kind;

  SystemField(CellField a, CellField b, FieldKind k);
};

SystemField to_characteristics(const SystemField& conservative, const EigenBasis& basis);
SystemField from_characteristics(const SystemField& characteristic, const EigenBasis& basis);

/// Offline stage for one parameter value: the two characteristic snapshot
/// trajectories (w1 with nu = +c dt/dx, w2 with nu = -c dt/dx).
struct ElastoOffline {
  double mu = 0.0;
  EigenBasis basis;
  Trajectory w1;
  Trajectory w2;

  std::size_t n_steps() const { return w1.n_steps(); }
  SystemField characteristic(std::size_t k) const;
  /// Direct FV solution in (sigma, v) at time index k.
  SystemField conservative(std::size_t k) const;
};

ElastoOffline run_elasto_trajectory(const ElastoModel& model, double mu,
                                    const SystemField& initial, const SolveConfig& cfg);

ElastoOffline run_elasto_trajectory(const ElastoModel& model, double mu,
                                    const InitialCondition& sigma0,
                                    const InitialCondition& velocity0, const Mesh1D& mesh,
                                    const SolveConfig& cfg);

struct ElastoReconstruction {
  SystemField conservative;
  SystemField characteristic;
  Reconstruction w1;
  Reconstruction w2;
};

/// RTA on each characteristic with its own pair of Courant numbers, then
/// recombination with the eigenbasis of the target mu.
ElastoReconstruction rta_elasto_reconstruct(const ElastoOffline& offline, const ElastoModel& model,
                                            double mu, std::size_t k);

}  // namespace rta
