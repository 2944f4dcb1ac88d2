#include "rta/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rta/errors.hpp"

namespace rta {

double relative_shift(std::size_t k, double nu, double nu_i) {
  return static_cast<double>(k) * (nu - nu_i);
}

ShiftIndex snapped_decomposition(double s, std::size_t n_cells) {
  ShiftIndex idx = decompose_shift(s, n_cells);
  if (idx.theta < kThetaSnap) {
    idx.theta = 0.0;
  } else if (idx.theta > 1.0 - kThetaSnap) {
    idx.theta = 0.0;
    idx.whole += 1;
    idx.p = wrap_index(idx.whole + 1, n_cells);
  }
  return idx;
}

Reconstruction reconstruct_at_speed(const Trajectory& traj, double target_speed, std::size_t k) {
  const CellField& snapshot = traj.at(k);
  const double nu = courant_number(target_speed, traj.dt, traj.mesh.dx());
  const double s = relative_shift(k, nu, traj.nu_i);
  const ShiftIndex idx = snapped_decomposition(s, snapshot.size());
  return Reconstruction{apply_split_shift(snapshot, idx.whole, idx.theta), nu, s, idx};
}

void check_discretization(const Trajectory& traj, const Discretization& expected) {
  if (!(traj.mesh == expected.mesh)) {
    throw IncompatibleDiscretization(
        "snapshot mesh (N=" + std::to_string(traj.mesh.n_cells()) + ", [" +
        std::to_string(traj.mesh.x_min()) + ", " + std::to_string(traj.mesh.x_max()) +
        "]) differs from the requested mesh (N=" + std::to_string(expected.mesh.n_cells()) +
        ", [" + std::to_string(expected.mesh.x_min()) + ", " +
        std::to_string(expected.mesh.x_max()) + "])");
  }
  if (traj.dt != expected.dt) {
    throw IncompatibleDiscretization("snapshot dt " + std::to_string(traj.dt) +
                                     " differs from the requested dt " +
                                     std::to_string(expected.dt));
  }
}

namespace {

void check_model(const Trajectory& traj, const TransportModel& model) {
  const double expected = courant_number(model.wavespeed(traj.mu_i), traj.dt, traj.mesh.dx());
  const double scale = std::max({std::abs(expected), std::abs(traj.nu_i), 1e-300});
  if (std::abs(expected - traj.nu_i) > kCourantMatchTol * scale) {
    throw IncompatibleDiscretization(
        "snapshot Courant number nu_i = " + std::to_string(traj.nu_i) +
        " does not match a(mu_i) dt / dx = " + std::to_string(expected) + " for mu_i = " +
        std::to_string(traj.mu_i));
  }
}

}  // namespace

Reconstruction rta_reconstruct_full(const Trajectory& traj, double mu, std::size_t k,
                                    const TransportModel& model,
                                    const std::optional<Discretization>& expected) {
  if (expected) check_discretization(traj, *expected);
  check_model(traj, model);
  return reconstruct_at_speed(traj, model.wavespeed(mu), k);
}

CellField rta_reconstruct(const Trajectory& traj, double mu, std::size_t k,
                          const TransportModel& model) {
  return rta_reconstruct_full(traj, mu, k, model).field;
}

namespace {

// One constant piece of the translated function restricted to a target cell.
struct Piece {
  double weight;  // fraction of the target cell covered
  double value;
};

// Pieces of u_N(x - s*dx) inside cell j. Translation by whole periods and
// whole cells is index arithmetic; the sub-cell remainder is handled by
// intersecting the pre-image of the cell with every source cell it meets,
// in cell units relative to the source cell so weights keep full precision.
std::vector<Piece> translated_pieces(const CellField& snapshot, std::size_t j, double s) {
  const std::size_t n = snapshot.size();

  const double cells = std::floor(s);
  const double rest = s - cells;  // in [0, 1)
  const std::size_t anchor = wrap_index(static_cast<std::int64_t>(j) -
                                            static_cast<std::int64_t>(cells),
                                        n);

  // Pre-image of cell j, relative to the left face of source cell `anchor`.
  const double lo = -rest;
  const double hi = 1.0 - rest;

  std::vector<Piece> pieces;
  const auto first = static_cast<std::int64_t>(std::floor(lo));
  const auto last = static_cast<std::int64_t>(std::ceil(hi));
  for (std::int64_t m = first; m <= last; ++m) {
    const double cell_lo = static_cast<double>(m);
    const double a = std::max(lo, cell_lo);
    const double b = std::min(hi, cell_lo + 1.0);
    if (b > a) {
      const std::size_t src = wrap_index(static_cast<std::int64_t>(anchor) + m, n);
      pieces.push_back({b - a, snapshot[src]});
    }
  }
  return pieces;
}

}  // namespace

CellField translate_and_average(const CellField& snapshot, double s) {
  if (!std::isfinite(s)) throw InvalidArgument("translate_and_average: non-finite shift");
  std::vector<double> out(snapshot.size());
  for (std::size_t j = 0; j < snapshot.size(); ++j) {
    const auto pieces = translated_pieces(snapshot, j, s);
    if (pieces.size() == 1) {
      out[j] = pieces.front().value;
      continue;
    }
    double average = 0.0;
    for (const Piece& piece : pieces) average += piece.value * piece.weight;
    out[j] = average;
  }
  return CellField(snapshot.mesh(), std::move(out));
}

double translated_projection_residual_l1(const CellField& snapshot, double s) {
  if (!std::isfinite(s)) {
    throw InvalidArgument("translated_projection_residual_l1: non-finite shift");
  }
  // The cell average minus piece i is the weighted sum of differences to
  // the other pieces, which avoids cancellation when values are close.
  double total = 0.0;
  for (std::size_t j = 0; j < snapshot.size(); ++j) {
    const auto pieces = translated_pieces(snapshot, j, s);
    for (const Piece& pi : pieces) {
      double gap = 0.0;
      for (const Piece& pm : pieces) gap += pm.weight * (pm.value - pi.value);
      total += pi.weight * std::abs(gap);
    }
  }
  return snapshot.mesh().dx() * total;
}

CellField rta_reconstruct_oracle(const Trajectory& traj, double mu, std::size_t k,
                                 const TransportModel& model) {
  check_model(traj, model);
  const double nu = courant_number(model.wavespeed(mu), traj.dt, traj.mesh.dx());
  return translate_and_average(traj.at(k), relative_shift(k, nu, traj.nu_i));
}

}  // namespace rta
