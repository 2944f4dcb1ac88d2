#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rta/mesh.hpp"
#include "rta/upwind.hpp"

namespace rta {

/// Binary trajectory file layout:
///
///   format_version=1
///   mu_i=<double>            (shortest round-trip decimal)
///   nu_i=<double>
///   dt=<double>
///   n_cells=<int>
///   x_min=<double>
///   x_max=<double>
///   n_steps=<int>
///   checksum_fnv1a64=<hex>   (optional on read; covers header lines above + payload)
///   <blank line>
///   (n_steps+1)*n_cells little-endian binary64 values, k-major, j-minor.
std::string serialize_trajectory(const Trajectory& traj);
Trajectory deserialize_trajectory(std::string_view bytes);

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

/// Snapshot dictionary: trajectories on one shared mesh and dt, keyed by mu_i.
class SnapshotStore {
 public:
  /// Throws IncompatibleDiscretization on a mesh/dt mismatch and
  /// InvalidArgument on a duplicate key.
  void add(Trajectory traj);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::vector<double> keys() const;
  const Trajectory& get(double mu_i) const;
  const std::map<double, Trajectory>& entries() const { return entries_; }

 private:
  std::map<double, Trajectory> entries_;
};

/// Key minimizing |a(mu) - a(mu_i)|; ties go to the smaller mu_i.
double select_nearest(const SnapshotStore& store, double mu, const TransportModel& model);

/// Reconstructs the target from every entry at time index k and returns the
/// key with the smallest L1 absolute error against `reference`, with that
/// error. Diagnostic only: it needs the answer it is measured against.
std::pair<double, double> select_best_measured(const SnapshotStore& store, double mu,
                                               std::size_t k, const CellField& reference,
                                               const TransportModel& model);

}  // namespace rta
