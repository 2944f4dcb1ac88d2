#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rta/mesh.hpp"
#include "rta/systems.hpp"
#include "rta/upwind.hpp"

namespace rta::cli {

enum class Problem { Transport, Elasto };

/// One experiment, as read from a JSON config file. Unknown keys are errors.
struct ExperimentConfig {
  Problem problem = Problem::Transport;
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_cells = 0;

  PiecewiseConstant ic;           // transport
  PiecewiseConstant sigma_ic;     // elasto
  PiecewiseConstant velocity_ic;  // elasto

  TransportModel transport;
  ElastoModel elasto;
  double mu_lo = 0.0;
  double mu_hi = 1.0;

  double cfl = 1.0;
  double mu_ref = 1.0;
  std::optional<double> final_time;
  std::optional<std::size_t> n_steps;

  std::vector<double> snapshots;
  std::vector<double> targets;
  std::vector<double> times;
  std::vector<std::size_t> meshes;
  std::string output_dir = "out";

  std::string digest;  // hash of the canonical JSON text

  Mesh1D mesh() const { return Mesh1D(x_min, x_max, n_cells); }
  Mesh1D mesh(std::size_t n) const { return Mesh1D(x_min, x_max, n); }
  /// Time step for an n-cell mesh: cfl * dx / |speed(mu_ref)|.
  double timestep(std::size_t n) const;
  double timestep() const { return timestep(n_cells); }
  std::size_t steps(double dt) const;
  /// Wavespeed of the transport model or celerity of the elastic model.
  double speed(double mu) const;
};

/// Throws InvalidArgument naming the offending key.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rta::cli
