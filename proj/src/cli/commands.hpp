#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace rta::cli {

struct RunOptions {
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
};

/// Either an explicit time index or a physical time rounded to the nearest step.
struct TimeRequest {
  std::optional<std::size_t> k;
  std::optional<double> time;
};

struct ResolvedTime {
  std::size_t k = 0;
  double residual = 0.0;  // requested time minus k * dt
};

ResolvedTime resolve_time(const TimeRequest& request, double dt, std::size_t n_steps);

/// Each command returns the process exit status; diagnostics go to `err`,
/// written artifact paths to `out`.
int cmd_solve(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out,
              std::ostream& err);

int cmd_reconstruct(const ExperimentConfig& cfg, const RunOptions& opts,
                    const std::filesystem::path& snapshot, double mu, const TimeRequest& when,
                    std::ostream& out, std::ostream& err);

int cmd_converge(const ExperimentConfig& cfg, const RunOptions& opts, bool history,
                 std::ostream& out, std::ostream& err);

int cmd_elasto(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out,
               std::ostream& err);

/// Snapshots come from `snapshot_files` when given, otherwise they are solved
/// from the config's snapshot list.
int cmd_dict(const ExperimentConfig& cfg, const RunOptions& opts,
             const std::vector<std::filesystem::path>& snapshot_files, double mu,
             const TimeRequest& when, bool with_reference, std::ostream& out, std::ostream& err);

std::string trajectory_filename(double mu_i);

}  // namespace rta::cli
