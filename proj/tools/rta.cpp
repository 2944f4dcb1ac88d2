// Command-line front end: solve snapshots, reconstruct targets, run mesh
// convergence studies, the elastic bar pipeline and snapshot selection.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

std::optional<rta::cli::TimeRequest> time_request(const CLI::Option* k_opt, std::size_t k,
                                                  const CLI::Option* t_opt, double t) {
  rta::cli::TimeRequest req;
  if (*k_opt) req.k = k;
  if (*t_opt) req.time = t;
  if (req.k.has_value() == req.time.has_value()) return std::nullopt;
  return req;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct-translate-average reconstruction of finite volume snapshots"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t jobs = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "run the upwind solver for every snapshot parameter");
  add_common(solve);

  std::string snapshot;
  double mu = 0.0;
  std::size_t k = 0;
  double t = 0.0;
  auto* reconstruct =
      app.add_subcommand("reconstruct", "reconstruct a target parameter from one snapshot file");
  add_common(reconstruct);
  reconstruct->add_option("--snapshot", snapshot, "trajectory file")
      ->required()
      ->check(CLI::ExistingFile);
  reconstruct->add_option("--mu", mu, "target parameter")->required();
  auto* rk = reconstruct->add_option("--k", k, "time index");
  auto* rt = reconstruct->add_option("--time", t, "physical time, rounded to the nearest step");

  bool history = false;
  auto* converge = app.add_subcommand("converge", "mesh convergence study of the reconstruction");
  add_common(converge);
  converge->add_flag("--history", history, "per-step errors on the base mesh instead");

  auto* elasto = app.add_subcommand("elasto", "elastic bar: characteristic RTA and recombination");
  add_common(elasto);

  std::vector<std::string> dict_snapshots;
  bool with_reference = false;
  auto* dict = app.add_subcommand("dict", "select a snapshot from a dictionary");
  add_common(dict);
  dict->add_option("--snapshot", dict_snapshots, "trajectory files (default: solve the config's)")
      ->check(CLI::ExistingFile);
  dict->add_option("--mu", mu, "target parameter")->required();
  auto* dk = dict->add_option("--k", k, "time index");
  auto* dt = dict->add_option("--time", t, "physical time, rounded to the nearest step");
  dict->add_flag("--reference", with_reference,
                 "measure every candidate against a direct solve (diagnostic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  rta::cli::ExperimentConfig cfg;
  try {
    cfg = rta::cli::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  const rta::cli::RunOptions opts{out_dir, jobs};

  if (solve->parsed()) return rta::cli::cmd_solve(cfg, opts, std::cout, std::cerr);
  if (converge->parsed()) return rta::cli::cmd_converge(cfg, opts, history, std::cout, std::cerr);
  if (elasto->parsed()) return rta::cli::cmd_elasto(cfg, opts, std::cout, std::cerr);
  if (reconstruct->parsed() || dict->parsed()) {
    const bool is_reconstruct = reconstruct->parsed();
    const auto when = is_reconstruct ? time_request(rk, k, rt, t) : time_request(dk, k, dt, t);
    if (!when) {
      std::cerr << "error: give exactly one of --k and --time\n";
      return 2;
    }
    if (is_reconstruct) {
      return rta::cli::cmd_reconstruct(cfg, opts, snapshot, mu, *when, std::cout, std::cerr);
    }
    std::vector<std::filesystem::path> files(dict_snapshots.begin(), dict_snapshots.end());
    return rta::cli::cmd_dict(cfg, opts, files, mu, *when, with_reference, std::cout, std::cerr);
  }
  return 2;
}
