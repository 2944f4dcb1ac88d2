#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "rta/csv.hpp"
#include "rta/errors.hpp"
#include "rta/store.hpp"

using namespace rta;
using namespace rta::cli;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rta_cli_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string transport_json(const std::string& extra = "", const std::string& time =
                                                              R"("final_time": 0.5)") {
  return R"({
    "problem": "transport",
    "domain": {"x_min": -10, "x_max": 10, "n_cells": 250},
    "initial_condition": {"breakpoints": [-3.3333333333333335, 3.3333333333333335],
                          "values": [1, -1, 1]},
    "model": {"alpha": 5, "beta": 2},
    "parameter_domain": [0, 1],
    "time": {"cfl": 0.8, "mu_ref": 1, )" +
         time + R"(},
    "snapshots": [0.4, 0.65],
    "targets": [0.8])" +
         extra + "\n}";
}

const char* kElastoJson = R"({
  "problem": "elasto",
  "domain": {"x_min": -10, "x_max": 10, "n_cells": 100},
  "initial_condition": {
    "sigma": {"breakpoints": [], "values": [0]},
    "velocity": {"breakpoints": [0], "values": [1, 0]}
  },
  "model": {"c0": 19e10, "c1": 1e11, "rho": 7800},
  "time": {"cfl": 0.8, "mu_ref": 1, "final_time": 0.004},
  "snapshots": [0.05],
  "targets": [0.8],
  "times": [0.00129, 0.00388]
})";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(transport_json());
  CHECK(cfg.problem == Problem::Transport);
  CHECK(cfg.n_cells == 250);
  CHECK(cfg.transport.alpha == 5.0);
  CHECK(cfg.snapshots == std::vector<double>{0.4, 0.65});
  CHECK(cfg.timestep() == doctest::Approx(0.8 * 0.08 / 7.0).epsilon(1e-15));
  CHECK(cfg.steps(cfg.timestep()) == 55);
  CHECK(cfg.digest.size() == 16);
  CHECK(parse_config(transport_json()).digest == cfg.digest);
  CHECK(parse_config(transport_json(R"(, "output_dir": "elsewhere")")).digest != cfg.digest);

  CHECK_THROWS_AS(parse_config(transport_json(R"(, "colour": 3)")), InvalidArgument);
  CHECK_THROWS_AS(parse_config(transport_json("", R"("final_time": 1, "cfl_typo": 1)")),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_config(transport_json("", R"("final_time": 1, "n_steps": 4)")),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_config(transport_json(R"(, "meshes": [100, -5])")), InvalidArgument);
  CHECK_THROWS_AS(parse_config("{ not json"), InvalidArgument);

  std::string bad_cfl = transport_json();
  bad_cfl.replace(bad_cfl.find("\"cfl\": 0.8"), 10, "\"cfl\": 1.2");
  CHECK_THROWS_AS(parse_config(bad_cfl), InvalidArgument);

  std::string outside = transport_json();
  outside.replace(outside.find("[0.8]"), 5, "[1.5]");
  CHECK_THROWS_AS(parse_config(outside), InvalidArgument);

  const ExperimentConfig el = parse_config(kElastoJson);
  CHECK(el.problem == Problem::Elasto);
  CHECK(el.velocity_ic.values == std::vector<double>{1.0, 0.0});
  CHECK(el.times.size() == 2);
}

TEST_CASE("resolve_time") {
  const ResolvedTime r = resolve_time(TimeRequest{std::nullopt, 0.96}, 0.1, 20);
  CHECK(r.k == 10);
  CHECK(r.residual == doctest::Approx(-0.04));
  CHECK(resolve_time(TimeRequest{7, std::nullopt}, 0.1, 20).k == 7);
  CHECK_THROWS_AS(resolve_time(TimeRequest{21, std::nullopt}, 0.1, 20), InvalidArgument);
  CHECK_THROWS_AS(resolve_time(TimeRequest{}, 0.1, 20), InvalidArgument);
  CHECK_THROWS_AS(resolve_time(TimeRequest{1, 0.1}, 0.1, 20), InvalidArgument);
}

TEST_CASE("solve writes one trajectory per snapshot parameter") {
  const auto dir = fresh_dir("solve");
  const ExperimentConfig cfg = parse_config(transport_json());
  std::ostringstream out, err;
  CHECK(cmd_solve(cfg, RunOptions{dir, 2}, out, err) == 0);
  CHECK(out.str() == (dir / "traj_mu0.4.rta").string() + "\n" +
                         (dir / "traj_mu0.65.rta").string() + "\n");
  const Trajectory t = load_trajectory(dir / "traj_mu0.4.rta");
  CHECK(t.mu_i == 0.4);
  CHECK(t.n_steps() == 55);
  CHECK(t.mesh.n_cells() == 250);

  std::string none = transport_json();
  none.replace(none.find("[0.4, 0.65]"), 11, "[]");
  std::ostringstream out2, err2;
  CHECK(cmd_solve(parse_config(none), RunOptions{dir, 1}, out2, err2) == 0);
  CHECK(out2.str().empty());
  CHECK(err2.str().find("warning") != std::string::npos);
}

TEST_CASE("solve reports a CFL violation") {
  const auto dir = fresh_dir("solve_cfl");
  // CFL 1 at mu_ref = 0 makes mu = 0.65 unstable.
  std::string json = transport_json();
  json.replace(json.find("\"mu_ref\": 1"), 11, "\"mu_ref\": 0");
  json.replace(json.find("\"cfl\": 0.8"), 10, "\"cfl\": 1.0");
  std::ostringstream out, err;
  CHECK(cmd_solve(parse_config(json), RunOptions{dir, 1}, out, err) != 0);
  CHECK(err.str().find("mu = 0.4") != std::string::npos);
  CHECK(err.str().find("nu = ") != std::string::npos);
}

TEST_CASE("reconstruct") {
  const auto dir = fresh_dir("reconstruct");
  const ExperimentConfig cfg = parse_config(transport_json());
  std::ostringstream sink;
  REQUIRE(cmd_solve(cfg, RunOptions{dir, 1}, sink, sink) == 0);
  const auto snapshot = dir / "traj_mu0.4.rta";
  const Trajectory traj = load_trajectory(snapshot);

  SUBCASE("same parameter gives the snapshot row") {
    std::ostringstream out, err;
    CHECK(cmd_reconstruct(cfg, RunOptions{dir, 1}, snapshot, 0.4, TimeRequest{30, std::nullopt},
                          out, err) == 0);
    const auto path = dir / "reconstruct_mu0.4_from0.4_k30.csv";
    CHECK(out.str() == path.string() + "\n");
    const std::string expected =
        "# config_digest=fnv1a64:" + cfg.digest + "\n" +
        cell_field_csv(traj.at(30), {"mu=0.4", "mu_i=0.4", "k=30",
                                     "t=" + format_double(traj.time(30)), "time_residual=0",
                                     "p=1", "theta=0", "shift=0"});
    CHECK(slurp(path) == expected);
  }

  SUBCASE("physical time is rounded and the shift metadata reported") {
    std::ostringstream out, err;
    CHECK(cmd_reconstruct(cfg, RunOptions{dir, 1}, snapshot, 0.8, TimeRequest{std::nullopt, 0.3},
                          out, err) == 0);
    CHECK(err.str().find("rounded to k = 33") != std::string::npos);
    const std::string text = slurp(dir / "reconstruct_mu0.8_from0.4_k33.csv");
    CHECK(text.find("# p=") != std::string::npos);
    CHECK(text.find("# theta=") != std::string::npos);
    CHECK(text.find("j,x_center,value\n1,-9.96,") != std::string::npos);
  }

  SUBCASE("errors") {
    std::ostringstream out, err;
    CHECK(cmd_reconstruct(cfg, RunOptions{dir, 1}, snapshot, 0.8, TimeRequest{56, std::nullopt},
                          out, err) != 0);
    std::string other = transport_json();
    other.replace(other.find("\"n_cells\": 250"), 14, "\"n_cells\": 200");
    std::ostringstream out2, err2;
    CHECK(cmd_reconstruct(parse_config(other), RunOptions{dir, 1}, snapshot, 0.8,
                          TimeRequest{3, std::nullopt}, out2, err2) != 0);
    CHECK(err2.str().find("differs from the requested mesh") != std::string::npos);
  }
}

TEST_CASE("converge") {
  const auto dir = fresh_dir("converge");
  std::string json = transport_json(R"(, "meshes": [125, 250])");
  const ExperimentConfig cfg = parse_config(json);
  std::ostringstream out, err;
  CHECK(cmd_converge(cfg, RunOptions{dir, 2}, false, out, err) == 0);
  const std::string table = slurp(dir / "converge_mu0.8_from0.65.csv");
  CHECK(table.find("n_cells,dx,e_abs,e_rel\n125,0.16,") != std::string::npos);
  CHECK(table.find("\n250,0.08,") != std::string::npos);
  CHECK(table.find("\nrate,,") != std::string::npos);
  CHECK(slurp(dir / "converge_summary.csv").find("0.8,0.4,") != std::string::npos);

  // Same inputs, same bytes, regardless of the thread count.
  const auto dir2 = fresh_dir("converge_again");
  std::ostringstream o2, e2;
  CHECK(cmd_converge(cfg, RunOptions{dir2, 1}, false, o2, e2) == 0);
  CHECK(slurp(dir2 / "converge_mu0.8_from0.65.csv") == table);

  std::ostringstream o3, e3;
  CHECK(cmd_converge(cfg, RunOptions{dir, 1}, true, o3, e3) == 0);
  const std::string hist = slurp(dir / "history_mu0.8_from0.4_N250.csv");
  CHECK(hist.find("k,t,e_abs,e_rel,theta,p\n0,0,0,0,0,1\n") != std::string::npos);

  std::ostringstream o4, e4;
  CHECK(cmd_converge(parse_config(transport_json(R"(, "meshes": [125])")), RunOptions{dir, 1},
                     false, o4, e4) != 0);
}

TEST_CASE("elasto") {
  const auto dir = fresh_dir("elasto");
  std::ostringstream out, err;
  CHECK(cmd_elasto(parse_config(kElastoJson), RunOptions{dir, 2}, out, err) == 0);
  const std::string rta = slurp(dir / "elasto_rta_mu0.8_from0.05.csv");
  CHECK(rta.find("k,j,x_center,sigma,velocity,w1,w2\n") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "elasto_fv_mu0.8.csv"));
  CHECK(std::filesystem::exists(dir / "elasto_snapshot_mu0.05.csv"));
  // 2 requested times x 100 cells + 3 header/comment lines.
  CHECK(std::count(rta.begin(), rta.end(), '\n') == 203);

  std::ostringstream o2, e2;
  CHECK(cmd_elasto(parse_config(transport_json()), RunOptions{dir, 1}, o2, e2) != 0);
}

TEST_CASE("dict") {
  const auto dir = fresh_dir("dict");
  const ExperimentConfig cfg = parse_config(transport_json());
  std::ostringstream sink;
  REQUIRE(cmd_solve(cfg, RunOptions{dir, 1}, sink, sink) == 0);

  std::ostringstream out, err;
  CHECK(cmd_dict(cfg, RunOptions{dir, 1}, {}, 0.8, TimeRequest{40, std::nullopt}, false, out,
                 err) == 0);
  CHECK(out.str().rfind("selected mu_i=0.65\n", 0) == 0);

  std::ostringstream o2, e2;
  CHECK(cmd_dict(cfg, RunOptions{dir, 1}, {dir / "traj_mu0.4.rta", dir / "traj_mu0.65.rta"}, 0.8,
                 TimeRequest{40, std::nullopt}, true, o2, e2) == 0);
  CHECK(o2.str().find("e_abs=") != std::string::npos);
  const std::string table = slurp(dir / "dict_mu0.8_k40_measured.csv");
  CHECK(table.find("mu,k,mode,selected_mu_i,e_abs\n0.8,40,measured,") != std::string::npos);
}
