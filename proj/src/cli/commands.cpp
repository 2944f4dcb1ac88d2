#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rta/csv.hpp"
#include "rta/errors.hpp"
#include "rta/metrics.hpp"
#include "rta/reconstruct.hpp"
#include "rta/store.hpp"
#include "rta/systems.hpp"

namespace rta::cli {

namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
template <class Body>
void parallel_for(std::size_t n, std::size_t jobs, Body body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::filesystem::path out_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.out_dir.empty() ? std::filesystem::path(cfg.output_dir) : opts.out_dir;
}

std::string digest_line(const ExperimentConfig& cfg) {
  return "# config_digest=fnv1a64:" + cfg.digest + "\n";
}

std::string fmt(double v) { return format_double(v); }

SolveConfig solve_config(const ExperimentConfig& cfg, std::size_t n_cells) {
  const double dt = cfg.timestep(n_cells);
  return SolveConfig{dt, cfg.steps(dt)};
}

void require_transport(const ExperimentConfig& cfg, const char* command) {
  if (cfg.problem != Problem::Transport) {
    throw InvalidArgument(std::string(command) + " needs a transport config");
  }
}

template <class Fn>
int guarded(std::ostream& err, Fn fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

std::string trajectory_filename(double mu_i) { return "traj_mu" + fmt(mu_i) + ".rta"; }

ResolvedTime resolve_time(const TimeRequest& request, double dt, std::size_t n_steps) {
  ResolvedTime r;
  if (request.k.has_value() == request.time.has_value()) {
    throw InvalidArgument("give exactly one of a time index and a physical time");
  }
  if (request.k) {
    r.k = *request.k;
  } else {
    const double t = *request.time;
    if (!(t >= 0.0)) throw InvalidArgument("requested time must be non-negative");
    r.k = steps_for_time(t, dt);
    r.residual = t - static_cast<double>(r.k) * dt;
  }
  if (r.k > n_steps) {
    throw InvalidArgument("time index " + std::to_string(r.k) + " is beyond the last step " +
                          std::to_string(n_steps));
  }
  return r;
}

int cmd_solve(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.snapshots.empty()) {
      err << "warning: no snapshot parameters in the config, nothing to solve\n";
      return 0;
    }
    const auto dir = out_dir(cfg, opts);
    const Mesh1D mesh = cfg.mesh();
    const SolveConfig sc = solve_config(cfg, cfg.n_cells);
    std::vector<std::vector<std::filesystem::path>> written(cfg.snapshots.size());

    parallel_for(cfg.snapshots.size(), opts.jobs, [&](std::size_t i) {
      const double mu_i = cfg.snapshots[i];
      if (cfg.problem == Problem::Transport) {
        const auto path = dir / trajectory_filename(mu_i);
        save_trajectory(run_trajectory(cfg.transport, mu_i, cfg.ic, mesh, sc), path);
        written[i].push_back(path);
      } else {
        const ElastoOffline off =
            run_elasto_trajectory(cfg.elasto, mu_i, cfg.sigma_ic, cfg.velocity_ic, mesh, sc);
        const auto stem = "traj_mu" + fmt(mu_i);
        written[i].push_back(dir / (stem + "_w1.rta"));
        written[i].push_back(dir / (stem + "_w2.rta"));
        save_trajectory(off.w1, written[i][0]);
        save_trajectory(off.w2, written[i][1]);
      }
    });
    for (const auto& paths : written) {
      for (const auto& p : paths) out << p.string() << '\n';
    }
    return 0;
  });
}

int cmd_reconstruct(const ExperimentConfig& cfg, const RunOptions& opts,
                    const std::filesystem::path& snapshot, double mu, const TimeRequest& when,
                    std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_transport(cfg, "reconstruct");
    const Trajectory traj = load_trajectory(snapshot);
    const Discretization expected{cfg.mesh(), cfg.timestep()};
    check_discretization(traj, expected);
    const ResolvedTime rt = resolve_time(when, traj.dt, traj.n_steps());
    if (when.time) {
      err << "note: t = " << fmt(*when.time) << " rounded to k = " << rt.k << " (residual "
          << fmt(rt.residual) << " s)\n";
    }
    const Reconstruction rec = rta_reconstruct_full(traj, mu, rt.k, cfg.transport, expected);

    std::string text = digest_line(cfg);
    text += cell_field_csv(rec.field, {"mu=" + fmt(mu), "mu_i=" + fmt(traj.mu_i),
                                       "k=" + std::to_string(rt.k), "t=" + fmt(traj.time(rt.k)),
                                       "time_residual=" + fmt(rt.residual),
                                       "p=" + std::to_string(rec.index.p),
                                       "theta=" + fmt(rec.index.theta),
                                       "shift=" + fmt(rec.shift)});
    const auto path = out_dir(cfg, opts) / ("reconstruct_mu" + fmt(mu) + "_from" +
                                            fmt(traj.mu_i) + "_k" + std::to_string(rt.k) + ".csv");
    write_file_atomic(path, text);
    out << path.string() << '\n';
    return 0;
  });
}

int cmd_converge(const ExperimentConfig& cfg, const RunOptions& opts, bool history,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_transport(cfg, "converge");
    if (cfg.snapshots.empty() || cfg.targets.empty()) {
      throw InvalidArgument("converge needs at least one snapshot and one target parameter");
    }
    const auto dir = out_dir(cfg, opts);
    std::vector<std::filesystem::path> written;

    struct Pair {
      double mu;
      double mu_i;
    };
    std::vector<Pair> pairs;
    for (double mu_i : cfg.snapshots) {
      for (double mu : cfg.targets) pairs.push_back({mu, mu_i});
    }

    if (history) {
      const Mesh1D mesh = cfg.mesh();
      const SolveConfig sc = solve_config(cfg, cfg.n_cells);
      std::vector<std::string> files(pairs.size());
      parallel_for(pairs.size(), opts.jobs, [&](std::size_t i) {
        const auto [mu, mu_i] = pairs[i];
        const Trajectory snap = run_trajectory(cfg.transport, mu_i, cfg.ic, mesh, sc);
        const Trajectory ref = run_trajectory(cfg.transport, mu, cfg.ic, mesh, sc);
        std::ostringstream os;
        os << digest_line(cfg) << "# mu=" << fmt(mu) << " mu_i=" << fmt(mu_i)
           << " n_cells=" << cfg.n_cells << '\n'
           << "k,t,e_abs,e_rel,theta,p\n";
        for (std::size_t k = 0; k <= ref.n_steps(); ++k) {
          const Reconstruction rec = rta_reconstruct_full(snap, mu, k, cfg.transport);
          os << k << ',' << fmt(ref.time(k)) << ',' << fmt(l1_abs_error(rec.field, ref.at(k)))
             << ',' << fmt(l1_rel_error(rec.field, ref.at(k))) << ',' << fmt(rec.index.theta)
             << ',' << rec.index.p << '\n';
        }
        files[i] = os.str();
      });
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto path = dir / ("history_mu" + fmt(pairs[i].mu) + "_from" +
                                 fmt(pairs[i].mu_i) + "_N" + std::to_string(cfg.n_cells) + ".csv");
        write_file_atomic(path, files[i]);
        written.push_back(path);
      }
    } else {
      if (cfg.meshes.size() < 2) throw InvalidArgument("converge needs at least two meshes");
      if (!cfg.final_time) {
        throw InvalidArgument("converge compares meshes at a common physical time: set "
                              "time.final_time");
      }
      struct Row {
        std::size_t n;
        double dx;
        double e_abs;
        double e_rel;
      };
      // rows[mesh][pair]
      std::vector<std::vector<Row>> rows(cfg.meshes.size(), std::vector<Row>(pairs.size()));
      parallel_for(cfg.meshes.size(), opts.jobs, [&](std::size_t m) {
        const std::size_t n = cfg.meshes[m];
        const Mesh1D mesh = cfg.mesh(n);
        const SolveConfig sc = solve_config(cfg, n);
        std::map<double, Trajectory> solved;
        auto solve = [&](double mu) -> const Trajectory& {
          auto it = solved.find(mu);
          if (it == solved.end()) {
            it = solved.emplace(mu, run_trajectory(cfg.transport, mu, cfg.ic, mesh, sc)).first;
          }
          return it->second;
        };
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          const CellField rec = rta_reconstruct(solve(pairs[i].mu_i), pairs[i].mu, sc.n_steps,
                                                cfg.transport);
          const CellField& ref = solve(pairs[i].mu).at(sc.n_steps);
          rows[m][i] = Row{n, mesh.dx(), l1_abs_error(rec, ref), l1_rel_error(rec, ref)};
        }
      });

      std::ostringstream summary;
      summary << digest_line(cfg) << "mu,mu_i,rate_abs,constant_abs,rate_rel,constant_rel\n";
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::vector<std::pair<double, double>> abs_pts, rel_pts;
        std::ostringstream os;
        os << digest_line(cfg) << "# mu=" << fmt(pairs[i].mu) << " mu_i=" << fmt(pairs[i].mu_i)
           << " final_time=" << fmt(*cfg.final_time) << '\n'
           << "n_cells,dx,e_abs,e_rel\n";
        for (std::size_t m = 0; m < cfg.meshes.size(); ++m) {
          const Row& r = rows[m][i];
          os << r.n << ',' << fmt(r.dx) << ',' << fmt(r.e_abs) << ',' << fmt(r.e_rel) << '\n';
          abs_pts.emplace_back(r.dx, r.e_abs);
          rel_pts.emplace_back(r.dx, r.e_rel);
        }
        const RateFit fa = fit_convergence_rate(abs_pts);
        const RateFit fr = fit_convergence_rate(rel_pts);
        os << "rate,," << fmt(fa.rate) << ',' << fmt(fr.rate) << '\n';
        summary << fmt(pairs[i].mu) << ',' << fmt(pairs[i].mu_i) << ',' << fmt(fa.rate) << ','
                << fmt(fa.constant) << ',' << fmt(fr.rate) << ',' << fmt(fr.constant) << '\n';
        const auto path =
            dir / ("converge_mu" + fmt(pairs[i].mu) + "_from" + fmt(pairs[i].mu_i) + ".csv");
        write_file_atomic(path, os.str());
        written.push_back(path);
      }
      const auto path = dir / "converge_summary.csv";
      write_file_atomic(path, summary.str());
      written.push_back(path);
    }
    for (const auto& p : written) out << p.string() << '\n';
    return 0;
  });
}

namespace {

void append_system_rows(std::ostringstream& os, std::size_t k, const SystemField& cons,
                        const SystemField& chars) {
  const Mesh1D& mesh = cons.first.mesh();
  for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
    os << k << ',' << j + 1 << ',' << fmt(mesh.center(j)) << ',' << fmt(cons.first[j]) << ','
       << fmt(cons.second[j]) << ',' << fmt(chars.first[j]) << ',' << fmt(chars.second[j])
       << '\n';
  }
}

constexpr const char* kElastoHeader = "k,j,x_center,sigma,velocity,w1,w2\n";

}  // namespace

int cmd_elasto(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.problem != Problem::Elasto) throw InvalidArgument("elasto needs an elasto config");
    if (cfg.snapshots.empty() || cfg.targets.empty()) {
      throw InvalidArgument("elasto needs at least one snapshot and one target parameter");
    }
    const auto dir = out_dir(cfg, opts);
    const Mesh1D mesh = cfg.mesh();
    const SolveConfig sc = solve_config(cfg, cfg.n_cells);

    std::vector<std::size_t> ks;
    if (cfg.times.empty()) {
      ks.push_back(sc.n_steps);
    } else {
      for (double t : cfg.times) {
        const ResolvedTime rt = resolve_time(TimeRequest{std::nullopt, t}, sc.dt, sc.n_steps);
        err << "note: t = " << fmt(t) << " rounded to k = " << rt.k << " (residual "
            << fmt(rt.residual) << " s)\n";
        ks.push_back(rt.k);
      }
    }

    // Every distinct parameter is solved once.
    std::vector<double> params = cfg.snapshots;
    params.insert(params.end(), cfg.targets.begin(), cfg.targets.end());
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    std::vector<std::optional<ElastoOffline>> solved(params.size());
    parallel_for(params.size(), opts.jobs, [&](std::size_t i) {
      solved[i] = run_elasto_trajectory(cfg.elasto, params[i], cfg.sigma_ic, cfg.velocity_ic,
                                        mesh, sc);
    });
    auto offline = [&](double mu) -> const ElastoOffline& {
      const auto it = std::lower_bound(params.begin(), params.end(), mu);
      return *solved[static_cast<std::size_t>(it - params.begin())];
    };

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& comment, auto&& rows) {
      std::ostringstream os;
      os << digest_line(cfg) << "# " << comment << '\n' << kElastoHeader;
      for (std::size_t k : ks) rows(os, k);
      const auto path = dir / name;
      write_file_atomic(path, os.str());
      written.push_back(path);
    };

    for (double mu : cfg.targets) {
      const ElastoOffline& direct = offline(mu);
      emit("elasto_fv_mu" + fmt(mu) + ".csv", "direct FV solve mu=" + fmt(mu),
           [&](std::ostringstream& os, std::size_t k) {
             append_system_rows(os, k, direct.conservative(k), direct.characteristic(k));
           });
      for (double mu_i : cfg.snapshots) {
        const ElastoOffline& snap = offline(mu_i);
        emit("elasto_rta_mu" + fmt(mu) + "_from" + fmt(mu_i) + ".csv",
             "RTA reconstruction mu=" + fmt(mu) + " mu_i=" + fmt(mu_i),
             [&](std::ostringstream& os, std::size_t k) {
               const ElastoReconstruction rec = rta_elasto_reconstruct(snap, cfg.elasto, mu, k);
               append_system_rows(os, k, rec.conservative, rec.characteristic);
             });
      }
    }
    for (double mu_i : cfg.snapshots) {
      const ElastoOffline& snap = offline(mu_i);
      emit("elasto_snapshot_mu" + fmt(mu_i) + ".csv", "snapshot FV solve mu_i=" + fmt(mu_i),
           [&](std::ostringstream& os, std::size_t k) {
             append_system_rows(os, k, snap.conservative(k), snap.characteristic(k));
           });
    }
    for (const auto& p : written) out << p.string() << '\n';
    return 0;
  });
}

int cmd_dict(const ExperimentConfig& cfg, const RunOptions& opts,
             const std::vector<std::filesystem::path>& snapshot_files, double mu,
             const TimeRequest& when, bool with_reference, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    require_transport(cfg, "dict");
    const Mesh1D mesh = cfg.mesh();
    const SolveConfig sc = solve_config(cfg, cfg.n_cells);
    const Discretization expected{mesh, sc.dt};

    SnapshotStore store;
    if (!snapshot_files.empty()) {
      for (const auto& path : snapshot_files) {
        Trajectory traj = load_trajectory(path);
        check_discretization(traj, expected);
        store.add(std::move(traj));
      }
    } else {
      std::vector<std::optional<Trajectory>> solved(cfg.snapshots.size());
      parallel_for(cfg.snapshots.size(), opts.jobs, [&](std::size_t i) {
        solved[i] = run_trajectory(cfg.transport, cfg.snapshots[i], cfg.ic, mesh, sc);
      });
      for (auto& t : solved) store.add(std::move(*t));
    }
    if (store.empty()) throw NotFound("dict: no snapshots to select from");

    std::size_t n_steps = store.entries().begin()->second.n_steps();
    for (const auto& [_, traj] : store.entries()) n_steps = std::min(n_steps, traj.n_steps());
    const ResolvedTime rt = resolve_time(when, sc.dt, n_steps);

    std::ostringstream os;
    os << digest_line(cfg) << "mu,k,mode,selected_mu_i,e_abs\n";
    if (with_reference) {
      const Trajectory ref = run_trajectory(
          cfg.transport, mu, cfg.ic, mesh, SolveConfig{sc.dt, rt.k});
      const auto [key, e_abs] = select_best_measured(store, mu, rt.k, ref.at(rt.k), cfg.transport);
      os << fmt(mu) << ',' << rt.k << ",measured," << fmt(key) << ',' << fmt(e_abs) << '\n';
      out << "selected mu_i=" << fmt(key) << " e_abs=" << fmt(e_abs) << '\n';
    } else {
      const double key = select_nearest(store, mu, cfg.transport);
      os << fmt(mu) << ',' << rt.k << ",nearest," << fmt(key) << ",\n";
      out << "selected mu_i=" << fmt(key) << '\n';
    }
    const auto path = out_dir(cfg, opts) / ("dict_mu" + fmt(mu) + "_k" + std::to_string(rt.k) +
                                            (with_reference ? "_measured" : "_nearest") + ".csv");
    write_file_atomic(path, os.str());
    out << path.string() << '\n';
    return 0;
  });
}

}  // namespace rta::cli
