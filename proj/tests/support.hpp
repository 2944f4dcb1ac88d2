#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "rta/mesh.hpp"
#include "rta/systems.hpp"
#include "rta/upwind.hpp"

namespace rta::testing {

// Two-plateau transport experiment on (-10, 10): u = -1 on [-10/3, 10/3], +1 elsewhere,
// a(mu) = 5 mu + 2, CFL 0.8 at mu = 1.
struct TransportSetup {
  Mesh1D mesh;
  TransportModel model;
  PiecewiseConstant ic;
  double dt;
};

inline TransportSetup transport_setup(std::size_t n_cells) {
  const double L = 10.0;
  Mesh1D mesh(-L, L, n_cells);
  TransportModel model{5.0, 2.0, 0.0, 1.0};
  PiecewiseConstant ic{{-L / 3.0, L / 3.0}, {1.0, -1.0, 1.0}};
  return {mesh, model, ic, cfl_timestep(model, mesh, 0.8, 1.0)};
}

// Elastic bar: E = 19e10 mu + 1e11, rho = 7800, sigma0 = 0, v0 = 1 on the left half.
struct ElastoSetup {
  Mesh1D mesh;
  ElastoModel model;
  PiecewiseConstant sigma0;
  PiecewiseConstant velocity0;
  double dt;
};

inline ElastoSetup elasto_setup(std::size_t n_cells) {
  Mesh1D mesh(-10.0, 10.0, n_cells);
  ElastoModel model{19e10, 1e11, 7800.0};
  return {mesh, model, PiecewiseConstant{{}, {0.0}}, PiecewiseConstant{{0.0}, {1.0, 0.0}},
          0.8 * mesh.dx() / model.celerity(1.0)};
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline CellField random_field(std::mt19937_64& rng, const Mesh1D& mesh) {
  return CellField(mesh, random_values(rng, mesh.n_cells()));
}

// Random piecewise-constant function with a few plateaus on the mesh's domain.
inline PiecewiseConstant random_piecewise(std::mt19937_64& rng, const Mesh1D& mesh,
                                          std::size_t max_breaks = 6) {
  std::uniform_int_distribution<std::size_t> nb(1, max_breaks);
  std::uniform_real_distribution<double> pos(mesh.x_min(), mesh.x_max());
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  PiecewiseConstant pc;
  const std::size_t n = nb(rng);
  for (std::size_t i = 0; i < n; ++i) pc.breakpoints.push_back(pos(rng));
  std::sort(pc.breakpoints.begin(), pc.breakpoints.end());
  pc.breakpoints.erase(std::unique(pc.breakpoints.begin(), pc.breakpoints.end()),
                       pc.breakpoints.end());
  for (std::size_t i = 0; i <= pc.breakpoints.size(); ++i) pc.values.push_back(val(rng));
  return pc;
}

inline double max_abs_diff(const CellField& a, const CellField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline CellField field(const Mesh1D& mesh, std::vector<double> v) {
  return CellField(mesh, std::move(v));
}

inline bool bitwise_equal(const CellField& a, const CellField& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != b[j]) return false;
  }
  return true;
}

}  // namespace rta::testing
