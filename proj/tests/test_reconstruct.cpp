#include <doctest.h>

#include <cmath>
#include <random>

#include "rta/errors.hpp"
#include "rta/metrics.hpp"
#include "rta/reconstruct.hpp"
#include "rta/shift_ops.hpp"
#include "support.hpp"

using namespace rta;
using testing::field;

namespace {

// Trajectory whose k-th field is `snapshot`, on a unit-width mesh with dt = 1,
// so a target speed s at k = 1 requests a shift of exactly s - nu_i cells.
Trajectory single_step(const CellField& snapshot, double nu_i = 0.0) {
  return Trajectory{snapshot.mesh(), 0.0, nu_i, 1.0, {snapshot, snapshot}};
}

}  // namespace

TEST_CASE("rta_reconstruct: target equal to the snapshot parameter is the identity") {
  const auto setup = testing::transport_setup(250);
  const Trajectory traj =
      run_trajectory(setup.model, 0.4, setup.ic, setup.mesh, SolveConfig{setup.dt, 150});
  for (std::size_t k = 0; k <= 150; ++k) {
    const Reconstruction r = rta_reconstruct_full(traj, 0.4, k, setup.model);
    CHECK(r.shift == 0.0);
    CHECK(r.index.p == 1);
    CHECK(r.index.theta == 0.0);
    CHECK(testing::bitwise_equal(r.field, traj.fields[k]));
  }
}

TEST_CASE("reconstruct_at_speed: recurrence example") {
  const Mesh1D m(0.0, 4.0, 4);
  const Trajectory traj = single_step(field(m, {1, 0, 0, 0}));
  const Reconstruction r = reconstruct_at_speed(traj, 1.2, 1);
  CHECK(r.index.p == 2);
  CHECK(r.index.theta == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(r.field[0] == 0.0);
  CHECK(r.field[1] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(r.field[2] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(r.field[3] == 0.0);
}

TEST_CASE("relative shift is a single product") {
  const double nu = 0.685714285714, nu_i = 0.4571428571;
  CHECK(relative_shift(1000003, nu, nu_i) == 1000003.0 * (nu - nu_i));
}

TEST_CASE("fast path agrees with the geometric oracle: exhaustive small mesh") {
  std::mt19937_64 rng(101);
  const std::size_t n = 7;
  const Mesh1D m(-1.0, 2.5, n);
  for (int trial = 0; trial < 5; ++trial) {
    const CellField u = testing::random_field(rng, m);
    for (int i = -210; i <= 210; ++i) {
      const double s = 0.1 * i;
      CHECK(testing::max_abs_diff(apply_generalized_shift(u, s), translate_and_average(u, s)) <=
            1e-13);
    }
  }
}

TEST_CASE("fast path agrees with the geometric oracle: random large meshes") {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<std::size_t> n_dist(2, 2048);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = n_dist(rng);
    const Mesh1D m(-10.0, 10.0, n);
    const CellField u = testing::random_field(rng, m);
    const double s = unit(rng) * 10.0 * static_cast<double>(n);
    CHECK(testing::max_abs_diff(apply_generalized_shift(u, s), translate_and_average(u, s)) <=
          1e-13);
  }
}

TEST_CASE("geometric oracle: integer and zero shifts") {
  std::mt19937_64 rng(107);
  const Mesh1D m(0.0, 1.0, 11);
  const CellField u = testing::random_field(rng, m);
  CHECK(testing::bitwise_equal(translate_and_average(u, 0.0), u));
  for (int s = -25; s <= 25; ++s) {
    CHECK(testing::bitwise_equal(translate_and_average(u, s), apply_L_power(u, s)));
  }
}

TEST_CASE("rta_reconstruct and the oracle on solver trajectories") {
  const auto setup = testing::transport_setup(250);
  const Trajectory traj =
      run_trajectory(setup.model, 0.4, setup.ic, setup.mesh, SolveConfig{setup.dt, 120});
  for (double mu : {0.0, 0.13, 0.8, 1.0}) {
    for (std::size_t k : {0u, 1u, 17u, 60u, 120u}) {
      CHECK(testing::max_abs_diff(rta_reconstruct(traj, mu, k, setup.model),
                                  rta_reconstruct_oracle(traj, mu, k, setup.model)) <= 1e-13);
    }
  }
}

TEST_CASE("reconstruction of mu = 0.8 from mu_i = 0.4 overlays the direct solve") {
  const auto setup = testing::transport_setup(250);
  const std::size_t last = steps_for_time(0.9, setup.dt);
  const SolveConfig sc{setup.dt, last};
  const Trajectory snap = run_trajectory(setup.model, 0.4, setup.ic, setup.mesh, sc);
  const Trajectory direct = run_trajectory(setup.model, 0.8, setup.ic, setup.mesh, sc);
  for (double t : {0.216, 0.722, 0.814}) {
    const std::size_t k = steps_for_time(t, setup.dt);
    const CellField phi = rta_reconstruct(snap, 0.8, k, setup.model);
    CHECK(l1_rel_error(phi, direct.at(k)) < 0.02);
    CHECK(phi.min() >= -1.0);
    CHECK(phi.max() <= 1.0);
  }
}

TEST_CASE("TVB, conservation and range on random initial data") {
  std::mt19937_64 rng(109);
  const auto setup = testing::transport_setup(160);
  std::uniform_real_distribution<double> mu_dist(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const PiecewiseConstant ic = testing::random_piecewise(rng, setup.mesh);
    const double mu_i = mu_dist(rng);
    const Trajectory traj =
        run_trajectory(setup.model, mu_i, ic, setup.mesh, SolveConfig{setup.dt, 80});
    const double tv0 = total_variation(traj.fields[0]);
    for (std::size_t k : {0u, 5u, 33u, 80u}) {
      const double mu = mu_dist(rng);
      const CellField phi = rta_reconstruct(traj, mu, k, setup.model);
      const CellField& uk = traj.fields[k];
      CHECK(total_variation(phi) <= tv0 * (1.0 + 1e-12));
      CHECK(std::abs(phi.sum() - uk.sum()) <= 1e-12 * std::max(1.0, std::abs(uk.sum())));
      CHECK(phi.min() >= uk.min());
      CHECK(phi.max() <= uk.max());
    }
  }
}

TEST_CASE("reconstruction at k reads only the k-th snapshot") {
  const auto setup = testing::transport_setup(100);
  Trajectory traj =
      run_trajectory(setup.model, 0.3, setup.ic, setup.mesh, SolveConfig{setup.dt, 40});
  const CellField before = rta_reconstruct(traj, 0.9, 25, setup.model);
  for (std::size_t k = 0; k <= 40; ++k) {
    if (k != 25) traj.fields[k] = CellField(setup.mesh, 1234.5);
  }
  CHECK(testing::bitwise_equal(rta_reconstruct(traj, 0.9, 25, setup.model), before));
}

TEST_CASE("theta snapping near integer shifts") {
  std::mt19937_64 rng(113);
  const Mesh1D m(0.0, 9.0, 9);  // dx = dt = 1, so speed equals the Courant number
  const CellField u = testing::random_field(rng, m);

  auto idx = snapped_decomposition(3.0 - 1e-13, 9);
  CHECK(idx.theta == 0.0);
  CHECK(idx.whole == 3);
  CHECK(idx.p == 4);
  idx = snapped_decomposition(-2.0 + 5e-13, 9);
  CHECK(idx.theta == 0.0);
  CHECK(idx.whole == -2);
  idx = snapped_decomposition(0.5, 9);
  CHECK(idx.theta == 0.5);

  const Trajectory traj = single_step(u);
  const Reconstruction r = reconstruct_at_speed(traj, 3.0 - 1e-13, 1);
  CHECK(testing::bitwise_equal(r.field, apply_L_power(u, 3)));
}

TEST_CASE("shifts of any size wrap around the period") {
  std::mt19937_64 rng(127);
  const Mesh1D m(0.0, 1.0, 16);
  const CellField u = testing::random_field(rng, m);
  const CellField small = apply_generalized_shift(u, 2.25);
  CHECK(testing::bitwise_equal(apply_generalized_shift(u, 2.25 + 16.0 * 1000), small));
  CHECK(testing::bitwise_equal(apply_generalized_shift(u, 2.25 - 16.0 * 37), small));
}

TEST_CASE("discretization checks") {
  const auto setup = testing::transport_setup(50);
  const Trajectory traj =
      run_trajectory(setup.model, 0.4, setup.ic, setup.mesh, SolveConfig{setup.dt, 10});

  // A model that disagrees with the stored Courant number.
  const TransportModel other{6.0, 2.0};
  CHECK_THROWS_AS(rta_reconstruct(traj, 0.5, 3, other), IncompatibleDiscretization);
  CHECK_THROWS_AS(rta_reconstruct_oracle(traj, 0.5, 3, other), IncompatibleDiscretization);

  const Discretization ok{setup.mesh, setup.dt};
  CHECK_NOTHROW(rta_reconstruct_full(traj, 0.5, 3, setup.model, ok));
  const Discretization wrong_mesh{Mesh1D(-10.0, 10.0, 51), setup.dt};
  CHECK_THROWS_AS(rta_reconstruct_full(traj, 0.5, 3, setup.model, wrong_mesh),
                  IncompatibleDiscretization);
  const Discretization wrong_dt{setup.mesh, setup.dt * 0.5};
  CHECK_THROWS_AS(rta_reconstruct_full(traj, 0.5, 3, setup.model, wrong_dt),
                  IncompatibleDiscretization);

  CHECK_THROWS_AS(rta_reconstruct(traj, 0.5, 11, setup.model), InvalidArgument);
}
