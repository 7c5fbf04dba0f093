#include <doctest.h>

#include <cmath>
#include <iostream>

#include "ssmpc/datagen.hpp"
#include "ssmpc/error.hpp"
#include "ssmpc/plant.hpp"

using namespace ssmpc;

TEST_CASE("decay data settles to near rest and is seed-deterministic") {
  AppConfig cfg;
  cfg.data.n_decay = 6;
  cfg.data.decay_duration = 4.0;
  TrajectorySet set = gen_decay(cfg, 42);
  REQUIRE(set.trajectories.size() == 6);
  CHECK(set.kind == "decay");
  CHECK(set.dt == cfg.data.dt_sample);

  int per_second = static_cast<int>(std::lround(1.0 / set.dt));
  for (const auto& traj : set.trajectories) {
    CHECK(!traj.forced());
    // Mean tip speed in the final second under 1% of the first second.
    auto mean_speed = [&](int from, int to) {
      double acc = 0.0;
      for (int k = from + 1; k < to; ++k)
        acc += (traj.z.col(k).head(3) - traj.z.col(k - 1).head(3)).norm() / set.dt;
      return acc / (to - from - 1);
    };
    double early = mean_speed(0, per_second);
    double late = mean_speed(traj.samples() - per_second, traj.samples());
    CHECK(late < 0.01 * early);
  }

  TrajectorySet again = gen_decay(cfg, 42);
  CHECK((again.trajectories[3].z - set.trajectories[3].z)
            .lpNorm<Eigen::Infinity>() == 0.0);
  TrajectorySet other = gen_decay(cfg, 43);
  CHECK((other.trajectories[3].z - set.trajectories[3].z)
            .lpNorm<Eigen::Infinity>() > 1e-9);
}

TEST_CASE("actuated data respects tension bounds and amplitude ordering") {
  AppConfig cfg;
  cfg.data.actuated_amplitudes = {0.05, 0.10};
  cfg.data.actuated_periods = {0.7};
  cfg.data.actuated_duration = 3.0;
  TrajectorySet set = gen_actuated(cfg, 7);
  REQUIRE(set.trajectories.size() == 2);

  for (const auto& traj : set.trajectories) {
    REQUIRE(traj.forced());
    CHECK(traj.u.minCoeff() >= 0.0);
    CHECK(traj.u.maxCoeff() <= cfg.plant.tension_max);
    CHECK(traj.u.col(0).norm() == 0.0);  // ramped start from rest
  }

  auto peak_disp = [&](const Trajectory& traj) {
    Eigen::Vector3d tip0 = set.equilibrium_observable.head<3>();
    double peak = 0.0;
    for (int k = 0; k < traj.samples(); ++k)
      peak = std::max(peak, (traj.z.col(k).head<3>() - tip0).norm());
    return peak;
  };
  CHECK(peak_disp(set.trajectories[1]) > peak_disp(set.trajectories[0]));

  cfg.data.actuated_amplitudes = {5.0};  // beyond tension_max
  CHECK_THROWS_WITH_AS(gen_actuated(cfg, 7), doctest::Contains("admissible"),
                       Error);
}

TEST_CASE("delay embedding stacks shifted copies with shared entries") {
  Eigen::MatrixXd z(6, 3);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 6; ++i) z(i, k) = 10.0 * k + i;

  EmbeddedSnapshot emb = delay_embed(z, 1, 1);
  REQUIRE(emb.X.rows() == 12);
  REQUIRE(emb.X.cols() == 2);
  // Newest sample on top: column k = [z_{k+1}; z_k].
  CHECK(emb.X(0, 0) == 10.0);
  CHECK(emb.X(6, 0) == 0.0);
  CHECK(emb.newest_index[0] == 1);
  // Adjacent columns share d*6 entries (shift consistency at unit stride).
  CHECK((emb.X.block(0, 0, 6, 1) - emb.X.block(6, 1, 6, 1)).norm() == 0.0);

  EmbeddedSnapshot wide = delay_embed(z, 2, 1);
  REQUIRE(wide.X.rows() == 18);
  REQUIRE(wide.X.cols() == 1);

  CHECK_THROWS_WITH_AS(delay_embed(z, 1, 5), doctest::Contains("shorter"),
                       Error);
  CHECK_THROWS_AS(delay_embed(z, 0, 1), Error);
}

TEST_CASE("svd modes recover a planted subspace orthonormally") {
  std::srand(99);
  Eigen::MatrixXd V = Eigen::MatrixXd::Random(12, 3);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(12, 3);
  Eigen::MatrixXd C = Eigen::MatrixXd::Random(3, 400);
  C.row(0) *= 5.0;
  C.row(1) *= 2.0;
  Eigen::MatrixXd X = Q * C;

  ProjectionBasis basis = svd_modes(X, 3);
  CHECK((basis.modes.transpose() * basis.modes - Eigen::MatrixXd::Identity(3, 3))
            .lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(basis.energy_fraction == doctest::Approx(1.0));
  // Principal angles between recovered and planted subspaces ~ 0.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q.transpose() * basis.modes);
  CHECK(svd.singularValues().minCoeff() > 1.0 - 1e-8);
  // Descending singular values.
  for (int i = 1; i < basis.singular_values.size(); ++i)
    CHECK(basis.singular_values(i) <= basis.singular_values(i - 1) + 1e-12);

  CHECK_THROWS_WITH_AS(svd_modes(X, 4), doctest::Contains("rank deficient"),
                       Error);

  Eigen::MatrixXd XR = project(basis, X);
  CHECK((basis.modes * XR - X).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("decay embedding concentrates energy in three directions") {
  AppConfig cfg;
  TrajectorySet set = gen_decay(cfg, 1);

  int trim = static_cast<int>(cfg.train.trim_seconds / set.dt);
  std::vector<Eigen::MatrixXd> blocks;
  long total_cols = 0;
  for (const auto& traj : set.trajectories) {
    Eigen::MatrixXd centered =
        traj.z.colwise() - set.equilibrium_observable;
    EmbeddedSnapshot emb = delay_embed(
        centered.rightCols(centered.cols() - trim), cfg.train.delay,
        cfg.train.stride);
    blocks.push_back(emb.X);
    total_cols += emb.X.cols();
  }
  Eigen::MatrixXd X(blocks[0].rows(), total_cols);
  long at = 0;
  for (const auto& b : blocks) {
    X.middleCols(at, b.cols()) = b;
    at += b.cols();
  }

  ProjectionBasis basis = svd_modes(X, 3);
  std::cout << "embedded singular value energies:";
  double total = basis.singular_values.array().square().sum();
  for (int i = 0; i < 6; ++i)
    std::cout << " "
              << basis.singular_values(i) * basis.singular_values(i) / total;
  std::cout << "\n  three-mode energy fraction: " << basis.energy_fraction
            << "\n";
  CHECK(basis.energy_fraction > 0.9);
  // The fourth direction must be clearly subordinate, otherwise a rank-3
  // reduced model is underfit.
  double e3 = basis.singular_values(2) * basis.singular_values(2);
  double e4 = basis.singular_values(3) * basis.singular_values(3);
  CHECK(e4 < 0.5 * e3);
}
