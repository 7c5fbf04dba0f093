#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ssmpc/config.hpp"
#include "ssmpc/trajectory.hpp"

namespace ssmpc {

// Releases the arm from seeded random joint displacements around equilibrium
// (zero rates, zero tension) and records the free decay.
TrajectorySet gen_decay(const AppConfig& cfg, std::uint64_t seed);

// Drives the cables with raised-sine tension patterns over a grid of
// amplitudes and periods, phase-staggered across the four cables and ramped
// in smoothly from equilibrium.
TrajectorySet gen_actuated(const AppConfig& cfg, std::uint64_t seed);

// A single actuated run off the training grid, for held-out evaluation.
Trajectory gen_heldout(const AppConfig& cfg, std::uint64_t seed,
                       double amplitude, double period);

// Time-delay embedding of a (already centered) observable matrix: column k
// stacks the newest sample on top, [z_{i}; z_{i-stride}; ...; z_{i-d*stride}]
// with i = k + d*stride. newest_index maps each column back to its source
// sample for aligning inputs and derivative estimates.
struct EmbeddedSnapshot {
  Eigen::MatrixXd X;               // 6*(d+1) x n_cols
  std::vector<int> newest_index;   // per column
  int delay = 1;
  int stride = 1;
};

EmbeddedSnapshot delay_embed(const Eigen::MatrixXd& z, int delay, int stride);

// Rank-n orthonormal basis of the embedded snapshots from the data's leading
// principal directions; columns sign-normalized so the largest-magnitude
// entry is positive.
struct ProjectionBasis {
  Eigen::MatrixXd modes;            // D x n, orthonormal columns
  Eigen::VectorXd singular_values;  // all of them, descending
  double energy_fraction = 0.0;     // captured by the leading n
};

ProjectionBasis svd_modes(const Eigen::MatrixXd& X, int n);

Eigen::MatrixXd project(const ProjectionBasis& basis, const Eigen::MatrixXd& X);

}  // namespace ssmpc
