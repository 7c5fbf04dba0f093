#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ssmpc/config.hpp"

namespace ssmpc {

// One recorded run: uniformly sampled observables, and tensions when forced.
struct Trajectory {
  std::vector<double> t;
  Eigen::MatrixXd z;  // 6 x n_samples
  Eigen::MatrixXd u;  // 4 x n_samples, or 0 x 0 for unforced runs

  int samples() const { return static_cast<int>(t.size()); }
  bool forced() const { return u.size() > 0; }
};

// A batch of trajectories recorded against one plant, stored on disk as a
// manifest.json plus one CSV per trajectory (t,z1..z6[,u1..u4], full
// precision so reload is bit-exact).
struct TrajectorySet {
  std::string kind;  // "decay" or "actuated"
  std::uint64_t seed = 0;
  std::string plant_tag;  // digest of the plant parameters used
  double dt = 0.0;
  Eigen::VectorXd equilibrium_observable;  // 6, recorded at generation time
  std::vector<Trajectory> trajectories;

  void save(const std::string& dir) const;
  static TrajectorySet load(const std::string& dir);
};

// FNV-1a digest of a canonical key-value serialization; used to tag which
// plant produced a data set and to assert benchmark runs share a setup.
std::string config_digest(const KvFile& kv);
std::string plant_digest(const PlantConfig& plant);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace ssmpc
