#include "ssmpc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ssmpc/error.hpp"
#include "ssmpc/plant.hpp"

namespace ssmpc {
namespace {

Trajectory to_trajectory(const SimResult& sim, bool keep_inputs) {
  Trajectory traj;
  traj.t = sim.t;
  traj.z = sim.z;
  if (keep_inputs) traj.u = sim.u;
  return traj;
}

}  // namespace

TrajectorySet gen_decay(const AppConfig& cfg, std::uint64_t seed) {
  const PlantConfig& p = cfg.plant;
  const DataGenConfig& d = cfg.data;
  PlantModel model(p);
  PlantState eq = model.find_equilibrium();

  std::mt19937_64 rng(seed);

  const int n_amps = static_cast<int>(d.amplitude_fractions.size());
  const int n_dirs = (d.n_decay + n_amps - 1) / n_amps;

  TrajectorySet set;
  set.kind = "decay";
  set.seed = seed;
  set.plant_tag = plant_digest(p);
  set.dt = d.dt_sample;
  set.equilibrium_observable = model.observe(eq);

  // Release experiments: pull the arm with a held tension pattern, let it
  // settle, cut the cables. The free decays then start on the very
  // configurations tension drives the arm into, so the autonomous fit is
  // anchored where forced operation actually lives; random kicks in joint
  // space barely visit that corridor. The first four patterns each favour
  // one cable (with some bleed into the others), the rest are unstructured
  // mixtures.
  std::vector<Eigen::Vector4d> pulls;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < n_dirs; ++i) {
    Eigen::Vector4d w;
    for (int c = 0; c < 4; ++c) w(c) = uni(rng);
    if (i < 4) {
      w *= 0.3;
      w(i) = 1.0;
    }
    w /= w.maxCoeff();
    pulls.push_back(w);
  }

  for (int traj_idx = 0; traj_idx < d.n_decay; ++traj_idx) {
    double frac = d.amplitude_fractions[traj_idx % n_amps];
    Eigen::Vector4d hold = pulls[traj_idx / n_amps] * (frac * d.decay_tension);
    PlantState s0 = model.find_equilibrium(hold);
    if (s0.q.cwiseAbs().maxCoeff() > p.angle_limit)
      fail("datagen: decay start exceeds the joint safety limit");
    SimResult sim = simulate(
        model, s0, [](double) { return Eigen::Vector4d::Zero(); },
        d.decay_duration, d.dt_sample, d.dt_sim);
    set.trajectories.push_back(to_trajectory(sim, false));
  }
  return set;
}

namespace {

// Raised-sine tension pattern with an independent amplitude and phase per
// cable, so the four input channels stay linearly independent over time
// (coordinated patterns like a fixed stagger make some tension combination
// constant per run, which lets model bias masquerade as input gain); a
// squared ramp eases in from rest without a tension step.
Eigen::Vector4d raised_sine(double t, const Eigen::Vector4d& amps,
                            double period, const Eigen::Vector4d& phases,
                            double ramp_len) {
  double ramp = 1.0;
  if (ramp_len > 0.0 && t < ramp_len) {
    double f = t / ramp_len;
    ramp = f * f;
  }
  Eigen::Vector4d u;
  for (int c = 0; c < 4; ++c) {
    double ph = 2.0 * M_PI * t / period + phases(c);
    u(c) = 0.5 * amps(c) * (1.0 - std::cos(ph));
  }
  return ramp * u;
}

}  // namespace

TrajectorySet gen_actuated(const AppConfig& cfg, std::uint64_t seed) {
  const PlantConfig& p = cfg.plant;
  const DataGenConfig& d = cfg.data;
  PlantModel model(p);
  PlantState eq = model.find_equilibrium();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);

  TrajectorySet set;
  set.kind = "actuated";
  set.seed = seed;
  set.plant_tag = plant_digest(p);
  set.dt = d.dt_sample;
  set.equilibrium_observable = model.observe(eq);

  std::uniform_real_distribution<double> uamp(0.6, 1.0);
  for (double amp : d.actuated_amplitudes) {
    if (amp < 0.0 || amp > p.tension_max)
      fail("datagen: actuated amplitude outside admissible tensions");
    for (double period : d.actuated_periods) {
      Eigen::Vector4d amps, phases;
      for (int c = 0; c < 4; ++c) {
        amps(c) = amp * uamp(rng);
        phases(c) = uni(rng);
      }
      double ramp_len = d.ramp_periods * period;
      SimResult sim = simulate(
          model, eq,
          [&](double t) {
            return raised_sine(t, amps, period, phases, ramp_len);
          },
          d.actuated_duration, d.dt_sample, d.dt_sim);
      set.trajectories.push_back(to_trajectory(sim, true));
    }
  }
  return set;
}

Trajectory gen_heldout(const AppConfig& cfg, std::uint64_t seed,
                       double amplitude, double period) {
  const PlantConfig& p = cfg.plant;
  const DataGenConfig& d = cfg.data;
  if (amplitude < 0.0 || amplitude > p.tension_max)
    fail("datagen: held-out amplitude outside admissible tensions");
  PlantModel model(p);
  PlantState eq = model.find_equilibrium();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> uamp(0.6, 1.0);
  Eigen::Vector4d amps, phases;
  for (int c = 0; c < 4; ++c) {
    amps(c) = amplitude * uamp(rng);
    phases(c) = uni(rng);
  }
  SimResult sim = simulate(
      model, eq,
      [&](double t) {
        return raised_sine(t, amps, period, phases, d.ramp_periods * period);
      },
      d.actuated_duration, d.dt_sample, d.dt_sim);
  return to_trajectory(sim, true);
}

EmbeddedSnapshot delay_embed(const Eigen::MatrixXd& z, int delay, int stride) {
  if (delay < 1) fail("delay_embed: delay must be >= 1");
  if (stride < 1) fail("delay_embed: stride must be >= 1");
  const int rows = static_cast<int>(z.rows());
  const int n = static_cast<int>(z.cols());
  const int span = delay * stride;
  if (n <= span) fail("delay_embed: trajectory shorter than the embedding span");

  EmbeddedSnapshot out;
  out.delay = delay;
  out.stride = stride;
  out.X.resize(rows * (delay + 1), n - span);
  out.newest_index.resize(n - span);
  for (int k = 0; k < n - span; ++k) {
    int i = k + span;
    out.newest_index[k] = i;
    for (int dcopy = 0; dcopy <= delay; ++dcopy)
      out.X.block(dcopy * rows, k, rows, 1) = z.col(i - dcopy * stride);
  }
  return out;
}

ProjectionBasis svd_modes(const Eigen::MatrixXd& X, int n) {
  const int D = static_cast<int>(X.rows());
  const int K = static_cast<int>(X.cols());
  if (n < 1 || n > std::min(D, K))
    fail("svd_modes: rank deficient: n exceeds data dimensions");

  // Left singular vectors via the D x D Gram matrix; D stays small (the
  // embedded dimension) while K is the full sample count.
  Eigen::MatrixXd gram = X * X.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) fail("svd_modes: eigendecomposition failed");

  Eigen::VectorXd svals(D);
  Eigen::MatrixXd vecs(D, D);
  for (int i = 0; i < D; ++i) {
    double ev = std::max(es.eigenvalues()(D - 1 - i), 0.0);
    svals(i) = std::sqrt(ev);
    vecs.col(i) = es.eigenvectors().col(D - 1 - i);
  }
  // The Gram route squares the condition number, so exact rank deficiency
  // shows up around sqrt(eps) rather than eps.
  if (svals(n - 1) <= svals(0) * 1e-7)
    fail("svd_modes: rank deficient: n exceeds numerical rank");

  ProjectionBasis basis;
  basis.modes = vecs.leftCols(n);
  // Deterministic sign: largest-magnitude entry of each mode positive.
  for (int j = 0; j < n; ++j) {
    int idx = 0;
    basis.modes.col(j).cwiseAbs().maxCoeff(&idx);
    if (basis.modes(idx, j) < 0.0) basis.modes.col(j) *= -1.0;
  }
  basis.singular_values = svals;
  double total = svals.array().square().sum();
  basis.energy_fraction =
      total > 0.0 ? svals.head(n).array().square().sum() / total : 0.0;
  return basis;
}

Eigen::MatrixXd project(const ProjectionBasis& basis, const Eigen::MatrixXd& X) {
  if (X.rows() != basis.modes.rows())
    fail("project: dimension mismatch with basis");
  return basis.modes.transpose() * X;
}

}  // namespace ssmpc
