// Scratch sweep for the static-estimator accuracy problem. Not installed.
#include <cstdio>
#include <optional>
#include <limits>
#include <algorithm>
#include <vector>

#include "ssmpc/datagen.hpp"
#include "ssmpc/plant.hpp"
#include "ssmpc/ssm.hpp"

using namespace ssmpc;

static double replay_nrmse(const ControlModel& model, const Trajectory& tr,
                           double dt, int n_trim, int steps,
                           bool with_input) {
  Eigen::VectorXd z0c = tr.z.col(n_trim) - model.equilibrium_observable();
  Eigen::MatrixXd useq;
  if (with_input) useq = tr.u.middleCols(n_trim, steps);
  OpenLoopPrediction pred;
  try {
    pred = predict_open_loop(model, z0c, useq, steps);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
  double num = 0.0, den = 0.0;
  Eigen::Vector3d tip_mean = Eigen::Vector3d::Zero();
  for (int k = 0; k <= steps; ++k)
    tip_mean += tr.z.col(n_trim + k).head<3>() / (steps + 1.0);
  for (int k = 0; k <= steps; ++k) {
    num +=
        (pred.z.col(k).head<3>() - tr.z.col(n_trim + k).head<3>()).squaredNorm();
    den += (tr.z.col(n_trim + k).head<3>() - tip_mean).squaredNorm();
  }
  return std::sqrt(num / den);
}

static void run_combo(double lambda, double decay_amp, double ascale, double trim) {
  AppConfig cfg;
  cfg.train.ridge_lambda = lambda;
  (void)0;
  for (auto& a : cfg.data.actuated_amplitudes) a *= ascale;
  cfg.data.decay_tension = decay_amp;
  cfg.train.trim_seconds = trim;
  TrajectorySet decay = gen_decay(cfg, 101);
  TrajectorySet actuated = gen_actuated(cfg, 202);
  SsmTrainReport report;
  std::optional<SsmModel> model_opt;
  try {
    model_opt.emplace(train_ssm(decay, actuated, cfg.train, &report));
  } catch (const std::exception& e) {
    std::printf("lam %.0e as %.2f damp %.2f : FAILED %s\n", lambda, ascale,
                decay_amp, e.what());
    return;
  }
  SsmModel& model = *model_opt;

  // Envelope check: how far outside the decay envelope does actuated data go?
  auto max_norm = [&](const TrajectorySet& set) {
    double m = 0.0;
    const int nt =
        static_cast<int>(std::lround(cfg.train.trim_seconds / set.dt));
    for (const Trajectory& t2 : set.trajectories) {
      Eigen::MatrixXd z2 =
          t2.z.rightCols(t2.samples() - nt).colwise() - set.equilibrium_observable;
      EmbeddedSnapshot e2 = delay_embed(z2, cfg.train.delay, cfg.train.stride);
      Eigen::MatrixXd x2 = project(model.basis(), e2.X);
      for (Eigen::Index c = 0; c < x2.cols(); ++c)
        m = std::max(m, x2.col(c).norm());
    }
    return m;
  };
  double decay_env = max_norm(decay);
  double act_env = max_norm(actuated);
  const double dt = decay.dt;
  const Eigen::VectorXd z_eq = decay.equilibrium_observable;
  const int n_trim =
      static_cast<int>(std::lround(cfg.train.trim_seconds / dt));

  // Static-estimator accuracy per reduced coordinate on the small decay run.
  const Trajectory& tr = decay.trajectories.front();
  Eigen::MatrixXd zc = tr.z.rightCols(tr.samples() - n_trim).colwise() - z_eq;
  EmbeddedSnapshot emb = delay_embed(zc, cfg.train.delay, cfg.train.stride);
  Eigen::MatrixXd xr = project(model.basis(), emb.X);
  Eigen::Vector3d err2 = Eigen::Vector3d::Zero();
  Eigen::Vector3d sig2 = Eigen::Vector3d::Zero();
  for (Eigen::Index k = 0; k < xr.cols(); ++k) {
    Eigen::VectorXd est = model.from_observable(zc.col(emb.newest_index[k]));
    err2 += (est - xr.col(k)).cwiseAbs2();
    sig2 += xr.col(k).cwiseAbs2();
  }
  Eigen::Vector3d row_rel = (err2.array() / sig2.array()).sqrt();

  // Replay metric exactly as the acceptance-style test computes it, plus the
  // worst case over every decay trajectory.
  int steps = static_cast<int>(std::lround(2.0 / dt));
  double nrmse = replay_nrmse(model, tr, dt, n_trim, steps, false);
  double worst_decay = 0.0;
  for (const Trajectory& t2 : decay.trajectories)
    worst_decay =
        std::max(worst_decay, replay_nrmse(model, t2, dt, n_trim, steps, false));

  // Held-out actuated probe: off-grid amplitude and period.
  AppConfig held = cfg;
  held.data.actuated_amplitudes = {0.75 * cfg.data.actuated_amplitudes.back()};
  held.data.actuated_periods = {1.8};
  held.data.actuated_duration = 4.0;
  TrajectorySet held_set = gen_actuated(held, 777);
  double held_nrmse =
      replay_nrmse(model, held_set.trajectories.front(), dt, n_trim, steps, true);

  // Spectrum summary: sorted by magnitude; flag any complex content.
  std::vector<double> re(report.r1_eigenvalues.size());
  double max_im = 0.0;
  for (Eigen::Index i = 0; i < report.r1_eigenvalues.size(); ++i) {
    re[i] = report.r1_eigenvalues(i).real();
    max_im = std::max(max_im, std::abs(report.r1_eigenvalues(i).imag()));
  }
  std::sort(re.begin(), re.end(), [](double a, double b) { return a > b; });
  std::printf(
      "as %.2f tr %.2f damp %.2f lam %.0e : front %.3f worst %.3f held %.3f  env "
      "%.3f/%.3f  vrow [%.2f %.2f %.2f]  obsres %.3f  eig [%.2f %.2f %.2f] "
      "maxim %.2f  E [%.4f %.4f %.4f %.5f %.5f]\n",
      ascale, trim, decay_amp, lambda, nrmse, worst_decay, held_nrmse, decay_env,
      act_env, row_rel(0), row_rel(1), row_rel(2), report.obs_map_residual,
      re[0], re[1], re[2], max_im, report.mode_energy(0),
      report.mode_energy(1), report.mode_energy(2), report.mode_energy(3),
      report.mode_energy(4));
}

int main() {
  run_combo(1e-8, 0.30, 0.75, 0.15);
  run_combo(1e-8, 0.30, 0.75, 0.10);
  run_combo(1e-8, 0.40, 0.75, 0.10);
  run_combo(1e-6, 0.30, 0.75, 0.10);
  run_combo(1e-6, 0.30, 0.75, 0.15);
  run_combo(1e-4, 0.30, 0.75, 0.15);
          return 0;
}
