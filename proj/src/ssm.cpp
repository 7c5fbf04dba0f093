#include "ssmpc/ssm.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "jsonio.hpp"
#include "ssmpc/error.hpp"

namespace ssmpc {
namespace {

Eigen::MatrixXd stack_features(const Eigen::MatrixXd& X,
                               const MonomialBasis& poly) {
  Eigen::MatrixXd phi(X.rows() + poly.count(), X.cols());
  phi.topRows(X.rows()) = X;
  phi.bottomRows(poly.count()) = poly.eval_all(X);
  return phi;
}

void check_stable(const Eigen::MatrixXd& R1) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(R1);
  if (es.info() != Eigen::Success)
    fail("fit: eigenvalue computation for the linear part failed");
  if (es.eigenvalues().real().maxCoeff() < 0.0) return;
  std::ostringstream os;
  os << "fit: unstable linear part; eigenvalues:";
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    auto ev = es.eigenvalues()(i);
    os << " (" << ev.real() << (ev.imag() < 0 ? " - " : " + ")
       << std::abs(ev.imag()) << "i)";
  }
  fail(os.str());
}

nlohmann::json poly_to_json(const PolyMap& p) {
  nlohmann::json j;
  j["dim"] = p.basis.dim();
  j["deg_min"] = p.basis.degree_min();
  j["deg_max"] = p.basis.degree_max();
  j["coeff"] = jsonio::from_matrix(p.coeff);
  return j;
}

PolyMap poly_from_json(const nlohmann::json& j) {
  PolyMap p{MonomialBasis::make(j.at("dim").get<int>(),
                                j.at("deg_min").get<int>(),
                                j.at("deg_max").get<int>()),
            jsonio::to_matrix(j.at("coeff"))};
  if (p.coeff.cols() != p.basis.count())
    fail("model file: polynomial coefficient count does not match its basis");
  return p;
}

// One trajectory reduced to aligned training samples: centered, the initial
// transient trimmed, delay-embedded, projected on the basis, differentiated.
// Inputs and observables are picked at the instants the stencil leaves.
struct AlignedSamples {
  Eigen::MatrixXd X, Xdot, U, Z;
};

AlignedSamples reduce_trajectory(const Trajectory& traj,
                                 const Eigen::VectorXd& z_eq,
                                 const ProjectionBasis& basis,
                                 const TrainConfig& cfg, double dt) {
  const int n_trim = static_cast<int>(std::lround(cfg.trim_seconds / dt));
  const int total = traj.samples();
  // embedding needs delay*stride + 1 samples, the stencil another 4
  if (total - n_trim < cfg.delay * cfg.stride + 5)
    fail("train: trajectory too short for trimming, embedding and the "
         "derivative stencil");
  Eigen::MatrixXd zc = traj.z.rightCols(total - n_trim).colwise() - z_eq;
  EmbeddedSnapshot emb = delay_embed(zc, cfg.delay, cfg.stride);
  Eigen::MatrixXd xr = project(basis, emb.X);
  DerivativeEstimate der = estimate_derivatives(xr, dt);

  AlignedSamples out;
  out.X = der.X;
  out.Xdot = der.Xdot;
  const int cols = static_cast<int>(der.X.cols());
  out.Z.resize(6, cols);
  if (traj.forced()) out.U.resize(traj.u.rows(), cols);
  for (int m = 0; m < cols; ++m) {
    int local = emb.newest_index[m + der.offset];  // index into zc
    out.Z.col(m) = zc.col(local);
    if (traj.forced()) out.U.col(m) = traj.u.col(local + n_trim);
  }
  return out;
}

void append_cols(Eigen::MatrixXd& dst, const Eigen::MatrixXd& src) {
  if (src.cols() == 0) return;
  if (dst.size() == 0) {
    dst = src;
    return;
  }
  Eigen::Index old = dst.cols();
  dst.conservativeResize(Eigen::NoChange, old + src.cols());
  dst.rightCols(src.cols()) = src;
}

}  // namespace

ReducedDynamics fit_reduced_dynamics(const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& Xdot, int n_r,
                                     double lambda) {
  if (X.rows() != Xdot.rows() || X.cols() != Xdot.cols())
    fail("fit: state and derivative samples misaligned");
  if (X.rows() < 1) fail("fit: empty state samples");
  if (n_r < 2) fail("fit: polynomial order must be >= 2");
  const int n = static_cast<int>(X.rows());
  MonomialBasis poly = MonomialBasis::make(n, 2, n_r);
  Eigen::MatrixXd phi = stack_features(X, poly);
  if (phi.cols() < phi.rows())
    fail("fit: fewer samples than regression columns");
  Eigen::MatrixXd W = ridge_regress(phi, Xdot, lambda);
  ReducedDynamics dyn{W.leftCols(n), PolyMap{poly, W.rightCols(poly.count())}};
  check_stable(dyn.R1);
  return dyn;
}

Eigen::MatrixXd fit_control_matrix(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Xdot,
                                   const Eigen::MatrixXd& U,
                                   const ReducedDynamics& dyn, double lambda) {
  if (X.cols() != Xdot.cols() || X.cols() != U.cols())
    fail("fit: state, derivative and input samples misaligned");
  Eigen::VectorXd u_mean = U.rowwise().mean();
  Eigen::MatrixXd centered = U.colwise() - u_mean;
  if (centered.squaredNorm() <= 1e-20 * std::max(1.0, U.squaredNorm()))
    fail("fit: unidentifiable control matrix (input sequence has no variance)");
  Eigen::MatrixXd resid =
      Xdot - dyn.R1 * X - dyn.R_poly.coeff * dyn.R_poly.basis.eval_all(X);
  return ridge_regress(U, resid, lambda);
}

ObservableMap fit_observable_map(const Eigen::MatrixXd& Z_centered,
                                 const Eigen::MatrixXd& X, int n_v,
                                 double lambda) {
  if (Z_centered.cols() != X.cols())
    fail("fit: observable and state samples misaligned");
  if (n_v < 2) fail("fit: observable map order must be >= 2");
  MonomialBasis poly =
      MonomialBasis::make(static_cast<int>(Z_centered.rows()), 2, n_v);
  Eigen::MatrixXd phi = stack_features(Z_centered, poly);
  if (phi.cols() < phi.rows())
    fail("fit: fewer samples than regression columns");
  Eigen::MatrixXd W = ridge_regress(phi, X, lambda);
  return ObservableMap{W.leftCols(Z_centered.rows()),
                       PolyMap{poly, W.rightCols(poly.count())}};
}

SsmModel::SsmModel(ProjectionBasis basis, ReducedDynamics dyn,
                   Eigen::MatrixXd c_r, ObservableMap obs_map,
                   Eigen::VectorXd z_eq, int delay, int stride, double dt,
                   double lambda, double radius)
    : basis_(std::move(basis)),
      dyn_(std::move(dyn)),
      c_r_(std::move(c_r)),
      obs_map_(std::move(obs_map)),
      z_eq_(std::move(z_eq)),
      delay_(delay),
      stride_(stride),
      dt_(dt),
      lambda_(lambda),
      radius_(radius) {
  const int n = static_cast<int>(dyn_.R1.rows());
  if (basis_.modes.cols() != n || dyn_.R_poly.coeff.rows() != n ||
      c_r_.rows() != n || obs_map_.V0.rows() != n)
    fail("ssm model: component dimensions disagree");
  if (z_eq_.size() != obs_map_.V0.cols())
    fail("ssm model: equilibrium size does not match the observable map");
  if (basis_.modes.rows() < z_eq_.size())
    fail("ssm model: basis shorter than the observable");
  if (dt_ <= 0) fail("ssm model: nonpositive sample period");
  lift_ = basis_.modes.topRows(z_eq_.size());
}

Eigen::VectorXd SsmModel::from_observable(
    const Eigen::VectorXd& z_centered) const {
  if (z_centered.size() != z_eq_.size())
    fail("ssm model: observable size mismatch");
  return obs_map_.eval(z_centered);
}

Eigen::VectorXd SsmModel::to_observable(const Eigen::VectorXd& x) const {
  if (x.size() != state_dim()) fail("ssm model: state size mismatch");
  return z_eq_ + lift_ * x;
}

Eigen::VectorXd SsmModel::rhs(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u) const {
  if (x.size() != state_dim() || u.size() != input_dim())
    fail("ssm model: rhs dimension mismatch");
  return dyn_.autonomous_rhs(x) + c_r_ * u;
}

void SsmModel::rhs_jacobians(const Eigen::VectorXd& x, const Eigen::VectorXd&,
                             Eigen::MatrixXd& A, Eigen::MatrixXd& B) const {
  if (x.size() != state_dim()) fail("ssm model: state size mismatch");
  A = dyn_.R1 + dyn_.R_poly.jacobian(x);
  B = c_r_;
}

void SsmModel::save(const std::string& path) const {
  nlohmann::json j;
  j["kind"] = "ssm";
  j["dt"] = dt_;
  j["lambda"] = lambda_;
  j["delay"] = delay_;
  j["stride"] = stride_;
  j["training_radius"] = radius_;
  j["equilibrium_observable"] = jsonio::from_vector(z_eq_);
  j["basis_modes"] = jsonio::from_matrix(basis_.modes);
  j["basis_singular_values"] = jsonio::from_vector(basis_.singular_values);
  j["basis_energy_fraction"] = basis_.energy_fraction;
  j["r1"] = jsonio::from_matrix(dyn_.R1);
  j["r_poly"] = poly_to_json(dyn_.R_poly);
  j["c_r"] = jsonio::from_matrix(c_r_);
  j["v0"] = jsonio::from_matrix(obs_map_.V0);
  j["v_poly"] = poly_to_json(obs_map_.V_poly);
  jsonio::save_file(path, j);
}

SsmModel SsmModel::load_file(const std::string& path) {
  nlohmann::json j = jsonio::load_file(path);
  try {
    if (j.at("kind").get<std::string>() != "ssm")
      fail("model file: not an ssm model: " + path);
    ProjectionBasis basis;
    basis.modes = jsonio::to_matrix(j.at("basis_modes"));
    basis.singular_values = jsonio::to_vector(j.at("basis_singular_values"));
    basis.energy_fraction = j.at("basis_energy_fraction").get<double>();
    ReducedDynamics dyn{jsonio::to_matrix(j.at("r1")),
                        poly_from_json(j.at("r_poly"))};
    ObservableMap obs{jsonio::to_matrix(j.at("v0")),
                      poly_from_json(j.at("v_poly"))};
    return SsmModel(basis, dyn, jsonio::to_matrix(j.at("c_r")), obs,
                    jsonio::to_vector(j.at("equilibrium_observable")),
                    j.at("delay").get<int>(), j.at("stride").get<int>(),
                    j.at("dt").get<double>(), j.at("lambda").get<double>(),
                    j.at("training_radius").get<double>());
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": " + e.what());
  }
}

SsmModel train_ssm(const TrajectorySet& decay, const TrajectorySet& actuated,
                   const TrainConfig& cfg, SsmTrainReport* report) {
  if (decay.kind != "decay")
    fail("train: first set must hold decay trajectories, got '" + decay.kind +
         "'");
  if (actuated.kind != "actuated")
    fail("train: second set must hold actuated trajectories, got '" +
         actuated.kind + "'");
  if (decay.trajectories.empty() || actuated.trajectories.empty())
    fail("train: empty trajectory set");
  if (std::abs(decay.dt - actuated.dt) > 1e-12)
    fail("train: sample periods differ between the sets");
  if ((decay.equilibrium_observable - actuated.equilibrium_observable)
          .lpNorm<Eigen::Infinity>() > 1e-9)
    fail("train: sets disagree on the equilibrium observable");
  const double dt = decay.dt;
  const Eigen::VectorXd z_eq = decay.equilibrium_observable;
  const int n_trim = static_cast<int>(std::lround(cfg.trim_seconds / dt));

  // Basis from the decay data only: embedded snapshots of free motion.
  Eigen::MatrixXd emb_all;
  for (const Trajectory& traj : decay.trajectories) {
    if (traj.samples() - n_trim < cfg.delay * cfg.stride + 5)
      fail("train: decay trajectory too short for the embedding");
    Eigen::MatrixXd zc =
        traj.z.rightCols(traj.samples() - n_trim).colwise() - z_eq;
    append_cols(emb_all, delay_embed(zc, cfg.delay, cfg.stride).X);
  }
  ProjectionBasis basis = svd_modes(emb_all, cfg.n);
  if (basis.energy_fraction < 0.95)
    std::cerr << "warning: kept modes capture only "
              << 100.0 * basis.energy_fraction
              << "% of the embedded snapshot energy\n";

  Eigen::MatrixXd Xd, Xd_dot, Zd;
  for (const Trajectory& traj : decay.trajectories) {
    AlignedSamples s = reduce_trajectory(traj, z_eq, basis, cfg, dt);
    append_cols(Xd, s.X);
    append_cols(Xd_dot, s.Xdot);
    append_cols(Zd, s.Z);
  }
  ReducedDynamics dyn = fit_reduced_dynamics(Xd, Xd_dot, cfg.n_r,
                                             cfg.ridge_lambda);

  Eigen::MatrixXd Xa, Xa_dot, Za, Ua;
  for (const Trajectory& traj : actuated.trajectories) {
    if (!traj.forced()) fail("train: actuated trajectory lacks inputs");
    AlignedSamples s = reduce_trajectory(traj, z_eq, basis, cfg, dt);
    append_cols(Xa, s.X);
    append_cols(Xa_dot, s.Xdot);
    append_cols(Za, s.Z);
    append_cols(Ua, s.U);
  }
  Eigen::MatrixXd c_r = fit_control_matrix(Xa, Xa_dot, Ua, dyn,
                                           cfg.ridge_lambda);

  Eigen::MatrixXd Z_all = Zd, X_all = Xd;
  append_cols(Z_all, Za);
  append_cols(X_all, Xa);
  ObservableMap obs_map = fit_observable_map(Z_all, X_all, cfg.n_v,
                                             cfg.ridge_lambda);

  double radius = 0.0;
  for (Eigen::Index k = 0; k < X_all.cols(); ++k)
    radius = std::max(radius, X_all.col(k).norm());

  if (report) {
    Eigen::VectorXd sv = basis.singular_values;
    report->mode_energy = sv.array().square() / sv.array().square().sum();
    report->energy_captured = basis.energy_fraction;
    report->r1_eigenvalues =
        Eigen::EigenSolver<Eigen::MatrixXd>(dyn.R1).eigenvalues();
    Eigen::MatrixXd fit = obs_map.V0 * Z_all +
                          obs_map.V_poly.coeff *
                              obs_map.V_poly.basis.eval_all(Z_all);
    report->obs_map_residual = (fit - X_all).norm() / X_all.norm();
    report->training_radius = radius;
  }

  return SsmModel(std::move(basis), std::move(dyn), std::move(c_r),
                  std::move(obs_map), z_eq, cfg.delay, cfg.stride, dt,
                  cfg.ridge_lambda, radius);
}

}  // namespace ssmpc
