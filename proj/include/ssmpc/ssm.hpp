#pragma once
// The reduced-order surrogate model: linear plus polynomial reduced dynamics
// fitted on decay data, an input matrix fitted on actuated residuals, and a
// polynomial map from centered observables to reduced coordinates.

#include <Eigen/Dense>

#include <string>

#include "ssmpc/config.hpp"
#include "ssmpc/datagen.hpp"
#include "ssmpc/model.hpp"
#include "ssmpc/polymap.hpp"
#include "ssmpc/trajectory.hpp"

namespace ssmpc {

// A monomial basis with its coefficient matrix: x -> coeff * phi(x).
struct PolyMap {
  MonomialBasis basis;
  Eigen::MatrixXd coeff;  // output dim x basis.count()

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const {
    return coeff * basis.eval(x);
  }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    return coeff * basis.jacobian(x);
  }
};

struct ReducedDynamics {
  Eigen::MatrixXd R1;  // linear part, state_dim x state_dim
  PolyMap R_poly;      // monomials of degree 2..n_r

  Eigen::VectorXd autonomous_rhs(const Eigen::VectorXd& x) const {
    return R1 * x + R_poly.eval(x);
  }
};

// Ridge fit of xdot = R1 x + R_poly(x) over stacked samples. Throws if the
// fitted linear part has an eigenvalue with nonnegative real part (the
// message carries the spectrum so the caller can retune).
ReducedDynamics fit_reduced_dynamics(const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& Xdot, int n_r,
                                     double lambda);

// Ridge fit of the input matrix on the residual xdot - R1 x - R_poly(x) = C u
// with the autonomous part frozen.
Eigen::MatrixXd fit_control_matrix(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Xdot,
                                   const Eigen::MatrixXd& U,
                                   const ReducedDynamics& dyn, double lambda);

// Static estimator from centered observables to reduced coordinates:
// x = V0 z + V_poly(z). No constant term, so z = 0 maps to x = 0.
struct ObservableMap {
  Eigen::MatrixXd V0;  // state_dim x observable dim
  PolyMap V_poly;      // monomials of degree 2..n_v over the observables

  Eigen::VectorXd eval(const Eigen::VectorXd& z_centered) const {
    return V0 * z_centered + V_poly.eval(z_centered);
  }
};

ObservableMap fit_observable_map(const Eigen::MatrixXd& Z_centered,
                                 const Eigen::MatrixXd& X, int n_v,
                                 double lambda);

struct SsmTrainReport {
  Eigen::VectorXd mode_energy;      // per-mode energy share of the embedding
  double energy_captured = 0.0;     // share captured by the kept modes
  Eigen::VectorXcd r1_eigenvalues;
  double obs_map_residual = 0.0;    // relative rms of x - v_z(z), in-sample
  double training_radius = 0.0;
};

class SsmModel : public ControlModel {
 public:
  SsmModel(ProjectionBasis basis, ReducedDynamics dyn, Eigen::MatrixXd c_r,
           ObservableMap obs_map, Eigen::VectorXd z_eq, int delay, int stride,
           double dt, double lambda, double radius);

  std::string kind() const override { return "ssm"; }
  int state_dim() const override { return static_cast<int>(dyn_.R1.rows()); }
  int input_dim() const override { return static_cast<int>(c_r_.cols()); }
  double dt_train() const override { return dt_; }
  const Eigen::VectorXd& equilibrium_observable() const override {
    return z_eq_;
  }

  Eigen::VectorXd from_observable(
      const Eigen::VectorXd& z_centered) const override;
  Eigen::VectorXd to_observable(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd rhs(const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u) const override;
  void rhs_jacobians(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                     Eigen::MatrixXd& A, Eigen::MatrixXd& B) const override;
  double training_radius() const override { return radius_; }

  void save(const std::string& path) const override;
  static SsmModel load_file(const std::string& path);

  const ProjectionBasis& basis() const { return basis_; }
  const ReducedDynamics& dynamics() const { return dyn_; }
  const Eigen::MatrixXd& control_matrix() const { return c_r_; }
  const ObservableMap& observable_map() const { return obs_map_; }
  double ridge_lambda() const { return lambda_; }

 private:
  ProjectionBasis basis_;
  ReducedDynamics dyn_;
  Eigen::MatrixXd c_r_;
  ObservableMap obs_map_;
  Eigen::VectorXd z_eq_;
  Eigen::MatrixXd lift_;  // top observable block of the basis modes
  int delay_ = 1;
  int stride_ = 1;
  double dt_ = 0.0;
  double lambda_ = 0.0;
  double radius_ = 0.0;
};

// Full training pipeline: center and trim both sets, delay-embed the decay
// data, extract the projection basis, fit the autonomous reduced dynamics on
// decay trajectories, the input matrix on actuated residuals, and the
// observable map on both sets.
SsmModel train_ssm(const TrajectorySet& decay, const TrajectorySet& actuated,
                   const TrainConfig& cfg, SsmTrainReport* report = nullptr);

}  // namespace ssmpc
