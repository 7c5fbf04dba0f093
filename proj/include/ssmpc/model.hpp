#pragma once
// Common interface for fitted control models. Every model exposes a reduced
// state, continuous-time dynamics r(x, u) with analytic Jacobians, and static
// maps between observable and reduced space, so the MPC and benchmark layers
// stay model-agnostic.

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace ssmpc {

class ControlModel {
 public:
  virtual ~ControlModel() = default;

  virtual std::string kind() const = 0;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  // Sample period of the training data; forward-Euler rollouts use it.
  virtual double dt_train() const = 0;
  virtual const Eigen::VectorXd& equilibrium_observable() const = 0;

  // Reduced state estimated from a single centered observable.
  virtual Eigen::VectorXd from_observable(
      const Eigen::VectorXd& z_centered) const = 0;
  // Absolute observable reconstructed from a reduced state.
  virtual Eigen::VectorXd to_observable(const Eigen::VectorXd& x) const = 0;

  virtual Eigen::VectorXd rhs(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u) const = 0;
  virtual void rhs_jacobians(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                             Eigen::MatrixXd& A, Eigen::MatrixXd& B) const = 0;

  // Largest reduced-state norm seen during fitting; rollouts wandering past
  // 1e3 times this count as divergence.
  virtual double training_radius() const = 0;

  virtual void save(const std::string& path) const = 0;
  // Reads any saved model file, dispatching on its kind field.
  static std::unique_ptr<ControlModel> load(const std::string& path);
};

struct OpenLoopPrediction {
  Eigen::MatrixXd x;  // state_dim x (steps + 1) reduced rollout
  Eigen::MatrixXd z;  // 6 x (steps + 1) absolute predicted observables
};

// Forward-Euler rollout at dt_train from a centered initial observable.
// u_seq holds one input column per step; empty means zero input throughout.
OpenLoopPrediction predict_open_loop(const ControlModel& model,
                                     const Eigen::VectorXd& z0_centered,
                                     const Eigen::MatrixXd& u_seq, int steps);

}  // namespace ssmpc
