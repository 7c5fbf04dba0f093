#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ssmpc/config.hpp"

namespace ssmpc {

struct PlantState {
  Eigen::VectorXd q;   // joint angles [alpha_0, beta_0, alpha_1, beta_1, ...]
  Eigen::VectorXd dq;  // joint rates, same layout

  static PlantState zero(int n_links);
};

// Generic classical RK4 step for dx/dt = f(t, x).
Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    double t, const Eigen::VectorXd& x, double dt);

// Precomputes everything configuration-independent: the mass matrix assembled
// at the straight configuration (constant-inertia approximation, factored
// once), the cable torque map, and the per-coordinate stiffness/damping
// diagonals. Construct once per simulation loop.
class PlantModel {
 public:
  explicit PlantModel(const PlantConfig& cfg);

  const PlantConfig& config() const { return cfg_; }
  const Eigen::MatrixXd& mass_matrix() const { return mass_; }
  const Eigen::MatrixXd& cable_map() const { return cable_map_; }
  const Eigen::VectorXd& rest_angles() const { return q_rest_; }

  // d/dt [q; dq] under constant cable tensions. Throws on non-finite state,
  // negative tension, or a joint angle past the safety limit.
  void derivative(const PlantState& s, const Eigen::Vector4d& tensions,
                  Eigen::VectorXd& ddq_out) const;

  PlantState step(const PlantState& s, const Eigen::Vector4d& tensions,
                  double dt) const;

  // Tracked observable: tip point p1 and a second point p2 recessed by
  // feature_offset along the last link's axis; z = [p1; p2] in base frame.
  Eigen::VectorXd observe(const PlantState& s) const;

  // Tip frame for diagnostics: returns p1 and the last link's unit axis.
  void tip_frame(const PlantState& s, Eigen::Vector3d& p1,
                 Eigen::Vector3d& axis) const;

  // Total mechanical energy: kinetic + elastic (quadratic and quartic wells
  // about the rest curvature) + gravitational potential.
  double energy(const PlantState& s) const;

  // Static equilibrium under gravity and a held tension vector (Newton
  // iteration). Zero tension gives the free hanging shape.
  PlantState find_equilibrium(
      const Eigen::Vector4d& tensions = Eigen::Vector4d::Zero()) const;

  // Generalized elastic+damping+gravity+cable torque, exposed for testing.
  Eigen::VectorXd generalized_torque(const PlantState& s,
                                     const Eigen::Vector4d& tensions) const;

 private:
  PlantConfig cfg_;
  Eigen::MatrixXd mass_;
  Eigen::LLT<Eigen::MatrixXd> mass_llt_;
  Eigen::MatrixXd cable_map_;     // dof x 4
  Eigen::VectorXd k_diag_;        // linear stiffness per coordinate
  Eigen::VectorXd k3_diag_;       // cubic stiffness per coordinate
  Eigen::VectorXd d_diag_;        // damping per coordinate
  Eigen::VectorXd q_rest_;        // spring rest angles (pre-curved segment)

  void forward_kinematics(const Eigen::VectorXd& q,
                          std::vector<Eigen::Vector3d>& joint_pos,
                          std::vector<Eigen::Matrix3d>& joint_rot,
                          std::vector<Eigen::Vector3d>& com) const;
  Eigen::VectorXd gravity_torque(const Eigen::VectorXd& q) const;
};

// Convenience wrappers matching the one-shot call style used in tests.
Eigen::VectorXd plant_derivative(const PlantConfig& cfg, const PlantState& s,
                                 const Eigen::Vector4d& tensions);
Eigen::VectorXd observe(const PlantConfig& cfg, const PlantState& s);
PlantState find_equilibrium(const PlantConfig& cfg);

// Simulates under a tension schedule u(t) held piecewise-constant over each
// inner step, recording the observable every dt_sample. Returns sample times,
// observables (columns), and applied tensions (columns), including t = 0.
struct SimResult {
  std::vector<double> t;
  Eigen::MatrixXd z;  // 6 x n_samples
  Eigen::MatrixXd u;  // 4 x n_samples
  PlantState final_state;
};

SimResult simulate(const PlantModel& model, const PlantState& s0,
                   const std::function<Eigen::Vector4d(double)>& u_of_t,
                   double duration, double dt_sample, double dt_sim);

}  // namespace ssmpc
