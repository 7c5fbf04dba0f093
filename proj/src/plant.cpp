#include "ssmpc/plant.hpp"

#include <cmath>
#include <vector>

#include "ssmpc/error.hpp"

namespace ssmpc {

PlantState PlantState::zero(int n_links) {
  PlantState s;
  s.q = Eigen::VectorXd::Zero(2 * n_links);
  s.dq = Eigen::VectorXd::Zero(2 * n_links);
  return s;
}

Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    double t, const Eigen::VectorXd& x, double dt) {
  Eigen::VectorXd k1 = f(t, x);
  Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

PlantModel::PlantModel(const PlantConfig& cfg) : cfg_(cfg) {
  const int n = cfg.n_links;
  const int dof = 2 * n;
  const double l = cfg.link_length;
  const double m = cfg.link_mass;

  // Mass matrix at the straight configuration. Alpha coordinates move points
  // along -y, beta along +x, so the two axes decouple there and share the
  // same n x n block: M[j][k] = m * sum_{i>=max(j,k)} [(c_i-s_j)(c_i-s_k)
  // + l^2/12], with joint j at arc length s_j = j*l and link i's center at
  // c_i = (i+1/2)*l. The l^2/12 term is the thin-rod inertia of each link
  // about its own center.
  Eigen::MatrixXd axis_block = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      double sum = 0.0;
      for (int i = k; i < n; ++i) {
        double ci = (i + 0.5) * l;
        sum += (ci - j * l) * (ci - k * l) + l * l / 12.0;
      }
      axis_block(j, k) = m * sum;
      axis_block(k, j) = m * sum;
    }
  }
  mass_ = Eigen::MatrixXd::Zero(dof, dof);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      mass_(2 * j, 2 * k) = axis_block(j, k);      // alpha-alpha
      mass_(2 * j + 1, 2 * k + 1) = axis_block(j, k);  // beta-beta
    }
  // Hinge/pulley rotor inertia. The chain block alone is near-singular in its
  // highest modes (effective inertia ~1e-8), which would make viscous damping
  // arbitrarily stiff; this floor keeps every rate resolvable at the 1 ms
  // inner step.
  mass_ += cfg.joint_inertia * Eigen::MatrixXd::Identity(dof, dof);
  mass_llt_.compute(mass_);
  if (mass_llt_.info() != Eigen::Success)
    fail("plant: mass matrix not positive definite");

  // Antagonistic cables, all joints share the same moment arm. Cables 2/4
  // pull the tip toward -/+ y (torque about the alpha axis), cables 1/3
  // toward +/- x (torque about the beta axis).
  cable_map_ = Eigen::MatrixXd::Zero(dof, 4);
  for (int j = 0; j < n; ++j) {
    cable_map_(2 * j, 1) = cfg.cable_radius;
    cable_map_(2 * j, 3) = -cfg.cable_radius;
    cable_map_(2 * j + 1, 0) = cfg.cable_radius;
    cable_map_(2 * j + 1, 2) = -cfg.cable_radius;
  }

  k_diag_.resize(dof);
  k3_diag_.resize(dof);
  d_diag_.resize(dof);
  q_rest_ = Eigen::VectorXd::Zero(dof);
  for (int j = 0; j < n; ++j) {
    // Compliance lives in the distal joints: the last n_soft beta joints and
    // the last alpha joint keep the nominal stiffness, everything proximal is
    // stiffened by stiff_factor and damped to relax at stiff_rate. Compliant
    // beta joints carry the moulded rest bend and staggered damping so their
    // relaxation rates separate.
    bool soft_a = j == n - 1;
    bool soft_b = j >= n - cfg.n_soft;
    if (soft_a) {
      k_diag_(2 * j) = cfg.stiffness_alpha;
      k3_diag_(2 * j) = cfg.cubic_alpha;
      d_diag_(2 * j) = cfg.damping_alpha;
    } else {
      k_diag_(2 * j) = cfg.stiffness_alpha * cfg.stiff_factor;
      k3_diag_(2 * j) = cfg.cubic_alpha;
      d_diag_(2 * j) = k_diag_(2 * j) / cfg.stiff_rate;
    }
    if (soft_b) {
      k_diag_(2 * j + 1) = cfg.stiffness_beta;
      k3_diag_(2 * j + 1) = cfg.cubic_beta;
      d_diag_(2 * j + 1) =
          cfg.damping_beta / (1.0 + cfg.soft_stagger * (n - 1 - j));
      q_rest_(2 * j + 1) = cfg.rest_beta;
    } else {
      k_diag_(2 * j + 1) = cfg.stiffness_beta * cfg.stiff_factor;
      k3_diag_(2 * j + 1) = cfg.cubic_beta;
      d_diag_(2 * j + 1) = k_diag_(2 * j + 1) / cfg.stiff_rate;
    }
  }
}

void PlantModel::forward_kinematics(const Eigen::VectorXd& q,
                                    std::vector<Eigen::Vector3d>& joint_pos,
                                    std::vector<Eigen::Matrix3d>& joint_rot,
                                    std::vector<Eigen::Vector3d>& com) const {
  const int n = cfg_.n_links;
  joint_pos.resize(n + 1);
  joint_rot.resize(n + 1);
  com.resize(n);
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  for (int j = 0; j < n; ++j) {
    joint_pos[j] = p;
    joint_rot[j] = R;
    double ca = std::cos(q(2 * j)), sa = std::sin(q(2 * j));
    double cb = std::cos(q(2 * j + 1)), sb = std::sin(q(2 * j + 1));
    Eigen::Matrix3d rx, ry;
    rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
    ry << cb, 0, sb, 0, 1, 0, -sb, 0, cb;
    R = R * rx * ry;
    Eigen::Vector3d axis = R.col(2);
    com[j] = p + 0.5 * cfg_.link_length * axis;
    p = p + cfg_.link_length * axis;
  }
  joint_pos[n] = p;
  joint_rot[n] = R;
}

Eigen::VectorXd PlantModel::gravity_torque(const Eigen::VectorXd& q) const {
  const int n = cfg_.n_links;
  const Eigen::Vector3d g(-cfg_.gravity, 0.0, 0.0);
  std::vector<Eigen::Vector3d> jp;
  std::vector<Eigen::Matrix3d> jr;
  std::vector<Eigen::Vector3d> com;
  forward_kinematics(q, jp, jr, com);

  // Suffix sums let each joint see the total weight moment of everything
  // distal to it: tau_k = a_k . ((sum_i m*com_i - m*count*p_k) x g).
  std::vector<Eigen::Vector3d> mcom_suffix(n + 1, Eigen::Vector3d::Zero());
  for (int i = n - 1; i >= 0; --i)
    mcom_suffix[i] = mcom_suffix[i + 1] + cfg_.link_mass * com[i];

  Eigen::VectorXd tau = Eigen::VectorXd::Zero(2 * n);
  for (int j = 0; j < n; ++j) {
    double m_distal = cfg_.link_mass * (n - j);
    Eigen::Vector3d wrench =
        (mcom_suffix[j] - m_distal * jp[j]).cross(g);
    Eigen::Vector3d a_alpha = jr[j].col(0);
    double ca = std::cos(q(2 * j)), sa = std::sin(q(2 * j));
    Eigen::Matrix3d rx;
    rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
    Eigen::Vector3d a_beta = (jr[j] * rx).col(1);
    tau(2 * j) = a_alpha.dot(wrench);
    tau(2 * j + 1) = a_beta.dot(wrench);
  }
  return tau;
}

Eigen::VectorXd PlantModel::generalized_torque(
    const PlantState& s, const Eigen::Vector4d& tensions) const {
  Eigen::VectorXd tau = gravity_torque(s.q);
  Eigen::ArrayXd dq_rest = (s.q - q_rest_).array();
  tau += cable_map_ * tensions;
  tau -= (k_diag_.array() * dq_rest).matrix();
  tau -= (k3_diag_.array() * dq_rest.cube()).matrix();
  tau -= (d_diag_.array() * s.dq.array()).matrix();
  return tau;
}

void PlantModel::derivative(const PlantState& s,
                            const Eigen::Vector4d& tensions,
                            Eigen::VectorXd& ddq_out) const {
  if (!s.q.allFinite() || !s.dq.allFinite())
    fail("numeric blowup: plant state non-finite");
  if (!tensions.allFinite()) fail("infeasible input: tension non-finite");
  if ((tensions.array() < 0.0).any())
    fail("infeasible input: negative cable tension");
  if (s.q.cwiseAbs().maxCoeff() > cfg_.angle_limit)
    fail("numeric blowup: joint angle past safety limit");
  ddq_out = mass_llt_.solve(generalized_torque(s, tensions));
}

PlantState PlantModel::step(const PlantState& s,
                            const Eigen::Vector4d& tensions, double dt) const {
  const int dof = cfg_.dof();
  Eigen::VectorXd x(2 * dof);
  x.head(dof) = s.q;
  x.tail(dof) = s.dq;
  auto f = [&](double, const Eigen::VectorXd& xs) {
    PlantState tmp{xs.head(dof), xs.tail(dof)};
    Eigen::VectorXd ddq;
    derivative(tmp, tensions, ddq);
    Eigen::VectorXd dx(2 * dof);
    dx.head(dof) = tmp.dq;
    dx.tail(dof) = ddq;
    return dx;
  };
  Eigen::VectorXd xn = rk4_step(f, 0.0, x, dt);
  return PlantState{xn.head(dof), xn.tail(dof)};
}

Eigen::VectorXd PlantModel::observe(const PlantState& s) const {
  Eigen::Vector3d p1, axis;
  tip_frame(s, p1, axis);
  Eigen::Vector3d p2 = p1 - cfg_.feature_offset * axis;
  Eigen::VectorXd z(6);
  z << p1, p2;
  return z;
}

void PlantModel::tip_frame(const PlantState& s, Eigen::Vector3d& p1,
                           Eigen::Vector3d& axis) const {
  std::vector<Eigen::Vector3d> jp;
  std::vector<Eigen::Matrix3d> jr;
  std::vector<Eigen::Vector3d> com;
  forward_kinematics(s.q, jp, jr, com);
  p1 = jp[cfg_.n_links];
  axis = jr[cfg_.n_links].col(2);
}

double PlantModel::energy(const PlantState& s) const {
  double e = 0.5 * s.dq.dot(mass_ * s.dq);
  Eigen::ArrayXd dq_rest = (s.q - q_rest_).array();
  e += 0.5 * (k_diag_.array() * dq_rest.square()).sum();
  e += 0.25 * (k3_diag_.array() * dq_rest.pow(4)).sum();
  // Gravity acts along -x, so potential is +g * sum(m * com_x); zero when
  // straight.
  std::vector<Eigen::Vector3d> jp;
  std::vector<Eigen::Matrix3d> jr;
  std::vector<Eigen::Vector3d> com;
  forward_kinematics(s.q, jp, jr, com);
  for (const auto& c : com) e += cfg_.gravity * cfg_.link_mass * c.x();
  return e;
}

PlantState PlantModel::find_equilibrium(const Eigen::Vector4d& tensions) const {
  const int dof = cfg_.dof();
  Eigen::VectorXd q = q_rest_;
  auto residual = [&](const Eigen::VectorXd& qq) -> Eigen::VectorXd {
    Eigen::ArrayXd dq_rest = (qq - q_rest_).array();
    return gravity_torque(qq) + cable_map_ * tensions -
           (k_diag_.array() * dq_rest).matrix() -
           (k3_diag_.array() * dq_rest.cube()).matrix();
  };
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::VectorXd r = residual(q);
    if (r.lpNorm<Eigen::Infinity>() < 1e-13) {
      PlantState s;
      s.q = q;
      s.dq = Eigen::VectorXd::Zero(dof);
      return s;
    }
    const double h = 1e-7;
    Eigen::MatrixXd J(dof, dof);
    for (int k = 0; k < dof; ++k) {
      Eigen::VectorXd qp = q, qm = q;
      qp(k) += h;
      qm(k) -= h;
      J.col(k) = (residual(qp) - residual(qm)) / (2.0 * h);
    }
    q -= J.fullPivLu().solve(r);
  }
  fail("plant: equilibrium iteration did not converge");
}

Eigen::VectorXd plant_derivative(const PlantConfig& cfg, const PlantState& s,
                                 const Eigen::Vector4d& tensions) {
  PlantModel model(cfg);
  Eigen::VectorXd ddq;
  model.derivative(s, tensions, ddq);
  Eigen::VectorXd dx(2 * cfg.dof());
  dx.head(cfg.dof()) = s.dq;
  dx.tail(cfg.dof()) = ddq;
  return dx;
}

Eigen::VectorXd observe(const PlantConfig& cfg, const PlantState& s) {
  return PlantModel(cfg).observe(s);
}

PlantState find_equilibrium(const PlantConfig& cfg) {
  return PlantModel(cfg).find_equilibrium();
}

SimResult simulate(const PlantModel& model, const PlantState& s0,
                   const std::function<Eigen::Vector4d(double)>& u_of_t,
                   double duration, double dt_sample, double dt_sim) {
  if (dt_sample < dt_sim) fail("simulate: dt_sample must be >= dt_sim");
  const long steps_per_sample = std::lround(dt_sample / dt_sim);
  if (std::abs(steps_per_sample * dt_sim - dt_sample) > 1e-12)
    fail("simulate: dt_sample must be an integer multiple of dt_sim");
  const long n_samples = std::lround(duration / dt_sample) + 1;

  SimResult out;
  out.t.reserve(n_samples);
  out.z.resize(6, n_samples);
  out.u.resize(4, n_samples);
  PlantState s = s0;
  for (long k = 0; k < n_samples; ++k) {
    double tk = k * dt_sample;
    Eigen::Vector4d uk = u_of_t(tk);
    out.t.push_back(tk);
    out.z.col(k) = model.observe(s);
    out.u.col(k) = uk;
    if (k + 1 == n_samples) break;
    // Tension is held over the whole sample interval (zero-order hold).
    for (long i = 0; i < steps_per_sample; ++i) s = model.step(s, uk, dt_sim);
  }
  out.final_state = s;
  return out;
}

}  // namespace ssmpc
