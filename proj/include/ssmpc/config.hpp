#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace ssmpc {

// Flat key-value config file: one "key = value" per line, '#' comments,
// dotted prefixes group related keys (plant.*, data.*, train.*, mpc.*, ref.*).
class KvFile {
 public:
  static KvFile load(const std::string& path);
  void save(const std::string& path) const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  void set_double(const std::string& key, double v);
  void set_int(const std::string& key, int v);
  void set_string(const std::string& key, const std::string& v);
  void set_list(const std::string& key, const std::vector<double>& v);

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// Cable-driven arm surrogate: n_links rigid links, 2-dof joints (alpha about
// local x, beta about local y), antagonistic cable pairs.
struct PlantConfig {
  int n_links = 6;
  double link_length = 0.094 / 6.0;  // [m] per link; total 94 mm
  double link_mass = 2.5e-3;         // [kg]
  double joint_inertia = 6.0e-5;     // [kg m^2] hinge/pulley rotor inertia

  // Per-joint elastic restoring torque k*theta + k3*theta^3, per axis. The
  // scalars below are the compliant (distal) values; proximal joints are
  // stiffened by stiff_factor and relax at stiff_rate, so the arm's slow
  // behavior concentrates in a handful of distal degrees of freedom whose
  // deformation the tip pose reflects directly.
  double stiffness_alpha = 2.1e-2;  // [N m / rad]
  double stiffness_beta = 2.7e-2;
  double cubic_alpha = 7.0e-1;  // [N m / rad^3]
  double cubic_beta = 9.0e-1;

  // Viscous joint damping per axis; heavy enough that every joint is
  // overdamped (creep, no ringing). Compliant beta joints get mildly
  // staggered damping (divided by 1 + soft_stagger*(steps from the tip)):
  // enough rate separation that free decays pin down the linear part inside
  // the slow plane, but not so much that the faster mode dies inside the
  // transient trim and starves the fit.
  double damping_alpha = 1.62e-2;  // [N m s / rad]
  double damping_beta = 1.22e-2;
  // Compliance layout: the last n_soft beta joints and the last alpha joint
  // stay at nominal stiffness; everything proximal is stiffened by
  // stiff_factor and damped to relax at stiff_rate. The compliant beta
  // joints are moulded with a rest bend (rest_beta each), so the arm droops
  // through its tip in the x-z plane; bending at either compliant beta joint
  // then drives the tip along visibly different arc directions, which is
  // what lets a tip-pose observable tell the two apart.
  int n_soft = 2;
  double soft_stagger = 0.2;
  double stiff_factor = 150.0;  // proximal stiffness multiplier
  double stiff_rate = 40.0;     // [1/s] relaxation rate of stiffened dofs
  double rest_beta = 0.3;       // [rad] moulded rest bend per compliant beta

  double cable_radius = 8.0e-3;  // [m] moment arm of each cable
  double gravity = 0.0;          // [m/s^2] along -x; zero: neutrally buoyant
  double tension_max = 2.0;      // [N] per cable
  double angle_limit = 1.5707963267948966;  // [rad] per-joint safety bound
  double feature_offset = 1.0e-3;  // [m] second tracked point behind the tip

  int dof() const { return 2 * n_links; }
  double total_length() const { return n_links * link_length; }

  // Throws on out-of-range values; applied when configs cross an external
  // boundary (file load, CLI). Direct construction stays permissive so tests
  // can build degenerate cases (e.g. a single-link oscillator).
  void validate() const;
};

struct DataGenConfig {
  int n_decay = 18;             // decay trajectories (directions x amplitudes)
  double decay_duration = 5.0;  // [s]
  // Strongest held pull used to set up a release. The releases then start
  // on the very configurations tension drives the arm into, so the
  // autonomous fit is anchored where forced operation lives; 1.5x the
  // largest forced amplitude leaves headroom around the forced envelope.
  double decay_tension = 0.45;  // [N]
  std::vector<double> amplitude_fractions = {0.4, 0.7, 1.0};

  // Peak tensions reach into the cubic-stiffening range (at 0.3 N the
  // hardening torque is roughly a fifth of the linear one at the compliant
  // joints); small-amplitude data would look linear and leave nothing for
  // the polynomial blocks to learn.
  std::vector<double> actuated_amplitudes = {0.1, 0.2, 0.3};  // [N]
  std::vector<double> actuated_periods = {0.6, 1.2, 2.5};      // [s]
  double actuated_duration = 8.0;  // [s] per trajectory
  double ramp_periods = 1.0;       // smooth-start ramp length, in periods

  double dt_sample = 0.02;  // [s] recording/control period
  double dt_sim = 0.001;    // [s] inner RK4 step
};

struct TrainConfig {
  int n = 3;    // reduced dimension
  int n_r = 3;  // reduced-dynamics polynomial degree
  int n_v = 3;  // observable-map polynomial degree
  int delay = 1;   // delayed copies in the embedding
  int stride = 1;  // samples between delayed copies
  double ridge_lambda = 1e-6;
  int derivative_trim = 2;    // samples dropped at each end by the stencil
  double trim_seconds = 0.15; // initial transient discarded from each decay
  int koopman_dim = 10;       // lifted dimension of the linear baseline
};

struct MpcConfig {
  int horizon = 25;
  double dt = 0.02;         // [s] control period; matches the data rate
  double q_weight = 1.0;    // stage cost on tracked-point error
  double qf_scale = 10.0;   // terminal weight = qf_scale * q_weight
  double u_reg = 1e-6;      // input regularization
  int sqp_max_iter = 3;     // fixed iteration budget (suboptimal by design)
  double qp_tolerance = 1e-8;
  double trust_step_max = 0.5;  // [N] per-entry clip on the SQP input step
  double u_min = 0.0;
  double u_max = 2.0;
};

struct ReferenceConfig {
  double f_resp = 0.25;   // [Hz] respiration-like component
  double amp_resp = 3e-3; // [m]
  double f_card = 1.2;    // [Hz] cardiac-like component
  double amp_card = 5e-4; // [m]
  double phase_resp = 0.0;  // [rad]
  double phase_card = 0.0;  // [rad]
  // Unit-normalized at use. The x-z components lie along the arm's droop
  // arc (the tip moves on that arc when the pre-bent joints flex), so the
  // commanded orbit stays in the easily reachable set; y is the free
  // transverse axis.
  Eigen::Vector3d dir_resp{0.483, 0.835, -0.264};
  Eigen::Vector3d dir_card{0.263, 0.954, -0.144};
  double duration = 20.0;  // [s] closed-loop run length
  double settle = 8.0;     // [s] discarded before computing error stats
};

struct AppConfig {
  PlantConfig plant;
  DataGenConfig data;
  TrainConfig train;
  MpcConfig mpc;
  ReferenceConfig reference;

  static AppConfig from_file(const std::string& path);  // validates
  static AppConfig from_kv(const KvFile& kv);           // validates
  KvFile to_kv() const;
  void save(const std::string& path) const;
  void validate() const;
};

}  // namespace ssmpc
