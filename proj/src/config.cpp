#include "ssmpc/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ssmpc/error.hpp"

namespace ssmpc {
namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0') fail("config: bad number for " + key + ": " + s);
  return v;
}

}  // namespace

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open " + path);
  KvFile kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail("config: missing '=' at " + path + ":" + std::to_string(lineno));
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty())
      fail("config: empty key at " + path + ":" + std::to_string(lineno));
    kv.values_[key] = val;
  }
  return kv;
}

void KvFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail("config: cannot write " + path);
  for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
}

double KvFile::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_double(key, it->second);
}

int KvFile::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double v = parse_double(key, it->second);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail("config: expected integer for " + key);
  return i;
}

std::string KvFile::get_string(const std::string& key,
                               const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::vector<double> KvFile::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(parse_double(key, tok));
  }
  if (out.empty()) fail("config: empty list for " + key);
  return out;
}

void KvFile::set_double(const std::string& key, double v) { values_[key] = fmt_double(v); }
void KvFile::set_int(const std::string& key, int v) { values_[key] = std::to_string(v); }
void KvFile::set_string(const std::string& key, const std::string& v) { values_[key] = v; }

void KvFile::set_list(const std::string& key, const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(v[i]);
  }
  values_[key] = s;
}

void PlantConfig::validate() const {
  if (n_links < 2) fail("plant config: n_links must be >= 2");
  if (link_length <= 0) fail("plant config: link_length must be positive");
  if (link_mass <= 0) fail("plant config: link_mass must be positive");
  if (joint_inertia <= 0) fail("plant config: joint_inertia must be positive");
  if (stiffness_alpha <= 0 || stiffness_beta <= 0)
    fail("plant config: stiffness must be positive");
  if (cubic_alpha < 0 || cubic_beta < 0)
    fail("plant config: cubic stiffness must be non-negative");
  if (damping_alpha < 0 || damping_beta < 0)
    fail("plant config: damping must be non-negative");
  if (n_soft < 1 || n_soft > n_links)
    fail("plant config: n_soft must be in [1, n_links]");
  if (soft_stagger < 0) fail("plant config: soft_stagger must be >= 0");
  if (stiff_factor < 1) fail("plant config: stiff_factor must be >= 1");
  if (stiff_rate <= 0) fail("plant config: stiff_rate must be positive");
  if (rest_beta < 0 || rest_beta >= angle_limit)
    fail("plant config: rest_beta must be in [0, angle_limit)");
  if (cable_radius <= 0) fail("plant config: cable_radius must be positive");
  if (gravity < 0) fail("plant config: gravity must be non-negative");
  if (tension_max <= 0) fail("plant config: tension_max must be positive");
  if (angle_limit <= 0) fail("plant config: angle_limit must be positive");
  if (feature_offset <= 0 || feature_offset >= link_length)
    fail("plant config: feature_offset must be in (0, link_length)");
}

void AppConfig::validate() const {
  plant.validate();
  if (data.n_decay < 1) fail("config: data.n_decay must be >= 1");
  if (data.dt_sample <= 0 || data.dt_sim <= 0)
    fail("config: sample and sim steps must be positive");
  if (data.dt_sample < data.dt_sim)
    fail("config: dt_sample must be >= dt_sim");
  if (data.decay_tension <= 0 || data.decay_tension > plant.tension_max)
    fail("config: decay_tension must be in (0, tension_max]");
  if (train.n < 1 || train.n_r < 1 || train.n_v < 1)
    fail("config: reduced dimensions/degrees must be >= 1");
  if (train.delay < 1 || train.stride < 1)
    fail("config: embedding delay and stride must be >= 1");
  if (train.ridge_lambda < 0) fail("config: ridge_lambda must be >= 0");
  if (mpc.horizon < 1) fail("config: mpc.horizon must be >= 1");
  if (mpc.dt <= 0) fail("config: mpc.dt must be positive");
  if (mpc.sqp_max_iter < 1) fail("config: mpc.sqp_max_iter must be >= 1");
  if (mpc.u_min > mpc.u_max) fail("config: mpc bounds inverted");
  if (mpc.trust_step_max <= 0) fail("config: trust_step_max must be positive");
  if (reference.duration <= reference.settle)
    fail("config: reference duration must exceed settle time");
  if (reference.f_resp <= 0 || reference.f_card <= 0)
    fail("config: reference frequencies must be positive");
  if (reference.amp_resp < 0 || reference.amp_card < 0)
    fail("config: reference amplitudes must be >= 0");
  if (reference.dir_resp.norm() < 1e-12 || reference.dir_card.norm() < 1e-12)
    fail("config: reference directions must be nonzero");
}

AppConfig AppConfig::from_file(const std::string& path) {
  return from_kv(KvFile::load(path));
}

AppConfig AppConfig::from_kv(const KvFile& kv) {
  AppConfig c;
  PlantConfig& p = c.plant;
  p.n_links = kv.get_int("plant.n_links", p.n_links);
  p.link_length = kv.get_double("plant.link_length", p.link_length);
  p.link_mass = kv.get_double("plant.link_mass", p.link_mass);
  p.joint_inertia = kv.get_double("plant.joint_inertia", p.joint_inertia);
  p.stiffness_alpha = kv.get_double("plant.stiffness_alpha", p.stiffness_alpha);
  p.stiffness_beta = kv.get_double("plant.stiffness_beta", p.stiffness_beta);
  p.cubic_alpha = kv.get_double("plant.cubic_alpha", p.cubic_alpha);
  p.cubic_beta = kv.get_double("plant.cubic_beta", p.cubic_beta);
  p.damping_alpha = kv.get_double("plant.damping_alpha", p.damping_alpha);
  p.damping_beta = kv.get_double("plant.damping_beta", p.damping_beta);
  p.n_soft = kv.get_int("plant.n_soft", p.n_soft);
  p.soft_stagger = kv.get_double("plant.soft_stagger", p.soft_stagger);
  p.stiff_factor = kv.get_double("plant.stiff_factor", p.stiff_factor);
  p.stiff_rate = kv.get_double("plant.stiff_rate", p.stiff_rate);
  p.rest_beta = kv.get_double("plant.rest_beta", p.rest_beta);
  p.cable_radius = kv.get_double("plant.cable_radius", p.cable_radius);
  p.gravity = kv.get_double("plant.gravity", p.gravity);
  p.tension_max = kv.get_double("plant.tension_max", p.tension_max);
  p.angle_limit = kv.get_double("plant.angle_limit", p.angle_limit);
  p.feature_offset = kv.get_double("plant.feature_offset", p.feature_offset);

  DataGenConfig& d = c.data;
  d.n_decay = kv.get_int("data.n_decay", d.n_decay);
  d.decay_duration = kv.get_double("data.decay_duration", d.decay_duration);
  d.decay_tension = kv.get_double("data.decay_tension", d.decay_tension);
  d.amplitude_fractions = kv.get_list("data.amplitude_fractions", d.amplitude_fractions);
  d.actuated_amplitudes = kv.get_list("data.actuated_amplitudes", d.actuated_amplitudes);
  d.actuated_periods = kv.get_list("data.actuated_periods", d.actuated_periods);
  d.actuated_duration = kv.get_double("data.actuated_duration", d.actuated_duration);
  d.ramp_periods = kv.get_double("data.ramp_periods", d.ramp_periods);
  d.dt_sample = kv.get_double("data.dt_sample", d.dt_sample);
  d.dt_sim = kv.get_double("data.dt_sim", d.dt_sim);

  TrainConfig& t = c.train;
  t.n = kv.get_int("train.n", t.n);
  t.n_r = kv.get_int("train.n_r", t.n_r);
  t.n_v = kv.get_int("train.n_v", t.n_v);
  t.delay = kv.get_int("train.delay", t.delay);
  t.stride = kv.get_int("train.stride", t.stride);
  t.ridge_lambda = kv.get_double("train.ridge_lambda", t.ridge_lambda);
  t.derivative_trim = kv.get_int("train.derivative_trim", t.derivative_trim);
  t.trim_seconds = kv.get_double("train.trim_seconds", t.trim_seconds);
  t.koopman_dim = kv.get_int("train.koopman_dim", t.koopman_dim);

  MpcConfig& m = c.mpc;
  m.horizon = kv.get_int("mpc.horizon", m.horizon);
  m.dt = kv.get_double("mpc.dt", m.dt);
  m.q_weight = kv.get_double("mpc.q_weight", m.q_weight);
  m.qf_scale = kv.get_double("mpc.qf_scale", m.qf_scale);
  m.u_reg = kv.get_double("mpc.u_reg", m.u_reg);
  m.sqp_max_iter = kv.get_int("mpc.sqp_max_iter", m.sqp_max_iter);
  m.qp_tolerance = kv.get_double("mpc.qp_tolerance", m.qp_tolerance);
  m.trust_step_max = kv.get_double("mpc.trust_step_max", m.trust_step_max);
  m.u_min = kv.get_double("mpc.u_min", m.u_min);
  m.u_max = kv.get_double("mpc.u_max", p.tension_max);

  ReferenceConfig& r = c.reference;
  r.f_resp = kv.get_double("ref.f_resp", r.f_resp);
  r.amp_resp = kv.get_double("ref.amp_resp", r.amp_resp);
  r.f_card = kv.get_double("ref.f_card", r.f_card);
  r.amp_card = kv.get_double("ref.amp_card", r.amp_card);
  r.phase_resp = kv.get_double("ref.phase_resp", r.phase_resp);
  r.phase_card = kv.get_double("ref.phase_card", r.phase_card);
  auto dr = kv.get_list("ref.dir_resp", {r.dir_resp.x(), r.dir_resp.y(), r.dir_resp.z()});
  auto dc = kv.get_list("ref.dir_card", {r.dir_card.x(), r.dir_card.y(), r.dir_card.z()});
  if (dr.size() != 3 || dc.size() != 3)
    fail("config: ref directions must have 3 components");
  r.dir_resp = Eigen::Vector3d(dr[0], dr[1], dr[2]);
  r.dir_card = Eigen::Vector3d(dc[0], dc[1], dc[2]);
  r.duration = kv.get_double("ref.duration", r.duration);
  r.settle = kv.get_double("ref.settle", r.settle);

  c.validate();
  return c;
}

KvFile AppConfig::to_kv() const {
  KvFile kv;
  kv.set_int("plant.n_links", plant.n_links);
  kv.set_double("plant.link_length", plant.link_length);
  kv.set_double("plant.link_mass", plant.link_mass);
  kv.set_double("plant.joint_inertia", plant.joint_inertia);
  kv.set_double("plant.stiffness_alpha", plant.stiffness_alpha);
  kv.set_double("plant.stiffness_beta", plant.stiffness_beta);
  kv.set_double("plant.cubic_alpha", plant.cubic_alpha);
  kv.set_double("plant.cubic_beta", plant.cubic_beta);
  kv.set_double("plant.damping_alpha", plant.damping_alpha);
  kv.set_double("plant.damping_beta", plant.damping_beta);
  kv.set_int("plant.n_soft", plant.n_soft);
  kv.set_double("plant.soft_stagger", plant.soft_stagger);
  kv.set_double("plant.stiff_factor", plant.stiff_factor);
  kv.set_double("plant.stiff_rate", plant.stiff_rate);
  kv.set_double("plant.rest_beta", plant.rest_beta);
  kv.set_double("plant.cable_radius", plant.cable_radius);
  kv.set_double("plant.gravity", plant.gravity);
  kv.set_double("plant.tension_max", plant.tension_max);
  kv.set_double("plant.angle_limit", plant.angle_limit);
  kv.set_double("plant.feature_offset", plant.feature_offset);

  kv.set_int("data.n_decay", data.n_decay);
  kv.set_double("data.decay_duration", data.decay_duration);
  kv.set_double("data.decay_tension", data.decay_tension);
  kv.set_list("data.amplitude_fractions", data.amplitude_fractions);
  kv.set_list("data.actuated_amplitudes", data.actuated_amplitudes);
  kv.set_list("data.actuated_periods", data.actuated_periods);
  kv.set_double("data.actuated_duration", data.actuated_duration);
  kv.set_double("data.ramp_periods", data.ramp_periods);
  kv.set_double("data.dt_sample", data.dt_sample);
  kv.set_double("data.dt_sim", data.dt_sim);

  kv.set_int("train.n", train.n);
  kv.set_int("train.n_r", train.n_r);
  kv.set_int("train.n_v", train.n_v);
  kv.set_int("train.delay", train.delay);
  kv.set_int("train.stride", train.stride);
  kv.set_double("train.ridge_lambda", train.ridge_lambda);
  kv.set_int("train.derivative_trim", train.derivative_trim);
  kv.set_double("train.trim_seconds", train.trim_seconds);
  kv.set_int("train.koopman_dim", train.koopman_dim);

  kv.set_int("mpc.horizon", mpc.horizon);
  kv.set_double("mpc.dt", mpc.dt);
  kv.set_double("mpc.q_weight", mpc.q_weight);
  kv.set_double("mpc.qf_scale", mpc.qf_scale);
  kv.set_double("mpc.u_reg", mpc.u_reg);
  kv.set_int("mpc.sqp_max_iter", mpc.sqp_max_iter);
  kv.set_double("mpc.qp_tolerance", mpc.qp_tolerance);
  kv.set_double("mpc.trust_step_max", mpc.trust_step_max);
  kv.set_double("mpc.u_min", mpc.u_min);
  kv.set_double("mpc.u_max", mpc.u_max);

  kv.set_double("ref.f_resp", reference.f_resp);
  kv.set_double("ref.amp_resp", reference.amp_resp);
  kv.set_double("ref.f_card", reference.f_card);
  kv.set_double("ref.amp_card", reference.amp_card);
  kv.set_double("ref.phase_resp", reference.phase_resp);
  kv.set_double("ref.phase_card", reference.phase_card);
  kv.set_list("ref.dir_resp", {reference.dir_resp.x(), reference.dir_resp.y(),
                               reference.dir_resp.z()});
  kv.set_list("ref.dir_card", {reference.dir_card.x(), reference.dir_card.y(),
                               reference.dir_card.z()});
  kv.set_double("ref.duration", reference.duration);
  kv.set_double("ref.settle", reference.settle);
  return kv;
}

void AppConfig::save(const std::string& path) const { to_kv().save(path); }

}  // namespace ssmpc
