#include "ssmpc/trajectory.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ssmpc/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ssmpc {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> split_csv_line(const std::string& line, const std::string& where) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    std::string tok = line.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const char* c = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c) fail("trajectory csv: bad number in " + where);
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string config_digest(const KvFile& kv) {
  // FNV-1a over the sorted canonical serialization.
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv.raw()) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::string plant_digest(const PlantConfig& plant) {
  AppConfig tmp;
  tmp.plant = plant;
  KvFile all = tmp.to_kv();
  KvFile only;
  for (const auto& [k, v] : all.raw())
    if (k.rfind("plant.", 0) == 0) only.set_string(k, v);
  return config_digest(only);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) fail("trajectory csv: cannot write " + path);
  out << "t,z1,z2,z3,z4,z5,z6";
  if (traj.forced()) out << ",u1,u2,u3,u4";
  out << "\n";
  for (int k = 0; k < traj.samples(); ++k) {
    out << fmt(traj.t[k]);
    for (int i = 0; i < 6; ++i) out << "," << fmt(traj.z(i, k));
    if (traj.forced())
      for (int i = 0; i < 4; ++i) out << "," << fmt(traj.u(i, k));
    out << "\n";
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("trajectory csv: cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) fail("trajectory csv: empty file " + path);
  bool forced;
  if (header == "t,z1,z2,z3,z4,z5,z6")
    forced = false;
  else if (header == "t,z1,z2,z3,z4,z5,z6,u1,u2,u3,u4")
    forced = true;
  else
    fail("trajectory csv: unrecognized header in " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto vals = split_csv_line(line, path);
    if (vals.size() != (forced ? 11u : 7u))
      fail("trajectory csv: wrong column count in " + path);
    rows.push_back(std::move(vals));
  }
  if (rows.size() < 2) fail("trajectory csv: too few samples in " + path);

  Trajectory traj;
  int n = static_cast<int>(rows.size());
  traj.t.resize(n);
  traj.z.resize(6, n);
  if (forced) traj.u.resize(4, n);
  for (int k = 0; k < n; ++k) {
    traj.t[k] = rows[k][0];
    for (int i = 0; i < 6; ++i) traj.z(i, k) = rows[k][1 + i];
    if (forced)
      for (int i = 0; i < 4; ++i) traj.u(i, k) = rows[k][7 + i];
  }
  double dt = traj.t[1] - traj.t[0];
  for (int k = 1; k < n; ++k)
    if (std::abs(traj.t[k] - traj.t[k - 1] - dt) > 1e-9)
      fail("trajectory csv: non-uniform sampling in " + path);
  return traj;
}

void TrajectorySet::save(const std::string& dir) const {
  fs::create_directories(dir);
  json manifest;
  manifest["kind"] = kind;
  manifest["seed"] = seed;
  manifest["plant_tag"] = plant_tag;
  manifest["dt"] = dt;
  manifest["equilibrium_observable"] = std::vector<double>(
      equilibrium_observable.data(),
      equilibrium_observable.data() + equilibrium_observable.size());
  json files = json::array();
  for (size_t i = 0; i < trajectories.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
    files.push_back(name);
    write_trajectory_csv((fs::path(dir) / name).string(), trajectories[i]);
  }
  manifest["files"] = files;
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) fail("trajectory set: cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

TrajectorySet TrajectorySet::load(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) fail("trajectory set: cannot open manifest in " + dir);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    fail("trajectory set: bad manifest in " + dir + ": " + e.what());
  }
  TrajectorySet set;
  try {
    set.kind = manifest.at("kind").get<std::string>();
    set.seed = manifest.at("seed").get<std::uint64_t>();
    set.plant_tag = manifest.at("plant_tag").get<std::string>();
    set.dt = manifest.at("dt").get<double>();
    auto eq = manifest.at("equilibrium_observable").get<std::vector<double>>();
    if (eq.size() != 6) fail("trajectory set: equilibrium must have 6 entries");
    set.equilibrium_observable =
        Eigen::Map<Eigen::VectorXd>(eq.data(), static_cast<long>(eq.size()));
    for (const auto& f : manifest.at("files")) {
      set.trajectories.push_back(
          read_trajectory_csv((fs::path(dir) / f.get<std::string>()).string()));
    }
  } catch (const json::exception& e) {
    fail("trajectory set: bad manifest in " + dir + ": " + e.what());
  }
  for (const auto& traj : set.trajectories) {
    if (traj.samples() >= 2 &&
        std::abs((traj.t[1] - traj.t[0]) - set.dt) > 1e-9)
      fail("trajectory set: csv sampling does not match manifest dt");
  }
  return set;
}

}  // namespace ssmpc
