#pragma once
// Internal JSON helpers for model files and reports. Doubles survive a dump /
// parse cycle exactly (shortest round-trip formatting), which the file
// round-trip guarantees lean on.

#include <json.hpp>

#include <Eigen/Dense>
#include <fstream>
#include <string>

#include "ssmpc/error.hpp"

namespace ssmpc::jsonio {

inline nlohmann::json from_matrix(const Eigen::MatrixXd& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  auto& data = j["data"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return j;
}

inline Eigen::MatrixXd to_matrix(const nlohmann::json& j) {
  Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    fail("model file: matrix size does not match its dimensions");
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[i++].get<double>();
  return m;
}

inline nlohmann::json from_vector(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

inline Eigen::VectorXd to_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

inline nlohmann::json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": " + e.what());
  }
}

inline void save_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << j.dump(1) << "\n";
  if (!out) fail("write failed for " + path);
}

}  // namespace ssmpc::jsonio
