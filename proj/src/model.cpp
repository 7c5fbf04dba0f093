#include "ssmpc/model.hpp"

#include <algorithm>
#include <cmath>

#include "jsonio.hpp"
#include "ssmpc/error.hpp"
#include "ssmpc/ssm.hpp"

namespace ssmpc {

std::unique_ptr<ControlModel> ControlModel::load(const std::string& path) {
  std::string kind = jsonio::load_file(path).value("kind", "");
  if (kind == "ssm")
    return std::make_unique<SsmModel>(SsmModel::load_file(path));
  fail("model file: unknown kind '" + kind + "' in " + path);
}

OpenLoopPrediction predict_open_loop(const ControlModel& model,
                                     const Eigen::VectorXd& z0_centered,
                                     const Eigen::MatrixXd& u_seq, int steps) {
  if (steps < 0) fail("predict: negative step count");
  const bool forced = u_seq.size() != 0;
  if (forced && (u_seq.rows() != model.input_dim() || u_seq.cols() < steps))
    fail("predict: input sequence does not cover the rollout");
  Eigen::VectorXd x = model.from_observable(z0_centered);
  const Eigen::VectorXd u_zero = Eigen::VectorXd::Zero(model.input_dim());
  const double blowup = 1e3 * std::max(model.training_radius(), 1e-12);
  const double dt = model.dt_train();

  OpenLoopPrediction out;
  out.x.resize(x.size(), steps + 1);
  out.z.resize(model.equilibrium_observable().size(), steps + 1);
  for (int k = 0; k <= steps; ++k) {
    if (!x.allFinite() || x.norm() > blowup)
      fail("predict: prediction blowup (reduced state left the trained "
           "region)");
    out.x.col(k) = x;
    out.z.col(k) = model.to_observable(x);
    if (k < steps) {
      const Eigen::VectorXd& u = forced ? u_seq.col(k) : u_zero;
      x += dt * model.rhs(x, u);
    }
  }
  return out;
}

}  // namespace ssmpc
