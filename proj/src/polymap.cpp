#include "ssmpc/polymap.hpp"

#include <cmath>

#include "ssmpc/error.hpp"

namespace ssmpc {
namespace {

void enumerate(int dim, int remaining, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dim - 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  // Highest power of the current variable first gives the descending
  // lexicographic order within a degree block.
  for (int e = remaining; e >= 0; --e) {
    current.push_back(e);
    enumerate(dim, remaining - e, current, out);
    current.pop_back();
  }
}

}  // namespace

MonomialBasis MonomialBasis::make(int dim, int deg_min, int deg_max) {
  if (dim < 1) fail("monomials: dim must be >= 1");
  if (deg_min < 0 || deg_max < deg_min) fail("monomials: bad degree range");
  MonomialBasis basis;
  basis.dim_ = dim;
  std::vector<int> current;
  for (int deg = deg_min; deg <= deg_max; ++deg)
    enumerate(dim, deg, current, basis.exponents_);
  return basis;
}

Eigen::VectorXd MonomialBasis::eval(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) fail("monomials: input dimension mismatch");
  Eigen::VectorXd phi(count());
  for (int f = 0; f < count(); ++f) {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i)
      for (int e = 0; e < exponents_[f][i]; ++e) v *= x(i);
    phi(f) = v;
  }
  return phi;
}

Eigen::MatrixXd MonomialBasis::eval_all(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd phi(count(), X.cols());
  for (int k = 0; k < X.cols(); ++k) phi.col(k) = eval(X.col(k));
  return phi;
}

Eigen::MatrixXd MonomialBasis::jacobian(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) fail("monomials: input dimension mismatch");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(count(), dim_);
  for (int f = 0; f < count(); ++f) {
    for (int d = 0; d < dim_; ++d) {
      int ed = exponents_[f][d];
      if (ed == 0) continue;
      double v = static_cast<double>(ed);
      for (int i = 0; i < dim_; ++i) {
        int e = exponents_[f][i] - (i == d ? 1 : 0);
        for (int r = 0; r < e; ++r) v *= x(i);
      }
      J(f, d) = v;
    }
  }
  return J;
}

Eigen::MatrixXd ridge_regress(const Eigen::MatrixXd& Phi,
                              const Eigen::MatrixXd& Y, double lambda) {
  if (Phi.cols() != Y.cols()) fail("ridge: sample count mismatch");
  if (Phi.cols() < 1) fail("ridge: no samples");
  if (lambda < 0.0) fail("ridge: lambda must be >= 0");
  const int F = static_cast<int>(Phi.rows());
  const double K = static_cast<double>(Phi.cols());

  Eigen::VectorXd scale(F);
  for (int f = 0; f < F; ++f) {
    double rms = std::sqrt(Phi.row(f).squaredNorm() / K);
    scale(f) = rms > 1e-300 ? rms : 1.0;  // constant-zero rows stay inert
  }
  Eigen::MatrixXd Phis = scale.cwiseInverse().asDiagonal() * Phi;

  Eigen::MatrixXd gram = (Phis * Phis.transpose()) / K;
  gram.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) fail("ridge: normal equations not solvable");
  Eigen::MatrixXd Ws = ldlt.solve(Phis * Y.transpose() / K).transpose();
  return Ws * scale.cwiseInverse().asDiagonal();
}

DerivativeEstimate estimate_derivatives(const Eigen::MatrixXd& X, double dt) {
  if (dt <= 0.0) fail("derivatives: dt must be positive");
  const int K = static_cast<int>(X.cols());
  if (K < 5) fail("derivatives: need at least 5 samples for the stencil");
  DerivativeEstimate est;
  est.offset = 2;
  const int M = K - 4;
  est.X = X.middleCols(2, M);
  est.Xdot.resize(X.rows(), M);
  for (int k = 0; k < M; ++k) {
    int i = k + 2;
    est.Xdot.col(k) = (8.0 * (X.col(i + 1) - X.col(i - 1)) -
                       (X.col(i + 2) - X.col(i - 2))) /
                      (12.0 * dt);
  }
  return est;
}

}  // namespace ssmpc
