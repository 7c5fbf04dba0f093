#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "ssmpc/plant.hpp"

namespace ssmpc::testsupport {

// Finite-difference linearization of the unforced plant around a state,
// returning the 2*dof x 2*dof continuous-time system matrix.
inline Eigen::MatrixXd linearize_plant(const PlantConfig& cfg,
                                       const PlantState& s0,
                                       const Eigen::Vector4d& u0,
                                       double h = 1e-6) {
  PlantModel model(cfg);
  const int dof = cfg.dof();
  const int nx = 2 * dof;
  auto deriv = [&](const Eigen::VectorXd& x) {
    PlantState s{x.head(dof), x.tail(dof)};
    Eigen::VectorXd ddq;
    model.derivative(s, u0, ddq);
    Eigen::VectorXd dx(nx);
    dx.head(dof) = s.dq;
    dx.tail(dof) = ddq;
    return dx;
  };
  Eigen::VectorXd x0(nx);
  x0.head(dof) = s0.q;
  x0.tail(dof) = s0.dq;
  Eigen::MatrixXd A(nx, nx);
  for (int k = 0; k < nx; ++k) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp(k) += h;
    xm(k) -= h;
    A.col(k) = (deriv(xp) - deriv(xm)) / (2.0 * h);
  }
  return A;
}

inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < A.rows(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

// Dominant oscillation frequency of a scalar signal from mean zero-crossing
// spacing (two crossings per period). Returns rad/s; requires >= 3 crossings.
inline double crossing_frequency(const std::vector<double>& t,
                                 const std::vector<double>& y) {
  std::vector<double> crossings;
  for (size_t i = 1; i < y.size(); ++i) {
    if ((y[i - 1] < 0.0 && y[i] >= 0.0) || (y[i - 1] > 0.0 && y[i] <= 0.0)) {
      double frac = y[i - 1] / (y[i - 1] - y[i]);
      crossings.push_back(t[i - 1] + frac * (t[i] - t[i - 1]));
    }
  }
  if (crossings.size() < 3) return 0.0;
  double span = crossings.back() - crossings.front();
  double half_periods = static_cast<double>(crossings.size() - 1);
  return M_PI * half_periods / span;
}

}  // namespace ssmpc::testsupport
