// Scratch probe: spectrum of the plant linearized at equilibrium, plus
// steady deflections under representative tensions. Not installed.
#include <algorithm>
#include <cstdio>
#include <vector>

#include "ssmpc/plant.hpp"

using namespace ssmpc;

int main() {
  PlantConfig cfg;
  PlantModel model(cfg);
  PlantState eq = model.find_equilibrium();
  const int dof = cfg.dof();
  const int dim = 2 * dof;

  auto pack = [&](const PlantState& s) {
    Eigen::VectorXd x(dim);
    x << s.q, s.dq;
    return x;
  };
  auto deriv = [&](const Eigen::VectorXd& x) {
    PlantState s;
    s.q = x.head(dof);
    s.dq = x.tail(dof);
    Eigen::VectorXd ddq;
    model.derivative(s, Eigen::Vector4d::Zero(), ddq);
    Eigen::VectorXd dx(dim);
    dx << s.dq, ddq;
    return dx;
  };

  Eigen::VectorXd x0 = pack(eq);
  Eigen::VectorXd f0 = deriv(x0);
  Eigen::MatrixXd J(dim, dim);
  const double h = 1e-7;
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd xp = x0;
    xp(i) += h;
    J.col(i) = (deriv(xp) - f0) / h;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(J);
  std::vector<std::complex<double>> evs(dim);
  for (int i = 0; i < dim; ++i) evs[i] = es.eigenvalues()(i);
  std::sort(evs.begin(), evs.end(),
            [](auto a, auto b) { return std::abs(a) < std::abs(b); });
  std::printf("slowest 10 modes:\n");
  for (int i = 0; i < 10; ++i)
    std::printf("  %8.3f %+8.3fi\n", evs[i].real(), evs[i].imag());
  std::printf("fastest mode magnitude: %.1f\n", std::abs(evs[dim - 1]));

  Eigen::VectorXd z_eq0 = model.observe(eq);
  std::printf("eq soft q: b4 %.4f b5 %.4f a5 %.4f; tip (%.2f %.2f %.2f) mm\n",
              eq.q(2 * 4 + 1), eq.q(2 * 5 + 1), eq.q(2 * 5), 1e3 * z_eq0(0),
              1e3 * z_eq0(1), 1e3 * z_eq0(2));

  // Static deflection under each single-cable tension at a few amplitudes.
  for (double T : {0.25, 0.5, 0.8}) {
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector4d u = Eigen::Vector4d::Zero();
      u(c) = T;
      PlantState s = eq;
      for (int k = 0; k < 8000; ++k) s = model.step(s, u, 0.001);
      Eigen::VectorXd z = model.observe(s);
      Eigen::VectorXd z_eq = model.observe(eq);
      std::printf(
          "T=%.2f cable %d: tip d=(%.4f, %.4f, %.4f) mm, soft q: b4 %.4f b5 "
          "%.4f a5 %.4f, stiff max %.4f\n",
          T, c, 1e3 * (z(0) - z_eq(0)), 1e3 * (z(1) - z_eq(1)),
          1e3 * (z(2) - z_eq(2)), s.q(2 * 4 + 1) - cfg.rest_beta,
          s.q(2 * 5 + 1) - cfg.rest_beta, s.q(2 * 5),
          std::max({std::abs(s.q(0)), std::abs(s.q(1)), std::abs(s.q(2)),
                    std::abs(s.q(3)), std::abs(s.q(4)), std::abs(s.q(5)),
                    std::abs(s.q(6)), std::abs(s.q(8))}));
    }
  }
  return 0;
}
