#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ssmpc {

// Multivariate monomial basis of total degree deg_min..deg_max over dim
// variables, in graded ordering: degree blocks ascending, and inside each
// block exponent vectors sorted lexicographically descending, e.g. for
// dim = 3, degree 2: x1^2, x1 x2, x1 x3, x2^2, x2 x3, x3^2.
class MonomialBasis {
 public:
  static MonomialBasis make(int dim, int deg_min, int deg_max);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }
  // Degrees are recoverable from the graded ordering: first and last entry.
  int degree_min() const { return degree_of(exponents_.front()); }
  int degree_max() const { return degree_of(exponents_.back()); }

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  // One column of features per sample column.
  Eigen::MatrixXd eval_all(const Eigen::MatrixXd& X) const;
  // d(features)/dx at x: count x dim.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  static int degree_of(const std::vector<int>& expo) {
    int s = 0;
    for (int e : expo) s += e;
    return s;
  }

  int dim_ = 0;
  std::vector<std::vector<int>> exponents_;
};

// Ridge regression of targets Y (rows = outputs) on features Phi (rows =
// features), both with one column per sample: minimizes
// (1/K)||W Phi - Y||^2 + lambda ||W_s||^2 where W_s acts on RMS-normalized
// feature rows. Normalization makes a single lambda meaningful when feature
// magnitudes span many orders (raw monomials of metric data); the returned W
// applies to the raw features.
Eigen::MatrixXd ridge_regress(const Eigen::MatrixXd& Phi,
                              const Eigen::MatrixXd& Y, double lambda);

// Fourth-order central difference along uniformly sampled columns:
// Xdot_k = (8(X_{k+1}-X_{k-1}) - (X_{k+2}-X_{k-2})) / (12 dt).
// Returns the derivative together with the matching interior samples;
// `offset` is the number of columns trimmed from each end (the stencil
// half-width).
struct DerivativeEstimate {
  Eigen::MatrixXd X;     // interior samples
  Eigen::MatrixXd Xdot;  // matching derivatives
  int offset = 2;
};

DerivativeEstimate estimate_derivatives(const Eigen::MatrixXd& X, double dt);

}  // namespace ssmpc
