#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the block algebra of the library; every quantity is built from dense
// matrices or plain numerical integration.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "prosyn/lmm.hpp"

namespace prosyn::oracle {

/// Dense covariance V = I + theta Z Z' for the dataset's grouping.
inline Eigen::MatrixXd dense_v(const Dataset& d, double theta) {
  const Eigen::Index n = d.rows();
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (d.group[static_cast<std::size_t>(i)] == d.group[static_cast<std::size_t>(j)])
        V(i, j) += theta;
  return V;
}

struct DenseFit {
  double deviance;
  Eigen::VectorXd beta;
  double sigma2;
};

/// -2 log N(y; X beta, sigma^2 V) at the GLS beta and ML sigma^2, evaluated
/// from the explicit n x n covariance.
inline DenseFit dense_deviance(const Dataset& d, double theta) {
  const Eigen::Index n = d.rows();
  const Eigen::MatrixXd V = dense_v(d, theta);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  const Eigen::MatrixXd Vinv = lu.inverse();
  const Eigen::MatrixXd A = d.X.transpose() * Vinv * d.X;
  const Eigen::VectorXd beta = A.fullPivLu().solve(d.X.transpose() * Vinv * d.y);
  const Eigen::VectorXd r = d.y - d.X * beta;
  const double sigma2 = r.dot(Vinv * r) / static_cast<double>(n);
  const Eigen::MatrixXd S = sigma2 * V;
  const double logdet_s = std::log(S.determinant());
  const double quad = r.dot(S.fullPivLu().solve(r));
  const double dev = static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet_s + quad;
  return {dev, beta, sigma2};
}

/// Ordinary least squares through the normal equations.
inline Eigen::VectorXd ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  return (X.transpose() * X).fullPivLu().solve(X.transpose() * y);
}

/// Single-coefficient GLS of the centered flag on r with covariance V(theta).
inline double dense_gls_effect(const Dataset& d, const Eigen::VectorXd& r, double theta) {
  const Eigen::VectorXd f = d.flag->array() - d.flag->mean();
  const Eigen::MatrixXd Vinv = dense_v(d, theta).inverse();
  return f.dot(Vinv * r) / f.dot(Vinv * f);
}

/// Composite Simpson rule on [a, b] with an even number of intervals.
template <class F>
double simpson(F f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Upper tail of chi-square(1) by integrating the density. The substitution
/// t = u^2 removes the singularity at 0: P(T > x) = 2 * int_{sqrt x}^inf phi(u) du.
inline double chi_square1_sf_by_integration(double x) {
  const auto phi = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); };
  return 2.0 * simpson(phi, std::sqrt(x), 40.0, 200000);
}

/// Ridge solution with an unpenalized bias from the augmented normal equations.
inline Eigen::VectorXd ridge_augmented(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       double lambda) {
  const Eigen::Index n = X.rows(), p = X.cols();
  Eigen::MatrixXd A(n, p + 1);
  A.col(0).setOnes();
  A.rightCols(p) = X;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(p + 1, p + 1) * lambda;
  P(0, 0) = 0.0;
  return (A.transpose() * A + P).fullPivLu().solve(A.transpose() * y);
}

}  // namespace prosyn::oracle
