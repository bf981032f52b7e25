#pragma once

#include <Eigen/Dense>
#include <random>

#include "prosyn/lmm.hpp"

namespace prosyn::testing {

/// Random dataset with an intercept and p - 1 Gaussian predictors, g groups,
/// a random intercept of variance theta_true and a binary flag.
inline Dataset random_dataset(std::mt19937_64& rng, int n, int p, int g, double theta_true = 1.0,
                              double flag_effect = 0.0) {
  std::normal_distribution<double> z(0.0, 1.0);
  Dataset d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.group.resize(static_cast<std::size_t>(n));
  d.n_groups = g;
  d.flag = Eigen::VectorXd(n);
  std::vector<double> b(static_cast<std::size_t>(g));
  for (auto& v : b) v = std::sqrt(theta_true) * z(rng);
  for (int i = 0; i < n; ++i) {
    const int grp = i % g;  // every group is non-empty
    d.group[static_cast<std::size_t>(i)] = grp;
    d.X(i, 0) = 1.0;
    for (int k = 1; k < p; ++k) d.X(i, k) = z(rng);
    (*d.flag)(i) = (z(rng) > 0) ? 1.0 : 0.0;
    d.y(i) = 0.5 + d.X.row(i).tail(p - 1).sum() * 0.3 + b[static_cast<std::size_t>(grp)] +
             flag_effect * (*d.flag)(i) + z(rng);
  }
  for (int k = 0; k < p; ++k) d.column_names.push_back(k == 0 ? "intercept" : "x" + std::to_string(k));
  return d;
}

}  // namespace prosyn::testing
