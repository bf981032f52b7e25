#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace prosyn {

/// Regression rows for a random-intercept model with a single grouping factor.
struct Dataset {
  Eigen::MatrixXd X;  ///< n x p, column 0 is the intercept
  Eigen::VectorXd y;
  std::vector<int> group;  ///< group index in [0, n_groups) per row
  int n_groups = 0;
  std::optional<Eigen::VectorXd> flag;  ///< binary syntax indicator, not part of X
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }

  /// Throws prosyn::Error when an invariant does not hold.
  void validate() const;

  /// Copy with the flag appended as the last design column.
  Dataset with_flag_column(const std::string& name = "flag") const;
};

/// Profiled ML quantities at a fixed variance ratio theta = sigma_b^2 / sigma^2.
struct ProfiledFit {
  double deviance = 0.0;  ///< -2 log-likelihood
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
  Eigen::VectorXd blups;
};

/// Evaluates the profiled deviance using the per-group Sherman-Morrison
/// factorization of V = I + theta Z Z'. Cost O(n p^2). Throws
/// prosyn::Error naming the collinear columns when X'V^{-1}X is singular.
ProfiledFit profiled_deviance(const Dataset& d, double theta);

struct FitOptions {
  double theta_max = 1e6;
  double tolerance = 1e-8;
  int max_iterations = 200;
  std::optional<double> seed_theta;  ///< also evaluated; the result is never worse than it
  bool standardize = true;
};

struct LmmFit {
  Eigen::VectorXd beta;  ///< native units
  double theta = 0.0;
  double sigma2 = 0.0;
  double deviance = 0.0;
  double loglik = 0.0;
  Eigen::VectorXd blups;
  bool converged = false;
  bool singular = false;  ///< optimum on the theta = 0 boundary
  int iterations = 0;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::vector<std::string> column_names;
};

/// Maximum-likelihood fit: golden-section search over log(1 + theta).
LmmFit fit_ml(const Dataset& d, const FitOptions& options = {});

struct LrTest {
  double lr_stat = 0.0;
  int df = 1;
  double p_value = 1.0;
};

/// Likelihood-ratio test of a model against one with exactly one extra column.
LrTest lr_test(const LmmFit& basic, const LmmFit& extended);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

struct EffectEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// GLS coefficient of the centered flag on the basic model's residuals with
/// the basic model's variance ratio held fixed. Positive when flag = 1 rows
/// lie above flag = 0 rows.
EffectEstimate effect_size(const LmmFit& basic, const Dataset& d_with_flag);

inline constexpr double kNearMissCutoff = 0.15;

/// "***", "**", "*" under .001/.01/.05; near misses below `near_miss` print
/// the p-value with two decimals; otherwise "ns".
std::string significance_label(double p_value, double near_miss = kNearMissCutoff);

/// Debug dump of (X, y, group, flag) as TSV.
std::string dataset_to_tsv(const Dataset& d);

}  // namespace prosyn
