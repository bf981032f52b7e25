#include "prosyn/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "prosyn/error.hpp"
#include "prosyn/text_io.hpp"

namespace prosyn {

void Dataset::validate() const {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (p < 1) throw Error("dataset: design has no columns");
  if (y.size() != n) throw Error("dataset: y length does not match the design rows");
  if (static_cast<Eigen::Index>(group.size()) != n)
    throw Error("dataset: group vector length does not match the design rows");
  if (flag && flag->size() != n) throw Error("dataset: flag length does not match the design rows");
  if (!column_names.empty() && static_cast<Eigen::Index>(column_names.size()) != p)
    throw Error("dataset: column_names length does not match the design columns");
  if (n < p + 2)
    throw Error("dataset: " + std::to_string(n) + " rows are too few for " + std::to_string(p) +
                " columns (need at least p + 2)");
  if (n_groups < 1) throw Error("dataset: no groups");
  for (int g : group)
    if (g < 0 || g >= n_groups) throw Error("dataset: group index out of range");
  if (!X.allFinite() || !y.allFinite() || (flag && !flag->allFinite()))
    throw Error("dataset: non-finite values");
  if ((X.col(0).array() != 1.0).any()) throw Error("dataset: column 0 must be the intercept");
}

Dataset Dataset::with_flag_column(const std::string& name) const {
  if (!flag) throw Error("dataset: no flag column to append");
  Dataset out = *this;
  out.X.conservativeResize(Eigen::NoChange, X.cols() + 1);
  out.X.col(X.cols()) = *flag;
  if (!out.column_names.empty()) out.column_names.push_back(name);
  return out;
}

namespace {

struct GroupSums {
  std::vector<double> size;
  Eigen::MatrixXd x;  // g x p column sums
  Eigen::VectorXd y;
};

GroupSums group_sums(const Dataset& d) {
  GroupSums s;
  s.size.assign(static_cast<std::size_t>(d.n_groups), 0.0);
  s.x = Eigen::MatrixXd::Zero(d.n_groups, d.cols());
  s.y = Eigen::VectorXd::Zero(d.n_groups);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const int g = d.group[static_cast<std::size_t>(i)];
    s.size[static_cast<std::size_t>(g)] += 1.0;
    s.x.row(g) += d.X.row(i);
    s.y(g) += d.y(i);
  }
  return s;
}

std::string column_label(const Dataset& d, Eigen::Index k) {
  if (static_cast<std::size_t>(k) < d.column_names.size())
    return d.column_names[static_cast<std::size_t>(k)];
  return "column " + std::to_string(k);
}

}  // namespace

ProfiledFit profiled_deviance(const Dataset& d, double theta) {
  if (!(theta >= 0) || !std::isfinite(theta)) throw Error("profiled_deviance: theta must be >= 0");
  const Eigen::Index n = d.rows(), p = d.cols();
  const GroupSums sums = group_sums(d);

  // V^{-1/2} restricted to a group of size m is I - c 11' with
  // c = (1 - 1/sqrt(1 + theta m)) / m.
  Eigen::VectorXd c(d.n_groups);
  double logdet = 0.0;
  for (int g = 0; g < d.n_groups; ++g) {
    const double m = sums.size[static_cast<std::size_t>(g)];
    c(g) = m > 0 ? (1.0 - 1.0 / std::sqrt(1.0 + theta * m)) / m : 0.0;
    logdet += std::log1p(theta * m);
  }

  Eigen::MatrixXd Xw(n, p);
  Eigen::VectorXd yw(n);
#pragma omp parallel for schedule(static) if (n > 50000)
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = d.group[static_cast<std::size_t>(i)];
    Xw.row(i) = d.X.row(i) - c(g) * sums.x.row(g);
    yw(i) = d.y(i) - c(g) * sums.y(g);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string cols;
    for (Eigen::Index k = qr.rank(); k < p; ++k) {
      if (!cols.empty()) cols += ", ";
      cols += column_label(d, qr.colsPermutation().indices()(k));
    }
    throw Error("rank-deficient design: collinear column(s) " + cols);
  }

  ProfiledFit fit;
  fit.beta = qr.solve(yw);
  const Eigen::VectorXd rw = yw - Xw * fit.beta;
  fit.sigma2 = rw.squaredNorm() / static_cast<double>(n);
  if (!(fit.sigma2 > 0)) throw Error("profiled_deviance: zero residual variance (perfect fit)");
  const double nd = static_cast<double>(n);
  fit.deviance = nd * std::log(2.0 * std::numbers::pi * fit.sigma2) + logdet + nd;

  const Eigen::VectorXd r = d.y - d.X * fit.beta;
  Eigen::VectorXd rsum = Eigen::VectorXd::Zero(d.n_groups);
  for (Eigen::Index i = 0; i < n; ++i) rsum(d.group[static_cast<std::size_t>(i)]) += r(i);
  fit.blups.resize(d.n_groups);
  for (int g = 0; g < d.n_groups; ++g)
    fit.blups(g) = theta * rsum(g) / (1.0 + theta * sums.size[static_cast<std::size_t>(g)]);
  return fit;
}

namespace {

struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer of(const Dataset& d) {
    Standardizer s;
    const Eigen::Index p = d.cols();
    s.mean = Eigen::VectorXd::Zero(p);
    s.scale = Eigen::VectorXd::Ones(p);
    for (Eigen::Index k = 1; k < p; ++k) {
      const double m = d.X.col(k).mean();
      const double sd = std::sqrt((d.X.col(k).array() - m).square().mean());
      if (!(sd > 0))
        throw Error("rank-deficient design: collinear column(s) " + column_label(d, k) +
                    " (constant, duplicates the intercept)");
      s.mean(k) = m;
      s.scale(k) = sd;
    }
    return s;
  }

  Dataset apply(const Dataset& d) const {
    Dataset out = d;
    for (Eigen::Index k = 1; k < d.cols(); ++k)
      out.X.col(k) = (d.X.col(k).array() - mean(k)) / scale(k);
    return out;
  }

  Eigen::VectorXd to_native(const Eigen::VectorXd& beta_std) const {
    Eigen::VectorXd beta = beta_std.cwiseQuotient(scale);
    beta(0) = beta_std(0);
    for (Eigen::Index k = 1; k < beta.size(); ++k) beta(0) -= beta(k) * mean(k);
    return beta;
  }
};

}  // namespace

LmmFit fit_ml(const Dataset& d, const FitOptions& options) {
  d.validate();
  if (!(options.theta_max > 0)) throw Error("fit_ml: theta_max must be positive");
  std::optional<Standardizer> standardizer;
  if (options.standardize) standardizer = Standardizer::of(d);
  const Dataset work = standardizer ? standardizer->apply(d) : d;

  const auto theta_of = [](double u) { return std::expm1(u); };
  const auto dev = [&](double u) { return profiled_deviance(work, theta_of(u)).deviance; };

  const double u_max = std::log1p(options.theta_max);
  double best_u = 0.0;
  double best_f = dev(0.0);

  // Coarse scan to bracket the global minimum, then golden-section.
  constexpr int kScan = 40;
  std::vector<double> grid(kScan + 1), values(kScan + 1);
  int best_i = 0;
  for (int i = 0; i <= kScan; ++i) {
    grid[static_cast<std::size_t>(i)] = u_max * i / kScan;
    values[static_cast<std::size_t>(i)] = i == 0 ? best_f : dev(grid[static_cast<std::size_t>(i)]);
    if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best_i)]) best_i = i;
  }
  double a = grid[static_cast<std::size_t>(std::max(0, best_i - 1))];
  double b = grid[static_cast<std::size_t>(std::min(kScan, best_i + 1))];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = dev(x1), f2 = dev(x2);
  int iterations = 0;
  bool converged = false;
  while (iterations < options.max_iterations) {
    if (b - a < 1e-10 * (1.0 + std::abs(x1)) ||
        (std::abs(f1 - f2) < options.tolerance * 1e-2 && b - a < 1e-6)) {
      converged = true;
      break;
    }
    ++iterations;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = dev(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = dev(x2);
    }
  }
  double xm = f1 <= f2 ? x1 : x2;
  double fm = std::min(f1, f2);

  // One parabolic step through the final bracket.
  {
    const double fa = dev(a), fb = dev(b);
    const double num = (xm - a) * (xm - a) * (fm - fb) - (xm - b) * (xm - b) * (fm - fa);
    const double den = (xm - a) * (fm - fb) - (xm - b) * (fm - fa);
    if (den != 0.0) {
      const double xp = xm - 0.5 * num / den;
      if (xp > a && xp < b) {
        const double fp = dev(xp);
        if (fp < fm) {
          xm = xp;
          fm = fp;
        }
      }
    }
  }
  if (fm < best_f) {
    best_f = fm;
    best_u = xm;
  }
  for (int i = 0; i <= kScan; ++i)
    if (values[static_cast<std::size_t>(i)] < best_f) {
      best_f = values[static_cast<std::size_t>(i)];
      best_u = grid[static_cast<std::size_t>(i)];
    }
  if (options.seed_theta && *options.seed_theta >= 0) {
    const double us = std::log1p(std::min(*options.seed_theta, options.theta_max));
    const double fs = dev(us);
    if (fs < best_f) {
      best_f = fs;
      best_u = us;
    }
  }

  const double theta = theta_of(best_u);
  const ProfiledFit pf = profiled_deviance(work, theta);
  LmmFit fit;
  fit.beta = standardizer ? standardizer->to_native(pf.beta) : pf.beta;
  fit.theta = theta;
  fit.sigma2 = pf.sigma2;
  fit.deviance = pf.deviance;
  fit.loglik = -0.5 * pf.deviance;
  fit.blups = pf.blups;
  fit.converged = converged;
  fit.singular = theta < 1e-8;
  fit.iterations = iterations;
  fit.n = d.rows();
  fit.p = d.cols();
  fit.column_names = d.column_names;
  return fit;
}

LrTest lr_test(const LmmFit& basic, const LmmFit& extended) {
  if (basic.n != extended.n)
    throw Error("lr_test: models were fit on different row counts (" + std::to_string(basic.n) +
                " vs " + std::to_string(extended.n) + ")");
  if (extended.p != basic.p + 1)
    throw Error("lr_test: extended model must add exactly one column");
  LrTest t;
  t.df = 1;
  t.lr_stat = std::max(0.0, 2.0 * (extended.loglik - basic.loglik));
  t.p_value = chi_square_sf(t.lr_stat, t.df);
  return t;
}

EffectEstimate effect_size(const LmmFit& basic, const Dataset& d) {
  if (!d.flag) throw Error("effect_size: dataset has no flag column");
  if (d.rows() != basic.n || d.cols() != basic.p)
    throw Error("effect_size: dataset does not match the basic model's design");
  const Eigen::VectorXd& flag = *d.flag;
  const Eigen::VectorXd f = flag.array() - flag.mean();
  if (f.cwiseAbs().maxCoeff() == 0.0) throw Error("effect_size: flag column is constant");
  const Eigen::VectorXd r = d.y - d.X * basic.beta;

  Eigen::VectorXd fsum = Eigen::VectorXd::Zero(d.n_groups), rsum = fsum, size = fsum;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const int g = d.group[static_cast<std::size_t>(i)];
    fsum(g) += f(i);
    rsum(g) += r(i);
    size(g) += 1.0;
  }
  // f' V^{-1} v = f'v - sum_g theta / (1 + theta m_g) * F_g * S_g
  double fvr = f.dot(r), fvf = f.squaredNorm();
  for (int g = 0; g < d.n_groups; ++g) {
    const double w = basic.theta / (1.0 + basic.theta * size(g));
    fvr -= w * fsum(g) * rsum(g);
    fvf -= w * fsum(g) * fsum(g);
  }
  if (!(fvf > 0)) throw Error("effect_size: flag has no contrast after group adjustment");
  return {fvr / fvf, std::sqrt(basic.sigma2 / fvf)};
}

std::string significance_label(double p, double near_miss) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < near_miss) return io::format("%.2f", p);
  return "ns";
}

std::string dataset_to_tsv(const Dataset& d) {
  std::ostringstream out;
  out << "#";
  for (Eigen::Index k = 0; k < d.cols(); ++k) out << column_label(d, k) << '\t';
  out << "y\tgroup\tflag\n";
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index k = 0; k < d.cols(); ++k) out << io::format_double(d.X(i, k)) << '\t';
    out << io::format_double(d.y(i)) << '\t' << d.group[static_cast<std::size_t>(i)] << '\t'
        << (d.flag ? io::format_double((*d.flag)(i)) : "") << '\n';
  }
  return out.str();
}

}  // namespace prosyn
