#include "itca/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "itca/errors.hpp"

namespace itca {

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NonPositiveDefinite();
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

double gaussian_kl(const GaussianComponent& f, const GaussianComponent& g) {
  const auto d = f.mean.size();
  const auto llt_f = checked_llt(f.covariance);
  const auto llt_g = checked_llt(g.covariance);
  const Eigen::VectorXd delta = f.mean - g.mean;
  const double trace_term = llt_g.solve(f.covariance).trace();
  const double maha = delta.dot(llt_g.solve(delta));
  return 0.5 * (log_det_from_llt(llt_g) - log_det_from_llt(llt_f) + trace_term + maha -
                static_cast<double>(d));
}

double gaussian_entropy(const GaussianComponent& f) {
  const auto d = static_cast<double>(f.mean.size());
  const auto llt = checked_llt(f.covariance);
  return 0.5 * (d * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det_from_llt(llt));
}

double log_gaussian_overlap(const GaussianComponent& f, const GaussianComponent& g) {
  const auto d = static_cast<double>(f.mean.size());
  const Eigen::MatrixXd sum = f.covariance + g.covariance;
  const auto llt = checked_llt(sum);
  const Eigen::VectorXd delta = g.mean - f.mean;
  return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_from_llt(llt) -
         0.5 * delta.dot(llt.solve(delta));
}

namespace {

double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - m);
  return m + std::log(sum);
}

}  // namespace

GmmKlBounds gmm_kl_bounds(const GaussianMixture& f, const GaussianMixture& g) {
  if (f.components.empty() || g.components.empty()) {
    throw ConfigError("gmm_kl: empty mixture");
  }
  const std::size_t nf = f.components.size();
  const std::size_t ng = g.components.size();

  // E_f[log f] bounds: variational (lower) and overlap/Jensen (upper).
  // E_f[log g] bounds likewise. KL = E_f[log f] - E_f[log g], so
  //   lower = L_var(f) - L_overlap(g),  upper = L_overlap(f) - L_var(g).
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> terms;
  for (std::size_t a = 0; a < nf; ++a) {
    const double pa = f.weights[a];
    if (pa <= 0.0) continue;
    const double entropy_a = gaussian_entropy(f.components[a]);

    terms.clear();
    for (std::size_t l = 0; l < nf; ++l) {
      if (f.weights[l] <= 0.0) continue;
      terms.push_back(std::log(f.weights[l]) - gaussian_kl(f.components[a], f.components[l]));
    }
    const double self_var = log_sum_exp(terms) - entropy_a;  // lower bound on E_fa[log f]

    terms.clear();
    for (std::size_t l = 0; l < nf; ++l) {
      if (f.weights[l] <= 0.0) continue;
      terms.push_back(std::log(f.weights[l]) +
                      log_gaussian_overlap(f.components[a], f.components[l]));
    }
    const double self_overlap = log_sum_exp(terms);  // upper bound on E_fa[log f]

    terms.clear();
    for (std::size_t b = 0; b < ng; ++b) {
      if (g.weights[b] <= 0.0) continue;
      terms.push_back(std::log(g.weights[b]) - gaussian_kl(f.components[a], g.components[b]));
    }
    const double cross_var = log_sum_exp(terms) - entropy_a;  // lower bound on E_fa[log g]

    terms.clear();
    for (std::size_t b = 0; b < ng; ++b) {
      if (g.weights[b] <= 0.0) continue;
      terms.push_back(std::log(g.weights[b]) +
                      log_gaussian_overlap(f.components[a], g.components[b]));
    }
    const double cross_overlap = log_sum_exp(terms);  // upper bound on E_fa[log g]

    lower += pa * (self_var - cross_overlap);
    upper += pa * (self_overlap - cross_var);
  }
  return GmmKlBounds{lower, upper};
}

double gmm_kl_approx(const GaussianMixture& f, const GaussianMixture& g) {
  return gmm_kl_bounds(f, g).average();
}

GaussianMixture fit_mixture(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                            int k, double shrinkage) {
  const auto n = features.rows();
  const auto d = features.cols();
  GaussianMixture mix;
  for (int c = 1; c <= k; ++c) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) rows.push_back(i);
    }
    if (rows.empty()) continue;  // zero-weight component: drop

    GaussianComponent comp;
    comp.mean = Eigen::VectorXd::Zero(d);
    for (Eigen::Index r : rows) comp.mean += features.row(r).transpose();
    comp.mean /= static_cast<double>(rows.size());

    comp.covariance = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index r : rows) {
      const Eigen::VectorXd centered = features.row(r).transpose() - comp.mean;
      comp.covariance.noalias() += centered * centered.transpose();
    }
    comp.covariance /= static_cast<double>(std::max<std::size_t>(rows.size() - 1, 1));
    double scale = comp.covariance.trace() / static_cast<double>(d);
    if (!(scale > 0.0)) scale = 1.0;
    comp.covariance += (shrinkage * scale > 0.0 ? shrinkage * scale : 1e-12) *
                       Eigen::MatrixXd::Identity(d, d);

    mix.weights.push_back(static_cast<double>(rows.size()) / static_cast<double>(n));
    mix.components.push_back(std::move(comp));
  }
  if (mix.components.empty()) throw ConfigError("fit_mixture: no populated groups");
  // Renormalize in case of dropped groups (weights were n-relative already).
  double total = 0.0;
  for (double w : mix.weights) total += w;
  for (auto& w : mix.weights) w /= total;
  return mix;
}

}  // namespace itca
