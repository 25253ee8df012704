#pragma once

#include <Eigen/Dense>
#include <vector>

namespace itca {

struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // positive definite
};

struct GaussianMixture {
  std::vector<double> weights;  // sum to one
  std::vector<GaussianComponent> components;

  int dimension() const {
    return components.empty() ? 0 : static_cast<int>(components.front().mean.size());
  }
};

// Closed-form KL divergence between two Gaussians. Throws NonPositiveDefinite.
double gaussian_kl(const GaussianComponent& f, const GaussianComponent& g);

// Differential entropy of a Gaussian: 0.5 * log((2*pi*e)^d |Sigma|).
double gaussian_entropy(const GaussianComponent& f);

// log of the normalization constant t = integral of f*g.
double log_gaussian_overlap(const GaussianComponent& f, const GaussianComponent& g);

struct GmmKlBounds {
  double lower = 0.0;
  double upper = 0.0;
  double average() const { return 0.5 * (lower + upper); }
};

// Variational/product bounds on KL(f || g) for Gaussian mixtures; the
// average of the two is the working approximation. For identical mixtures
// the bounds bracket zero and the average is exactly zero.
GmmKlBounds gmm_kl_bounds(const GaussianMixture& f, const GaussianMixture& g);

double gmm_kl_approx(const GaussianMixture& f, const GaussianMixture& g);

// Per-group Gaussian fit: one component per label value present, weights
// proportional to group sizes. Covariances get the same trace-scaled ridge
// as the LDA pooled covariance.
GaussianMixture fit_mixture(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                            int k, double shrinkage);

}  // namespace itca
