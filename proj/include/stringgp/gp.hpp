#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "stringgp/domain.hpp"
#include "stringgp/kernel.hpp"

namespace stringgp {

struct CholeskyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Likelihood {
  enum class Kind { Gaussian, Bernoulli, Poisson };
  Kind kind = Kind::Gaussian;
  double noise_variance = 1.0; // Gaussian only

  static Likelihood gaussian(double noise_variance) {
    return {Kind::Gaussian, noise_variance};
  }
  static Likelihood bernoulli() { return {Kind::Bernoulli, 0.0}; }
  static Likelihood poisson() { return {Kind::Poisson, 0.0}; }

  bool is_gaussian() const { return kind == Kind::Gaussian; }
};

/// log p(y|f) and its first two derivatives in f.
struct LikelihoodTerms {
  double logp;
  double d1;
  double d2;
};

LikelihoodTerms likelihood_terms(const Likelihood &lik, double y, double f);

struct GaussianPosterior {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;     // marginal variances, always present
  Eigen::MatrixXd cov;     // full covariance, only when requested
  bool has_full_cov = false;
};

/// Newton mode of log p(y|f) - f' K^-1 f / 2 for a non-Gaussian likelihood.
struct LaplaceState {
  Eigen::VectorXd f_hat;
  Eigen::VectorXd w;        // -d2 log p(y|f) at the mode, diagonal
  Eigen::VectorXd alpha;    // K^-1 f_hat (equals d1 at convergence)
  double log_evidence = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FullGPModel {
  Dataset train;
  KernelConfig kernel_cfg;
  Likelihood likelihood;
  std::vector<SpectrumFeatures> train_features;
  GramMatrix kxx;                       // training Gram (no noise)
  Eigen::MatrixXd chol;                 // lower factor of Kxx + sigma^2 I (Gaussian)
  Eigen::VectorXd alpha;                // (Kxx + sigma^2 I)^-1 y (Gaussian)
  Eigen::MatrixXd laplace_chol_b;       // lower factor of I + W^1/2 Kxx W^1/2
  LaplaceState laplace;                 // non-Gaussian case
};

/// Cholesky with escalating diagonal jitter: base, doubled up to
/// max_doublings times before throwing CholeskyFailure.
Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd &m,
                                             double base_jitter = 0.0,
                                             int max_doublings = 8);

FullGPModel fit_full_gaussian(const Dataset &data, const KernelConfig &kcfg,
                              double noise_variance);

GaussianPosterior predict_full(const FullGPModel &model,
                               const std::vector<Sequence> &test,
                               bool full_cov = false);

double log_marginal_gaussian(const FullGPModel &model);

FullGPModel laplace_fit_full(const Dataset &data, const KernelConfig &kcfg,
                             const Likelihood &lik);

GaussianPosterior predict_latent_full(const FullGPModel &model,
                                      const std::vector<Sequence> &test);

/// p(y=1) = E[sigmoid(f)] under each Gaussian marginal (32-point
/// Gauss-Hermite).
Eigen::VectorXd class_probability(const GaussianPosterior &post);

/// Log-normal mean of the latent rate: exp(mu + var/2).
Eigen::VectorXd poisson_rate_estimate(const GaussianPosterior &post);

struct GaussHermite {
  Eigen::VectorXd nodes;   // physicists' convention, weight exp(-x^2)
  Eigen::VectorXd weights;
};

const GaussHermite &gauss_hermite_32();

/// E[f(t)] for t ~ N(mu, var) by Gauss-Hermite quadrature.
template <typename F> double gaussian_expectation(double mu, double var, F &&f) {
  const auto &gh = gauss_hermite_32();
  const double scale = std::sqrt(std::max(0.0, 2.0 * var));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < gh.nodes.size(); ++i)
    acc += gh.weights[i] * f(mu + scale * gh.nodes[i]);
  return acc / std::sqrt(M_PI);
}

double sigmoid(double x);

} // namespace stringgp
