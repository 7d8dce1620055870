#pragma once

#include <Eigen/Dense>

#include "stringgp/domain.hpp"
#include "stringgp/gp.hpp"
#include "stringgp/kernel.hpp"

namespace stringgp {

struct InducingSet {
  std::vector<Sequence> points;

  std::size_t size() const { return points.size(); }
};

/// Removes exact duplicates, keeping first occurrences.
InducingSet deduplicate(const InducingSet &z);

/// DTC posterior: q(u) = N(mu_u, a) with the training conditional
/// replaced by the deterministic projection Kxz Kzz^-1 u.
struct SparseGPModel {
  InducingSet inducing;
  KernelConfig kernel_cfg;
  Likelihood likelihood;
  Alphabet alphabet;
  std::vector<SpectrumFeatures> inducing_features;
  Eigen::MatrixXd kzz_chol;   // lower factor of jittered Kzz
  Eigen::VectorXd mu_u;       // posterior mean over u (Gaussian case)
  Eigen::MatrixXd a_u;        // posterior covariance over u (Gaussian case)
  Eigen::MatrixXd gauss_chol_b; // lower factor of B = V V^T + sigma^2 I
  Eigen::VectorXd gauss_beta;   // B^-1 V y, predictive weights (Gaussian case)
  LaplaceState laplace;       // non-Gaussian case: mode/curvature over u
  Eigen::MatrixXd laplace_cov_u; // Laplace posterior covariance over u
};

/// log N(y; 0, Q + sigma^2 I) with Q = Kxz Kzz^-1 Kzx, evaluated through
/// the Woodbury and determinant identities in O(n m^2).
double sparse_evidence_gaussian(const Dataset &data, const InducingSet &z,
                                const KernelConfig &kcfg, double noise_variance);
double sparse_evidence_gaussian(const Dataset &data, const InducingSet &z,
                                double noise_variance, FeatureCache &cache);

SparseGPModel fit_sparse_gaussian(const Dataset &data, const InducingSet &z,
                                  const KernelConfig &kcfg, double noise_variance);

GaussianPosterior sparse_predict(const SparseGPModel &model,
                                 const std::vector<Sequence> &test,
                                 bool full_cov = false);

/// Newton optimization of log p(y | P u) - u' Kzz^-1 u / 2 with
/// P = Kxz Kzz^-1. Evidence is the Laplace approximation of the sparse
/// marginal likelihood; stored in the returned model's LaplaceState.
SparseGPModel sparse_laplace_fit(const Dataset &data, const InducingSet &z,
                                 const KernelConfig &kcfg, const Likelihood &lik);
SparseGPModel sparse_laplace_fit(const Dataset &data, const InducingSet &z,
                                 const Likelihood &lik, FeatureCache &cache);

GaussianPosterior sparse_predict_latent(const SparseGPModel &model,
                                        const std::vector<Sequence> &test);

/// Laplace-approximate sparse evidence for non-Gaussian likelihoods.
double sparse_evidence_laplace(const Dataset &data, const InducingSet &z,
                               const KernelConfig &kcfg, const Likelihood &lik);

/// Dispatches on the likelihood: exact DTC evidence for Gaussian,
/// Laplace-approximate otherwise. The selection objective.
double sparse_evidence(const Dataset &data, const InducingSet &z,
                       const KernelConfig &kcfg, const Likelihood &lik);
double sparse_evidence(const Dataset &data, const InducingSet &z,
                       const Likelihood &lik, FeatureCache &cache);

} // namespace stringgp
