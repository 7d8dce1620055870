#include "stringgp/sparse_gp.hpp"

#include <cmath>
#include <unordered_set>

namespace stringgp {

InducingSet deduplicate(const InducingSet &z) {
  InducingSet out;
  std::unordered_set<std::string> seen;
  for (const auto &p : z.points)
    if (seen.insert(p.chars).second)
      out.points.push_back(p);
  return out;
}

namespace {

struct SparseParts {
  Eigen::LLT<Eigen::MatrixXd> kzz_llt;
  Eigen::MatrixXd kzx; // m x n
};

SparseParts build_parts(const Dataset &data, const std::vector<Sequence> &z,
                        const KernelConfig &kcfg, FeatureCache &cache) {
  SparseParts parts;
  Eigen::MatrixXd kzz = gram(z, z, cache);
  parts.kzz_llt = chol_with_jitter(kzz, default_jitter(kzz));
  parts.kzx = gram(z, data.inputs, cache);
  return parts;
}

Eigen::Map<const Eigen::VectorXd> targets_of(const Dataset &data) {
  return {data.targets.data(), static_cast<Eigen::Index>(data.targets.size())};
}

} // namespace

double sparse_evidence_gaussian(const Dataset &data, const InducingSet &z_in,
                                const KernelConfig &kcfg, double noise_variance) {
  FeatureCache cache(kcfg);
  return sparse_evidence_gaussian(data, z_in, noise_variance, cache);
}

double sparse_evidence_gaussian(const Dataset &data, const InducingSet &z_in,
                                double noise_variance, FeatureCache &cache) {
  if (noise_variance <= 0.0)
    throw std::invalid_argument("noise variance must be positive");
  const KernelConfig &kcfg = cache.config();
  InducingSet z = deduplicate(z_in);
  SparseParts parts = build_parts(data, z.points, kcfg, cache);
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto m = static_cast<Eigen::Index>(z.size());
  auto y = targets_of(data);

  // V = Lz^-1 Kzx, so Q = V'V; determinant and quadratic terms go
  // through the m x m system B = VV' + sigma^2 I.
  Eigen::MatrixXd v = Eigen::MatrixXd(parts.kzz_llt.matrixL())
                          .triangularView<Eigen::Lower>()
                          .solve(parts.kzx);
  Eigen::MatrixXd b = v * v.transpose();
  b.diagonal().array() += noise_variance;
  Eigen::LLT<Eigen::MatrixXd> llt_b(b);
  if (llt_b.info() != Eigen::Success)
    throw CholeskyFailure("sparse evidence inner system not positive definite");

  Eigen::VectorXd vy = v * y;
  const double quad = (y.squaredNorm() - vy.dot(llt_b.solve(vy))) / noise_variance;
  const double logdet =
      2.0 * Eigen::MatrixXd(llt_b.matrixL()).diagonal().array().log().sum() +
      static_cast<double>(n - m) * std::log(noise_variance);
  return -0.5 * quad - 0.5 * logdet -
         0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

SparseGPModel fit_sparse_gaussian(const Dataset &data, const InducingSet &z_in,
                                  const KernelConfig &kcfg, double noise_variance) {
  if (noise_variance <= 0.0)
    throw std::invalid_argument("noise variance must be positive");
  SparseGPModel model;
  model.inducing = deduplicate(z_in);
  model.kernel_cfg = kcfg;
  model.likelihood = Likelihood::gaussian(noise_variance);
  model.alphabet = data.alphabet;

  FeatureCache cache(kcfg);
  SparseParts parts = build_parts(data, model.inducing.points, kcfg, cache);
  model.kzz_chol = parts.kzz_llt.matrixL();
  for (const auto &p : model.inducing.points)
    model.inducing_features.push_back(cache.get(p));

  auto y = targets_of(data);
  // Work through V = Lz^-1 Kzx and B = V V^T + sigma^2 I, which stays
  // well-conditioned even for tiny noise where the direct normal equations
  // C = Kzz + Kzx Kxz / sigma^2 blow up.
  const Eigen::MatrixXd &lz = model.kzz_chol;
  Eigen::MatrixXd v = lz.triangularView<Eigen::Lower>().solve(parts.kzx);
  Eigen::MatrixXd b = v * v.transpose();
  b.diagonal().array() += noise_variance;
  auto llt_b = chol_with_jitter(b, default_jitter(b));
  model.gauss_chol_b = llt_b.matrixL();
  model.gauss_beta = llt_b.solve(Eigen::VectorXd(v * y));
  model.mu_u = lz * model.gauss_beta;
  Eigen::MatrixXd binv_lzt = llt_b.solve(Eigen::MatrixXd(lz.transpose()));
  model.a_u = noise_variance * lz * binv_lzt;
  model.a_u = 0.5 * (model.a_u + model.a_u.transpose()).eval();
  return model;
}

namespace {

// Kzs between the inducing set and test sequences; fills tf with cached features.
Eigen::MatrixXd inducing_cross_gram(const SparseGPModel &model,
                                    const std::vector<Sequence> &test,
                                    FeatureCache &cache,
                                    std::vector<const SpectrumFeatures *> &tf) {
  const auto nt = static_cast<Eigen::Index>(test.size());
  const auto m = static_cast<Eigen::Index>(model.inducing.size());
  const KernelConfig &cfg = model.kernel_cfg;
  tf.resize(test.size());
  for (std::size_t i = 0; i < test.size(); ++i)
    tf[i] = &cache.get(test[i]);
  Eigen::MatrixXd kzs(m, nt);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < nt; ++j)
    for (Eigen::Index i = 0; i < m; ++i)
      kzs(i, j) =
          kernel_value(model.inducing_features[static_cast<std::size_t>(i)], *tf[j],
                       cfg);
  return kzs;
}

// Gaussian DTC predictor in the B-form: mean = Ksz Lz^-T beta, covariance
// Kss - T^T T + sigma^2 (Lb^-1 T)^T (Lb^-1 T) with T = Lz^-1 Kzs. Exact for
// z = x and numerically stable for small noise.
GaussianPosterior predict_gaussian(const SparseGPModel &model,
                                   const std::vector<Sequence> &test,
                                   bool full_cov) {
  GaussianPosterior post;
  post.has_full_cov = full_cov;
  const auto nt = static_cast<Eigen::Index>(test.size());
  const KernelConfig &cfg = model.kernel_cfg;
  const double noise = model.likelihood.noise_variance;

  FeatureCache cache(cfg);
  std::vector<const SpectrumFeatures *> tf;
  Eigen::MatrixXd kzs = inducing_cross_gram(model, test, cache, tf);

  Eigen::MatrixXd t =
      model.kzz_chol.triangularView<Eigen::Lower>().solve(kzs); // Lz^-1 Kzs
  Eigen::MatrixXd u =
      model.gauss_chol_b.triangularView<Eigen::Lower>().solve(t); // Lb^-1 T
  post.mean = t.transpose() * model.gauss_beta;

  if (full_cov) {
    post.cov = gram(test, test, cache) - t.transpose() * t +
               noise * u.transpose() * u;
    post.var = post.cov.diagonal();
  } else {
    post.var.resize(nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
      double kss = kernel_value(*tf[static_cast<std::size_t>(j)],
                                *tf[static_cast<std::size_t>(j)], cfg);
      post.var[j] =
          kss - t.col(j).squaredNorm() + noise * u.col(j).squaredNorm();
    }
  }
  return post;
}

GaussianPosterior predict_from_u(const SparseGPModel &model,
                                 const Eigen::VectorXd &mu,
                                 const Eigen::MatrixXd &cov_u,
                                 const std::vector<Sequence> &test,
                                 bool full_cov) {
  GaussianPosterior post;
  post.has_full_cov = full_cov;
  const auto nt = static_cast<Eigen::Index>(test.size());
  const KernelConfig &cfg = model.kernel_cfg;

  FeatureCache cache(cfg);
  std::vector<const SpectrumFeatures *> tf;
  Eigen::MatrixXd kzs = inducing_cross_gram(model, test, cache, tf);

  const Eigen::MatrixXd &lz = model.kzz_chol;
  Eigen::MatrixXd t = lz.triangularView<Eigen::Lower>().solve(kzs); // Lz^-1 Kzs
  Eigen::MatrixXd proj =
      lz.transpose().triangularView<Eigen::Upper>().solve(t);      // Kzz^-1 Kzs
  Eigen::VectorXd w = lz.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::VectorXd(lz.triangularView<Eigen::Lower>().solve(mu)));
  post.mean = kzs.transpose() * w;

  if (full_cov) {
    post.cov = gram(test, test, cache) - t.transpose() * t +
               proj.transpose() * cov_u * proj;
    post.var = post.cov.diagonal();
  } else {
    post.var.resize(nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
      double kss = kernel_value(*tf[static_cast<std::size_t>(j)],
                                *tf[static_cast<std::size_t>(j)], cfg);
      post.var[j] = kss - t.col(j).squaredNorm() +
                    proj.col(j).dot(cov_u * proj.col(j));
    }
  }
  return post;
}

} // namespace

GaussianPosterior sparse_predict(const SparseGPModel &model,
                                 const std::vector<Sequence> &test, bool full_cov) {
  if (model.likelihood.is_gaussian() && model.gauss_chol_b.size() > 0)
    return predict_gaussian(model, test, full_cov);
  return predict_from_u(model, model.mu_u, model.a_u, test, full_cov);
}

SparseGPModel sparse_laplace_fit(const Dataset &data, const InducingSet &z_in,
                                 const KernelConfig &kcfg, const Likelihood &lik) {
  FeatureCache cache(kcfg);
  return sparse_laplace_fit(data, z_in, lik, cache);
}

SparseGPModel sparse_laplace_fit(const Dataset &data, const InducingSet &z_in,
                                 const Likelihood &lik, FeatureCache &cache) {
  if (lik.is_gaussian())
    throw std::invalid_argument("sparse_laplace_fit is for non-Gaussian likelihoods");

  const KernelConfig &kcfg = cache.config();
  SparseGPModel model;
  model.inducing = deduplicate(z_in);
  model.kernel_cfg = kcfg;
  model.likelihood = lik;
  model.alphabet = data.alphabet;

  SparseParts parts = build_parts(data, model.inducing.points, kcfg, cache);
  model.kzz_chol = parts.kzz_llt.matrixL();
  for (const auto &p : model.inducing.points)
    model.inducing_features.push_back(cache.get(p));

  const auto n = static_cast<Eigen::Index>(data.size());
  const auto m = static_cast<Eigen::Index>(model.inducing.size());
  const Eigen::MatrixXd &lz = model.kzz_chol;

  // P = Kxz Kzz^-1, the deterministic projection of latents onto u.
  Eigen::MatrixXd p = lz.transpose()
                          .triangularView<Eigen::Upper>()
                          .solve(Eigen::MatrixXd(
                              lz.triangularView<Eigen::Lower>().solve(parts.kzx)))
                          .transpose(); // n x m

  auto kzz_inv_mul = [&](const Eigen::VectorXd &u) -> Eigen::VectorXd {
    return lz.transpose().triangularView<Eigen::Upper>().solve(
        Eigen::VectorXd(lz.triangularView<Eigen::Lower>().solve(u)));
  };

  auto objective = [&](const Eigen::VectorXd &u, const Eigen::VectorXd &f) {
    double logp = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      logp += likelihood_terms(lik, data.targets[static_cast<std::size_t>(i)], f[i])
                  .logp;
    return logp - 0.5 * u.dot(kzz_inv_mul(u));
  };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  double psi = objective(u, f);

  LaplaceState state;
  const double tol = 1e-10;
  Eigen::VectorXd d1(n), w(n);
  for (int iter = 0; iter < 100; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      auto t = likelihood_terms(lik, data.targets[static_cast<std::size_t>(i)], f[i]);
      d1[i] = t.d1;
      w[i] = std::max(0.0, -t.d2);
    }
    Eigen::VectorXd grad = p.transpose() * d1 - kzz_inv_mul(u);
    state.iterations = iter;
    if (grad.lpNorm<Eigen::Infinity>() < tol) {
      state.converged = true;
      break;
    }

    Eigen::MatrixXd h = p.transpose() * w.asDiagonal() * p;
    Eigen::MatrixXd kzz = model.kzz_chol * model.kzz_chol.transpose();
    h += kzz.llt().solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::VectorXd delta = chol_with_jitter(h).solve(grad);

    double step = 1.0;
    Eigen::VectorXd u_new, f_new;
    double psi_new;
    for (int hlv = 0; hlv <= 20; ++hlv, step *= 0.5) {
      u_new = u + step * delta;
      f_new = p * u_new;
      psi_new = objective(u_new, f_new);
      if (psi_new >= psi || hlv == 20)
        break;
    }
    if (psi_new < psi)
      break;
    u = u_new;
    f = f_new;
    psi = psi_new;
  }

  // Curvature and evidence at the mode.
  double logp = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto t = likelihood_terms(lik, data.targets[static_cast<std::size_t>(i)], f[i]);
    d1[i] = t.d1;
    w[i] = std::max(0.0, -t.d2);
    logp += t.logp;
  }
  Eigen::MatrixXd kzz = model.kzz_chol * model.kzz_chol.transpose();
  Eigen::MatrixXd kzz_inv = kzz.llt().solve(Eigen::MatrixXd::Identity(m, m));
  Eigen::MatrixXd h = p.transpose() * w.asDiagonal() * p + kzz_inv;
  auto llt_h = chol_with_jitter(h);
  Eigen::MatrixXd lh = llt_h.matrixL();

  state.f_hat = u;
  state.w = w;
  state.alpha = kzz_inv_mul(u);
  state.log_evidence = logp - 0.5 * u.dot(state.alpha) -
                       model.kzz_chol.diagonal().array().log().sum() -
                       lh.diagonal().array().log().sum();
  model.laplace = state;
  model.laplace_cov_u = llt_h.solve(Eigen::MatrixXd::Identity(m, m));
  return model;
}

GaussianPosterior sparse_predict_latent(const SparseGPModel &model,
                                        const std::vector<Sequence> &test) {
  return predict_from_u(model, model.laplace.f_hat, model.laplace_cov_u, test,
                        false);
}

double sparse_evidence_laplace(const Dataset &data, const InducingSet &z,
                               const KernelConfig &kcfg, const Likelihood &lik) {
  return sparse_laplace_fit(data, z, kcfg, lik).laplace.log_evidence;
}

double sparse_evidence(const Dataset &data, const InducingSet &z,
                       const KernelConfig &kcfg, const Likelihood &lik) {
  if (lik.is_gaussian())
    return sparse_evidence_gaussian(data, z, kcfg, lik.noise_variance);
  return sparse_evidence_laplace(data, z, kcfg, lik);
}

double sparse_evidence(const Dataset &data, const InducingSet &z,
                       const Likelihood &lik, FeatureCache &cache) {
  if (lik.is_gaussian())
    return sparse_evidence_gaussian(data, z, lik.noise_variance, cache);
  return sparse_laplace_fit(data, z, lik, cache).laplace.log_evidence;
}

} // namespace stringgp
