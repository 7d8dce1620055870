#include "stringgp/gp.hpp"

#include <cmath>

namespace stringgp {

double sigmoid(double x) {
  if (x >= 0.0)
    return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

double log_sigmoid(double x) {
  // log(1/(1+e^-x)) without overflow
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

} // namespace

LikelihoodTerms likelihood_terms(const Likelihood &lik, double y, double f) {
  switch (lik.kind) {
  case Likelihood::Kind::Gaussian: {
    const double s2 = lik.noise_variance;
    const double r = y - f;
    return {-0.5 * r * r / s2 - 0.5 * std::log(2.0 * M_PI * s2), r / s2, -1.0 / s2};
  }
  case Likelihood::Kind::Bernoulli: {
    if (y != 0.0 && y != 1.0)
      throw UnsupportedTarget("Bernoulli target must be 0 or 1");
    const double p = sigmoid(f);
    const double logp = y > 0.5 ? log_sigmoid(f) : log_sigmoid(-f);
    return {logp, y - p, -p * (1.0 - p)};
  }
  case Likelihood::Kind::Poisson: {
    if (y < 0.0 || y != std::floor(y))
      throw UnsupportedTarget("Poisson target must be a non-negative integer");
    const double ef = std::exp(f);
    return {y * f - ef - std::lgamma(y + 1.0), y - ef, -ef};
  }
  }
  throw std::logic_error("unreachable");
}

Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd &m,
                                             double base_jitter, int max_doublings) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success)
    return llt;
  double eps = base_jitter > 0.0
                   ? base_jitter
                   : 1e-10 * std::max(1.0, m.diagonal().cwiseAbs().mean());
  for (int i = 0; i <= max_doublings; ++i, eps *= 2.0) {
    Eigen::MatrixXd jittered = m;
    jittered.diagonal().array() += eps;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success)
      return llt;
  }
  throw CholeskyFailure("matrix not positive definite after jitter");
}

static std::vector<SpectrumFeatures> all_features(const std::vector<Sequence> &xs,
                                                  const KernelConfig &cfg) {
  std::vector<SpectrumFeatures> out;
  out.reserve(xs.size());
  for (const auto &x : xs)
    out.push_back(features(x, cfg));
  return out;
}

FullGPModel fit_full_gaussian(const Dataset &data, const KernelConfig &kcfg,
                              double noise_variance) {
  if (noise_variance <= 0.0)
    throw std::invalid_argument("noise variance must be positive");
  FullGPModel model;
  model.train = data;
  model.kernel_cfg = kcfg;
  model.likelihood = Likelihood::gaussian(noise_variance);
  model.train_features = all_features(data.inputs, kcfg);
  model.kxx = gram(data.inputs, data.inputs, kcfg);

  Eigen::MatrixXd ky = model.kxx;
  ky.diagonal().array() += noise_variance;
  auto llt = chol_with_jitter(ky, default_jitter(model.kxx));
  model.chol = llt.matrixL();
  Eigen::Map<const Eigen::VectorXd> y(data.targets.data(),
                                      static_cast<Eigen::Index>(data.targets.size()));
  model.alpha = llt.solve(y);
  return model;
}

static Eigen::MatrixXd cross_gram(const FullGPModel &model,
                                  const std::vector<Sequence> &test) {
  FeatureCache cache(model.kernel_cfg);
  const auto nt = static_cast<Eigen::Index>(test.size());
  const auto n = static_cast<Eigen::Index>(model.train.size());
  Eigen::MatrixXd ksx(nt, n);
  std::vector<const SpectrumFeatures *> tf(test.size());
  for (std::size_t i = 0; i < test.size(); ++i)
    tf[i] = &cache.get(test[i]);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < nt; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      ksx(i, j) = kernel_value(*tf[i], model.train_features[j], model.kernel_cfg);
  return ksx;
}

GaussianPosterior predict_full(const FullGPModel &model,
                               const std::vector<Sequence> &test, bool full_cov) {
  GaussianPosterior post;
  post.has_full_cov = full_cov;
  const auto nt = static_cast<Eigen::Index>(test.size());

  Eigen::MatrixXd kss_diag_or_full;
  KernelConfig cfg = model.kernel_cfg;
  if (model.train.size() == 0) {
    post.mean = Eigen::VectorXd::Zero(nt);
    if (full_cov) {
      post.cov = gram(test, test, cfg);
      post.var = post.cov.diagonal();
    } else {
      post.var.resize(nt);
      FeatureCache cache(cfg);
      for (Eigen::Index i = 0; i < nt; ++i) {
        const auto &f = cache.get(test[static_cast<std::size_t>(i)]);
        post.var[i] = kernel_value(f, f, cfg);
      }
    }
    return post;
  }

  Eigen::MatrixXd ksx = cross_gram(model, test);
  post.mean = ksx * model.alpha;

  // V = L^-1 Kxs, cov = Kss - V'V
  Eigen::MatrixXd v =
      model.chol.triangularView<Eigen::Lower>().solve(ksx.transpose());
  if (full_cov) {
    post.cov = gram(test, test, cfg) - v.transpose() * v;
    post.var = post.cov.diagonal();
  } else {
    post.var.resize(nt);
    FeatureCache cache(cfg);
    for (Eigen::Index i = 0; i < nt; ++i) {
      const auto &f = cache.get(test[static_cast<std::size_t>(i)]);
      post.var[i] = kernel_value(f, f, cfg) - v.col(i).squaredNorm();
    }
  }
  return post;
}

double log_marginal_gaussian(const FullGPModel &model) {
  if (!model.likelihood.is_gaussian())
    throw std::invalid_argument("log_marginal_gaussian needs a Gaussian likelihood");
  Eigen::Map<const Eigen::VectorXd> y(
      model.train.targets.data(),
      static_cast<Eigen::Index>(model.train.targets.size()));
  const double n = static_cast<double>(model.train.size());
  return -0.5 * y.dot(model.alpha) - model.chol.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * M_PI);
}

FullGPModel laplace_fit_full(const Dataset &data, const KernelConfig &kcfg,
                             const Likelihood &lik) {
  if (lik.is_gaussian())
    throw std::invalid_argument("laplace_fit_full is for non-Gaussian likelihoods");

  FullGPModel model;
  model.train = data;
  model.kernel_cfg = kcfg;
  model.likelihood = lik;
  model.train_features = all_features(data.inputs, kcfg);
  model.kxx = gram(data.inputs, data.inputs, kcfg);

  const auto n = static_cast<Eigen::Index>(data.size());
  const Eigen::MatrixXd &k = model.kxx;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);

  auto objective = [&](const Eigen::VectorXd &av, const Eigen::VectorXd &fv) {
    double logp = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      logp += likelihood_terms(lik, data.targets[static_cast<std::size_t>(i)], fv[i])
                  .logp;
    return logp - 0.5 * av.dot(fv);
  };

  LaplaceState state;
  const double tol = 1e-10;
  const int max_iter = 100;
  double psi = objective(a, f);

  Eigen::VectorXd d1(n), w(n);
  Eigen::LLT<Eigen::MatrixXd> llt_b;
  for (int iter = 0; iter < max_iter; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      auto t = likelihood_terms(lik, data.targets[static_cast<std::size_t>(i)], f[i]);
      d1[i] = t.d1;
      w[i] = std::max(0.0, -t.d2);
    }
    state.iterations = iter;
    if ((d1 - a).lpNorm<Eigen::Infinity>() < tol) {
      state.converged = true;
      break;
    }

    Eigen::VectorXd sw = w.cwiseSqrt();
    Eigen::MatrixXd b = sw.asDiagonal() * k * sw.asDiagonal();
    b.diagonal().array() += 1.0;
    llt_b.compute(b);
    if (llt_b.info() != Eigen::Success)
      throw CholeskyFailure("Laplace inner system not positive definite");

    Eigen::VectorXd rhs = w.cwiseProduct(f) + d1;
    Eigen::VectorXd a_prop =
        rhs - sw.cwiseProduct(llt_b.solve(sw.cwiseProduct(k * rhs)));

    // Step halving keeps the objective non-decreasing.
    double step = 1.0;
    Eigen::VectorXd a_new, f_new;
    double psi_new;
    for (int h = 0; h <= 20; ++h, step *= 0.5) {
      a_new = a + step * (a_prop - a);
      f_new = k * a_new;
      psi_new = objective(a_new, f_new);
      if (psi_new >= psi || h == 20)
        break;
    }
    if (psi_new < psi)
      break; // no ascent direction left
    a = a_new;
    f = f_new;
    psi = psi_new;
  }

  // Final curvature and evidence at the returned mode.
  double logp = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto t = likelihood_terms(lik, data.targets[static_cast<std::size_t>(i)], f[i]);
    d1[i] = t.d1;
    w[i] = std::max(0.0, -t.d2);
    logp += t.logp;
  }
  Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::MatrixXd b = sw.asDiagonal() * k * sw.asDiagonal();
  b.diagonal().array() += 1.0;
  llt_b.compute(b);
  if (llt_b.info() != Eigen::Success)
    throw CholeskyFailure("Laplace curvature system not positive definite");
  Eigen::MatrixXd lb = llt_b.matrixL();

  state.f_hat = f;
  state.w = w;
  state.alpha = a;
  state.log_evidence = logp - 0.5 * a.dot(f) - lb.diagonal().array().log().sum();
  model.laplace = state;
  model.laplace_chol_b = lb;
  return model;
}

GaussianPosterior predict_latent_full(const FullGPModel &model,
                                      const std::vector<Sequence> &test) {
  GaussianPosterior post;
  const auto nt = static_cast<Eigen::Index>(test.size());
  Eigen::MatrixXd ksx = cross_gram(model, test);
  post.mean = ksx * model.laplace.alpha;

  Eigen::VectorXd sw = model.laplace.w.cwiseSqrt();
  Eigen::MatrixXd v = model.laplace_chol_b.triangularView<Eigen::Lower>().solve(
      sw.asDiagonal() * ksx.transpose());
  post.var.resize(nt);
  FeatureCache cache(model.kernel_cfg);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const auto &f = cache.get(test[static_cast<std::size_t>(i)]);
    post.var[i] =
        kernel_value(f, f, model.kernel_cfg) - v.col(i).squaredNorm();
  }
  return post;
}

Eigen::VectorXd class_probability(const GaussianPosterior &post) {
  Eigen::VectorXd p(post.mean.size());
  for (Eigen::Index i = 0; i < post.mean.size(); ++i)
    p[i] = gaussian_expectation(post.mean[i], std::max(0.0, post.var[i]),
                                [](double f) { return sigmoid(f); });
  return p;
}

Eigen::VectorXd poisson_rate_estimate(const GaussianPosterior &post) {
  return (post.mean.array() + 0.5 * post.var.array().max(0.0)).exp();
}

const GaussHermite &gauss_hermite_32() {
  static const GaussHermite gh = [] {
    const int n = 32;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
      double b = std::sqrt(i / 2.0);
      jacobi(i, i - 1) = b;
      jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    GaussHermite out;
    out.nodes = es.eigenvalues();
    out.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double v0 = es.eigenvectors()(0, i);
      out.weights[i] = std::sqrt(M_PI) * v0 * v0;
    }
    return out;
  }();
  return gh;
}

} // namespace stringgp
