#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stringgp/gp.hpp"
#include "test_util.hpp"

using namespace stringgp;
using testutil::random_sequence;
using testutil::random_sequences;

namespace {

Dataset random_regression(Rng &rng, std::size_t n, std::size_t length) {
  Dataset d;
  d.alphabet = Alphabet::binary();
  d.inputs = random_sequences(rng, d.alphabet, n, length);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (const auto &x : d.inputs)
    d.targets.push_back(static_cast<double>(char_count(x, '1')) + noise(rng));
  return d;
}

} // namespace

TEST_CASE("fit_full_gaussian scalar case") {
  Dataset d;
  d.alphabet = Alphabet::binary();
  d.inputs = {Sequence{"0101010101"}};
  d.targets = {2.5};
  KernelConfig cfg{3};
  double s2 = 0.7;
  auto model = fit_full_gaussian(d, cfg, s2);
  double c = kernel_naive(d.inputs[0], d.inputs[0], cfg);
  CHECK(model.alpha[0] == doctest::Approx(2.5 / (c + s2)).epsilon(1e-12));
}

TEST_CASE("fit_full_gaussian 2x2 case matches the closed-form inverse") {
  Dataset d;
  d.alphabet = Alphabet::binary();
  d.inputs = {Sequence{"0011001100"}, Sequence{"0101101001"}};
  d.targets = {1.0, -2.0};
  KernelConfig cfg{2};
  double s2 = 0.3;
  auto model = fit_full_gaussian(d, cfg, s2);

  double a = kernel_naive(d.inputs[0], d.inputs[0], cfg) + s2;
  double b = kernel_naive(d.inputs[0], d.inputs[1], cfg);
  double c = kernel_naive(d.inputs[1], d.inputs[1], cfg) + s2;
  double det = a * c - b * b;
  Eigen::Vector2d expect((c * 1.0 - b * -2.0) / det, (-b * 1.0 + a * -2.0) / det);
  CHECK((model.alpha - expect).cwiseAbs().maxCoeff() < 1e-10);

  // reconstruction: L L' = Kxx + s2 I
  Eigen::MatrixXd ky = model.kxx;
  ky.diagonal().array() += s2;
  Eigen::MatrixXd rec = model.chol * model.chol.transpose();
  CHECK((rec - ky).norm() / ky.norm() < 1e-8);
}

TEST_CASE("predict_full with no training data returns the prior") {
  Dataset d;
  d.alphabet = Alphabet::binary();
  KernelConfig cfg{2};
  auto model = fit_full_gaussian(d, cfg, 0.1);
  std::vector<Sequence> test{Sequence{"010101"}};
  auto post = predict_full(model, test, true);
  CHECK(post.mean[0] == doctest::Approx(0));
  CHECK(post.cov(0, 0) ==
        doctest::Approx(kernel_naive(test[0], test[0], cfg)));
}

TEST_CASE("predict_full interpolates through a near-noiseless training point") {
  Dataset d;
  d.alphabet = Alphabet::binary();
  d.inputs = {Sequence{"0110011001"}};
  d.targets = {3.25};
  KernelConfig cfg{3};
  auto model = fit_full_gaussian(d, cfg, 1e-10);
  auto post = predict_full(model, d.inputs);
  CHECK(std::abs(post.mean[0] - 3.25) < 1e-6);
  CHECK(post.var[0] <= 1e-6 * kernel_naive(d.inputs[0], d.inputs[0], cfg));
}

TEST_CASE("predictive variance never exceeds the prior variance") {
  Rng rng(21);
  Dataset d = random_regression(rng, 25, 10);
  KernelConfig cfg{3};
  auto model = fit_full_gaussian(d, cfg, 0.5);
  auto test = random_sequences(rng, d.alphabet, 15, 10);
  auto post = predict_full(model, test);
  for (std::size_t i = 0; i < test.size(); ++i)
    CHECK(post.var[static_cast<Eigen::Index>(i)] <=
          kernel_naive(test[i], test[i], cfg) + 1e-10);
}

TEST_CASE("predict_full and log_marginal match a dense explicit-inverse oracle") {
  Rng rng(22);
  KernelConfig cfg{3};
  for (int trial = 0; trial < 8; ++trial) {
    std::uniform_int_distribution<std::size_t> size(2, 50);
    Dataset d = random_regression(rng, size(rng), 12);
    double s2 = 0.2 + 0.1 * trial;
    auto model = fit_full_gaussian(d, cfg, s2);
    auto test = random_sequences(rng, d.alphabet, 10, 12);
    auto post = predict_full(model, test, true);

    Eigen::MatrixXd kxx = testutil::naive_gram(d.inputs, d.inputs, cfg);
    Eigen::MatrixXd ksx = testutil::naive_gram(test, d.inputs, cfg);
    Eigen::MatrixXd kss = testutil::naive_gram(test, test, cfg);
    Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(d.targets.data(), d.targets.size());
    auto oracle = testutil::dense_gp_predict(kxx, ksx, kss, y, s2);

    double scale = std::max(1.0, oracle.mean.cwiseAbs().maxCoeff());
    CHECK((post.mean - oracle.mean).cwiseAbs().maxCoeff() / scale < 1e-8);
    double cscale = std::max(1.0, oracle.cov.cwiseAbs().maxCoeff());
    CHECK((post.cov - oracle.cov).cwiseAbs().maxCoeff() / cscale < 1e-8);

    Eigen::MatrixXd ky = kxx;
    ky.diagonal().array() += s2;
    double lml_oracle = testutil::dense_gaussian_logpdf(y, ky);
    CHECK(log_marginal_gaussian(model) ==
          doctest::Approx(lml_oracle).epsilon(1e-8));
  }
}

TEST_CASE("log_marginal scalar formula and noise limit") {
  Dataset d;
  d.alphabet = Alphabet::binary();
  d.inputs = {Sequence{"010010"}};
  d.targets = {1.7};
  KernelConfig cfg{2};
  double c = kernel_naive(d.inputs[0], d.inputs[0], cfg);
  double s2 = 0.45;
  auto model = fit_full_gaussian(d, cfg, s2);
  double expect =
      -0.5 * 1.7 * 1.7 / (c + s2) - 0.5 * std::log(2 * M_PI * (c + s2));
  CHECK(log_marginal_gaussian(model) == doctest::Approx(expect).epsilon(1e-12));

  // large noise drives the evidence toward the pure-noise likelihood of y
  Rng rng(23);
  Dataset big = random_regression(rng, 20, 10);
  Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(big.targets.data(), big.targets.size());
  for (double noise : {1e2, 1e4}) {
    auto m = fit_full_gaussian(big, cfg, noise);
    double pure_noise = -0.5 * y.squaredNorm() / noise -
                        0.5 * y.size() * std::log(2 * M_PI * noise);
    CHECK(std::abs(log_marginal_gaussian(m) - pure_noise) <
          std::abs(pure_noise) * 0.5);
  }
}

TEST_CASE("log_marginal is invariant to input permutation") {
  Rng rng(24);
  Dataset d = random_regression(rng, 15, 10);
  KernelConfig cfg{3};
  double base = log_marginal_gaussian(fit_full_gaussian(d, cfg, 0.4));
  Dataset p;
  p.alphabet = d.alphabet;
  for (std::size_t i = d.size(); i-- > 0;) {
    p.inputs.push_back(d.inputs[i]);
    p.targets.push_back(d.targets[i]);
  }
  double permuted = log_marginal_gaussian(fit_full_gaussian(p, cfg, 0.4));
  CHECK(std::abs(base - permuted) < 1e-10);
}

TEST_CASE("likelihood_terms hand values") {
  auto bern = likelihood_terms(Likelihood::bernoulli(), 1.0, 0.0);
  CHECK(bern.logp == doctest::Approx(std::log(0.5)));
  CHECK(bern.d1 == doctest::Approx(0.5));
  CHECK(bern.d2 == doctest::Approx(-0.25));

  auto pois = likelihood_terms(Likelihood::poisson(), 0.0, 0.0);
  CHECK(pois.logp == doctest::Approx(-1.0));
  CHECK(pois.d1 == doctest::Approx(-1.0));
  CHECK(pois.d2 == doctest::Approx(-1.0));

  CHECK_THROWS_AS(likelihood_terms(Likelihood::bernoulli(), 0.5, 0.0),
                  UnsupportedTarget);
  CHECK_THROWS_AS(likelihood_terms(Likelihood::poisson(), -1.0, 0.0),
                  UnsupportedTarget);
}

TEST_CASE("likelihood_terms derivatives match central finite differences") {
  Rng rng(25);
  std::normal_distribution<double> fdist(0.0, 2.0);
  std::uniform_int_distribution<int> ydist(0, 1);
  std::uniform_int_distribution<int> cdist(0, 8);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    Likelihood lik =
        (trial % 2 == 0) ? Likelihood::bernoulli() : Likelihood::poisson();
    double y = lik.kind == Likelihood::Kind::Bernoulli
                   ? static_cast<double>(ydist(rng))
                   : static_cast<double>(cdist(rng));
    double f = fdist(rng);
    auto t = likelihood_terms(lik, y, f);
    auto lp = [&](double v) { return likelihood_terms(lik, y, v).logp; };
    double d1 = (lp(f + h) - lp(f - h)) / (2 * h);
    double d2 = (lp(f + h) - 2 * lp(f) + lp(f - h)) / (h * h);
    CHECK(std::abs(t.d1 - d1) < 1e-6);
    CHECK(std::abs(t.d2 - d2) < 1e-4);
    CHECK(t.d2 <= 0); // log-concavity
  }
}

TEST_CASE("laplace mode for K = cI Poisson all-ones matches a bisection oracle") {
  // f_hat solves 1 - e^f = f / c coordinatewise when K = c I and y = 1.
  // K is diagonal when all strings share no n-grams.
  Dataset d;
  d.alphabet = Alphabet("ACGT");
  d.inputs = {Sequence{"AAAA"}, Sequence{"CCCC"}, Sequence{"GGGG"},
              Sequence{"TTTT"}};
  d.targets = {1.0, 1.0, 1.0, 1.0};
  KernelConfig cfg{2};
  double c = kernel_naive(d.inputs[0], d.inputs[0], cfg); // 9
  auto model = laplace_fit_full(d, cfg, Likelihood::poisson());
  REQUIRE(model.laplace.converged);

  double lo = 0.0, hi = 1.0; // root of g(f) = 1 - e^f - f/c in [0, 1)
  auto g = [&](double f) { return 1.0 - std::exp(f) - f / c; };
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  double root = 0.5 * (lo + hi);
  for (Eigen::Index i = 0; i < 4; ++i)
    CHECK(std::abs(model.laplace.f_hat[i] - root) < 1e-8);
}

TEST_CASE("laplace mode matches a dense Newton oracle") {
  Rng rng(26);
  Alphabet bin = Alphabet::binary();
  KernelConfig cfg{2};
  for (auto lik : {Likelihood::bernoulli(), Likelihood::poisson()}) {
    Dataset d;
    d.alphabet = bin;
    d.inputs = random_sequences(rng, bin, 12, 10);
    for (const auto &x : d.inputs)
      d.targets.push_back(lik.kind == Likelihood::Kind::Bernoulli
                              ? static_cast<double>(char_count(x, '1') > 5)
                              : static_cast<double>(char_count(x, '1') / 3));
    auto model = laplace_fit_full(d, cfg, lik);
    REQUIRE(model.laplace.converged);
    Eigen::MatrixXd k = testutil::naive_gram(d.inputs, d.inputs, cfg);
    Eigen::VectorXd oracle = testutil::dense_laplace_mode(k, d.targets, lik);
    CHECK((model.laplace.f_hat - oracle).cwiseAbs().maxCoeff() < 1e-5);

    // gradient at the mode: d1(f_hat) - K^-1 f_hat = d1 - alpha
    Eigen::VectorXd grad(d.size());
    for (Eigen::Index i = 0; i < grad.size(); ++i)
      grad[i] = likelihood_terms(lik, d.targets[static_cast<std::size_t>(i)],
                                 model.laplace.f_hat[i])
                    .d1 -
                model.laplace.alpha[i];
    CHECK(grad.lpNorm<Eigen::Infinity>() < 1e-6);

    // evidence never exceeds the data fit at the mode
    double logp = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      logp += likelihood_terms(lik, d.targets[i],
                               model.laplace.f_hat[static_cast<Eigen::Index>(i)])
                  .logp;
    CHECK(model.laplace.log_evidence <= logp + 1e-10);
  }
}

TEST_CASE("balanced Bernoulli on a near-constant kernel has mode near zero") {
  Dataset d;
  d.alphabet = Alphabet::binary();
  // identical strings give K = c 11^T; jitter supplies the epsilon
  Sequence x{"01010101"};
  d.inputs = {x, x, x, x};
  d.targets = {1.0, 0.0, 1.0, 0.0};
  auto model = laplace_fit_full(d, KernelConfig{2}, Likelihood::bernoulli());
  CHECK(model.laplace.f_hat.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("predict_latent_full matches a dense oracle on a small Poisson problem") {
  Rng rng(27);
  Alphabet bin = Alphabet::binary();
  KernelConfig cfg{2};
  Dataset d;
  d.alphabet = bin;
  d.inputs = random_sequences(rng, bin, 5, 8);
  d.targets = {0.0, 2.0, 1.0, 3.0, 1.0};
  auto model = laplace_fit_full(d, cfg, Likelihood::poisson());
  auto test = random_sequences(rng, bin, 6, 8);
  auto post = predict_latent_full(model, test);

  Eigen::MatrixXd k = testutil::naive_gram(d.inputs, d.inputs, cfg);
  Eigen::VectorXd f = testutil::dense_laplace_mode(k, d.targets, Likelihood::poisson());
  Eigen::VectorXd d1(5), w(5);
  for (Eigen::Index i = 0; i < 5; ++i) {
    auto t = likelihood_terms(Likelihood::poisson(),
                              d.targets[static_cast<std::size_t>(i)], f[i]);
    d1[i] = t.d1;
    w[i] = -t.d2;
  }
  Eigen::MatrixXd ksx = testutil::naive_gram(test, d.inputs, cfg);
  Eigen::MatrixXd kwinv = k + Eigen::MatrixXd(w.cwiseInverse().asDiagonal());
  Eigen::MatrixXd kwi = kwinv.inverse();
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto idx = static_cast<Eigen::Index>(i);
    double mean = ksx.row(idx).dot(d1);
    double var = kernel_naive(test[i], test[i], cfg) -
                 ksx.row(idx) * kwi * ksx.row(idx).transpose();
    CHECK(std::abs(post.mean[idx] - mean) < 1e-6);
    CHECK(std::abs(post.var[idx] - var) < 1e-6);
    CHECK(post.var[idx] <=
          kernel_naive(test[i], test[i], cfg) + 1e-10);
  }
}

TEST_CASE("class_probability quadrature") {
  GaussianPosterior post;
  post.mean = Eigen::Vector3d(0.0, 1.5, 1.0);
  post.var = Eigen::Vector3d(0.0, 0.0, 4.0);
  Eigen::VectorXd p = class_probability(post);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(sigmoid(1.5)).epsilon(1e-10));

  // Monte Carlo oracle for mean 1, var 4
  Rng rng(28);
  std::normal_distribution<double> f(1.0, 2.0);
  const int n = 1000000;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    double s = sigmoid(f(rng));
    acc += s;
    acc2 += s * s;
  }
  double mc = acc / n;
  double se = std::sqrt((acc2 / n - mc * mc) / n);
  CHECK(std::abs(p[2] - mc) < 3 * se);

  // monotone in the mean at fixed variance, bounded in (0,1)
  GaussianPosterior chain;
  chain.mean = Eigen::VectorXd::LinSpaced(9, -4.0, 4.0);
  chain.var = Eigen::VectorXd::Constant(9, 2.0);
  Eigen::VectorXd q = class_probability(chain);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    CHECK(q[i] > 0);
    CHECK(q[i] < 1);
    if (i > 0)
      CHECK(q[i] > q[i - 1]);
  }
}

TEST_CASE("poisson_rate_estimate is the log-normal mean") {
  GaussianPosterior post;
  post.mean = Eigen::Vector2d(0.0, 1.2);
  post.var = Eigen::Vector2d(0.0, 0.5);
  Eigen::VectorXd r = poisson_rate_estimate(post);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(std::exp(1.2 + 0.25)));
}

TEST_CASE("gauss_hermite_32 integrates polynomials exactly") {
  // E[t^2] = var for t ~ N(0, var); exact for any polynomial degree < 64
  double m2 = gaussian_expectation(0.0, 3.0, [](double t) { return t * t; });
  CHECK(m2 == doctest::Approx(3.0).epsilon(1e-10));
  double m4 = gaussian_expectation(0.0, 1.0, [](double t) { return t * t * t * t; });
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-10));
  double c = gaussian_expectation(2.0, 5.0, [](double) { return 1.0; });
  CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chol_with_jitter escalates and eventually throws") {
  Eigen::MatrixXd ok = Eigen::MatrixXd::Identity(3, 3);
  CHECK_NOTHROW(chol_with_jitter(ok));
  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
  CHECK_NOTHROW(chol_with_jitter(singular, 1e-8));
  Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(chol_with_jitter(bad, 1e-8), CholeskyFailure);
}
