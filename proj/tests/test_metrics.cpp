#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "stringgp/metrics.hpp"
#include "test_util.hpp"

using namespace stringgp;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v)
    out[i++] = x;
  return out;
}

// Brute force: precision/recall at every distinct threshold, step-wise area.
double auprc_oracle(const Eigen::VectorXd &scores, const std::vector<int> &labels) {
  std::vector<double> thresholds(scores.data(), scores.data() + scores.size());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  double positives = 0;
  for (int l : labels)
    positives += l;
  double area = 0, prev_recall = 0;
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
      if (scores[i] >= t) {
        if (labels[static_cast<std::size_t>(i)] == 1)
          ++tp;
        else
          ++fp;
      }
    }
    double precision = tp / (tp + fp);
    double recall = tp / positives;
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

} // namespace

TEST_CASE("mse") {
  CHECK(mse(vec({1, 2}), vec({1, 2})) == doctest::Approx(0));
  CHECK(mse(vec({0, 0}), vec({1, 3})) == doctest::Approx(5));
  CHECK_THROWS_AS(mse(vec({1}), vec({1, 2})), LengthMismatch);

  Rng rng(61);
  std::normal_distribution<double> n(0, 2);
  Eigen::VectorXd a(40), b(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    a[i] = n(rng);
    b[i] = n(rng);
  }
  double manual = 0;
  for (Eigen::Index i = 0; i < 40; ++i)
    manual += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(mse(a, b) == doctest::Approx(manual / 40));
}

TEST_CASE("auprc hand cases") {
  // perfect separation
  CHECK(auprc(vec({0.9, 0.8, 0.2, 0.1}), {1, 1, 0, 0}) == doctest::Approx(1.0));
  // all scores tied: one PR point at precision = positive rate
  CHECK(auprc(vec({0.5, 0.5, 0.5, 0.5}), {1, 0, 0, 0}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(auprc(vec({0.1, 0.2}), {0, 0}), NoPositives);
}

TEST_CASE("auprc matches exhaustive threshold enumeration") {
  Eigen::VectorXd scores = vec({0.9, 0.7, 0.7, 0.4, 0.3, 0.1});
  std::vector<int> labels{1, 0, 1, 1, 0, 0};
  CHECK(auprc(scores, labels) == doctest::Approx(auprc_oracle(scores, labels)));

  Rng rng(62);
  std::uniform_real_distribution<double> u(0, 1);
  std::bernoulli_distribution flip(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd s(20);
    std::vector<int> l(20);
    bool any = false;
    for (int i = 0; i < 20; ++i) {
      s[i] = std::round(u(rng) * 10) / 10.0; // coarse grid forces ties
      l[static_cast<std::size_t>(i)] = flip(rng) ? 1 : 0;
      any |= l[static_cast<std::size_t>(i)] == 1;
    }
    if (!any)
      l[0] = 1;
    CHECK(auprc(s, l) == doctest::Approx(auprc_oracle(s, l)).epsilon(1e-12));
  }
}

TEST_CASE("auprc is invariant under strictly monotone score transforms") {
  Rng rng(63);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::VectorXd s(30);
  std::vector<int> l(30);
  for (int i = 0; i < 30; ++i) {
    s[i] = u(rng);
    l[static_cast<std::size_t>(i)] = i % 3 == 0 ? 1 : 0;
  }
  double base = auprc(s, l);
  Eigen::VectorXd exp_s = s.array().exp();
  Eigen::VectorXd aff_s = 3.0 * s.array() - 7.0;
  CHECK(auprc(exp_s, l) == doctest::Approx(base).epsilon(1e-12));
  CHECK(auprc(aff_s, l) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("auprc is invariant to simultaneous permutation") {
  Eigen::VectorXd s = vec({0.9, 0.1, 0.5, 0.7, 0.3});
  std::vector<int> l{1, 0, 1, 0, 0};
  Eigen::VectorXd sp = vec({0.3, 0.7, 0.5, 0.1, 0.9});
  std::vector<int> lp{0, 0, 1, 0, 1};
  CHECK(auprc(s, l) == doctest::Approx(auprc(sp, lp)));
}

TEST_CASE("calibration binning") {
  SUBCASE("single occupied bin at (0.5, 0.5)") {
    Eigen::VectorXd p = vec({0.5, 0.5, 0.5, 0.5});
    auto curve = calibration(p, {1, 0, 1, 0});
    REQUIRE(curve.bins() == 10);
    std::size_t total = 0;
    for (std::size_t b = 0; b < 10; ++b)
      total += curve.counts[b];
    CHECK(total == 4);
    CHECK(curve.counts[5] == 4);
    CHECK(curve.mean_predicted[5] == doctest::Approx(0.5));
    CHECK(curve.fraction_positive[5] == doctest::Approx(0.5));
  }
  SUBCASE("perfect confidence and correctness gives AD 0") {
    Eigen::VectorXd p = vec({0.0, 0.0, 1.0, 1.0});
    auto curve = calibration(p, {0, 0, 1, 1});
    CHECK(curve.counts[0] == 2);
    CHECK(curve.counts[9] == 2); // p = 1 goes to the last bin
    CHECK(calibration_ad(curve) == doctest::Approx(0.0));
  }
  SUBCASE("known bin means") {
    Eigen::VectorXd p = vec({0.05, 0.15, 0.15, 0.82});
    auto curve = calibration(p, {0, 1, 0, 1});
    CHECK(curve.counts[0] == 1);
    CHECK(curve.counts[1] == 2);
    CHECK(curve.counts[8] == 1);
    CHECK(curve.mean_predicted[1] == doctest::Approx(0.15));
    CHECK(curve.fraction_positive[1] == doctest::Approx(0.5));
    CHECK(curve.bin_lo[1] == doctest::Approx(0.1));
    CHECK(curve.bin_hi[1] == doctest::Approx(0.2));
  }
}

TEST_CASE("calibration_ad") {
  SUBCASE("single miscalibrated bin") {
    Eigen::VectorXd p = vec({0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2});
    std::vector<int> l{1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
    auto curve = calibration(p, l);
    CHECK(calibration_ad(curve) == doctest::Approx(0.5));
  }
  SUBCASE("multi-bin hand case") {
    Eigen::VectorXd p = vec({0.1, 0.1, 0.9, 0.9});
    std::vector<int> l{0, 1, 1, 1};
    // bin 1: mean 0.1, frac 0.5 -> |0.4|; bin 9: mean 0.9, frac 1 -> 0.1
    auto curve = calibration(p, l);
    CHECK(calibration_ad(curve) == doctest::Approx(0.25));
  }
  SUBCASE("empty curve throws") {
    CalibrationCurve empty;
    empty.counts.assign(10, 0);
    empty.bin_lo.assign(10, 0);
    empty.bin_hi.assign(10, 0);
    empty.mean_predicted.assign(10, 0);
    empty.fraction_positive.assign(10, 0);
    CHECK_THROWS_AS(calibration_ad(empty), AllBinsEmpty);
  }
}

TEST_CASE("test_log_likelihood Gaussian density-one case") {
  GaussianPosterior post;
  post.mean = vec({1.3, -0.2});
  post.var = Eigen::VectorXd::Constant(2, 1.0 / (2 * M_PI) - 0.05);
  auto lik = Likelihood::gaussian(0.05); // var + noise = 1/(2 pi)
  CHECK(test_log_likelihood(post, lik, {1.3, -0.2}) == doctest::Approx(0.0));
}

TEST_CASE("test_log_likelihood Bernoulli at p = 0.5 is -ln 2 per point") {
  GaussianPosterior post;
  post.mean = vec({0.0, 0.0, 0.0});
  post.var = vec({0.0, 0.0, 0.0});
  double ll = test_log_likelihood(post, Likelihood::bernoulli(), {1.0, 0.0, 1.0});
  CHECK(ll == doctest::Approx(-3 * std::log(2.0)));
}

TEST_CASE("test_log_likelihood Poisson matches a Monte Carlo oracle") {
  GaussianPosterior post;
  post.mean = vec({0.5});
  post.var = vec({0.3});
  double y = 2.0;
  double got = test_log_likelihood(post, Likelihood::poisson(), {y});

  Rng rng(64);
  std::normal_distribution<double> f(0.5, std::sqrt(0.3));
  const int n = 1000000;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    double lam = std::exp(f(rng));
    double p = std::exp(y * std::log(lam) - lam - std::lgamma(y + 1));
    acc += p;
    acc2 += p * p;
  }
  double mean = acc / n;
  double se = std::sqrt((acc2 / n - mean * mean) / n);
  // compare on the probability scale where the SE is meaningful
  CHECK(std::abs(std::exp(got) - mean) < 3 * se);
}

TEST_CASE("ones_histogram") {
  InducingSet a{{Sequence{"0000000000"}}};
  auto h = ones_histogram(a, '1');
  REQUIRE(h.size() == 11);
  CHECK(h[0] == 1);

  InducingSet b{{Sequence{"1111100000"}, Sequence{"0000011111"}}};
  auto h2 = ones_histogram(b, '1');
  CHECK(h2[5] == 2);

  InducingSet bad{{Sequence{"111"}, Sequence{"11"}}};
  CHECK_THROWS_AS(ones_histogram(bad, '1'), UnequalLengths);
}

TEST_CASE("report and calibration csv layout") {
  std::ostringstream out;
  write_report_header(out);
  EvalReport r;
  r.mse = 0.5;
  r.auprc = 0.9;
  write_report_row(r, out);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header.find("mse") != std::string::npos);
  CHECK(row.find("0.5") != std::string::npos);

  Eigen::VectorXd p = vec({0.1, 0.9});
  auto curve = calibration(p, {0, 1});
  std::ostringstream cal;
  write_calibration_csv(curve, cal);
  std::istringstream cin(cal.str());
  std::string chead;
  std::getline(cin, chead);
  CHECK(chead == "bin_lo,bin_hi,mean_pred,frac_pos,count");
}
