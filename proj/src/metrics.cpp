#include "stringgp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace stringgp {

double mse(const Eigen::VectorXd &pred, const Eigen::VectorXd &truth) {
  if (pred.size() != truth.size() || pred.size() == 0)
    throw LengthMismatch("mse needs equal non-empty vectors");
  return (pred - truth).squaredNorm() / static_cast<double>(pred.size());
}

double auprc(const Eigen::VectorXd &scores, const std::vector<int> &labels) {
  if (static_cast<std::size_t>(scores.size()) != labels.size())
    throw LengthMismatch("auprc needs matching scores and labels");
  const double total_pos =
      static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  if (total_pos == 0.0)
    throw NoPositives("auprc undefined without positive labels");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] > scores[static_cast<Eigen::Index>(b)];
  });

  double area = 0.0;
  double tp = 0.0, fp = 0.0, prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Group ties: one PR point per distinct score.
    const double s = scores[static_cast<Eigen::Index>(order[i])];
    while (i < order.size() && scores[static_cast<Eigen::Index>(order[i])] == s) {
      if (labels[order[i]] == 1)
        tp += 1.0;
      else
        fp += 1.0;
      ++i;
    }
    const double recall = tp / total_pos;
    const double precision = tp / (tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

CalibrationCurve calibration(const Eigen::VectorXd &probs,
                             const std::vector<int> &labels, std::size_t bins) {
  if (static_cast<std::size_t>(probs.size()) != labels.size())
    throw LengthMismatch("calibration needs matching probabilities and labels");
  CalibrationCurve curve;
  curve.bin_lo.resize(bins);
  curve.bin_hi.resize(bins);
  curve.mean_predicted.assign(bins, 0.0);
  curve.fraction_positive.assign(bins, 0.0);
  curve.counts.assign(bins, 0);
  for (std::size_t b = 0; b < bins; ++b) {
    curve.bin_lo[b] = static_cast<double>(b) / static_cast<double>(bins);
    curve.bin_hi[b] = static_cast<double>(b + 1) / static_cast<double>(bins);
  }
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("probability outside [0, 1]");
    auto b = std::min(bins - 1,
                      static_cast<std::size_t>(p * static_cast<double>(bins)));
    curve.mean_predicted[b] += p;
    curve.fraction_positive[b] += labels[static_cast<std::size_t>(i)];
    curve.counts[b] += 1;
  }
  for (std::size_t b = 0; b < bins; ++b)
    if (curve.counts[b] > 0) {
      curve.mean_predicted[b] /= static_cast<double>(curve.counts[b]);
      curve.fraction_positive[b] /= static_cast<double>(curve.counts[b]);
    }
  return curve;
}

double calibration_ad(const CalibrationCurve &curve) {
  double sum = 0.0;
  std::size_t nonempty = 0;
  for (std::size_t b = 0; b < curve.bins(); ++b)
    if (curve.counts[b] > 0) {
      sum += std::abs(curve.fraction_positive[b] - curve.mean_predicted[b]);
      ++nonempty;
    }
  if (nonempty == 0)
    throw AllBinsEmpty("calibration AD over an empty curve");
  return sum / static_cast<double>(nonempty);
}

double test_log_likelihood(const GaussianPosterior &post, const Likelihood &lik,
                           const std::vector<double> &truth) {
  if (static_cast<std::size_t>(post.mean.size()) != truth.size())
    throw LengthMismatch("posterior and targets differ in length");
  double total = 0.0;
  switch (lik.kind) {
  case Likelihood::Kind::Gaussian:
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      const double v = std::max(0.0, post.var[j]) + lik.noise_variance;
      const double r = truth[i] - post.mean[j];
      total += -0.5 * r * r / v - 0.5 * std::log(2.0 * M_PI * v);
    }
    break;
  case Likelihood::Kind::Bernoulli: {
    Eigen::VectorXd p = class_probability(post);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      const double pi = std::clamp(p[j], 1e-12, 1.0 - 1e-12);
      total += truth[i] > 0.5 ? std::log(pi) : std::log(1.0 - pi);
    }
    break;
  }
  case Likelihood::Kind::Poisson:
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      const double y = truth[i];
      const double mix = gaussian_expectation(
          post.mean[j], std::max(0.0, post.var[j]), [y](double f) {
            return std::exp(y * f - std::exp(f) - std::lgamma(y + 1.0));
          });
      total += std::log(std::max(mix, 1e-300));
    }
    break;
  }
  return total;
}

std::vector<std::size_t> ones_histogram(const InducingSet &z, char c) {
  if (z.size() == 0)
    return {};
  const std::size_t len = z.points.front().length();
  for (const auto &p : z.points)
    if (p.length() != len)
      throw UnequalLengths("ones_histogram needs equal-length strings");
  std::vector<std::size_t> hist(len + 1, 0);
  for (const auto &p : z.points)
    hist[char_count(p, c)] += 1;
  return hist;
}

void write_report_header(std::ostream &out) {
  out << "mse,auprc,test_log_likelihood,calibration_ad,selection_s,fit_s,predict_s\n";
}

void write_report_row(const EvalReport &r, std::ostream &out) {
  out << r.mse << ',' << r.auprc << ',' << r.test_log_likelihood << ','
      << r.calibration_ad << ',' << r.selection_seconds << ',' << r.fit_seconds
      << ',' << r.predict_seconds << "\n";
}

void write_calibration_csv(const CalibrationCurve &curve, std::ostream &out) {
  out << "bin_lo,bin_hi,mean_pred,frac_pos,count\n";
  for (std::size_t b = 0; b < curve.bins(); ++b)
    out << curve.bin_lo[b] << ',' << curve.bin_hi[b] << ','
        << curve.mean_predicted[b] << ',' << curve.fraction_positive[b] << ','
        << curve.counts[b] << "\n";
}

} // namespace stringgp
