#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "stringgp/gp.hpp"
#include "stringgp/sparse_gp.hpp"

namespace stringgp {

struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoPositives : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AllBinsEmpty : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnequalLengths : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double mse(const Eigen::VectorXd &pred, const Eigen::VectorXd &truth);

/// Area under the precision-recall curve with step-wise interpolation;
/// tied scores are grouped into one threshold.
double auprc(const Eigen::VectorXd &scores, const std::vector<int> &labels);

struct CalibrationCurve {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<double> mean_predicted;
  std::vector<double> fraction_positive;
  std::vector<std::size_t> counts;

  std::size_t bins() const { return counts.size(); }
};

CalibrationCurve calibration(const Eigen::VectorXd &probs,
                             const std::vector<int> &labels, std::size_t bins = 10);

/// Mean over non-empty bins of |empirical fraction - mean predicted|.
double calibration_ad(const CalibrationCurve &curve);

double test_log_likelihood(const GaussianPosterior &post, const Likelihood &lik,
                           const std::vector<double> &truth);

/// Histogram of char_count over equal-length inducing strings.
std::vector<std::size_t> ones_histogram(const InducingSet &z, char c);

struct EvalReport {
  double mse = 0.0;
  double auprc = 0.0;
  double test_log_likelihood = 0.0;
  double calibration_ad = 0.0;
  double selection_seconds = 0.0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

void write_report_header(std::ostream &out);
void write_report_row(const EvalReport &report, std::ostream &out);
void write_calibration_csv(const CalibrationCurve &curve, std::ostream &out);

} // namespace stringgp
