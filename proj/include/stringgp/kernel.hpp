#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "stringgp/domain.hpp"

namespace stringgp {

struct OrderMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSquare : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KernelConfig {
  int order = 3; // n-gram length of the spectrum kernel
  bool normalized = false;
};

/// Sparse n-gram count vector. Zero counts are omitted.
struct SpectrumFeatures {
  std::unordered_map<std::string, double> counts;
  int order = 0;
  double squared_norm = 0.0; // <phi, phi>, cached for normalization
};

using GramMatrix = Eigen::MatrixXd;

SpectrumFeatures features(const Sequence &x, const KernelConfig &cfg);

/// Double-sum form: counts matching length-k window pairs directly.
/// Quadratic in the string lengths; kept as the reference implementation.
double kernel_naive(const Sequence &x, const Sequence &x2, const KernelConfig &cfg);

/// Sparse dot product of two feature maps. Iterates the smaller map.
double kernel_fast(const SpectrumFeatures &f1, const SpectrumFeatures &f2);

double kernel_value(const SpectrumFeatures &f1, const SpectrumFeatures &f2,
                    const KernelConfig &cfg);

/// Memoizes feature maps per sequence. Selection loops evaluate kernels
/// on the same strings thousands of times.
class FeatureCache {
public:
  explicit FeatureCache(const KernelConfig &cfg) : cfg_(cfg) {}

  const SpectrumFeatures &get(const Sequence &x);
  const KernelConfig &config() const { return cfg_; }

private:
  KernelConfig cfg_;
  std::unordered_map<std::string, SpectrumFeatures> cache_;
};

/// Dense kernel matrix. The square symmetric case (rows == cols) computes
/// only the upper triangle. Cells are independent and parallelized; every
/// cell is computed exactly once so results do not depend on thread count.
GramMatrix gram(const std::vector<Sequence> &rows, const std::vector<Sequence> &cols,
                FeatureCache &cache);
GramMatrix gram(const std::vector<Sequence> &rows, const std::vector<Sequence> &cols,
                const KernelConfig &cfg);

/// Single-threaded reference used by tests and the gram benchmark.
GramMatrix gram_serial(const std::vector<Sequence> &rows,
                       const std::vector<Sequence> &cols, const KernelConfig &cfg);

GramMatrix add_jitter(const GramMatrix &g, double eps);

/// Default jitter level: 1e-6 x mean diagonal.
double default_jitter(const GramMatrix &g);

void write_gram_csv(const GramMatrix &g, std::ostream &out);

} // namespace stringgp
