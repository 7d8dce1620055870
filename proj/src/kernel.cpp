#include "stringgp/kernel.hpp"

#include <cmath>
#include <ostream>

namespace stringgp {

SpectrumFeatures features(const Sequence &x, const KernelConfig &cfg) {
  SpectrumFeatures f;
  f.order = cfg.order;
  const auto k = static_cast<std::size_t>(cfg.order);
  if (x.length() >= k) {
    f.counts.reserve(x.length() - k + 1);
    for (std::size_t i = 0; i + k <= x.length(); ++i)
      f.counts[x.chars.substr(i, k)] += 1.0;
  }
  for (const auto &[ngram, c] : f.counts)
    f.squared_norm += c * c;
  return f;
}

double kernel_naive(const Sequence &x, const Sequence &x2, const KernelConfig &cfg) {
  const auto k = static_cast<std::size_t>(cfg.order);
  if (x.length() < k || x2.length() < k)
    return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + k <= x.length(); ++i)
    for (std::size_t j = 0; j + k <= x2.length(); ++j)
      if (x.chars.compare(i, k, x2.chars, j, k) == 0)
        sum += 1.0;
  return sum;
}

double kernel_fast(const SpectrumFeatures &f1, const SpectrumFeatures &f2) {
  if (f1.order != f2.order)
    throw OrderMismatch("feature maps of order " + std::to_string(f1.order) +
                        " and " + std::to_string(f2.order));
  const auto &small = f1.counts.size() <= f2.counts.size() ? f1 : f2;
  const auto &large = f1.counts.size() <= f2.counts.size() ? f2 : f1;
  double sum = 0.0;
  for (const auto &[ngram, c] : small.counts) {
    auto it = large.counts.find(ngram);
    if (it != large.counts.end())
      sum += c * it->second;
  }
  return sum;
}

double kernel_value(const SpectrumFeatures &f1, const SpectrumFeatures &f2,
                    const KernelConfig &cfg) {
  double v = kernel_fast(f1, f2);
  if (cfg.normalized) {
    double denom = std::sqrt(f1.squared_norm * f2.squared_norm);
    return denom > 0.0 ? v / denom : 0.0;
  }
  return v;
}

const SpectrumFeatures &FeatureCache::get(const Sequence &x) {
  auto it = cache_.find(x.chars);
  if (it != cache_.end())
    return it->second;
  return cache_.emplace(x.chars, features(x, cfg_)).first->second;
}

GramMatrix gram(const std::vector<Sequence> &rows, const std::vector<Sequence> &cols,
                FeatureCache &cache) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(cols.size());
  GramMatrix g(n, m);

  // Populate the cache single-threaded; concurrent reads afterwards.
  std::vector<const SpectrumFeatures *> rf(rows.size()), cf(cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    rf[i] = &cache.get(rows[i]);
  for (std::size_t j = 0; j < cols.size(); ++j)
    cf[j] = &cache.get(cols[j]);

  const bool symmetric = rows.size() == cols.size() && rows == cols;
  const KernelConfig cfg = cache.config();
  if (symmetric) {
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        double v = kernel_value(*rf[i], *cf[j], cfg);
        g(i, j) = v;
        g(j, i) = v;
      }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        g(i, j) = kernel_value(*rf[i], *cf[j], cfg);
  }
  return g;
}

GramMatrix gram(const std::vector<Sequence> &rows, const std::vector<Sequence> &cols,
                const KernelConfig &cfg) {
  FeatureCache cache(cfg);
  return gram(rows, cols, cache);
}

GramMatrix gram_serial(const std::vector<Sequence> &rows,
                       const std::vector<Sequence> &cols, const KernelConfig &cfg) {
  FeatureCache cache(cfg);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(cols.size());
  GramMatrix g(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      g(i, j) = kernel_value(cache.get(rows[i]), cache.get(cols[j]), cfg);
  return g;
}

GramMatrix add_jitter(const GramMatrix &g, double eps) {
  if (g.rows() != g.cols())
    throw NotSquare("jitter requires a square matrix");
  GramMatrix out = g;
  out.diagonal().array() += eps;
  return out;
}

double default_jitter(const GramMatrix &g) {
  if (g.rows() == 0)
    return 0.0;
  return 1e-6 * g.diagonal().mean();
}

void write_gram_csv(const GramMatrix &g, std::ostream &out) {
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    out << (j ? "," : "") << j;
  out << "\n";
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      out << (j ? "," : "") << g(i, j);
    out << "\n";
  }
}

} // namespace stringgp
