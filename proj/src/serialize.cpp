#include "stringgp/serialize.hpp"

#include <cstdint>
#include <istream>
#include <ostream>

namespace stringgp {

namespace {

constexpr char kMagic[4] = {'S', 'G', 'P', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream &out, std::uint32_t v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof v);
}
void put_u64(std::ostream &out, std::uint64_t v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof v);
}
void put_f64(std::ostream &out, double v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof v);
}
void put_string(std::ostream &out, const std::string &s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void put_vector(std::ostream &out, const Eigen::VectorXd &v) {
  put_u64(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char *>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}
void put_matrix(std::ostream &out, const Eigen::MatrixXd &m) {
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) // row-major on disk
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      put_f64(out, m(i, j));
}
void put_sequences(std::ostream &out, const std::vector<Sequence> &xs) {
  put_u64(out, xs.size());
  for (const auto &x : xs)
    put_string(out, x.chars);
}

std::uint32_t get_u32(std::istream &in) {
  std::uint32_t v;
  in.read(reinterpret_cast<char *>(&v), sizeof v);
  if (!in)
    throw SerializationError("truncated model file");
  return v;
}
std::uint64_t get_u64(std::istream &in) {
  std::uint64_t v;
  in.read(reinterpret_cast<char *>(&v), sizeof v);
  if (!in)
    throw SerializationError("truncated model file");
  return v;
}
double get_f64(std::istream &in) {
  double v;
  in.read(reinterpret_cast<char *>(&v), sizeof v);
  if (!in)
    throw SerializationError("truncated model file");
  return v;
}
std::string get_string(std::istream &in) {
  auto len = get_u64(in);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in)
    throw SerializationError("truncated model file");
  return s;
}
Eigen::VectorXd get_vector(std::istream &in) {
  auto len = get_u64(in);
  Eigen::VectorXd v(static_cast<Eigen::Index>(len));
  in.read(reinterpret_cast<char *>(v.data()),
          static_cast<std::streamsize>(len * sizeof(double)));
  if (!in)
    throw SerializationError("truncated model file");
  return v;
}
Eigen::MatrixXd get_matrix(std::istream &in) {
  auto rows = get_u64(in);
  auto cols = get_u64(in);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = get_f64(in);
  return m;
}
std::vector<Sequence> get_sequences(std::istream &in) {
  auto count = get_u64(in);
  std::vector<Sequence> xs;
  xs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    xs.push_back(Sequence{get_string(in)});
  return xs;
}

void put_header(std::ostream &out, std::uint32_t model_kind) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u32(out, model_kind);
}

std::uint32_t get_header(std::istream &in) {
  char magic[4];
  in.read(magic, sizeof magic);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4))
    throw SerializationError("not a model file");
  if (get_u32(in) != kVersion)
    throw SerializationError("unsupported model file version");
  return get_u32(in);
}

void put_common(std::ostream &out, const KernelConfig &kcfg, const Likelihood &lik,
                const Alphabet &alphabet) {
  put_u32(out, static_cast<std::uint32_t>(kcfg.order));
  put_u32(out, kcfg.normalized ? 1 : 0);
  put_u32(out, static_cast<std::uint32_t>(lik.kind));
  put_f64(out, lik.noise_variance);
  put_string(out, alphabet.symbols());
}

void get_common(std::istream &in, KernelConfig &kcfg, Likelihood &lik,
                Alphabet &alphabet) {
  kcfg.order = static_cast<int>(get_u32(in));
  kcfg.normalized = get_u32(in) != 0;
  lik.kind = static_cast<Likelihood::Kind>(get_u32(in));
  lik.noise_variance = get_f64(in);
  alphabet = Alphabet(get_string(in));
}

void put_laplace(std::ostream &out, const LaplaceState &s) {
  put_vector(out, s.f_hat);
  put_vector(out, s.w);
  put_vector(out, s.alpha);
  put_f64(out, s.log_evidence);
  put_u32(out, static_cast<std::uint32_t>(s.iterations));
  put_u32(out, s.converged ? 1 : 0);
}

LaplaceState get_laplace(std::istream &in) {
  LaplaceState s;
  s.f_hat = get_vector(in);
  s.w = get_vector(in);
  s.alpha = get_vector(in);
  s.log_evidence = get_f64(in);
  s.iterations = static_cast<int>(get_u32(in));
  s.converged = get_u32(in) != 0;
  return s;
}

} // namespace

void save_model(const FullGPModel &model, std::ostream &out) {
  put_header(out, 0);
  put_common(out, model.kernel_cfg, model.likelihood, model.train.alphabet);
  put_sequences(out, model.train.inputs);
  put_u64(out, model.train.targets.size());
  for (double t : model.train.targets)
    put_f64(out, t);
  put_matrix(out, model.kxx);
  put_matrix(out, model.chol);
  put_vector(out, model.alpha);
  put_matrix(out, model.laplace_chol_b);
  put_laplace(out, model.laplace);
}

FullGPModel load_full_model(std::istream &in) {
  if (get_header(in) != 0)
    throw SerializationError("not a full GP model file");
  FullGPModel model;
  Alphabet alphabet;
  get_common(in, model.kernel_cfg, model.likelihood, alphabet);
  auto inputs = get_sequences(in);
  auto n = get_u64(in);
  std::vector<double> targets;
  targets.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i)
    targets.push_back(get_f64(in));
  model.train = Dataset{std::move(inputs), std::move(targets), alphabet};
  model.kxx = get_matrix(in);
  model.chol = get_matrix(in);
  model.alpha = get_vector(in);
  model.laplace_chol_b = get_matrix(in);
  model.laplace = get_laplace(in);
  for (const auto &x : model.train.inputs)
    model.train_features.push_back(features(x, model.kernel_cfg));
  return model;
}

void save_model(const SparseGPModel &model, std::ostream &out) {
  put_header(out, 1);
  put_common(out, model.kernel_cfg, model.likelihood, model.alphabet);
  put_sequences(out, model.inducing.points);
  put_matrix(out, model.kzz_chol);
  put_vector(out, model.mu_u);
  put_matrix(out, model.a_u);
  put_matrix(out, model.gauss_chol_b);
  put_vector(out, model.gauss_beta);
  put_matrix(out, model.laplace_cov_u);
  put_laplace(out, model.laplace);
}

SparseGPModel load_sparse_model(std::istream &in) {
  if (get_header(in) != 1)
    throw SerializationError("not a sparse GP model file");
  SparseGPModel model;
  get_common(in, model.kernel_cfg, model.likelihood, model.alphabet);
  model.inducing.points = get_sequences(in);
  model.kzz_chol = get_matrix(in);
  model.mu_u = get_vector(in);
  model.a_u = get_matrix(in);
  model.gauss_chol_b = get_matrix(in);
  model.gauss_beta = get_vector(in);
  model.laplace_cov_u = get_matrix(in);
  model.laplace = get_laplace(in);
  for (const auto &p : model.inducing.points)
    model.inducing_features.push_back(features(p, model.kernel_cfg));
  return model;
}

} // namespace stringgp
