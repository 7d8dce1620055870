#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stringgp/domain.hpp"

namespace stringgp {

struct MalformedLine : std::runtime_error {
  std::size_t line;
  MalformedLine(std::size_t lineno, const std::string &what)
      : std::runtime_error("line " + std::to_string(lineno) + ": " + what),
        line(lineno) {}
};
struct UnexpectedLength : std::runtime_error {
  std::size_t line;
  UnexpectedLength(std::size_t lineno, std::size_t got, std::size_t expected)
      : std::runtime_error("line " + std::to_string(lineno) + ": sequence length " +
                           std::to_string(got) + ", expected " +
                           std::to_string(expected)),
        line(lineno) {}
};
struct EmptyDataset : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SplitSpec {
  enum class Kind { Fraction, KFold, Fixed };
  Kind kind = Kind::Fraction;
  double train_fraction = 0.6;
  std::size_t folds = 10;
  std::size_t train_n = 0;
  std::size_t test_n = 0;
  std::uint64_t seed = 0;

  static SplitSpec fraction(double f, std::uint64_t seed = 0);
  static SplitSpec kfold(std::size_t folds, std::uint64_t seed = 0);
  static SplitSpec fixed(std::size_t train_n, std::size_t test_n,
                         std::uint64_t seed = 0);
};

struct BinaryToyData {
  Dataset regression;     // target = number of ones
  Dataset classification; // label = 1 iff ones > length/2
};

/// 100-ish binary strings with counting targets; strings are distinct
/// whenever the domain is large enough.
BinaryToyData gen_binary_toy(std::size_t n, std::size_t length, std::uint64_t seed);

struct PoissonToyData {
  Dataset counts;              // Poisson-distributed targets
  std::vector<double> rates;   // the true rates lambda(x)
};

/// {A,T} strings; rate lambda0 * (number of A's); counts ~ Poisson(rate).
PoissonToyData gen_poisson_tf(std::size_t n, std::size_t length, double lambda0,
                              std::uint64_t seed);

/// UCI promoters format: "<class>,<name>,<sequence>", class in {+,-},
/// lowercase acgt with embedded whitespace. Labels: '+' -> 1.
Dataset parse_promoters(std::istream &in);
Dataset parse_promoters_file(const std::string &path);

/// UCI splice format: class in {EI, IE, N}; EI/IE -> 1, N -> 0.
/// Ambiguity codes (D, N, S, R) are kept as extra alphabet symbols.
Dataset parse_splice(std::istream &in);
Dataset parse_splice_file(const std::string &path);

struct TrainTest {
  Dataset train;
  Dataset test;
};

TrainTest split(const Dataset &data, const SplitSpec &spec);
std::vector<TrainTest> split_kfold(const Dataset &data, const SplitSpec &spec);

void write_dataset_csv(const Dataset &data, std::ostream &out);
Dataset read_dataset_csv(std::istream &in, const Alphabet &alphabet);

/// Deterministic fixtures in the UCI file layouts, used where the real
/// downloads are unavailable. Promoters: 106 records (53 positive) of 57
/// lowercase nucleotides with a planted positive-class motif. Splice:
/// 3190 records of 60 nucleotides; roughly half carry a planted donor-like
/// motif and an EI/IE class, the rest are class N; a few records carry
/// ambiguity codes.
void write_synthetic_promoters(std::ostream &out, std::uint64_t seed);
void write_synthetic_splice(std::ostream &out, std::uint64_t seed);

} // namespace stringgp
