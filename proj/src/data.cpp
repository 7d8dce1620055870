#include "stringgp/data.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace stringgp {

SplitSpec SplitSpec::fraction(double f, std::uint64_t seed) {
  if (f <= 0.0 || f >= 1.0)
    throw InvalidSpec("train fraction must be in (0, 1)");
  SplitSpec s;
  s.kind = Kind::Fraction;
  s.train_fraction = f;
  s.seed = seed;
  return s;
}

SplitSpec SplitSpec::kfold(std::size_t folds, std::uint64_t seed) {
  if (folds < 2)
    throw InvalidSpec("k-fold needs at least 2 folds");
  SplitSpec s;
  s.kind = Kind::KFold;
  s.folds = folds;
  s.seed = seed;
  return s;
}

SplitSpec SplitSpec::fixed(std::size_t train_n, std::size_t test_n,
                           std::uint64_t seed) {
  SplitSpec s;
  s.kind = Kind::Fixed;
  s.train_n = train_n;
  s.test_n = test_n;
  s.seed = seed;
  return s;
}

BinaryToyData gen_binary_toy(std::size_t n, std::size_t length, std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument("need at least one string");
  Rng rng(seed);
  Alphabet alphabet = Alphabet::binary();

  const bool can_dedup = length < 63 && n <= (std::size_t{1} << std::min<std::size_t>(length, 62));
  std::unordered_set<std::string> seen;
  std::vector<Sequence> inputs;
  inputs.reserve(n);
  std::uniform_int_distribution<int> bit(0, 1);
  while (inputs.size() < n) {
    std::string s(length, '0');
    for (auto &c : s)
      c = bit(rng) ? '1' : '0';
    if (can_dedup && !seen.insert(s).second)
      continue;
    inputs.push_back(Sequence{std::move(s)});
  }

  BinaryToyData out{{inputs, {}, alphabet}, {inputs, {}, alphabet}};
  for (const auto &x : inputs) {
    const auto ones = static_cast<double>(char_count(x, '1'));
    out.regression.targets.push_back(ones);
    out.classification.targets.push_back(
        ones > static_cast<double>(length) / 2.0 ? 1.0 : 0.0);
  }
  return out;
}

PoissonToyData gen_poisson_tf(std::size_t n, std::size_t length, double lambda0,
                              std::uint64_t seed) {
  if (lambda0 <= 0.0)
    throw std::invalid_argument("lambda0 must be positive");
  Rng rng(seed);
  Alphabet alphabet("AT");

  PoissonToyData out{{{}, {}, alphabet}, {}};
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::string s(length, 'A');
    for (auto &c : s)
      c = coin(rng) ? 'A' : 'T';
    Sequence seq{std::move(s)};
    const double rate = lambda0 * static_cast<double>(char_count(seq, 'A'));
    out.rates.push_back(rate);
    double count = 0.0;
    if (rate > 0.0) {
      std::poisson_distribution<long> pois(rate);
      count = static_cast<double>(pois(rng));
    }
    out.counts.inputs.push_back(std::move(seq));
    out.counts.targets.push_back(count);
  }
  return out;
}

namespace {

std::string strip(const std::string &s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  auto begin = std::find_if_not(s.begin(), s.end(), is_space);
  auto end = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
  return begin < end ? std::string(begin, end) : std::string();
}

std::string strip_all_whitespace(const std::string &s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out.push_back(c);
  return out;
}

std::vector<std::string> split_fields(const std::string &line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

Dataset parse_uci(std::istream &in, std::size_t expected_length,
                  const Alphabet &alphabet,
                  double (*label_of)(const std::string &, std::size_t)) {
  Dataset data{{}, {}, alphabet};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (strip(line).empty())
      continue;
    auto fields = split_fields(line);
    if (fields.size() != 3)
      throw MalformedLine(lineno, "expected 3 comma-separated fields, got " +
                                      std::to_string(fields.size()));
    const std::string cls = strip(fields[0]);
    const std::string name = strip(fields[1]);
    std::string seq = strip_all_whitespace(fields[2]);
    if (cls.empty() || name.empty() || seq.empty())
      throw MalformedLine(lineno, "empty field");
    std::transform(seq.begin(), seq.end(), seq.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (seq.size() != expected_length)
      throw UnexpectedLength(lineno, seq.size(), expected_length);
    data.inputs.push_back(validate(seq, alphabet));
    data.targets.push_back(label_of(cls, lineno));
  }
  if (data.inputs.empty())
    throw EmptyDataset("no records");
  return data;
}

} // namespace

Dataset parse_promoters(std::istream &in) {
  return parse_uci(in, 57, Alphabet::dna(), [](const std::string &cls, std::size_t lineno) {
    if (cls == "+")
      return 1.0;
    if (cls == "-")
      return 0.0;
    throw MalformedLine(lineno, "unknown promoter class '" + cls + "'");
  });
}

Dataset parse_splice(std::istream &in) {
  // DNA plus the ambiguity codes present in the UCI splice file.
  static const Alphabet splice_alphabet("ACGTDNSR");
  return parse_uci(in, 60, splice_alphabet,
                   [](const std::string &cls, std::size_t lineno) {
                     if (cls == "EI" || cls == "IE")
                       return 1.0; // splice site
                     if (cls == "N")
                       return 0.0;
                     throw MalformedLine(lineno, "unknown splice class '" + cls + "'");
                   });
}

static Dataset parse_file(const std::string &path, Dataset (*parser)(std::istream &)) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return parser(in);
}

Dataset parse_promoters_file(const std::string &path) {
  return parse_file(path, parse_promoters);
}

Dataset parse_splice_file(const std::string &path) {
  return parse_file(path, parse_splice);
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(idx[i - 1], idx[pick(rng)]);
  }
  return idx;
}

Dataset take(const Dataset &data, const std::vector<std::size_t> &idx,
             std::size_t begin, std::size_t end) {
  Dataset out{{}, {}, data.alphabet};
  for (std::size_t i = begin; i < end; ++i) {
    out.inputs.push_back(data.inputs[idx[i]]);
    out.targets.push_back(data.targets[idx[i]]);
  }
  return out;
}

} // namespace

TrainTest split(const Dataset &data, const SplitSpec &spec) {
  const std::size_t n = data.size();
  auto idx = shuffled_indices(n, spec.seed);
  switch (spec.kind) {
  case SplitSpec::Kind::Fraction: {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
      throw InvalidSpec("train fraction must be in (0, 1)");
    const auto train_n =
        static_cast<std::size_t>(spec.train_fraction * static_cast<double>(n));
    return {take(data, idx, 0, train_n), take(data, idx, train_n, n)};
  }
  case SplitSpec::Kind::Fixed: {
    if (spec.train_n + spec.test_n > n)
      throw InvalidSpec("fixed split larger than the dataset");
    return {take(data, idx, 0, spec.train_n),
            take(data, idx, spec.train_n, spec.train_n + spec.test_n)};
  }
  case SplitSpec::Kind::KFold:
    throw InvalidSpec("k-fold splits come from split_kfold");
  }
  throw std::logic_error("unreachable");
}

std::vector<TrainTest> split_kfold(const Dataset &data, const SplitSpec &spec) {
  if (spec.kind != SplitSpec::Kind::KFold)
    throw InvalidSpec("split_kfold needs a k-fold spec");
  const std::size_t n = data.size();
  if (spec.folds < 2 || spec.folds > n)
    throw InvalidSpec("invalid fold count");
  auto idx = shuffled_indices(n, spec.seed);

  // Fold sizes differ by at most one.
  std::vector<TrainTest> out;
  std::size_t start = 0;
  for (std::size_t f = 0; f < spec.folds; ++f) {
    std::size_t size = n / spec.folds + (f < n % spec.folds ? 1 : 0);
    std::size_t end = start + size;
    TrainTest tt{{{}, {}, data.alphabet}, take(data, idx, start, end)};
    for (std::size_t i = 0; i < n; ++i)
      if (i < start || i >= end) {
        tt.train.inputs.push_back(data.inputs[idx[i]]);
        tt.train.targets.push_back(data.targets[idx[i]]);
      }
    out.push_back(std::move(tt));
    start = end;
  }
  return out;
}

void write_dataset_csv(const Dataset &data, std::ostream &out) {
  out << "sequence,target\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i)
    out << data.inputs[i].chars << ',' << data.targets[i] << "\n";
}

Dataset read_dataset_csv(std::istream &in, const Alphabet &alphabet) {
  std::string line;
  if (!std::getline(in, line))
    throw EmptyDataset("empty file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != "sequence,target")
    throw MalformedLine(1, "expected header 'sequence,target'");
  Dataset data{{}, {}, alphabet};
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw MalformedLine(lineno, "missing comma");
    try {
      data.targets.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception &) {
      throw MalformedLine(lineno, "bad target value");
    }
    data.inputs.push_back(validate(line.substr(0, comma), alphabet));
  }
  return data;
}

void write_synthetic_promoters(std::ostream &out, std::uint64_t seed) {
  Rng rng(seed);
  const std::string bases = "acgt";
  const std::string motif = "ttgaca"; // planted -35-box-like signal
  std::uniform_int_distribution<std::size_t> base(0, 3);
  auto random_seq = [&](std::size_t len) {
    std::string s(len, 'a');
    for (auto &c : s)
      c = bases[base(rng)];
    return s;
  };
  for (std::size_t i = 0; i < 106; ++i) {
    const bool positive = i < 53;
    std::string seq = random_seq(57);
    if (positive) {
      std::uniform_int_distribution<std::size_t> pos(0, 57 - motif.size());
      seq.replace(pos(rng), motif.size(), motif);
    }
    out << (positive ? '+' : '-') << ',' << (positive ? 'P' : 'N')
        << (i % 53 + 1) << ",\t\t" << seq << "\n";
  }
}

void write_synthetic_splice(std::ostream &out, std::uint64_t seed) {
  Rng rng(seed);
  const std::string bases = "ACGT";
  const std::string motif = "GGTAAG"; // donor-site-like signal
  const std::string ambiguity = "DNSR";
  std::uniform_int_distribution<std::size_t> base(0, 3);
  for (std::size_t i = 0; i < 3190; ++i) {
    std::string seq(60, 'A');
    for (auto &c : seq)
      c = bases[base(rng)];
    const bool positive = i % 2 == 0;
    std::string cls = "N";
    if (positive) {
      std::uniform_int_distribution<std::size_t> pos(20, 40);
      seq.replace(pos(rng), motif.size(), motif);
      cls = i % 4 == 0 ? "EI" : "IE";
    }
    if (i % 500 == 499)
      seq[i % 60] = ambiguity[(i / 500) % ambiguity.size()];
    out << cls << ",S" << i << ',' << seq << "\n";
  }
}

} // namespace stringgp
