#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace stringgp {

using Rng = std::mt19937_64;

struct InvalidCharacter : std::runtime_error {
  std::size_t position;
  char character;
  InvalidCharacter(std::size_t pos, char c)
      : std::runtime_error("invalid character '" + std::string(1, c) +
                           "' at position " + std::to_string(pos)),
        position(pos), character(c) {}
};

struct SequenceTooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite ordered character set. The string domain is the set of all
/// finite strings over these symbols.
class Alphabet {
public:
  /// Empty "unset" alphabet; contains() is false for every character.
  Alphabet();
  explicit Alphabet(std::string symbols);

  bool contains(char c) const { return index_[static_cast<unsigned char>(c)] >= 0; }
  std::size_t size() const { return symbols_.size(); }
  const std::string &symbols() const { return symbols_; }
  char symbol(std::size_t i) const { return symbols_[i]; }

  static Alphabet binary() { return Alphabet("01"); }
  static Alphabet dna() { return Alphabet("ACGT"); }

private:
  std::string symbols_;
  int index_[256];
};

/// Immutable validated string over an alphabet.
struct Sequence {
  std::string chars;

  std::size_t length() const { return chars.size(); }
  bool operator==(const Sequence &other) const = default;
};

struct Dataset {
  std::vector<Sequence> inputs;
  std::vector<double> targets;
  Alphabet alphabet;

  std::size_t size() const { return inputs.size(); }
};

Sequence validate(const std::string &raw, const Alphabet &alphabet);

/// Replaces exactly n_chars positions (chosen uniformly without
/// replacement) by symbols drawn uniformly from the alphabet minus the
/// current character. Output length equals input length.
Sequence perturb(const Sequence &seq, const Alphabet &alphabet, std::size_t n_chars,
                 Rng &rng);

std::size_t char_count(const Sequence &seq, char c);

std::size_t hamming_distance(const Sequence &a, const Sequence &b);

} // namespace stringgp
