#include "stringgp/domain.hpp"

#include <algorithm>
#include <numeric>

namespace stringgp {

Alphabet::Alphabet() { std::fill(std::begin(index_), std::end(index_), -1); }

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2)
    throw std::invalid_argument("alphabet needs at least 2 symbols");
  std::fill(std::begin(index_), std::end(index_), -1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto u = static_cast<unsigned char>(symbols_[i]);
    if (index_[u] >= 0)
      throw std::invalid_argument("duplicate alphabet symbol");
    index_[u] = static_cast<int>(i);
  }
}

Sequence validate(const std::string &raw, const Alphabet &alphabet) {
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!alphabet.contains(raw[i]))
      throw InvalidCharacter(i, raw[i]);
  return Sequence{raw};
}

Sequence perturb(const Sequence &seq, const Alphabet &alphabet, std::size_t n_chars,
                 Rng &rng) {
  if (n_chars < 1 || seq.length() < n_chars)
    throw SequenceTooShort("sequence of length " + std::to_string(seq.length()) +
                           " cannot change " + std::to_string(n_chars) + " chars");

  // Partial Fisher-Yates over position indices.
  std::vector<std::size_t> positions(seq.length());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::string out = seq.chars;
  for (std::size_t i = 0; i < n_chars; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, positions.size() - 1);
    std::swap(positions[i], positions[pick(rng)]);
    std::size_t pos = positions[i];

    // Draw from the alphabet minus the current character.
    std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 2);
    char current = out[pos];
    std::size_t j = sym(rng);
    char replacement = alphabet.symbol(j);
    if (replacement == current)
      replacement = alphabet.symbol(alphabet.size() - 1);
    out[pos] = replacement;
  }
  return Sequence{std::move(out)};
}

std::size_t char_count(const Sequence &seq, char c) {
  return static_cast<std::size_t>(std::count(seq.chars.begin(), seq.chars.end(), c));
}

std::size_t hamming_distance(const Sequence &a, const Sequence &b) {
  if (a.length() != b.length())
    throw std::invalid_argument("hamming distance needs equal lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.length(); ++i)
    if (a.chars[i] != b.chars[i])
      ++d;
  return d;
}

} // namespace stringgp
