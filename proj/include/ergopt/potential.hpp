#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/words.hpp"

namespace ergopt {

// A potential that depends only on the first `depth` symbols, stored densely
// as one exact coefficient per depth-k word (indexed by SymbolWord::index()).
class LocallyConstantPotential {
 public:
  LocallyConstantPotential(int alphabet, int depth, std::uint64_t budget = enumeration_budget())
      : alphabet_(alphabet), depth_(depth) {
    if (alphabet < 1) throw InvalidWord("alphabet size must be positive");
    if (depth < 1) throw InvalidWord("potential depth must be at least 1");
    coefficients_.assign(checked_power(static_cast<std::uint64_t>(alphabet),
                                       static_cast<std::uint64_t>(depth), budget, "potential table"),
                         Rational(0));
  }

  // Sum of coef * indicator(cylinder of word). Words shorter than `depth`
  // contribute to every refinement; calling with repeated words adds them.
  static LocallyConstantPotential from_terms(int alphabet, int depth,
                                             const std::vector<std::pair<SymbolWord, Rational>>& terms) {
    LocallyConstantPotential a(alphabet, depth);
    for (const auto& [word, coef] : terms) a.add_indicator(word, coef);
    return a;
  }

  static LocallyConstantPotential constant(int alphabet, const Rational& c, int depth = 1) {
    LocallyConstantPotential a(alphabet, depth);
    for (auto& v : a.coefficients_) v = c;
    return a;
  }

  static LocallyConstantPotential indicator(const SymbolWord& word, const Rational& coef = Rational(1)) {
    if (word.empty()) throw InvalidWord("indicator of the empty word");
    LocallyConstantPotential a(word.alphabet(), static_cast<int>(word.size()));
    a.add_indicator(word, coef);
    return a;
  }

  void add_indicator(const SymbolWord& word, const Rational& coef) {
    if (word.alphabet() != alphabet_) throw AlphabetMismatch("term word alphabet differs from potential");
    if (word.size() > static_cast<std::size_t>(depth_)) {
      throw InvalidWord("term word '" + word.to_string() + "' longer than potential depth " +
                        std::to_string(depth_));
    }
    const std::uint64_t span = ipow_u(static_cast<std::size_t>(depth_) - word.size());
    const std::uint64_t first = word.index() * span;
    for (std::uint64_t i = first; i < first + span; ++i) coefficients_[i] += coef;
  }

  int alphabet() const noexcept { return alphabet_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return coefficients_.size(); }

  const Rational& coefficient(std::uint64_t word_index) const { return coefficients_.at(word_index); }
  const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }

  const Rational& at(const SymbolWord& word) const {
    if (word.size() != static_cast<std::size_t>(depth_)) throw InvalidWord("word length differs from potential depth");
    if (word.alphabet() != alphabet_) throw AlphabetMismatch("word alphabet differs from potential");
    return coefficients_[word.index()];
  }

  const Rational& evaluate(const PointSpec& x) const { return at(x.head(static_cast<std::size_t>(depth_))); }

  std::vector<double> as_doubles() const {
    std::vector<double> out(coefficients_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_double(coefficients_[i]);
    return out;
  }

  // Same function viewed as depth `new_depth` >= depth().
  LocallyConstantPotential refined(int new_depth) const {
    if (new_depth < depth_) throw InvalidWord("cannot refine to a smaller depth");
    if (new_depth == depth_) return *this;
    LocallyConstantPotential out(alphabet_, new_depth);
    const std::uint64_t span = ipow_u(static_cast<std::size_t>(new_depth - depth_));
    for (std::uint64_t i = 0; i < out.size(); ++i) out.coefficients_[i] = coefficients_[i / span];
    return out;
  }

  LocallyConstantPotential plus_constant(const Rational& c) const {
    LocallyConstantPotential out = *this;
    for (auto& v : out.coefficients_) v += c;
    return out;
  }

  // Nonzero coefficients as depth-k terms.
  std::vector<std::pair<SymbolWord, Rational>> terms() const {
    std::vector<std::pair<SymbolWord, Rational>> out;
    for (std::uint64_t i = 0; i < coefficients_.size(); ++i) {
      if (coefficients_[i] != 0) out.emplace_back(SymbolWord::from_index(i, depth_, alphabet_), coefficients_[i]);
    }
    return out;
  }

  const Rational& max_coefficient() const { return *std::max_element(coefficients_.begin(), coefficients_.end()); }
  const Rational& min_coefficient() const { return *std::min_element(coefficients_.begin(), coefficients_.end()); }

  bool operator==(const LocallyConstantPotential& other) const = default;

 private:
  std::uint64_t ipow_u(std::size_t e) const {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(alphabet_);
    return r;
  }

  int alphabet_;
  int depth_;
  std::vector<Rational> coefficients_;
};

// Potentials of a common depth (the larger of the two).
inline std::pair<LocallyConstantPotential, LocallyConstantPotential> common_refinement(
    const LocallyConstantPotential& a, const LocallyConstantPotential& b) {
  if (a.alphabet() != b.alphabet()) throw AlphabetMismatch("potentials over different alphabets");
  const int k = std::max(a.depth(), b.depth());
  return {a.refined(k), b.refined(k)};
}

}  // namespace ergopt
