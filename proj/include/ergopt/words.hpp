#pragma once

// Finite words and eventually periodic points of the one-sided full shift
// over the alphabet {0, ..., d-1}.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/rational.hpp"

namespace ergopt {

using Symbol = int;

class SymbolWord {
 public:
  SymbolWord() = default;

  SymbolWord(std::vector<Symbol> symbols, int alphabet)
      : symbols_(std::move(symbols)), alphabet_(alphabet) {
    if (alphabet_ < 1) throw InvalidWord("alphabet size must be positive");
    for (Symbol s : symbols_) {
      if (s < 0 || s >= alphabet_) {
        throw InvalidWord("symbol " + std::to_string(s) + " outside alphabet of size " +
                          std::to_string(alphabet_));
      }
    }
  }

  // Word text is one decimal digit per symbol, so this needs d <= 10.
  static SymbolWord parse(std::string_view text, int alphabet) {
    if (alphabet > 10) throw InvalidWord("text words support alphabets of at most 10 symbols");
    std::vector<Symbol> symbols;
    symbols.reserve(text.size());
    for (char c : text) {
      if (c < '0' || c > '9') throw InvalidWord("invalid character in word '" + std::string(text) + "'");
      symbols.push_back(c - '0');
    }
    return SymbolWord(std::move(symbols), alphabet);
  }

  // Word of length `length` whose base-d value is `index` (first symbol most significant).
  static SymbolWord from_index(std::uint64_t index, int length, int alphabet) {
    std::vector<Symbol> symbols(static_cast<std::size_t>(length));
    for (int i = length - 1; i >= 0; --i) {
      symbols[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % static_cast<std::uint64_t>(alphabet));
      index /= static_cast<std::uint64_t>(alphabet);
    }
    return SymbolWord(std::move(symbols), alphabet);
  }

  int alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  std::uint64_t index() const {
    std::uint64_t v = 0;
    for (Symbol s : symbols_) v = v * static_cast<std::uint64_t>(alphabet_) + static_cast<std::uint64_t>(s);
    return v;
  }

  std::string to_string() const {
    std::string out;
    out.reserve(symbols_.size());
    for (Symbol s : symbols_) {
      if (alphabet_ <= 10) {
        out.push_back(static_cast<char>('0' + s));
      } else {
        if (!out.empty()) out.push_back('.');
        out += std::to_string(s);
      }
    }
    return out;
  }

  SymbolWord prefix(std::size_t n) const {
    return SymbolWord({symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size()))}, alphabet_);
  }

  SymbolWord drop_front(std::size_t n) const {
    return SymbolWord({symbols_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())), symbols_.end()}, alphabet_);
  }

  SymbolWord concat(const SymbolWord& other) const {
    check_same_alphabet(other);
    std::vector<Symbol> out = symbols_;
    out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
    return SymbolWord(std::move(out), alphabet_);
  }

  // Left rotation by r: abc -> bca for r = 1.
  SymbolWord rotated(std::size_t r) const {
    if (empty()) return *this;
    std::vector<Symbol> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = symbols_[(i + r) % size()];
    return SymbolWord(std::move(out), alphabet_);
  }

  // Length of the shortest word whose repetition gives this word.
  std::size_t primitive_length() const {
    const std::size_t n = size();
    for (std::size_t p = 1; p < n; ++p) {
      if (n % p != 0) continue;
      bool repeats = true;
      for (std::size_t i = p; i < n && repeats; ++i) repeats = symbols_[i] == symbols_[i - p];
      if (repeats) return p;
    }
    return n;
  }

  bool is_primitive() const { return !empty() && primitive_length() == size(); }
  SymbolWord primitive_root() const { return prefix(primitive_length()); }

  // Lexicographically least rotation.
  SymbolWord min_rotation() const {
    SymbolWord best = *this;
    for (std::size_t r = 1; r < size(); ++r) {
      SymbolWord cand = rotated(r);
      if (cand.symbols_ < best.symbols_) best = std::move(cand);
    }
    return best;
  }

  bool operator==(const SymbolWord& other) const = default;
  auto operator<=>(const SymbolWord& other) const {
    if (auto c = alphabet_ <=> other.alphabet_; c != 0) return c;
    return symbols_ <=> other.symbols_;
  }

  void check_same_alphabet(const SymbolWord& other) const {
    if (alphabet_ != other.alphabet_) throw AlphabetMismatch("words over different alphabets");
  }

 private:
  std::vector<Symbol> symbols_;
  int alphabet_ = 2;
};

// The eventually periodic point preperiod . (period)^infinity, stored in a
// canonical form: primitive period and shortest preperiod. Two PointSpecs
// compare equal exactly when they describe the same infinite sequence.
class PointSpec {
 public:
  PointSpec(SymbolWord preperiod, SymbolWord period)
      : preperiod_(std::move(preperiod)), period_(std::move(period)) {
    if (period_.empty()) throw InvalidWord("period of a point must be nonempty");
    preperiod_.check_same_alphabet(period_);
    period_ = period_.primitive_root();
    // Absorb trailing preperiod symbols into the period: u a (v a)^inf = u (a v)^inf.
    while (!preperiod_.empty() && preperiod_[preperiod_.size() - 1] == period_[period_.size() - 1]) {
      preperiod_ = preperiod_.prefix(preperiod_.size() - 1);
      period_ = period_.rotated(period_.size() - 1);
    }
  }

  static PointSpec periodic(SymbolWord period) {
    int d = period.alphabet();
    return PointSpec(SymbolWord({}, d), std::move(period));
  }

  static PointSpec parse(std::string_view pre, std::string_view period, int alphabet) {
    return PointSpec(SymbolWord::parse(pre, alphabet), SymbolWord::parse(period, alphabet));
  }

  const SymbolWord& preperiod() const noexcept { return preperiod_; }
  const SymbolWord& period() const noexcept { return period_; }
  int alphabet() const noexcept { return period_.alphabet(); }
  bool is_periodic() const noexcept { return preperiod_.empty(); }

  // 0-based coordinate x_{n+1}.
  Symbol at(std::size_t n) const {
    if (n < preperiod_.size()) return preperiod_[n];
    return period_[(n - preperiod_.size()) % period_.size()];
  }

  // First n coordinates as a word.
  SymbolWord head(std::size_t n) const {
    std::vector<Symbol> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
    return SymbolWord(std::move(out), alphabet());
  }

  PointSpec shifted(std::size_t n = 1) const {
    if (n <= preperiod_.size()) return PointSpec(preperiod_.drop_front(n), period_);
    std::size_t r = (n - preperiod_.size()) % period_.size();
    return periodic(period_.rotated(r));
  }

  std::string to_string() const {
    return preperiod_.to_string() + "(" + period_.to_string() + ")^inf";
  }

  bool operator==(const PointSpec& other) const = default;

 private:
  SymbolWord preperiod_;
  SymbolWord period_;
};

namespace detail {
inline Integer integer_value(const SymbolWord& w) {
  Integer v = 0;
  for (Symbol s : w.symbols()) v = v * w.alphabet() + s;
  return v;
}
inline Integer ipow(int base, std::size_t e) {
  return boost::multiprecision::pow(Integer(base), static_cast<unsigned>(e));
}
}  // namespace detail

// Base-d expansion sum_k x_k d^{-k}.
inline Rational word_to_real(const SymbolWord& w) {
  return Rational(detail::integer_value(w), detail::ipow(w.alphabet(), w.size()));
}

// The periodic tail is summed as a geometric series, so the result is exact.
inline Rational word_to_real(const PointSpec& x) {
  const int d = x.alphabet();
  Rational head = word_to_real(x.preperiod());
  Rational tail(detail::integer_value(x.period()), detail::ipow(d, x.period().size()) - 1);
  return head + tail / Rational(detail::ipow(d, x.preperiod().size()));
}

// (1/2)^{min{n : x_n != y_n}} with 1-based n; zero for equal sequences.
inline Rational shift_metric(const PointSpec& x, const PointSpec& y) {
  if (x.alphabet() != y.alphabet()) throw AlphabetMismatch("points over different alphabets");
  const std::size_t horizon = std::max(x.preperiod().size(), y.preperiod().size()) +
                              std::lcm(x.period().size(), y.period().size());
  for (std::size_t i = 0; i < horizon; ++i) {
    if (x.at(i) != y.at(i)) return Rational(Integer(1), detail::ipow(2, i + 1));
  }
  return Rational(0);
}

}  // namespace ergopt
