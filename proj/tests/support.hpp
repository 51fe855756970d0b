#pragma once

// Generators and independent oracles shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ergopt/ergopt.hpp"

namespace testing_support {

using ergopt::LocallyConstantPotential;
using ergopt::Rational;
using ergopt::SymbolWord;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  // p/q in [lo, hi] with q <= max_den.
  Rational rational(int lo, int hi, int max_den = 8) {
    const int q = integer(1, max_den);
    return Rational(integer(lo * q, hi * q), q);
  }

  LocallyConstantPotential potential(int d, int k, int lo = -1, int hi = 1, int max_den = 8) {
    LocallyConstantPotential a(d, k);
    for (std::uint64_t i = 0; i < a.size(); ++i) a.add_indicator(SymbolWord::from_index(i, k, d), rational(lo, hi, max_den));
    return a;
  }

  // Double coefficients, for the float-only paths.
  LocallyConstantPotential real_potential(int d, int k) {
    LocallyConstantPotential a(d, k);
    for (std::uint64_t i = 0; i < a.size(); ++i) {
      a.add_indicator(SymbolWord::from_index(i, k, d), ergopt::exact_from_double(real(-1, 1)));
    }
    return a;
  }

  SymbolWord word(int d, int len) {
    std::vector<ergopt::Symbol> s(static_cast<std::size_t>(len));
    for (auto& x : s) x = integer(0, d - 1);
    return SymbolWord(std::move(s), d);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Two-state chain with transition entries in [lo, 1 - lo]; exact stationary vector.
inline ergopt::FloatMeasure two_state_markov(Gen& g, double lo = 0.05) {
  const double a = g.real(lo, 1 - lo);  // P(0 -> 1)
  const double b = g.real(lo, 1 - lo);  // P(1 -> 0)
  std::vector<double> pi{b / (a + b), a / (a + b)};
  std::vector<double> p{1 - a, a, b, 1 - b};
  return ergopt::FloatMeasure::markov(2, pi, p, 1, 1e-12);
}

inline ergopt::Integer ipow(int d, int e) {
  ergopt::Integer r = 1;
  for (int i = 0; i < e; ++i) r *= d;
  return r;
}

// All primitive necklaces (least rotations) of length <= max_len.
inline std::vector<SymbolWord> necklaces(int d, int max_len) {
  std::vector<SymbolWord> out;
  for (int len = 1; len <= max_len; ++len) {
    std::uint64_t count = 1;
    for (int i = 0; i < len; ++i) count *= static_cast<std::uint64_t>(d);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      SymbolWord w = SymbolWord::from_index(idx, len, d);
      if (w.is_primitive() && w.min_rotation() == w) out.push_back(w);
    }
  }
  return out;
}

// Mean of A along the periodic orbit of `cycle`, summed window by window.
inline Rational orbit_mean(const LocallyConstantPotential& a, const SymbolWord& cycle) {
  const std::size_t k = static_cast<std::size_t>(a.depth());
  Rational s(0);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    std::vector<ergopt::Symbol> window;
    for (std::size_t j = 0; j < k; ++j) window.push_back(cycle[(i + j) % cycle.size()]);
    s += a.at(SymbolWord(window, a.alphabet()));
  }
  return s / Rational(static_cast<long>(cycle.size()));
}

// Max cycle mean by exhaustive enumeration: every elementary cycle of the
// de Bruijn graph is a periodic orbit of period <= d^(k-1).
inline Rational brute_force_alpha(const LocallyConstantPotential& a) {
  int nodes = 1;
  for (int i = 1; i < a.depth(); ++i) nodes *= a.alphabet();
  std::optional<Rational> best;
  for (const auto& c : necklaces(a.alphabet(), nodes)) {
    Rational m = orbit_mean(a, c);
    if (!best || m > *best) best = m;
  }
  return *best;
}

// Residual table as a potential of the same depth.
inline LocallyConstantPotential residual_potential(const LocallyConstantPotential& a, const std::vector<Rational>& r) {
  LocallyConstantPotential out(a.alphabet(), a.depth());
  for (std::uint64_t i = 0; i < r.size(); ++i) out.add_indicator(SymbolWord::from_index(i, a.depth(), a.alphabet()), r[i]);
  return out;
}

inline SymbolWord w2(const char* text) { return SymbolWord::parse(text, 2); }

inline LocallyConstantPotential indicator(const char* word) { return LocallyConstantPotential::indicator(w2(word)); }

}  // namespace testing_support
