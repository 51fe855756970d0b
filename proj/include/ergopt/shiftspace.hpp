#pragma once

// Shift-invariant probability measures with exact cylinder weights,
// integration of locally constant potentials, and Kolmogorov entropy.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <span>
#include <variant>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/words.hpp"

namespace ergopt {

template <Scalar T>
class InvariantMeasure {
 public:
  // Uniform mass 1/k on the k shifts of (cycle)^inf.
  struct PeriodicOrbit {
    SymbolWord cycle;
  };

  // Order-r Markov measure. States are r-words; transition[state * d + s] is
  // the probability that symbol s follows, moving to state suffix(state)·s.
  struct Markov {
    int order = 1;
    std::vector<T> stationary;
    std::vector<T> transition;
  };

  struct Bernoulli {
    std::vector<T> weights;
  };

  struct Mixture {
    std::vector<T> weights;
    std::vector<InvariantMeasure> parts;
  };

  using Variant = std::variant<PeriodicOrbit, Markov, Bernoulli, Mixture>;

  static InvariantMeasure periodic(const SymbolWord& cycle) {
    if (cycle.empty()) throw InvalidWord("periodic measure needs a nonempty cycle");
    return InvariantMeasure(PeriodicOrbit{cycle.primitive_root()}, cycle.alphabet());
  }

  static InvariantMeasure bernoulli(std::vector<T> weights) {
    const int d = static_cast<int>(weights.size());
    InvariantMeasure m(Bernoulli{std::move(weights)}, d);
    m.validate();
    return m;
  }

  // Order-1 chain: transition is a d x d row-stochastic matrix (row-major).
  static InvariantMeasure markov(int alphabet, std::vector<T> stationary, std::vector<T> transition, int order = 1,
                                 double tol = 1e-12) {
    InvariantMeasure m(Markov{order, std::move(stationary), std::move(transition)}, alphabet);
    m.validate(tol);
    return m;
  }

  static InvariantMeasure mixture(std::vector<T> weights, std::vector<InvariantMeasure> parts) {
    if (weights.empty() || weights.size() != parts.size()) throw Error("mixture needs matching weights and parts");
    const int d = parts.front().alphabet();
    for (const auto& p : parts) {
      if (p.alphabet() != d) throw AlphabetMismatch("mixture parts over different alphabets");
    }
    InvariantMeasure m(Mixture{std::move(weights), std::move(parts)}, d);
    m.validate();
    return m;
  }

  int alphabet() const noexcept { return alphabet_; }
  const Variant& variant() const noexcept { return variant_; }
  bool is_periodic() const noexcept { return std::holds_alternative<PeriodicOrbit>(variant_); }
  const SymbolWord& cycle() const { return std::get<PeriodicOrbit>(variant_).cycle; }

  T cylinder_mass(const SymbolWord& w) const {
    if (w.alphabet() != alphabet_) throw AlphabetMismatch("cylinder word alphabet differs from measure");
    return std::visit([&](const auto& v) { return mass_of(v, w); }, variant_);
  }

  // Masses of all d^m cylinders of length m, indexed by SymbolWord::index().
  std::vector<T> cylinder_masses(int m, std::uint64_t budget = enumeration_budget()) const {
    const std::uint64_t count = checked_power(static_cast<std::uint64_t>(alphabet_), static_cast<std::uint64_t>(m),
                                              budget, "cylinder enumeration");
    return std::visit([&](const auto& v) { return masses_of(v, m, count, budget); }, variant_);
  }

  void validate(double tol = 1e-12) const {
    auto close = [&](const T& a, const T& b) {
      if constexpr (is_exact_v<T>) {
        return a == b;
      } else {
        return std::abs(a - b) <= tol;
      }
    };
    auto check_probability = [&](const std::vector<T>& p, const char* what) {
      T sum(0);
      for (const auto& x : p) {
        if (x < 0) throw Error(std::string(what) + " has a negative entry");
        sum += x;
      }
      if (!close(sum, T(1))) throw Error(std::string(what) + " does not sum to 1");
    };
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Bernoulli>) {
            if (v.weights.empty()) throw Error("Bernoulli measure needs weights");
            check_probability(v.weights, "Bernoulli weights");
          } else if constexpr (std::is_same_v<V, Markov>) {
            if (v.order < 1) throw Error("Markov order must be at least 1");
            const std::size_t states = state_count(v.order);
            if (v.stationary.size() != states || v.transition.size() != states * static_cast<std::size_t>(alphabet_)) {
              throw Error("Markov table sizes do not match alphabet and order");
            }
            check_probability(v.stationary, "stationary vector");
            for (std::size_t s = 0; s < states; ++s) {
              std::vector<T> row(v.transition.begin() + static_cast<std::ptrdiff_t>(s * alphabet_),
                                 v.transition.begin() + static_cast<std::ptrdiff_t>((s + 1) * alphabet_));
              check_probability(row, "transition row");
            }
            std::vector<T> next(states, T(0));
            for (std::size_t s = 0; s < states; ++s) {
              for (int a = 0; a < alphabet_; ++a) next[successor(s, a, states)] += v.stationary[s] * v.transition[s * alphabet_ + a];
            }
            for (std::size_t s = 0; s < states; ++s) {
              if (!close(next[s], v.stationary[s])) throw Error("stationary vector is not invariant under the transition");
            }
          } else if constexpr (std::is_same_v<V, Mixture>) {
            check_probability(v.weights, "mixture weights");
          }
        },
        variant_);
  }

 private:
  InvariantMeasure(Variant v, int alphabet) : variant_(std::move(v)), alphabet_(alphabet) {
    if (alphabet_ < 1) throw Error("alphabet size must be positive");
  }

  std::size_t state_count(int order) const {
    std::size_t n = 1;
    for (int i = 0; i < order; ++i) n *= static_cast<std::size_t>(alphabet_);
    return n;
  }
  std::size_t successor(std::size_t state, int symbol, std::size_t states) const {
    return (state * static_cast<std::size_t>(alphabet_) + static_cast<std::size_t>(symbol)) % states;
  }

  T mass_of(const PeriodicOrbit& p, const SymbolWord& w) const {
    const std::size_t k = p.cycle.size();
    std::size_t hits = 0;
    for (std::size_t j = 0; j < k; ++j) {
      bool match = true;
      for (std::size_t i = 0; i < w.size() && match; ++i) match = w[i] == p.cycle[(j + i) % k];
      if (match) ++hits;
    }
    if constexpr (is_exact_v<T>) {
      return Rational(static_cast<long>(hits), static_cast<long>(k));
    } else {
      return static_cast<double>(hits) / static_cast<double>(k);
    }
  }

  T mass_of(const Bernoulli& b, const SymbolWord& w) const {
    T m(1);
    for (Symbol s : w.symbols()) m *= b.weights[static_cast<std::size_t>(s)];
    return m;
  }

  T mass_of(const Markov& mk, const SymbolWord& w) const {
    const std::size_t r = static_cast<std::size_t>(mk.order);
    const std::size_t states = state_count(mk.order);
    if (w.size() < r) {
      const std::size_t span = state_count(static_cast<int>(r - w.size()));
      const std::size_t first = static_cast<std::size_t>(w.index()) * span;
      T m(0);
      for (std::size_t s = first; s < first + span; ++s) m += mk.stationary[s];
      return m;
    }
    std::size_t state = static_cast<std::size_t>(w.prefix(r).index());
    T m = mk.stationary[state];
    for (std::size_t i = r; i < w.size(); ++i) {
      m *= mk.transition[state * alphabet_ + static_cast<std::size_t>(w[i])];
      state = successor(state, w[i], states);
    }
    return m;
  }

  T mass_of(const Mixture& mx, const SymbolWord& w) const {
    T m(0);
    for (std::size_t i = 0; i < mx.parts.size(); ++i) m += mx.weights[i] * mx.parts[i].cylinder_mass(w);
    return m;
  }

  std::vector<T> masses_of(const PeriodicOrbit& p, int m, std::uint64_t count, std::uint64_t) const {
    std::vector<T> out(count, T(0));
    const std::size_t k = p.cycle.size();
    for (std::size_t j = 0; j < k; ++j) {
      std::uint64_t idx = 0;
      for (int i = 0; i < m; ++i) idx = idx * static_cast<std::uint64_t>(alphabet_) + static_cast<std::uint64_t>(p.cycle[(j + static_cast<std::size_t>(i)) % k]);
      out[idx] += T(1);
    }
    for (auto& v : out) v /= T(static_cast<long>(k));
    return out;
  }

  std::vector<T> masses_of(const Bernoulli& b, int m, std::uint64_t count, std::uint64_t) const {
    std::vector<T> level{T(1)};
    for (int len = 0; len < m; ++len) {
      std::vector<T> next(level.size() * static_cast<std::size_t>(alphabet_));
      for (std::size_t i = 0; i < level.size(); ++i)
        for (int s = 0; s < alphabet_; ++s) next[i * alphabet_ + s] = level[i] * b.weights[static_cast<std::size_t>(s)];
      level = std::move(next);
    }
    (void)count;
    return level;
  }

  std::vector<T> masses_of(const Markov& mk, int m, std::uint64_t count, std::uint64_t) const {
    std::vector<T> out(count);
    for (std::uint64_t i = 0; i < count; ++i) out[i] = mass_of(mk, SymbolWord::from_index(i, m, alphabet_));
    return out;
  }

  std::vector<T> masses_of(const Mixture& mx, int m, std::uint64_t count, std::uint64_t budget) const {
    std::vector<T> out(count, T(0));
    for (std::size_t i = 0; i < mx.parts.size(); ++i) {
      auto part = mx.parts[i].cylinder_masses(m, budget);
      for (std::uint64_t j = 0; j < count; ++j) out[j] += mx.weights[i] * part[j];
    }
    return out;
  }

  Variant variant_;
  int alphabet_;
};

using ExactMeasure = InvariantMeasure<Rational>;
using FloatMeasure = InvariantMeasure<double>;

// Normalizes a non-primitive cycle with a warning on `warn`.
template <Scalar T = Rational>
InvariantMeasure<T> periodic_measure(const SymbolWord& cycle, std::ostream* warn = &std::cerr) {
  if (!cycle.is_primitive() && !cycle.empty() && warn) {
    *warn << "warning: cycle " << cycle.to_string() << " is not minimal; using " << cycle.primitive_root().to_string()
          << "\n";
  }
  return InvariantMeasure<T>::periodic(cycle);
}

// Exact for periodic orbits (orbit average); otherwise the sum of
// coefficients against depth-k cylinder masses.
template <Scalar T>
T integrate(const InvariantMeasure<T>& mu, const LocallyConstantPotential& a) {
  if (mu.alphabet() != a.alphabet()) throw AlphabetMismatch("measure and potential over different alphabets");
  if (mu.is_periodic()) {
    const SymbolWord& c = mu.cycle();
    const std::size_t k = c.size();
    T sum(0);
    std::vector<Symbol> window(static_cast<std::size_t>(a.depth()));
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < window.size(); ++i) window[i] = c[(j + i) % k];
      sum += from_rational<T>(a.at(SymbolWord(window, a.alphabet())));
    }
    return sum / T(static_cast<long>(k));
  }
  auto masses = mu.cylinder_masses(a.depth(), std::max<std::uint64_t>(enumeration_budget(), a.size()));
  T sum(0);
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] != 0) sum += masses[i] * from_rational<T>(a.coefficient(i));
  }
  return sum;
}

struct EntropyValue {
  enum class Method { closed_form, truncated };
  double value = 0;
  Method method = Method::closed_form;
  int depth = 0;  // truncation depth m, 0 for closed form
};

namespace detail {
inline double plogp(double p) { return p > 0 ? p * std::log(p) : 0.0; }
}  // namespace detail

template <Scalar T>
EntropyValue entropy_closed_form(const InvariantMeasure<T>& mu) {
  using M = InvariantMeasure<T>;
  double h = std::visit(
      [&](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, typename M::PeriodicOrbit>) {
          return 0.0;
        } else if constexpr (std::is_same_v<V, typename M::Bernoulli>) {
          double s = 0;
          for (const auto& p : v.weights) s -= detail::plogp(to_double(p));
          return s;
        } else if constexpr (std::is_same_v<V, typename M::Markov>) {
          const std::size_t d = static_cast<std::size_t>(mu.alphabet());
          double s = 0;
          for (std::size_t st = 0; st < v.stationary.size(); ++st) {
            double row = 0;
            for (std::size_t a = 0; a < d; ++a) row -= detail::plogp(to_double(v.transition[st * d + a]));
            s += to_double(v.stationary[st]) * row;
          }
          return s;
        } else {
          // Finite mixtures of the ergodic measures above: entropy is affine.
          double s = 0;
          for (std::size_t i = 0; i < v.parts.size(); ++i) s += to_double(v.weights[i]) * entropy_closed_form(v.parts[i]).value;
          return s;
        }
      },
      mu.variant());
  return {h, EntropyValue::Method::closed_form, 0};
}

// -(1/m) sum over depth-m cylinders of mu(C) log mu(C), with 0 log 0 = 0.
template <Scalar T>
EntropyValue entropy_truncated(const InvariantMeasure<T>& mu, int m, std::uint64_t budget = enumeration_budget()) {
  if (m < 1) throw Error("truncation depth must be at least 1");
  auto masses = mu.cylinder_masses(m, budget);
  double s = 0;
  for (const auto& p : masses) s -= detail::plogp(to_double(p));
  return {s / m, EntropyValue::Method::truncated, m};
}

}  // namespace ergopt
