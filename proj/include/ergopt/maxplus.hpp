#pragma once

// Max-plus spectral problem of a locally constant potential: maximizing value
// (maximum cycle mean), calibrated subactions, residuals, contact loci, and
// maximizing periodic measures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ergopt/debruijn.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/shiftspace.hpp"

namespace ergopt {

template <Scalar T>
struct SubactionField {
  std::vector<T> values;  // per (k-1)-word node, or per grid point
  T alpha{};
  std::size_t iterations = 0;
  double final_increment = 0;
  bool converged = true;
};

template <Scalar T>
struct ResidualField {
  std::vector<T> values;  // per k-word edge, or per grid point
  T alpha{};
  T min_value{};
};

struct SubactionReport {
  bool is_subaction = false;
  bool is_calibrated = false;
  double worst_violation = 0;  // minimum residual; negative means the inequality fails
  std::string worst_location;
  std::string uncalibrated_location;  // first node with no tight incoming edge
};

struct ContactLocus {
  std::vector<std::size_t> edges;
  std::vector<SymbolWord> words;
  std::vector<std::vector<std::size_t>> out_edges;  // per node, locus edges leaving it
};

struct MaximizingOrbits {
  std::vector<SymbolWord> cycles;  // least rotations, sorted lexicographically
  std::vector<ExactMeasure> measures;
  bool truncated = false;
};

struct IterationOptions {
  std::size_t max_iters = 100000;
  double tol = 1e-12;
};

namespace detail {

template <Scalar T>
bool tight(const T& r, double tol) {
  if constexpr (is_exact_v<T>) {
    return tol == 0 ? r == 0 : to_double(r) <= tol;
  } else {
    return r <= tol;
  }
}

// Walk weights D_j(v) over exactly j edges from node 0, j = 0..n.
template <Scalar T>
struct WalkTable {
  std::size_t n = 0;
  std::vector<T> value;            // (n+1) x n
  std::vector<char> finite;        // (n+1) x n
  std::vector<std::size_t> pred;   // (n+1) x n, edge used to reach v at step j

  std::size_t at(std::size_t j, std::size_t v) const { return j * n + v; }
};

template <Scalar T>
WalkTable<T> walk_table(const DeBruijnGraph& g, const std::vector<T>& w, std::uint64_t budget) {
  WalkTable<T> t;
  t.n = g.node_count();
  const std::uint64_t cells = static_cast<std::uint64_t>(t.n + 1) * t.n;
  if (cells / (t.n + 1) != t.n || cells > budget * 64) throw BudgetExceeded("walk table too large for the cycle-mean solver");
  t.value.assign(cells, T(0));
  t.finite.assign(cells, 0);
  t.pred.assign(cells, 0);
  t.finite[t.at(0, 0)] = 1;
  const int d = g.alphabet();
  for (std::size_t j = 1; j <= t.n; ++j) {
    for (std::size_t v = 0; v < t.n; ++v) {
      for (int s = 0; s < d; ++s) {
        const std::size_t e = g.in_edge(v, s);
        const std::size_t u = g.source(e);
        if (!t.finite[t.at(j - 1, u)]) continue;
        T cand = t.value[t.at(j - 1, u)] + w[e];
        const std::size_t c = t.at(j, v);
        if (!t.finite[c] || cand > t.value[c]) {
          t.value[c] = std::move(cand);
          t.finite[c] = 1;
          t.pred[c] = e;
        }
      }
    }
  }
  return t;
}

// Karp's score min_j (D_n(v) - D_j(v)) / (n - j) for each node reached at step n.
template <Scalar T>
std::vector<std::optional<T>> karp_scores(const WalkTable<T>& t) {
  const std::size_t n = t.n;
  std::vector<std::optional<T>> scores(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!t.finite[t.at(n, v)]) continue;
    std::optional<T> best;
    for (std::size_t j = 0; j < n; ++j) {
      if (!t.finite[t.at(j, v)]) continue;
      T q = (t.value[t.at(n, v)] - t.value[t.at(j, v)]) / T(static_cast<long>(n - j));
      if (!best || q < *best) best = std::move(q);
    }
    scores[v] = std::move(best);
  }
  return scores;
}

}  // namespace detail

// Maximum cycle mean via Karp's recurrence. For locally constant potentials
// this is the maximizing value alpha(A); exact when T is Rational.
template <Scalar T = Rational>
T karp_alpha(const DeBruijnGraph& g, std::uint64_t budget = enumeration_budget()) {
  auto w = g.weights_as<T>();
  auto table = detail::walk_table<T>(g, w, budget);
  auto scores = detail::karp_scores(table);
  std::optional<T> alpha;
  for (auto& s : scores) {
    if (s && (!alpha || *s > *alpha)) alpha = *s;
  }
  return *alpha;  // node 0 lies on a cycle, so D_n is finite somewhere
}

template <Scalar T = Rational>
T karp_alpha(const LocallyConstantPotential& a) {
  return karp_alpha<T>(DeBruijnGraph(a));
}

// A calibrated subaction as a max-plus eigenvector: longest paths under
// weights A - alpha from a node on a maximum-mean cycle, normalized so the
// all-zero node has value 0.
template <Scalar T = Rational>
SubactionField<T> maxplus_subaction(const DeBruijnGraph& g, const T& alpha, std::uint64_t budget = enumeration_budget()) {
  auto w = g.weights_as<T>();
  for (auto& x : w) x -= alpha;
  const std::size_t n = g.node_count();

  // Karp's argmax node: its best n-edge walk contains a zero-weight cycle.
  auto table = detail::walk_table<T>(g, w, budget);
  auto scores = detail::karp_scores(table);
  std::size_t best = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (scores[v] && (best == n || *scores[v] > *scores[best])) best = v;
  }
  std::vector<std::size_t> walk(n + 1);
  walk[n] = best;
  for (std::size_t j = n; j > 0; --j) walk[j - 1] = g.source(table.pred[table.at(j, walk[j])]);
  std::vector<std::size_t> seen_at(n, n + 1);
  std::size_t critical = walk[n];
  for (std::size_t j = n + 1; j-- > 0;) {
    if (seen_at[walk[j]] != n + 1) {
      critical = walk[j];
      break;
    }
    seen_at[walk[j]] = j;
  }

  std::vector<T> u(n, T(0));
  std::vector<char> reached(n, 0);
  reached[critical] = 1;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const std::size_t a = g.source(e), b = g.target(e);
      if (!reached[a]) continue;
      T cand = u[a] + w[e];
      if (!reached[b] || cand > u[b]) {
        u[b] = std::move(cand);
        reached[b] = 1;
        changed = true;
      }
    }
    if (!changed) break;
  }
  const T base = u[0];
  for (auto& x : u) x -= base;
  SubactionField<T> out;
  out.values = std::move(u);
  out.alpha = alpha;
  return out;
}

// R(edge) = u(target) - u(source) - A(edge) + alpha for every k-word edge.
template <Scalar T>
ResidualField<T> residual_values(const DeBruijnGraph& g, const std::vector<T>& u, const T& alpha) {
  if (u.size() != g.node_count()) throw Error("subaction size does not match the graph's node count");
  ResidualField<T> r;
  r.alpha = alpha;
  r.values.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    r.values[e] = u[g.target(e)] - u[g.source(e)] - from_rational<T>(g.weight(e)) + alpha;
    if (e == 0 || r.values[e] < r.min_value) r.min_value = r.values[e];
  }
  return r;
}

// Residual of a subaction; throws InvalidSubaction naming the first edge
// word where R < -tol.
template <Scalar T>
ResidualField<T> residual(const DeBruijnGraph& g, const SubactionField<T>& u, const T& alpha, double tol = 0) {
  auto r = residual_values(g, u.values, alpha);
  for (std::size_t e = 0; e < r.values.size(); ++e) {
    if (to_double(r.values[e]) < -tol || (is_exact_v<T> && tol == 0 && r.values[e] < 0)) {
      throw InvalidSubaction("subaction inequality fails on word " + g.edge_word(e).to_string() +
                                 " (R = " + to_string(r.values[e]) + ")",
                             g.edge_word(e).to_string());
    }
  }
  return r;
}

template <Scalar T>
SubactionReport verify_subaction(const DeBruijnGraph& g, const std::vector<T>& u, const T& alpha, double tol = 0) {
  auto r = residual_values(g, u, alpha);
  SubactionReport rep;
  rep.is_subaction = true;
  std::size_t worst = 0;
  for (std::size_t e = 0; e < r.values.size(); ++e) {
    if (r.values[e] < r.values[worst]) worst = e;
  }
  rep.worst_violation = to_double(r.values[worst]);
  rep.worst_location = g.edge_word(worst).to_string();
  rep.is_subaction = is_exact_v<T> && tol == 0 ? !(r.values[worst] < 0) : rep.worst_violation >= -tol;
  rep.is_calibrated = rep.is_subaction;
  for (std::size_t v = 0; v < g.node_count() && rep.is_calibrated; ++v) {
    bool any = false;
    for (int s = 0; s < g.alphabet() && !any; ++s) any = detail::tight(r.values[g.in_edge(v, s)], tol);
    if (!any) {
      rep.is_calibrated = false;
      rep.uncalibrated_location = g.node_word(v).to_string();
    }
  }
  return rep;
}

template <Scalar T>
SubactionReport verify_subaction(const DeBruijnGraph& g, const SubactionField<T>& u, const T& alpha, double tol = 0) {
  return verify_subaction(g, u.values, alpha, tol);
}

template <Scalar T>
ContactLocus contact_locus(const DeBruijnGraph& g, const ResidualField<T>& r, double tol = 0) {
  ContactLocus locus;
  locus.out_edges.resize(g.node_count());
  for (std::size_t e = 0; e < r.values.size(); ++e) {
    if (!detail::tight(r.values[e], tol)) continue;
    locus.edges.push_back(e);
    locus.words.push_back(g.edge_word(e));
    locus.out_edges[g.source(e)].push_back(e);
  }
  return locus;
}

namespace detail {

// Johnson's elementary-circuit enumeration on the edge subgraph `locus`.
class CycleEnumerator {
 public:
  CycleEnumerator(const DeBruijnGraph& g, const ContactLocus& locus, std::size_t cap)
      : g_(g), locus_(locus), cap_(cap), n_(g.node_count()) {}

  std::vector<std::vector<std::size_t>> run() {
    for (std::size_t s = 0; s < n_ && !truncated_; ++s) {
      component_ = component_of(s);
      if (component_.empty()) continue;
      blocked_.assign(n_, 0);
      blocked_by_.assign(n_, {});
      start_ = s;
      circuit(s);
    }
    return std::move(cycles_);
  }

  bool truncated() const noexcept { return truncated_; }

 private:
  // Nodes >= s strongly connected to s within the locus (empty when s has no cycle).
  std::vector<char> component_of(std::size_t s) {
    std::vector<char> fwd(n_, 0), bwd(n_, 0);
    std::vector<std::size_t> stack{s};
    fwd[s] = 1;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e : locus_.out_edges[v]) {
        std::size_t t = g_.target(e);
        if (t >= s && !fwd[t]) {
          fwd[t] = 1;
          stack.push_back(t);
        }
      }
    }
    if (reverse_.empty()) {
      reverse_.resize(n_);
      for (std::size_t e : locus_.edges) reverse_[g_.target(e)].push_back(e);
    }
    stack.push_back(s);
    bwd[s] = 1;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e : reverse_[v]) {
        std::size_t t = g_.source(e);
        if (t >= s && !bwd[t]) {
          bwd[t] = 1;
          stack.push_back(t);
        }
      }
    }
    std::vector<char> comp(n_, 0);
    bool has_cycle = false;
    for (std::size_t v = 0; v < n_; ++v) comp[v] = fwd[v] && bwd[v];
    for (std::size_t e : locus_.out_edges[s]) has_cycle |= comp[g_.target(e)] != 0;
    if (!has_cycle) return {};
    return comp;
  }

  void unblock(std::size_t v) {
    blocked_[v] = 0;
    auto pending = std::move(blocked_by_[v]);
    blocked_by_[v].clear();
    for (std::size_t w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(std::size_t v) {
    bool found = false;
    blocked_[v] = 1;
    for (std::size_t e : locus_.out_edges[v]) {
      if (truncated_) return true;
      std::size_t t = g_.target(e);
      if (!component_[t]) continue;
      path_.push_back(e);
      if (t == start_) {
        if (cycles_.size() >= cap_) {
          truncated_ = true;
          path_.pop_back();
          return true;
        }
        cycles_.push_back(path_);
        found = true;
      } else if (!blocked_[t]) {
        found |= circuit(t);
      }
      path_.pop_back();
    }
    if (found) {
      unblock(v);
    } else {
      for (std::size_t e : locus_.out_edges[v]) {
        std::size_t t = g_.target(e);
        if (!component_[t]) continue;
        auto& list = blocked_by_[t];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    return found;
  }

  const DeBruijnGraph& g_;
  const ContactLocus& locus_;
  std::size_t cap_;
  std::size_t n_;
  std::size_t start_ = 0;
  bool truncated_ = false;
  std::vector<char> component_;
  std::vector<char> blocked_;
  std::vector<std::vector<std::size_t>> blocked_by_;
  std::vector<std::vector<std::size_t>> reverse_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<std::size_t>> cycles_;
};

inline SymbolWord cycle_word(const DeBruijnGraph& g, const std::vector<std::size_t>& edges) {
  std::vector<Symbol> symbols;
  symbols.reserve(edges.size());
  for (std::size_t e : edges) symbols.push_back(g.edge_symbol(e));
  return SymbolWord(std::move(symbols), g.alphabet()).min_rotation();
}

}  // namespace detail

// Elementary cycles of the subgraph formed by `locus`, as least-rotation cycle words.
inline std::pair<std::vector<SymbolWord>, bool> locus_cycles(const DeBruijnGraph& g, const ContactLocus& locus,
                                                             std::size_t cap) {
  detail::CycleEnumerator en(g, locus, cap);
  auto cycles = en.run();
  std::vector<SymbolWord> words;
  words.reserve(cycles.size());
  for (const auto& c : cycles) words.push_back(detail::cycle_word(g, c));
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return {std::move(words), en.truncated()};
}

// Periodic maximizing measures: the elementary cycles of the zero-residual
// subgraph of an exact calibrated subaction. Each has mean weight alpha.
inline MaximizingOrbits maximizing_orbits(const DeBruijnGraph& g, const Rational& alpha, std::size_t cap = 10000) {
  auto u = maxplus_subaction<Rational>(g, alpha);
  auto r = residual(g, u, alpha);
  auto locus = contact_locus(g, r, 0);
  auto [words, truncated] = locus_cycles(g, locus, cap);
  MaximizingOrbits out;
  out.truncated = truncated;
  for (auto& w : words) {
    out.measures.push_back(ExactMeasure::periodic(w));
    out.cycles.push_back(std::move(w));
  }
  return out;
}

// Predecessor table of the max-plus operator (Gv)(y) = max_x [v(x) + A(x)]
// over the `fan` preimages x of each node y.
struct Predecessors {
  std::size_t nodes = 0;
  std::size_t fan = 0;
  std::vector<std::size_t> source;  // nodes * fan
  std::vector<double> weight;       // nodes * fan
};

inline Predecessors predecessors(const DeBruijnGraph& g) {
  Predecessors p;
  p.nodes = g.node_count();
  p.fan = static_cast<std::size_t>(g.alphabet());
  p.source.resize(p.nodes * p.fan);
  p.weight.resize(p.nodes * p.fan);
  for (std::size_t v = 0; v < p.nodes; ++v) {
    for (int s = 0; s < g.alphabet(); ++s) {
      const std::size_t e = g.in_edge(v, s);
      p.source[v * p.fan + static_cast<std::size_t>(s)] = g.source(e);
      p.weight[v * p.fan + static_cast<std::size_t>(s)] = to_double(g.weight(e));
    }
  }
  return p;
}

// Averaged iteration v <- (v + Gv)/2, renormalized so v[0] = 0 after every
// step. The pre-renormalization drift of v[0] tends to alpha/2; iteration
// stops when successive renormalized iterates differ by less than tol in
// sup norm. Non-convergence is reported through `converged`.
inline SubactionField<double> half_iteration(const Predecessors& p, std::vector<double> u0 = {},
                                             const IterationOptions& opts = {}) {
  if (u0.empty()) u0.assign(p.nodes, 0.0);
  if (u0.size() != p.nodes) throw Error("initial field size does not match the operator");
  for (double x : u0) {
    if (!std::isfinite(x)) throw Error("initial field must be finite");
  }
  const double base0 = u0[0];
  for (auto& x : u0) x -= base0;
  std::vector<double> cur = std::move(u0), next(p.nodes);
  SubactionField<double> out;
  out.converged = false;
  double drift = 0;
  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    for (std::size_t y = 0; y < p.nodes; ++y) {
      double best = -std::numeric_limits<double>::infinity();
      const std::size_t row = y * p.fan;
      for (std::size_t j = 0; j < p.fan; ++j) best = std::max(best, cur[p.source[row + j]] + p.weight[row + j]);
      next[y] = 0.5 * (cur[y] + best);
    }
    drift = next[0] - cur[0];
    const double base = next[0];
    double inc = 0;
    for (std::size_t y = 0; y < p.nodes; ++y) {
      next[y] -= base;
      inc = std::max(inc, std::abs(next[y] - cur[y]));
    }
    std::swap(cur, next);
    out.iterations = it;
    out.final_increment = inc;
    if (inc < opts.tol) {
      out.converged = true;
      break;
    }
  }
  out.values = std::move(cur);
  out.alpha = 2 * drift;
  return out;
}

inline SubactionField<double> half_iteration(const LocallyConstantPotential& a, std::vector<double> u0 = {},
                                             const IterationOptions& opts = {}) {
  return half_iteration(predecessors(DeBruijnGraph(a)), std::move(u0), opts);
}

}  // namespace ergopt
