#pragma once

#include <cstdint>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/words.hpp"

namespace ergopt {

// Transition graph of a depth-k locally constant potential. Nodes are the
// (k-1)-words (a single node when k = 1); the edge with index e is the k-word
// with that index, running from its (k-1)-prefix to its (k-1)-suffix, so a
// point with first k symbols w moves along edge w under the shift.
class DeBruijnGraph {
 public:
  explicit DeBruijnGraph(const LocallyConstantPotential& a, std::uint64_t budget = enumeration_budget())
      : alphabet_(a.alphabet()), depth_(a.depth()), weights_(a.coefficients()) {
    const auto edges = checked_power(static_cast<std::uint64_t>(alphabet_), static_cast<std::uint64_t>(depth_),
                                     budget, "de Bruijn edges");
    nodes_ = edges / static_cast<std::uint64_t>(alphabet_);
  }

  int alphabet() const noexcept { return alphabet_; }
  int depth() const noexcept { return depth_; }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(nodes_); }
  std::size_t edge_count() const noexcept { return weights_.size(); }

  std::size_t source(std::size_t edge) const noexcept { return edge / static_cast<std::size_t>(alphabet_); }
  std::size_t target(std::size_t edge) const noexcept { return edge % static_cast<std::size_t>(nodes_); }

  // Edges node -> node·s for s = 0..d-1.
  std::size_t out_edge(std::size_t node, int s) const noexcept {
    return node * static_cast<std::size_t>(alphabet_) + static_cast<std::size_t>(s);
  }
  // Edges s·node -> node for s = 0..d-1.
  std::size_t in_edge(std::size_t node, int s) const noexcept {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(nodes_) + node;
  }

  const Rational& weight(std::size_t edge) const { return weights_[edge]; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  template <Scalar T>
  std::vector<T> weights_as() const {
    std::vector<T> out(weights_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = from_rational<T>(weights_[i]);
    return out;
  }

  SymbolWord edge_word(std::size_t edge) const { return SymbolWord::from_index(edge, depth_, alphabet_); }
  SymbolWord node_word(std::size_t node) const { return SymbolWord::from_index(node, depth_ - 1, alphabet_); }

  // First symbol of the k-word carried by `edge`.
  Symbol edge_symbol(std::size_t edge) const noexcept {
    std::size_t top = edge;
    for (int i = 1; i < depth_; ++i) top /= static_cast<std::size_t>(alphabet_);
    return static_cast<Symbol>(top);
  }

 private:
  int alphabet_;
  int depth_;
  std::uint64_t nodes_ = 1;
  std::vector<Rational> weights_;
};

inline DeBruijnGraph build_debruijn(const LocallyConstantPotential& a, std::uint64_t budget = enumeration_budget()) {
  return DeBruijnGraph(a, budget);
}

// Edge sequence of (cycle)^inf in the graph of depth k: edge j is the k-window
// starting at position j.
inline std::vector<std::size_t> cycle_edges(const DeBruijnGraph& g, const SymbolWord& cycle) {
  std::vector<std::size_t> edges(cycle.size());
  const std::size_t k = static_cast<std::size_t>(g.depth());
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) idx = idx * static_cast<std::uint64_t>(g.alphabet()) + static_cast<std::uint64_t>(cycle[(j + i) % cycle.size()]);
    edges[j] = static_cast<std::size_t>(idx);
  }
  return edges;
}

}  // namespace ergopt
