#pragma once

// Rotation vectors, rotation sets and the constrained maximizing value
// beta_{A,phi}(h), computed as exact linear programs over the occupation
// (edge-frequency) polytope of the de Bruijn graph:
//   w >= 0,  sum w = 1,  inflow = outflow at every node.
// Depth-k cylinder frequencies of an invariant measure satisfy these
// constraints; conversely every such w decomposes into cycle circulations,
// hence comes from a convex combination of periodic measures.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergopt/debruijn.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/maxplus.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/shiftspace.hpp"
#include "ergopt/simplex.hpp"

namespace ergopt {

// h is outside the rotation set. The certificate is a hyperplane:
// normal . phi_*(mu) >= offset for every invariant mu, but normal . h < offset.
class OutsideRotationSet : public Error {
 public:
  OutsideRotationSet(const std::string& what, std::vector<Rational> normal, Rational offset)
      : Error(what), normal_(std::move(normal)), offset_(std::move(offset)) {}
  const std::vector<Rational>& normal() const noexcept { return normal_; }
  const Rational& offset() const noexcept { return offset_; }

 private:
  std::vector<Rational> normal_;
  Rational offset_;
};

class RotationSpec {
 public:
  // An empty coordinate list is allowed and imposes no constraint.
  RotationSpec(int alphabet, std::vector<LocallyConstantPotential> coords) : alphabet_(alphabet), depth_(1) {
    for (const auto& c : coords) {
      if (c.alphabet() != alphabet) throw AlphabetMismatch("constraint coordinates over different alphabets");
      depth_ = std::max(depth_, c.depth());
    }
    for (auto& c : coords) coords_.push_back(c.refined(depth_));
  }

  explicit RotationSpec(std::vector<LocallyConstantPotential> coords)
      : RotationSpec(coords.empty() ? throw Error("use RotationSpec(alphabet, {}) for no constraints")
                                    : coords.front().alphabet(),
                     coords) {}

  int alphabet() const noexcept { return alphabet_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return coords_.size(); }
  const LocallyConstantPotential& operator[](std::size_t i) const { return coords_.at(i); }
  const std::vector<LocallyConstantPotential>& coordinates() const noexcept { return coords_; }

 private:
  int alphabet_;
  int depth_;
  std::vector<LocallyConstantPotential> coords_;
};

template <Scalar T>
std::vector<T> rotation_vector(const InvariantMeasure<T>& mu, const RotationSpec& phi) {
  if (mu.alphabet() != phi.alphabet()) throw AlphabetMismatch("measure and constraint over different alphabets");
  std::vector<T> out;
  for (const auto& c : phi.coordinates()) out.push_back(integrate(mu, c));
  return out;
}

struct OccupationMeasure {
  int alphabet = 2;
  int depth = 1;
  std::vector<Rational> weights;  // per depth-k edge word
  Rational value;                 // objective sum w A
  std::vector<std::size_t> basis;
  bool alternative_optima = false;

  // Sum one, nonnegative, balanced at every node.
  bool is_valid() const {
    Rational total(0);
    for (const auto& w : weights) {
      if (w < 0) return false;
      total += w;
    }
    if (total != 1) return false;
    const std::size_t d = static_cast<std::size_t>(alphabet);
    const std::size_t nodes = weights.size() / d;
    std::vector<Rational> balance(nodes, Rational(0));
    for (std::size_t e = 0; e < weights.size(); ++e) {
      balance[e / d] -= weights[e];
      balance[e % nodes] += weights[e];
    }
    return std::all_of(balance.begin(), balance.end(), [](const Rational& b) { return b == 0; });
  }

  Rational integral(const LocallyConstantPotential& a) const {
    const auto ref = a.refined(depth);
    Rational s(0);
    for (std::size_t e = 0; e < weights.size(); ++e) s += weights[e] * ref.coefficient(e);
    return s;
  }
};

inline std::vector<Rational> rotation_vector(const OccupationMeasure& w, const RotationSpec& phi) {
  std::vector<Rational> out;
  for (const auto& c : phi.coordinates()) out.push_back(w.integral(c));
  return out;
}

namespace detail {

struct OccupationLp {
  int alphabet = 2;
  int depth = 1;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::size_t constraint_row0 = 0;  // first phi row; the sum row sits just before it
  std::size_t edges = 0;
};

inline OccupationLp occupation_lp(int alphabet, int depth, const RotationSpec& phi, const std::vector<Rational>& h) {
  if (h.size() != phi.size()) throw Error("target vector length differs from constraint count");
  OccupationLp lp;
  lp.alphabet = alphabet;
  lp.depth = depth;
  const std::size_t d = static_cast<std::size_t>(alphabet);
  lp.edges = checked_power(d, static_cast<std::uint64_t>(depth), enumeration_budget(), "occupation LP");
  const std::size_t nodes = lp.edges / d;
  if (nodes > 1) {
    for (std::size_t v = 0; v < nodes; ++v) {
      std::vector<Rational> row(lp.edges, Rational(0));
      for (std::size_t e = 0; e < lp.edges; ++e) {
        if (e % nodes == v) row[e] += 1;
        if (e / d == v) row[e] -= 1;
      }
      lp.rows.push_back(std::move(row));
      lp.rhs.push_back(0);
    }
  }
  lp.rows.emplace_back(lp.edges, Rational(1));
  lp.rhs.push_back(1);
  lp.constraint_row0 = lp.rows.size();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto ref = phi[i].refined(depth);
    lp.rows.push_back(ref.coefficients());
    lp.rhs.push_back(h[i]);
  }
  return lp;
}

inline std::vector<Rational> objective(const LocallyConstantPotential& a, int depth) {
  return a.refined(depth).coefficients();
}

}  // namespace detail

struct BetaResult {
  Rational value;
  OccupationMeasure occupation;
};

// beta_{A,phi}(h) = max { int A dmu : phi_*(mu) = h }.
inline BetaResult beta_function(const LocallyConstantPotential& a, const RotationSpec& phi,
                                const std::vector<Rational>& h) {
  if (a.alphabet() != phi.alphabet()) throw AlphabetMismatch("potential and constraint over different alphabets");
  const int k = std::max(a.depth(), phi.depth());
  auto lp = detail::occupation_lp(a.alphabet(), k, phi, h);
  auto res = solve_lp(lp.rows, lp.rhs, detail::objective(a, k));
  if (res.status == LpStatus::infeasible) {
    std::vector<Rational> normal(res.farkas.begin() + static_cast<std::ptrdiff_t>(lp.constraint_row0), res.farkas.end());
    Rational offset = -res.farkas[lp.constraint_row0 - 1];
    std::string text = "target (";
    for (std::size_t i = 0; i < h.size(); ++i) text += (i ? ", " : "") + to_string(h[i]);
    text += ") lies outside the rotation set: n.h < " + to_string(offset) + " <= n.rho for n = (";
    for (std::size_t i = 0; i < normal.size(); ++i) text += (i ? ", " : "") + to_string(normal[i]);
    text += ")";
    throw OutsideRotationSet(text, std::move(normal), std::move(offset));
  }
  if (res.status != LpStatus::optimal) throw Error("occupation LP unexpectedly unbounded");
  BetaResult out;
  out.value = res.value;
  out.occupation.alphabet = a.alphabet();
  out.occupation.depth = k;
  out.occupation.weights = std::move(res.x);
  out.occupation.value = res.value;
  out.occupation.basis = std::move(res.basis);
  out.occupation.alternative_optima = res.alternative_optima;
  return out;
}

struct SupportSample {
  std::vector<Rational> direction;
  Rational value;  // max of direction . rho over the rotation set
};

struct RotationSet {
  std::size_t dimension = 0;
  std::vector<std::vector<Rational>> vertices;  // n = 1: {min, max}; n = 2: hull order
  std::vector<SupportSample> support;
  bool sampled = false;  // n > 3: vertices are support maximizers, not a full vertex list
};

namespace detail {

inline std::vector<std::vector<Rational>> direction_fan(std::size_t n, int radius) {
  std::vector<std::vector<Rational>> out;
  if (n == 1) return {{Rational(1)}, {Rational(-1)}};
  if (n == 2) {
    for (int x = -radius; x <= radius; ++x)
      for (int y = -radius; y <= radius; ++y)
        if ((x || y) && std::gcd(std::abs(x), std::abs(y)) == 1) out.push_back({Rational(x), Rational(y)});
    return out;
  }
  if (n == 3) {
    for (int x = -radius; x <= radius; ++x)
      for (int y = -radius; y <= radius; ++y)
        for (int z = -radius; z <= radius; ++z)
          if ((x || y || z) && std::gcd(std::gcd(std::abs(x), std::abs(y)), std::abs(z)) == 1)
            out.push_back({Rational(x), Rational(y), Rational(z)});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int s : {1, -1}) {
      std::vector<Rational> dir(n, Rational(0));
      dir[i] = s;
      out.push_back(dir);
    }
  }
  return out;
}

inline Rational cross(const std::vector<Rational>& o, const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Strict convex hull (collinear points dropped), counterclockwise.
inline std::vector<std::vector<Rational>> hull2(std::vector<std::vector<Rational>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<std::vector<Rational>> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace detail

// Image of the occupation polytope under w -> phi_*(w). Vertices come from
// exact LPs over a fan of integer directions; radius sets its density.
inline RotationSet rotation_set(const RotationSpec& phi, int radius = 6) {
  if (phi.size() == 0) throw Error("rotation set needs at least one coordinate");
  RotationSet out;
  out.dimension = phi.size();
  out.sampled = phi.size() > 3;
  const int k = phi.depth();
  auto lp = detail::occupation_lp(phi.alphabet(), k, RotationSpec(phi.alphabet(), {}), {});
  std::vector<std::vector<Rational>> points;
  for (const auto& dir : detail::direction_fan(phi.size(), radius)) {
    std::vector<Rational> c(lp.edges, Rational(0));
    for (std::size_t i = 0; i < phi.size(); ++i) {
      for (std::size_t e = 0; e < lp.edges; ++e) c[e] += dir[i] * phi[i].coefficient(e);
    }
    auto res = solve_lp(lp.rows, lp.rhs, c);
    if (res.status != LpStatus::optimal) throw Error("occupation LP failed while sampling the rotation set");
    OccupationMeasure w{phi.alphabet(), k, res.x, res.value, {}, false};
    points.push_back(rotation_vector(w, phi));
    out.support.push_back({dir, res.value});
  }
  if (phi.size() == 1) {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end());
    out.vertices.push_back(*lo);
    if (*hi != *lo) out.vertices.push_back(*hi);
  } else if (phi.size() == 2) {
    out.vertices = detail::hull2(std::move(points));
  } else {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    out.vertices = std::move(points);
  }
  return out;
}

struct CycleComponent {
  SymbolWord cycle;
  Rational weight;  // coefficient of periodic(cycle) in the mixture
};

// Exact decomposition w = sum_j c_j * (edge frequencies of cycle_j).
inline std::vector<CycleComponent> flow_decomposition(const OccupationMeasure& w) {
  if (!w.is_valid()) throw Error("flow decomposition needs a valid occupation measure");
  const std::size_t d = static_cast<std::size_t>(w.alphabet);
  const std::size_t edges = w.weights.size();
  const std::size_t nodes = edges / d;
  std::vector<Rational> rest = w.weights;
  std::vector<CycleComponent> out;
  for (std::size_t start = 0; start < edges; ++start) {
    while (rest[start] > 0) {
      std::vector<std::size_t> path{start};
      std::vector<long> seen(nodes, -1);
      seen[start / d] = 0;
      std::size_t node = start % nodes;
      while (seen[node] < 0) {
        seen[node] = static_cast<long>(path.size());
        std::size_t next = edges;
        for (std::size_t s = 0; s < d; ++s) {
          if (rest[node * d + s] > 0) {
            next = node * d + s;
            break;
          }
        }
        if (next == edges) throw Error("occupation measure is not balanced");
        path.push_back(next);
        node = next % nodes;
      }
      std::vector<std::size_t> cyc(path.begin() + seen[node], path.end());
      Rational m = rest[cyc.front()];
      for (auto e : cyc) m = std::min(m, rest[e]);
      for (auto e : cyc) rest[e] -= m;
      std::vector<Symbol> symbols;
      for (auto e : cyc) symbols.push_back(static_cast<Symbol>(e / (edges / d)));
      SymbolWord word = SymbolWord(std::move(symbols), w.alphabet).min_rotation();
      const Rational c = m * Rational(static_cast<long>(cyc.size()));
      auto it = std::find_if(out.begin(), out.end(), [&](const CycleComponent& x) { return x.cycle == word; });
      if (it == out.end()) {
        out.push_back({std::move(word), c});
      } else {
        it->weight += c;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const CycleComponent& x, const CycleComponent& y) { return x.cycle < y.cycle; });
  return out;
}

inline ExactMeasure decomposition_measure(const std::vector<CycleComponent>& parts) {
  if (parts.empty()) throw Error("empty flow decomposition");
  if (parts.size() == 1) return ExactMeasure::periodic(parts.front().cycle);
  std::vector<Rational> weights;
  std::vector<ExactMeasure> measures;
  for (const auto& p : parts) {
    weights.push_back(p.weight);
    measures.push_back(ExactMeasure::periodic(p.cycle));
  }
  return ExactMeasure::mixture(std::move(weights), std::move(measures));
}

struct OracleResult {
  bool found = false;
  Rational value;
  std::optional<SymbolWord> cycle;
  std::uint64_t orbits_checked = 0;
  std::uint64_t matches = 0;
};

// Best mean of A over periodic orbits of period <= max_len whose rotation
// vector equals r exactly. Orbits are enumerated as primitive necklaces.
inline OracleResult periodic_oracle(const LocallyConstantPotential& a, const RotationSpec& phi,
                                    const std::vector<Rational>& r, std::size_t max_len) {
  if (a.alphabet() != phi.alphabet()) throw AlphabetMismatch("potential and constraint over different alphabets");
  if (r.size() != phi.size()) throw Error("target vector length differs from constraint count");
  const int d = a.alphabet();
  const std::uint64_t budget = enumeration_budget();
  std::uint64_t total = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    total += checked_power(static_cast<std::uint64_t>(d), len, budget, "periodic oracle");
    if (total > budget) throw BudgetExceeded("periodic oracle enumeration exceeds budget " + std::to_string(budget));
  }
  OracleResult out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::uint64_t count = checked_power(static_cast<std::uint64_t>(d), len, budget, "periodic oracle");
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      SymbolWord w = SymbolWord::from_index(idx, static_cast<int>(len), d);
      if (!w.is_primitive() || !(w.min_rotation() == w)) continue;
      ++out.orbits_checked;
      auto mu = ExactMeasure::periodic(w);
      if (rotation_vector(mu, phi) != r) continue;
      ++out.matches;
      Rational v = integrate(mu, a);
      if (!out.found || v > out.value) {
        out.found = true;
        out.value = v;
        out.cycle = w;
      }
    }
  }
  return out;
}

}  // namespace ergopt
