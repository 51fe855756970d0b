#pragma once

// Subactions for the doubling map T(x) = 2x mod 1 on a uniform dyadic grid.
//
// Grid point i stands for the cell [i/N, (i+1)/N). The preimages y/2 and
// (y+1)/2 of a point in cell j lie in cells floor(j/2) and floor(j/2) + N/2,
// so the max-plus operator on the grid is
//   (Gv)(j) = max(v(j/2) + A(j/2), v(j/2 + N/2) + A(j/2 + N/2)).

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/maxplus.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"

namespace ergopt {

class GridPotential {
 public:
  explicit GridPotential(std::vector<double> values, std::string builtin = {})
      : values_(std::move(values)), builtin_(std::move(builtin)) {
    const std::size_t n = values_.size();
    if (n < 4 || (n & (n - 1)) != 0) {
      throw GridError("grid size must be a power of 2 and at least 4 (got " + std::to_string(n) + ")");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw GridError("grid potential values must be finite");
    }
  }

  // A(x) = sin^2(2 pi x) sampled at i/N.
  static GridPotential sin2(std::size_t n = std::size_t{1} << 14) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
      v[i] = s * s;
    }
    return GridPotential(std::move(v), "sin2");
  }

  // Binary locally constant potential sampled at the left endpoints of the
  // cells, i.e. through the dyadic embedding of words into [0,1).
  static GridPotential from_locally_constant(const LocallyConstantPotential& a, std::size_t n) {
    if (a.alphabet() != 2) throw GridError("only binary potentials embed into the doubling-map grid");
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    if (bits < static_cast<std::size_t>(a.depth())) throw GridError("grid too coarse for the potential depth");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = to_double(a.coefficient(i >> (bits - static_cast<std::size_t>(a.depth()))));
    return GridPotential(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::string& builtin() const noexcept { return builtin_; }

  bool operator==(const GridPotential& other) const = default;

 private:
  std::vector<double> values_;
  std::string builtin_;
};

// A periodic orbit of T, given by its points p/q (q odd) in orbit order.
struct GridOrbit {
  std::vector<Rational> points;
  double max_residual = 0;

  std::size_t period() const noexcept { return points.size(); }
};

struct DoublingResult {
  SubactionField<double> subaction;
  ResidualField<double> residual;  // R(i) = u(2i mod N) - u(i) - A(i) + alpha
  double alpha = 0;
  double contact_tol = 0;
  std::vector<std::size_t> contact_points;  // grid indices with R <= contact_tol
  std::vector<GridOrbit> orbits;           // periodic orbits inside {R <= orbit_tol}
};

struct OrbitSearch {
  std::size_t max_period = 12;
  std::uint64_t max_denominator = 4095;
  double tol = -1;  // negative: use the contact tolerance
};

inline Predecessors predecessors(const GridPotential& a) {
  Predecessors p;
  p.nodes = a.size();
  p.fan = 2;
  p.source.resize(2 * p.nodes);
  p.weight.resize(2 * p.nodes);
  const std::size_t half = p.nodes / 2;
  for (std::size_t j = 0; j < p.nodes; ++j) {
    const std::size_t lo = j / 2, hi = j / 2 + half;
    p.source[2 * j] = lo;
    p.source[2 * j + 1] = hi;
    p.weight[2 * j] = a[lo];
    p.weight[2 * j + 1] = a[hi];
  }
  return p;
}

inline SubactionField<double> half_iteration(const GridPotential& a, std::vector<double> u0 = {},
                                             const IterationOptions& opts = {}) {
  return half_iteration(predecessors(a), std::move(u0), opts);
}

// Grid cell containing x in [0, 1).
inline std::size_t grid_cell(const Rational& x, std::size_t n) {
  Rational scaled = x * Rational(static_cast<long>(n));
  Integer cell = numerator(scaled) / denominator(scaled);
  return static_cast<std::size_t>(cell.convert_to<unsigned long>() % n);
}

inline ResidualField<double> grid_residual(const GridPotential& a, const SubactionField<double>& u, double alpha,
                                           double tol) {
  const std::size_t n = a.size();
  if (u.values.size() != n) throw GridError("subaction and potential grids differ in size");
  ResidualField<double> r;
  r.alpha = alpha;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.values[i] = u.values[(2 * i) % n] - u.values[i] - a[i] + alpha;
    if (i == 0 || r.values[i] < r.min_value) r.min_value = r.values[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (r.values[i] < -tol) {
      throw InvalidSubaction("subaction inequality fails at grid point " + std::to_string(i) + " (R = " +
                                 to_string(r.values[i]) + ")",
                             std::to_string(i));
    }
  }
  return r;
}

// Periodic orbits of T of period <= max_period (the odd-denominator rationals)
// whose residual R(x) = u(cell(Tx)) - u(cell x) - A(cell x) + alpha stays <= tol
// at every orbit point. Orbits are listed by period, then by least point.
inline std::vector<GridOrbit> detect_orbits(const GridPotential& a, const SubactionField<double>& u, double alpha,
                                            const OrbitSearch& search, double tol) {
  const std::size_t n = a.size();
  auto cell_residual = [&](std::size_t from, std::size_t to) { return u.values[to] - u.values[from] - a[from] + alpha; };
  std::vector<GridOrbit> found;
  for (std::uint64_t q = 1; q <= search.max_denominator; q += 2) {
    std::size_t order = 0;
    std::uint64_t pw = 1 % q;
    for (std::size_t t = 1; t <= search.max_period; ++t) {
      pw = (pw * 2) % q;
      if (pw == 1 % q) {
        order = t;
        break;
      }
    }
    if (order == 0) continue;
    for (std::uint64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1 && !(q == 1 && p == 0)) continue;
      // Visit each orbit once, from its least numerator.
      bool least = true;
      std::uint64_t x = p;
      std::vector<std::uint64_t> nums{p};
      for (std::size_t t = 1; t < order; ++t) {
        x = (2 * x) % q;
        if (x < p) least = false;
        nums.push_back(x);
      }
      if (!least) continue;
      GridOrbit orbit;
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < order; ++t) {
        Rational here(static_cast<long>(nums[t]), static_cast<long>(q));
        Rational next(static_cast<long>(nums[(t + 1) % order]), static_cast<long>(q));
        worst = std::max(worst, cell_residual(grid_cell(here, n), grid_cell(next, n)));
        orbit.points.push_back(here);
      }
      if (worst <= tol) {
        orbit.max_residual = worst;
        found.push_back(std::move(orbit));
      }
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const GridOrbit& x, const GridOrbit& y) {
    if (x.period() != y.period()) return x.period() < y.period();
    return x.points.front() < y.points.front();
  });
  return found;
}

// 1/2-iteration on the grid, then residual, contact set, and orbit scan.
// A run that hits max_iters is still returned; check subaction.converged.
inline DoublingResult doubling_solve(const GridPotential& a, const IterationOptions& opts = {},
                                     const OrbitSearch& search = {}) {
  DoublingResult out;
  out.subaction = half_iteration(a, {}, opts);
  out.alpha = out.subaction.alpha;
  out.subaction.alpha = out.alpha;
  out.contact_tol = 1e-6 * (1 + std::abs(out.alpha));
  // An unconverged field can violate the inequality; report it instead of throwing.
  const double check_tol = out.subaction.converged ? out.contact_tol : std::numeric_limits<double>::infinity();
  out.residual = grid_residual(a, out.subaction, out.alpha, check_tol);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (out.residual.values[i] <= out.contact_tol) out.contact_points.push_back(i);
  }
  const double orbit_tol = search.tol < 0 ? out.contact_tol : search.tol;
  out.orbits = detect_orbits(a, out.subaction, out.alpha, search, orbit_tol);
  return out;
}

}  // namespace ergopt
