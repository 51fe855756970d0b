#pragma once

// Dense two-phase simplex over exact rationals with Bland's anti-cycling
// rule, for problems   maximize c.x  subject to  A x = b, x >= 0.

#include <cstddef>
#include <optional>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/rational.hpp"

namespace ergopt {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<Rational> x;
  Rational value;
  std::vector<std::size_t> basis;  // basic columns of the final tableau
  // For infeasible problems: y with y.A >= 0 componentwise and y.b < 0.
  std::vector<Rational> farkas;
  // Some nonbasic column has zero reduced cost at the optimum.
  bool alternative_optima = false;
  std::size_t pivots = 0;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows, std::vector<Rational>(cols + 1)) {}

  std::vector<Rational>& row(std::size_t i) { return t_[i]; }
  const std::vector<Rational>& row(std::size_t i) const { return t_[i]; }
  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  Rational& rhs(std::size_t i) { return t_[i][n_]; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || t_[i][c] == 0) continue;
      const Rational f = t_[i][c];
      for (std::size_t j = 0; j <= n_; ++j) {
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
      }
    }
  }

  void erase_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<Rational>> t_;
};

// Reduced cost of column j for objective c restricted to `active` columns.
inline Rational reduced_cost(const Tableau& t, const std::vector<Rational>& c, const std::vector<std::size_t>& basis,
                             std::size_t j) {
  Rational r = c[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.row(i)[j] != 0 && c[basis[i]] != 0) r -= c[basis[i]] * t.row(i)[j];
  }
  return r;
}

// Runs simplex iterations over columns [0, active). Returns false if unbounded.
inline bool run_simplex(Tableau& t, const std::vector<Rational>& c, std::vector<std::size_t>& basis,
                        std::size_t active, std::size_t& pivots) {
  for (;;) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < active; ++j) {
      if (reduced_cost(t, c, basis, j) > 0) {
        enter = j;
        break;
      }
    }
    if (!enter) return true;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const Rational& a = t.row(i)[*enter];
      if (a <= 0) continue;
      Rational ratio = t.row(i)[t.cols()] / a;
      if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (!leave) return false;
    t.pivot(*leave, *enter);
    basis[*leave] = *enter;
    ++pivots;
  }
}

}  // namespace detail

inline LpResult solve_lp(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                         const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw Error("LP right-hand side size differs from row count");
  for (const auto& r : a) {
    if (r.size() != n) throw Error("LP row length differs from variable count");
  }

  // Columns: n structural, then m artificials.
  detail::Tableau t(m, n + m);
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    sign[i] = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t.row(i)[j] = sign[i] < 0 ? Rational(-a[i][j]) : a[i][j];
    t.row(i)[n + i] = 1;
    t.rhs(i) = sign[i] < 0 ? Rational(-b[i]) : b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  LpResult out;
  std::vector<Rational> phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  detail::run_simplex(t, phase1, basis, n + m, out.pivots);

  Rational infeas(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) infeas += t.rhs(i);
  }
  if (infeas > 0) {
    // Phase-one duals y = c_B B^{-1}; B^{-1} sits in the artificial columns.
    out.status = LpStatus::infeasible;
    out.farkas.assign(m, Rational(0));
    for (std::size_t k = 0; k < m; ++k) {
      Rational y(0);
      for (std::size_t i = 0; i < m; ++i) y += phase1[basis[i]] * t.row(i)[n + k];
      out.farkas[k] = sign[k] < 0 ? Rational(-y) : Rational(y);
    }
    return out;
  }

  // Pivot out zero-level artificials; rows that cannot be pivoted are redundant.
  for (std::size_t i = 0; i < t.rows();) {
    if (basis[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.row(i)[j] != 0) {
        col = j;
        break;
      }
    }
    if (col) {
      t.pivot(i, *col);
      basis[i] = *col;
      ++out.pivots;
      ++i;
    } else {
      t.erase_row(i);
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  std::vector<Rational> phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!detail::run_simplex(t, phase2, basis, n, out.pivots)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.status = LpStatus::optimal;
  out.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.rows(); ++i) out.x[basis[i]] = t.rhs(i);
  out.value = 0;
  for (std::size_t j = 0; j < n; ++j) out.value += c[j] * out.x[j];
  out.basis = basis;
  std::vector<bool> is_basic(n, false);
  for (auto bidx : basis) is_basic[bidx] = true;
  for (std::size_t j = 0; j < n && !out.alternative_optima; ++j) {
    if (!is_basic[j] && detail::reduced_cost(t, phase2, basis, j) == 0) out.alternative_optima = true;
  }
  return out;
}

}  // namespace ergopt
