#pragma once

// Thermodynamic formalism for locally constant potentials: pressure and
// equilibrium (Gibbs) Markov measures at inverse temperature beta, sweeps
// toward zero temperature, and the zero-temperature large-deviation rate.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ergopt/debruijn.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/maxplus.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/shiftspace.hpp"

namespace ergopt {

namespace detail {
inline double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}
}  // namespace detail

// exp(beta A) on de Bruijn edges, kept as log entries beta * A(e).
struct TransferMatrix {
  double beta = 0;
  int alphabet = 2;
  std::size_t states = 1;
  std::vector<double> log_entries;  // per edge, row state * d + s
};

inline TransferMatrix transfer_matrix(const LocallyConstantPotential& a, double beta) {
  if (!(beta >= 0) || !std::isfinite(beta)) throw Error("beta must be finite and nonnegative");
  const auto refined = a.depth() < 2 ? a.refined(2) : a;
  DeBruijnGraph g(refined);
  TransferMatrix t;
  t.beta = beta;
  t.alphabet = g.alphabet();
  t.states = g.node_count();
  t.log_entries.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) t.log_entries[e] = beta * to_double(g.weight(e));
  return t;
}

struct EquilibriumOptions {
  double tol = 1e-12;             // eigen residual, relative and componentwise
  std::size_t max_iters = 200000;  // power iterations before the dense fallback
};

struct EquilibriumResult {
  double beta = 0;
  double pressure = 0;
  double entropy = 0;
  double energy = 0;
  double eigen_residual = 0;
  std::size_t iterations = 0;
  FloatMeasure measure = FloatMeasure::bernoulli({1.0});
  int alphabet = 2;
  int order = 1;  // Markov order, k - 1
  std::vector<double> log_stationary;
  std::vector<double> log_transition;  // per edge, row state * d + s

  // log mu(cylinder of w); accurate far below the double underflow threshold.
  double log_cylinder_mass(const SymbolWord& w) const {
    if (w.alphabet() != alphabet) throw AlphabetMismatch("cylinder word alphabet differs from measure");
    const std::size_t r = static_cast<std::size_t>(order);
    const std::size_t states = log_stationary.size();
    const std::size_t d = static_cast<std::size_t>(alphabet);
    if (w.size() < r) {
      std::size_t span = 1;
      for (std::size_t i = w.size(); i < r; ++i) span *= d;
      const std::size_t first = static_cast<std::size_t>(w.index()) * span;
      double acc = -std::numeric_limits<double>::infinity();
      for (std::size_t s = first; s < first + span; ++s) acc = detail::log_sum_exp(acc, log_stationary[s]);
      return acc;
    }
    std::size_t state = static_cast<std::size_t>(w.prefix(r).index());
    double acc = log_stationary[state];
    for (std::size_t i = r; i < w.size(); ++i) {
      acc += log_transition[state * d + static_cast<std::size_t>(w[i])];
      state = (state * d + static_cast<std::size_t>(w[i])) % states;
    }
    return acc;
  }

  std::vector<double> cylinder_vector(int depth) const { return measure.cylinder_masses(depth); }

  double variational_gap() const { return std::abs(pressure - (entropy + beta * energy)); }
};

// Computes equilibrium states of one potential at any beta. The transfer
// matrix is conjugated by a max-plus subaction u (gauge), giving entries
// exp(-beta R(e)) <= 1 with spectral radius in [1, d]; power iteration runs
// on the lazy matrix M + I in log-space, so no entry overflows at any beta.
class EquilibriumSolver {
 public:
  explicit EquilibriumSolver(const LocallyConstantPotential& a)
      : potential_(a.depth() < 2 ? a.refined(2) : a), graph_(potential_) {
    gauge_alpha_ = karp_alpha<double>(graph_);
    auto u = maxplus_subaction<double>(graph_, gauge_alpha_);
    residual_ = residual_values(graph_, u.values, gauge_alpha_).values;
    weights_ = graph_.weights_as<double>();
  }

  const LocallyConstantPotential& potential() const noexcept { return potential_; }
  const DeBruijnGraph& graph() const noexcept { return graph_; }

  EquilibriumResult solve(double beta, const EquilibriumOptions& opts = {}) const {
    if (!(beta >= 0) || !std::isfinite(beta)) throw Error("beta must be finite and nonnegative");
    const std::size_t n = graph_.node_count();
    const std::size_t d = static_cast<std::size_t>(graph_.alphabet());
    const std::size_t m = graph_.edge_count();
    std::vector<double> g(m);
    for (std::size_t e = 0; e < m; ++e) g[e] = -beta * residual_[e];

    std::vector<double> h(n, 0.0), nu(n, 0.0);
    double lambda = 0, residual = std::numeric_limits<double>::infinity();
    std::size_t iters = 0;
    bool ok = power_iterate(g, h, nu, lambda, residual, iters, opts);
    if (!ok) {
      dense_start(g, h, nu);
      std::size_t more = 0;
      EquilibriumOptions polish = opts;
      polish.max_iters = std::max<std::size_t>(1000, opts.max_iters / 10);
      ok = power_iterate(g, h, nu, lambda, residual, more, polish);
      iters += more;
      if (!ok) {
        throw NonConvergence("transfer-operator power iteration stagnated at beta = " + to_string(beta), iters,
                             residual);
      }
    }

    EquilibriumResult out;
    out.beta = beta;
    out.alphabet = graph_.alphabet();
    out.order = graph_.depth() - 1;
    out.iterations = iters;
    out.eigen_residual = residual;
    out.pressure = std::log(lambda) + beta * gauge_alpha_;

    out.log_transition.resize(m);
    for (std::size_t v = 0; v < n; ++v) {
      double row = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < d; ++s) {
        const std::size_t e = v * d + s;
        row = detail::log_sum_exp(row, g[e] + h[graph_.target(e)]);
      }
      for (std::size_t s = 0; s < d; ++s) {
        const std::size_t e = v * d + s;
        out.log_transition[e] = g[e] + h[graph_.target(e)] - row;
      }
    }
    out.log_stationary.resize(n);
    double total = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      out.log_stationary[v] = nu[v] + h[v];
      total = detail::log_sum_exp(total, out.log_stationary[v]);
    }
    for (auto& x : out.log_stationary) x -= total;

    std::vector<double> pi(n), p(m);
    for (std::size_t v = 0; v < n; ++v) pi[v] = std::exp(out.log_stationary[v]);
    for (std::size_t e = 0; e < m; ++e) p[e] = std::exp(out.log_transition[e]);
    double energy = 0, entropy = 0;
    for (std::size_t e = 0; e < m; ++e) {
      const double flow = pi[graph_.source(e)] * p[e];
      energy += flow * weights_[e];
      if (p[e] > 0) entropy -= flow * out.log_transition[e];
    }
    out.energy = energy;
    out.entropy = entropy;
    out.measure = FloatMeasure::markov(graph_.alphabet(), std::move(pi), std::move(p), out.order, 1e-9);
    return out;
  }

 private:
  // Lazy power iteration for right (h) and left (nu) Perron vectors, in logs.
  bool power_iterate(const std::vector<double>& g, std::vector<double>& h, std::vector<double>& nu, double& lambda,
                     double& residual, std::size_t& iters, const EquilibriumOptions& opts) const {
    const std::size_t n = graph_.node_count();
    const std::size_t d = static_cast<std::size_t>(graph_.alphabet());
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> mh(n), mnu(n);
    for (iters = 1; iters <= opts.max_iters; ++iters) {
      std::fill(mh.begin(), mh.end(), ninf);
      std::fill(mnu.begin(), mnu.end(), ninf);
      for (std::size_t e = 0; e < g.size(); ++e) {
        const std::size_t v = e / d, w = graph_.target(e);
        mh[v] = detail::log_sum_exp(mh[v], g[e] + h[w]);
        mnu[w] = detail::log_sum_exp(mnu[w], g[e] + nu[v]);
      }
      double lo = std::numeric_limits<double>::infinity(), hi = ninf;
      double lo_l = lo, hi_l = hi;
      for (std::size_t v = 0; v < n; ++v) {
        lo = std::min(lo, mh[v] - h[v]);
        hi = std::max(hi, mh[v] - h[v]);
        lo_l = std::min(lo_l, mnu[v] - nu[v]);
        hi_l = std::max(hi_l, mnu[v] - nu[v]);
      }
      // Collatz-Wielandt bounds exp(lo) <= lambda <= exp(hi).
      lambda = std::exp(0.5 * (lo + hi));
      residual = std::max(std::expm1(hi - lo), std::expm1(hi_l - lo_l));
      if (residual <= opts.tol) return true;
      double top_h = ninf, top_nu = ninf;
      for (std::size_t v = 0; v < n; ++v) {
        h[v] = detail::log_sum_exp(h[v], mh[v]);
        nu[v] = detail::log_sum_exp(nu[v], mnu[v]);
        top_h = std::max(top_h, h[v]);
        top_nu = std::max(top_nu, nu[v]);
      }
      for (std::size_t v = 0; v < n; ++v) {
        h[v] -= top_h;
        nu[v] -= top_nu;
      }
    }
    iters = opts.max_iters;
    return false;
  }

  // Dense eigen-decomposition start for near-degenerate spectra.
  void dense_start(const std::vector<double>& g, std::vector<double>& h, std::vector<double>& nu) const {
    const std::size_t n = graph_.node_count();
    const std::size_t d = static_cast<std::size_t>(graph_.alphabet());
    if (n > 2048) return;
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t e = 0; e < g.size(); ++e) {
      mat(static_cast<Eigen::Index>(e / d), static_cast<Eigen::Index>(graph_.target(e))) += std::exp(g[e]);
    }
    auto perron = [](const Eigen::MatrixXd& m, std::vector<double>& out) {
      Eigen::EigenSolver<Eigen::MatrixXd> es(m);
      Eigen::Index best = 0;
      for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
      }
      Eigen::VectorXd vec = es.eigenvectors().col(best).real();
      if (vec.sum() < 0) vec = -vec;
      const double top = vec.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < vec.size(); ++i) {
        out[static_cast<std::size_t>(i)] = std::log(std::max(std::abs(vec[i]) / top, 1e-300));
      }
    };
    perron(mat, h);
    perron(mat.transpose(), nu);
  }

  LocallyConstantPotential potential_;
  DeBruijnGraph graph_;
  double gauge_alpha_ = 0;
  std::vector<double> residual_;
  std::vector<double> weights_;
};

inline EquilibriumResult equilibrium(const LocallyConstantPotential& a, double beta,
                                     const EquilibriumOptions& opts = {}) {
  return EquilibriumSolver(a).solve(beta, opts);
}

enum class SweepVerdict { converged, oscillating, inconclusive };

inline const char* to_string(SweepVerdict v) {
  switch (v) {
    case SweepVerdict::converged: return "converged";
    case SweepVerdict::oscillating: return "oscillating";
    default: return "inconclusive";
  }
}

struct SweepPoint {
  double beta = 0;
  double pressure = 0;
  double entropy = 0;
  double energy = 0;
  double pressure_minus_beta_alpha = 0;
  double eigen_residual = 0;
  std::vector<double> cylinders;
};

struct SweepResult {
  std::vector<EquilibriumResult> results;
  std::vector<SweepPoint> points;
  Rational alpha;
  int depth = 3;
  bool energy_monotone = true;
  SweepVerdict verdict = SweepVerdict::inconclusive;
  std::vector<double> limit_cylinders;
};

struct SweepOptions {
  int depth = 3;  // cylinder vector depth
  unsigned jobs = 1;
  double converged_tol = 1e-6;
  double cluster_separation = 1e-3;
  EquilibriumOptions equilibrium{};
};

inline std::vector<double> beta_schedule(double lo, double hi, std::size_t steps, bool geometric) {
  if (steps == 0) return {};
  if (steps == 1) return {lo};
  if (geometric && !(lo > 0)) throw Error("geometric beta schedule needs beta-min > 0");
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
    out[i] = geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  out.back() = hi;
  return out;
}

namespace detail {
inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// converged: the last three cylinder vectors pairwise within tol.
// oscillating: the last (up to six) points alternate between two tight
// clusters that sit more than `separation` apart.
inline SweepVerdict sweep_verdict(const std::vector<SweepPoint>& pts, double tol, double separation) {
  const std::size_t n = pts.size();
  if (n >= 3) {
    const auto& a = pts[n - 1].cylinders;
    const auto& b = pts[n - 2].cylinders;
    const auto& c = pts[n - 3].cylinders;
    if (linf(a, b) < tol && linf(a, c) < tol && linf(b, c) < tol) return SweepVerdict::converged;
  }
  if (n >= 4) {
    const std::size_t m = std::min<std::size_t>(n, 6);
    double spread = 0;
    for (std::size_t i = n - m; i < n; ++i)
      for (std::size_t j = i + 2; j < n; j += 2) spread = std::max(spread, linf(pts[i].cylinders, pts[j].cylinders));
    const double gap = linf(pts[n - 1].cylinders, pts[n - 2].cylinders);
    if (gap > separation && spread < 0.1 * gap) return SweepVerdict::oscillating;
  }
  return SweepVerdict::inconclusive;
}
}  // namespace detail

// Equilibrium states along an increasing beta schedule. Points are
// independent; with jobs > 1 they are computed concurrently and merged in
// schedule order, so the output does not depend on the job count.
inline SweepResult beta_sweep(const LocallyConstantPotential& a, const std::vector<double>& schedule,
                              const SweepOptions& opts = {}) {
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] > schedule[i - 1])) throw Error("beta schedule must be strictly increasing");
  }
  EquilibriumSolver solver(a);
  SweepResult out;
  out.depth = opts.depth;
  out.alpha = karp_alpha<Rational>(solver.graph());
  out.results.resize(schedule.size());
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1 || schedule.size() < 2) {
    for (std::size_t i = 0; i < schedule.size(); ++i) out.results[i] = solver.solve(schedule[i], opts.equilibrium);
  } else {
    std::vector<std::future<void>> tasks;
    for (unsigned w = 0; w < jobs; ++w) {
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < schedule.size(); i += jobs) out.results[i] = solver.solve(schedule[i], opts.equilibrium);
      }));
    }
    for (auto& t : tasks) t.get();
  }
  const double alpha = to_double(out.alpha);
  for (const auto& r : out.results) {
    SweepPoint p;
    p.beta = r.beta;
    p.pressure = r.pressure;
    p.entropy = r.entropy;
    p.energy = r.energy;
    p.pressure_minus_beta_alpha = r.pressure - r.beta * alpha;
    p.eigen_residual = r.eigen_residual;
    p.cylinders = r.cylinder_vector(opts.depth);
    out.points.push_back(std::move(p));
  }
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (out.points[i].energy < out.points[i - 1].energy - 1e-12) out.energy_monotone = false;
  }
  out.verdict = detail::sweep_verdict(out.points, opts.converged_tol, opts.cluster_separation);
  if (!out.points.empty()) out.limit_cylinders = out.points.back().cylinders;
  return out;
}

template <Scalar T>
struct RateFunctionResult {
  PointSpec point;
  bool infinite = false;
  T value{};                   // meaningful when !infinite
  std::vector<T> partial_sums;  // sum_{n < N} R(sigma^n x) for N = 1..horizon
};

// I(x) = sum_{n >= 0} R(sigma^n x) for a calibrated subaction u. For an
// eventually periodic x the tail is periodic: a positive period sum makes
// I infinite, a zero one leaves the finite transient sum.
template <Scalar T>
RateFunctionResult<T> ldp_rate(const PointSpec& x, const SubactionField<T>& u, const LocallyConstantPotential& a,
                               const T& alpha, std::size_t horizon = 64, double tol = is_exact_v<T> ? 0.0 : 1e-9) {
  if (x.alphabet() != a.alphabet()) throw AlphabetMismatch("point and potential over different alphabets");
  DeBruijnGraph g(a);
  auto report = verify_subaction(g, u, alpha, tol);
  if (!report.is_calibrated) {
    throw InvalidSubaction("rate function needs a calibrated subaction (fails at " +
                               (report.is_subaction ? report.uncalibrated_location : report.worst_location) + ")",
                           report.is_subaction ? report.uncalibrated_location : report.worst_location);
  }
  auto r = residual_values(g, u.values, alpha);
  const std::size_t k = static_cast<std::size_t>(a.depth());
  auto term = [&](std::size_t n) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) idx = idx * static_cast<std::uint64_t>(a.alphabet()) + static_cast<std::uint64_t>(x.at(n + i));
    return r.values[static_cast<std::size_t>(idx)];
  };
  RateFunctionResult<T> out{x, false, T(0), {}};
  T acc(0);
  for (std::size_t n = 0; n < horizon; ++n) {
    acc += term(n);
    out.partial_sums.push_back(acc);
  }
  const std::size_t pre = x.preperiod().size();
  const std::size_t per = x.period().size();
  T cycle_sum(0);
  for (std::size_t n = pre; n < pre + per; ++n) cycle_sum += term(n);
  if (is_exact_v<T> ? cycle_sum > 0 : to_double(cycle_sum) > tol) {
    out.infinite = true;
    return out;
  }
  T transient(0);
  for (std::size_t n = 0; n < pre; ++n) transient += term(n);
  out.value = transient;
  return out;
}

struct LdpSlopeResult {
  double empirical_slope = 0;
  bool predicted_finite = false;
  Rational predicted_q;  // -min of I over the searched points of C
  double gap = 0;        // |empirical - predicted|
  std::optional<PointSpec> minimizer;
  bool underflow = false;  // some mu_beta(C) is below the double range
  SweepVerdict verdict = SweepVerdict::inconclusive;
};

struct LdpSearch {
  int bridge_length = -1;  // default 3k
  std::size_t cycle_cap = 1000;
  double fit_min = -1;  // fit over beta >= fit_min; negative: top half of the schedule
};

// Least-squares slope of log mu_beta(C) against beta over the top half of
// the schedule, compared with Q(C) = -min I over points C·b·(cycle)^inf,
// where b ranges over bridge words and the cycle over zero-residual cycles.
// Selection at zero temperature is assumed; the sweep verdict is reported.
inline LdpSlopeResult ldp_slope_check(const LocallyConstantPotential& a, const SymbolWord& cylinder,
                                      const std::vector<double>& schedule, const SubactionField<Rational>& u,
                                      const Rational& alpha, const LdpSearch& search = {},
                                      const SweepOptions& sweep_opts = {}) {
  if (schedule.size() < 2) throw Error("slope fit needs at least two beta values");
  LdpSlopeResult out;
  auto sweep = beta_sweep(a, schedule, sweep_opts);
  out.verdict = sweep.verdict;
  std::size_t first = schedule.size() / 2;
  if (search.fit_min >= 0) {
    first = static_cast<std::size_t>(std::lower_bound(schedule.begin(), schedule.end(), search.fit_min) - schedule.begin());
    if (first + 2 > schedule.size()) throw Error("fewer than two beta values inside the fit range");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < schedule.size(); ++i) {
    const double lm = sweep.results[i].log_cylinder_mass(cylinder);
    if (lm < std::log(std::numeric_limits<double>::min())) out.underflow = true;
    xs.push_back(schedule[i]);
    ys.push_back(lm);
  }
  if (xs.size() < 2) {
    xs.insert(xs.begin(), schedule[first - 1]);
    ys.insert(ys.begin(), sweep.results[first - 1].log_cylinder_mass(cylinder));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.empirical_slope = sxy / sxx;

  DeBruijnGraph g(a);
  auto r = residual(g, u, alpha);
  auto [cycles, truncated] = locus_cycles(g, contact_locus(g, r, 0), search.cycle_cap);
  (void)truncated;
  const int bridge = search.bridge_length < 0 ? 3 * a.depth() : search.bridge_length;
  const int d = a.alphabet();
  std::uint64_t candidates = 0;
  std::optional<Rational> best;
  for (int len = 0; len <= bridge; ++len) {
    const std::uint64_t words = checked_power(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(len),
                                              enumeration_budget(), "rate-function search");
    for (std::uint64_t b = 0; b < words; ++b) {
      SymbolWord pre = cylinder.concat(SymbolWord::from_index(b, len, d));
      for (const auto& c : cycles) {
        for (std::size_t rot = 0; rot < c.size(); ++rot) {
          if (++candidates > enumeration_budget()) throw BudgetExceeded("rate-function search exceeds budget");
          PointSpec x(pre, c.rotated(rot));
          auto rate = ldp_rate<Rational>(x, u, a, alpha, 1);
          if (!rate.infinite && (!best || rate.value < *best)) {
            best = rate.value;
            out.minimizer = x;
          }
        }
      }
    }
  }
  if (best) {
    out.predicted_finite = true;
    out.predicted_q = -*best;
    out.gap = std::abs(out.empirical_slope - to_double(out.predicted_q));
  } else {
    out.gap = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace ergopt
