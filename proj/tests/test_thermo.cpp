#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace ergopt;
using namespace testing_support;

namespace {

// Leading eigenvalue of [[1, e^b], [1, 1]] is 1 + e^{b/2}; log of it without overflow.
double pressure_i01(double beta) {
  const double h = beta / 2;
  return h > 0 ? h + std::log1p(std::exp(-h)) : std::log1p(std::exp(h));
}

// mu_beta(01) = e^{b/2} / (2 (1 + e^{b/2})).
double mass01_i01(double beta) { return 0.5 / (1 + std::exp(-beta / 2)); }

}  // namespace

TEST(Equilibrium, ZeroPotential) {
  LocallyConstantPotential zero(2, 2);
  for (double beta : {0.0, 3.0, 50.0}) {
    auto r = equilibrium(zero, beta);
    EXPECT_NEAR(r.pressure, std::log(2.0), 1e-14);
    EXPECT_NEAR(r.entropy, std::log(2.0), 1e-14);
    EXPECT_NEAR(r.energy, 0.0, 1e-15);
    for (double m : r.cylinder_vector(3)) EXPECT_NEAR(m, 0.125, 1e-14);
  }
}

TEST(Equilibrium, PressureClosedFormI01) {
  auto solver = EquilibriumSolver(indicator("01"));
  for (double beta : {0.0, 0.5, 1.0, 5.0, 20.0, 100.0, 500.0, 700.0, 1000.0, 5000.0}) {
    auto r = solver.solve(beta);
    const double p = pressure_i01(beta);
    EXPECT_LE(std::abs(r.pressure - p), 1e-10 * std::abs(p)) << beta;
    EXPECT_TRUE(std::isfinite(r.pressure));
  }
}

TEST(Equilibrium, MarkovMeasureI01) {
  auto solver = EquilibriumSolver(indicator("01"));
  for (double beta : {0.0, 1.0, 7.0, 40.0}) {
    auto r = solver.solve(beta);
    r.measure.validate(1e-9);
    EXPECT_NEAR(r.measure.cylinder_mass(w2("0")), 0.5, 1e-12);
    EXPECT_NEAR(r.measure.cylinder_mass(w2("01")), mass01_i01(beta), 1e-12);
    EXPECT_NEAR(std::exp(r.log_cylinder_mass(w2("01"))), mass01_i01(beta), 1e-12);
  }
}

TEST(Equilibrium, LogCylinderMassBelowUnderflow) {
  auto r = equilibrium(indicator("01"), 2000.0);
  // mu(11) = 1 / (2 (1 + e^{1000})).
  EXPECT_NEAR(r.log_cylinder_mass(w2("11")), -std::log(2.0) - 1000.0, 1e-9);
  EXPECT_NEAR(r.log_cylinder_mass(w2("1111")), -std::log(2.0) - 1000.0 - 2 * 1000.0, 1e-6);
  EXPECT_NEAR(std::exp(r.log_cylinder_mass(w2("0"))), 0.5, 1e-12);
}

TEST(Equilibrium, VariationalIdentityAndBounds) {
  Gen g(404);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = g.integer(2, 3);
    auto a = g.real_potential(d, 2);
    const double alpha = karp_alpha<double>(a);
    auto solver = EquilibriumSolver(a);
    for (double beta : {0.0, 0.7, 3.0, 30.0, 300.0}) {
      auto r = solver.solve(beta);
      EXPECT_LE(r.variational_gap(), 1e-10 * (1 + std::abs(r.pressure))) << trial << " " << beta;
      EXPECT_GE(r.entropy, -1e-15);
      EXPECT_LE(r.entropy, std::log(static_cast<double>(d)) + 1e-12);
      EXPECT_LE(r.energy, alpha + 1e-12);
      EXPECT_LE(r.eigen_residual, 1e-12);
      if (beta > 0) EXPECT_LE(std::abs(r.pressure / beta - alpha), std::log(static_cast<double>(d)) / beta + 1e-12);
    }
  }
}

TEST(Equilibrium, MatchesDenseEigenvalueAtModerateBeta) {
  Gen g(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = g.potential(2, 3);
    const double beta = g.real(0, 4);
    DeBruijnGraph graph(a);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      m(static_cast<Eigen::Index>(graph.source(e)), static_cast<Eigen::Index>(graph.target(e))) =
          std::exp(beta * to_double(graph.weight(e)));
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    double lambda = 0;
    for (Eigen::Index i = 0; i < 4; ++i) lambda = std::max(lambda, es.eigenvalues()[i].real());
    EXPECT_NEAR(equilibrium(a, beta).pressure, std::log(lambda), 1e-10);
  }
}

TEST(Equilibrium, DepthOnePotentialIsRefined) {
  auto a = LocallyConstantPotential::from_terms(2, 1, {{w2("1"), Rational(1)}});
  auto r = equilibrium(a, 2.0);
  // Bernoulli with weights proportional to (1, e^2).
  EXPECT_NEAR(r.pressure, std::log(1 + std::exp(2.0)), 1e-12);
  EXPECT_NEAR(r.measure.cylinder_mass(w2("1")), std::exp(2.0) / (1 + std::exp(2.0)), 1e-12);
}

TEST(Equilibrium, RejectsNegativeBeta) { EXPECT_THROW(equilibrium(indicator("01"), -1.0), Error); }

TEST(Transfer, LogEntries) {
  auto t = transfer_matrix(indicator("01"), 3.0);
  EXPECT_EQ(t.states, 2u);
  EXPECT_EQ(t.log_entries, (std::vector<double>{0, 3, 0, 0}));
}

TEST(Sweep, ConvergesToPeriodicMeasureForI01) {
  auto schedule = beta_schedule(1, 64, 64, false);
  auto sweep = beta_sweep(indicator("01"), schedule);
  EXPECT_EQ(sweep.verdict, SweepVerdict::converged);
  EXPECT_EQ(sweep.alpha, Rational(1, 2));
  EXPECT_TRUE(sweep.energy_monotone);
  auto target = ExactMeasure::periodic(w2("01")).cylinder_masses(3);
  for (std::size_t i = 0; i < target.size(); ++i) EXPECT_NEAR(sweep.limit_cylinders[i], to_double(target[i]), 1e-6);
  for (const auto& p : sweep.points) {
    EXPECT_NEAR(p.cylinders[w2("010").index()] + p.cylinders[w2("011").index()], mass01_i01(p.beta), 1e-12);
  }
}

TEST(Sweep, PressureConvexAndEnergyMonotone) {
  Gen g(55);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = g.potential(2, 3);
    auto schedule = beta_schedule(0, 40, 41, false);
    auto sweep = beta_sweep(a, schedule);
    EXPECT_TRUE(sweep.energy_monotone);
    for (std::size_t i = 1; i + 1 < sweep.points.size(); ++i) {
      const double second = sweep.points[i + 1].pressure - 2 * sweep.points[i].pressure + sweep.points[i - 1].pressure;
      EXPECT_GE(second, -1e-9);
    }
    const double alpha = to_double(sweep.alpha);
    for (const auto& p : sweep.points) EXPECT_LE(p.energy, alpha + 1e-12);
  }
}

TEST(Sweep, ZeroPotentialIsConstant) {
  auto sweep = beta_sweep(LocallyConstantPotential(2, 2), beta_schedule(1, 10, 10, false));
  EXPECT_EQ(sweep.verdict, SweepVerdict::converged);
  for (const auto& p : sweep.points) {
    EXPECT_NEAR(p.pressure, std::log(2.0), 1e-14);
    EXPECT_NEAR(p.energy, 0.0, 1e-15);
    EXPECT_EQ(p.cylinders, sweep.points.front().cylinders);
  }
}

TEST(Sweep, I01111GroundState) {
  auto r = equilibrium(indicator("01111"), 64.0);
  EXPECT_NEAR(r.energy, 0.2, 1e-3);
  EXPECT_LT(r.entropy, 1e-2);
}

TEST(Sweep, LimitIsMaximizingForUniqueOrbit) {
  Gen g(19);
  int checked = 0;
  for (int trial = 0; trial < 30 && checked < 5; ++trial) {
    auto a = g.potential(2, 2, -1, 1, 4);
    DeBruijnGraph graph(a);
    auto orbits = maximizing_orbits(graph, karp_alpha(graph));
    if (orbits.cycles.size() != 1) continue;
    auto sweep = beta_sweep(a, beta_schedule(100, 300, 5, false));
    if (sweep.verdict != SweepVerdict::converged) continue;
    ++checked;
    auto target = orbits.measures[0].cylinder_masses(3);
    for (std::size_t i = 0; i < target.size(); ++i) EXPECT_NEAR(sweep.limit_cylinders[i], to_double(target[i]), 1e-6);
  }
  EXPECT_GT(checked, 0);
}

TEST(Sweep, JobCountDoesNotChangeResults) {
  auto a = indicator("01111");
  auto schedule = beta_schedule(1, 64, 24, true);
  SweepOptions one, four;
  four.jobs = 4;
  auto s1 = beta_sweep(a, schedule, one);
  auto s4 = beta_sweep(a, schedule, four);
  ASSERT_EQ(s1.points.size(), s4.points.size());
  for (std::size_t i = 0; i < s1.points.size(); ++i) {
    EXPECT_EQ(s1.points[i].pressure, s4.points[i].pressure);
    EXPECT_EQ(s1.points[i].cylinders, s4.points[i].cylinders);
  }
}

TEST(Sweep, VerdictRule) {
  auto pt = [](std::vector<double> c) {
    SweepPoint p;
    p.cylinders = std::move(c);
    return p;
  };
  std::vector<SweepPoint> osc{pt({0.9, 0.1}), pt({0.1, 0.9}), pt({0.9, 0.1}), pt({0.1, 0.9})};
  EXPECT_EQ(detail::sweep_verdict(osc, 1e-6, 1e-3), SweepVerdict::oscillating);
  std::vector<SweepPoint> drift{pt({0.5, 0.5}), pt({0.6, 0.4}), pt({0.7, 0.3}), pt({0.8, 0.2})};
  EXPECT_EQ(detail::sweep_verdict(drift, 1e-6, 1e-3), SweepVerdict::inconclusive);
  std::vector<SweepPoint> still{pt({0.5, 0.5}), pt({0.5, 0.5}), pt({0.5, 0.5})};
  EXPECT_EQ(detail::sweep_verdict(still, 1e-6, 1e-3), SweepVerdict::converged);
  EXPECT_EQ(detail::sweep_verdict({pt({1.0})}, 1e-6, 1e-3), SweepVerdict::inconclusive);
}

TEST(Sweep, RejectsDecreasingSchedule) {
  EXPECT_THROW(beta_sweep(indicator("01"), {2.0, 1.0}), Error);
}

TEST(Schedule, LinearAndGeometric) {
  auto lin = beta_schedule(1, 64, 64, false);
  EXPECT_EQ(lin.front(), 1.0);
  EXPECT_EQ(lin.back(), 64.0);
  EXPECT_NEAR(lin[1], 2.0, 1e-12);
  auto geo = beta_schedule(1, 64, 7, true);
  EXPECT_NEAR(geo[1], 2.0, 1e-12);
  EXPECT_EQ(geo.back(), 64.0);
  EXPECT_THROW(beta_schedule(0, 64, 7, true), Error);
}

class RateFunction : public ::testing::Test {
 protected:
  LocallyConstantPotential a = indicator("01");
  DeBruijnGraph g{a};
  Rational alpha = karp_alpha(g);
  SubactionField<Rational> u = maxplus_subaction(g, alpha);
};

TEST_F(RateFunction, Examples) {
  auto zero = ldp_rate(PointSpec::periodic(w2("01")), u, a, alpha);
  EXPECT_FALSE(zero.infinite);
  EXPECT_EQ(zero.value, 0);
  auto half = ldp_rate(PointSpec::parse("11", "01", 2), u, a, alpha);
  EXPECT_FALSE(half.infinite);
  EXPECT_EQ(half.value, Rational(1, 2));
  auto inf = ldp_rate(PointSpec::periodic(w2("11")), u, a, alpha);
  EXPECT_TRUE(inf.infinite);
  // Term-by-term: R(11) = 1/2, then R(10) = R(01) = 0 forever.
  EXPECT_EQ(half.partial_sums[0], Rational(1, 2));
  EXPECT_EQ(half.partial_sums.back(), Rational(1, 2));
}

TEST_F(RateFunction, PartialSumsNonnegativeAndNondecreasing) {
  Gen gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = PointSpec(gen.word(2, gen.integer(0, 5)), gen.word(2, gen.integer(1, 4)));
    auto r = ldp_rate(x, u, a, alpha, 40);
    for (std::size_t n = 0; n < r.partial_sums.size(); ++n) {
      EXPECT_GE(r.partial_sums[n], 0);
      if (n) EXPECT_GE(r.partial_sums[n], r.partial_sums[n - 1]);
    }
    if (!r.infinite) EXPECT_EQ(r.partial_sums.back(), r.value);
  }
}

TEST_F(RateFunction, RequiresCalibratedSubaction) {
  SubactionField<Rational> bad{{Rational(-1), Rational(1, 2)}, alpha};
  EXPECT_THROW(ldp_rate(PointSpec::periodic(w2("01")), bad, a, alpha), InvalidSubaction);
  // A strict subaction that is not calibrated: u = (0, 1/2) with alpha raised.
  SubactionField<Rational> loose{{Rational(0), Rational(1, 2)}, Rational(1)};
  EXPECT_THROW(ldp_rate(PointSpec::periodic(w2("01")), loose, a, Rational(1)), InvalidSubaction);
}

TEST_F(RateFunction, FloatModeAgrees) {
  SubactionField<double> ud{{to_double(u.values[0]), to_double(u.values[1])}, 0.5};
  auto r = ldp_rate(PointSpec::parse("11", "01", 2), ud, a, 0.5);
  EXPECT_FALSE(r.infinite);
  EXPECT_NEAR(r.value, 0.5, 1e-15);
}

TEST_F(RateFunction, SlopeCheck) {
  auto schedule = beta_schedule(32, 128, 25, false);
  auto c11 = ldp_slope_check(a, w2("11"), schedule, u, alpha);
  EXPECT_NEAR(c11.empirical_slope, -0.5, 0.02);
  EXPECT_TRUE(c11.predicted_finite);
  EXPECT_EQ(c11.predicted_q, Rational(-1, 2));
  EXPECT_LT(c11.gap, 0.02);
  ASSERT_TRUE(c11.minimizer.has_value());
  EXPECT_EQ(*c11.minimizer, PointSpec::parse("11", "01", 2));

  auto c01 = ldp_slope_check(a, w2("01"), schedule, u, alpha);
  EXPECT_NEAR(c01.empirical_slope, 0.0, 0.02);
  EXPECT_EQ(c01.predicted_q, 0);

  auto c00 = ldp_slope_check(a, w2("00"), schedule, u, alpha);
  EXPECT_NEAR(c00.empirical_slope, -0.5, 0.02);
  EXPECT_EQ(c00.predicted_q, Rational(-1, 2));
}

TEST_F(RateFunction, SlopeCheckFlagsUnderflow) {
  auto schedule = beta_schedule(1000, 3000, 6, false);
  auto r = ldp_slope_check(a, w2("11"), schedule, u, alpha);
  EXPECT_TRUE(r.underflow);
  EXPECT_NEAR(r.empirical_slope, -0.5, 1e-6);
}
