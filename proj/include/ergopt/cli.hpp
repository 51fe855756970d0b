#pragma once

// Command implementations behind the ergopt executable. Each command
// writes its report to `out`, errors to `err`, and returns the exit code:
// 0 ok, 2 input error, 3 numerical non-convergence, 4 infeasible constraint.

#include <charconv>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergopt/debruijn.hpp"
#include "ergopt/doubling.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/io.hpp"
#include "ergopt/manifest.hpp"
#include "ergopt/maxplus.hpp"
#include "ergopt/plot.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/rotation.hpp"
#include "ergopt/thermo.hpp"

namespace ergopt::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNonConvergence = 3, kInfeasible = 4 };

struct AlphaOptions {
  std::string potential;
  std::string out;  // manifest prefix; empty: no files
};

struct SubactionOptions {
  std::string potential;
  std::string method = "exact";  // exact | half (locally constant only)
  std::size_t iters = 100000;
  double tol = 1e-12;
  std::string out;  // empty: stem of the potential file
};

struct SweepOptions {
  std::string potential;
  double beta_min = 1;
  double beta_max = 64;
  std::size_t steps = 64;
  std::string grid = "linear";  // linear | geometric
  int depth = 3;
  unsigned jobs = 1;
  std::string ldp;  // cylinder word for the slope check
  std::string out;  // empty: stem of the potential file
};

struct RotationOptions {
  std::string potential;
  std::vector<std::string> phi;
  std::string h;  // comma-separated rationals
  bool vertices = false;
  std::size_t oracle = 0;  // max cycle length; 0: no oracle
  std::string out;         // empty: no files
};

struct PlotOptions {
  std::string csv;
  std::string out;
  std::string title;
  std::string y = "value";
};

// Shortest decimal that round-trips.
inline std::string decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline nlohmann::json rational_json(const Rational& q) {
  return {{"num", numerator(q).str()}, {"den", denominator(q).str()}};
}

inline nlohmann::json rational_json(const std::vector<Rational>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& q : v) out.push_back(rational_json(q));
  return out;
}

namespace detail {

inline std::string prefix_or_stem(const std::string& out, const std::string& input) {
  return out.empty() ? std::filesystem::path(input).stem().string() : out;
}

struct Run {
  RunManifest manifest;
  std::string manifest_path;
  std::vector<std::pair<std::string, std::string>> files;

  void emit(const std::string& path, const std::string& content) { files.emplace_back(path, content); }

  void flush() {
    for (const auto& [path, content] : files) {
      write_text_file(path, content);
      manifest.outputs.push_back(path);
    }
    files.clear();
    if (!manifest_path.empty()) {
      manifest.outputs.push_back(manifest_path);
      manifest.write(manifest_path);
    }
  }
};

template <class F>
int guarded(Run& run, std::ostream& err, F&& body) {
  int code = kOk;
  try {
    code = body();
  } catch (const OutsideRotationSet& e) {
    err << "error: " << e.what() << '\n';
    run.manifest.diagnostics["error"] = e.what();
    run.manifest.diagnostics["certificate"] = {{"normal", rational_json(e.normal())},
                                               {"offset", rational_json(e.offset())}};
    code = kInfeasible;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << " (iterations " << e.iterations() << ", last increment "
        << decimal(e.last_increment()) << ")\n";
    run.manifest.diagnostics["error"] = e.what();
    run.manifest.diagnostics["iterations"] = e.iterations();
    run.manifest.diagnostics["last_increment"] = e.last_increment();
    code = kNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    run.manifest.diagnostics["error"] = e.what();
    code = kInputError;
  }
  run.manifest.exit_code = code;
  try {
    run.flush();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (code == kOk) code = kInputError;
  }
  return code;
}

inline std::string load_input(Run& run, const std::string& path) {
  std::string text = read_file(path);
  run.manifest.add_input(path, text);
  return text;
}

template <Scalar T>
std::vector<StepSegment> word_steps(const std::vector<T>& values, int alphabet, int length) {
  std::vector<StepSegment> segs;
  double width = 1;
  for (int i = 0; i < length; ++i) width /= alphabet;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = to_double(word_to_real(SymbolWord::from_index(i, length, alphabet)));
    segs.push_back({x, x + width, to_double(values[i])});
  }
  return segs;
}

inline std::string masses_text(const ExactMeasure& mu) {
  std::string s;
  const auto m = mu.cylinder_masses(1);
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? " " : "") + std::to_string(i) + ":" + to_string(m[i]);
  return s;
}

inline std::vector<Rational> parse_vector(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw ParseError("empty target vector");
  return out;
}

inline std::string vector_text(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

}  // namespace detail

inline int cmd_alpha(const AlphaOptions& opt, std::ostream& out, std::ostream& err) {
  detail::Run run;
  run.manifest.command = "alpha";
  run.manifest.config = {{"potential", opt.potential}};
  if (!opt.out.empty()) run.manifest_path = opt.out + "_manifest.json";
  return detail::guarded(run, err, [&] {
    auto file = parse_potential(detail::load_input(run, opt.potential), opt.potential);
    if (!std::holds_alternative<LocallyConstantPotential>(file)) {
      throw ParseError(opt.potential + ": alpha needs a locally constant potential (use subaction for grids)");
    }
    const Rational alpha = karp_alpha<Rational>(std::get<LocallyConstantPotential>(file));
    out << to_string(alpha) << '\n' << decimal(to_double(alpha)) << '\n';
    run.manifest.diagnostics["alpha"] = rational_json(alpha);
    return int{kOk};
  });
}

namespace detail {

inline int subaction_locally_constant(Run& run, const SubactionOptions& opt, const LocallyConstantPotential& a,
                                      const std::string& prefix, std::ostream& out) {
  DeBruijnGraph g(a);
  const int k = g.depth();
  const int d = g.alphabet();
  auto& diag = run.manifest.diagnostics;
  const Rational alpha = karp_alpha<Rational>(g);
  out << "alpha = " << to_string(alpha) << " (" << decimal(to_double(alpha)) << ")\n";
  diag["alpha"] = rational_json(alpha);

  std::vector<SymbolWord> cycles;
  std::vector<std::string> locus_words;
  if (opt.method == "exact") {
    auto u = maxplus_subaction<Rational>(g, alpha);
    auto r = residual(g, u, alpha);
    auto locus = contact_locus(g, r, 0);
    for (const auto& w : locus.words) locus_words.push_back(w.to_string());
    run.emit(prefix + "_u.csv", word_table_csv(u.values, d, k - 1));
    run.emit(prefix + "_R.csv", word_table_csv(r.values, d, k));
    run.emit(prefix + "_u.svg", svg_step_plot(word_steps(u.values, d, k - 1), {"subaction u", "x", "u", {}}));
    run.emit(prefix + "_R.svg", svg_step_plot(word_steps(r.values, d, k), {"residual R", "x", "R", {}}));
    cycles = maximizing_orbits(g, alpha).cycles;
    out << "subaction: exact max-plus eigenvector, u(" << g.node_word(0).to_string() << ") = 0\n";
  } else if (opt.method == "half") {
    auto u = half_iteration(a, {}, IterationOptions{opt.iters, opt.tol});
    diag["iterations"] = u.iterations;
    diag["final_increment"] = u.final_increment;
    diag["converged"] = u.converged;
    if (!u.converged) {
      throw NonConvergence("1/2-iteration did not converge within " + std::to_string(opt.iters) + " iterations",
                           u.iterations, u.final_increment);
    }
    const double tol = 1e-6 * (1 + std::abs(u.alpha));
    auto r = residual(g, u, u.alpha, tol);
    auto locus = contact_locus(g, r, tol);
    for (const auto& w : locus.words) locus_words.push_back(w.to_string());
    run.emit(prefix + "_u.csv", word_table_csv(u.values, d, k - 1));
    run.emit(prefix + "_R.csv", word_table_csv(r.values, d, k));
    run.emit(prefix + "_u.svg", svg_step_plot(word_steps(u.values, d, k - 1), {"subaction u", "x", "u", {}}));
    run.emit(prefix + "_R.svg", svg_step_plot(word_steps(r.values, d, k), {"residual R", "x", "R", {}}));
    cycles = locus_cycles(g, locus, 10000).first;
    out << "subaction: 1/2-iteration, " << u.iterations << " iterations, alpha estimate " << decimal(u.alpha) << '\n';
  } else {
    throw ParseError("unknown method '" + opt.method + "' (expected exact or half)");
  }

  out << "contact locus:";
  for (const auto& w : locus_words) out << ' ' << w;
  out << '\n' << "maximizing orbits:\n";
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& c : cycles) {
    auto mu = ExactMeasure::periodic(c);
    out << "  (" << c.to_string() << ")  masses " << masses_text(mu) << '\n';
    orbits.push_back(c.to_string());
  }
  diag["contact_locus"] = locus_words;
  diag["orbits"] = orbits;
  return int{kOk};
}

inline int subaction_grid(Run& run, const SubactionOptions& opt, const GridPotential& a, const std::string& prefix,
                          std::ostream& out) {
  auto& diag = run.manifest.diagnostics;
  auto res = doubling_solve(a, IterationOptions{opt.iters, opt.tol});
  diag["iterations"] = res.subaction.iterations;
  diag["final_increment"] = res.subaction.final_increment;
  diag["converged"] = res.subaction.converged;
  diag["alpha_estimate"] = res.alpha;
  if (!res.subaction.converged) {
    throw NonConvergence("1/2-iteration did not converge within " + std::to_string(opt.iters) + " iterations",
                         res.subaction.iterations, res.subaction.final_increment);
  }
  const double n = static_cast<double>(a.size());
  std::vector<double> xs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) xs[i] = static_cast<double>(i) / n;
  std::vector<double> markers;
  for (const auto& o : res.orbits)
    for (const auto& p : o.points) markers.push_back(to_double(p));
  run.emit(prefix + "_u.csv", grid_table_csv(res.subaction.values));
  run.emit(prefix + "_R.csv", grid_table_csv(res.residual.values));
  run.emit(prefix + "_u.svg", svg_line_plot(xs, res.subaction.values, {"subaction u", "x", "u", markers}));
  run.emit(prefix + "_R.svg", svg_line_plot(xs, res.residual.values, {"residual R", "x", "R", markers}));

  out << "alpha estimate = " << decimal(res.alpha) << '\n';
  out << "subaction: 1/2-iteration on " << a.size() << " grid points, " << res.subaction.iterations
      << " iterations\n";
  out << "contact set: " << res.contact_points.size() << " grid points with R <= " << decimal(res.contact_tol)
      << '\n';
  out << "periodic orbits in contact set:\n";
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : res.orbits) {
    std::string pts;
    nlohmann::json jp = nlohmann::json::array();
    for (std::size_t i = 0; i < o.points.size(); ++i) {
      pts += (i ? ", " : "") + to_string(o.points[i]);
      jp.push_back(to_string(o.points[i]));
    }
    out << "  {" << pts << "}  period " << o.period() << "  max R " << decimal(o.max_residual) << '\n';
    orbits.push_back(jp);
  }
  diag["orbits"] = orbits;
  diag["contact_points"] = res.contact_points.size();
  return int{kOk};
}

}  // namespace detail

inline int cmd_subaction(const SubactionOptions& opt, std::ostream& out, std::ostream& err) {
  detail::Run run;
  run.manifest.command = "subaction";
  run.manifest.config = {{"potential", opt.potential}, {"method", opt.method}, {"iters", opt.iters}, {"tol", opt.tol}};
  const std::string prefix = detail::prefix_or_stem(opt.out, opt.potential);
  run.manifest_path = prefix + "_manifest.json";
  return detail::guarded(run, err, [&] {
    auto file = parse_potential(detail::load_input(run, opt.potential), opt.potential);
    if (auto* a = std::get_if<LocallyConstantPotential>(&file)) return detail::subaction_locally_constant(run, opt, *a, prefix, out);
    return detail::subaction_grid(run, opt, std::get<GridPotential>(file), prefix, out);
  });
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  detail::Run run;
  run.manifest.command = "sweep";
  run.manifest.config = {{"potential", opt.potential}, {"beta_min", opt.beta_min}, {"beta_max", opt.beta_max},
                         {"steps", opt.steps},         {"grid", opt.grid},         {"depth", opt.depth},
                         {"ldp", opt.ldp}};
  const std::string prefix = detail::prefix_or_stem(opt.out, opt.potential);
  run.manifest_path = prefix + "_manifest.json";
  return detail::guarded(run, err, [&] {
    auto file = parse_potential(detail::load_input(run, opt.potential), opt.potential);
    if (!std::holds_alternative<LocallyConstantPotential>(file)) {
      throw ParseError(opt.potential + ": sweep needs a locally constant potential");
    }
    const auto& a = std::get<LocallyConstantPotential>(file);
    if (opt.grid != "linear" && opt.grid != "geometric") throw ParseError("--grid must be linear or geometric");
    if (opt.depth < 1) throw ParseError("--depth must be at least 1");
    if (!(opt.beta_max >= opt.beta_min) || opt.beta_min < 0) throw ParseError("need 0 <= beta-min <= beta-max");
    const auto schedule = beta_schedule(opt.beta_min, opt.beta_max, opt.steps, opt.grid == "geometric");
    ergopt::SweepOptions so;
    so.depth = opt.depth;
    so.jobs = opt.jobs;
    auto sweep = beta_sweep(a, schedule, so);

    std::vector<std::string> header{"beta", "pressure", "entropy", "energy", "pressure_minus_beta_alpha",
                                    "eigen_residual"};
    const auto cells = checked_power(static_cast<std::uint64_t>(a.alphabet()), static_cast<std::uint64_t>(opt.depth),
                                     enumeration_budget(), "cylinder vector");
    for (std::uint64_t i = 0; i < cells; ++i) {
      header.push_back("mu_" + SymbolWord::from_index(i, opt.depth, a.alphabet()).to_string());
    }
    CsvWriter csv(header);
    std::vector<double> betas, energies;
    for (const auto& p : sweep.points) {
      std::vector<std::string> row{decimal(p.beta), decimal(p.pressure), decimal(p.entropy), decimal(p.energy),
                                   decimal(p.pressure_minus_beta_alpha), decimal(p.eigen_residual)};
      for (double c : p.cylinders) row.push_back(decimal(c));
      csv.row(row);
      betas.push_back(p.beta);
      energies.push_back(p.energy);
    }
    run.emit(prefix + "_sweep.csv", csv.str());
    run.emit(prefix + "_sweep.svg", svg_line_plot(betas, energies, {"energy of the equilibrium state", "beta", "energy", {}}));

    out << "alpha = " << to_string(sweep.alpha) << " (" << decimal(to_double(sweep.alpha)) << ")\n";
    out << "points: " << sweep.points.size() << ", energy nondecreasing: " << (sweep.energy_monotone ? "yes" : "no")
        << '\n';
    out << "verdict: " << to_string(sweep.verdict) << '\n';
    out << "limit cylinder vector (depth " << opt.depth << "):\n";
    for (std::size_t i = 0; i < sweep.limit_cylinders.size(); ++i) {
      out << "  " << SymbolWord::from_index(i, opt.depth, a.alphabet()).to_string() << ' '
          << decimal(sweep.limit_cylinders[i]) << '\n';
    }
    auto& diag = run.manifest.diagnostics;
    diag["alpha"] = rational_json(sweep.alpha);
    diag["verdict"] = to_string(sweep.verdict);
    diag["energy_monotone"] = sweep.energy_monotone;
    diag["limit_cylinders"] = sweep.limit_cylinders;
    diag["points"] = nlohmann::json::array();
    for (const auto& p : sweep.points) {
      diag["points"].push_back({{"beta", p.beta},
                                {"pressure", p.pressure},
                                {"entropy", p.entropy},
                                {"energy", p.energy},
                                {"eigen_residual", p.eigen_residual},
                                {"cylinders", p.cylinders}});
    }

    if (!opt.ldp.empty()) {
      const auto cyl = SymbolWord::parse(opt.ldp, a.alphabet());
      DeBruijnGraph g(a);
      const Rational alpha = karp_alpha<Rational>(g);
      auto u = maxplus_subaction<Rational>(g, alpha);
      auto ldp = ldp_slope_check(a, cyl, schedule, u, alpha, {}, so);
      out << "ldp cylinder " << opt.ldp << ": slope " << decimal(ldp.empirical_slope) << ", predicted "
          << (ldp.predicted_finite ? to_string(ldp.predicted_q) : std::string("-inf")) << ", gap "
          << decimal(ldp.gap) << (ldp.underflow ? " (below double range; log-space values used)" : "") << '\n';
      diag["ldp"] = {{"cylinder", opt.ldp},
                     {"slope", ldp.empirical_slope},
                     {"predicted", ldp.predicted_finite ? rational_json(ldp.predicted_q) : nlohmann::json("-inf")},
                     {"gap", ldp.gap}};
    }
    return int{kOk};
  });
}

inline int cmd_rotation(const RotationOptions& opt, std::ostream& out, std::ostream& err) {
  detail::Run run;
  run.manifest.command = "rotation";
  run.manifest.config = {{"potential", opt.potential}, {"phi", opt.phi}, {"h", opt.h}, {"vertices", opt.vertices},
                         {"oracle", opt.oracle}};
  if (!opt.out.empty()) run.manifest_path = opt.out + "_manifest.json";
  return detail::guarded(run, err, [&] {
    if (opt.phi.empty()) throw ParseError("rotation needs at least one --phi constraint file");
    if (opt.h.empty() && !opt.vertices) throw ParseError("rotation needs --h or --vertices");
    if (opt.oracle > 0 && opt.h.empty()) throw ParseError("--oracle needs a target --h");
    auto file = parse_potential(detail::load_input(run, opt.potential), opt.potential);
    if (!std::holds_alternative<LocallyConstantPotential>(file)) {
      throw ParseError(opt.potential + ": rotation needs a locally constant potential");
    }
    const auto& a = std::get<LocallyConstantPotential>(file);
    std::vector<LocallyConstantPotential> coords;
    for (const auto& p : opt.phi) {
      auto f = parse_potential(detail::load_input(run, p), p);
      if (!std::holds_alternative<LocallyConstantPotential>(f)) throw ParseError(p + ": constraint must be locally constant");
      coords.push_back(std::get<LocallyConstantPotential>(f));
    }
    RotationSpec phi(a.alphabet(), coords);
    auto& diag = run.manifest.diagnostics;

    if (opt.vertices) {
      auto set = rotation_set(phi);
      if (set.dimension == 1) {
        const auto& lo = set.vertices.front()[0];
        const auto& hi = set.vertices.back()[0];
        out << "[" << to_string(lo) << ", " << to_string(hi) << "]\n";
      } else {
        out << (set.sampled ? "support maximizers:" : "vertices:");
        for (const auto& v : set.vertices) out << ' ' << detail::vector_text(v);
        out << '\n';
      }
      nlohmann::json verts = nlohmann::json::array();
      for (const auto& v : set.vertices) verts.push_back(rational_json(v));
      diag["vertices"] = verts;
      diag["sampled"] = set.sampled;
    }

    if (!opt.h.empty()) {
      const auto h = detail::parse_vector(opt.h);
      auto beta = beta_function(a, phi, h);
      out << to_string(beta.value) << '\n';
      out << "decimal " << decimal(to_double(beta.value)) << '\n';
      out << "occupation weights:\n";
      const auto& w = beta.occupation;
      for (std::size_t e = 0; e < w.weights.size(); ++e) {
        if (w.weights[e] != 0) {
          out << "  " << SymbolWord::from_index(e, w.depth, w.alphabet).to_string() << ' ' << to_string(w.weights[e])
              << '\n';
        }
      }
      auto parts = flow_decomposition(w);
      out << "cycle decomposition:";
      nlohmann::json jparts = nlohmann::json::array();
      for (const auto& p : parts) {
        out << " (" << p.cycle.to_string() << ")x" << to_string(p.weight);
        jparts.push_back({{"cycle", p.cycle.to_string()}, {"weight", rational_json(p.weight)}});
      }
      out << '\n';
      if (w.alternative_optima) out << "note: the optimum has alternative optimal bases\n";
      diag["beta"] = rational_json(beta.value);
      diag["weights"] = rational_json(w.weights);
      diag["decomposition"] = jparts;
      diag["alternative_optima"] = w.alternative_optima;

      if (opt.oracle > 0) {
        auto orc = periodic_oracle(a, phi, h, opt.oracle);
        if (orc.found) {
          out << "oracle L=" << opt.oracle << ": " << to_string(orc.value) << " via (" << orc.cycle->to_string()
              << "), gap " << to_string(Rational(beta.value - orc.value)) << '\n';
          diag["oracle"] = {{"L", opt.oracle},
                            {"value", rational_json(orc.value)},
                            {"cycle", orc.cycle->to_string()},
                            {"gap", rational_json(Rational(beta.value - orc.value))}};
        } else {
          out << "oracle L=" << opt.oracle << ": no periodic orbit with this rotation vector\n";
          diag["oracle"] = {{"L", opt.oracle}, {"found", false}};
        }
      }
    }
    return int{kOk};
  });
}

inline int cmd_plot(const PlotOptions& opt, std::ostream& out, std::ostream& err) {
  detail::Run run;
  run.manifest.command = "plot";
  run.manifest.config = {{"csv", opt.csv}, {"y", opt.y}, {"title", opt.title}};
  return detail::guarded(run, err, [&] {
    if (opt.out.empty()) throw ParseError("plot needs --out");
    auto table = parse_csv(detail::load_input(run, opt.csv), opt.csv);
    auto number = [&](const std::string& s, std::size_t row) {
      try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ParseError(opt.csv + ":" + std::to_string(row + 2) + ": not a number: '" + s + "'");
      }
    };
    const std::string title = opt.title.empty() ? std::filesystem::path(opt.csv).stem().string() : opt.title;
    std::string svg;
    if (table.has("beta")) {
      const std::string y = opt.y == "value" ? "energy" : opt.y;
      const auto cx = table.column("beta"), cy = table.column(y);
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        xs.push_back(number(table.rows[i][cx], i));
        ys.push_back(number(table.rows[i][cy], i));
      }
      svg = svg_line_plot(xs, ys, {title, "beta", y, {}});
    } else if (table.has("word")) {
      const auto cx = table.column("x"), cy = table.column(opt.y);
      std::vector<StepSegment> segs;
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double x0 = number(table.rows[i][cx], i);
        const double x1 = i + 1 < table.rows.size() ? number(table.rows[i + 1][cx], i + 1) : 1.0;
        segs.push_back({x0, x1, number(table.rows[i][cy], i)});
      }
      svg = svg_step_plot(segs, {title, "x", opt.y, {}});
    } else {
      const auto cx = table.column("x"), cy = table.column(opt.y);
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        xs.push_back(number(table.rows[i][cx], i));
        ys.push_back(number(table.rows[i][cy], i));
      }
      svg = svg_line_plot(xs, ys, {title, "x", opt.y, {}});
    }
    run.emit(opt.out, svg);
    out << "wrote " << opt.out << '\n';
    return int{kOk};
  });
}

}  // namespace ergopt::cli
