#include <iostream>

#include "CLI11.hpp"
#include "ergopt/cli.hpp"

int main(int argc, char** argv) {
  using namespace ergopt::cli;
  CLI::App app{"Ergodic optimization and zero-temperature limits for shift spaces and the doubling map"};
  app.set_version_flag("--version", ERGOPT_VERSION);
  app.set_config("--config", "", "TOML file with option defaults; [command] sections apply to subcommands");
  app.require_subcommand(1);

  AlphaOptions alpha;
  auto* a = app.add_subcommand("alpha", "Exact maximizing value of a locally constant potential");
  a->add_option("potential", alpha.potential, "Potential file (JSON)")->required();
  a->add_option("--out", alpha.out, "Prefix for the run manifest");

  SubactionOptions sub;
  auto* s = app.add_subcommand("subaction", "Calibrated subaction, residual, contact locus and maximizing orbits");
  s->add_option("potential", sub.potential, "Potential file (JSON)")->required();
  s->add_option("--method", sub.method, "exact (max-plus eigenvector) or half (1/2-iteration)")
      ->check(CLI::IsMember({"exact", "half"}))
      ->capture_default_str();
  s->add_option("--iters", sub.iters, "Iteration cap for the 1/2-iteration")->capture_default_str();
  s->add_option("--tol", sub.tol, "Sup-norm increment tolerance")->capture_default_str();
  s->add_option("--out", sub.out, "Output prefix (default: potential file stem)");

  SweepOptions sw;
  auto* w = app.add_subcommand("sweep", "Equilibrium states along a beta schedule");
  w->add_option("potential", sw.potential, "Potential file (JSON)")->required();
  w->add_option("--beta-min", sw.beta_min, "Smallest beta")->capture_default_str();
  w->add_option("--beta-max", sw.beta_max, "Largest beta")->capture_default_str();
  w->add_option("--steps", sw.steps, "Number of beta values")->capture_default_str();
  w->add_option("--grid", sw.grid, "linear or geometric")
      ->check(CLI::IsMember({"linear", "geometric"}))
      ->capture_default_str();
  w->add_option("--depth", sw.depth, "Cylinder depth for the verdict")->capture_default_str();
  w->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str();
  w->add_option("--ldp", sw.ldp, "Cylinder word for the large-deviation slope check");
  w->add_option("--out", sw.out, "Output prefix (default: potential file stem)");

  RotationOptions rot;
  auto* r = app.add_subcommand("rotation", "Rotation sets and constrained maximizing values");
  r->set_help_flag("--help", "Print this help message and exit");
  r->add_option("potential", rot.potential, "Potential file (JSON)")->required();
  r->add_option("--phi", rot.phi, "Constraint coordinate file (repeatable)")->required();
  r->add_option("--h", rot.h, "Target rotation vector, comma-separated rationals");
  r->add_flag("--vertices", rot.vertices, "Print the rotation set");
  r->add_option("--oracle", rot.oracle, "Compare with periodic orbits of period <= L");
  r->add_option("--out", rot.out, "Prefix for the run manifest");

  PlotOptions plot;
  auto* p = app.add_subcommand("plot", "Render a CSV written by subaction or sweep as SVG");
  p->add_option("csv", plot.csv, "CSV file")->required();
  p->add_option("--out", plot.out, "SVG path")->required();
  p->add_option("--title", plot.title, "Plot title");
  p->add_option("--y", plot.y, "Column to plot (sweep CSVs default to energy)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  if (a->parsed()) return cmd_alpha(alpha, std::cout, std::cerr);
  if (s->parsed()) return cmd_subaction(sub, std::cout, std::cerr);
  if (w->parsed()) return cmd_sweep(sw, std::cout, std::cerr);
  if (r->parsed()) return cmd_rotation(rot, std::cout, std::cerr);
  return cmd_plot(plot, std::cout, std::cerr);
}
