// Command-line front end: census, model, report, plot.

#include "cyclecensus/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

std::string joined_command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cyclecensus;
  CLI::App app{"Cycle statistics of functional graphs of polynomials and rational maps over finite fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  const std::string command_line = joined_command_line(argc, argv);
  std::string family_name = "poly";

  CensusCommand census;
  auto* c = app.add_subcommand("census", "exhaustive cycle census over every prime power in a range");
  c->add_option("--q-min", census.q_min, "smallest field order")->required();
  c->add_option("--q-max", census.q_max, "largest field order")->required();
  c->add_option("--degree", census.degree, "map degree")->required();
  c->add_option("--family", family_name, "poly or rational")->check(CLI::IsMember({"poly", "polynomial", "rational"}));
  c->add_option("--mode", census.mode, "full, reduced, or auto")->check(CLI::IsMember({"full", "reduced", "auto"}));
  c->add_option("--threads", census.threads, "worker threads (0 = all cores)");
  c->add_option("--out", census.out, "results directory (default $RESULTS_DIR or ./results)");
  c->add_flag("--resume", census.resume, "skip spectrum files whose checksums validate");

  ModelCommand model;
  std::string model_census;
  auto* m = app.add_subcommand("model", "exact E[X], E[Y], E[XY] and correlation residuals");
  m->add_option("--q", model.q, "field order")->required();
  m->add_option("--degree", model.degree, "map degree")->required();
  m->add_option("--k-max", model.k_max, "largest set size")->required();
  m->add_option("--family", family_name, "poly or rational")->check(CLI::IsMember({"poly", "polynomial", "rational"}));
  m->add_option("--use-census", model_census, "directory with census files (enables the census path)");
  m->add_option("--out", model.out, "results directory");
  m->add_option("--budget", model.budget, "operation cap for direct enumeration");

  ReportCommand report;
  std::string report_out;
  std::uint32_t report_q_min = 0, report_q_max = 0;
  auto* r = app.add_subcommand("report", "C_k table, conjecture deviations, mean components vs Kruskal");
  r->add_option("--in", report.in, "directory with census files");
  r->add_option("--out", report_out, "output directory (default: --in)");
  r->add_option("--degree", report.degree, "map degree");
  r->add_option("--family", family_name, "poly or rational")->check(CLI::IsMember({"poly", "polynomial", "rational"}));
  r->add_option("--k-max", report.k_max, "largest cycle length (default: largest domain)");
  r->add_option("--q-min", report_q_min, "require every prime power from here");
  r->add_option("--q-max", report_q_max, "require every prime power up to here");
  r->add_option("--residual-q-max", report.residual_q_max, "largest q in the heuristic residual table");

  PlotCommand plot;
  std::string plot_out;
  auto* p = app.add_subcommand("plot", "SVG plots of k-cycle totals with C_k bands, or of C_k");
  p->add_option("--in", plot.in, "directory with census files");
  p->add_option("--out", plot_out, "output directory (default: --in)");
  p->add_option("--degree", plot.degree, "map degree");
  p->add_option("--k", plot.ks, "cycle length to plot (repeatable)");
  p->add_flag("--ck", plot.ck, "plot C_k against k");
  p->add_option("--k-max", plot.k_max, "largest k in the C_k plot");

  CLI11_PARSE(app, argc, argv);

  try {
    const Family family = parse_family(family_name);
    if (c->parsed()) {
      census.family = family;
      census.command_line = command_line;
      return run_census(census);
    }
    if (m->parsed()) {
      model.family = family;
      model.command_line = command_line;
      if (!model_census.empty()) model.use_census = model_census;
      return run_model(model);
    }
    if (r->parsed()) {
      report.family = family;
      report.command_line = command_line;
      if (!report_out.empty()) report.out = report_out;
      if (r->count("--q-min")) report.q_min = report_q_min;
      if (r->count("--q-max")) report.q_max = report_q_max;
      return run_report(report);
    }
    if (p->parsed()) {
      plot.command_line = command_line;
      if (!plot_out.empty()) plot.out = plot_out;
      return run_plot(plot);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
