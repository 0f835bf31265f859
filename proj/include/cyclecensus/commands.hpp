#pragma once

// The census/model/report/plot commands behind the command-line tool. Each
// takes a plain options struct so tests can drive them without a process.

#include "cyclecensus/analysis.hpp"
#include "cyclecensus/census.hpp"
#include "cyclecensus/exact.hpp"
#include "cyclecensus/io.hpp"
#include "cyclecensus/model.hpp"
#include "cyclecensus/svg.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

namespace cyclecensus {

inline constexpr const char* kToolVersion = "1.0.0";

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// $RESULTS_DIR if set, else "results".
inline fs::path default_results_dir() {
  if (const char* env = std::getenv("RESULTS_DIR"); env && *env) return env;
  return "results";
}

/// UTC timestamp; honours SOURCE_DATE_EPOCH for reproducible manifests.
inline std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw CommandError("output directory " + dir.string() + " cannot be created");
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw CommandError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

struct Style {
  bool color = false;
  std::string bold(const std::string& s) const { return color ? "\033[1m" + s + "\033[0m" : s; }
};

inline Style terminal_style(std::ostream& out) {
  Style s;
  const char* no_color = std::getenv("NO_COLOR");
  s.color = (&out == &std::cout) && isatty(STDOUT_FILENO) && !(no_color && *no_color);
  return s;
}

// ---------------------------------------------------------------------------

struct CensusCommand {
  std::uint32_t q_min = 2, q_max = 27;
  unsigned degree = 2;
  Family family = Family::polynomial;
  std::string mode = "auto";  // full | reduced | auto
  unsigned threads = 0;
  fs::path out = default_results_dir();
  bool resume = false;
  std::string command_line;
};

inline int run_census(const CensusCommand& cmd, std::ostream& log = std::cout) {
  if (cmd.q_min < 2 || cmd.q_max < cmd.q_min || cmd.q_max > kMaxFieldOrder)
    throw CommandError("invalid q range [" + std::to_string(cmd.q_min) + ", " + std::to_string(cmd.q_max) + "]");
  if (cmd.degree < 1) throw CommandError("degree must be >= 1");
  if (cmd.mode != "full" && cmd.mode != "reduced" && cmd.mode != "auto") throw CommandError("unknown mode '" + cmd.mode + "'");
  const auto qs = prime_powers_in_range(cmd.q_min, cmd.q_max);
  if (qs.empty()) throw CommandError("no prime powers in the requested range");
  ensure_writable_dir(cmd.out);
  Manifest manifest = Manifest::load(cmd.out);

  if (cmd.resume) {
    std::vector<std::string> corrupt;
    for (auto q : qs) {
      const std::string name = spectrum_file_name(q, cmd.degree, cmd.family);
      if (!fs::exists(cmd.out / name)) continue;
      if (!manifest.get("file." + name + ".crc32"))
        corrupt.push_back(name + ": present but not in manifest");
      else if (!manifest.file_valid(cmd.out, name))
        corrupt.push_back(name + ": checksum mismatch");
    }
    if (!corrupt.empty()) {
      std::string msg = "corrupt resume state:";
      for (const auto& c : corrupt) msg += "\n  " + c;
      throw CommandError(msg);
    }
  }

  const CensusMode mode = cmd.mode == "full" ? CensusMode::full : CensusMode::reduced;
  bool changed = false;
  for (auto q : qs) {
    const std::string name = spectrum_file_name(q, cmd.degree, cmd.family);
    if (cmd.resume && manifest.file_valid(cmd.out, name)) {
      log << "skip " << name << " (checksum ok)\n";
      continue;
    }
    const FieldSpec field = FieldSpec::of_order(q);
    CensusRecord rec = cmd.family == Family::polynomial ? census_poly(field, cmd.degree, mode, {cmd.threads})
                                                        : census_rational(field, cmd.degree, {cmd.threads});
    const std::string content = format_spectrum_file(rec);
    write_file_atomic(cmd.out / name, content);
    manifest.register_file(name, content);
    manifest.set("file." + name + ".mode", to_string(rec.mode));
    if (!rec.note.empty()) manifest.set("file." + name + ".note", rec.note);
    manifest.set("field.q" + std::to_string(q) + ".modulus", join_u32(field.modulus()));
    log << "wrote " << name << " (" << to_string(rec.mode) << ", " << rec.total_maps << " maps)\n";
    changed = true;
  }
  if (changed) {
    const std::string sweep = "sweep.census." + to_string(cmd.family) + ".d" + std::to_string(cmd.degree);
    manifest.set(sweep, "q=" + std::to_string(cmd.q_min) + ".." + std::to_string(cmd.q_max) + " mode=" + cmd.mode +
                            " q_set=all prime powers in range");
    manifest.set("tool.version", kToolVersion);
    manifest.set("run.census.command", cmd.command_line);
    manifest.set("run.census.threads", std::to_string(resolve_threads(cmd.threads)));
    manifest.set("run.census.timestamp", utc_timestamp());
    manifest.save(cmd.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ModelCommand {
  std::uint32_t q = 3;
  unsigned degree = 2;
  unsigned k_max = 3;
  Family family = Family::polynomial;
  std::optional<fs::path> use_census;
  fs::path out = default_results_dir();
  std::uint64_t budget = EnumerationBudget{}.max_operations;
  std::string command_line;
};

inline std::string model_file_name(std::uint32_t q, unsigned d, Family family) {
  return "model_" + to_string(family) + "_d" + std::to_string(d) + "_q" + std::to_string(q) + ".csv";
}

inline int run_model(const ModelCommand& cmd, std::ostream& log = std::cout) {
  const FieldSpec field = FieldSpec::of_order(cmd.q);
  const std::uint32_t m = domain_size(cmd.q, cmd.family);
  if (cmd.k_max < 1 || cmd.k_max > m) throw CommandError("k-max must lie in [1, " + std::to_string(m) + "]");
  std::optional<CensusRecord> census;
  if (cmd.use_census) {
    const fs::path path = *cmd.use_census / spectrum_file_name(cmd.q, cmd.degree, cmd.family);
    if (!fs::exists(path)) throw CommandError("missing census input " + path.string());
    census = load_spectrum_file(path);
  }
  ensure_writable_dir(cmd.out);
  const EnumerationBudget budget{cmd.budget};

  CsvTable table({"q", "d", "k", "family", "count_sets", "e_x", "e_y", "e_xy", "residual", "scaled_residual",
                  "scaled_residual_float", "path", "e_x_check", "e_y_check"});
  bool all_ok = true;
  for (unsigned k = 1; k <= cmd.k_max; ++k) {
    ExpectationRequest req;
    req.budget = budget;
    req.census = census ? &*census : nullptr;
    std::optional<ModelReport> rep;
    // Prefer the most checked route that fits the budget.
    const std::vector<std::pair<ExpectationPath, bool>> attempts =
        census ? std::vector<std::pair<ExpectationPath, bool>>{{ExpectationPath::both, true}, {ExpectationPath::both, false}, {ExpectationPath::census, false}}
               : std::vector<std::pair<ExpectationPath, bool>>{{ExpectationPath::enumeration, true}, {ExpectationPath::enumeration, false}};
    std::string last_error;
    for (auto [path, verify] : attempts) {
      req.path = path;
      req.verify_moments = verify;
      try {
        rep = expectations(field, cmd.degree, k, cmd.family, req);
        break;
      } catch (const BudgetExceeded& e) {
        last_error = e.what();
      }
    }
    if (!rep) throw CommandError("k=" + std::to_string(k) + ": " + last_error + "; supply --use-census or raise --budget");
    auto check = [](const std::optional<Rational>& enumerated, const Rational& closed) -> std::string {
      if (!enumerated) return "skipped";
      return *enumerated == closed ? "pass" : "fail";
    };
    const std::string cx = check(rep->e_x_enumerated, rep->e_x);
    const std::string cy = check(rep->e_y_enumerated, rep->e_y);
    if (cx == "fail" || cy == "fail") all_ok = false;
    table.row({std::to_string(cmd.q), std::to_string(cmd.degree), std::to_string(k), to_string(cmd.family),
               rep->count_sets.str(), to_fraction_string(rep->e_x), to_fraction_string(rep->e_y),
               to_fraction_string(rep->e_xy), to_fraction_string(rep->residual), to_fraction_string(rep->scaled_residual),
               format_double(rep->scaled_residual), to_string(rep->path), cx, cy});
    log << "k=" << k << " e_xy=" << to_fraction_string(rep->e_xy) << " residual=" << to_fraction_string(rep->residual)
        << " path=" << to_string(rep->path) << " E[X] check " << cx << ", E[Y] check " << cy << "\n";
  }
  const std::string name = model_file_name(cmd.q, cmd.degree, cmd.family);
  const std::string content = table.str();
  write_file_atomic(cmd.out / name, content);
  Manifest manifest = Manifest::load(cmd.out);
  manifest.register_file(name, content);
  manifest.set("field.q" + std::to_string(cmd.q) + ".modulus", join_u32(field.modulus()));
  manifest.set("tool.version", kToolVersion);
  manifest.set("run.model.command", cmd.command_line);
  manifest.set("run.model.budget", std::to_string(cmd.budget));
  manifest.set("run.model.timestamp", utc_timestamp());
  manifest.save(cmd.out);
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct ReportCommand {
  fs::path in = default_results_dir();
  std::optional<fs::path> out;  // defaults to `in`
  unsigned degree = 2;
  Family family = Family::polynomial;
  unsigned k_max = 0;  // 0: largest domain size among records
  std::optional<std::uint32_t> q_min, q_max;  // when set, every prime power in range must be present
  std::uint32_t residual_q_max = 101;
  std::string command_line;
};

namespace detail {

inline std::vector<CensusRecord> load_required(const fs::path& dir, unsigned d, Family family,
                                               std::optional<std::uint32_t> q_min, std::optional<std::uint32_t> q_max) {
  std::vector<CensusRecord> records = load_census_dir(dir, d, family);
  if (q_min || q_max) {
    std::set<std::uint32_t> have;
    for (const auto& r : records) have.insert(r.q);
    std::vector<std::string> missing;
    for (auto q : prime_powers_in_range(q_min.value_or(2), q_max.value_or(reference_q_max(d) ? reference_q_max(d) : 2)))
      if (!have.count(q)) missing.push_back((dir / spectrum_file_name(q, d, family)).string());
    if (!missing.empty()) {
      std::string msg = "missing census inputs:";
      for (const auto& m : missing) msg += "\n  " + m;
      throw CommandError(msg);
    }
    const std::uint32_t lo = q_min.value_or(2), hi = q_max.value_or(UINT32_MAX);
    std::erase_if(records, [&](const CensusRecord& r) { return r.q < lo || r.q > hi; });
  }
  if (records.empty())
    throw CommandError("no census files " + (dir / ("census_" + to_string(family) + "_d" + std::to_string(d) + "_q*.csv")).string());
  return records;
}

inline void emit(const fs::path& dir, Manifest& manifest, const std::string& name, const std::string& content) {
  write_file_atomic(dir / name, content);
  manifest.register_file(name, content);
}

}  // namespace detail

inline int run_report(const ReportCommand& cmd, std::ostream& log = std::cout) {
  const auto records = detail::load_required(cmd.in, cmd.degree, cmd.family, cmd.q_min, cmd.q_max);
  const fs::path out = cmd.out.value_or(cmd.in);
  ensure_writable_dir(out);
  Manifest manifest = Manifest::load(out);
  const Style style = terminal_style(log);
  unsigned k_max = cmd.k_max;
  if (k_max == 0)
    for (const auto& r : records) k_max = std::max(k_max, domain_size(r.q, r.family));
  const std::string tag = to_string(cmd.family) + "_d" + std::to_string(cmd.degree);

  log << style.bold("census records:") << " " << records.size() << " (q=" << records.front().q << ".." << records.back().q << ")\n";

  // Cycle support: first appearance and totals per length.
  const auto support = cycle_support(records, k_max);
  {
    CsvTable t({"k", "first_q", "total", "q_count"});
    for (const auto& row : support)
      t.row({std::to_string(row.k), std::to_string(row.first_q), row.total.str(), std::to_string(row.present_q.size())});
    detail::emit(out, manifest, "cycle_support_" + tag + ".csv", t.str());
  }
  unsigned largest_observed = 0;
  for (const auto& row : support)
    if (row.first_q != 0) largest_observed = row.k;
  for (const auto& row : support) {
    if (row.k > largest_observed) break;
    if (row.first_q == 0)
      log << "k=" << row.k << ": absent for all q in the sweep\n";
    else
      log << "first q with a " << row.k << "-cycle: " << row.first_q << "\n";
  }
  if (largest_observed > 0) {
    const auto& top = support[largest_observed - 1];
    log << style.bold("largest observed cycle length:") << " " << largest_observed << " (" << top.total.str() << " cycles";
    if (top.present_q.size() == 1) log << ", all at q=" << top.present_q.front();
    log << ")\n";
    if (largest_observed < k_max) log << "k > " << largest_observed << ": absent for all q in the sweep\n";
  }

  if (cmd.family == Family::polynomial) {
    const CkTable ck = ck_table(records, k_max);
    CsvTable t({"k", "C_k", "C_k_exact", "argmax_q", "observed", "first_q"});
    t.comment("d=" + std::to_string(ck.d) + " records=" + std::to_string(ck.q_values.size()) + " q=" +
              std::to_string(ck.q_values.front()) + ".." + std::to_string(ck.q_values.back()) +
              (ck.provisional ? " provisional (sub-range of the reference sweep)" : " complete"));
    for (const auto& e : ck.entries)
      t.row({std::to_string(e.k), format_double(e.value), to_fraction_string(e.value), std::to_string(e.argmax_q),
             e.observed ? "yes" : "no", std::to_string(e.first_q)});
    detail::emit(out, manifest, "ck_table_" + tag + ".csv", t.str());
    for (unsigned k : {6U, 10U}) {
      if (k > k_max) continue;
      const auto& e = ck.at(k);
      log << style.bold("C_" + std::to_string(k) + " =") << " " << format_double(e.value) << " (argmax q=" << e.argmax_q << ")"
          << (ck.provisional ? " [provisional]" : "") << "\n";
    }
  }

  {
    CsvTable t({"q", "k", "observed", "predicted", "deviation_times_q", "deviation_times_q_float"});
    for (unsigned k = 1; k <= k_max; ++k)
      for (const auto& row : conjecture_check(records, cmd.degree, k, cmd.family))
        t.row({std::to_string(row.q), std::to_string(k), to_fraction_string(row.observed), to_fraction_string(row.predicted),
               to_fraction_string(row.deviation_times_q), format_double(row.deviation_times_q)});
    detail::emit(out, manifest, "conjecture_" + tag + ".csv", t.str());
  }

  {
    const auto rows = mean_components(records);
    CsvTable t({"q", "mean_components", "kruskal", "gap", "gap_float", "running_max_abs_gap"});
    t.comment(cmd.family == Family::polynomial ? "gap = P(q,d) - K(q)" : "gap = R(q,d) - K(q+1)");
    for (const auto& r : rows)
      t.row({std::to_string(r.q), to_fraction_string(r.mean), to_fraction_string(r.kruskal), to_fraction_string(r.gap),
             format_double(r.gap), format_double(r.running_max_abs_gap)});
    detail::emit(out, manifest, "mean_components_" + tag + ".csv", t.str());
    log << style.bold("max |mean components - Kruskal|:") << " " << format_double(rows.back().running_max_abs_gap) << "\n";
  }

  {
    const ResidualSummary s = heuristic_residuals(records, cmd.residual_q_max);
    CsvTable t({"q", "k", "scaled_residual_float"});
    t.comment("scaled residual = (E[XY] - E[X]E[Y]) * q^(2k-d)" + std::string(cmd.family == Family::rational ? " with 2k-2d" : ""));
    for (const auto& r : s.rows) t.row({std::to_string(r.q), std::to_string(r.k), format_double(r.scaled_residual)});
    detail::emit(out, manifest, "heuristic_residual_" + tag + ".csv", t.str());
    if (!s.rows.empty()) {
      log << style.bold("max |scaled residual|:") << " " << format_double(s.max_abs) << " at q=" << s.argmax_q << " k=" << s.argmax_k
          << " (q <= " << cmd.residual_q_max << ")\n";
      log << style.bold("max |scaled residual| over observed lengths:") << " " << format_double(s.max_abs_observed)
          << " at q=" << s.argmax_observed_q << " k=" << s.argmax_observed_k << " (suggested magnitude for d=2: about 60)\n";
    }
  }

  manifest.set("tool.version", kToolVersion);
  manifest.set("run.report.command", cmd.command_line);
  manifest.set("run.report.timestamp", utc_timestamp());
  manifest.save(out);
  return 0;
}

// ---------------------------------------------------------------------------

struct PlotCommand {
  fs::path in = default_results_dir();
  std::optional<fs::path> out;
  unsigned degree = 2;
  std::vector<unsigned> ks;
  bool ck = false;
  unsigned k_max = 0;
  std::optional<std::uint32_t> q_min, q_max;
  std::string command_line;
};

inline std::string spectrum_plot(const std::vector<CensusRecord>& records, const CkTable& ck, unsigned k) {
  const Rational c = ck.at(k).value;
  SvgPlot plot;
  plot.title = "k=" + std::to_string(k) + " cycles, d=" + std::to_string(ck.d) + " (C_k=" + format_double(to_double(c)).substr(0, 8) + ")";
  plot.x_label = "q";
  plot.y_label = "number of k-cycles";
  SvgSeries observed{"observed total", SvgSeries::Style::markers, "#1f77b4", {}};
  SvgSeries predicted{"predicted G", SvgSeries::Style::line, "#2ca02c", {}};
  SvgSeries upper{"G + C_k(q^2-q)", SvgSeries::Style::line, "#d62728", {}};
  SvgSeries lower{"G - C_k(q^2-q)", SvgSeries::Style::line, "#ff7f0e", {}};
  for (const auto& r : records) {
    const double q = r.q;
    const Rational g = Rational(BigInt(r.total_maps)) * interpolation_mean(r.q, k);
    // |P-hat - G| <= C_k (q^2 - q) for d = 2; in general the family size over q.
    const Rational band = c * Rational(BigInt(r.total_maps), BigInt(r.q));
    observed.points.emplace_back(q, static_cast<double>(r.aggregate[k]));
    predicted.points.emplace_back(q, to_double(g));
    upper.points.emplace_back(q, to_double(g + band));
    lower.points.emplace_back(q, to_double(g - band));
  }
  plot.series = {observed, predicted, upper, lower};
  return plot.render();
}

inline std::string ck_plot(const CkTable& ck) {
  SvgPlot plot;
  plot.title = "C_k by cycle length, d=" + std::to_string(ck.d);
  plot.x_label = "k";
  plot.y_label = "C_k";
  SvgSeries observed{"some k-cycle observed", SvgSeries::Style::markers, "#1f77b4", {}};
  SvgSeries absent{"no k-cycle observed", SvgSeries::Style::markers, "#d62728", {}};
  for (const auto& e : ck.entries) (e.observed ? observed : absent).points.emplace_back(e.k, to_double(e.value));
  plot.series = {observed, absent};
  return plot.render();
}

inline int run_plot(const PlotCommand& cmd, std::ostream& log = std::cout) {
  if (cmd.ks.empty() && !cmd.ck) throw CommandError("plot: nothing to do (give --k or --ck)");
  const auto records = detail::load_required(cmd.in, cmd.degree, Family::polynomial, cmd.q_min, cmd.q_max);
  unsigned k_max = cmd.k_max;
  if (k_max == 0)
    for (const auto& r : records) k_max = std::max(k_max, r.q);
  for (unsigned k : cmd.ks) k_max = std::max(k_max, k);
  std::vector<std::string> absent;
  for (unsigned k : cmd.ks) {
    if (k == 0) throw CommandError("plot: k must be positive");
    bool any_defined = false;
    for (const auto& r : records) any_defined |= k <= r.q;
    if (!any_defined)
      for (const auto& r : records) absent.push_back("(q=" + std::to_string(r.q) + ", k=" + std::to_string(k) + ")");
  }
  if (!absent.empty()) {
    std::string msg = "plot: no data for";
    for (const auto& a : absent) msg += " " + a;
    throw CommandError(msg);
  }
  const CkTable ck = ck_table(records, k_max);
  const fs::path out = cmd.out.value_or(cmd.in);
  ensure_writable_dir(out);
  Manifest manifest = Manifest::load(out);
  const std::string tag = "d" + std::to_string(cmd.degree);
  for (unsigned k : cmd.ks) {
    const std::string name = "plot_" + tag + "_k" + std::to_string(k) + ".svg";
    detail::emit(out, manifest, name, spectrum_plot(records, ck, k));
    log << "wrote " << name << "\n";
  }
  if (cmd.ck) {
    const std::string name = "plot_" + tag + "_ck.svg";
    detail::emit(out, manifest, name, ck_plot(ck));
    log << "wrote " << name << "\n";
  }
  manifest.set("tool.version", kToolVersion);
  manifest.set("run.plot.command", cmd.command_line);
  manifest.set("run.plot.timestamp", utc_timestamp());
  manifest.save(out);
  return 0;
}

}  // namespace cyclecensus
