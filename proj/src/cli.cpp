#include "crnlap/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "crnlap/crn.hpp"
#include "crnlap/equilibrium.hpp"
#include "crnlap/error.hpp"
#include "crnlap/report.hpp"
#include "crnlap/selftest.hpp"
#include "crnlap/simulator.hpp"

namespace crnlap {

namespace {

StateVector parse_vector(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw ValidationError(flag + ": cannot read '" + item + "' as a number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ValidationError(flag + ": empty vector");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string show(const Eigen::VectorXd& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", round12(v(i)));
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + ")";
}

StateVector initial_state(const CrnSystem& sys, const std::optional<std::string>& x0, bool all_ones,
                          const std::string& flag = "--x0") {
  if (all_ones) return StateVector::Ones(static_cast<Eigen::Index>(sys.species_count()));
  StateVector x = parse_vector(*x0, flag);
  if (x.size() != static_cast<Eigen::Index>(sys.species_count())) {
    throw ValidationError(flag + " has " + std::to_string(x.size()) + " entries but the network has " +
                          std::to_string(sys.species_count()) + " species");
  }
  return x;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

struct Common {
  std::string path;
  double tol = kDefaultRankTol;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("file", c.path, "network file (.crn reaction text or JSON)")->required();
  cmd->add_option("--tol", c.tol, "relative rank tolerance")->check(CLI::PositiveNumber);
}

int cmd_analyze(const Common& c, bool strict, bool chemist, const std::vector<std::string>& classes,
                std::ostream& out) {
  ReportOptions opts;
  opts.tol = c.tol;
  const CrnSystem sys = load_network(c.path, &opts.input_warnings);
  for (const auto& x0 : classes) {
    StateVector x = parse_vector(x0, "--x0");
    if (x.size() != static_cast<Eigen::Index>(sys.species_count())) {
      throw ValidationError("--x0 has " + std::to_string(x.size()) + " entries but the network has " +
                            std::to_string(sys.species_count()) + " species");
    }
    opts.classes.push_back(x);
  }
  const AnalysisReport report = analyze(sys, opts);
  if (c.format == "json") {
    out << to_json(report).dump(2) << "\n";
  } else {
    out << render_text(report, chemist);
  }
  return strict && report.has_numerical_warnings() ? kExitStrict : kExitOk;
}

int cmd_equilibrium(const Common& c, const std::optional<std::string>& x0, bool all_ones, std::ostream& out,
                    std::ostream& err) {
  std::vector<std::string> warnings;
  const CrnSystem sys = load_network(c.path, &warnings);
  print_warnings(err, warnings);
  EquilibriumOptions opts;
  opts.rank_tol = c.tol;
  EquilibriumResult r;
  if (x0 || all_ones) {
    r = equilibrium_in_class(sys, initial_state(sys, x0, all_ones), opts);
  } else {
    r = base_equilibrium(sys, opts);
  }
  if (c.format == "json") {
    nlohmann::ordered_json j = {{"species", sys.species_names()}};
    j.update(equilibrium_to_json(r));
    out << j.dump(2) << "\n";
  } else {
    out << render_equilibrium(r, sys.species_names());
  }
  return kExitOk;
}

struct SimulateArgs {
  std::optional<std::string> x0;
  bool all_ones = false;
  double t_end = 10.0;
  bool reference = false;
  std::string csv_path;
  double sample = 0.0;
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
};

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const CrnSystem sys = load_network(c.path, &warnings);
  print_warnings(err, warnings);
  if (!a.x0 && !a.all_ones) throw ValidationError("simulate needs --x0 or --all-ones");
  const StateVector x0 = initial_state(sys, a.x0, a.all_ones);

  IntegrateOptions opts;
  opts.rank_tol = c.tol;
  opts.abs_tol = a.abs_tol;
  opts.rel_tol = a.rel_tol;
  if (a.reference) {
    EquilibriumOptions eo;
    eo.rank_tol = c.tol;
    opts.reference = (x0.array() > 0.0).all() ? equilibrium_in_class(sys, x0, eo).x_star
                                              : base_equilibrium(sys, eo).x_star;
  }

  Trajectory traj;
  try {
    traj = integrate(sys, x0, a.t_end, opts);
  } catch (const StepSizeUnderflow& e) {
    err << "error: integration failed: " << e.what() << "; last good state x = " << show(e.state()) << "\n";
    return kExitFailure;
  }

  if (!a.csv_path.empty()) {
    const Trajectory& rows = a.sample > 0.0 ? resample(traj, sys, a.sample, opts.reference) : traj;
    if (a.csv_path == "-") {
      write_csv(out, rows);
    } else {
      std::ofstream file(a.csv_path);
      if (!file) throw ValidationError("cannot write '" + a.csv_path + "'");
      write_csv(file, rows);
    }
  }

  std::ostream& summary = a.csv_path == "-" ? err : out;
  summary << "t = " << round12(traj.times.back()) << ": x = " << show(traj.states.back());
  if (opts.reference) {
    const double rise = traj.lyapunov_max_increase();
    summary << "; V " << round12(traj.lyapunov.front()) << " -> " << round12(traj.lyapunov.back())
            << (rise <= 1e-8 ? " (non-increasing)" : " (increased by up to " + std::to_string(rise) + ")")
            << "; x* = " << show(*opts.reference);
  }
  summary << "; conservation drift " << traj.conservation_drift() << "; steps " << traj.step_stats.accepted
          << " accepted, " << traj.step_stats.rejected_error + traj.step_stats.rejected_negative
          << " rejected\n";
  return kExitOk;
}

int cmd_selftest(std::uint64_t seed, std::size_t cases, const std::vector<std::string>& suites,
                 std::ostream& out) {
  SelftestOptions opts;
  opts.seed = seed;
  opts.cases = cases;
  opts.suites = suites;
  std::size_t failed = 0;
  opts.on_result = [&](const PropertyResult& r) {
    if (!r.passed()) ++failed;
    char time[32];
    std::snprintf(time, sizeof time, "%.2fs", r.seconds);
    out << (r.passed() ? "PASS " : "FAIL ") << r.suite << "/" << r.name << "  cases=" << r.cases
        << " failures=" << r.failures
        << (r.skipped ? " skipped=" + std::to_string(r.skipped) : std::string()) << "  " << time << "\n";
    if (!r.passed() && !r.first_failure.empty()) out << "     first failure: " << r.first_failure << "\n";
    out.flush();
  };
  const auto results = run_selftest(opts);
  out << results.size() - failed << "/" << results.size() << " properties passed (seed " << seed << ")\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chemical reaction network analysis in the graph Laplacian framework", "crnlap"};
  app.require_subcommand(1);

  Common common;
  bool strict = false;
  bool chemist = false;
  std::vector<std::string> classes;
  auto* analyze_cmd = app.add_subcommand("analyze", "structure, deficiencies, verdict and equilibria");
  add_common(analyze_cmd, common);
  analyze_cmd->add_flag("--strict", strict, "exit with status 3 on numerical warnings");
  analyze_cmd->add_option("--format", common.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_flag("--chemist", chemist, "chemical terminology in the text report");
  analyze_cmd->add_option("--x0", classes, "representative of a class whose equilibrium is wanted (repeatable)");

  std::optional<std::string> x0;
  bool all_ones = false;
  auto* eq_cmd = app.add_subcommand("equilibrium", "positive equilibrium of a class");
  add_common(eq_cmd, common);
  eq_cmd->add_option("--format", common.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  auto* eq_x0 = eq_cmd->add_option("--x0", x0, "comma-separated initial state");
  eq_cmd->add_flag("--all-ones", all_ones, "use the all-ones state")->excludes(eq_x0);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate the mass-action dynamics");
  add_common(sim_cmd, common);
  auto* sim_x0 = sim_cmd->add_option("--x0", sim.x0, "comma-separated initial state");
  sim_cmd->add_flag("--all-ones", sim.all_ones, "start from the all-ones state")->excludes(sim_x0);
  sim_cmd->add_option("--t-end", sim.t_end, "final time")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--ref-equilibrium", sim.reference, "monitor V against the class equilibrium");
  sim_cmd->add_option("--out", sim.csv_path, "CSV output file ('-' for standard output)");
  sim_cmd->add_option("--sample", sim.sample, "resample the CSV on an even grid")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--abs-tol", sim.abs_tol, "absolute error tolerance")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--rel-tol", sim.rel_tol, "relative error tolerance")->check(CLI::PositiveNumber);

  std::uint64_t seed = kDefaultSeed;
  std::size_t cases = 1000;
  std::vector<std::string> suites;
  auto* self_cmd = app.add_subcommand("selftest", "randomized property checks");
  self_cmd->add_option("--seed", seed, "random seed");
  self_cmd->add_option("--cases", cases, "cases per property")->check(CLI::PositiveNumber);
  self_cmd->add_option("--suite", suites, "structure, equilibrium or dynamics (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(common, strict, chemist, classes, out);
    if (eq_cmd->parsed()) return cmd_equilibrium(common, x0, all_ones, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(common, sim, out, err);
    if (self_cmd->parsed()) return cmd_selftest(seed, cases, suites, out);
  } catch (const ParseError& e) {
    err << "error: " << common.path;
    if (e.line() > 0) err << ":" << e.line() << ":" << e.column();
    err << ": " << e.what() << "\n";
    return kExitInputError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInputError;
}

}  // namespace crnlap
