#include "spfit/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spfit/errors.hpp"
#include "spfit/experiments.hpp"
#include "spfit/mesh.hpp"
#include "spfit/numfmt.hpp"
#include "spfit/problem.hpp"
#include "spfit/scheme.hpp"
#include "spfit/solver.hpp"

namespace spfit {

namespace {

enum Exit { ok = 0, usage = 1, nonconvergence = 2, comparison = 3 };

struct RunConfig {
  std::string example = "1";
  std::string epsilon = "2^-3";
  std::string n = "64";
  std::string mesh = "smoothed-shishkin";
  std::string q = "0.25";
  std::string sigma = "2";
  std::string m = "1";
  std::string gamma;
  std::string guess;
  std::string tol = "1e-12";
  int max_iter = 50;
  std::string format;
  std::string output;
  int dense = 0;
  bool defaults = false;
  std::vector<std::string> epsilons;
  std::vector<std::string> ns;
  unsigned threads = 0;
  std::string input;
  std::string threshold = "0.02";
  std::string ord_tolerance = "0.05";
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

int to_int(const std::string& text) {
  const double v = parse_number(text);
  if (v != static_cast<double>(static_cast<int>(v)))
    throw ConfigurationError("expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw ConfigurationError("cannot open output file '" + cfg.output + "'");
  file << text;
}

NewtonSettings newton_settings(const RunConfig& cfg) {
  NewtonSettings s;
  s.tol = parse_number(cfg.tol);
  s.max_iter = cfg.max_iter;
  s.validate();
  return s;
}

TableSettings table_settings(const RunConfig& cfg) {
  TableSettings s;
  s.newton = newton_settings(cfg);
  s.q = parse_number(cfg.q);
  s.sigma = parse_number(cfg.sigma);
  s.threads = cfg.threads;
  return s;
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.format.empty() && cfg.format != "tsv-plot")
    throw ConfigurationError("solve: only --format tsv-plot is supported");
  auto bvp = builtin_example(parse_example_id(cfg.example), parse_number(cfg.epsilon));
  if (!cfg.gamma.empty()) bvp.gamma = parse_number(cfg.gamma);
  if (!cfg.guess.empty()) bvp.initial_guess = parse_number(cfg.guess);
  bvp.validate();

  MeshParams params;
  params.n = to_int(cfg.n);
  params.epsilon = bvp.epsilon;
  params.q = parse_number(cfg.q);
  params.sigma = parse_number(cfg.sigma);
  params.m = bvp.m;
  const auto mesh = generate(params, parse_mesh_kind(cfg.mesh));

  std::optional<NewtonResult> solved;
  try {
    solved = newton_solve(bvp, mesh, bvp.initial_guess, newton_settings(cfg));
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return nonconvergence;
  }
  const auto& result = *solved;
  const auto& sol = result.solution;

  std::ostringstream data;
  data.precision(17);
  if (cfg.dense > 0) {
    const auto coeffs = fitted_coefficients(mesh, bvp.gamma, bvp.epsilon);
    for (int k = 0; k <= cfg.dense; ++k) {
      const double x = static_cast<double>(k) / cfg.dense;
      data << x << '\t' << dense_output(bvp, sol, coeffs, x) << '\n';
    }
  } else {
    for (int i = 0; i <= mesh.intervals(); ++i)
      data << mesh.node(i) << '\t' << sol.values[static_cast<std::size_t>(i)] << '\n';
  }
  emit(cfg, data.str(), out);

  err << "example=" << to_string(parse_example_id(cfg.example))
      << " epsilon=" << format_number(bvp.epsilon) << " N=" << params.n
      << " mesh=" << to_string(mesh.kind()) << " lambda=" << fmt("%.6e", mesh.lambda())
      << " iterations=" << sol.iterations << " residual=" << fmt("%.3e", sol.residual_norm);
  if (bvp.has_exact()) err << " E_N=" << fmt("%.4e", error_en(bvp.exact, sol));
  err << '\n';
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  return ok;
}

ConvergenceTable build_table(const RunConfig& cfg) {
  std::vector<double> eps;
  std::vector<int> ns;
  if (cfg.defaults || (cfg.epsilons.empty() && cfg.ns.empty())) {
    if (!cfg.epsilons.empty() || !cfg.ns.empty())
      throw ConfigurationError("--defaults cannot be combined with --epsilons or --ns");
    eps = default_epsilons();
    ns = default_ns();
  } else {
    if (cfg.epsilons.empty() || cfg.ns.empty())
      throw ConfigurationError("give both --epsilons and --ns, or --defaults");
    for (const auto& e : cfg.epsilons) eps.push_back(parse_number(e));
    for (const auto& n : cfg.ns) ns.push_back(to_int(n));
  }
  return run_table(parse_example_id(cfg.example), eps, ns, parse_mesh_kind(cfg.mesh),
                   table_settings(cfg));
}

int run_table_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format != "csv" && format != "json")
    throw ConfigurationError("table: --format must be csv or json");
  const auto table = build_table(cfg);
  std::ostringstream text;
  if (format == "csv")
    write_csv(text, table);
  else
    write_json(text, table);
  emit(cfg, text.str(), out);

  int failed = 0;
  for (const auto& c : table.cells) failed += c.converged ? 0 : 1;
  if (failed) {
    err << "error: " << failed << " cell(s) did not converge\n";
    return nonconvergence;
  }
  return ok;
}

int run_mesh(const RunConfig& cfg, std::ostream& out) {
  MeshParams params;
  params.n = to_int(cfg.n);
  params.epsilon = parse_number(cfg.epsilon);
  params.q = parse_number(cfg.q);
  params.sigma = parse_number(cfg.sigma);
  params.m = parse_number(cfg.m);
  const auto mesh = generate(params, parse_mesh_kind(cfg.mesh));
  std::ostringstream text;
  write_mesh(text, mesh);
  emit(cfg, text.str(), out);
  return ok;
}

int run_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ConvergenceTable table;
  if (!cfg.input.empty()) {
    std::ifstream in(cfg.input);
    if (!in) throw ConfigurationError("cannot open input file '" + cfg.input + "'");
    table = read_csv(in);
  } else {
    table = build_table(cfg);
  }
  const double threshold = parse_number(cfg.threshold);
  const auto report =
      compare_reference(table, threshold, parse_number(cfg.ord_tolerance));

  std::ostringstream text;
  text << "epsilon,N,E_N,reference,rel_dev,Ord,Ord_ref,status\n";
  for (const auto& d : report.cells) {
    const char* status = d.flagged ? "flagged" : (d.e_ok && d.ord_ok ? "ok" : "FAIL");
    text << format_number(d.epsilon) << ',' << d.n << ',' << fmt("%.4e", d.computed) << ','
         << fmt("%.4e", d.reference) << ',' << fmt("%.4f", d.relative) << ','
         << (d.ord_computed ? fmt("%.2f", *d.ord_computed) : "-") << ','
         << (d.ord_reference ? fmt("%.2f", *d.ord_reference) : "-") << ',' << status << '\n';
  }
  emit(cfg, text.str(), out);

  err << "max relative deviation " << fmt("%.4f", report.max_relative) << " (threshold "
      << fmt("%.4f", threshold) << "), max Ord deviation "
      << fmt("%.2f", report.max_ord_deviation) << ", " << report.e_failures
      << " E_N failure(s), " << report.ord_failures << " Ord failure(s), " << report.unconverged
      << " unconverged\n";
  return report.passed() ? ok : comparison;
}

void add_problem_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--example", cfg.example, "1 or 2")->capture_default_str();
  sub->add_option("--mesh", cfg.mesh, "smoothed-shishkin, shishkin or uniform")
      ->capture_default_str();
  sub->add_option("--q", cfg.q, "mesh parameter q")->capture_default_str();
  sub->add_option("--sigma", cfg.sigma, "mesh parameter sigma")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "Newton tolerance")->capture_default_str();
  sub->add_option("--max-iter", cfg.max_iter, "Newton iteration cap")->capture_default_str();
  sub->add_option("--output,-o", cfg.output, "output file (default: stdout)");
}

void add_grid_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_flag("--defaults", cfg.defaults, "default eps and N grids");
  sub->add_option("--epsilons", cfg.epsilons, "eps values")->delimiter(',');
  sub->add_option("--ns", cfg.ns, "N values")->delimiter(',');
  sub->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Fitted-scheme solver for eps^2 y'' = f(x, y), y(0) = y(1) = 0"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one problem and print x<TAB>y");
  add_problem_flags(solve, cfg);
  solve->add_option("--epsilon", cfg.epsilon, "perturbation parameter")->capture_default_str();
  solve->add_option("--n", cfg.n, "number of intervals")->capture_default_str();
  solve->add_option("--gamma", cfg.gamma, "override the fitting constant");
  solve->add_option("--guess", cfg.guess, "constant initial guess");
  solve->add_option("--format", cfg.format, "tsv-plot");
  solve->add_option("--dense", cfg.dense, "sample M+1 equispaced points via dense output")
      ->check(CLI::NonNegativeNumber);

  auto* table = app.add_subcommand("table", "run a convergence table");
  add_problem_flags(table, cfg);
  add_grid_flags(table, cfg);
  table->add_option("--format", cfg.format, "csv or json");

  auto* mesh = app.add_subcommand("mesh", "dump mesh nodes");
  mesh->add_option("--n", cfg.n, "number of intervals")->capture_default_str();
  mesh->add_option("--epsilon", cfg.epsilon, "perturbation parameter")->capture_default_str();
  mesh->add_option("--mesh", cfg.mesh, "smoothed-shishkin, shishkin or uniform")
      ->capture_default_str();
  mesh->add_option("--q", cfg.q, "mesh parameter q")->capture_default_str();
  mesh->add_option("--sigma", cfg.sigma, "mesh parameter sigma")->capture_default_str();
  mesh->add_option("--m", cfg.m, "lower bound of f_y")->capture_default_str();
  mesh->add_option("--output,-o", cfg.output, "output file (default: stdout)");

  auto* compare = app.add_subcommand("compare", "compare a table with the published values");
  add_problem_flags(compare, cfg);
  add_grid_flags(compare, cfg);
  compare->add_option("--input", cfg.input, "CSV written by 'table' (default: run the table)");
  compare->add_option("--threshold", cfg.threshold, "max relative E_N deviation")
      ->capture_default_str();
  compare->add_option("--ord-tolerance", cfg.ord_tolerance, "max Ord deviation")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*solve) return run_solve(cfg, out, err);
    if (*table) return run_table_cmd(cfg, out, err);
    if (*mesh) return run_mesh(cfg, out);
    return run_compare(cfg, out, err);
  } catch (const ConfigurationError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return nonconvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return nonconvergence;
  }
}

}  // namespace spfit
