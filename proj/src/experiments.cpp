#include "spfit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spfit/errors.hpp"
#include "spfit/numfmt.hpp"

namespace spfit {

namespace {

struct PrintedCell {
  double e;
  double ord;
};

constexpr double kNoOrd = -1.0;

// Rows N = 2^6 ... 2^13, columns in default_epsilons() order.
constexpr PrintedCell kTable1[8][10] = {
    {{1.0212e-03, 2.61}, {2.8612e-03, 2.01}, {3.1123e-03, 2.08}, {4.3466e-03, 2.08}, {4.6523e-03, 2.08},
     {4.6579e-03, 2.08}, {4.6579e-03, 2.08}, {4.6579e-03, 2.08}, {4.6579e-03, 2.08}, {4.6796e-03, 2.06}},
    {{2.5012e-04, 2.23}, {9.6837e-04, 2.11}, {1.0144e-03, 2.07}, {1.4166e-03, 2.06}, {1.5163e-03, 2.04},
     {1.5181e-03, 2.04}, {1.5181e-03, 2.04}, {1.5181e-03, 2.04}, {1.5181e-03, 2.04}, {1.5417e-03, 2.02}},
    {{7.1810e-05, 2.01}, {2.9732e-04, 2.09}, {3.1849e-04, 2.04}, {4.4730e-04, 2.05}, {4.7876e-04, 2.05},
     {4.7934e-04, 2.05}, {4.7934e-04, 2.05}, {4.7934e-04, 2.05}, {4.7934e-04, 2.05}, {4.9781e-03, 2.03}},
    {{2.2591e-05, 2.03}, {8.9328e-05, 2.00}, {9.8480e-05, 2.00}, {1.3752e-04, 2.00}, {1.4719e-04, 2.02},
     {1.4736e-04, 2.02}, {1.4736e-04, 2.02}, {1.4736e-04, 2.02}, {1.4736e-04, 2.02}, {1.5481e-04, 2.00}},
    {{6.8505e-06, 2.00}, {2.7570e-05, 2.00}, {3.0395e-05, 2.00}, {4.2443e-05, 2.00}, {4.5428e-05, 2.00},
     {4.5483e-05, 2.00}, {4.5483e-05, 2.00}, {4.5483e-05, 2.00}, {4.5483e-05, 2.00}, {4.7782e-05, 2.00}},
    {{2.0723e-06, 2.00}, {8.3400e-06, 2.00}, {9.1945e-06, 2.00}, {1.2839e-05, 2.00}, {1.3742e-05, 2.00},
     {1.3758e-05, 2.00}, {1.3758e-05, 2.00}, {1.3758e-05, 2.00}, {1.3758e-05, 2.00}, {1.4454e-05, 2.00}},
    {{6.1654e-07, 2.00}, {2.4813e-06, 2.00}, {2.7356e-06, 2.00}, {3.8197e-06, 2.00}, {4.0885e-06, 2.00},
     {4.0934e-06, 2.00}, {4.0934e-06, 2.00}, {4.0934e-06, 2.00}, {4.0934e-06, 2.00}, {4.3004e-06, 2.00}},
    {{1.8090e-07, kNoOrd}, {7.2803e-07, kNoOrd}, {8.0262e-07, kNoOrd}, {1.1208e-06, kNoOrd}, {1.1996e-06, kNoOrd},
     {1.2010e-06, kNoOrd}, {1.2010e-06, kNoOrd}, {1.2010e-06, kNoOrd}, {1.2010e-06, kNoOrd}, {1.2617e-06, kNoOrd}},
};
constexpr PrintedCell kTable2[8][10] = {
    {{1.7568e-03, 2.45}, {3.0164e-03, 1.98}, {3.1822e-03, 2.08}, {4.6272e-03, 2.08}, {6.7583e-03, 2.08},
     {6.7592e-03, 2.08}, {6.7592e-03, 2.08}, {6.7592e-03, 2.08}, {6.7592e-03, 2.08}, {6.8012e-03, 2.08}},
    {{4.6905e-04, 2.33}, {1.0375e-03, 2.18}, {1.0371e-03, 2.17}, {1.5081e-03, 2.06}, {2.2026e-03, 2.04},
     {2.2029e-03, 2.04}, {2.2029e-03, 2.04}, {2.2029e-03, 2.04}, {2.2029e-03, 2.04}, {2.2166e-03, 2.02}},
    {{1.2733e-04, 1.99}, {3.0632e-04, 2.24}, {3.0792e-04, 2.24}, {4.7617e-04, 2.09}, {7.0331e-04, 2.05},
     {7.0340e-04, 2.05}, {7.0340e-04, 2.05}, {7.0340e-04, 2.05}, {7.0340e-04, 2.05}, {7.1574e-03, 2.01}},
    {{4.0521e-05, 2.00}, {8.4422e-05, 2.00}, {8.4863e-05, 2.00}, {1.4306e-04, 2.04}, {2.1622e-04, 2.02},
     {2.1625e-04, 2.02}, {2.1625e-04, 2.02}, {2.1625e-04, 2.02}, {2.1625e-04, 2.02}, {2.2516e-04, 1.99}},
    {{1.2507e-05, 2.00}, {2.6056e-05, 2.00}, {2.6192e-05, 2.00}, {4.3129e-05, 2.00}, {6.5955e-05, 2.00},
     {6.5974e-05, 2.00}, {6.5974e-05, 2.00}, {6.5974e-05, 2.00}, {6.5974e-05, 2.00}, {6.9905e-05, 2.00}},
    {{3.7832e-06, 2.00}, {7.8820e-06, 2.00}, {7.9231e-06, 2.00}, {1.3046e-05, 2.00}, {1.9951e-05, 2.00},
     {1.9954e-05, 2.00}, {1.9954e-05, 2.00}, {1.9954e-05, 2.00}, {1.9954e-05, 2.00}, {2.1146e-05, 2.00}},
    {{1.1256e-06, 2.00}, {2.3451e-06, 2.00}, {2.3573e-06, 2.00}, {3.8816e-06, 2.00}, {5.9356e-06, 2.00},
     {5.9367e-06, 2.00}, {5.9367e-06, 2.00}, {5.9367e-06, 2.00}, {5.9367e-06, 2.00}, {6.2918e-06, 2.00}},
    {{3.3025e-07, kNoOrd}, {6.8805e-07, kNoOrd}, {6.9164e-07, kNoOrd}, {1.1389e-06, kNoOrd}, {1.7416e-06, kNoOrd},
     {1.7419e-06, kNoOrd}, {1.7419e-06, kNoOrd}, {1.7419e-06, kNoOrd}, {1.7419e-06, kNoOrd}, {1.8493e-06, kNoOrd}},
};

// (row, column) of the cells printed with the wrong exponent
constexpr std::size_t kTypoRow = 2;
constexpr std::size_t kTypoColumn = 9;

const char* const kTypoFlag = "suspected-typo";

}  // namespace

double error_en(const Profile& exact, const DiscreteSolution& sol) {
  double e = 0.0;
  for (int i = 0; i <= sol.mesh.intervals(); ++i)
    e = std::max(e, std::abs(exact(sol.mesh.point(i)) - sol.values[static_cast<std::size_t>(i)]));
  return e;
}

double ord(double e_n, double e_2n, int k) {
  if (!(e_n > 0.0 && e_2n > 0.0)) throw DomainError("ord: errors must be positive");
  if (k < 2) throw DomainError("ord: need k >= 2");
  return (std::log(e_n) - std::log(e_2n)) / std::log(2.0 * k / (k + 1.0));
}

std::vector<double> default_epsilons() {
  std::vector<double> eps;
  for (int k : {3, 5, 7, 10, 15, 25, 30, 35, 40, 45}) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

std::vector<int> default_ns() {
  std::vector<int> ns;
  for (int k = 6; k <= 13; ++k) ns.push_back(1 << k);
  return ns;
}

namespace {

int log2_exact(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return (1 << k) == n ? k : -1;
}

void solve_cell(ExampleId example, MeshKind kind, const TableSettings& settings,
                ConvergenceCell& cell) {
  try {
    const auto bvp = builtin_example(example, cell.epsilon);
    MeshParams params;
    params.n = cell.n;
    params.epsilon = cell.epsilon;
    params.q = settings.q;
    params.sigma = settings.sigma;
    params.m = bvp.m;
    const auto mesh = generate(params, kind);
    const auto result = newton_solve(bvp, mesh, bvp.initial_guess, settings.newton);
    const auto& sol = result.solution;
    cell.iterations = sol.iterations;
    cell.residual_norm = sol.residual_norm;
    cell.certificate = result.certificate;
    const int n = cell.n;
    for (int i = 0; i <= n; ++i) {
      const double err = std::abs(bvp.exact(mesh.point(i)) - sol.values[static_cast<std::size_t>(i)]);
      if (4 * i >= n && 4 * i <= 3 * n)
        cell.e_middle = std::max(cell.e_middle, err);
      else
        cell.e_layer = std::max(cell.e_layer, err);
    }
    cell.e_n = std::max(cell.e_middle, cell.e_layer);
    if (!std::isfinite(cell.e_n)) throw NumericError("non-finite error", 0);
    if (!result.warnings.empty()) cell.flag = "m-matrix";
  } catch (const NonConvergenceError&) {
    cell.converged = false;
    cell.flag = "nonconvergence";
  } catch (const SingularMatrixError&) {
    cell.converged = false;
    cell.flag = "singular";
  } catch (const NumericError&) {
    cell.converged = false;
    cell.flag = "non-finite";
  }
}

void fill_ord(ConvergenceTable& table) {
  for (std::size_t j = 0; j < table.epsilons.size(); ++j) {
    for (std::size_t r = 0; r + 1 < table.ns.size(); ++r) {
      auto& c = table.cell(r, j);
      const auto& next = table.cell(r + 1, j);
      const int k = log2_exact(table.ns[r]);
      if (table.ns[r + 1] != 2 * table.ns[r] || k < 2 || !c.converged || !next.converged ||
          !(c.e_n > 0.0) || !(next.e_n > 0.0))
        continue;
      c.ord = ord(c.e_n, next.e_n, k);
    }
  }
}

}  // namespace

ConvergenceTable run_table(ExampleId example, const std::vector<double>& epsilons,
                           const std::vector<int>& ns, MeshKind kind,
                           const TableSettings& settings) {
  if (epsilons.empty() || ns.empty()) throw ConfigurationError("run_table: empty grid");
  for (int n : ns)
    if (log2_exact(n) < 2) throw ConfigurationError("run_table: N must be a power of two >= 4");
  settings.newton.validate();

  ConvergenceTable table;
  table.example = example;
  table.kind = kind;
  table.epsilons = epsilons;
  table.ns = ns;
  table.settings = settings;
  for (int n : ns)
    for (double eps : epsilons) {
      ConvergenceCell c;
      c.epsilon = eps;
      c.n = n;
      table.cells.push_back(c);
    }

  // Largest N first so the expensive cells do not trail at the end.
  std::vector<std::size_t> order(table.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;

  unsigned workers = settings.threads ? settings.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(order.size()));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < order.size();)
      solve_cell(example, kind, settings, table.cells[order[k]]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  fill_ord(table);
  return table;
}

ConvergenceTable reference_table(ExampleId example) {
  const auto& printed = example == ExampleId::example1 ? kTable1 : kTable2;
  ConvergenceTable table;
  table.example = example;
  table.epsilons = default_epsilons();
  table.ns = default_ns();
  for (std::size_t r = 0; r < table.ns.size(); ++r)
    for (std::size_t j = 0; j < table.epsilons.size(); ++j) {
      ConvergenceCell c;
      c.epsilon = table.epsilons[j];
      c.n = table.ns[r];
      c.e_n = printed[r][j].e;
      if (printed[r][j].ord != kNoOrd) c.ord = printed[r][j].ord;
      if (r == kTypoRow && j == kTypoColumn) c.flag = kTypoFlag;
      table.cells.push_back(c);
    }
  return table;
}

ComparisonReport compare_reference(const ConvergenceTable& table, const ConvergenceTable& reference,
                                   double threshold, double ord_tolerance) {
  if (table.epsilons != reference.epsilons || table.ns != reference.ns ||
      table.cells.size() != reference.cells.size())
    throw ConfigurationError("compare_reference: grid differs from the reference grid");

  ComparisonReport report;
  report.threshold = threshold;
  report.ord_tolerance = ord_tolerance;
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    const auto& c = table.cells[i];
    const auto& r = reference.cells[i];
    CellDeviation d;
    d.epsilon = c.epsilon;
    d.n = c.n;
    d.computed = c.e_n;
    d.reference = r.e_n;
    d.flagged = r.flag == kTypoFlag;
    d.ord_computed = c.ord;
    d.ord_reference = r.ord;
    if (!c.converged) {
      ++report.unconverged;
      d.e_ok = false;
      d.ord_ok = false;
      report.cells.push_back(d);
      continue;
    }
    d.relative = std::abs(c.e_n - r.e_n) / r.e_n;
    if (!d.flagged) {
      report.max_relative = std::max(report.max_relative, d.relative);
      d.e_ok = d.relative <= threshold;
      if (!d.e_ok) ++report.e_failures;
    }
    if (r.ord) {
      if (c.ord) {
        const double shown = std::round(*c.ord * 100.0) / 100.0;
        d.ord_deviation = std::abs(shown - *r.ord);
        d.ord_ok = d.ord_deviation <= ord_tolerance + 1e-9;
      } else {
        d.ord_ok = false;
      }
      report.max_ord_deviation = std::max(report.max_ord_deviation, d.ord_deviation);
      if (!d.ord_ok) ++report.ord_failures;
    }
    report.cells.push_back(d);
  }
  return report;
}

ComparisonReport compare_reference(const ConvergenceTable& table, double threshold,
                                   double ord_tolerance) {
  return compare_reference(table, reference_table(table.example), threshold, ord_tolerance);
}

UniformityReport uniformity_report(const ConvergenceTable& table) {
  UniformityReport rep;
  rep.ns = table.ns;
  for (std::size_t r = 0; r < table.ns.size(); ++r) {
    double sup = -1.0, at = 0.0, mid = 0.0;
    for (std::size_t j = 0; j < table.epsilons.size(); ++j) {
      const auto& c = table.cell(r, j);
      if (!c.converged) continue;
      if (c.e_n > sup) {
        sup = c.e_n;
        at = c.epsilon;
      }
      mid = std::max(mid, c.e_middle);
    }
    const double n = table.ns[r];
    rep.sup_error.push_back(sup);
    rep.sup_epsilon.push_back(at);
    rep.middle_scaled.push_back(mid * n * n);
  }
  const auto shape = [](double n) { return std::log(n) * std::log(n) / (n * n); };
  rep.c = rep.sup_error.front() / shape(rep.ns.front());
  for (std::size_t r = 0; r < rep.ns.size(); ++r) {
    rep.bound.push_back(rep.c * shape(rep.ns[r]));
    if (!(rep.sup_error[r] >= 0.0) || rep.sup_error[r] > rep.bound[r] * (1.0 + 1e-12))
      rep.holds = false;
  }
  return rep;
}

double double_mesh_error(const SemilinearBVP& bvp, const MeshParams& params, MeshKind kind,
                         const NewtonSettings& settings) {
  MeshParams fine_params = params;
  fine_params.n = 2 * params.n;
  const auto coarse = generate(params, kind);
  const auto fine = generate(fine_params, kind);
  const auto yc = newton_solve(bvp, coarse, bvp.initial_guess, settings).solution;
  const auto yf = newton_solve(bvp, fine, bvp.initial_guess, settings).solution;
  const auto coeffs = fitted_coefficients(fine, bvp.gamma, bvp.epsilon);
  double e = 0.0;
  for (int i = 0; i <= coarse.intervals(); ++i)
    e = std::max(e, std::abs(yc.values[static_cast<std::size_t>(i)] -
                             dense_output(bvp, yf, coeffs, coarse.node(i))));
  return e;
}

namespace {

std::string format_e(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string format_ord(const std::optional<double>& o) {
  if (!o) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *o);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "example,mesh,epsilon,N,E_N,Ord,flag\n";
  for (std::size_t j = 0; j < table.epsilons.size(); ++j)
    for (std::size_t r = 0; r < table.ns.size(); ++r) {
      const auto& c = table.cell(r, j);
      out << to_string(table.example) << ',' << to_string(table.kind) << ','
          << format_number(c.epsilon) << ',' << c.n << ','
          << (c.converged ? format_e(c.e_n) : std::string("nan")) << ',' << format_ord(c.ord)
          << ',' << c.flag << '\n';
    }
}

ConvergenceTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "example,mesh,epsilon,N,E_N,Ord,flag")
    throw ConfigurationError("read_csv: missing or unexpected header");

  ConvergenceTable table;
  std::vector<ConvergenceCell> cells;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 7) throw ConfigurationError("read_csv: expected 7 fields in '" + line + "'");
    const auto example = parse_example_id(f[0]);
    const auto kind = parse_mesh_kind(f[1]);
    if (first) {
      table.example = example;
      table.kind = kind;
      first = false;
    } else if (example != table.example || kind != table.kind) {
      throw ConfigurationError("read_csv: mixed examples or mesh kinds");
    }
    ConvergenceCell c;
    c.epsilon = parse_number(f[2]);
    c.n = static_cast<int>(parse_number(f[3]));
    if (f[4] == "nan") {
      c.converged = false;
    } else {
      c.e_n = parse_number(f[4]);
    }
    if (f[5] != "-") c.ord = parse_number(f[5]);
    c.flag = f[6];
    if (std::find(table.epsilons.begin(), table.epsilons.end(), c.epsilon) == table.epsilons.end())
      table.epsilons.push_back(c.epsilon);
    if (std::find(table.ns.begin(), table.ns.end(), c.n) == table.ns.end())
      table.ns.push_back(c.n);
    cells.push_back(c);
  }
  if (cells.size() != table.epsilons.size() * table.ns.size())
    throw ConfigurationError("read_csv: incomplete grid");
  table.cells.resize(cells.size());
  for (const auto& c : cells) {
    const auto j = static_cast<std::size_t>(
        std::find(table.epsilons.begin(), table.epsilons.end(), c.epsilon) - table.epsilons.begin());
    const auto r = static_cast<std::size_t>(
        std::find(table.ns.begin(), table.ns.end(), c.n) - table.ns.begin());
    table.cell(r, j) = c;
  }
  return table;
}

void write_json(std::ostream& out, const ConvergenceTable& table) {
  using nlohmann::json;
  json doc;
  doc["example"] = to_string(table.example);
  doc["mesh"] = to_string(table.kind);
  doc["settings"] = {{"tol", table.settings.newton.tol},
                     {"max_iter", table.settings.newton.max_iter},
                     {"check_m_matrix", table.settings.newton.check_m_matrix},
                     {"q", table.settings.q},
                     {"sigma", table.settings.sigma}};
  json eps = json::array();
  for (double e : table.epsilons) eps.push_back(format_number(e));
  doc["epsilons"] = eps;
  doc["ns"] = table.ns;
  json cells = json::array();
  for (std::size_t j = 0; j < table.epsilons.size(); ++j)
    for (std::size_t r = 0; r < table.ns.size(); ++r) {
      const auto& c = table.cell(r, j);
      json cell = {{"example", to_string(table.example)},
                   {"mesh", to_string(table.kind)},
                   {"epsilon", format_number(c.epsilon)},
                   {"N", c.n},
                   {"E_N", c.converged ? json(c.e_n) : json(nullptr)},
                   {"Ord", c.ord ? json(std::round(*c.ord * 100.0) / 100.0) : json(nullptr)},
                   {"flag", c.flag},
                   {"iterations", c.iterations}};
      cells.push_back(cell);
    }
  doc["cells"] = cells;
  out << doc.dump(2) << '\n';
}

}  // namespace spfit
