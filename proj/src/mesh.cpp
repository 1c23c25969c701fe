#include "spfit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "spfit/errors.hpp"

namespace spfit {

std::string_view to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::smoothed_shishkin: return "smoothed-shishkin";
    case MeshKind::shishkin: return "shishkin";
    case MeshKind::uniform: return "uniform";
  }
  return "?";
}

MeshKind parse_mesh_kind(std::string_view text) {
  if (text == "smoothed-shishkin" || text == "smoothed_shishkin" || text == "smoothed")
    return MeshKind::smoothed_shishkin;
  if (text == "shishkin") return MeshKind::shishkin;
  if (text == "uniform") return MeshKind::uniform;
  throw ConfigurationError("unknown mesh kind '" + std::string(text) + "'");
}

namespace {

void validate_common(const MeshParams& p) {
  if (!(p.q > 0.0 && p.q < 0.5)) throw ConfigurationError("mesh: q must lie in (0, 1/2)");
  if (!(p.sigma > 0.0)) throw ConfigurationError("mesh: sigma must be positive");
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0))
    throw ConfigurationError("mesh: epsilon must lie in (0,1)");
  if (!(p.m > 0.0)) throw ConfigurationError("mesh: m must be positive");
}

}  // namespace

void MeshParams::validate() const {
  if (n < 8 || n % 4 != 0)
    throw ConfigurationError("mesh: N must be at least 8 and divisible by 4 (got " +
                             std::to_string(n) + ")");
  validate_common(*this);
}

double transition_point(const MeshParams& params) {
  const double n = static_cast<double>(params.n);
  return std::min(params.sigma * params.epsilon * std::log(n) / std::sqrt(params.m), params.q);
}

double generating_function(const MeshParams& params, double lambda, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("generating function: t must lie in [0,1]");
  if (t == 0.5) return 0.5;
  if (t > 0.5) return 1.0 - generating_function(params, lambda, 1.0 - t);

  const double q = params.q;
  const double slope = lambda / q;
  if (t <= q) return slope * t;
  const double p = 0.5 * (1.0 - slope) / std::pow(0.5 - q, 3);
  const double s = t - q;
  return p * s * s * s + slope * t;
}

LayerMesh::LayerMesh(MeshKind kind, MeshParams params, double lambda, std::vector<double> nodes,
                     std::vector<double> to_right, std::vector<double> steps)
    : kind_(kind),
      params_(params),
      lambda_(lambda),
      nodes_(std::move(nodes)),
      to_right_(std::move(to_right)),
      steps_(std::move(steps)) {}

int LayerMesh::locate(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("mesh: x must lie in [0,1]");
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const auto i = static_cast<int>(it - nodes_.begin()) - 1;
  return std::clamp(i, 0, intervals() - 1);
}

LayerMesh generate(const MeshParams& params, MeshKind kind) {
  if (kind == MeshKind::uniform) {
    if (params.n < 2 || params.n % 2 != 0)
      throw ConfigurationError("mesh: uniform N must be even and at least 2");
    validate_common(params);
  } else {
    params.validate();
  }

  const int n = params.n;
  const int half = n / 2;
  const double lambda = transition_point(params);

  std::vector<double> left(static_cast<std::size_t>(half) + 1);
  for (int i = 0; i <= half; ++i) {
    const double t = static_cast<double>(i) / n;
    switch (kind) {
      case MeshKind::smoothed_shishkin:
        left[i] = generating_function(params, lambda, t);
        break;
      case MeshKind::shishkin: {
        const int quarter = n / 4;
        left[i] = i <= quarter ? lambda * i / quarter
                               : lambda + (0.5 - lambda) * (i - quarter) / quarter;
        break;
      }
      case MeshKind::uniform:
        left[i] = t;
        break;
    }
  }
  left[half] = 0.5;

  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  std::vector<double> to_right(nodes.size());
  std::vector<double> steps(static_cast<std::size_t>(n));
  for (int i = 0; i <= half; ++i) {
    nodes[i] = left[i];
    to_right[i] = 1.0 - left[i];
    nodes[n - i] = 1.0 - left[i];
    to_right[n - i] = left[i];
  }
  for (int i = 0; i < half; ++i) {
    const double h = left[i + 1] - left[i];
    if (!(h > 0.0)) throw ConfigurationError("mesh: degenerate step at index " + std::to_string(i));
    steps[i] = h;
    steps[n - 1 - i] = h;
  }
  return LayerMesh(kind, params, lambda, std::move(nodes), std::move(to_right), std::move(steps));
}

MeshDiagnostics mesh_diagnostics(const LayerMesh& mesh) {
  MeshDiagnostics diag;
  const auto steps = mesh.steps();
  const int n = mesh.intervals();
  const double dn = static_cast<double>(n);
  diag.min_step = *std::min_element(steps.begin(), steps.end());
  diag.max_step = *std::max_element(steps.begin(), steps.end());
  diag.max_step_times_n = diag.max_step * dn;
  for (int i = 0; i + 1 < n; ++i) {
    diag.max_step_jump_times_n2 =
        std::max(diag.max_step_jump_times_n2, std::abs(steps[i + 1] - steps[i]) * dn * dn);
  }
  // equal steps of the layer region differ in the last bits
  const auto slack = [&](int i) {
    return 8.0 * std::numeric_limits<double>::epsilon() * std::min(mesh.node(i), 1.0 - mesh.node(i));
  };
  for (int i = 1; i < n / 2; ++i)
    if (steps[i - 1] > steps[i] + slack(i + 1)) diag.left_steps_nondecreasing = false;
  for (int i = n / 2 + 1; i < n; ++i)
    if (steps[i - 1] + slack(i - 1) < steps[i]) diag.right_steps_nonincreasing = false;
  return diag;
}

void write_mesh(std::ostream& out, const LayerMesh& mesh) {
  char line[96];
  const int n = mesh.intervals();
  for (int i = 0; i <= n; ++i) {
    if (i < n)
      std::snprintf(line, sizeof line, "%d\t%.17g\t%.17g\n", i, mesh.node(i), mesh.step(i));
    else
      std::snprintf(line, sizeof line, "%d\t%.17g\n", i, mesh.node(i));
    out << line;
  }
}

}  // namespace spfit
