#include "spfit/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spfit/errors.hpp"

namespace spfit {

FittedWeights fitted_weights(double t) {
  if (!(t > 0.0)) throw DomainError("fitted weights: beta h must be positive");
  // 1/sinh t = 2e^{-t}/(1 - e^{-2t}),  1/tanh t = (1 + e^{-2t})/(1 - e^{-2t})
  const double e = std::exp(-t);
  const double one_minus_e2 = -std::expm1(-2.0 * t);
  return {2.0 * e / one_minus_e2, (1.0 + e * e) / one_minus_e2, std::tanh(0.5 * t)};
}

FittedCoefficients fitted_coefficients(const LayerMesh& mesh, double gamma, double epsilon) {
  if (!(gamma > 0.0)) throw ConfigurationError("fitted coefficients: gamma must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigurationError("fitted coefficients: epsilon must lie in (0,1)");

  FittedCoefficients c;
  c.beta = std::sqrt(gamma) / epsilon;
  const int n = mesh.intervals();
  c.a.resize(static_cast<std::size_t>(n));
  c.d.resize(c.a.size());
  c.dd.resize(c.a.size());
  for (int k = 0; k < n; ++k) {
    const auto w = fitted_weights(c.beta * mesh.step(k));
    c.a[k] = w.a;
    c.d[k] = w.d;
    c.dd[k] = w.dd;
  }
  return c;
}

namespace {

void check_sizes(const FittedCoefficients& coeffs, const LayerMesh& mesh,
                 std::span<const double> y) {
  const auto n = static_cast<std::size_t>(mesh.intervals());
  if (y.size() != n + 1) throw std::invalid_argument("state vector must have N+1 entries");
  if (coeffs.a.size() != n) throw std::invalid_argument("coefficients do not match the mesh");
}

}  // namespace

std::vector<double> residual(const SemilinearBVP& bvp, const FittedCoefficients& coeffs,
                             const LayerMesh& mesh, std::span<const double> y) {
  check_sizes(coeffs, mesh, y);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!std::isfinite(y[i])) throw NumericError("residual: non-finite state value", i);

  const int n = mesh.intervals();
  const double gamma = bvp.gamma;
  std::vector<double> fv(y.size());
  for (int i = 0; i <= n; ++i) fv[i] = bvp.f(mesh.point(i), y[i]);

  std::vector<double> out(y.size());
  out[0] = y[0];
  out[n] = y[n];
  for (int i = 1; i < n; ++i) {
    const double al = coeffs.a[i - 1], ar = coeffs.a[i];
    const double dl = coeffs.d[i - 1], dr = coeffs.d[i];
    const double ddl = coeffs.dd[i - 1], ddr = coeffs.dd[i];
    const double s = ddl + ddr;
    const double bracket = (3.0 * al + dl + ddr) * (y[i - 1] - y[i]) -
                           (3.0 * ar + dr + ddl) * (y[i] - y[i + 1]) -
                           (fv[i - 1] + 2.0 * fv[i] + fv[i + 1]) / gamma * s;
    out[i] = gamma / s * bracket;
  }
  return out;
}

TridiagonalMatrix jacobian(const SemilinearBVP& bvp, const FittedCoefficients& coeffs,
                           const LayerMesh& mesh, std::span<const double> y) {
  check_sizes(coeffs, mesh, y);
  const int n = mesh.intervals();
  const double gamma = bvp.gamma;

  TridiagonalMatrix h;
  h.diag.assign(static_cast<std::size_t>(n) + 1, 0.0);
  h.sub.assign(static_cast<std::size_t>(n), 0.0);
  h.super.assign(static_cast<std::size_t>(n), 0.0);
  h.diag[0] = 1.0;
  h.diag[n] = 1.0;

  std::vector<double> fy(y.size());
  for (int i = 0; i <= n; ++i) fy[i] = bvp.f_y(mesh.point(i), y[i]);

  for (int i = 1; i < n; ++i) {
    const double al = coeffs.a[i - 1], ar = coeffs.a[i];
    const double s = coeffs.dd[i - 1] + coeffs.dd[i];
    const double scale = gamma / s;
    h.diag[i] = 2.0 * scale * (-(al + ar) - (coeffs.d[i - 1] + coeffs.d[i]) - fy[i] * s / gamma);
    h.sub[i - 1] = scale * (s * (1.0 - fy[i - 1] / gamma) + 4.0 * al);
    h.super[i] = scale * (s * (1.0 - fy[i + 1] / gamma) + 4.0 * ar);
  }
  return h;
}

namespace {

// sinh(r)/sinh(s) for 0 <= r <= s, s > 0, without overflow.
double sinh_ratio(double r, double s) {
  if (r <= 0.0) return 0.0;
  return std::exp(r - s) * std::expm1(-2.0 * r) / std::expm1(-2.0 * s);
}

}  // namespace

double dense_output(const SemilinearBVP& bvp, const DiscreteSolution& sol,
                    const FittedCoefficients& coeffs, double x) {
  const LayerMesh& mesh = sol.mesh;
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("dense output: x must lie in [0,1]");
  const int n = mesh.intervals();
  const int i = mesh.locate(x);
  const auto& y = sol.values;
  if (x == mesh.node(i)) return y[i];
  if (x == mesh.node(i + 1)) return y[i + 1];

  const auto psi_at = [&](int k) { return psi(bvp, mesh.point(k), y[k]); };
  const auto centred = [&](int k) { return (psi_at(k - 1) + 2.0 * psi_at(k) + psi_at(k + 1)) / 4.0; };
  double psibar;
  if (i == 0 || i == n - 1)
    psibar = 0.5 * (psi_at(i) + psi_at(i + 1));
  else
    psibar = 0.5 * (centred(i) + centred(i + 1));

  const double h = mesh.step(i);
  // right half: distances from 1 - x and the exact offsets of the nodes to x = 1
  double from_left, from_right;
  if (x >= 0.5) {
    from_right = std::clamp((1.0 - x) - mesh.point(i + 1).to_right, 0.0, h);
    from_left = h - from_right;
  } else {
    from_left = std::clamp(x - mesh.node(i), 0.0, h);
    from_right = h - from_left;
  }
  const double s = coeffs.beta * h;
  const double u1 = sinh_ratio(coeffs.beta * from_right, s);
  const double u2 = sinh_ratio(coeffs.beta * from_left, s);
  return y[i] * u1 + y[i + 1] * u2 + psibar / bvp.gamma * (u1 + u2 - 1.0);
}

}  // namespace spfit
