#include "spfit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "spfit/errors.hpp"

namespace spfit {

void NewtonSettings::validate() const {
  if (!(tol > 0.0)) throw ConfigurationError("newton: tol must be positive");
  if (max_iter < 1) throw ConfigurationError("newton: max_iter must be at least 1");
}

void MMatrixCertificate::merge(const MMatrixCertificate& other) {
  rows_checked += other.rows_checked;
  sign_violations += other.sign_violations;
  dominance_violations += other.dominance_violations;
  bound_violations += other.bound_violations;
  column_variant_violations += other.column_variant_violations;
  underflow_zeros += other.underflow_zeros;
  min_row_margin = std::min(min_row_margin, other.min_row_margin);
}

MMatrixCertificate certify_m_matrix(const TridiagonalMatrix& h, const FittedCoefficients& coeffs,
                                    double m) {
  constexpr double u = std::numeric_limits<double>::epsilon();
  MMatrixCertificate cert;
  const std::size_t n = h.size() - 1;
  const auto positive_or_underflow = [&](double entry, double a) {
    if (entry > 0.0) return true;
    if (entry == 0.0 && a == 0.0) {
      ++cert.underflow_zeros;
      return true;
    }
    return false;
  };

  for (std::size_t i = 1; i < n; ++i) {
    ++cert.rows_checked;
    const double diag = h.diag[i];
    const double lower = h.sub[i - 1];
    const double upper = h.super[i];
    bool signs = diag < 0.0;
    signs = positive_or_underflow(lower, coeffs.a[i - 1]) && signs;
    signs = positive_or_underflow(upper, coeffs.a[i]) && signs;
    if (!signs) ++cert.sign_violations;

    const double margin = std::abs(diag) - std::abs(lower) - std::abs(upper);
    cert.min_row_margin = std::min(cert.min_row_margin, margin);
    if (!(margin > 0.0)) ++cert.dominance_violations;
    // exact margin is f_y(x_{i-1}) + 2 f_y(x_i) + f_y(x_{i+1}) >= 4m
    if (margin < 4.0 * m - 64.0 * u * std::abs(diag)) ++cert.bound_violations;

    const double column_margin = std::abs(diag) - std::abs(lower) - std::abs(h.super[i - 1]);
    if (!(column_margin > 0.0)) ++cert.column_variant_violations;
  }
  return cert;
}

namespace {

std::vector<double> starting_vector(const InitialGuess& guess, int n) {
  std::vector<double> y;
  if (const auto* c = std::get_if<double>(&guess)) {
    y.assign(static_cast<std::size_t>(n) + 1, *c);
  } else {
    y = std::get<std::vector<double>>(guess);
    if (y.size() != static_cast<std::size_t>(n) + 1)
      throw ConfigurationError("newton: initial guess must have N+1 entries");
  }
  y.front() = 0.0;
  y.back() = 0.0;
  return y;
}

}  // namespace

NewtonResult newton_solve(const SemilinearBVP& bvp, const LayerMesh& mesh,
                          const InitialGuess& guess, const NewtonSettings& settings) {
  bvp.validate();
  settings.validate();
  constexpr double u = std::numeric_limits<double>::epsilon();

  const int n = mesh.intervals();
  const auto coeffs = fitted_coefficients(mesh, bvp.gamma, bvp.epsilon);
  std::vector<double> y = starting_vector(guess, n);

  NewtonResult result{DiscreteSolution{mesh, {}, 0, 0.0}, {}, {}, {}, {}};
  for (int iter = 0;; ++iter) {
    auto f = residual(bvp, coeffs, mesh, y);
    const double rnorm = max_norm(f);
    if (!std::isfinite(rnorm)) throw NumericError("newton: non-finite residual", 0);
    result.residual_history.push_back(rnorm);

    auto h = jacobian(bvp, coeffs, mesh, y);
    if (settings.check_m_matrix) result.certificate.merge(certify_m_matrix(h, coeffs, bvp.m));

    const double scale = std::max(1.0, max_norm(y));
    const bool certified = rnorm / bvp.m <= settings.tol * scale;
    const bool at_floor = iter > 0 && result.step_history.back() <= settings.tol * scale &&
                          rnorm <= 16.0 * u * max_norm(h) * scale;
    if (certified || at_floor) {
      result.solution.values = std::move(y);
      result.solution.iterations = iter;
      result.solution.residual_norm = rnorm;
      break;
    }
    if (iter == settings.max_iter) throw NonConvergenceError(std::move(y), result.residual_history);

    for (double& v : f) v = -v;
    const auto z = tridiag_solve({std::move(h), std::move(f)});
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += z[k];
    y.front() = 0.0;
    y.back() = 0.0;
    result.step_history.push_back(max_norm(z));
  }

  if (settings.check_m_matrix && !result.certificate.ok()) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "M-matrix certificate failed: %ld sign, %ld dominance, %ld bound violations",
                  result.certificate.sign_violations, result.certificate.dominance_violations,
                  result.certificate.bound_violations);
    result.warnings.emplace_back(msg);
  }
  return result;
}

StabilityReport stability_check(const SemilinearBVP& bvp, const LayerMesh& mesh,
                                std::span<const double> u, std::span<const double> v) {
  const auto coeffs = fitted_coefficients(mesh, bvp.gamma, bvp.epsilon);
  const auto fu = residual(bvp, coeffs, mesh, u);
  const auto fv = residual(bvp, coeffs, mesh, v);
  StabilityReport report;
  for (std::size_t i = 0; i < u.size(); ++i) {
    report.difference_norm = std::max(report.difference_norm, std::abs(u[i] - v[i]));
    report.residual_norm = std::max(report.residual_norm, std::abs(fu[i] - fv[i]));
  }
  if (report.difference_norm > 0.0)
    report.ratio = bvp.m * report.difference_norm / report.residual_norm;
  return report;
}

}  // namespace spfit
