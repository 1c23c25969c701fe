#include "spfit/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spfit/errors.hpp"

namespace spfit {

std::vector<double> tridiag_solve(const TridiagonalSystem& system) {
  const auto& a = system.matrix;
  const std::size_t n = a.size();
  if (n == 0 || a.sub.size() + 1 != n || a.super.size() + 1 != n || system.rhs.size() != n)
    throw std::invalid_argument("tridiag_solve: inconsistent system dimensions");

  std::vector<double> upper(n);  // modified super-diagonal
  std::vector<double> z(n);

  double pivot = a.diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) throw SingularMatrixError(0);
  if (n > 1) upper[0] = a.super[0] / pivot;
  z[0] = system.rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.sub[i - 1] * upper[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw SingularMatrixError(i);
    if (i + 1 < n) upper[i] = a.super[i] / pivot;
    z[i] = (system.rhs[i] - a.sub[i - 1] * z[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) z[i] -= upper[i] * z[i + 1];
  return z;
}

std::vector<double> multiply(const TridiagonalMatrix& matrix, std::span<const double> z) {
  const std::size_t n = matrix.size();
  if (z.size() != n) throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = matrix.diag[i] * z[i];
    if (i > 0) s += matrix.sub[i - 1] * z[i - 1];
    if (i + 1 < n) s += matrix.super[i] * z[i + 1];
    out[i] = s;
  }
  return out;
}

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_norm(const TridiagonalMatrix& matrix) {
  const std::size_t n = matrix.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(matrix.diag[i]);
    if (i > 0) s += std::abs(matrix.sub[i - 1]);
    if (i + 1 < n) s += std::abs(matrix.super[i]);
    m = std::max(m, s);
  }
  return m;
}

}  // namespace spfit
