#pragma once

#include <span>
#include <vector>

namespace spfit {

/// Row i holds sub[i-1], diag[i], super[i].
struct TridiagonalMatrix {
  std::vector<double> sub;    // size n-1
  std::vector<double> diag;   // size n
  std::vector<double> super;  // size n-1

  std::size_t size() const noexcept { return diag.size(); }
};

struct TridiagonalSystem {
  TridiagonalMatrix matrix;
  std::vector<double> rhs;
};

/// Forward elimination and back substitution without pivoting. Stable for the
/// diagonally dominant M-matrices the scheme produces; a zero or non-finite
/// pivot raises SingularMatrixError naming the row.
std::vector<double> tridiag_solve(const TridiagonalSystem& system);

std::vector<double> multiply(const TridiagonalMatrix& matrix, std::span<const double> z);

double max_norm(std::span<const double> v);

/// max_i sum_j |h_ij|
double max_norm(const TridiagonalMatrix& matrix);

}  // namespace spfit
