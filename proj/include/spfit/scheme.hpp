#pragma once

// Exponentially fitted three-point scheme. On each interval [x_k, x_{k+1}] the
// operator eps^2 v'' - gamma v is solved exactly; with beta = sqrt(gamma)/eps and
// t = beta h_k the per-interval weights are
//
//   a = 1/sinh t,   d = 1/tanh t,   dd = d - a = tanh(t/2).
//
// For an interior node i with left interval i-1 and right interval i, writing
// S = dd_{i-1} + dd_i, the discrete operator is
//
//   F_i y = gamma/S [ (3a_{i-1} + d_{i-1} + dd_i)(y_{i-1} - y_i)
//                   - (3a_i + d_i + dd_{i-1})(y_i - y_{i+1})
//                   - (f_{i-1} + 2 f_i + f_{i+1}) S / gamma ],
//
// and F_0 y = y_0, F_N y = y_N.

#include <span>
#include <vector>

#include "spfit/mesh.hpp"
#include "spfit/problem.hpp"
#include "spfit/tridiagonal.hpp"

namespace spfit {

struct FittedWeights {
  double a;
  double d;
  double dd;
};

/// Overflow-free weights for t = beta h > 0; for huge t they saturate at
/// a = 0, d = 1, dd = 1.
FittedWeights fitted_weights(double t);

/// Entry k of each list belongs to interval [x_k, x_{k+1}].
struct FittedCoefficients {
  double beta = 0.0;
  std::vector<double> a;
  std::vector<double> d;
  std::vector<double> dd;

  int intervals() const noexcept { return static_cast<int>(a.size()); }
};

FittedCoefficients fitted_coefficients(const LayerMesh& mesh, double gamma, double epsilon);

/// Nodal values of the discrete solution together with Newton diagnostics.
struct DiscreteSolution {
  LayerMesh mesh;
  std::vector<double> values;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// F(y). Throws NumericError naming the first non-finite entry of y.
std::vector<double> residual(const SemilinearBVP& bvp, const FittedCoefficients& coeffs,
                             const LayerMesh& mesh, std::span<const double> y);

/// Frechet derivative F'(y): identity boundary rows, and for interior rows
///
///   h_{i,i}   = 2 gamma/S [ -(a_{i-1} + a_i) - (d_{i-1} + d_i) - f_y(x_i, y_i) S / gamma ]
///   h_{i,i-1} = gamma/S [ S (1 - f_y(x_{i-1}, y_{i-1}) / gamma) + 4 a_{i-1} ]
///   h_{i,i+1} = gamma/S [ S (1 - f_y(x_{i+1}, y_{i+1}) / gamma) + 4 a_i ]
TridiagonalMatrix jacobian(const SemilinearBVP& bvp, const FittedCoefficients& coeffs,
                           const LayerMesh& mesh, std::span<const double> y);

/// Local Green's-function reconstruction between nodes:
///
///   y(x) = y_i uI(x) + y_{i+1} uII(x) + (psibar/gamma) (uI(x) + uII(x) - 1)
///
/// on [x_i, x_{i+1}], with uI, uII the fitted homogeneous solutions and psibar
/// the mean of the two node-centred 1-2-1 averages of psi at x_i and x_{i+1}.
/// The first and last interval use (psi_i + psi_{i+1})/2.
double dense_output(const SemilinearBVP& bvp, const DiscreteSolution& sol,
                    const FittedCoefficients& coeffs, double x);

}  // namespace spfit
