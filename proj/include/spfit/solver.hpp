#pragma once

#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spfit/mesh.hpp"
#include "spfit/problem.hpp"
#include "spfit/scheme.hpp"
#include "spfit/tridiagonal.hpp"

namespace spfit {

struct NewtonSettings {
  double tol = 1e-12;
  int max_iter = 50;
  bool check_m_matrix = true;

  void validate() const;
};

/// Sign and dominance audit of the interior rows of a scheme Jacobian.
///
/// A zero off-diagonal is not counted as a sign violation when the fitted
/// weight a of the adjacent interval underflowed to zero: the exact entry is
/// then 4 gamma a / S > 0, just below the smallest representable double.
struct MMatrixCertificate {
  long rows_checked = 0;
  long sign_violations = 0;       // diagonal >= 0 or off-diagonal < 0 (or unexplained 0)
  long dominance_violations = 0;  // |h_ii| - h_{i,i-1} - h_{i,i+1} <= 0
  long bound_violations = 0;      // row margin below 4m (up to rounding)
  long column_variant_violations = 0;  // |h_ii| - |h_{i,i-1}| - |h_{i-1,i}| <= 0
  long underflow_zeros = 0;
  double min_row_margin = std::numeric_limits<double>::infinity();

  bool ok() const noexcept {
    return sign_violations == 0 && dominance_violations == 0 && bound_violations == 0;
  }
  void merge(const MMatrixCertificate& other);
};

MMatrixCertificate certify_m_matrix(const TridiagonalMatrix& h, const FittedCoefficients& coeffs,
                                    double m);

/// Scalar guesses are broadcast to interior nodes; boundary entries are forced to 0.
using InitialGuess = std::variant<double, std::vector<double>>;

struct NewtonResult {
  DiscreteSolution solution;
  std::vector<double> residual_history;  // ||F y|| before each update, then the final one
  std::vector<double> step_history;      // ||z|| of each update
  MMatrixCertificate certificate;        // accumulated over every iterate
  std::vector<std::string> warnings;
};

/// Plain Newton iteration y <- y + z, H z = -F y.
///
/// Stops when the stability bound certifies ||y - ybar|| <= ||F y||/m <= tol max(1, ||y||),
/// or, once F has reached its rounding floor (16 u ||H|| max(1, ||y||)), when the
/// last correction is below tol max(1, ||y||). Throws NonConvergenceError after
/// max_iter updates. M-matrix violations are reported as warnings.
NewtonResult newton_solve(const SemilinearBVP& bvp, const LayerMesh& mesh,
                          const InitialGuess& guess, const NewtonSettings& settings = {});

struct StabilityReport {
  double difference_norm = 0.0;  // ||u - v||
  double residual_norm = 0.0;    // ||F u - F v||
  double ratio = 0.0;            // m ||u - v|| / ||F u - F v||, 0 when u = v
};

StabilityReport stability_check(const SemilinearBVP& bvp, const LayerMesh& mesh,
                                std::span<const double> u, std::span<const double> v);

}  // namespace spfit
