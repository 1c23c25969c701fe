#pragma once

// Semilinear reaction-diffusion problems
//
//     eps^2 y''(x) = f(x, y)  on [0, 1],     y(0) = y(1) = 0,
//
// with f_y >= m > 0, plus the two benchmark problems with closed-form
// solutions that the convergence tables are built on.

#include <functional>
#include <string>
#include <string_view>

namespace spfit {

/// A point of [0,1] carried together with its distance to the right end.
///
/// Near x = 1 the difference 1 - x cancels catastrophically once eps drops
/// below ~1e-13, so layer terms such as exp(-(1-x)/eps) are evaluated from
/// `to_right` instead. Mesh nodes in the right half are built from the exact
/// left-half offsets, which keeps `to_right` exact there.
struct Abscissa {
  double x = 0.0;
  double to_right = 1.0;

  static constexpr Abscissa at(double x) noexcept { return {x, 1.0 - x}; }
  constexpr double to_left() const noexcept { return x; }
};

using Rhs = std::function<double(Abscissa, double)>;
using Profile = std::function<double(Abscissa)>;

enum class ExampleId { example1, example2 };

struct SemilinearBVP {
  std::string name;
  double epsilon = 0.0;
  Rhs f;
  Rhs f_y;
  double m = 0.0;      // lower bound of f_y
  double gamma = 0.0;  // fitting constant, gamma >= m
  Profile exact;       // empty when no closed form is known
  double initial_guess = 0.0;

  bool has_exact() const noexcept { return static_cast<bool>(exact); }

  /// Throws ConfigurationError unless m > 0, gamma >= m and 0 < eps < 1.
  void validate() const;
};

/// psi(x, y) = f(x, y) - gamma y, the nonlinear remainder after splitting off
/// the fitted linear part.
double psi(const SemilinearBVP& bvp, Abscissa p, double y);
double psi(const SemilinearBVP& bvp, double x, double y);

/// (exp(-x/eps) + exp(-(1-x)/eps)) / (1 + exp(-1/eps)), never forming a
/// growing exponential.
double boundary_layer(Abscissa p, double epsilon);

/// cosh((1-2x)/(2 eps)) / cosh(1/(2 eps)) in overflow-free form.
double cosh_ratio(Abscissa p, double epsilon);

/// Example 1:  eps^2 y'' = y + cos^2(pi x) + 2 (eps pi)^2 cos(2 pi x),  gamma = 1.
/// Example 2:  eps^2 y'' = (y-1)(1+(y-1)^2) + g(x),                      gamma = 4,
///             g(x) = cosh^3((1-2x)/(2eps)) / cosh^3(1/(2eps)).
SemilinearBVP builtin_example(ExampleId id, double epsilon);

/// Accepts "1", "2", "example1", "example2".
ExampleId parse_example_id(std::string_view text);
std::string_view to_string(ExampleId id);

struct GammaReport {
  double min_fy = 0.0;
  double max_fy = 0.0;
  int below_m = 0;      // lattice points with f_y < m
  int above_gamma = 0;  // lattice points with f_y > gamma

  bool ok() const noexcept { return below_m == 0 && above_gamma == 0; }
};

/// Samples f_y on a grid x grid lattice over [0,1] x [y_lo, y_hi] and counts
/// violations of m <= f_y <= gamma. Violations are reported, not thrown.
GammaReport validate_gamma(const SemilinearBVP& bvp, double y_lo, double y_hi, int grid);

}  // namespace spfit
