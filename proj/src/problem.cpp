#include "spfit/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spfit/errors.hpp"

namespace spfit {

void SemilinearBVP::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigurationError(name + ": epsilon must lie in (0,1)");
  if (!(m > 0.0)) throw ConfigurationError(name + ": m must be positive");
  if (!(gamma >= m)) throw ConfigurationError(name + ": gamma must satisfy gamma >= m");
  if (!f || !f_y) throw ConfigurationError(name + ": f and f_y are required");
}

double psi(const SemilinearBVP& bvp, Abscissa p, double y) {
  return bvp.f(p, y) - bvp.gamma * y;
}

double psi(const SemilinearBVP& bvp, double x, double y) {
  return psi(bvp, Abscissa::at(x), y);
}

double boundary_layer(Abscissa p, double epsilon) {
  const double left = std::exp(-p.to_left() / epsilon);
  const double right = std::exp(-p.to_right / epsilon);
  return (left + right) / (1.0 + std::exp(-1.0 / epsilon));
}

double cosh_ratio(Abscissa p, double epsilon) {
  // cosh(a)/cosh(b) = e^{|a|-b} (1 + e^{-2|a|}) / (1 + e^{-2b}), where
  // |a| - b = -min(x, 1-x)/eps and 2|a| = |1-2x|/eps.
  const double near = std::min(p.to_left(), p.to_right);
  const double far = std::max(p.to_left(), p.to_right);
  const double two_a = (far - near) / epsilon;
  return std::exp(-near / epsilon) * (1.0 + std::exp(-two_a)) /
         (1.0 + std::exp(-1.0 / epsilon));
}

namespace {

SemilinearBVP make_example1(double eps) {
  using std::numbers::pi;
  SemilinearBVP bvp;
  bvp.name = "example1";
  bvp.epsilon = eps;
  const double forcing = 2.0 * (eps * pi) * (eps * pi);
  bvp.f = [forcing](Abscissa p, double y) {
    const double c = std::cos(pi * p.x);
    return y + c * c + forcing * std::cos(2.0 * pi * p.x);
  };
  bvp.f_y = [](Abscissa, double) { return 1.0; };
  bvp.m = 1.0;
  bvp.gamma = 1.0;
  bvp.exact = [eps](Abscissa p) {
    const double c = std::cos(pi * p.x);
    return boundary_layer(p, eps) - c * c;
  };
  bvp.initial_guess = -0.5;
  return bvp;
}

SemilinearBVP make_example2(double eps) {
  SemilinearBVP bvp;
  bvp.name = "example2";
  bvp.epsilon = eps;
  bvp.f = [eps](Abscissa p, double y) {
    const double g = std::pow(cosh_ratio(p, eps), 3);
    const double w = y - 1.0;
    return w * (1.0 + w * w) + g;
  };
  bvp.f_y = [](Abscissa, double y) {
    const double w = y - 1.0;
    return 1.0 + 3.0 * w * w;
  };
  bvp.m = 1.0;
  bvp.gamma = 4.0;
  bvp.exact = [eps](Abscissa p) { return 1.0 - boundary_layer(p, eps); };
  bvp.initial_guess = 1.0;
  return bvp;
}

}  // namespace

SemilinearBVP builtin_example(ExampleId id, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigurationError("epsilon must lie in (0,1)");
  switch (id) {
    case ExampleId::example1: return make_example1(epsilon);
    case ExampleId::example2: return make_example2(epsilon);
  }
  throw ConfigurationError("unknown example id");
}

ExampleId parse_example_id(std::string_view text) {
  if (text == "1" || text == "example1") return ExampleId::example1;
  if (text == "2" || text == "example2") return ExampleId::example2;
  throw ConfigurationError("unknown example '" + std::string(text) + "'");
}

std::string_view to_string(ExampleId id) {
  return id == ExampleId::example1 ? "example1" : "example2";
}

GammaReport validate_gamma(const SemilinearBVP& bvp, double y_lo, double y_hi, int grid) {
  if (!(y_lo < y_hi)) throw DomainError("validate_gamma: need y_lo < y_hi");
  if (grid < 2) throw DomainError("validate_gamma: grid must be at least 2");

  GammaReport report;
  report.min_fy = INFINITY;
  report.max_fy = -INFINITY;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double y = y_lo + (y_hi - y_lo) * j / (grid - 1);
      const double fy = bvp.f_y(Abscissa::at(x), y);
      report.min_fy = std::min(report.min_fy, fy);
      report.max_fy = std::max(report.max_fy, fy);
      if (fy < bvp.m) ++report.below_m;
      if (fy > bvp.gamma) ++report.above_gamma;
    }
  }
  return report;
}

}  // namespace spfit
