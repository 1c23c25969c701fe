#pragma once

// Layer-adapted meshes on [0,1].
//
// The smoothed Shishkin mesh is x_i = phi(i/N) with the C^1 generating function
//
//   phi(t) = (lambda/q) t                    t in [0, q]
//            p (t - q)^3 + (lambda/q) t      t in [q, 1/2]
//            1 - phi(1 - t)                  t in [1/2, 1]
//
// where lambda = min(sigma eps ln N / sqrt(m), q) and p = (1 - lambda/q) / (2 (1/2 - q)^3)
// makes phi(1/2) = 1/2. The classical piecewise-uniform Shishkin mesh and the
// uniform mesh are provided for comparison runs.

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "spfit/problem.hpp"

namespace spfit {

enum class MeshKind { smoothed_shishkin, shishkin, uniform };

std::string_view to_string(MeshKind kind);
MeshKind parse_mesh_kind(std::string_view text);

struct MeshParams {
  int n = 64;
  double epsilon = 0.5;
  double q = 0.25;
  double sigma = 2.0;
  double m = 1.0;

  /// n >= 8 with n divisible by 4, 0 < q < 1/2, sigma > 0, 0 < eps < 1, m > 0.
  void validate() const;
};

/// lambda = min(sigma eps ln N / sqrt(m), q).
double transition_point(const MeshParams& params);

/// phi(t) for t in [0,1]; throws DomainError outside. phi(1/2) is exactly 1/2.
double generating_function(const MeshParams& params, double lambda, double t);

class LayerMesh {
 public:
  LayerMesh(MeshKind kind, MeshParams params, double lambda, std::vector<double> nodes,
            std::vector<double> to_right, std::vector<double> steps);

  MeshKind kind() const noexcept { return kind_; }
  const MeshParams& params() const noexcept { return params_; }
  double lambda() const noexcept { return lambda_; }
  bool clamped() const noexcept { return lambda_ >= params_.q; }

  /// Number of subintervals N.
  int intervals() const noexcept { return static_cast<int>(steps_.size()); }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> steps() const noexcept { return steps_; }
  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double step(int i) const { return steps_[static_cast<std::size_t>(i)]; }
  Abscissa point(int i) const {
    const auto k = static_cast<std::size_t>(i);
    return {nodes_[k], to_right_[k]};
  }

  /// Index i of the interval [x_i, x_{i+1}] holding x (the last one for x = 1).
  int locate(double x) const;

 private:
  MeshKind kind_;
  MeshParams params_;
  double lambda_;
  std::vector<double> nodes_;
  std::vector<double> to_right_;
  std::vector<double> steps_;
};

/// Builds the mesh. The right half is the reflection of the left half:
/// x_{N-i} = 1 - x_i and h_{N-1-i} = h_i, with distances to x = 1 taken from
/// the exact left-half offsets.
LayerMesh generate(const MeshParams& params, MeshKind kind);

struct MeshDiagnostics {
  double max_step_times_n = 0.0;        // max h_i N
  double max_step_jump_times_n2 = 0.0;  // max |h_{i+1} - h_i| N^2
  double min_step = 0.0;
  double max_step = 0.0;
  bool left_steps_nondecreasing = true;   // h_{i-1} <= h_i on [0, 1/2]
  bool right_steps_nonincreasing = true;  // h_{i-1} >= h_i on [1/2, 1]
};

MeshDiagnostics mesh_diagnostics(const LayerMesh& mesh);

/// One node per line: index<TAB>x_i<TAB>h_i with 17 significant digits; the
/// last line has no step column.
void write_mesh(std::ostream& out, const LayerMesh& mesh);

}  // namespace spfit
