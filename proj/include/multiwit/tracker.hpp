#pragma once

#include <string>
#include <vector>

#include "multiwit/algebra.hpp"

namespace multiwit {

class TrackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrackOptions {
  double newton_tol = 1e-10;  // relative corrector step size
  int max_newton_iters = 3;
  double initial_step = 0.02;
  double min_step = 1e-14;
  double max_step = 0.1;
  double divergence_norm = 1e8;
  double end_tol = 1e-8;
  int max_steps = 100000;
  int workers = 1;
};

enum class PathStatus { Converged, Diverged, Failed };
const char* to_string(PathStatus s);

struct PathResult {
  PathStatus status = PathStatus::Failed;
  CVector endpoint;
  int steps_taken = 0;
  double final_residual = 0.0;
  std::string diagnostic;
};

/**
 * H(x;t) = (fixed(x), t*gamma*start(x) + (1-t)*target(x)).
 *
 * With no fixed rows this is the convex-combination homotopy; with fixed rows
 * and affine start/target rows it is the slice-motion homotopy.
 */
class Homotopy {
 public:
  Homotopy(int nvars, std::vector<Polynomial> fixed, std::vector<Polynomial> start, std::vector<Polynomial> target,
           Complex gamma);

  static Homotopy convex(const PolySystem& start, const PolySystem& target, Complex gamma);

  int num_vars() const { return nvars_; }
  int num_eqs() const { return static_cast<int>(fixed_.size() + start_.size()); }
  Complex gamma() const { return gamma_; }

  void evaluate(const CVector& x, double t, CVector& h) const;
  void evaluate(const CVector& x, double t, CVector& h, CMatrix& hx, CVector& ht) const;

  /// Rows of H(x;0).
  std::vector<Polynomial> target_rows() const;
  /// Rows of H(x;1) with gamma applied to the moving block.
  std::vector<Polynomial> start_rows() const;
  const CompiledSystem& compiled_target() const { return target_all_; }

 private:
  int nvars_;
  std::vector<Polynomial> fixed_, start_, target_;
  Complex gamma_;
  CompiledSystem fixed_c_, start_c_, target_c_, target_all_;
};

PathResult track_path(const Homotopy& h, const CVector& start_point, const TrackOptions& opts);
std::vector<PathResult> track_many(const Homotopy& h, const std::vector<CVector>& starts, const TrackOptions& opts);

/// Newton's method on a square system until the residual is below tol.
CVector newton_refine(const PolySystem& system, const CVector& point, double tol, int max_iters = 50);
CVector newton_refine(const CompiledSystem& system, const CVector& point, double tol, int max_iters = 50);

/// Relative distance test used for endpoint matching.
bool same_point(const CVector& a, const CVector& b, double tol = 1e-6);
double relative_distance(const CVector& a, const CVector& b);

}  // namespace multiwit
