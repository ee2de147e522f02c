#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "multiwit/algebra.hpp"
#include "multiwit/sysio.hpp"
#include "multiwit/tracker.hpp"

namespace multiwit {

using MultidegreeMap = std::map<MultiIndex, std::int64_t>;

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient of s^(n-a) in prod_j (sum_i d_ji s_i) mod s_i^(n_i+1), keyed by a.
MultidegreeMap complete_intersection_class(const std::vector<MultiIndex>& degrees, const MultiIndex& nvec);

/// Coefficient of prod_i s_i^(n_i) in prod_j (sum_i d_ji s_i).
std::int64_t mbezout(const std::vector<MultiIndex>& degrees, const MultiIndex& nvec);

enum class StartKind { TotalDegree, LinearProduct, Auto };

struct StartPackage {
  PolySystem start;
  std::vector<CVector> solutions;
  std::int64_t predicted_count = 0;
};

StartPackage start_package(const PolySystem& target, StartKind kind, RandomSource& rs);

/// Random complex combinations of F down to `rows` polynomials (F itself when already that size).
PolySystem square_up(const PolySystem& f, int rows, RandomSource& rs);

struct SolveOptions {
  TrackOptions track;
  StartKind kind = StartKind::Auto;
  double max_fail_fraction = 0.5;
  double residual_tol = 1e-8;
  double match_tol = 1e-6;
};

struct SolveReport {
  std::vector<CVector> points;
  int paths = 0;
  int converged = 0;
  int diverged = 0;
  int failed = 0;
};

/// Residual of p at x relative to its coefficient scale.
double relative_residual(const Polynomial& p, const CVector& x);
double relative_residual(const PolySystem& f, const CVector& x);

/// Append x to pts unless it matches an existing point.
bool insert_unique(std::vector<CVector>& pts, const CVector& x, double tol = 1e-6);

SolveReport solve_zero_dim_report(const PolySystem& f, const std::vector<Polynomial>& slices, RandomSource& rs,
                                  const SolveOptions& opts = {});
/// Same, tracking with a caller-supplied square part G (rows = nvars - |slices|) whose zeros contain V(f).
SolveReport solve_squared_report(const PolySystem& f, const PolySystem& g, const std::vector<Polynomial>& slices,
                                 RandomSource& rs, const SolveOptions& opts = {});
std::vector<CVector> solve_zero_dim(const PolySystem& f, const std::vector<Polynomial>& slices, RandomSource& rs,
                                    const TrackOptions& opts = {});

}  // namespace multiwit
