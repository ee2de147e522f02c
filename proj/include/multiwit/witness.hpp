#pragma once

#include <set>
#include <string>
#include <vector>

#include "multiwit/algebra.hpp"
#include "multiwit/startsys.hpp"
#include "multiwit/sysio.hpp"
#include "multiwit/tracker.hpp"

namespace multiwit {

class WitnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  TrackOptions track;
  double match_tol = 1e-6;
  double residual_tol = 1e-8;
  double rank_tol = kDefaultRankTol;
  double trace_tol = 1e-10;
  int max_loops = 200;
  int stable_loops = 5;
  double s1 = 0.5;
  double s2 = 1.0;
  double max_fail_fraction = 0.5;
  int path_retries = 3;
};

/// a . x + c over all variables; coefficients outside the form's group are zero.
struct AffineForm {
  CVector coeffs;
  Complex constant = 0.0;

  Complex operator()(const CVector& x) const;
  Polynomial poly() const { return Polynomial::affine(coeffs, constant); }
  /// Same linear part, shifted to vanish at x.
  AffineForm through(const CVector& x) const;

  static AffineForm random(RandomSource& rs, int nvars, const std::vector<int>& vars);
  static AffineForm random_through(RandomSource& rs, int nvars, const std::vector<int>& vars, const CVector& x);
};

using FormGroups = std::vector<std::vector<AffineForm>>;

std::vector<Polynomial> polys_of(const FormGroups& forms);
std::vector<Polynomial> polys_of(const std::vector<AffineForm>& forms);

/// Per group i, forms l_{i,1..n_i}; an e-selection takes the first e_i of each group.
struct SliceBank {
  FormGroups forms;

  static SliceBank random(const VariableGrouping& grouping, RandomSource& rs);
  FormGroups selection(const MultiIndex& e) const;
};

struct WitnessSet {
  PolySystem system;    // defining equations; carries the grouping
  PolySystem tracking;  // square part used for continuation, V(system) inside V(tracking)
  MultiIndex e;
  FormGroups slices;
  std::vector<CVector> points;

  const VariableGrouping& grouping() const { return system.grouping(); }
  std::vector<Polynomial> slice_polys() const { return polys_of(slices); }
  /// Largest relative residual of any point on system and slices.
  double max_residual() const;
};

struct WitnessCollection {
  PolySystem system;
  PolySystem tracking;
  SliceBank bank;
  std::map<MultiIndex, std::vector<CVector>> entries;
  std::set<MultiIndex> solved;  // keys whose entry (possibly empty) is authoritative
  bool complete = true;

  const VariableGrouping& grouping() const { return system.grouping(); }
  int dimension() const { return system.num_vars() - tracking.size(); }
  WitnessSet witness_set(const MultiIndex& e) const;
  MultidegreeMap degrees() const;
};

/// Tracks each point under (tracking, fixed_extra, start_rows -> target_rows); paths are kept in input order.
struct MoveResult {
  std::vector<PathResult> paths;
  std::vector<CVector> points;  // distinct converged endpoints on `check`
  int converged = 0;
  int diverged = 0;
  int failed = 0;
  int attempts = 0;
};

MoveResult track_rows(const PolySystem& tracking, const std::vector<Polynomial>& fixed_extra,
                      const std::vector<Polynomial>& start_rows, const std::vector<Polynomial>& target_rows,
                      const std::vector<CVector>& points, const PolySystem& check, Complex gamma,
                      const Settings& settings);

/**
 * Repeats track_rows with a fresh gamma and takes the union of the endpoints.
 * Stops once `expected` distinct points are found, or when expected < 0, once no path fails.
 * Paths and counts are those of the last attempt.
 */
MoveResult track_rows_retry(const PolySystem& tracking, const std::vector<Polynomial>& fixed_extra,
                            const std::vector<Polynomial>& start_rows, const std::vector<Polynomial>& target_rows,
                            const std::vector<CVector>& points, const PolySystem& check, RandomSource& rs,
                            const Settings& settings, int expected = -1);

/// Square part for an equidimensional set of dimension d.
PolySystem tracking_system(const PolySystem& f, int dimension, RandomSource& rs);

WitnessCollection compute_witness_collection(const PolySystem& f, const std::vector<MultiIndex>& candidates,
                                             RandomSource& rs, const Settings& settings = {});
/// Candidates default to every e with |e| equal to the local dimension at the probe point.
WitnessCollection compute_witness_collection(const PolySystem& f, const CVector& probe, RandomSource& rs,
                                             const Settings& settings = {});

WitnessCollection slice(const WitnessCollection& wc, int group);

WitnessSet move_slice(const WitnessSet& ws, const FormGroups& new_forms, RandomSource& rs,
                      const Settings& settings = {}, MoveResult* report = nullptr);

struct RefineResult {
  WitnessSet ws;
  int converged = 0;
  int diverged = 0;
  int failed = 0;
};

/// Split group `group` into (first_vars, rest); target = (e', e'') with e' + e'' = ws.e[group].
RefineResult refine(const WitnessSet& ws, int group, const std::vector<int>& first_vars,
                    const std::pair<int, int>& target, RandomSource& rs, const Settings& settings = {});

struct CoarsenResult {
  WitnessSet ws;
  std::int64_t delta = 0;  // number of start points, sum of multinomial * Deg
  int converged = 0;
  int diverged = 0;
  int failed = 0;
  int start_losses = 0;  // start points lost while building the product-slice start sets
};

/// Merge the listed groups; target is a key over the merged grouping.
CoarsenResult coarsen(const WitnessCollection& wc, const std::vector<int>& merge, const MultiIndex& target,
                      RandomSource& rs, const Settings& settings = {},
                      const std::vector<AffineForm>* merged_forms = nullptr);

struct CoarsenCollectionResult {
  WitnessCollection wc;
  std::map<MultiIndex, CoarsenResult> runs;
};

CoarsenCollectionResult coarsen_collection(const WitnessCollection& wc, const std::vector<int>& merge,
                                           RandomSource& rs, const Settings& settings = {});

std::int64_t multinomial(const MultiIndex& e);
std::int64_t segre_degree(const MultidegreeMap& md);
/// Multidegree after a general slice in `group`: keys with e_group > 0, with e_group lowered by one.
MultidegreeMap slice_degrees(const MultidegreeMap& md, int group);

bool membership(const WitnessCollection& wc, const CVector& point, RandomSource& rs, const Settings& settings = {});

WitnessArchive to_archive(const WitnessCollection& wc, const std::string& source, std::uint64_t seed);
/// Rebuild a collection from an archive; the system text is reparsed.
WitnessCollection from_archive(const WitnessArchive& archive, RandomSource& rs);

}  // namespace multiwit
