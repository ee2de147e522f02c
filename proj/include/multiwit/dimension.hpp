#pragma once

#include <map>
#include <set>
#include <vector>

#include "multiwit/algebra.hpp"

namespace multiwit {

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using GroupSet = std::vector<int>;  // sorted group indices

struct DimensionProfile {
  int total_dim = 0;
  std::map<GroupSet, int> proj_dims;  // every proper nonempty subset

  /// dim of the projection to I; the full set gives total_dim, the empty set 0.
  int dim(const GroupSet& I) const;
  bool operator==(const DimensionProfile& o) const = default;
  auto operator<=>(const DimensionProfile& o) const = default;
};

using DimensionPolytope = std::set<MultiIndex>;

/// Rank-based multidimension at a smooth point, checked for stability across one decade of rel_tol.
DimensionProfile local_multidimension(const PolySystem& f, const CVector& point, double rel_tol = kDefaultRankTol);

/// Lattice points e in [n] with |e| = total_dim and sum_{i in I} e_i <= dim_I for every proper I.
DimensionPolytope dimension_polytope(const DimensionProfile& profile, const MultiIndex& nvec);

struct EquidimPart {
  DimensionProfile profile;
  std::vector<int> indices;  // into the input list, ascending
};

/// Parts in order of first appearance.
std::vector<EquidimPart> equidim_partition(const PolySystem& f, const std::vector<CVector>& points,
                                           double rel_tol = kDefaultRankTol);

/// Finest partition of the groups such that dp is the product of its projections.
std::vector<GroupSet> product_factorization(const DimensionPolytope& dp);

DimensionPolytope project(const DimensionPolytope& dp, const GroupSet& I);
/// Max of sum_{i in I} e_i over dp.
int projected_dim(const DimensionPolytope& dp, const GroupSet& I);
/// {e - eps_i : e in dp, e_i > 0}.
DimensionPolytope slice_polytope(const DimensionPolytope& dp, int group);
bool is_product(const DimensionPolytope& dp, const std::vector<GroupSet>& blocks);

}  // namespace multiwit
