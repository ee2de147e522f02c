#pragma once

#include <string>
#include <vector>

#include "multiwit/dimension.hpp"
#include "multiwit/monodromy.hpp"
#include "multiwit/witness.hpp"

namespace multiwit {

class NidError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertifiedPart {
  std::vector<int> indices;  // into the witness point list
  int degree = 0;
  bool certified = false;
};

struct CurveDecomposition {
  std::vector<CVector> points;  // may exceed the input when loops found missing points
  std::vector<CertifiedPart> parts;
  int loops = 0;
  bool complete = false;
};

/// Breakup of an affine witness set with a single slice form into certified parts.
CurveDecomposition nid_curve_affine(const WitnessSet& ws, RandomSource& rs, const Settings& settings = {});

/// One step of a reduction to an affine curve: merge groups, or slice one group once.
struct ReductionStep {
  enum class Kind { Merge, Slice } kind = Kind::Merge;
  std::vector<int> groups;  // 0-based, in the grouping current at this step
};

/// "merge:2,3,4;slice:2;merge:1,2" with 1-based groups.
std::vector<ReductionStep> parse_route(const std::string& text);

/// Applies the steps; the result must be ungrouped with dimension one.
WitnessSet reduce_to_curve(const WitnessCollection& wc, const std::vector<ReductionStep>& steps, RandomSource& rs,
                           const Settings& settings = {});

struct ComponentRecord {
  DimensionProfile profile;
  DimensionPolytope polytope;
  MultiIndex m;
  MultiIndex e;
  std::vector<int> I_order;
  std::vector<AffineForm> L;  // m-slices through the representative, then the curve-cutting forms
  PolySystem base_tracking;   // square part of F for this dimension
  WitnessSet curve;           // ungrouped witness set of the curve, one slice form
  CVector representative;
  bool certified = false;
  int curve_loops = 0;
  std::vector<int> members;  // input indices, ascending
  MultidegreeMap degrees;    // members counted per key when keys are supplied
};

struct Decomposition {
  std::vector<ComponentRecord> components;
  std::vector<int> assignment;  // input index -> component index, -1 when unassigned
  bool complete = true;
  std::string diagnostic;
};

/// Slice counts m and a 0/1 key e for the polytope, by greedy unit slices in ascending group order.
std::pair<MultiIndex, MultiIndex> choose_slicing(const DimensionPolytope& dp, DimensionPolytope* sliced = nullptr);

/// Order the groups of e so that the first j have projected dimension j on the sliced polytope.
std::vector<int> order_groups(const DimensionPolytope& sliced, const MultiIndex& e);

/// Membership of q in the component through the record's curve witness.
bool component_member(const ComponentRecord& rec, const PolySystem& f, const CVector& q, RandomSource& rs,
                      const Settings& settings = {});

Decomposition nid_multi(const PolySystem& f, const std::vector<CVector>& points, RandomSource& rs,
                        const Settings& settings = {}, const std::vector<MultiIndex>* keys = nullptr);

struct ProductMembership {
  std::vector<bool> factors;
  bool combined = false;
};

/// Factor collection for one block of groups: remaining coordinates frozen at a witness point.
WitnessCollection factor_collection(const WitnessCollection& wc, const GroupSet& block, const CVector& anchor,
                                    RandomSource& rs);

ProductMembership membership_product(const WitnessCollection& wc, const CVector& point,
                                     const std::vector<GroupSet>& blocks, RandomSource& rs,
                                     const Settings& settings = {});

}  // namespace multiwit
