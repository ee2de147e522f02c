#pragma once

#include <string>
#include <vector>

#include "multiwit/witness.hpp"

namespace multiwit {

class MonodromyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two intermediate slice systems; the loop runs L -> L' -> L'' -> L.
struct LoopSpec {
  FormGroups mid1;
  FormGroups mid2;
  Complex gamma[3] = {1.0, 1.0, 1.0};

  /// Forms drawn in the same groups as ws.slices from independent streams.
  /// Middle-slice constants are scaled by 10^u, u uniform in [0, decades).
  static LoopSpec random(const WitnessSet& ws, RandomSource& rs, double decades = 0.0);
  /// L' = L'' = L.
  static LoopSpec trivial(const WitnessSet& ws);
};

struct LoopResult {
  std::vector<int> perm;  // perm[i] = index reached from point i, -1 when unmatched
  std::vector<CVector> new_points;
  bool aborted = false;
  std::string diagnostic;
};

LoopResult monodromy_permutation(const WitnessSet& ws, const LoopSpec& loop, const Settings& settings = {});

/// Centroid linearity along the parallel pencil l + s*c of the single slice form.
bool trace_test(const WitnessSet& ws, const std::vector<int>& part, RandomSource& rs, const Settings& settings = {});

struct GrowResult {
  WitnessSet ws;
  int loops = 0;
  bool complete = false;  // stopping rule fired within the budget
  bool traced = false;    // trace test passed on the whole set
};

/// Grow a partial witness set by monodromy loops until quiescent (and traced when use_trace).
GrowResult grow_witness(const WitnessSet& seed, bool use_trace, RandomSource& rs, const Settings& settings = {});

/// Witness collection of the component through `seed`, from slices that all vanish at it.
WitnessCollection complete_witness(const PolySystem& f, const CVector& seed, RandomSource& rs,
                                   const Settings& settings = {});

struct MonodromyState {
  std::vector<CVector> points;
  std::vector<std::vector<int>> parts;
  std::vector<bool> certified;
  int loops_run = 0;
  bool complete = false;  // every part certified
};

MonodromyState breakup(const WitnessSet& ws, RandomSource& rs, const Settings& settings = {});

}  // namespace multiwit
