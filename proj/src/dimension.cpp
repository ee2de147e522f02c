#include "multiwit/dimension.hpp"

#include <algorithm>
#include <numeric>

namespace multiwit {

int DimensionProfile::dim(const GroupSet& I) const {
  if (I.empty()) return 0;
  auto it = proj_dims.find(I);
  if (it != proj_dims.end()) return it->second;
  return total_dim;
}

namespace {

GroupSet mask_set(unsigned mask, int k) {
  GroupSet s;
  for (int i = 0; i < k; ++i)
    if (mask & (1u << i)) s.push_back(i);
  return s;
}

// Kernel dimension of DF restricted to the columns of groups outside `omit`.
int kernel_dim(const CMatrix& full, const VariableGrouping& g, const GroupSet& omit, double tol) {
  std::vector<int> cols;
  for (int i = 0; i < g.num_groups(); ++i)
    if (!std::binary_search(omit.begin(), omit.end(), i))
      for (int v : g.group(i)) cols.push_back(v);
  std::sort(cols.begin(), cols.end());
  CMatrix sub(full.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = full.col(cols[c]);
  int r = numerical_rank(sub, tol);
  int r10 = numerical_rank(sub, 10.0 * tol);
  if (r != r10) throw DimensionError("ill-conditioned Jacobian: rank changes within one decade of the tolerance");
  return static_cast<int>(cols.size()) - r;
}

}  // namespace

DimensionProfile local_multidimension(const PolySystem& f, const CVector& point, double rel_tol) {
  const auto& g = f.grouping();
  int k = g.num_groups();
  if (k > 16) throw DimensionError("too many variable groups (limit 16)");
  if (point.size() != f.num_vars()) throw DimensionError("point arity mismatch");
  CMatrix jac = jacobian(f, point);
  DimensionProfile prof;
  int ker = kernel_dim(jac, g, {}, rel_tol);
  prof.total_dim = ker;
  unsigned full = (1u << k) - 1;
  for (unsigned mask = 1; mask < full; ++mask) {
    GroupSet I = mask_set(mask, k);
    prof.proj_dims[I] = ker - kernel_dim(jac, g, I, rel_tol);
  }
  for (const auto& [I, d] : prof.proj_dims) {
    if (d < 0 || d > prof.total_dim) throw DimensionError("inconsistent projected dimension");
    for (int i = 0; i < k; ++i) {
      if (std::binary_search(I.begin(), I.end(), i)) continue;
      GroupSet J = I;
      J.insert(std::upper_bound(J.begin(), J.end(), i), i);
      if (prof.dim(J) < d) throw DimensionError("projected dimensions are not monotone");
    }
  }
  return prof;
}

DimensionPolytope dimension_polytope(const DimensionProfile& profile, const MultiIndex& nvec) {
  int k = static_cast<int>(nvec.size());
  DimensionPolytope dp;
  for (const auto& e : multi_indices(nvec, profile.total_dim)) {
    bool ok = true;
    for (const auto& [I, d] : profile.proj_dims) {
      if (static_cast<int>(I.size()) >= k) continue;
      int s = 0;
      for (int i : I) s += e[i];
      if (s > d) {
        ok = false;
        break;
      }
    }
    if (ok) dp.insert(e);
  }
  if (dp.empty()) throw DimensionError("dimension polytope is empty: inconsistent profile");
  return dp;
}

std::vector<EquidimPart> equidim_partition(const PolySystem& f, const std::vector<CVector>& points, double rel_tol) {
  std::vector<EquidimPart> parts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    DimensionProfile p = local_multidimension(f, points[i], rel_tol);
    auto it = std::find_if(parts.begin(), parts.end(), [&](const EquidimPart& q) { return q.profile == p; });
    if (it == parts.end()) {
      parts.push_back({p, {static_cast<int>(i)}});
    } else {
      it->indices.push_back(static_cast<int>(i));
    }
  }
  return parts;
}

DimensionPolytope project(const DimensionPolytope& dp, const GroupSet& I) {
  DimensionPolytope out;
  for (const auto& e : dp) {
    MultiIndex p;
    for (int i : I) p.push_back(e[i]);
    out.insert(p);
  }
  return out;
}

int projected_dim(const DimensionPolytope& dp, const GroupSet& I) {
  int best = 0;
  for (const auto& e : dp) {
    int s = 0;
    for (int i : I) s += e[i];
    best = std::max(best, s);
  }
  return best;
}

DimensionPolytope slice_polytope(const DimensionPolytope& dp, int group) {
  DimensionPolytope out;
  for (auto e : dp) {
    if (e[group] == 0) continue;
    --e[group];
    out.insert(e);
  }
  return out;
}

bool is_product(const DimensionPolytope& dp, const std::vector<GroupSet>& blocks) {
  std::size_t prod = 1;
  for (const auto& b : blocks) prod *= project(dp, b).size();
  return prod == dp.size();
}

std::vector<GroupSet> product_factorization(const DimensionPolytope& dp) {
  if (dp.empty()) throw DimensionError("product_factorization of an empty polytope");
  int k = static_cast<int>(dp.begin()->size());
  std::vector<GroupSet> blocks;
  for (int i = 0; i < k; ++i) blocks.push_back({i});
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < blocks.size() && !changed; ++a) {
      for (std::size_t b = a + 1; b < blocks.size() && !changed; ++b) {
        GroupSet u = blocks[a];
        u.insert(u.end(), blocks[b].begin(), blocks[b].end());
        std::sort(u.begin(), u.end());
        if (project(dp, u).size() != project(dp, blocks[a]).size() * project(dp, blocks[b]).size()) {
          blocks[a] = u;
          blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(b));
          changed = true;
        }
      }
    }
  }
  if (!is_product(dp, blocks)) {
    GroupSet all(k);
    std::iota(all.begin(), all.end(), 0);
    return {all};
  }
  return blocks;
}

}  // namespace multiwit
