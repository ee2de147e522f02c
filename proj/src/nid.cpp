#include "multiwit/nid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace multiwit {

CurveDecomposition nid_curve_affine(const WitnessSet& ws, RandomSource& rs, const Settings& settings) {
  MonodromyState st = breakup(ws, rs, settings);
  CurveDecomposition out;
  out.points = st.points;
  out.loops = st.loops_run;
  out.complete = st.complete;
  for (std::size_t p = 0; p < st.parts.size(); ++p)
    out.parts.push_back({st.parts[p], static_cast<int>(st.parts[p].size()), st.certified[p]});
  std::sort(out.parts.begin(), out.parts.end(), [](const CertifiedPart& a, const CertifiedPart& b) {
    return a.indices.front() < b.indices.front();
  });
  return out;
}

std::vector<ReductionStep> parse_route(const std::string& text) {
  std::vector<ReductionStep> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw NidError("route step needs kind:groups: " + item);
    ReductionStep st;
    std::string kind = item.substr(0, colon);
    if (kind == "merge") {
      st.kind = ReductionStep::Kind::Merge;
    } else if (kind == "slice") {
      st.kind = ReductionStep::Kind::Slice;
    } else {
      throw NidError("unknown route step: " + kind);
    }
    std::stringstream gs(item.substr(colon + 1));
    std::string g;
    while (std::getline(gs, g, ',')) {
      int idx = 0;
      try {
        idx = std::stoi(g);
      } catch (const std::exception&) {
        throw NidError("bad group index in route: " + g);
      }
      if (idx < 1) throw NidError("route group indices start at 1: " + g);
      st.groups.push_back(idx - 1);
    }
    if (st.groups.empty() || (st.kind == ReductionStep::Kind::Slice && st.groups.size() != 1))
      throw NidError("route step has the wrong number of groups: " + item);
    steps.push_back(st);
  }
  return steps;
}

WitnessSet reduce_to_curve(const WitnessCollection& wc, const std::vector<ReductionStep>& steps, RandomSource& rs,
                           const Settings& settings) {
  WitnessCollection cur = wc;
  std::uint64_t tag = 1;
  for (const auto& st : steps) {
    for (int g : st.groups)
      if (g < 0 || g >= cur.grouping().num_groups()) throw NidError("route group index out of range");
    if (st.kind == ReductionStep::Kind::Slice) {
      cur = slice(cur, st.groups[0]);
    } else {
      RandomSource sub = rs.split(tag++);
      cur = coarsen_collection(cur, st.groups, sub, settings).wc;
    }
  }
  if (cur.grouping().num_groups() != 1 || cur.dimension() != 1)
    throw NidError("route does not end at an ungrouped curve");
  return cur.witness_set({1});
}

std::pair<MultiIndex, MultiIndex> choose_slicing(const DimensionPolytope& dp, DimensionPolytope* sliced) {
  if (dp.empty()) throw NidError("choose_slicing: empty polytope");
  int k = static_cast<int>(dp.begin()->size());
  MultiIndex m(k, 0);
  DimensionPolytope cur = dp;
  for (int i = 0; i < k; ++i) {
    while (projected_dim(cur, {i}) >= 2) {
      cur = slice_polytope(cur, i);
      ++m[i];
    }
  }
  MultiIndex e = *cur.begin();
  if (sliced) *sliced = cur;
  return {m, e};
}

std::vector<int> order_groups(const DimensionPolytope& sliced, const MultiIndex& e) {
  std::vector<int> pool;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] == 1) pool.push_back(static_cast<int>(i));
  std::vector<int> order;
  std::vector<bool> used(pool.size(), false);
  auto rec = [&](auto&& self) -> bool {
    if (order.size() == pool.size()) return true;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (used[c]) continue;
      GroupSet prefix = order;
      prefix.push_back(pool[c]);
      std::sort(prefix.begin(), prefix.end());
      if (projected_dim(sliced, prefix) != static_cast<int>(order.size()) + 1) continue;
      used[c] = true;
      order.push_back(pool[c]);
      if (self(self)) return true;
      order.pop_back();
      used[c] = false;
    }
    return false;
  };
  if (!rec(rec)) throw NidError("no group order with prefix dimensions 1..|e|");
  return order;
}

bool component_member(const ComponentRecord& rec, const PolySystem& f, const CVector& q, RandomSource& rs,
                      const Settings& settings) {
  std::vector<AffineForm> forms = rec.L;
  forms.push_back(rec.curve.slices[0][0]);
  std::vector<AffineForm> shifted;
  for (const auto& l : forms) shifted.push_back(l.through(q));
  bool failed = false;
  for (int attempt = 0; attempt < 3; ++attempt) {
    MoveResult mr = track_rows(rec.base_tracking, {}, polys_of(forms), polys_of(shifted), rec.curve.points, f,
                               rs.unit_complex(), settings);
    for (const auto& p : mr.points)
      if (same_point(p, q, settings.match_tol)) return true;
    failed = mr.failed > 0;
    if (!failed) return false;
  }
  throw NidError("membership indeterminate: path failures on every attempt");
}

namespace {

ComponentRecord build_record(const PolySystem& f, const PolySystem& tracking, const DimensionProfile& prof,
                             const CVector& p, RandomSource& rs, const Settings& settings) {
  const auto& g = f.grouping();
  int n = g.num_vars();
  ComponentRecord rec;
  rec.profile = prof;
  rec.polytope = dimension_polytope(prof, g.sizes());
  rec.representative = p;
  rec.base_tracking = tracking;
  DimensionPolytope sliced;
  std::tie(rec.m, rec.e) = choose_slicing(rec.polytope, &sliced);
  rec.I_order = order_groups(sliced, rec.e);
  for (int i = 0; i < g.num_groups(); ++i)
    for (int j = 0; j < rec.m[i]; ++j) rec.L.push_back(AffineForm::random_through(rs, n, g.group(i), p));
  for (std::size_t j = 1; j < rec.I_order.size(); ++j) {
    std::vector<int> vars;
    for (std::size_t a = 0; a <= j; ++a) {
      const auto& gv = g.group(rec.I_order[a]);
      vars.insert(vars.end(), gv.begin(), gv.end());
    }
    std::sort(vars.begin(), vars.end());
    rec.L.push_back(AffineForm::random_through(rs, n, vars, p));
  }
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  VariableGrouping flat = g.ungrouped();
  WitnessSet seed;
  seed.system = f.appended(polys_of(rec.L)).with_grouping(flat);
  seed.tracking = tracking.appended(polys_of(rec.L)).with_grouping(flat);
  if (seed.tracking.size() != n - 1) throw NidError("curve slicing does not leave a curve");
  seed.e = {1};
  seed.slices = {{AffineForm::random_through(rs, n, all, p)}};
  seed.points = {p};
  RandomSource grow = rs.split(77);
  GrowResult gr = grow_witness(seed, true, grow, settings);
  rec.curve = gr.ws;
  rec.certified = gr.traced;
  rec.curve_loops = gr.loops;
  return rec;
}

}  // namespace

Decomposition nid_multi(const PolySystem& f, const std::vector<CVector>& points, RandomSource& rs,
                        const Settings& settings, const std::vector<MultiIndex>* keys) {
  Decomposition dec;
  dec.assignment.assign(points.size(), -1);
  std::vector<EquidimPart> parts;
  try {
    parts = equidim_partition(f, points, settings.rank_tol);
  } catch (const std::exception& ex) {
    dec.complete = false;
    dec.diagnostic = ex.what();
    return dec;
  }
  std::uint64_t tag = 1;
  for (const auto& part : parts) {
    RandomSource setup = rs.split(tag++);
    PolySystem tracking = tracking_system(f, part.profile.total_dim, setup);
    std::vector<int> remaining = part.indices;
    while (!remaining.empty()) {
      int pi = remaining.front();
      RandomSource sub = rs.split(tag++);
      try {
        ComponentRecord rec = build_record(f, tracking, part.profile, points[pi], sub, settings);
        rec.members.push_back(pi);
        std::vector<int> rest;
        for (std::size_t r = 1; r < remaining.size(); ++r) {
          int qi = remaining[r];
          if (component_member(rec, f, points[qi], sub, settings)) {
            rec.members.push_back(qi);
          } else {
            rest.push_back(qi);
          }
        }
        std::sort(rec.members.begin(), rec.members.end());
        if (keys)
          for (int idx : rec.members) ++rec.degrees[keys->at(idx)];
        int cidx = static_cast<int>(dec.components.size());
        for (int idx : rec.members) dec.assignment[idx] = cidx;
        if (!rec.certified) dec.complete = false;
        dec.components.push_back(std::move(rec));
        remaining = std::move(rest);
      } catch (const std::exception& ex) {
        dec.complete = false;
        dec.diagnostic = ex.what();
        return dec;
      }
    }
  }
  return dec;
}

WitnessCollection factor_collection(const WitnessCollection& wc, const GroupSet& block, const CVector& anchor,
                                    RandomSource& rs) {
  const auto& g = wc.grouping();
  GroupSet b = block;
  std::sort(b.begin(), b.end());
  std::vector<int> keep;
  for (int i : b) keep.insert(keep.end(), g.group(i).begin(), g.group(i).end());
  std::sort(keep.begin(), keep.end());
  std::vector<int> frozen;
  for (int v = 0; v < g.num_vars(); ++v)
    if (!std::binary_search(keep.begin(), keep.end(), v)) frozen.push_back(v);
  CVector values(static_cast<Eigen::Index>(frozen.size()));
  for (std::size_t j = 0; j < frozen.size(); ++j) values(static_cast<Eigen::Index>(j)) = anchor(frozen[j]);

  std::vector<Polynomial> polys;
  double scale = std::max(1.0, anchor.cwiseAbs().maxCoeff());
  for (const auto& p : wc.system.polys()) {
    Polynomial q = p.substitute(frozen, values);
    if (q.total_degree() > 0) {
      polys.push_back(q);
      continue;
    }
    Complex c = q.is_zero() ? Complex(0.0) : q.terms().begin()->second;
    double mag = 0.0;
    for (const auto& [ex, coef] : p.terms()) mag += std::abs(coef);
    if (std::abs(c) > 1e-8 * mag * std::pow(scale, std::max(1, p.total_degree())))
      throw NidError("anchor point is not on the variety");
  }
  VariableGrouping rg = g.restrict_to(b);
  WitnessCollection out;
  out.system = PolySystem(polys, rg);
  auto project = [&](const CVector& x) {
    CVector y(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) y(static_cast<Eigen::Index>(j)) = x(keep[j]);
    return y;
  };
  for (int i : b) {
    std::vector<AffineForm> forms;
    for (const auto& l : wc.bank.forms[i]) forms.push_back({project(l.coeffs), l.constant});
    out.bank.forms.push_back(forms);
  }
  int d = -1;
  for (const auto& [e, pts] : wc.entries) {
    MultiIndex eb;
    for (int i : b) eb.push_back(e[i]);
    if (d < 0) d = total(eb);
    if (total(eb) != d) throw NidError("collection is not a product over this block");
    auto& dst = out.entries[eb];
    for (const auto& x : pts) insert_unique(dst, project(x));
    out.solved.insert(eb);
  }
  if (d < 0) throw NidError("empty witness collection");
  out.tracking = tracking_system(out.system, d, rs);
  return out;
}

ProductMembership membership_product(const WitnessCollection& wc, const CVector& point,
                                     const std::vector<GroupSet>& blocks, RandomSource& rs,
                                     const Settings& settings) {
  const CVector* anchor = nullptr;
  for (const auto& [e, pts] : wc.entries)
    if (!pts.empty()) {
      anchor = &pts.front();
      break;
    }
  if (!anchor) throw NidError("membership_product: empty witness collection");
  ProductMembership res;
  res.combined = true;
  std::uint64_t tag = 1;
  for (const auto& b : blocks) {
    RandomSource sub = rs.split(tag++);
    WitnessCollection fc = factor_collection(wc, b, *anchor, sub);
    std::vector<int> keep;
    for (int i : b) keep.insert(keep.end(), wc.grouping().group(i).begin(), wc.grouping().group(i).end());
    std::sort(keep.begin(), keep.end());
    CVector q(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) q(static_cast<Eigen::Index>(j)) = point(keep[j]);
    bool in = membership(fc, q, sub, settings);
    res.factors.push_back(in);
    res.combined = res.combined && in;
  }
  return res;
}

}  // namespace multiwit
