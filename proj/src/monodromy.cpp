#include "multiwit/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multiwit/dimension.hpp"

namespace multiwit {

namespace {

FormGroups random_like(const WitnessSet& ws, RandomSource& rs) {
  const auto& g = ws.grouping();
  FormGroups out(ws.slices.size());
  for (std::size_t i = 0; i < ws.slices.size(); ++i)
    for (std::size_t j = 0; j < ws.slices[i].size(); ++j)
      out[i].push_back(AffineForm::random(rs, g.num_vars(), g.group(static_cast<int>(i))));
  return out;
}

int slice_count(const WitnessSet& ws) {
  int c = 0;
  for (const auto& s : ws.slices) c += static_cast<int>(s.size());
  return c;
}

// A few Newton steps on a square system, stopping once the step stalls at rounding level.
CVector polish(const CompiledSystem& sys, CVector x) {
  CVector val;
  CMatrix jac;
  for (int it = 0; it < 4; ++it) {
    sys.evaluate(x, val, jac);
    Eigen::PartialPivLU<CMatrix> lu(jac);
    CVector d = lu.solve(val);
    if (!d.allFinite()) break;
    x -= d;
    if (d.norm() <= 1e-15 * (1.0 + x.norm())) break;
  }
  return x;
}

std::vector<CVector> polish_all(const PolySystem& tracking, const AffineForm& l, const std::vector<CVector>& pts) {
  std::vector<Polynomial> rows = tracking.polys();
  rows.push_back(l.poly());
  CompiledSystem sys(rows, tracking.num_vars());
  std::vector<CVector> out;
  for (const auto& x : pts) out.push_back(polish(sys, x));
  return out;
}

}  // namespace

LoopSpec LoopSpec::random(const WitnessSet& ws, RandomSource& rs, double decades) {
  LoopSpec l;
  RandomSource a = rs.split(1), b = rs.split(2);
  rs.next_u64();
  l.mid1 = random_like(ws, a);
  l.mid2 = random_like(ws, b);
  if (decades > 0.0) {
    RandomSource sc = rs.split(3);
    for (auto* mid : {&l.mid1, &l.mid2})
      for (auto& forms : *mid)
        for (auto& f : forms) f.constant *= std::pow(10.0, decades * sc.uniform());
  }
  for (auto& g : l.gamma) g = rs.unit_complex();
  return l;
}

LoopSpec LoopSpec::trivial(const WitnessSet& ws) {
  LoopSpec l;
  l.mid1 = ws.slices;
  l.mid2 = ws.slices;
  return l;
}

LoopResult monodromy_permutation(const WitnessSet& ws, const LoopSpec& loop, const Settings& settings) {
  LoopResult res;
  std::size_t n = ws.points.size();
  res.perm.assign(n, -1);
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  std::vector<CVector> cur = ws.points;
  const FormGroups* legs[4] = {&ws.slices, &loop.mid1, &loop.mid2, &ws.slices};
  for (int leg = 0; leg < 3; ++leg) {
    if (cur.empty()) break;
    MoveResult mr = track_rows(ws.tracking, {}, polys_of(*legs[leg]), polys_of(*legs[leg + 1]), cur, ws.system,
                               loop.gamma[leg], settings);
    std::vector<int> next_alive;
    std::vector<CVector> next;
    for (std::size_t j = 0; j < mr.paths.size(); ++j) {
      if (mr.paths[j].status != PathStatus::Converged) continue;
      next_alive.push_back(alive[j]);
      next.push_back(mr.paths[j].endpoint);
    }
    alive = std::move(next_alive);
    cur = std::move(next);
  }
  // Mutual nearest neighbours between endpoints and start points.
  std::vector<int> claimed(n, -1);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    int match = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!same_point(cur[j], ws.points[i], settings.match_tol)) continue;
      if (match >= 0) {
        res.aborted = true;
        res.diagnostic = "ambiguous match: endpoint within tolerance of two start points";
        return res;
      }
      match = static_cast<int>(i);
    }
    if (match < 0) {
      insert_unique(res.new_points, cur[j], settings.match_tol);
      continue;
    }
    if (claimed[match] >= 0) {
      res.aborted = true;
      res.diagnostic = "ambiguous match: two endpoints reach the same start point";
      return res;
    }
    claimed[match] = static_cast<int>(j);
    res.perm[alive[j]] = match;
  }
  return res;
}

bool trace_test(const WitnessSet& ws, const std::vector<int>& part, RandomSource& rs, const Settings& settings) {
  if (slice_count(ws) != 1) throw MonodromyError("trace test needs witness data with exactly one slice form");
  if (part.empty()) throw MonodromyError("trace test on an empty part");
  std::size_t g = 0;
  while (ws.slices[g].empty()) ++g;
  const AffineForm& l = ws.slices[g][0];
  const int n = ws.tracking.num_vars();
  Complex c = rs.unit_complex();
  // Random chart y = x / (1 + a.x); the pencil below is parallel in y.
  std::vector<double> norms;
  for (const auto& x : ws.points) norms.push_back(x.norm());
  std::nth_element(norms.begin(), norms.begin() + norms.size() / 2, norms.end());
  CVector a(n);
  for (int i = 0; i < n; ++i) a(i) = rs.gaussian_complex();
  a /= a.norm() * (1.0 + norms[norms.size() / 2]);
  auto chart = [&](const CVector& x) { return CVector(x / (1.0 + a.cwiseProduct(x).sum())); };
  std::vector<CVector> pts;
  for (int i : part) pts.push_back(ws.points.at(i));
  pts = polish_all(ws.tracking, l, pts);
  auto centroid = [&](const std::vector<CVector>& v) {
    CVector s = CVector::Zero(n);
    for (const auto& x : v) s += chart(x);
    return CVector(s / static_cast<double>(v.size()));
  };
  CVector c0 = centroid(pts);
  CVector diff[2];
  double svals[2] = {settings.s1, settings.s2};
  for (int k = 0; k < 2; ++k) {
    AffineForm moved = l;
    moved.coeffs += svals[k] * c * a;
    moved.constant += svals[k] * c;
    MoveResult mr;
    bool ok = false;
    for (int attempt = 0; attempt < std::max(1, settings.path_retries) && !ok; ++attempt) {
      mr = track_rows(ws.tracking, {}, {l.poly()}, {moved.poly()}, pts, ws.system, rs.unit_complex(), settings);
      ok = mr.converged == static_cast<int>(pts.size()) && mr.points.size() == pts.size();
    }
    if (!ok) throw MonodromyError("trace test indeterminate: path failure along the pencil");
    std::vector<CVector> ends;
    for (const auto& p : mr.paths) ends.push_back(p.endpoint);
    ends = polish_all(ws.tracking, moved, ends);
    diff[k] = (centroid(ends) - c0) / svals[k];
  }
  double gap = (diff[0] - diff[1]).norm();
  double disp = std::max(diff[0].norm(), diff[1].norm());
  return gap <= settings.trace_tol * disp;
}

GrowResult grow_witness(const WitnessSet& seed, bool use_trace, RandomSource& rs, const Settings& settings) {
  GrowResult gr;
  gr.ws = seed;
  int quiet = 0;
  std::uint64_t tag = 1;
  while (gr.loops < settings.max_loops) {
    RandomSource lr = rs.split(tag++);
    LoopSpec loop = LoopSpec::random(gr.ws, lr);
    LoopResult res = monodromy_permutation(gr.ws, loop, settings);
    ++gr.loops;
    bool added = false;
    for (const auto& p : res.new_points) added |= insert_unique(gr.ws.points, p, settings.match_tol);
    quiet = added ? 0 : quiet + 1;
    if (quiet < settings.stable_loops) continue;
    if (!use_trace) {
      gr.complete = true;
      break;
    }
    std::vector<int> all(gr.ws.points.size());
    std::iota(all.begin(), all.end(), 0);
    RandomSource tr = rs.split(tag++);
    bool ok = false;
    try {
      ok = trace_test(gr.ws, all, tr, settings);
    } catch (const MonodromyError&) {
      ok = false;
    }
    if (ok) {
      gr.complete = gr.traced = true;
      break;
    }
    quiet = 0;
  }
  return gr;
}

WitnessCollection complete_witness(const PolySystem& f, const CVector& seed, RandomSource& rs,
                                   const Settings& settings) {
  const auto& g = f.grouping();
  DimensionProfile prof = local_multidimension(f, seed, settings.rank_tol);
  DimensionPolytope dp = dimension_polytope(prof, g.sizes());
  WitnessCollection wc;
  wc.system = f;
  RandomSource setup = rs.split(1);
  wc.tracking = tracking_system(f, prof.total_dim, setup);
  for (int i = 0; i < g.num_groups(); ++i) {
    std::vector<AffineForm> forms;
    for (int j = 0; j < g.group_size(i); ++j)
      forms.push_back(AffineForm::random_through(setup, g.num_vars(), g.group(i), seed));
    wc.bank.forms.push_back(forms);
  }
  bool use_trace = g.num_groups() == 1 && prof.total_dim == 1;
  std::uint64_t tag = 10;
  for (const auto& e : dp) {
    WitnessSet ws = wc.witness_set(e);
    ws.points = {seed};
    RandomSource sub = rs.split(tag++);
    GrowResult gr = grow_witness(ws, use_trace, sub, settings);
    wc.entries[e] = gr.ws.points;
    wc.solved.insert(e);
    if (!gr.complete) wc.complete = false;
  }
  return wc;
}

MonodromyState breakup(const WitnessSet& ws, RandomSource& rs, const Settings& settings) {
  MonodromyState st;
  WitnessSet cur = ws;
  st.points = ws.points;
  std::vector<int> part_of;
  std::uint64_t tag = 1;
  auto certify = [&](int p) {
    RandomSource tr = rs.split(tag++);
    try {
      st.certified[p] = trace_test(cur, st.parts[p], tr, settings);
    } catch (const MonodromyError&) {
      st.certified[p] = false;
    }
  };
  auto add_point = [&](int idx) {
    st.parts.push_back({idx});
    st.certified.push_back(false);
    part_of.push_back(static_cast<int>(st.parts.size()) - 1);
    certify(static_cast<int>(st.parts.size()) - 1);
  };
  for (int i = 0; i < static_cast<int>(st.points.size()); ++i) add_point(i);
  auto all_certified = [&] {
    for (std::size_t p = 0; p < st.parts.size(); ++p)
      if (!st.parts[p].empty() && !st.certified[p]) return false;
    return true;
  };
  while (!all_certified() && st.loops_run < settings.max_loops) {
    RandomSource lr = rs.split(tag++);
    // Spread constants so loops also circle branch points far from the origin.
    LoopResult res = monodromy_permutation(cur, LoopSpec::random(cur, lr, 5.0), settings);
    ++st.loops_run;
    if (res.aborted) continue;
    std::vector<int> changed;
    for (std::size_t i = 0; i < res.perm.size(); ++i) {
      if (res.perm[i] < 0) continue;
      int a = part_of[i], b = part_of[res.perm[i]];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      for (int idx : st.parts[b]) {
        part_of[idx] = a;
        st.parts[a].push_back(idx);
      }
      st.parts[b].clear();
      changed.push_back(a);
    }
    for (const auto& p : res.new_points) {
      if (!insert_unique(st.points, p, settings.match_tol)) continue;
      cur.points = st.points;
      add_point(static_cast<int>(st.points.size()) - 1);
    }
    cur.points = st.points;
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    for (int p : changed) {
      if (st.parts[p].empty()) continue;
      std::sort(st.parts[p].begin(), st.parts[p].end());
      certify(p);
    }
  }
  std::vector<std::vector<int>> parts;
  std::vector<bool> cert;
  for (std::size_t p = 0; p < st.parts.size(); ++p) {
    if (st.parts[p].empty()) continue;
    parts.push_back(st.parts[p]);
    cert.push_back(st.certified[p]);
  }
  st.parts = std::move(parts);
  st.certified = std::move(cert);
  st.complete = all_certified();
  return st;
}

}  // namespace multiwit
