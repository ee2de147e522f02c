#include "multiwit/witness.hpp"

#include <algorithm>
#include <numeric>

#include "multiwit/dimension.hpp"

namespace multiwit {

Complex AffineForm::operator()(const CVector& x) const {
  return (coeffs.array() * x.array()).sum() + constant;
}

AffineForm AffineForm::through(const CVector& x) const {
  AffineForm f = *this;
  f.constant = -(coeffs.array() * x.array()).sum();
  return f;
}

AffineForm AffineForm::random(RandomSource& rs, int nvars, const std::vector<int>& vars) {
  AffineForm f;
  f.coeffs = CVector::Zero(nvars);
  for (int v : vars) f.coeffs(v) = rs.gaussian_complex();
  f.constant = rs.gaussian_complex();
  return f;
}

AffineForm AffineForm::random_through(RandomSource& rs, int nvars, const std::vector<int>& vars, const CVector& x) {
  return random(rs, nvars, vars).through(x);
}

std::vector<Polynomial> polys_of(const std::vector<AffineForm>& forms) {
  std::vector<Polynomial> out;
  for (const auto& f : forms) out.push_back(f.poly());
  return out;
}

std::vector<Polynomial> polys_of(const FormGroups& forms) {
  std::vector<Polynomial> out;
  for (const auto& g : forms)
    for (const auto& f : g) out.push_back(f.poly());
  return out;
}

SliceBank SliceBank::random(const VariableGrouping& grouping, RandomSource& rs) {
  SliceBank bank;
  for (int g = 0; g < grouping.num_groups(); ++g) {
    std::vector<AffineForm> forms;
    for (int j = 0; j < grouping.group_size(g); ++j)
      forms.push_back(AffineForm::random(rs, grouping.num_vars(), grouping.group(g)));
    bank.forms.push_back(forms);
  }
  return bank;
}

FormGroups SliceBank::selection(const MultiIndex& e) const {
  if (e.size() != forms.size()) throw WitnessError("selection: key length does not match the bank");
  FormGroups out(forms.size());
  for (std::size_t g = 0; g < forms.size(); ++g) {
    if (e[g] < 0 || e[g] > static_cast<int>(forms[g].size()))
      throw WitnessError("selection: key " + key_string(e) + " outside the bank");
    out[g].assign(forms[g].begin(), forms[g].begin() + e[g]);
  }
  return out;
}

double WitnessSet::max_residual() const {
  PolySystem all = system.appended(slice_polys());
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, relative_residual(all, p));
  return r;
}

WitnessSet WitnessCollection::witness_set(const MultiIndex& e) const {
  WitnessSet ws;
  ws.system = system;
  ws.tracking = tracking;
  ws.e = e;
  ws.slices = bank.selection(e);
  auto it = entries.find(e);
  if (it != entries.end()) ws.points = it->second;
  return ws;
}

MultidegreeMap WitnessCollection::degrees() const {
  MultidegreeMap md;
  for (const auto& [e, pts] : entries)
    if (!pts.empty()) md[e] = static_cast<std::int64_t>(pts.size());
  return md;
}

MoveResult track_rows(const PolySystem& tracking, const std::vector<Polynomial>& fixed_extra,
                      const std::vector<Polynomial>& start_rows, const std::vector<Polynomial>& target_rows,
                      const std::vector<CVector>& points, const PolySystem& check, Complex gamma,
                      const Settings& settings) {
  std::vector<Polynomial> fixed = tracking.polys();
  fixed.insert(fixed.end(), fixed_extra.begin(), fixed_extra.end());
  Homotopy h(tracking.num_vars(), fixed, start_rows, target_rows, gamma);
  MoveResult res;
  res.paths = track_many(h, points, settings.track);
  PolySystem full = check.appended(fixed_extra).appended(target_rows);
  for (auto& r : res.paths) {
    if (r.status == PathStatus::Converged && relative_residual(full, r.endpoint) > settings.residual_tol) {
      r.status = PathStatus::Failed;
      r.diagnostic = "endpoint off the defining system";
    }
    switch (r.status) {
      case PathStatus::Converged:
        ++res.converged;
        insert_unique(res.points, r.endpoint, settings.match_tol);
        break;
      case PathStatus::Diverged:
        ++res.diverged;
        break;
      case PathStatus::Failed:
        ++res.failed;
        break;
    }
  }
  return res;
}

MoveResult track_rows_retry(const PolySystem& tracking, const std::vector<Polynomial>& fixed_extra,
                            const std::vector<Polynomial>& start_rows, const std::vector<Polynomial>& target_rows,
                            const std::vector<CVector>& points, const PolySystem& check, RandomSource& rs,
                            const Settings& settings, int expected) {
  MoveResult out;
  for (int attempt = 0; attempt < std::max(1, settings.path_retries); ++attempt) {
    MoveResult mr =
        track_rows(tracking, fixed_extra, start_rows, target_rows, points, check, rs.unit_complex(), settings);
    if (attempt == 0) {
      out = std::move(mr);
    } else {
      std::vector<CVector> pts = std::move(out.points);
      for (const auto& p : mr.points) insert_unique(pts, p, settings.match_tol);
      out = std::move(mr);
      out.points = std::move(pts);
    }
    out.attempts = attempt + 1;
    bool done = expected >= 0 ? static_cast<int>(out.points.size()) >= expected : out.failed == 0;
    if (done) break;
  }
  return out;
}

PolySystem tracking_system(const PolySystem& f, int dimension, RandomSource& rs) {
  int rows = f.num_vars() - dimension;
  if (rows < 0 || rows > f.size())
    throw WitnessError("dimension " + std::to_string(dimension) + " incompatible with the system size");
  return square_up(f, rows, rs);
}

WitnessCollection compute_witness_collection(const PolySystem& f, const std::vector<MultiIndex>& candidates,
                                             RandomSource& rs, const Settings& settings) {
  if (candidates.empty()) throw WitnessError("no candidate multi-indices");
  int d = total(candidates.front());
  for (const auto& e : candidates) {
    if (total(e) != d) throw WitnessError("candidates must share |e|");
    if (static_cast<int>(e.size()) != f.grouping().num_groups()) throw WitnessError("candidate length mismatch");
  }
  WitnessCollection wc;
  wc.system = f;
  RandomSource setup = rs.split(1);
  wc.tracking = tracking_system(f, d, setup);
  wc.bank = SliceBank::random(f.grouping(), setup);
  SolveOptions so;
  so.track = settings.track;
  so.residual_tol = settings.residual_tol;
  so.match_tol = settings.match_tol;
  so.max_fail_fraction = settings.max_fail_fraction;
  std::uint64_t tag = 100;
  for (const auto& e : candidates) {
    RandomSource sub = rs.split(tag++);
    SolveReport rep = solve_squared_report(f, wc.tracking, polys_of(wc.bank.selection(e)), sub, so);
    if (!rep.points.empty()) wc.entries[e] = rep.points;
    wc.solved.insert(e);
  }
  return wc;
}

WitnessCollection compute_witness_collection(const PolySystem& f, const CVector& probe, RandomSource& rs,
                                             const Settings& settings) {
  DimensionProfile prof = local_multidimension(f, probe, settings.rank_tol);
  return compute_witness_collection(f, multi_indices(f.grouping().sizes(), prof.total_dim), rs, settings);
}

WitnessCollection slice(const WitnessCollection& wc, int group) {
  const auto& grouping = wc.grouping();
  if (group < 0 || group >= grouping.num_groups()) throw WitnessError("slice: group index out of range");
  bool any = false;
  for (const auto& e : wc.solved)
    if (e[group] > 0) any = true;
  for (const auto& [e, pts] : wc.entries)
    if (e[group] > 0) any = true;
  if (!any) throw WitnessError("slice: the slice is empty (no key has a positive entry in this group)");
  if (wc.bank.forms[group].empty()) throw WitnessError("slice: bank for this group is exhausted");
  WitnessCollection out;
  Polynomial l = wc.bank.forms[group].front().poly();
  out.system = wc.system.appended({l});
  out.tracking = wc.tracking.appended({l});
  out.bank = wc.bank;
  out.bank.forms[group].erase(out.bank.forms[group].begin());
  out.complete = wc.complete;
  for (const auto& [e, pts] : wc.entries) {
    if (e[group] == 0) continue;
    MultiIndex e2 = e;
    --e2[group];
    out.entries[e2] = pts;
  }
  for (const auto& e : wc.solved) {
    if (e[group] == 0) continue;
    MultiIndex e2 = e;
    --e2[group];
    out.solved.insert(e2);
  }
  return out;
}

WitnessSet move_slice(const WitnessSet& ws, const FormGroups& new_forms, RandomSource& rs, const Settings& settings,
                      MoveResult* report) {
  if (new_forms.size() != ws.slices.size()) throw WitnessError("move_slice: group count mismatch");
  for (std::size_t g = 0; g < new_forms.size(); ++g)
    if (new_forms[g].size() != ws.slices[g].size()) throw WitnessError("move_slice: per-group form count mismatch");
  MoveResult mr = track_rows_retry(ws.tracking, {}, ws.slice_polys(), polys_of(new_forms), ws.points, ws.system, rs,
                                   settings, static_cast<int>(ws.points.size()));
  WitnessSet out = ws;
  out.slices = new_forms;
  out.points = mr.points;
  if (report) *report = std::move(mr);
  return out;
}

RefineResult refine(const WitnessSet& ws, int group, const std::vector<int>& first_vars,
                    const std::pair<int, int>& target, RandomSource& rs, const Settings& settings) {
  const auto& grouping = ws.grouping();
  if (group < 0 || group >= grouping.num_groups()) throw WitnessError("refine: group index out of range");
  if (target.first < 0 || target.second < 0 || target.first + target.second != ws.e[group])
    throw WitnessError("refine: target split must add up to the group's slice count");
  VariableGrouping refined = grouping.split(group, first_vars);
  const auto& a_vars = refined.group(group);
  const auto& b_vars = refined.group(group + 1);
  int n = grouping.num_vars();
  if (target.first > static_cast<int>(a_vars.size()) || target.second > static_cast<int>(b_vars.size()))
    throw WitnessError("refine: target exceeds the refined group sizes");
  std::vector<AffineForm> a_forms, b_forms;
  for (int i = 0; i < target.first; ++i) a_forms.push_back(AffineForm::random(rs, n, a_vars));
  for (int i = 0; i < target.second; ++i) b_forms.push_back(AffineForm::random(rs, n, b_vars));
  std::vector<AffineForm> new_forms = a_forms;
  new_forms.insert(new_forms.end(), b_forms.begin(), b_forms.end());

  std::vector<Polynomial> fixed;
  for (int g = 0; g < grouping.num_groups(); ++g)
    if (g != group)
      for (const auto& f : ws.slices[g]) fixed.push_back(f.poly());
  MoveResult mr = track_rows_retry(ws.tracking, fixed, polys_of(ws.slices[group]), polys_of(new_forms), ws.points,
                                   ws.system, rs, settings);
  RefineResult res;
  res.converged = mr.converged;
  res.diverged = mr.diverged;
  res.failed = mr.failed;
  WitnessSet& out = res.ws;
  out.system = ws.system.with_grouping(refined);
  out.tracking = ws.tracking.with_grouping(refined);
  for (int g = 0; g < grouping.num_groups(); ++g) {
    if (g == group) {
      out.e.push_back(target.first);
      out.e.push_back(target.second);
      out.slices.push_back(a_forms);
      out.slices.push_back(b_forms);
    } else {
      out.e.push_back(ws.e[g]);
      out.slices.push_back(ws.slices[g]);
    }
  }
  out.points = mr.points;
  return res;
}

namespace {

struct MergeLayout {
  VariableGrouping merged;
  int pos = 0;                  // merged group's position in the new grouping
  std::vector<int> old_of_new;  // old group index of each unmerged new position (-1 for the merged one)
};

MergeLayout merge_layout(const VariableGrouping& g, std::vector<int> merge) {
  std::sort(merge.begin(), merge.end());
  merge.erase(std::unique(merge.begin(), merge.end()), merge.end());
  MergeLayout m;
  m.merged = g.merge(merge);
  for (int old = 0; old < g.num_groups(); ++old) {
    if (old == merge.front()) {
      m.pos = static_cast<int>(m.old_of_new.size());
      m.old_of_new.push_back(-1);
    } else if (!std::binary_search(merge.begin(), merge.end(), old)) {
      m.old_of_new.push_back(old);
    }
  }
  return m;
}

}  // namespace

CoarsenResult coarsen(const WitnessCollection& wc, const std::vector<int>& merge_in, const MultiIndex& target,
                      RandomSource& rs, const Settings& settings, const std::vector<AffineForm>* merged_forms) {
  const auto& grouping = wc.grouping();
  std::vector<int> merge = merge_in;
  std::sort(merge.begin(), merge.end());
  merge.erase(std::unique(merge.begin(), merge.end()), merge.end());
  MergeLayout lay = merge_layout(grouping, merge);
  int n = grouping.num_vars();
  if (static_cast<int>(target.size()) != lay.merged.num_groups()) throw WitnessError("coarsen: target key length");
  if (total(target) != wc.dimension()) throw WitnessError("coarsen: |target| differs from the dimension");
  int e = target[lay.pos];
  if (e > lay.merged.group_size(lay.pos)) throw WitnessError("coarsen: target exceeds merged group size");

  // Auxiliary forms l^{g}_i in each merged group.
  std::vector<std::vector<AffineForm>> aux(merge.size());
  for (std::size_t m = 0; m < merge.size(); ++m)
    for (int i = 0; i < e; ++i) aux[m].push_back(AffineForm::random(rs, n, grouping.group(merge[m])));
  std::vector<AffineForm> lnew;
  if (merged_forms) {
    if (static_cast<int>(merged_forms->size()) != e) throw WitnessError("coarsen: wrong number of merged forms");
    lnew = *merged_forms;
  } else {
    for (int i = 0; i < e; ++i) lnew.push_back(AffineForm::random(rs, n, lay.merged.group(lay.pos)));
  }

  MultiIndex base(grouping.num_groups(), 0);
  for (int p = 0; p < lay.merged.num_groups(); ++p)
    if (lay.old_of_new[p] >= 0) base[lay.old_of_new[p]] = target[p];

  CoarsenResult res;
  std::vector<CVector> starts;
  std::vector<int> assign(e, 0);
  std::int64_t combos = 1;
  for (int i = 0; i < e; ++i) combos *= static_cast<std::int64_t>(merge.size());
  for (std::int64_t c = 0; c < combos; ++c) {
    std::int64_t code = c;
    for (int i = 0; i < e; ++i) {
      assign[i] = static_cast<int>(code % static_cast<std::int64_t>(merge.size()));
      code /= static_cast<std::int64_t>(merge.size());
    }
    MultiIndex source = base;
    bool valid = true;
    for (std::size_t m = 0; m < merge.size(); ++m) {
      source[merge[m]] = static_cast<int>(std::count(assign.begin(), assign.end(), static_cast<int>(m)));
      if (source[merge[m]] > grouping.group_size(merge[m])) valid = false;
    }
    if (!valid) continue;
    if (!wc.solved.count(source) && !wc.entries.count(source))
      throw WitnessError("coarsen: missing witness entry " + key_string(source));
    auto it = wc.entries.find(source);
    if (it == wc.entries.end() || it->second.empty()) continue;
    res.delta += static_cast<std::int64_t>(it->second.size());
    WitnessSet src = wc.witness_set(source);
    FormGroups to = src.slices;
    for (std::size_t m = 0; m < merge.size(); ++m) {
      to[merge[m]].clear();
      for (int i = 0; i < e; ++i)
        if (assign[i] == static_cast<int>(m)) to[merge[m]].push_back(aux[m][i]);
    }
    MoveResult mr;
    WitnessSet moved = move_slice(src, to, rs, settings, &mr);
    res.start_losses += static_cast<int>(src.points.size()) - static_cast<int>(moved.points.size());
    starts.insert(starts.end(), moved.points.begin(), moved.points.end());
  }

  std::vector<Polynomial> fixed;
  FormGroups out_slices(lay.merged.num_groups());
  for (int p = 0; p < lay.merged.num_groups(); ++p) {
    if (p == lay.pos) {
      out_slices[p] = lnew;
    } else {
      int old = lay.old_of_new[p];
      out_slices[p] = wc.bank.selection(base)[old];
      for (const auto& f : out_slices[p]) fixed.push_back(f.poly());
    }
  }
  std::vector<Polynomial> products;
  for (int i = 0; i < e; ++i) {
    Polynomial prod = Polynomial::constant(n, 1.0);
    for (std::size_t m = 0; m < merge.size(); ++m) prod = prod * aux[m][i].poly();
    products.push_back(prod);
  }
  MoveResult mr =
      track_rows_retry(wc.tracking, fixed, products, polys_of(lnew), starts, wc.system, rs, settings);
  res.converged = mr.converged;
  res.diverged = mr.diverged;
  res.failed = mr.failed;
  res.ws.system = wc.system.with_grouping(lay.merged);
  res.ws.tracking = wc.tracking.with_grouping(lay.merged);
  res.ws.e = target;
  res.ws.slices = out_slices;
  res.ws.points = mr.points;
  return res;
}

CoarsenCollectionResult coarsen_collection(const WitnessCollection& wc, const std::vector<int>& merge,
                                           RandomSource& rs, const Settings& settings) {
  const auto& grouping = wc.grouping();
  MergeLayout lay = merge_layout(grouping, merge);
  CoarsenCollectionResult out;
  WitnessCollection& nc = out.wc;
  nc.system = wc.system.with_grouping(lay.merged);
  nc.tracking = wc.tracking.with_grouping(lay.merged);
  nc.complete = wc.complete;
  for (int p = 0; p < lay.merged.num_groups(); ++p) {
    if (p == lay.pos) {
      std::vector<AffineForm> forms;
      for (int j = 0; j < lay.merged.group_size(p); ++j)
        forms.push_back(AffineForm::random(rs, grouping.num_vars(), lay.merged.group(p)));
      nc.bank.forms.push_back(forms);
    } else {
      nc.bank.forms.push_back(wc.bank.forms[lay.old_of_new[p]]);
    }
  }
  // Effective bound per new group: the old bank may have been shortened by slicing.
  MultiIndex bounds;
  for (int p = 0; p < lay.merged.num_groups(); ++p) {
    if (p == lay.pos) {
      int s = 0;
      for (int g : merge) s += static_cast<int>(wc.bank.forms[g].size());
      bounds.push_back(std::min(s, lay.merged.group_size(p)));
      nc.bank.forms[p].resize(bounds.back());
    } else {
      bounds.push_back(static_cast<int>(wc.bank.forms[lay.old_of_new[p]].size()));
    }
  }
  std::uint64_t tag = 7;
  for (const auto& key : multi_indices(bounds, wc.dimension())) {
    std::vector<AffineForm> lnew(nc.bank.forms[lay.pos].begin(), nc.bank.forms[lay.pos].begin() + key[lay.pos]);
    RandomSource sub = rs.split(tag++);
    CoarsenResult r = coarsen(wc, merge, key, sub, settings, &lnew);
    nc.solved.insert(key);
    if (r.delta == 0) continue;
    if (!r.ws.points.empty()) nc.entries[key] = r.ws.points;
    out.runs[key] = std::move(r);
  }
  return out;
}

std::int64_t multinomial(const MultiIndex& e) {
  std::int64_t r = 1;
  int acc = 0;
  for (int v : e) {
    for (int j = 1; j <= v; ++j) {
      ++acc;
      // r * acc / j stays integral at every step
      std::int64_t t;
      if (__builtin_mul_overflow(r, static_cast<std::int64_t>(acc), &t)) throw AlgebraError("multinomial overflow");
      r = t / j;
    }
  }
  return r;
}

std::int64_t segre_degree(const MultidegreeMap& md) {
  if (md.empty()) return 0;
  int d = total(md.begin()->first);
  std::int64_t s = 0;
  for (const auto& [e, v] : md) {
    if (total(e) != d) throw WitnessError("segre_degree: mixed |e| in the multidegree map");
    s += multinomial(e) * v;
  }
  return s;
}

MultidegreeMap slice_degrees(const MultidegreeMap& md, int group) {
  MultidegreeMap out;
  for (const auto& [e, v] : md) {
    if (group < 0 || group >= static_cast<int>(e.size())) throw WitnessError("slice_degrees: group out of range");
    if (e[group] == 0) continue;
    MultiIndex lower = e;
    --lower[group];
    out[lower] = v;
  }
  return out;
}

bool membership(const WitnessCollection& wc, const CVector& point, RandomSource& rs, const Settings& settings) {
  const auto& grouping = wc.grouping();
  if (point.size() != grouping.num_vars()) throw WitnessError("membership: point arity mismatch");
  bool indeterminate = false;
  for (const auto& [e, pts] : wc.entries) {
    if (pts.empty()) continue;
    WitnessSet ws = wc.witness_set(e);
    FormGroups through(grouping.num_groups());
    for (int g = 0; g < grouping.num_groups(); ++g)
      for (std::size_t j = 0; j < ws.slices[g].size(); ++j)
        through[g].push_back(AffineForm::random_through(rs, grouping.num_vars(), grouping.group(g), point));
    MoveResult mr;
    WitnessSet moved = move_slice(ws, through, rs, settings, &mr);
    for (const auto& p : moved.points)
      if (same_point(p, point, settings.match_tol)) return true;
    if (moved.points.size() < ws.points.size()) indeterminate = true;
  }
  if (indeterminate) throw WitnessError("membership indeterminate: path failures while moving slices");
  return false;
}

WitnessArchive to_archive(const WitnessCollection& wc, const std::string& source, std::uint64_t seed) {
  WitnessArchive a;
  a.seed = seed;
  const auto& g = wc.grouping();
  for (int i = 0; i < g.num_groups(); ++i) {
    ArchiveGroup ag{g.group_names()[i], {}};
    for (int v : g.group(i)) ag.variables.push_back(g.names()[v]);
    a.groups.push_back(ag);
  }
  if (source.empty()) {
    SystemDocument doc{g, wc.system, {}, {}};
    a.system = print_system(doc);
  } else {
    a.system = source;
  }
  for (int i = 0; i < g.num_groups(); ++i) {
    auto& forms = a.slices[g.group_names()[i]];
    for (const auto& f : wc.bank.forms[i]) {
      CVector v(f.coeffs.size() + 1);
      v.head(f.coeffs.size()) = f.coeffs;
      v(f.coeffs.size()) = f.constant;
      forms.push_back(v);
    }
  }
  a.witness = wc.entries;
  return a;
}

WitnessCollection from_archive(const WitnessArchive& a, RandomSource& rs) {
  SystemDocument doc = parse_system(a.system);
  const auto& g = doc.grouping;
  if (g.num_groups() != static_cast<int>(a.groups.size()) || g.num_vars() != a.num_vars())
    throw ArchiveError("archive groups do not match the system text");
  WitnessCollection wc;
  wc.system = doc.system;
  int n = g.num_vars();
  for (int i = 0; i < g.num_groups(); ++i) {
    if (static_cast<int>(a.groups[i].variables.size()) != g.group_size(i))
      throw ArchiveError("archive group sizes do not match the system text");
    std::vector<AffineForm> forms;
    auto it = a.slices.find(g.group_names()[i]);
    if (it != a.slices.end()) {
      for (const auto& v : it->second) forms.push_back({v.head(n), v(n)});
    }
    wc.bank.forms.push_back(forms);
  }
  wc.entries = a.witness;
  for (const auto& [e, pts] : a.witness) wc.solved.insert(e);
  int d = a.witness.empty() ? 0 : total(a.witness.begin()->first);
  wc.tracking = tracking_system(wc.system, d, rs);
  return wc;
}

}  // namespace multiwit
