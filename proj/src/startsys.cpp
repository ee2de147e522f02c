#include "multiwit/startsys.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace multiwit {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw AlgebraError("class coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw AlgebraError("class coefficient overflow");
  return r;
}

std::map<MultiIndex, std::int64_t> truncated_product(const std::vector<MultiIndex>& degrees, const MultiIndex& nvec) {
  std::size_t k = nvec.size();
  std::map<MultiIndex, std::int64_t> cur{{MultiIndex(k, 0), 1}};
  for (const auto& d : degrees) {
    if (d.size() != k) throw AlgebraError("degree vector length does not match nvec");
    std::map<MultiIndex, std::int64_t> next;
    for (const auto& [b, c] : cur) {
      for (std::size_t i = 0; i < k; ++i) {
        if (d[i] == 0 || b[i] >= nvec[i]) continue;
        MultiIndex b2 = b;
        ++b2[i];
        next[b2] = checked_add(next[b2], checked_mul(c, d[i]));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

MultidegreeMap complete_intersection_class(const std::vector<MultiIndex>& degrees, const MultiIndex& nvec) {
  if (static_cast<int>(degrees.size()) > total(nvec))
    throw AlgebraError("more forms than the ambient dimension");
  MultidegreeMap out;
  for (const auto& [b, c] : truncated_product(degrees, nvec)) {
    if (c == 0) continue;
    MultiIndex a(nvec.size());
    for (std::size_t i = 0; i < nvec.size(); ++i) a[i] = nvec[i] - b[i];
    out[a] = c;
  }
  return out;
}

std::int64_t mbezout(const std::vector<MultiIndex>& degrees, const MultiIndex& nvec) {
  if (static_cast<int>(degrees.size()) != total(nvec)) throw AlgebraError("mbezout needs a square system");
  auto prod = truncated_product(degrees, nvec);
  auto it = prod.find(nvec);
  return it == prod.end() ? 0 : it->second;
}

PolySystem square_up(const PolySystem& f, int rows, RandomSource& rs) {
  if (rows > f.size()) throw SolveError("cannot square up: fewer equations than required rows");
  if (rows == f.size()) return f;
  std::vector<Polynomial> out;
  for (int r = 0; r < rows; ++r) {
    Polynomial g(f.num_vars());
    for (int j = 0; j < f.size(); ++j) g = g + f[j].scaled(rs.gaussian_complex());
    out.push_back(g);
  }
  return PolySystem(out, f.grouping());
}

namespace {

StartPackage total_degree_start(const PolySystem& target) {
  int n = target.num_vars();
  StartPackage pkg;
  std::vector<Polynomial> polys;
  std::vector<int> degs;
  for (int j = 0; j < n; ++j) {
    int d = target[j].total_degree();
    if (d < 1) throw SolveError("total-degree start needs nonconstant polynomials");
    degs.push_back(d);
    polys.push_back(Polynomial::variable(n, j).pow(d) - Polynomial::constant(n, 1.0));
  }
  pkg.start = PolySystem(polys, target.grouping());
  std::int64_t count = 1;
  for (int d : degs) count = checked_mul(count, d);
  pkg.predicted_count = count;
  std::vector<int> idx(n, 0);
  for (std::int64_t c = 0; c < count; ++c) {
    CVector x(n);
    for (int j = 0; j < n; ++j) x(j) = std::polar(1.0, 2.0 * std::numbers::pi * idx[j] / degs[j]);
    pkg.solutions.push_back(x);
    for (int j = 0; j < n; ++j) {
      if (++idx[j] < degs[j]) break;
      idx[j] = 0;
    }
  }
  return pkg;
}

StartPackage linear_product_start(const PolySystem& target, RandomSource& rs) {
  const auto& grouping = target.grouping();
  int n = target.num_vars();
  int k = grouping.num_groups();
  std::vector<MultiIndex> degs;
  // forms[j][g] = the affine factors of equation j in group g
  std::vector<std::vector<std::vector<std::pair<CVector, Complex>>>> forms(n);
  std::vector<Polynomial> polys;
  for (int j = 0; j < n; ++j) {
    MultiIndex d = multidegree_of(target[j], grouping);
    if (total(d) == 0) throw SolveError("linear-product start needs nonconstant polynomials");
    degs.push_back(d);
    forms[j].resize(k);
    Polynomial prod = Polynomial::constant(n, 1.0);
    for (int g = 0; g < k; ++g) {
      for (int r = 0; r < d[g]; ++r) {
        CVector a = CVector::Zero(n);
        for (int v : grouping.group(g)) a(v) = rs.gaussian_complex();
        Complex c = rs.gaussian_complex();
        forms[j][g].push_back({a, c});
        prod = prod * Polynomial::affine(a, c);
      }
    }
    polys.push_back(prod);
  }
  StartPackage pkg;
  pkg.start = PolySystem(polys, grouping);
  pkg.predicted_count = mbezout(degs, grouping.sizes());

  std::vector<int> capacity = grouping.sizes();
  CMatrix a(n, n);
  CVector b(n);
  auto rec = [&](auto&& self, int j) -> void {
    if (j == n) {
      Eigen::PartialPivLU<CMatrix> lu(a);
      pkg.solutions.push_back(lu.solve(b));
      return;
    }
    for (int g = 0; g < k; ++g) {
      if (capacity[g] == 0 || degs[j][g] == 0) continue;
      --capacity[g];
      for (const auto& [coef, c] : forms[j][g]) {
        a.row(j) = coef.transpose();
        b(j) = -c;
        self(self, j + 1);
      }
      ++capacity[g];
    }
  };
  rec(rec, 0);
  return pkg;
}

}  // namespace

StartPackage start_package(const PolySystem& target, StartKind kind, RandomSource& rs) {
  if (target.size() != target.num_vars()) throw SolveError("start system requested for a non-square target");
  if (kind == StartKind::Auto) {
    std::int64_t bez = 1;
    std::vector<MultiIndex> degs;
    for (const auto& p : target.polys()) {
      bez = checked_mul(bez, std::max(1, p.total_degree()));
      degs.push_back(multidegree_of(p, target.grouping()));
    }
    std::int64_t mb = mbezout(degs, target.grouping().sizes());
    kind = (mb < bez) ? StartKind::LinearProduct : StartKind::TotalDegree;
  }
  return kind == StartKind::TotalDegree ? total_degree_start(target) : linear_product_start(target, rs);
}

double relative_residual(const Polynomial& p, const CVector& x) {
  double scale = 0.0;
  double xm = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (const auto& [e, c] : p.terms()) scale += std::abs(c) * std::pow(xm, std::accumulate(e.begin(), e.end(), 0));
  if (scale == 0.0) return 0.0;
  return std::abs(p.evaluate(x)) / scale;
}

double relative_residual(const PolySystem& f, const CVector& x) {
  double r = 0.0;
  for (const auto& p : f.polys()) r = std::max(r, relative_residual(p, x));
  return r;
}

bool insert_unique(std::vector<CVector>& pts, const CVector& x, double tol) {
  for (const auto& p : pts)
    if (same_point(p, x, tol)) return false;
  pts.push_back(x);
  return true;
}

SolveReport solve_squared_report(const PolySystem& f, const PolySystem& g, const std::vector<Polynomial>& slices,
                                 RandomSource& rs, const SolveOptions& opts) {
  int n = f.num_vars();
  if (g.size() + static_cast<int>(slices.size()) != n) throw SolveError("squared system has the wrong size");
  PolySystem target = g.appended(slices);
  StartPackage pkg = start_package(target, opts.kind, rs);
  Homotopy h = Homotopy::convex(pkg.start, target, rs.unit_complex());
  auto results = track_many(h, pkg.solutions, opts.track);
  SolveReport rep;
  rep.paths = static_cast<int>(results.size());
  for (const auto& r : results) {
    if (r.status == PathStatus::Diverged) {
      ++rep.diverged;
    } else if (r.status == PathStatus::Failed) {
      ++rep.failed;
    } else {
      ++rep.converged;
      if (relative_residual(f, r.endpoint) > opts.residual_tol) continue;
      insert_unique(rep.points, r.endpoint, opts.match_tol);
    }
  }
  if (rep.paths > 0 && rep.failed > opts.max_fail_fraction * rep.paths)
    throw SolveError("path failure rate too high: " + std::to_string(rep.failed) + " of " +
                     std::to_string(rep.paths) + " paths failed");
  return rep;
}

SolveReport solve_zero_dim_report(const PolySystem& f, const std::vector<Polynomial>& slices, RandomSource& rs,
                                  const SolveOptions& opts) {
  int rows = f.num_vars() - static_cast<int>(slices.size());
  if (rows < 0) throw SolveError("more slices than variables");
  if (f.size() < rows) throw SolveError("too few equations for a zero-dimensional slice");
  PolySystem g = square_up(f, rows, rs);
  return solve_squared_report(f, g, slices, rs, opts);
}

std::vector<CVector> solve_zero_dim(const PolySystem& f, const std::vector<Polynomial>& slices, RandomSource& rs,
                                    const TrackOptions& opts) {
  SolveOptions so;
  so.track = opts;
  return solve_zero_dim_report(f, slices, rs, so).points;
}

}  // namespace multiwit
