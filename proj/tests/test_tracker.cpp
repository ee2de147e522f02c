#include <random>

#include "doctest.h"
#include "multiwit/fixtures.hpp"
#include "multiwit/startsys.hpp"
#include "multiwit/tracker.hpp"
#include "multiwit/witness.hpp"
#include "oracles.hpp"

using namespace multiwit;

namespace {

PolySystem univariate(const std::vector<Complex>& c) {
  Polynomial p(1);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0.0) p.add_term({static_cast<int>(k)}, c[k]);
  return PolySystem({p}, VariableGrouping({1}));
}

CVector scalar(Complex x) {
  CVector v(1);
  v(0) = x;
  return v;
}

}  // namespace

TEST_CASE("x^2-1 to x^2-4 from x=1 ends at 2") {
  Homotopy h = Homotopy::convex(univariate({-1.0, 0.0, 1.0}), univariate({-4.0, 0.0, 1.0}), 1.0);
  PathResult r = track_path(h, scalar(1.0), {});
  REQUIRE(r.status == PathStatus::Converged);
  CHECK(std::abs(r.endpoint(0) - 2.0) < 1e-10);
  CHECK(r.steps_taken > 0);
}

TEST_CASE("target with no finite root diverges") {
  Homotopy h = Homotopy::convex(univariate({-1.0, 1.0}), univariate({-1.0}), Complex(0.6, 0.8));
  PathResult r = track_path(h, scalar(1.0), {});
  CHECK(r.status == PathStatus::Diverged);
}

TEST_CASE("bad start point fails with a diagnostic") {
  Homotopy h = Homotopy::convex(univariate({-1.0, 0.0, 1.0}), univariate({-4.0, 0.0, 1.0}), 1.0);
  PathResult r = track_path(h, scalar(0.0), {});
  CHECK(r.status == PathStatus::Failed);
  CHECK(!r.diagnostic.empty());
}

TEST_CASE("homotopy endpoints match the assembled systems") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  PolySystem s = univariate({-1.0, 0.0, 0.0, 1.0}), t = univariate({Complex(0.3, 1.0), 2.0, 0.0, -1.5});
  Complex gamma(0.28, 0.96);
  Homotopy h = Homotopy::convex(s, t, gamma);
  for (int i = 0; i < 5; ++i) {
    CVector x = scalar(Complex(nd(gen), nd(gen)));
    CVector h0, h1;
    h.evaluate(x, 0.0, h0);
    h.evaluate(x, 1.0, h1);
    CHECK(std::abs(h0(0) - evaluate(t, x)(0)) < 1e-13 * (1 + std::abs(h0(0))));
    CHECK(std::abs(h1(0) - gamma * evaluate(s, x)(0)) < 1e-13 * (1 + std::abs(h1(0))));
  }
}

TEST_CASE("newton_refine examples") {
  PolySystem q = univariate({-4.0, 0.0, 1.0});
  CVector r = newton_refine(q, scalar(2.0001), 1e-12);
  CHECK(std::abs(r(0) - 2.0) < 1e-12);
  CVector exact = newton_refine(q, scalar(2.0), 1e-12);
  CHECK(exact(0) == Complex(2.0));
  CHECK_THROWS_AS(newton_refine(univariate({0.0, 0.0, 1.0}), scalar(0.1), 1e-12), TrackError);
}

TEST_CASE("empty batch gives empty result") {
  Homotopy h = Homotopy::convex(univariate({-1.0, 0.0, 1.0}), univariate({-4.0, 0.0, 1.0}), 1.0);
  CHECK(track_many(h, {}, {}).empty());
}

TEST_CASE("one worker and several workers agree") {
  RandomSource rs(4);
  PolySystem target = load_fixture("octahedron-h").system;
  PolySystem sq = square_up(target, 2, rs);
  std::vector<Polynomial> slices = {AffineForm::random(rs, 4, {0, 1, 2, 3}).poly(),
                                    AffineForm::random(rs, 4, {0, 1, 2, 3}).poly()};
  PolySystem full = sq.appended(slices);
  StartPackage sp = start_package(full, StartKind::TotalDegree, rs);
  Homotopy h = Homotopy::convex(sp.start, full, rs.unit_complex());
  TrackOptions one, many;
  many.workers = 4;
  auto a = track_many(h, sp.solutions, one);
  auto b = track_many(h, sp.solutions, many);
  REQUIRE(a.size() == sp.solutions.size());
  REQUIRE(b.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].status == b[i].status);
    CHECK(a[i].steps_taken == b[i].steps_taken);
    if (a[i].status == PathStatus::Converged) CHECK((a[i].endpoint - b[i].endpoint).norm() == 0.0);
  }
}

TEST_CASE("cube roots of 8 from the total-degree start") {
  RandomSource rs(8);
  PolySystem target = univariate({-8.0, 0.0, 0.0, 1.0});
  StartPackage sp = start_package(target, StartKind::TotalDegree, rs);
  Homotopy h = Homotopy::convex(sp.start, target, rs.unit_complex());
  auto res = track_many(h, sp.solutions, {});
  std::vector<CVector> got;
  for (const auto& r : res) {
    REQUIRE(r.status == PathStatus::Converged);
    got.push_back(r.endpoint);
  }
  std::vector<CVector> want;
  for (Complex z : oracle::roots({-8.0, 0.0, 0.0, 1.0})) want.push_back(scalar(z));
  CHECK(oracle::same_sets(got, want));
}

TEST_CASE("cubic refinement tracks 2 converged and 1 diverged") {
  RandomSource rs(1);
  auto doc = load_fixture("cubic");
  auto wc = compute_witness_collection(doc.system.with_grouping(doc.grouping.ungrouped()), std::vector<MultiIndex>{{1}}, rs);
  WitnessSet ws = wc.witness_set({1});
  REQUIRE(ws.points.size() == 3);
  RefineResult r = refine(ws, 0, {0}, {1, 0}, rs);
  CHECK(r.converged == 2);
  CHECK(r.diverged == 1);
  CHECK(r.ws.points.size() == 2);
}

TEST_CASE("cubic coarsening tracks 5 starts, 3 converge and 2 diverge") {
  RandomSource rs(1);
  auto doc = load_fixture("cubic");
  auto wc = compute_witness_collection(doc.system, std::vector<MultiIndex>{{1, 0}, {0, 1}}, rs);
  CoarsenResult r = coarsen(wc, {0, 1}, {1}, rs);
  CHECK(r.delta == 5);
  CHECK(r.converged == 3);
  CHECK(r.diverged == 2);
  CHECK(r.ws.points.size() == 3);
}

TEST_CASE("property: converged endpoints re-verify and paths are conserved") {
  std::mt19937_64 gen(19);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + trial % 4;
    std::vector<Complex> c(d + 1);
    for (auto& x : c) x = Complex(nd(gen), nd(gen));
    RandomSource rs(100 + trial);
    PolySystem target = univariate(c);
    StartPackage sp = start_package(target, StartKind::TotalDegree, rs);
    Homotopy h = Homotopy::convex(sp.start, target, rs.unit_complex());
    TrackOptions opts;
    auto res = track_many(h, sp.solutions, opts);
    CHECK(res.size() == sp.solutions.size());
    std::vector<CVector> got;
    for (const auto& r : res) {
      if (r.status != PathStatus::Converged) continue;
      CHECK(evaluate(target, r.endpoint).norm() < opts.end_tol * std::max(1.0, std::pow(r.endpoint.norm(), d)));
      CHECK(same_point(newton_refine(target, r.endpoint, 1e-12), r.endpoint, 1e-9));
      got.push_back(r.endpoint);
    }
    std::vector<CVector> want;
    for (Complex z : oracle::roots(c)) want.push_back(scalar(z));
    CHECK(oracle::same_sets(got, want));
  }
}
