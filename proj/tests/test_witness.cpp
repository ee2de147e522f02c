#include <random>

#include "doctest.h"
#include "multiwit/fixtures.hpp"
#include "multiwit/witness.hpp"
#include "oracles.hpp"

using namespace multiwit;

namespace {

std::vector<MultiIndex> keys(const MultiIndex& n, int d) { return multi_indices(n, d); }

WitnessCollection octa(const std::string& name, std::uint64_t seed) {
  RandomSource rs(seed);
  return compute_witness_collection(load_fixture(name).system, keys({1, 1, 1, 1}, 2), rs);
}

std::map<oracle::Key, std::int64_t> as_oracle(const MultidegreeMap& m) {
  std::map<oracle::Key, std::int64_t> out;
  for (const auto& [e, v] : m) out[oracle::Key(e.begin(), e.end())] = v;
  return out;
}

bool on_system(const WitnessSet& ws, double tol = 1e-8) { return ws.max_residual() < tol; }

}  // namespace

TEST_CASE("multidegrees of the two octahedron surfaces") {
  auto h = octa("octahedron-h", 1);
  CHECK(h.degrees() == MultidegreeMap{{{1, 1, 0, 0}, 7}, {{1, 0, 1, 0}, 6}, {{1, 0, 0, 1}, 5},
                                      {{0, 1, 1, 0}, 5}, {{0, 1, 0, 1}, 4}, {{0, 0, 1, 1}, 3}});
  auto g = octa("octahedron-g", 1);
  CHECK(g.degrees() == MultidegreeMap{{{1, 1, 0, 0}, 4}, {{1, 0, 1, 0}, 4}, {{1, 0, 0, 1}, 3},
                                      {{0, 1, 1, 0}, 4}, {{0, 1, 0, 1}, 3}, {{0, 0, 1, 1}, 2}});
  for (const auto& [e, pts] : h.entries) CHECK(on_system(h.witness_set(e)));
}

TEST_CASE("point times line has a single entry") {
  RandomSource rs(2);
  Polynomial x = Polynomial::variable(2, 0);
  auto wc = compute_witness_collection(PolySystem({x}, VariableGrouping({1, 1})), keys({1, 1}, 1), rs);
  CHECK(wc.degrees() == MultidegreeMap{{{0, 1}, 1}});
}

TEST_CASE("slicing is bookkeeping on the keys") {
  auto h = octa("octahedron-h", 3);
  auto s = slice(h, 0);
  CHECK(s.degrees() == MultidegreeMap{{{0, 1, 0, 0}, 7}, {{0, 0, 1, 0}, 6}, {{0, 0, 0, 1}, 5}});
  for (const auto& [e, pts] : s.entries) {
    MultiIndex up = e;
    ++up[0];
    const auto& orig = h.entries.at(up);
    REQUIRE(orig.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK((orig[i] - pts[i]).norm() == 0.0);
    CHECK(on_system(s.witness_set(e)));
  }
  CHECK_THROWS_AS(slice(s, 0), WitnessError);
}

TEST_CASE("slicing a class table by the lemma arithmetic") {
  auto cls = as_oracle(complete_intersection_class(class_fixture_degrees(), {3, 3, 3}));
  std::map<oracle::Key, std::int64_t> sliced;
  for (const auto& [e, v] : cls)
    if (e[2] > 0) sliced[{e[0], e[1], e[2] - 1}] = v;
  std::map<oracle::Key, std::int64_t> table = {{{0, 2, 0}, 1080}, {{0, 1, 1}, 720},  {{1, 1, 0}, 3240},
                                               {{0, 0, 2}, 160},  {{1, 0, 1}, 1440}, {{2, 0, 0}, 4320}};
  CHECK(sliced == table);
}

TEST_CASE("refining the plane cubic") {
  RandomSource rs(4);
  auto doc = load_fixture("cubic");
  auto wc = compute_witness_collection(doc.system.with_grouping(doc.grouping.ungrouped()), keys({2}, 1), rs);
  WitnessSet ws = wc.witness_set({1});
  REQUIRE(ws.points.size() == 3);
  for (const auto& p : ws.points) CHECK(std::abs(oracle::cubic(p(0), p(1))) < 1e-8);
  auto a = refine(ws, 0, {0}, {1, 0}, rs);
  CHECK(a.ws.points.size() == 2);
  auto b = refine(ws, 0, {0}, {0, 1}, rs);
  CHECK(b.ws.points.size() == 3);
  CHECK(on_system(a.ws));
  CHECK(on_system(b.ws));
  CHECK_THROWS(refine(ws, 0, {0}, {1, 1}, rs));
}

TEST_CASE("refining a line") {
  RandomSource rs(5);
  Polynomial slanted = Polynomial::variable(2, 0) + Polynomial::variable(2, 1).scaled(2.0) - Polynomial::constant(2, 1.0);
  Polynomial vertical = Polynomial::variable(2, 0) - Polynomial::constant(2, 3.0);
  VariableGrouping one({2});
  for (auto [p, want] : {std::pair{slanted, 1}, std::pair{vertical, 0}}) {
    auto wc = compute_witness_collection(PolySystem({p}, one), keys({2}, 1), rs);
    auto r = refine(wc.witness_set({1}), 0, {0}, {1, 0}, rs);
    CHECK(static_cast<int>(r.ws.points.size()) == want);
  }
}

TEST_CASE("coarsening the plane cubic") {
  RandomSource rs(6);
  auto doc = load_fixture("cubic");
  auto wc = compute_witness_collection(doc.system, keys({1, 1}, 1), rs);
  CHECK(wc.degrees() == MultidegreeMap{{{1, 0}, 2}, {{0, 1}, 3}});
  auto r = coarsen(wc, {0, 1}, {1}, rs);
  CHECK(r.delta == 5);
  CHECK(r.ws.points.size() == 3);
  CHECK(r.converged + r.diverged == r.delta);
}

TEST_CASE("coarsening the octahedron surfaces") {
  RandomSource rs(7);
  auto h = octa("octahedron-h", 7);
  auto zw = coarsen_collection(h, {2, 3}, rs);
  CHECK(zw.wc.degrees() == MultidegreeMap{{{0, 1, 1}, 6}, {{1, 1, 0}, 7}, {{0, 0, 2}, 3}, {{1, 0, 1}, 8}});
  auto g = octa("octahedron-g", 7);
  auto xy = coarsen_collection(g, {0, 1}, rs);
  auto both = coarsen_collection(xy.wc, {1, 2}, rs);
  CHECK(both.wc.degrees() == MultidegreeMap{{{0, 2}, 2}, {{1, 1}, 4}, {{2, 0}, 4}});
  for (const auto* run : {&zw, &xy, &both})
    for (const auto& [e, res] : run->runs) {
      CHECK(res.converged + res.diverged + res.failed == res.delta);
      CHECK(res.failed == 0);
      CHECK(on_system(res.ws));
    }
}

TEST_CASE("slice motion") {
  RandomSource rs(8);
  auto doc = load_fixture("cubic");
  auto wc = compute_witness_collection(doc.system, keys({1, 1}, 1), rs);
  WitnessSet ws = wc.witness_set({0, 1});
  WitnessSet same = move_slice(ws, ws.slices, rs);
  CHECK(oracle::same_sets(same.points, ws.points, 1e-10));
  FormGroups other = {{}, {AffineForm::random(rs, 2, {1})}};
  WitnessSet moved = move_slice(ws, other, rs);
  CHECK(moved.points.size() == 3);
  for (const auto& p : moved.points) CHECK(std::abs(oracle::cubic(p(0), p(1))) < 1e-8);
  Complex y0 = moved.points[0](1);
  CHECK(std::abs(other[1][0](moved.points[0])) < 1e-8);
  CVector target = ws.points[1];
  FormGroups through = {{}, {ws.slices[1][0].through(target)}};
  CHECK(std::abs(y0) > 0.0);
  WitnessSet hit = move_slice(ws, through, rs);
  bool found = false;
  for (const auto& p : hit.points) found = found || oracle::same(p, target);
  CHECK(found);
}

TEST_CASE("segre degree examples") {
  MultidegreeMap hex = {{{3, 1, 0, 0}, 1}, {{2, 2, 0, 0}, 2}, {{1, 3, 0, 0}, 1},
                        {{3, 0, 1, 0}, 1}, {{2, 1, 1, 0}, 3}, {{1, 2, 1, 0}, 3}, {{0, 3, 1, 0}, 1},
                        {{2, 0, 2, 0}, 2}, {{1, 1, 2, 0}, 3}, {{0, 2, 2, 0}, 2},
                        {{1, 0, 3, 0}, 1}, {{0, 1, 3, 0}, 1}};
  CHECK(segre_degree(hex) == oracle::segre(as_oracle(hex)));
  CHECK(segre_degree({{{3}, 7}}) == 7);
  CHECK(segre_degree({{{1, 0}, 2}, {{0, 1}, 3}}) == 5);
  CHECK_THROWS(segre_degree({{{1, 0}, 2}, {{1, 1}, 3}}));
}

TEST_CASE("membership on V(f,h)") {
  RandomSource rs(9);
  auto doc = load_fixture("octahedron-h");
  auto h = compute_witness_collection(doc.system, keys({1, 1, 1, 1}, 2), rs);
  CHECK(membership(h, h.entries.at({0, 0, 1, 1})[0], rs));
  CVector random(4);
  for (int i = 0; i < 4; ++i) random(i) = rs.gaussian_complex();
  CHECK(!membership(h, random, rs));

  CVector xy(2);
  xy << rs.gaussian_complex(), rs.gaussian_complex();
  std::vector<Polynomial> sub;
  for (const auto& p : doc.system.polys()) sub.push_back(p.substitute({0, 1}, xy));
  auto zw = solve_zero_dim(PolySystem(sub, VariableGrouping({1, 1})), {}, rs);
  REQUIRE(!zw.empty());
  CVector on(4);
  on << xy(0), xy(1), zw[0](0), zw[0](1);
  CHECK(std::abs(oracle::octa_f(on)) < 1e-8 * (1 + std::pow(on.norm(), 4)));
  CHECK(std::abs(oracle::octa_h(on)) < 1e-8 * (1 + std::pow(on.norm(), 4)));
  CHECK(membership(h, on, rs));
}

TEST_CASE("archive round trip of a collection") {
  auto h = octa("octahedron-h", 10);
  auto doc_text = fixture_text("octahedron-h");
  auto ar = to_archive(h, doc_text, 10);
  auto back = load_witness(save_witness(ar));
  RandomSource rs(10);
  auto wc = from_archive(back, rs);
  CHECK(wc.degrees() == h.degrees());
  for (const auto& [e, pts] : h.entries) {
    REQUIRE(wc.entries.at(e).size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK((wc.entries.at(e)[i] - pts[i]).norm() == 0.0);
  }
  CHECK(save_witness(to_archive(wc, doc_text, 10)) == save_witness(ar));
}

TEST_CASE("property: selections are coherent") {
  RandomSource rs(11);
  SliceBank bank = SliceBank::random(VariableGrouping({2, 1, 3}), rs);
  for (const auto& e : keys({2, 1, 3}, 3))
    for (const auto& f : keys({2, 1, 3}, 4)) {
      bool le = true;
      for (int i = 0; i < 3; ++i) le = le && e[i] <= f[i];
      if (!le) continue;
      auto se = bank.selection(e), sf = bank.selection(f);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < e[i]; ++j) {
          CHECK(se[i][j].coeffs == sf[i][j].coeffs);
          CHECK(se[i][j].constant == sf[i][j].constant);
        }
    }
}

TEST_CASE("property: multinomial and segre degree match Pascal's triangle") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 40; ++trial) {
    int k = 1 + static_cast<int>(gen() % 4), d = static_cast<int>(gen() % 7);
    MultidegreeMap m;
    for (const auto& e : keys(MultiIndex(k, d), d))
      if (gen() % 2) m[e] = 1 + static_cast<std::int64_t>(gen() % 20);
    for (const auto& [e, v] : m) CHECK(multinomial(e) == oracle::multinomial(oracle::Key(e.begin(), e.end())));
    CHECK(segre_degree(m) == oracle::segre(as_oracle(m)));
  }
}

TEST_CASE("property: refinement and coarsening conserve paths on random seeds") {
  auto doc = load_fixture("cubic");
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    RandomSource rs(seed);
    auto wc = compute_witness_collection(doc.system, keys({1, 1}, 1), rs);
    auto r = coarsen(wc, {0, 1}, {1}, rs);
    CHECK(r.converged + r.diverged + r.failed == r.delta);
    CHECK(r.delta == segre_degree(wc.degrees()));
    auto ws = r.ws;
    auto a = refine(ws, 0, {0}, {1, 0}, rs);
    CHECK(a.ws.points.size() <= ws.points.size());
    CHECK(a.converged + a.diverged + a.failed == static_cast<int>(ws.points.size()));
  }
}
