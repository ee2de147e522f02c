#include "doctest.h"
#include "multiwit/fixtures.hpp"
#include "multiwit/nid.hpp"
#include "oracles.hpp"

using namespace multiwit;

namespace {

WitnessCollection collection(const std::string& name, const std::vector<MultiIndex>& keys, std::uint64_t seed) {
  RandomSource rs(seed);
  return compute_witness_collection(load_fixture(name).system, keys, rs);
}

int route_degree(const WitnessCollection& wc, const std::string& route, std::uint64_t seed, int* parts = nullptr) {
  RandomSource rs(seed);
  WitnessSet ws = reduce_to_curve(wc, parse_route(route), rs);
  auto cd = nid_curve_affine(ws, rs);
  if (parts) *parts = static_cast<int>(cd.parts.size());
  int deg = 0;
  for (const auto& p : cd.parts) {
    CHECK(p.certified);
    deg += p.degree;
  }
  return deg;
}

// Point of the product fixture: y1 = 0, q1 = q2 = q3 = 0 solved for y22, y33, y32.
CVector product_point(RandomSource& rs) {
  Complex y21 = rs.gaussian_complex(), y23 = rs.gaussian_complex(), y31 = rs.gaussian_complex();
  Complex y22 = -46.0 * y23 / 19.0;
  Complex y33 = -(243.0 * y23 * y31 - 306.0 * y21 + 1020.0 * y23 - 342.0 * y31 + 68.0) / (1194.0 - 243.0 * y21);
  Complex y32 = -(46.0 * y33 + 34.0) / 19.0;
  CVector p(9);
  p << 0.0, 0.0, 0.0, y21, y22, y23, y31, y32, y33;
  return p;
}

}  // namespace

TEST_CASE("route parsing") {
  auto steps = parse_route("merge:2,3,4;slice:2;merge:1,2");
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].kind == ReductionStep::Kind::Merge);
  CHECK(steps[0].groups == std::vector<int>{1, 2, 3});
  CHECK(steps[1].kind == ReductionStep::Kind::Slice);
  CHECK(steps[1].groups == std::vector<int>{1});
  CHECK(steps[2].groups == std::vector<int>{0, 1});
  CHECK_THROWS(parse_route("fold:1"));
  CHECK_THROWS(parse_route("merge:0,1"));
}

TEST_CASE("curves cut from V(f,h) along different routes") {
  auto wc = collection("octahedron-h", multi_indices({1, 1, 1, 1}, 2), 1);
  int parts = 0;
  CHECK(route_degree(wc, "merge:1,2,3,4;slice:1", 1, &parts) == 15);
  CHECK(parts == 1);
  CHECK(route_degree(wc, "merge:3,4;slice:3;merge:1,2,3", 2, &parts) == 12);
  CHECK(parts == 1);
  CHECK(route_degree(wc, "merge:2,3,4;slice:2;merge:1,2", 3) == 15);
}

TEST_CASE("route that does not end on a curve is rejected") {
  auto wc = collection("octahedron-h", multi_indices({1, 1, 1, 1}, 2), 4);
  RandomSource rs(4);
  CHECK_THROWS_AS(reduce_to_curve(wc, parse_route("merge:1,2"), rs), NidError);
}

TEST_CASE("sliced pair of lines has two components of degree one") {
  auto wc = collection("two-lines", {{1, 0}, {0, 1}}, 5);
  RandomSource rs(5);
  auto cd = nid_curve_affine(reduce_to_curve(wc, parse_route("merge:1,2"), rs), rs);
  REQUIRE(cd.parts.size() == 2);
  CHECK(cd.parts[0].degree == 1);
  CHECK(cd.parts[1].degree == 1);
  CHECK(cd.complete);
}

TEST_CASE("slicing choices on the polytopes") {
  DimensionPolytope hex = {{0, 3, 2}, {1, 3, 1}, {2, 3, 0}, {0, 2, 3}, {1, 2, 2}, {2, 2, 1},
                           {3, 2, 0}, {1, 1, 3}, {2, 1, 2}, {3, 1, 1}, {2, 0, 3}, {3, 0, 2}};
  DimensionPolytope sliced;
  auto [m, e] = choose_slicing(hex, &sliced);
  int tm = 0, te = 0;
  for (int x : m) tm += x;
  for (int x : e) te += x;
  CHECK(tm + te == 5);
  for (int x : e) CHECK((x == 0 || x == 1));
  CHECK(sliced.count(e) == 1);
  auto order = order_groups(sliced, e);
  CHECK(static_cast<int>(order.size()) == te);
  for (std::size_t j = 1; j <= order.size(); ++j) {
    GroupSet prefix(order.begin(), order.begin() + static_cast<long>(j));
    std::sort(prefix.begin(), prefix.end());
    CHECK(projected_dim(sliced, prefix) == static_cast<int>(j));
  }
  DimensionPolytope octa = {{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}};
  auto [m2, e2] = choose_slicing(octa);
  CHECK(m2 == MultiIndex{0, 0, 0, 0});
  CHECK(e2 == MultiIndex{0, 0, 1, 1});
}

TEST_CASE("hyperboloid exceptional class splits into two rulings") {
  auto doc = load_fixture("hyperboloid");
  auto wc = collection("hyperboloid", {{1, 1, 1, 1}}, 6);
  auto pts = wc.entries.at({1, 1, 1, 1});
  REQUIRE(pts.size() == 16);
  std::vector<CVector> exceptional;
  for (const auto& x : pts)
    if (local_multidimension(doc.system, x).dim({0}) == 1) exceptional.push_back(x);
  REQUIRE(exceptional.size() == 4);
  RandomSource rs(6);
  auto d = nid_multi(doc.system, exceptional, rs);
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0].members.size() == 2);
  CHECK(d.components[1].members.size() == 2);
  CHECK(d.complete);
  const auto& a = d.components[0];
  const auto& b = d.components[1];
  CHECK(!component_member(a, doc.system, b.representative, rs));
  CHECK(!component_member(b, doc.system, a.representative, rs));

  auto all = nid_multi(doc.system, pts, rs);
  std::multiset<std::size_t> sizes;
  for (const auto& c : all.components) sizes.insert(c.members.size());
  CHECK(sizes == std::multiset<std::size_t>{2, 2, 4, 4, 4});
  for (int x : all.assignment) CHECK(x >= 0);
}

TEST_CASE("four-minor Richardson system has four components") {
  auto doc = load_fixture("richardson-four");
  auto wc = collection("richardson-four", multi_indices({3, 3, 3}, 5), 7);
  std::vector<CVector> pts;
  std::vector<MultiIndex> keys;
  for (const auto& [e, p] : wc.entries)
    for (const auto& x : p) pts.push_back(x), keys.push_back(e);
  RandomSource rs(7);
  auto d = nid_multi(doc.system, pts, rs, {}, &keys);
  REQUIRE(d.components.size() == 4);
  DimensionPolytope hex = {{0, 3, 2}, {1, 3, 1}, {2, 3, 0}, {0, 2, 3}, {1, 2, 2}, {2, 2, 1},
                           {3, 2, 0}, {1, 1, 3}, {2, 1, 2}, {3, 1, 1}, {2, 0, 3}, {3, 0, 2}};
  DimensionPolytope tri = {{1, 3, 1}, {1, 2, 2}, {2, 2, 1}, {1, 1, 3}, {2, 1, 2}, {3, 1, 1}};
  int hexes = 0, tris = 0;
  bool found_y = false, found_small = false;
  MultidegreeMap y = {{{0, 3, 2}, 1}, {{1, 3, 1}, 2}, {{2, 3, 0}, 1}, {{0, 2, 3}, 1}, {{1, 2, 2}, 3}, {{2, 2, 1}, 3},
                      {{3, 2, 0}, 1}, {{1, 1, 3}, 2}, {{2, 1, 2}, 3}, {{3, 1, 1}, 2}, {{2, 0, 3}, 1}, {{3, 0, 2}, 1}};
  MultidegreeMap small = {{{1, 3, 1}, 1}, {{1, 2, 2}, 2}, {{2, 2, 1}, 2}, {{1, 1, 3}, 1}, {{2, 1, 2}, 2}, {{3, 1, 1}, 1}};
  for (const auto& c : d.components) {
    CHECK(c.certified);
    CHECK(c.profile.total_dim == 5);
    if (c.polytope == hex) ++hexes;
    if (c.polytope == tri) ++tris;
    found_y = found_y || c.degrees == y;
    found_small = found_small || c.degrees == small;
  }
  CHECK(hexes == 3);
  CHECK(tris == 1);
  CHECK(found_y);
  CHECK(found_small);
  // Component multidegrees add up to the multidegree of the whole system.
  MultidegreeMap sum;
  for (const auto& c : d.components)
    for (const auto& [e, v] : c.degrees) sum[e] += v;
  CHECK(sum == wc.degrees());
}

TEST_CASE("membership in a product of a point and a variety") {
  auto doc = load_fixture("product");
  auto wc = collection("product", multi_indices({3, 3, 3}, 3), 8);
  CHECK(wc.degrees() == MultidegreeMap{{{0, 1, 2}, 1}, {{0, 2, 1}, 1}});
  RandomSource rs(8);
  std::vector<CVector> all;
  for (const auto& [e, p] : wc.entries) all.insert(all.end(), p.begin(), p.end());
  auto profile = local_multidimension(doc.system, all[0]);
  auto blocks = product_factorization(dimension_polytope(profile, {3, 3, 3}));
  REQUIRE(blocks == std::vector<GroupSet>{{0}, {1, 2}});

  auto stored = membership_product(wc, all[0], blocks, rs);
  CHECK(stored.factors == std::vector<bool>{true, true});
  CHECK(stored.combined);

  CVector on = product_point(rs);
  CHECK(oracle::same(on, on));
  CVector bad_y = on;
  bad_y(0) = 0.7;
  auto r1 = membership_product(wc, bad_y, blocks, rs);
  CHECK(!r1.factors[0]);
  CHECK(!r1.combined);
  CVector bad_z = on;
  bad_z(4) += 0.3;
  auto r2 = membership_product(wc, bad_z, blocks, rs);
  CHECK(r2.factors == std::vector<bool>{true, false});
  CHECK(!r2.combined);
}

TEST_CASE("property: product membership agrees with direct membership") {
  auto wc = collection("product", multi_indices({3, 3, 3}, 3), 9);
  RandomSource rs(9);
  std::vector<GroupSet> blocks = {{0}, {1, 2}};
  for (int i = 0; i < 50; ++i) {
    CVector p = product_point(rs);
    if (i % 2) p(3 + static_cast<int>(rs.next_u64() % 6)) += rs.gaussian_complex();
    if (i % 5 == 4) p(static_cast<int>(rs.next_u64() % 3)) = rs.gaussian_complex();
    bool direct = membership(wc, p, rs);
    auto prod = membership_product(wc, p, blocks, rs);
    CHECK(prod.combined == direct);
    CHECK(direct == (i % 2 == 0 && i % 5 != 4));
  }
}
