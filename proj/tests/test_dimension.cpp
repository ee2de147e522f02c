#include <random>

#include "doctest.h"
#include "multiwit/dimension.hpp"
#include "multiwit/fixtures.hpp"
#include "multiwit/witness.hpp"
#include "oracles.hpp"

using namespace multiwit;

namespace {

DimensionPolytope oracle_polytope(const DimensionProfile& p, const MultiIndex& n) {
  int k = static_cast<int>(n.size());
  auto dim = [&](unsigned mask) {
    GroupSet I;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) I.push_back(i);
    return p.proj_dims.at(I);
  };
  DimensionPolytope out;
  for (const auto& e : oracle::polymatroid_points(oracle::Key(n.begin(), n.end()), p.total_dim, dim))
    out.insert(MultiIndex(e.begin(), e.end()));
  return out;
}

// Distinct restrictions of the points to the coordinates in mask.
std::size_t projection_size(const DimensionPolytope& dp, unsigned mask) {
  std::set<std::vector<int>> s;
  for (const auto& e : dp) {
    std::vector<int> r;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (mask >> i & 1) r.push_back(e[i]);
    s.insert(r);
  }
  return s.size();
}

bool oracle_splits(const DimensionPolytope& dp, int k) {
  unsigned full = (1u << k) - 1;
  for (unsigned mask = 1; mask < full; ++mask)
    if (projection_size(dp, mask) * projection_size(dp, full ^ mask) == dp.size()) return true;
  return false;
}

DimensionProfile uniform_profile(int k, int total, const std::function<int(int)>& by_size) {
  DimensionProfile p;
  p.total_dim = total;
  for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
    GroupSet I;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) I.push_back(i);
    p.proj_dims[I] = by_size(static_cast<int>(I.size()));
  }
  return p;
}

std::vector<int> displayed(const DimensionProfile& p) {
  return {p.dim({0}), p.dim({1}), p.dim({0, 1}), p.dim({0, 1, 2})};
}

struct Hyperboloid {
  SystemDocument doc = load_fixture("hyperboloid");
  std::vector<CVector> points;
  Hyperboloid() {
    RandomSource rs(31);
    auto wc = compute_witness_collection(doc.system, std::vector<MultiIndex>{{1, 1, 1, 1}}, rs);
    points = wc.entries.at({1, 1, 1, 1});
  }
};

const Hyperboloid& hyperboloid() {
  static Hyperboloid h;
  return h;
}

}  // namespace

TEST_CASE("profile of the plane cubic") {
  auto doc = load_fixture("cubic");
  RandomSource rs(1);
  auto wc = compute_witness_collection(doc.system, std::vector<MultiIndex>{{1, 0}, {0, 1}}, rs);
  auto p = local_multidimension(doc.system, wc.entries.at({0, 1})[0]);
  CHECK(p.total_dim == 1);
  CHECK(p.dim({0}) == 1);
  CHECK(p.dim({1}) == 1);
  CHECK(dimension_polytope(p, {1, 1}) == DimensionPolytope{{1, 0}, {0, 1}});
}

TEST_CASE("hyperboloid profiles on the displayed projections") {
  const auto& h = hyperboloid();
  REQUIRE(h.points.size() == 16);
  std::map<std::vector<int>, int> counts;
  for (const auto& x : h.points) {
    auto p = local_multidimension(h.doc.system, x);
    CHECK(p.total_dim == 4);
    ++counts[displayed(p)];
  }
  CHECK(counts == std::map<std::vector<int>, int>{{{1, 2, 2, 3}, 4}, {{4, 2, 4, 4}, 12}});
}

TEST_CASE("hyperboloid equidimensional partition") {
  const auto& h = hyperboloid();
  auto parts = equidim_partition(h.doc.system, h.points);
  std::size_t total = 0;
  std::set<int> seen;
  std::map<std::vector<int>, std::size_t> by_displayed;
  for (const auto& part : parts) {
    total += part.indices.size();
    for (int i : part.indices) CHECK(seen.insert(i).second);
    by_displayed[displayed(part.profile)] += part.indices.size();
  }
  CHECK(total == 16);
  CHECK(by_displayed == std::map<std::vector<int>, std::size_t>{{{1, 2, 2, 3}, 4}, {{4, 2, 4, 4}, 12}});
  CHECK(parts.size() == 4);
  CHECK(equidim_partition(h.doc.system, {}).empty());
}

TEST_CASE("points on one surface form a single part") {
  auto doc = load_fixture("octahedron-h");
  RandomSource rs(2);
  auto wc = compute_witness_collection(doc.system, multi_indices({1, 1, 1, 1}, 2), rs);
  std::vector<CVector> all;
  for (const auto& [e, pts] : wc.entries) all.insert(all.end(), pts.begin(), pts.end());
  auto parts = equidim_partition(doc.system, all);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].indices.size() == all.size());
  auto dp = dimension_polytope(parts[0].profile, {1, 1, 1, 1});
  CHECK(dp == DimensionPolytope{{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}});
  CHECK(product_factorization(dp).size() == 1);
  CHECK(!oracle_splits(dp, 4));
}

TEST_CASE("hexagon of the Richardson variety") {
  auto p = uniform_profile(3, 5, [](int s) { return s == 1 ? 3 : 5; });
  DimensionPolytope hex = {{0, 3, 2}, {1, 3, 1}, {2, 3, 0}, {0, 2, 3}, {1, 2, 2}, {2, 2, 1},
                           {3, 2, 0}, {1, 1, 3}, {2, 1, 2}, {3, 1, 1}, {2, 0, 3}, {3, 0, 2}};
  CHECK(dimension_polytope(p, {3, 3, 3}) == hex);
  CHECK(oracle_polytope(p, {3, 3, 3}) == hex);

  auto doc = load_fixture("richardson");
  RandomSource rs(3);
  auto wc = compute_witness_collection(doc.system, std::vector<MultiIndex>{{1, 2, 2}}, rs);
  REQUIRE(!wc.entries.empty());
  auto q = local_multidimension(doc.system, wc.entries.begin()->second[0]);
  CHECK(q == p);
}

TEST_CASE("product factorizations") {
  CHECK(product_factorization({{0, 1, 2}, {0, 2, 1}}) == std::vector<GroupSet>{{0}, {1, 2}});
  CHECK(product_factorization({{1, 1, 1}}) == std::vector<GroupSet>{{0}, {1}, {2}});
  CHECK(oracle_splits({{0, 1, 2}, {0, 2, 1}}, 3));
}

TEST_CASE("inconsistent profile gives an error") {
  auto p = uniform_profile(2, 3, [](int) { return 1; });
  CHECK_THROWS_AS(dimension_polytope(p, {2, 2}), DimensionError);
}

TEST_CASE("property: polytope matches the independent enumeration") {
  std::mt19937_64 gen(13);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    int k = 2 + static_cast<int>(gen() % 3);
    MultiIndex n(k);
    for (auto& x : n) x = 1 + static_cast<int>(gen() % 3);
    // Profile of a product of random linear subspaces: dim_I = sum of block dims.
    std::vector<int> d(k);
    int total = 0;
    for (int i = 0; i < k; ++i) total += (d[i] = static_cast<int>(gen() % (n[i] + 1)));
    DimensionProfile p;
    p.total_dim = total;
    for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
      GroupSet I;
      int s = 0;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) I.push_back(i), s += d[i];
      p.proj_dims[I] = std::min(s + static_cast<int>(gen() % 2), total);
    }
    bool monotone = true;
    for (const auto& [I, v] : p.proj_dims)
      for (const auto& [J, w] : p.proj_dims)
        if (std::includes(J.begin(), J.end(), I.begin(), I.end()) && v > w) monotone = false;
    if (!monotone) continue;
    ++checked;
    auto want = oracle_polytope(p, n);
    if (want.empty()) {
      CHECK_THROWS_AS(dimension_polytope(p, n), DimensionError);
      continue;
    }
    auto dp = dimension_polytope(p, n);
    CHECK(dp == want);
    auto blocks = product_factorization(dp);
    CHECK((blocks.size() > 1) == oracle_splits(dp, k));
    CHECK(is_product(dp, blocks));
    std::size_t prod = 1;
    for (const auto& b : blocks) prod *= project(dp, b).size();
    CHECK(prod == dp.size());
  }
  CHECK(checked >= 20);
}

TEST_CASE("property: witness keys lie in the polytope and profiles are monotone") {
  auto doc = load_fixture("octahedron-g");
  RandomSource rs(4);
  auto wc = compute_witness_collection(doc.system, multi_indices({1, 1, 1, 1}, 2), rs);
  for (const auto& [e, pts] : wc.entries)
    for (const auto& x : pts) {
      auto p = local_multidimension(doc.system, x);
      CHECK(dimension_polytope(p, {1, 1, 1, 1}).count(e) == 1);
      for (const auto& [I, v] : p.proj_dims) {
        CHECK(v <= p.total_dim);
        for (const auto& [J, w] : p.proj_dims)
          if (std::includes(J.begin(), J.end(), I.begin(), I.end())) CHECK(v <= w);
      }
    }
}

TEST_CASE("property: profile is invariant under row recombination") {
  const auto& h = hyperboloid();
  RandomSource rs(5);
  int m = h.doc.system.size();
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Polynomial> mixed;
    for (int i = 0; i < m; ++i) {
      Polynomial p(h.doc.system.num_vars());
      for (int j = 0; j < m; ++j) p = p + h.doc.system[j].scaled(rs.gaussian_complex());
      mixed.push_back(p);
    }
    PolySystem g(mixed, h.doc.grouping);
    for (int i = 0; i < 16; i += 5)
      CHECK(local_multidimension(g, h.points[i]) == local_multidimension(h.doc.system, h.points[i]));
  }
}
