#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "galkit/corpus.hpp"
#include "support/tables.hpp"

using namespace galkit;

TEST_CASE("group classes per order match the classification") {
  std::map<int, int> expect = expected_group_counts();
  for (auto [n, count] : expect) {
    auto gs = all_groups(n);
    INFO("order " << n);
    REQUIRE((int)gs.size() == count);
    for (const auto& g : gs) {
      REQUIRE(g->kind == Kind::group);
      REQUIRE(g->n == n);
    }
    // Pairwise distinct.
    for (size_t i = 0; i < gs.size(); ++i)
      for (size_t j = i + 1; j < gs.size(); ++j) REQUIRE(!isomorphic(gs[i], gs[j]));
  }
}

TEST_CASE("recipe groups agree with from-scratch table enumeration") {
  for (int n = 1; n <= 8; ++n) {
    auto brute = tables::brute_groups(n);
    auto recipe = all_groups(n);
    INFO("order " << n);
    REQUIRE(brute.size() == recipe.size());
    for (const auto& b : brute) {
      bool matched = false;
      for (const auto& r : recipe)
        if (isomorphic(b, r)) {
          matched = true;
          break;
        }
      REQUIRE(matched);
    }
  }
}

TEST_CASE("hand-built witnesses match the recipes") {
  REQUIRE(isomorphic(tables::perm_group(3), dihedral(3)));
  REQUIRE(isomorphic(tables::quaternion_group(), dicyclic(2)));
  REQUIRE(!isomorphic(tables::quaternion_group(), dihedral(4)));
  REQUIRE(!isomorphic(dihedral(6), alternating4()));
  REQUIRE(!isomorphic(dihedral(6), dicyclic(3)));
  REQUIRE(isomorphic(abelian_group({2, 2}), product(cyclic_group(2), cyclic_group(2)).obj));
}

TEST_CASE("alternating group on 4 points has no order-6 normal subobject") {
  auto a4 = alternating4();
  std::vector<int> sizes;
  for (const auto& s : all_normal_subobjects(a4)) sizes.push_back((int)s.elems.size());
  REQUIRE(sizes == std::vector<int>{1, 4, 12});
}

TEST_CASE("loop classes per order match the classification") {
  std::map<int, int> expect = expected_loop_counts();
  for (auto [n, count] : expect) {
    auto ls = all_loops(n);
    INFO("order " << n);
    REQUIRE((int)ls.size() == count);
    std::set<std::string> keys;
    for (const auto& l : ls) {
      REQUIRE(l->kind == Kind::loop);
      keys.insert(iso_type(l));
    }
    REQUIRE(keys.size() == ls.size());
  }
  // Order 4: only the two groups, no nonassociative loop.
  for (const auto& l : all_loops(4)) REQUIRE(is_associative_t1(l));
  // Order 5: exactly one of the six is a group.
  int assoc = 0;
  for (const auto& l : all_loops(5))
    if (is_associative_t1(l)) ++assoc;
  REQUIRE(assoc == 1);
}

TEST_CASE("ring classes per order match the classification") {
  std::map<int, int> expect = expected_ring_counts();
  for (auto [n, count] : expect) {
    auto rs = all_rings(n);
    INFO("order " << n);
    REQUIRE((int)rs.size() == count);
    std::set<std::string> keys;
    for (const auto& r : rs) {
      REQUIRE(r->kind == Kind::ring);
      keys.insert(iso_type(r));
    }
    REQUIRE(keys.size() == rs.size());
  }
}

TEST_CASE("notable rings appear in the enumeration") {
  auto rs8 = all_rings(8);
  auto contains = [&](const AlgPtr& x) {
    for (const auto& r : rs8)
      if (isomorphic(r, x)) return true;
    return false;
  };
  REQUIRE(contains(tables::ut2_f2_ring()));
  REQUIRE(contains(cyclic_ring(8)));
  REQUIRE(contains(zero_ring(8)));
  REQUIRE(contains(tables::ring_product(cyclic_ring(2), cyclic_ring(4))));

  auto rs6 = all_rings(6);
  bool found_z6 = false;
  for (const auto& r : rs6)
    if (isomorphic(r, cyclic_ring(6))) found_z6 = true;
  REQUIRE(found_z6);
  // F2 x F3 is the same ring as Z/6.
  REQUIRE(isomorphic(tables::ring_product(cyclic_ring(2), cyclic_ring(3)), cyclic_ring(6)));
}

TEST_CASE("ring enumeration is closed under opposite rings") {
  // The opposite of a ring is a ring; the class list must contain it.
  for (int n = 1; n <= 8; ++n) {
    auto rs = all_rings(n);
    for (const auto& r : rs) {
      std::vector<int32_t> mul((size_t)n * n);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) mul[x * n + y] = r->mul(y, x);
      std::vector<int32_t> add = r->t1;
      AlgPtr opp = make_algebra(Kind::ring, n, std::move(add), std::move(mul));
      bool found = false;
      for (const auto& s : rs)
        if (isomorphic(s, opp)) {
          found = true;
          break;
        }
      REQUIRE(found);
    }
  }
}

TEST_CASE("seeded fgab instances are deterministic and canonical") {
  auto a = fgab_instances(200, 20260815ull);
  auto b = fgab_instances(200, 20260815ull);
  REQUIRE(a.size() == 200);
  REQUIRE(a == b);
  for (const auto& g : a) {
    REQUIRE(g.rank >= 0);
    for (size_t i = 0; i < g.factors.size(); ++i) {
      REQUIRE(g.factors[i] >= 2);
      if (i + 1 < g.factors.size()) REQUIRE(g.factors[i + 1] % g.factors[i] == 0);
    }
  }
  auto c = fgab_instances(200, 1ull);
  REQUIRE(a != c);
}

TEST_CASE("standard corpus assembles with verified counts") {
  Corpus c = standard_corpus(8, 5, 6, 50);
  REQUIRE(c.groups.size() == 1 + 1 + 1 + 2 + 1 + 2 + 1 + 5);
  REQUIRE(c.loops.size() == 1 + 1 + 1 + 2 + 6);
  REQUIRE(c.rings.size() == 1 + 2 + 2 + 11 + 2 + 4);
  REQUIRE(c.fgabs.size() == 50);
}
