#include <algorithm>
#include <vector>

#include <galkit/corpus.hpp>
#include <galkit/galois.hpp>

#include "catch2/catch_amalgamated.hpp"
#include "support/tables.hpp"

using namespace galkit;
using namespace tables;

namespace {

std::vector<AlgPtr> groups_up_to(int n) {
  std::vector<AlgPtr> out;
  for (int k = 1; k <= n; ++k)
    for (auto& g : all_groups(k)) out.push_back(g);
  return out;
}

std::vector<AlgPtr> rings_up_to(int n) {
  std::vector<AlgPtr> out;
  for (int k = 1; k <= n; ++k)
    for (auto& r : all_rings(k)) out.push_back(r);
  return out;
}

AlgPtr as_loop(const AlgPtr& g) {
  std::vector<int32_t> t = g->t1;
  return make_algebra(Kind::loop, g->n, std::move(t), {});
}

// Ordinary commutator subgroup [K, E]: normal closure of the group-theoretic
// commutators between the kernel and the whole group.
Subset group_commutator_oracle(const Extension& f) {
  const FiniteAlgebra& a = *f.total;
  std::vector<int32_t> seed;
  for (int k : kernel(f.p).elems)
    for (int e = 0; e < a.n; ++e)
      seed.push_back(a.op(a.op(k, e), a.nv[a.op(e, k)]));
  return normal_closure(f.total, seed);
}

// Ideal generated by the multiplicative commutators ke - ek.
Subset ring_commutator_oracle(const Extension& f) {
  const FiniteAlgebra& a = *f.total;
  std::vector<int32_t> seed;
  for (int k : kernel(f.p).elems)
    for (int e = 0; e < a.n; ++e)
      seed.push_back(a.add(a.mul(k, e), a.nv[a.mul(e, k)]));
  return normal_closure(f.total, seed);
}

std::vector<Extension> quotient_extensions(const AlgPtr& a) {
  std::vector<Extension> out;
  for (auto& n : all_normal_subobjects(a)) out.push_back(quotient_extension(a, n.elems));
  return out;
}

Extension sign_extension() {
  auto s3 = perm_group(3);
  auto ss = all_surjections(s3, cyclic_group(2));
  REQUIRE(ss.size() == 1);
  return make_extension(ss[0]);
}

Extension mod_ring_extension(int n, int d) {
  auto big = cyclic_ring(n);
  auto small = cyclic_ring(d);
  std::vector<int32_t> m(n);
  for (int i = 0; i < n; ++i) m[i] = i % d;
  return make_extension(make_morphism(big, small, m));
}

}  // namespace

TEST_CASE("relative commutator: pins and oracles") {
  auto ab = reflector_ab();
  auto crng = reflector_crng();

  SECTION("abelian total objects have vanishing commutators") {
    for (auto& a : {cyclic_group(4), cyclic_group(6), abelian_group({2, 2})})
      for (auto& f : quotient_extensions(a))
        CHECK(relative_commutator(ab, f).elems == std::vector<int32_t>{0});
  }

  SECTION("sign map on S3") {
    auto f = sign_extension();
    auto c = relative_commutator(ab, f);
    CHECK(c.elems == std::vector<int32_t>{0, 3, 4});  // the even permutations
    CHECK(subset_equal(c, group_commutator_oracle(f)));
  }

  SECTION("group oracle across small quotients") {
    auto gs = groups_up_to(6);
    gs.push_back(perm_group(3));
    gs.push_back(quaternion_group());
    gs.push_back(dihedral(4));
    for (auto& g : gs)
      for (auto& f : quotient_extensions(g)) {
        auto c = relative_commutator(ab, f);
        CHECK(subset_equal(c, group_commutator_oracle(f)));
        CHECK(subset_leq(c, kernel(f.p)));
      }
  }

  SECTION("ring oracle across small quotients") {
    auto rs = rings_up_to(6);
    rs.push_back(ut2_f2_ring());
    for (auto& r : rs)
      for (auto& f : quotient_extensions(r)) {
        auto c = relative_commutator(crng, f);
        CHECK(subset_equal(c, ring_commutator_oracle(f)));
        CHECK(subset_leq(c, kernel(f.p)));
      }
  }

  SECTION("groups seen as loops have no associator defect") {
    auto grp = reflector_grp();
    for (auto& g : {cyclic_group(4), cyclic_group(5), abelian_group({2, 2})})
      for (auto& f : quotient_extensions(as_loop(g)))
        CHECK(relative_commutator(grp, f).elems == std::vector<int32_t>{0});
  }

  SECTION("input validation") {
    CHECK_THROWS_AS(relative_commutator(reflector_red(), mod_ring_extension(4, 2)),
                    NotBirkhoffInner);
    auto c2 = cyclic_group(2);
    CHECK_THROWS_AS(make_extension(make_morphism(c2, cyclic_group(4), {0, 2})), NotSurjective);
  }
}

TEST_CASE("central extensions") {
  auto ab = reflector_ab();

  auto z4 = cyclic_group(4);
  CHECK(is_B_central(ab, quotient_extension(z4, {0, 2})));

  auto q8 = quaternion_group();
  CHECK(is_B_central(ab, quotient_extension(q8, {0, 1})));  // kernel = centre

  CHECK_FALSE(is_B_central(ab, sign_extension()));

  auto ut2 = ut2_f2_ring();
  auto f = quotient_extension(ut2, {0, 2});
  CHECK_FALSE(is_B_central(reflector_crng(), f));
  CHECK_FALSE(is_B_central(adjunction_by_name("crng+red"), f));
  CHECK(is_B_central(adjunction_by_name("ab"), quotient_extension(z4, {0, 2})));
}

TEST_CASE("trivial extensions") {
  auto ab = reflector_ab();

  SECTION("identities and product projections are trivial") {
    CHECK(is_trivial_ext(ab, identity_extension(perm_group(3))));
    CHECK(is_trivial_ext(adjunction_by_name("crng+red"), identity_extension(cyclic_ring(4))));
    auto pr = product(cyclic_group(2), cyclic_group(3));
    CHECK(is_trivial_ext(ab, make_extension(pr.p2)));
  }

  SECTION("an abelian total object makes every surjection trivial") {
    // The unit at an abelian group is an isomorphism, so the naturality
    // square is a pullback no matter what the map does.
    auto z4 = cyclic_group(4);
    CHECK(is_trivial_ext(ab, quotient_extension(z4, {0, 2})));
    for (auto& a : {cyclic_group(6), abelian_group({2, 2})})
      for (auto& f : quotient_extensions(a)) CHECK(is_trivial_ext(ab, f));
  }

  SECTION("central but not trivial") {
    auto q8 = quaternion_group();
    CHECK_FALSE(is_trivial_ext(ab, quotient_extension(q8, {0, 1})));
    CHECK_FALSE(is_trivial_ext(ab, sign_extension()));
  }

  SECTION("nilpotents obstruct triviality for crng+red") {
    auto g = adjunction_by_name("crng+red");
    CHECK_FALSE(is_trivial_ext(g, mod_ring_extension(8, 2)));
    CHECK_FALSE(is_trivial_ext(g, mod_ring_extension(4, 2)));
  }
}

TEST_CASE("normal extensions") {
  auto ab = reflector_ab();
  auto q8 = quaternion_group();

  CHECK(is_normal_ext(ab, quotient_extension(q8, {0, 1})));
  CHECK_FALSE(is_normal_ext(ab, sign_extension()));
  CHECK(is_normal_ext(ab, identity_extension(perm_group(3))));

  SECTION("trivial implies normal") {
    auto pr = product(cyclic_group(2), cyclic_group(3));
    CHECK(is_normal_ext(ab, make_extension(pr.p2)));
    CHECK(is_normal_ext(ab, quotient_extension(cyclic_group(4), {0, 2})));
  }

  SECTION("normal equals central when the outer reflector is the identity") {
    auto gs = groups_up_to(6);
    gs.push_back(perm_group(3));
    gs.push_back(quaternion_group());
    gs.push_back(dihedral(4));
    for (auto& g : gs)
      for (auto& f : quotient_extensions(g))
        CHECK(is_normal_ext(ab, f) == is_B_central(ab, f));
  }

  SECTION("normal equals F-central for crng+red") {
    auto g = adjunction_by_name("crng+red");
    auto rs = rings_up_to(6);
    rs.push_back(ut2_f2_ring());
    rs.push_back(cyclic_ring(8));
    for (auto& r : rs)
      for (auto& f : quotient_extensions(r))
        CHECK(is_normal_ext(g, f) == is_F_central(g, f));
  }
}

TEST_CASE("F-central extensions") {
  auto g = adjunction_by_name("crng+red");

  auto f6 = ring_product(cyclic_ring(2), cyclic_ring(3));
  std::vector<int32_t> proj(6);
  for (int i = 0; i < 6; ++i) proj[i] = i % 3;
  CHECK(is_F_central(g, make_extension(make_morphism(f6, cyclic_ring(3), proj))));

  CHECK_FALSE(is_F_central(g, mod_ring_extension(8, 2)));  // nilpotent kernel
  CHECK(is_F_central(g, identity_extension(cyclic_ring(2))));
}

TEST_CASE("centralisation step I1") {
  auto ab = reflector_ab();

  SECTION("S3 collapses to the sign quotient") {
    auto r = centralize_I1(ab, sign_extension());
    CHECK(r.ext.total->n == 2);
    CHECK(is_isomorphism(r.ext.p));
    CHECK(is_B_central(ab, r.ext));
  }

  SECTION("already-central extensions are untouched") {
    auto q8 = quaternion_group();
    auto r = centralize_I1(ab, quotient_extension(q8, {0, 1}));
    CHECK(r.ext.total->n == 8);
    CHECK(isomorphic(r.ext.total, q8));
  }

  SECTION("output is central, the step is idempotent, and p factors through it") {
    auto gs = groups_up_to(6);
    gs.push_back(perm_group(3));
    gs.push_back(quaternion_group());
    for (auto& g : gs)
      for (auto& f : quotient_extensions(g)) {
        auto r = centralize_I1(ab, f);
        CHECK(is_B_central(ab, r.ext));
        CHECK(relative_commutator(ab, r.ext).elems == std::vector<int32_t>{0});
        CHECK(compose(r.ext.p, r.proj).map == f.p.map);
        auto rr = centralize_I1(ab, r.ext);
        CHECK(rr.ext.total->n == r.ext.total->n);
        CHECK(isomorphic(rr.ext.total, r.ext.total));
      }
  }
}

TEST_CASE("centralisation step F1") {
  auto g = adjunction_by_name("crng+red");

  SECTION("nilpotent kernels are squashed") {
    auto r4 = centralize_F1(g, mod_ring_extension(4, 2));
    CHECK(r4.ext.total->n == 2);
    CHECK(is_F_central(g, r4.ext));
    auto r8 = centralize_F1(g, mod_ring_extension(8, 2));
    CHECK(r8.ext.total->n == 2);
    CHECK(is_F_central(g, r8.ext));
  }

  SECTION("reduced kernels are untouched") {
    auto f6 = ring_product(cyclic_ring(2), cyclic_ring(3));
    std::vector<int32_t> proj(6);
    for (int i = 0; i < 6; ++i) proj[i] = i % 3;
    auto r = centralize_F1(g, make_extension(make_morphism(f6, cyclic_ring(3), proj)));
    CHECK(r.ext.total->n == 6);
    CHECK(is_isomorphism(r.proj));
  }

  SECTION("F1 after I1 fixes identities") {
    auto id3 = identity_extension(cyclic_ring(3));
    auto r = centralize_F1(g, centralize_I1(g, id3).ext);
    CHECK(r.ext.total->n == 3);
    CHECK(is_isomorphism(r.ext.p));
  }

  SECTION("non-central input is rejected") {
    auto ut2 = ut2_f2_ring();
    CHECK_THROWS_AS(centralize_F1(g, quotient_extension(ut2, {0, 2})), NotBCentral);
  }

  SECTION("composite F1 I1 lands in the F-central extensions") {
    for (auto& r : rings_up_to(6))
      for (auto& f : quotient_extensions(r)) {
        auto out = centralize_F1(g, centralize_I1(g, f).ext);
        CHECK(is_F_central(g, out.ext));
      }
  }

  SECTION("every map to an F-central extension kills the squashed part") {
    // The subset F1 divides out must die under any morphism of extensions
    // into a target whose kernel already lies in the outer subcategory.
    auto check_universal = [&](const Extension& f, const Extension& target) {
      REQUIRE(is_F_central(g, target));
      auto k = subalgebra(f.total, kernel(f.p).elems);
      auto w = fin_world(g.outer);
      auto cl = close(w, k.obj, zero_sub(k.obj));
      std::vector<int32_t> squashed;
      for (int i : cl.elems) squashed.push_back(k.incl.map[i]);
      HomOpts opts;
      opts.allowed = [&](int x, int y) { return target.p.map[y] == f.p.map[x]; };
      int seen = 0;
      for_each_hom(f.total, target.total, opts, [&](const std::vector<int32_t>& m) {
        ++seen;
        for (int x : squashed) CHECK(m[x] == 0);
        return true;
      });
      CHECK(seen > 0);
    };
    auto z2 = cyclic_ring(2);
    auto f22 = ring_product(z2, z2);
    std::vector<int32_t> proj(4);
    for (int i = 0; i < 4; ++i) proj[i] = i / 2;
    auto t1 = identity_extension(z2);
    auto t2 = make_extension(make_morphism(f22, z2, proj));
    check_universal(mod_ring_extension(8, 2), t1);
    check_universal(mod_ring_extension(8, 2), t2);
    check_universal(mod_ring_extension(4, 2), t1);
    check_universal(mod_ring_extension(4, 2), t2);
  }
}

TEST_CASE("Galois groups") {
  auto ab = reflector_ab();
  auto q8 = quaternion_group();

  SECTION("pinned values") {
    auto r = galois_group(ab, quotient_extension(q8, {0, 1}));
    CHECK(isomorphic(r.group, cyclic_group(2)));
    CHECK(r.meet.elems == std::vector<int32_t>{0, 1});
    auto rc = galois_group(adjunction_by_name("ab"), quotient_extension(q8, {0, 1}));
    CHECK(isomorphic(rc.group, cyclic_group(2)));

    CHECK(galois_group(ab, quotient_extension(cyclic_group(4), {0, 2})).group->n == 1);
    CHECK(galois_group(ab, identity_extension(perm_group(3))).group->n == 1);
  }

  SECTION("only normal extensions qualify") {
    CHECK_THROWS_AS(galois_group(ab, sign_extension()), NotNormalExtension);
  }

  SECTION("both computation paths agree across the small corpora") {
    auto gs = groups_up_to(6);
    gs.push_back(quaternion_group());
    gs.push_back(dihedral(4));
    int normal_count = 0;
    for (auto& g : gs)
      for (auto& f : quotient_extensions(g)) {
        if (!is_normal_ext(ab, f)) continue;
        ++normal_count;
        auto r = galois_group(ab, f);  // throws InternalMismatch on any disagreement
        CHECK(r.witness.elems.size() == r.meet.elems.size());
      }
    CHECK(normal_count > 20);

    auto comp = adjunction_by_name("crng+red");
    for (auto& rg : rings_up_to(6))
      for (auto& f : quotient_extensions(rg)) {
        if (!is_normal_ext(comp, f)) continue;
        auto r = galois_group(comp, f);
        CHECK(r.witness.elems.size() == r.meet.elems.size());
      }
  }
}

TEST_CASE("Galois groupoids") {
  auto ab = reflector_ab();

  SECTION("identity extensions give discrete groupoids") {
    auto d = galois_groupoid(ab, identity_extension(perm_group(3)));
    CHECK(d.objects->n == 2);
    CHECK(d.arrows->n == 2);
    CHECK(is_isomorphism(d.unit));
  }

  SECTION("the quaternion double cover of the Klein group") {
    auto q8 = quaternion_group();
    auto d = galois_groupoid(ab, quotient_extension(q8, {0, 1}));
    CHECK(d.objects->n == 4);
    CHECK(d.arrows->n == 8);
    for (int x = 0; x < d.objects->n; ++x) {
      CHECK(d.source.map[d.unit.map[x]] == x);
      CHECK(d.target.map[d.unit.map[x]] == x);
    }
  }

  SECTION("a trivial extension has no isotropy") {
    auto pr = product(cyclic_group(2), cyclic_group(3));
    auto f = make_extension(pr.p2);
    auto d = galois_groupoid(ab, f);
    CHECK(d.objects->n == 6);
    CHECK(d.arrows->n == 12);
    CHECK(galois_group(ab, f).group->n == 1);
  }

  SECTION("construction succeeds on every small normal extension") {
    auto gs = groups_up_to(6);
    gs.push_back(quaternion_group());
    for (auto& g : gs)
      for (auto& f : quotient_extensions(g)) {
        if (!is_normal_ext(ab, f)) continue;
        auto d = galois_groupoid(ab, f);
        CHECK(is_injective(d.unit));
      }
  }
}

TEST_CASE("weak universality checker") {
  auto ab = reflector_ab();
  auto q8 = quaternion_group();
  auto pq = quotient_extension(q8, {0, 1});
  auto base = pq.base;

  auto pr = product(cyclic_group(2), base);
  auto pz = make_extension(pr.p2);

  SECTION("factorisations through itself and through a smaller cover") {
    auto rep = weakly_universal_check(pq, {pq, pz}, ab);
    REQUIRE(rep.size() == 2);
    for (auto& fr : rep) {
      REQUIRE(fr.u.has_value());
      const Extension& cand = fr.index == 0 ? pq : pz;
      CHECK(compose(cand.p, *fr.u).map == pq.p.map);
    }
  }

  SECTION("no map from the split cover back onto the quaternions") {
    auto rep = weakly_universal_check(pz, {pq}, ab);
    REQUIRE(rep.size() == 1);
    CHECK_FALSE(rep[0].u.has_value());
  }

  SECTION("candidate validation") {
    auto p4 = quotient_extension(cyclic_group(4), {0, 2});
    CHECK_THROWS_AS(weakly_universal_check(p4, {sign_extension()}, ab), NotNormalExtension);
    auto p6 = quotient_extension(cyclic_group(6), {0, 3});  // base Z/3
    CHECK_THROWS_AS(weakly_universal_check(p4, {p6}, ab), AmbientMismatch);
  }
}

TEST_CASE("commutator normalisation properties") {
  auto ab = reflector_ab();
  auto crng = reflector_crng();
  auto grp = reflector_grp();

  SECTION("the self-commutator is the closure of zero") {
    auto check_one = [](const Reflector& r, const AlgPtr& a, Kind k) {
      std::vector<int32_t> zeros(a->n, 0);
      auto f = make_extension(make_morphism(a, trivial_algebra(k), zeros));
      auto w = fin_world(r);
      CHECK(subset_equal(relative_commutator(r, f), close(w, a, zero_sub(a))));
    };
    auto gs = groups_up_to(6);
    gs.push_back(perm_group(3));
    gs.push_back(quaternion_group());
    for (auto& g : gs) check_one(ab, g, Kind::group);
    for (auto& r : rings_up_to(6)) check_one(crng, r, Kind::ring);
    for (auto& l : all_loops(5)) check_one(grp, l, Kind::loop);
  }

  SECTION("surjective images of extensions push the commutator forward") {
    auto gs = groups_up_to(6);
    gs.push_back(perm_group(3));
    gs.push_back(quaternion_group());
    for (auto& g : gs) {
      auto normals = all_normal_subobjects(g);
      for (auto& nsub : normals) {
        auto f = quotient_extension(g, nsub.elems);
        for (auto& msub : normals) {
          auto u = quotient(g, msub);
          auto v = quotient(f.base, direct_image(f.p, msub));
          auto f2 = make_extension(induce_through(u.q, compose(v.q, f.p)));
          CHECK(subset_equal(direct_image(u.q, relative_commutator(ab, f)),
                             relative_commutator(ab, f2)));
        }
      }
    }
  }
}
