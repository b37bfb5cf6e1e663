#pragma once
// Reflective subcategories of the table worlds: abelianisation of groups,
// commutative and reduced quotients of rings, the group reflection of loops,
// identity reflections, and composite adjunctions. Each reflector exposes
// only object-plus-unit; its action on morphisms is recovered by factoring
// through units.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgab.hpp"
#include "finalg.hpp"

namespace galkit {

struct Reflection {
  AlgPtr obj;
  Morphism unit;  // surjection A -> obj
};

struct Reflector {
  std::string name;
  Kind ambient = Kind::group;
  bool birkhoff = false;  // subvariety: stable under subobjects and quotients
  std::function<bool(const AlgPtr&)> admits;  // precondition on inputs
  std::function<bool(const AlgPtr&)> member;  // already in the subcategory
  std::function<Reflection(const AlgPtr&)> reflect;
};

// Generating sets for the canonical reflection kernels.

inline std::vector<int32_t> commutator_elements(const AlgPtr& a) {
  std::vector<int32_t> out;
  for (int x = 0; x < a->n; ++x)
    for (int y = 0; y < a->n; ++y)
      out.push_back(a->op(a->op(x, y), a->nv[a->op(y, x)]));  // (xy)(yx)^-1
  return out;
}

inline std::vector<int32_t> mul_commutator_elements(const AlgPtr& a) {
  std::vector<int32_t> out;
  for (int x = 0; x < a->n; ++x)
    for (int y = 0; y < a->n; ++y)
      out.push_back(a->add(a->mul(x, y), a->nv[a->mul(y, x)]));  // xy - yx
  return out;
}

inline bool is_nilpotent_element(const AlgPtr& a, int x) {
  int p = x;
  for (int k = 1; k <= a->n; ++k) {
    if (p == 0) return true;
    p = a->mul(p, x);
  }
  return p == 0;
}

inline std::vector<int32_t> nilpotent_elements(const AlgPtr& a) {
  std::vector<int32_t> out;
  for (int x = 0; x < a->n; ++x)
    if (is_nilpotent_element(a, x)) out.push_back(x);
  return out;
}

inline std::vector<int32_t> associator_elements(const AlgPtr& a) {
  std::vector<int32_t> out;
  for (int x = 0; x < a->n; ++x)
    for (int y = 0; y < a->n; ++y)
      for (int z = 0; z < a->n; ++z)
        // unique w with (x(yz))w = (xy)z
        out.push_back(a->ldiv(a->op(x, a->op(y, z)), a->op(a->op(x, y), z)));
  return out;
}

namespace detail {

inline Reflection quotient_reflection(const AlgPtr& a, const std::vector<int32_t>& seed) {
  Subset n = normal_closure(a, seed);
  QuotientResult q = quotient(a, n);
  return {q.obj, q.q};
}

}  // namespace detail

inline Reflector reflector_ab() {
  Reflector r;
  r.name = "ab";
  r.ambient = Kind::group;
  r.birkhoff = true;
  r.admits = [](const AlgPtr&) { return true; };
  r.member = [](const AlgPtr& a) { return is_abelian_t1(a); };
  r.reflect = [](const AlgPtr& a) {
    return detail::quotient_reflection(a, commutator_elements(a));
  };
  return r;
}

inline Reflector reflector_crng() {
  Reflector r;
  r.name = "crng";
  r.ambient = Kind::ring;
  r.birkhoff = true;
  r.admits = [](const AlgPtr&) { return true; };
  r.member = [](const AlgPtr& a) { return is_commutative_mul(a); };
  r.reflect = [](const AlgPtr& a) {
    return detail::quotient_reflection(a, mul_commutator_elements(a));
  };
  return r;
}

inline Reflector reflector_red() {
  Reflector r;
  r.name = "red";
  r.ambient = Kind::ring;
  r.birkhoff = false;  // epireflective only: radicals do not push forward
  r.admits = [](const AlgPtr& a) { return is_commutative_mul(a); };
  r.member = [](const AlgPtr& a) {
    return is_commutative_mul(a) && nilpotent_elements(a).size() == 1;
  };
  r.reflect = [](const AlgPtr& a) {
    if (!is_commutative_mul(a)) throw NotCommutative("reduced reflection needs a commutative ring");
    Reflection out = detail::quotient_reflection(a, nilpotent_elements(a));
    if (nilpotent_elements(out.obj).size() != 1)
      throw InternalMismatch("quotient by the nilradical is not reduced");
    return out;
  };
  return r;
}

inline Reflector reflector_grp() {
  Reflector r;
  r.name = "grp";
  r.ambient = Kind::loop;
  r.birkhoff = true;
  r.admits = [](const AlgPtr&) { return true; };
  r.member = [](const AlgPtr& a) { return is_associative_t1(a); };
  r.reflect = [](const AlgPtr& a) {
    Reflection out = detail::quotient_reflection(a, associator_elements(a));
    if (!is_associative_t1(out.obj))
      throw InternalMismatch("quotient by associator closure is not a group");
    return out;
  };
  return r;
}

inline Reflector reflector_id(Kind k) {
  Reflector r;
  r.name = "id";
  r.ambient = k;
  r.birkhoff = true;
  r.admits = [](const AlgPtr&) { return true; };
  r.member = [](const AlgPtr&) { return true; };
  r.reflect = [](const AlgPtr& a) { return Reflection{a, identity_morphism(a)}; };
  return r;
}

// R(f): R(A) -> R(B) for f: A -> B, where ra, rb reflect the endpoints.
inline Morphism induced_map(const Reflection& ra, const Reflection& rb, const Morphism& f) {
  return induce_through(ra.unit, compose(rb.unit, f));
}

// ---------------------------------------------------------------------------
// Composite adjunctions F o I with I a subvariety reflector

struct CompositeAdjunction {
  std::string name;
  Reflector inner, outer;

  Kind ambient() const { return inner.ambient; }
  bool admits(const AlgPtr& a) const { return a->kind == inner.ambient && inner.admits(a); }
  bool member(const AlgPtr& a) const { return inner.member(a) && outer.member(a); }
  Reflection reflect(const AlgPtr& a) const {
    Reflection i = inner.reflect(a);
    if (!outer.admits(i.obj))
      throw AmbientMismatch(cat("outer reflector ", outer.name,
                                " rejects the image of ", inner.name));
    Reflection o = outer.reflect(i.obj);
    return {o.obj, compose(o.unit, i.unit)};
  }
};

inline CompositeAdjunction compose_adjunction(Reflector inner, Reflector outer,
                                              std::string name = "") {
  if (inner.ambient != outer.ambient)
    throw AmbientMismatch(cat("cannot compose ", inner.name, " (", kind_name(inner.ambient),
                              ") with ", outer.name, " (", kind_name(outer.ambient), ")"));
  CompositeAdjunction c;
  c.name = name.empty() ? cat(inner.name, "+", outer.name) : std::move(name);
  c.inner = std::move(inner);
  c.outer = std::move(outer);
  return c;
}

// Names accepted everywhere: ab, crng, red, grp, id, crng+red, grp+id, ab+id.
// "tf" lives in the f.g.-abelian world and is handled by its own code path.
inline CompositeAdjunction adjunction_by_name(const std::string& name,
                                              Kind kind_for_id = Kind::group) {
  if (name == "ab") return compose_adjunction(reflector_ab(), reflector_id(Kind::group), "ab");
  if (name == "crng") return compose_adjunction(reflector_crng(), reflector_id(Kind::ring), "crng");
  if (name == "red") return compose_adjunction(reflector_red(), reflector_id(Kind::ring), "red");
  if (name == "grp") return compose_adjunction(reflector_grp(), reflector_id(Kind::loop), "grp");
  if (name == "id") return compose_adjunction(reflector_id(kind_for_id), reflector_id(kind_for_id), "id");
  if (name == "crng+red") return compose_adjunction(reflector_crng(), reflector_red());
  if (name == "grp+id") return compose_adjunction(reflector_grp(), reflector_id(Kind::loop));
  if (name == "ab+id") return compose_adjunction(reflector_ab(), reflector_id(Kind::group));
  if (name == "tf") throw ParseError("reflector tf applies to fgab objects, not finite tables");
  throw ParseError(cat("unknown reflector name: ", name));
}

// ---------------------------------------------------------------------------
// Protoadditivity: does F preserve split short exact sequences?

struct ProtoCounterexample {
  AlgPtr total;       // A in 0 -> K -> A -> B -> 0
  Subset kernel_sub;  // K as a subset of A
  Morphism quot;      // A -> B
  Morphism section;   // B -> A
  std::string reason;
};

inline std::optional<ProtoCounterexample> protoadditivity_search(
    const Reflector& f, const std::vector<AlgPtr>& corpus) {
  for (const AlgPtr& a : corpus) {
    if (a->kind != f.ambient || !f.admits(a)) continue;
    Reflection ra = f.reflect(a);
    for (const Subset& k : all_normal_subobjects(a)) {
      QuotientResult q = quotient(a, k);
      std::optional<Morphism> s = find_section(q.q);
      if (!s) continue;
      SubalgebraResult ks = subalgebra(a, k.elems);
      Reflection rk = f.reflect(ks.obj);
      Reflection rb = f.reflect(q.obj);
      Morphism fk = induced_map(rk, ra, ks.incl);
      Morphism ff = induced_map(ra, rb, q.q);
      Morphism fs = induced_map(rb, ra, *s);
      if (!is_isomorphism(compose(ff, fs)))
        throw InternalMismatch("induced section does not split the induced quotient");
      auto fail = [&](std::string why) {
        return ProtoCounterexample{a, k, q.q, *s, std::move(why)};
      };
      if (!is_injective(fk)) return fail("induced kernel map is not injective");
      std::vector<int32_t> img(fk.map.begin(), fk.map.end());
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      if (img != kernel(ff).elems)
        return fail("image of the induced kernel map differs from the kernel of the induced quotient map");
    }
  }
  return std::nullopt;
}

// Birkhoff stability in computable form: along every surjection f: A ->> B,
// the reflection kernel pushes forward to the reflection kernel.
struct StabilityWitness {
  Morphism surjection;
  Subset pushed, expected;
};

inline std::optional<StabilityWitness> birkhoff_stability_search(
    const Reflector& r, const std::vector<AlgPtr>& corpus, int limit_per_pair = 0) {
  std::vector<std::pair<AlgPtr, Subset>> objs;
  for (const AlgPtr& a : corpus)
    if (a->kind == r.ambient && r.admits(a)) objs.push_back({a, kernel(r.reflect(a).unit)});
  std::optional<StabilityWitness> found;
  for (const auto& [a, kera] : objs)
    for (const auto& [b, kerb] : objs) {
      if (found) return found;
      HomOpts opts;
      opts.surjective_only = true;
      opts.limit = limit_per_pair > 0 ? (size_t)limit_per_pair : 0;
      const AlgPtr& aa = a;
      const AlgPtr& bb = b;
      for_each_hom(aa, bb, opts, [&](const std::vector<int32_t>& m) {
        Morphism f{aa, bb, m};
        Subset pushed = direct_image(f, kera);
        if (!subset_equal(pushed, kerb)) {
          found = StabilityWitness{f, pushed, kerb};
          return false;
        }
        return true;
      });
    }
  return found;
}

// ---------------------------------------------------------------------------
// The torsion-free reflection in the f.g.-abelian world

struct FgAbReflection {
  FgAb obj;
  FgAbMap unit;
};

inline FgAbReflection tf_of_fgab(const FgAb& g) {
  FgAb t = tf_quotient(g);
  IntMatrix m(t.gens(), g.gens());
  for (int i = 0; i < g.rank; ++i) m.at(i, i) = 1;
  return {t, make_map(g, t, std::move(m))};
}

}  // namespace galkit
