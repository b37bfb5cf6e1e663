#pragma once

// Extensions (surjections onto a base) and their classification relative to
// a reflective adjunction: relative commutator, B-central / trivial / normal
// predicates, the two centralisation steps, Galois groups and groupoids, and
// a brute-force weak-universality checker.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include <galkit/closure.hpp>
#include <galkit/reflect.hpp>

namespace galkit {

struct Extension {
  AlgPtr total;
  AlgPtr base;
  Morphism p;  // total -> base, surjective
};

inline Extension make_extension(Morphism p) {
  if (!is_surjective(p)) throw NotSurjective("an extension must be a surjection onto its base");
  AlgPtr t = p.dom, b = p.cod;
  return Extension{std::move(t), std::move(b), std::move(p)};
}

inline Extension identity_extension(const AlgPtr& a) {
  return make_extension(identity_morphism(a));
}

// Quotient projection by a normal subset, packaged as an extension.
inline Extension quotient_extension(const AlgPtr& a, const std::vector<int32_t>& elems) {
  return make_extension(quotient(a, normal_subobject(a, elems)).q);
}

namespace detail {

// Index lookup for the pair carriers built by kernel_pair / pullback.
inline std::vector<int32_t> pair_index(const std::vector<std::pair<int32_t, int32_t>>& pairs,
                                       int left_n, int right_n) {
  std::vector<int32_t> idx((size_t)left_n * right_n, -1);
  for (size_t i = 0; i < pairs.size(); ++i)
    idx[(size_t)pairs[i].first * right_n + pairs[i].second] = (int32_t)i;
  return idx;
}

}  // namespace detail

// [K[f], E]_B for a subvariety reflector: take the kernel pair R of f, close
// zero in R and in E, restrict the first projection to those closures and
// return its kernel, read off through the second projection. The result is
// always contained in K[f] and normal in E.
inline Subset relative_commutator(const Reflector& rb, const Extension& f) {
  if (!rb.birkhoff)
    throw NotBirkhoffInner(cat("relative commutator needs a subvariety reflector, not ", rb.name));
  auto w = fin_world(rb);
  KernelPair r = kernel_pair(f.p);
  Subset cr = close(w, r.obj, zero_sub(r.obj));
  Subset ce = close(w, f.total, zero_sub(f.total));
  std::vector<char> in_ce((size_t)f.total->n, 0);
  for (int e : ce.elems) in_ce[e] = 1;
  std::vector<int32_t> out;
  for (int i : cr.elems) {
    auto [x, y] = r.pairs[i];
    if (!in_ce[x])
      throw InternalMismatch("first projection does not restrict to the closures of zero");
    if (x == 0) out.push_back(y);
  }
  try {
    return normal_subobject(f.total, out);
  } catch (const NotNormal&) {
    throw InternalMismatch("relative commutator came out non-normal");
  }
}

inline Subset relative_commutator(const CompositeAdjunction& g, const Extension& f) {
  return relative_commutator(g.inner, f);
}

template <typename Adj>
inline bool is_B_central(const Adj& g, const Extension& f) {
  return relative_commutator(g, f).elems == std::vector<int32_t>{0};
}

// Trivial extension: the unit naturality square at f is a pullback, i.e. the
// comparison E -> B x_{I(B)} I(E) is a bijection. Checked exhaustively.
template <typename Adj>
inline bool is_trivial_ext(const Adj& g, const Extension& f) {
  Reflection re = g.reflect(f.total);
  Reflection rb = g.reflect(f.base);
  Morphism ip = induced_map(re, rb, f.p);
  return is_pullback_square(f.p, re.unit, rb.unit, ip);
}

// Normal extension: the pullback of f along itself is trivial.
template <typename Adj>
inline bool is_normal_ext(const Adj& g, const Extension& f) {
  KernelPair r = kernel_pair(f.p);
  return is_trivial_ext(g, make_extension(r.p1));
}

// F-central: B-central for the inner reflector and the kernel object lies in
// the outer reflector's subcategory.
inline bool is_F_central(const CompositeAdjunction& g, const Extension& f) {
  if (!g.inner.birkhoff) throw NotBirkhoffInner("F-centrality needs a Birkhoff inner reflector");
  if (!is_B_central(g.inner, f)) return false;
  auto k = subalgebra(f.total, kernel(f.p).elems);
  return g.outer.member(k.obj);
}

// A centralised extension together with the projection from the original
// total object.
struct Centralized {
  Extension ext;
  Morphism proj;  // old total -> new total
};

// I1: divide the total object by the relative commutator. The result is
// B-central, and the construction is idempotent up to isomorphism.
inline Centralized centralize_I1(const Reflector& rb, const Extension& f) {
  Subset c = relative_commutator(rb, f);
  QuotientResult q = quotient(f.total, c);
  Morphism induced = induce_through(q.q, f.p);
  return Centralized{make_extension(std::move(induced)), q.q};
}

inline Centralized centralize_I1(const CompositeAdjunction& g, const Extension& f) {
  return centralize_I1(g.inner, f);
}

// F1: on a B-central extension, divide the total object by the closure of
// zero computed inside the kernel object under the outer reflector. The new
// kernel then lies in the outer subcategory.
inline Centralized centralize_F1(const CompositeAdjunction& g, const Extension& f) {
  if (!is_B_central(g.inner, f))
    throw NotBCentral(cat("F1 needs a ", g.inner.name, "-central extension; apply I1 first"));
  auto k = subalgebra(f.total, kernel(f.p).elems);
  auto w = fin_world(g.outer);
  Subset cl = close(w, k.obj, zero_sub(k.obj));
  std::vector<int32_t> emb;
  emb.reserve(cl.elems.size());
  for (int i : cl.elems) emb.push_back(k.incl.map[i]);
  Subset nsub;
  try {
    nsub = normal_subobject(f.total, emb);
  } catch (const NotNormal&) {
    throw InternalMismatch("closure of zero in a central kernel came out non-normal");
  }
  QuotientResult q = quotient(f.total, nsub);
  Morphism induced = induce_through(q.q, f.p);
  return Centralized{make_extension(std::move(induced)), q.q};
}

struct GaloisGroupResult {
  AlgPtr group;    // kernel object of <I(p1), I(p2)> inside I(R[p])
  Subset witness;  // that kernel, as a subset of I(R[p])
  Subset meet;     // K[p] ^ K[eta_E] inside E
  std::string iso;
};

// Galois group of a normal extension, computed two ways: as the kernel of
// <I(p1), I(p2)> : I(R[p]) -> I(E) x I(E), and as K[p] ^ K[eta_E] carried
// into I(R[p]) by x |-> eta_R(x, 0). Any disagreement is a bug, not an input
// error.
template <typename Adj>
inline GaloisGroupResult galois_group(const Adj& g, const Extension& p) {
  if (!is_normal_ext(g, p)) throw NotNormalExtension("the Galois group needs a normal extension");
  KernelPair r = kernel_pair(p.p);
  Reflection rr = g.reflect(r.obj);
  Reflection re = g.reflect(p.total);
  Morphism i1 = induced_map(rr, re, r.p1);
  Morphism i2 = induced_map(rr, re, r.p2);

  PullbackResult prod = product(re.obj, re.obj);
  auto pidx = detail::pair_index(prod.pairs, re.obj->n, re.obj->n);
  std::vector<int32_t> m((size_t)rr.obj->n);
  for (int x = 0; x < rr.obj->n; ++x)
    m[x] = pidx[(size_t)i1.map[x] * re.obj->n + i2.map[x]];
  Subset ker1 = kernel(make_morphism(rr.obj, prod.obj, std::move(m)));

  Subset mt = meet(kernel(p.p), kernel(re.unit));
  auto ridx = detail::pair_index(r.pairs, p.total->n, p.total->n);
  std::vector<int32_t> hit;
  hit.reserve(mt.elems.size());
  for (int x : mt.elems) {
    int32_t pr = ridx[(size_t)x * p.total->n + 0];
    if (pr < 0) throw InternalMismatch("meet element missing from the kernel pair");
    hit.push_back(rr.unit.map[pr]);
  }
  std::sort(hit.begin(), hit.end());
  if (std::adjacent_find(hit.begin(), hit.end()) != hit.end())
    throw InternalMismatch("Galois group comparison map is not injective");
  if (hit != ker1.elems)
    throw InternalMismatch("kernel of <I(p1), I(p2)> disagrees with K[p] ^ K[eta]");

  auto sub = subalgebra(rr.obj, ker1.elems);
  return GaloisGroupResult{sub.obj, ker1, mt, iso_type(sub.obj)};
}

struct GaloisGroupoidData {
  AlgPtr objects;   // I(E)
  AlgPtr arrows;    // I(R[p])
  Morphism source;  // I(p1)
  Morphism target;  // I(p2)
  Morphism unit;    // I(diagonal)
};

// Reflected kernel-equivalence diagram of a normal extension. The unit laws
// and the composability comparison I(R x_E R) = I(R) x_{I(E)} I(R) are
// verified exhaustively before returning.
template <typename Adj>
inline GaloisGroupoidData galois_groupoid(const Adj& g, const Extension& p) {
  if (!is_normal_ext(g, p)) throw NotNormalExtension("the Galois groupoid needs a normal extension");
  KernelPair r = kernel_pair(p.p);
  Reflection rr = g.reflect(r.obj);
  Reflection re = g.reflect(p.total);
  Morphism src = induced_map(rr, re, r.p1);
  Morphism tgt = induced_map(rr, re, r.p2);
  Morphism unit = induced_map(re, rr, r.diag);
  for (int x = 0; x < re.obj->n; ++x)
    if (src.map[unit.map[x]] != x || tgt.map[unit.map[x]] != x)
      throw InternalMismatch("groupoid unit laws fail");

  PullbackResult comp = pullback(r.p2, r.p1);  // composable pairs of arrows
  Reflection rc = g.reflect(comp.obj);
  Morphism c1 = induced_map(rc, rr, comp.p1);
  Morphism c2 = induced_map(rc, rr, comp.p2);
  PullbackResult q = pullback(tgt, src);
  auto qidx = detail::pair_index(q.pairs, rr.obj->n, rr.obj->n);
  std::vector<int32_t> m((size_t)rc.obj->n);
  for (int x = 0; x < rc.obj->n; ++x) {
    int32_t v = qidx[(size_t)c1.map[x] * rr.obj->n + c2.map[x]];
    if (v < 0) throw InternalMismatch("reflected pair of composable arrows is not composable");
    m[x] = v;
  }
  if (!is_isomorphism(make_morphism(rc.obj, q.obj, std::move(m))))
    throw InternalMismatch("groupoid composability comparison is not an isomorphism");
  return GaloisGroupoidData{re.obj, rr.obj, std::move(src), std::move(tgt), std::move(unit)};
}

struct Factorisation {
  int index = -1;                  // position in the candidate list
  std::optional<Morphism> u;       // total(p) -> total(candidate), over the base
};

// For each candidate p' over the same base, search exhaustively for u with
// p = p' o u. Finding u for every candidate is exactly weak universality of
// p relative to the supplied list; nothing is claimed beyond the list.
template <typename Adj>
inline std::vector<Factorisation> weakly_universal_check(const Extension& p,
                                                         const std::vector<Extension>& others,
                                                         const Adj& g) {
  if (!is_normal_ext(g, p)) throw NotNormalExtension("weak universality concerns normal extensions");
  std::vector<Factorisation> out;
  out.reserve(others.size());
  for (size_t i = 0; i < others.size(); ++i) {
    const Extension& cand = others[i];
    if (!same_algebra(cand.base, p.base))
      throw AmbientMismatch("weak universality needs candidates over the same base");
    if (!is_normal_ext(g, cand))
      throw NotNormalExtension(cat("candidate #", i, " is not a normal extension"));
    HomOpts opts;
    opts.limit = 1;
    opts.allowed = [&](int x, int y) { return cand.p.map[y] == p.p.map[x]; };
    Factorisation fr;
    fr.index = (int)i;
    for_each_hom(p.total, cand.total, opts, [&](const std::vector<int32_t>& mp) {
      fr.u = Morphism{p.total, cand.total, mp};
      return false;
    });
    out.push_back(std::move(fr));
  }
  return out;
}

}  // namespace galkit
