#pragma once
// Finite table-presented algebras (groups, loops, non-unital rings) and the
// kernel/quotient/pullback calculus on them. Elements are dense indices
// 0..n-1; the distinguished point is always index 0. Values are immutable
// after construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "util.hpp"

namespace galkit {

enum class Kind { group, loop, ring };

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::group: return "group";
    case Kind::loop: return "loop";
    case Kind::ring: return "ring";
  }
  return "?";
}

inline std::optional<Kind> parse_kind(const std::string& s) {
  if (s == "group") return Kind::group;
  if (s == "loop") return Kind::loop;
  if (s == "ring") return Kind::ring;
  return std::nullopt;
}

// Sanity bounds: inputs are rejected above kMaxLoad; derived constructions
// (kernel pairs, pullbacks) may grow up to kMaxInternal.
inline constexpr int kMaxLoad = 64;
inline constexpr int kMaxInternal = 4096;

struct FiniteAlgebra {
  Kind kind = Kind::group;
  int n = 1;
  std::vector<int32_t> t1;  // group/loop multiplication; ring addition
  std::vector<int32_t> t2;  // ring multiplication only
  // Derived caches, filled at construction.
  std::vector<int32_t> ld, rd;  // t1 divisions: a\b, a/b (group/loop)
  std::vector<int32_t> nv;      // t1 inverse: a -> unique z with a+z=0

  int op(int a, int b) const { return t1[a * n + b]; }
  int add(int a, int b) const { return t1[a * n + b]; }
  int mul(int a, int b) const { return t2[a * n + b]; }
  int ldiv(int a, int b) const { return ld[a * n + b]; }
  int rdiv(int a, int b) const { return rd[a * n + b]; }
  int neg(int a) const { return nv[a]; }
  bool is_ring() const { return kind == Kind::ring; }

  bool same_presentation(const FiniteAlgebra& o) const {
    return kind == o.kind && n == o.n && t1 == o.t1 && t2 == o.t2;
  }
};

using AlgPtr = std::shared_ptr<const FiniteAlgebra>;

inline bool same_algebra(const AlgPtr& a, const AlgPtr& b) {
  return a == b || (a && b && a->same_presentation(*b));
}

inline bool table_is_latin(const std::vector<int32_t>& t, int n, int* bad_row, int* bad_col) {
  for (int i = 0; i < n; ++i) {
    uint64_t seen_r = 0, seen_c = 0;
    for (int j = 0; j < n; ++j) {
      uint64_t r = uint64_t(1) << (t[i * n + j] % 64);
      uint64_t c = uint64_t(1) << (t[j * n + i] % 64);
      if (n <= 64) {
        if (seen_r & r) { if (bad_row) *bad_row = i; return false; }
        if (seen_c & c) { if (bad_col) *bad_col = i; return false; }
        seen_r |= r; seen_c |= c;
      }
    }
    if (n > 64) {
      std::vector<char> sr(n, 0), sc(n, 0);
      for (int j = 0; j < n; ++j) {
        if (sr[t[i * n + j]]++) { if (bad_row) *bad_row = i; return false; }
        if (sc[t[j * n + i]]++) { if (bad_col) *bad_col = i; return false; }
      }
    }
  }
  return true;
}

namespace detail {

inline void check_entries(const std::vector<int32_t>& t, int n, const char* what) {
  if ((int64_t)t.size() != (int64_t)n * n)
    throw AxiomViolation(cat(what, " table has ", t.size(), " entries, expected ", n * n));
  for (auto v : t)
    if (v < 0 || v >= n) throw AxiomViolation(cat(what, " table entry ", v, " out of range 0..", n - 1));
}

inline void check_identity(const std::vector<int32_t>& t, int n, const char* lawname) {
  for (int x = 0; x < n; ++x) {
    if (t[0 * n + x] != x || t[x * n + 0] != x)
      throw AxiomViolation(cat(lawname, " fails at x=", x, " (index 0 must be neutral)"));
  }
}

inline void check_assoc(const std::vector<int32_t>& t, int n, const char* what) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = t[a * n + b];
      for (int c = 0; c < n; ++c) {
        if (t[ab * n + c] != t[a * n + t[b * n + c]])
          throw AxiomViolation(cat(what, " associativity fails at (", a, ",", b, ",", c, ")"));
      }
    }
}

}  // namespace detail

// Validates the tables against the axioms of the advertised kind. Throws
// AxiomViolation naming the broken law and a witness.
inline void validate_algebra(const FiniteAlgebra& a) {
  if (a.n < 1) throw AxiomViolation("empty carrier");
  detail::check_entries(a.t1, a.n, a.kind == Kind::ring ? "addition" : "multiplication");
  switch (a.kind) {
    case Kind::group: {
      detail::check_identity(a.t1, a.n, "x*1 = x = 1*x");
      detail::check_assoc(a.t1, a.n, "group");
      for (int x = 0; x < a.n; ++x) {
        bool inv = false;
        for (int y = 0; y < a.n && !inv; ++y) inv = a.t1[x * a.n + y] == 0;
        if (!inv) throw AxiomViolation(cat("group element ", x, " has no inverse"));
      }
      break;
    }
    case Kind::loop: {
      detail::check_identity(a.t1, a.n, "x*1 = x = 1*x");
      int bad_row = -1, bad_col = -1;
      if (!table_is_latin(a.t1, a.n, &bad_row, &bad_col)) {
        if (bad_row >= 0)
          throw AxiomViolation(cat("y = x\\(x*y) fails: row ", bad_row, " is not a permutation"));
        throw AxiomViolation(cat("x = (x/y)*y fails: column ", bad_col, " is not a permutation"));
      }
      break;
    }
    case Kind::ring: {
      detail::check_entries(a.t2, a.n, "multiplication");
      detail::check_identity(a.t1, a.n, "x+0 = x = 0+x");
      detail::check_assoc(a.t1, a.n, "additive");
      for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < a.n; ++y)
          if (a.t1[x * a.n + y] != a.t1[y * a.n + x])
            throw AxiomViolation(cat("addition not commutative at (", x, ",", y, ")"));
      for (int x = 0; x < a.n; ++x) {
        bool inv = false;
        for (int y = 0; y < a.n && !inv; ++y) inv = a.t1[x * a.n + y] == 0;
        if (!inv) throw AxiomViolation(cat("element ", x, " has no additive inverse"));
      }
      detail::check_assoc(a.t2, a.n, "multiplicative");
      for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < a.n; ++y)
          for (int z = 0; z < a.n; ++z) {
            if (a.t2[x * a.n + a.t1[y * a.n + z]] !=
                a.t1[a.t2[x * a.n + y] * a.n + a.t2[x * a.n + z]])
              throw AxiomViolation(cat("left distributivity fails at (", x, ",", y, ",", z, ")"));
            if (a.t2[a.t1[x * a.n + y] * a.n + z] !=
                a.t1[a.t2[x * a.n + z] * a.n + a.t2[y * a.n + z]])
              throw AxiomViolation(cat("right distributivity fails at (", x, ",", y, ",", z, ")"));
          }
      break;
    }
  }
}

namespace detail {

inline void fill_caches(FiniteAlgebra& a) {
  int n = a.n;
  a.nv.assign(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (a.t1[x * n + y] == 0) { a.nv[x] = y; break; }
  if (a.kind != Kind::ring) {
    a.ld.assign((size_t)n * n, 0);
    a.rd.assign((size_t)n * n, 0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int z = a.t1[x * n + y];  // x*y = z  =>  x\z = y, z/y = x
        a.ld[x * n + z] = y;
        a.rd[z * n + y] = x;
      }
  }
}

inline AlgPtr finish(FiniteAlgebra a, bool check, int bound) {
  if (a.n > bound) throw TooLarge(cat("algebra of size ", a.n, " exceeds bound ", bound));
  if (check) validate_algebra(a);
  fill_caches(a);
  return std::make_shared<const FiniteAlgebra>(std::move(a));
}

}  // namespace detail

inline AlgPtr make_algebra(Kind k, int n, std::vector<int32_t> t1, std::vector<int32_t> t2 = {}) {
  FiniteAlgebra a;
  a.kind = k;
  a.n = n;
  a.t1 = std::move(t1);
  a.t2 = std::move(t2);
  return detail::finish(std::move(a), true, kMaxLoad);
}

// For internally derived tables that are valid by construction.
inline AlgPtr make_algebra_trusted(Kind k, int n, std::vector<int32_t> t1,
                                   std::vector<int32_t> t2 = {}) {
  FiniteAlgebra a;
  a.kind = k;
  a.n = n;
  a.t1 = std::move(t1);
  a.t2 = std::move(t2);
  return detail::finish(std::move(a), false, kMaxInternal);
}

inline AlgPtr trivial_algebra(Kind k) {
  return make_algebra(k, 1, {0}, k == Kind::ring ? std::vector<int32_t>{0} : std::vector<int32_t>{});
}

// ---------------------------------------------------------------------------
// Morphisms

struct Morphism {
  AlgPtr dom, cod;
  std::vector<int32_t> map;
  int operator()(int x) const { return map[x]; }
};

inline void validate_morphism(const Morphism& f) {
  if (!f.dom || !f.cod) throw InternalMismatch("morphism without endpoints");
  if (f.dom->kind != f.cod->kind) throw AmbientMismatch("morphism across kinds");
  if ((int)f.map.size() != f.dom->n) throw AxiomViolation("morphism map has wrong length");
  for (auto v : f.map)
    if (v < 0 || v >= f.cod->n) throw AxiomViolation("morphism value out of range");
  if (f.map[0] != 0) throw AxiomViolation("morphism does not preserve the point");
  int n = f.dom->n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (f.map[f.dom->t1[a * n + b]] !=
          f.cod->t1[f.map[a] * f.cod->n + f.map[b]])
        throw AxiomViolation(cat("morphism breaks ", f.dom->is_ring() ? "+" : "*",
                                 " at (", a, ",", b, ")"));
      if (f.dom->is_ring() &&
          f.map[f.dom->t2[a * n + b]] !=
              f.cod->t2[f.map[a] * f.cod->n + f.map[b]])
        throw AxiomViolation(cat("morphism breaks * at (", a, ",", b, ")"));
    }
}

inline Morphism make_morphism(AlgPtr dom, AlgPtr cod, std::vector<int32_t> map) {
  Morphism f{std::move(dom), std::move(cod), std::move(map)};
  validate_morphism(f);
  return f;
}

inline Morphism identity_morphism(const AlgPtr& a) {
  std::vector<int32_t> m(a->n);
  std::iota(m.begin(), m.end(), 0);
  return Morphism{a, a, std::move(m)};
}

inline Morphism compose(const Morphism& g, const Morphism& f) {  // g after f
  if (!same_algebra(f.cod, g.dom)) throw AmbientMismatch("compose: cod(f) != dom(g)");
  std::vector<int32_t> m(f.dom->n);
  for (int x = 0; x < f.dom->n; ++x) m[x] = g.map[f.map[x]];
  return Morphism{f.dom, g.cod, std::move(m)};
}

inline bool is_injective(const Morphism& f) {
  std::vector<char> seen(f.cod->n, 0);
  for (auto v : f.map)
    if (seen[v]++) return false;
  return true;
}

inline bool is_surjective(const Morphism& f) {
  std::vector<char> seen(f.cod->n, 0);
  int cnt = 0;
  for (auto v : f.map)
    if (!seen[v]++) ++cnt;
  return cnt == f.cod->n;
}

inline bool is_isomorphism(const Morphism& f) {
  return f.dom->n == f.cod->n && is_injective(f);
}

// ---------------------------------------------------------------------------
// Subsets / normal subobjects

struct Subset {
  AlgPtr ambient;
  std::vector<int32_t> elems;  // sorted ascending, contains 0
};

inline Subset zero_sub(const AlgPtr& a) { return Subset{a, {0}}; }

inline Subset full_sub(const AlgPtr& a) {
  std::vector<int32_t> e(a->n);
  std::iota(e.begin(), e.end(), 0);
  return Subset{a, std::move(e)};
}

inline std::vector<char> member_mask(const Subset& s) {
  std::vector<char> m(s.ambient->n, 0);
  for (auto e : s.elems) m[e] = 1;
  return m;
}

inline bool subset_equal(const Subset& a, const Subset& b) {
  return same_algebra(a.ambient, b.ambient) && a.elems == b.elems;
}

inline bool subset_leq(const Subset& a, const Subset& b) {
  if (!same_algebra(a.ambient, b.ambient)) return false;
  return std::includes(b.elems.begin(), b.elems.end(), a.elems.begin(), a.elems.end());
}

inline std::vector<int32_t> normalize_elems(const AlgPtr& a, std::vector<int32_t> e) {
  e.push_back(0);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  if (!e.empty() && (e.front() < 0 || e.back() >= a->n))
    throw AxiomViolation("subset element out of range");
  return e;
}

inline bool is_subalgebra(const FiniteAlgebra& a, const std::vector<int32_t>& elems) {
  std::vector<char> in(a.n, 0);
  for (auto e : elems) in[e] = 1;
  if (!in[0]) return false;
  for (auto x : elems)
    for (auto y : elems) {
      if (!in[a.t1[x * a.n + y]]) return false;
      if (a.is_ring() && !in[a.t2[x * a.n + y]]) return false;
    }
  // Rings: a finite +-closed set is a subgroup, and *-closure was checked.
  // Groups/loops: a finite *-closed set containing 0 is a subobject.
  return true;
}

// Normality is the constructive "kernel of some quotient" condition:
// groups: conjugation-stable subgroup; rings: two-sided ideal; loops:
// subloop satisfying the three displacement conditions
//   x*K = K*x,  (x*K)*y = x*(K*y),  x*(y*K) = (x*y)*K.
inline bool is_normal(const FiniteAlgebra& a, const std::vector<int32_t>& elems,
                      std::string* why = nullptr) {
  int n = a.n;
  if (!is_subalgebra(a, elems)) {
    if (why) *why = "not a subalgebra";
    return false;
  }
  std::vector<char> in(n, 0);
  for (auto e : elems) in[e] = 1;
  switch (a.kind) {
    case Kind::group: {
      for (int g = 0; g < n; ++g) {
        int gi = a.nv[g];
        for (auto k : elems) {
          if (!in[a.t1[a.t1[gi * n + k] * n + g]]) {
            if (why) *why = cat("conjugate of ", k, " by ", g, " escapes");
            return false;
          }
        }
      }
      return true;
    }
    case Kind::ring: {
      for (int r = 0; r < n; ++r)
        for (auto k : elems) {
          if (!in[a.t2[r * n + k]] || !in[a.t2[k * n + r]]) {
            if (why) *why = cat("ideal absorption fails at r=", r, " k=", k);
            return false;
          }
        }
      return true;
    }
    case Kind::loop: {
      auto set_of = [&](auto&& gen) {
        std::vector<char> s(n, 0);
        for (auto k : elems) s[gen(k)] = 1;
        return s;
      };
      for (int x = 0; x < n; ++x) {
        auto l = set_of([&](int k) { return a.t1[x * n + k]; });
        auto r = set_of([&](int k) { return a.t1[k * n + x]; });
        if (l != r) {
          if (why) *why = cat("x*K != K*x at x=", x);
          return false;
        }
      }
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          auto l1 = set_of([&](int k) { return a.t1[a.t1[x * n + k] * n + y]; });
          auto r1 = set_of([&](int k) { return a.t1[x * n + a.t1[k * n + y]]; });
          if (l1 != r1) {
            if (why) *why = cat("(x*K)*y != x*(K*y) at x=", x, " y=", y);
            return false;
          }
          auto l2 = set_of([&](int k) { return a.t1[x * n + a.t1[y * n + k]]; });
          auto r2 = set_of([&](int k) { return a.t1[a.t1[x * n + y] * n + k]; });
          if (l2 != r2) {
            if (why) *why = cat("x*(y*K) != (x*y)*K at x=", x, " y=", y);
            return false;
          }
        }
      return true;
    }
  }
  return false;
}

inline Subset normal_subobject(const AlgPtr& a, std::vector<int32_t> elems) {
  auto e = normalize_elems(a, std::move(elems));
  std::string why;
  if (!is_normal(*a, e, &why)) throw NotNormal(why);
  return Subset{a, std::move(e)};
}

// Smallest normal subobject containing seed: saturation under the signature
// operations and the kind's normality rules until fixpoint.
inline Subset normal_closure(const AlgPtr& ap, const std::vector<int32_t>& seed) {
  const FiniteAlgebra& a = *ap;
  int n = a.n;
  std::vector<char> in(n, 0);
  std::vector<int32_t> s;
  auto push = [&](int e) {
    if (!in[e]) {
      in[e] = 1;
      s.push_back(e);
    }
  };
  push(0);
  for (auto e : seed) {
    if (e < 0 || e >= n) throw AxiomViolation("seed element out of range");
    push(e);
  }
  bool grew = true;
  while (grew) {
    size_t before = s.size();
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = 0; j < s.size(); ++j) {
        push(a.t1[s[i] * n + s[j]]);
        if (a.is_ring()) push(a.t2[s[i] * n + s[j]]);
      }
    for (size_t i = 0; i < s.size(); ++i) push(a.nv[s[i]]);
    switch (a.kind) {
      case Kind::group:
        for (int g = 0; g < n; ++g) {
          int gi = a.nv[g];
          for (size_t i = 0; i < s.size(); ++i) push(a.t1[a.t1[gi * n + s[i]] * n + g]);
        }
        break;
      case Kind::ring:
        for (int r = 0; r < n; ++r)
          for (size_t i = 0; i < s.size(); ++i) {
            push(a.t2[r * n + s[i]]);
            push(a.t2[s[i] * n + r]);
          }
        break;
      case Kind::loop:
        for (int x = 0; x < n; ++x)
          for (size_t i = 0; i < s.size(); ++i) {
            int k = s[i];
            push(a.rdiv(a.t1[x * n + k], x));
            push(a.ldiv(x, a.t1[k * n + x]));
          }
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            for (size_t i = 0; i < s.size(); ++i) {
              int k = s[i];
              push(a.rdiv(a.ldiv(x, a.t1[a.t1[x * n + k] * n + y]), y));
              push(a.ldiv(x, a.rdiv(a.t1[x * n + a.t1[k * n + y]], y)));
              push(a.ldiv(a.t1[x * n + y], a.t1[x * n + a.t1[y * n + k]]));
              push(a.ldiv(y, a.ldiv(x, a.t1[a.t1[x * n + y] * n + k])));
            }
        break;
    }
    grew = s.size() != before;
  }
  std::sort(s.begin(), s.end());
  std::string why;
  if (!is_normal(a, s, &why)) throw InternalMismatch(cat("normal closure is not normal: ", why));
  return Subset{ap, std::move(s)};
}

inline Subset join(const Subset& x, const Subset& y) {
  if (!same_algebra(x.ambient, y.ambient)) throw AmbientMismatch("join across ambients");
  std::vector<int32_t> u = x.elems;
  u.insert(u.end(), y.elems.begin(), y.elems.end());
  return normal_closure(x.ambient, u);
}

inline Subset meet(const Subset& x, const Subset& y) {
  if (!same_algebra(x.ambient, y.ambient)) throw AmbientMismatch("meet across ambients");
  std::vector<int32_t> out;
  std::set_intersection(x.elems.begin(), x.elems.end(), y.elems.begin(), y.elems.end(),
                        std::back_inserter(out));
  return Subset{x.ambient, std::move(out)};
}

inline Subset kernel(const Morphism& f) {
  std::vector<int32_t> e;
  for (int x = 0; x < f.dom->n; ++x)
    if (f.map[x] == 0) e.push_back(x);
  return Subset{f.dom, std::move(e)};
}

// All normal subobjects: every normal subobject is the join of the normal
// closures of its singletons, so close the atom set under binary joins.
inline std::vector<Subset> all_normal_subobjects(const AlgPtr& a) {
  std::set<std::vector<int32_t>> seen;
  std::vector<std::vector<int32_t>> work;
  auto add = [&](std::vector<int32_t> v) {
    if (seen.insert(v).second) work.push_back(std::move(v));
  };
  add({0});
  std::vector<std::vector<int32_t>> atoms;
  for (int x = 1; x < a->n; ++x) {
    auto nc = normal_closure(a, {x}).elems;
    if (seen.insert(nc).second) {
      atoms.push_back(nc);
      work.push_back(nc);
    }
  }
  for (size_t i = 0; i < work.size(); ++i) {
    auto cur = work[i];
    for (const auto& at : atoms) {
      if (std::includes(cur.begin(), cur.end(), at.begin(), at.end())) continue;
      auto u = cur;
      u.insert(u.end(), at.begin(), at.end());
      add(normal_closure(a, u).elems);
    }
  }
  std::vector<Subset> out;
  out.reserve(seen.size());
  for (const auto& v : seen) out.push_back(Subset{a, v});
  std::sort(out.begin(), out.end(), [](const Subset& x, const Subset& y) {
    if (x.elems.size() != y.elems.size()) return x.elems.size() < y.elems.size();
    return x.elems < y.elems;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Quotients and subalgebras

struct QuotientResult {
  AlgPtr obj;
  Morphism q;
};

// Quotient by a normal subobject. Cosets are re-verified to partition the
// carrier and to multiply consistently; any failure throws NotNormal (this is
// the constructive normality check for loops).
inline QuotientResult quotient(const AlgPtr& ap, const Subset& nsub) {
  if (!same_algebra(ap, nsub.ambient)) throw AmbientMismatch("quotient: subobject of a different algebra");
  const FiniteAlgebra& a = *ap;
  int n = a.n;
  {
    std::string why;
    if (!is_normal(a, nsub.elems, &why)) throw NotNormal(why);
  }
  std::vector<int32_t> cid(n, -1);
  std::vector<int32_t> reps;
  for (int x = 0; x < n; ++x) {
    if (cid[x] >= 0) continue;
    int id = (int)reps.size();
    reps.push_back(x);
    for (auto k : nsub.elems) {
      int y = a.t1[x * n + k];
      if (cid[y] == -1) cid[y] = id;
      else if (cid[y] != id) throw NotNormal(cat("cosets do not partition: element ", y));
    }
    if (cid[x] != id) throw NotNormal(cat("coset of ", x, " misses itself"));
  }
  int m = (int)reps.size();
  auto build = [&](const std::vector<int32_t>& t) {
    std::vector<int32_t> q((size_t)m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) q[i * m + j] = cid[t[reps[i] * n + reps[j]]];
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (q[cid[x] * m + cid[y]] != cid[t[x * n + y]])
          throw NotNormal(cat("coset operation ill-defined at (", x, ",", y, ")"));
    return q;
  };
  FiniteAlgebra qa;
  qa.kind = a.kind;
  qa.n = m;
  qa.t1 = build(a.t1);
  if (a.is_ring()) qa.t2 = build(a.t2);
  if (a.kind == Kind::loop) {
    try {
      validate_algebra(qa);
    } catch (const AxiomViolation& e) {
      throw NotNormal(cat("quotient is not a loop: ", e.what()));
    }
  }
  AlgPtr obj = detail::finish(std::move(qa), false, kMaxInternal);
  Morphism q{ap, obj, cid};
  if (!subset_equal(kernel(q), Subset{ap, nsub.elems}))
    throw InternalMismatch("quotient kernel differs from the given subobject");
  return {obj, std::move(q)};
}

struct SubalgebraResult {
  AlgPtr obj;
  Morphism incl;
};

inline SubalgebraResult subalgebra(const AlgPtr& ap, std::vector<int32_t> elems) {
  auto e = normalize_elems(ap, std::move(elems));
  if (!is_subalgebra(*ap, e)) throw AxiomViolation("subset is not closed under the operations");
  const FiniteAlgebra& a = *ap;
  int n = a.n, m = (int)e.size();
  std::vector<int32_t> pos(n, -1);
  for (int i = 0; i < m; ++i) pos[e[i]] = i;
  auto build = [&](const std::vector<int32_t>& t) {
    std::vector<int32_t> s((size_t)m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s[i * m + j] = pos[t[e[i] * n + e[j]]];
    return s;
  };
  FiniteAlgebra sa;
  sa.kind = a.kind;
  sa.n = m;
  sa.t1 = build(a.t1);
  if (a.is_ring()) sa.t2 = build(a.t2);
  AlgPtr obj = detail::finish(std::move(sa), false, kMaxInternal);
  Morphism incl{obj, ap, e};
  return {obj, std::move(incl)};
}

inline SubalgebraResult image(const Morphism& f) {
  std::vector<int32_t> e(f.map.begin(), f.map.end());
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return subalgebra(f.cod, std::move(e));
}

inline Subset direct_image(const Morphism& f, const Subset& nsub) {
  if (!same_algebra(f.dom, nsub.ambient)) throw AmbientMismatch("direct_image: subobject not in dom");
  if (!is_surjective(f)) throw NotSurjective("direct_image needs a surjection");
  std::vector<int32_t> e;
  e.reserve(nsub.elems.size());
  for (auto x : nsub.elems) e.push_back(f.map[x]);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  std::string why;
  if (!is_normal(*f.cod, e, &why))
    throw InternalMismatch(cat("direct image of a normal subobject is not normal: ", why));
  return Subset{f.cod, std::move(e)};
}

inline Subset preimage(const Morphism& f, const Subset& nsub) {
  if (!same_algebra(f.cod, nsub.ambient)) throw AmbientMismatch("preimage: subobject not in cod");
  auto mask = member_mask(nsub);
  std::vector<int32_t> e;
  for (int x = 0; x < f.dom->n; ++x)
    if (mask[f.map[x]]) e.push_back(x);
  return Subset{f.dom, std::move(e)};
}

// ---------------------------------------------------------------------------
// Kernel pairs, pullbacks, products

struct PairedAlgebra {
  AlgPtr obj;
  Morphism p1, p2;
  std::vector<std::pair<int32_t, int32_t>> pairs;  // index -> (a, b)
};

namespace detail {

inline PairedAlgebra pair_algebra(const AlgPtr& A, const AlgPtr& B,
                                  const std::function<bool(int, int)>& keep) {
  if (A->kind != B->kind) throw AmbientMismatch("paired construction across kinds");
  std::vector<std::pair<int32_t, int32_t>> pairs;
  std::vector<int32_t> idx((size_t)A->n * B->n, -1);
  for (int x = 0; x < A->n; ++x)
    for (int y = 0; y < B->n; ++y)
      if (keep(x, y)) {
        idx[(size_t)x * B->n + y] = (int)pairs.size();
        pairs.emplace_back(x, y);
      }
  int m = (int)pairs.size();
  if (m > kMaxInternal) throw TooLarge(cat("paired construction of size ", m));
  if (m == 0 || pairs[0] != std::make_pair<int32_t, int32_t>(0, 0))
    throw InternalMismatch("paired construction lost the point");
  auto build = [&](const std::vector<int32_t>& tA, const std::vector<int32_t>& tB) {
    std::vector<int32_t> t((size_t)m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        int x = tA[pairs[i].first * A->n + pairs[j].first];
        int y = tB[pairs[i].second * B->n + pairs[j].second];
        int k = idx[(size_t)x * B->n + y];
        if (k < 0) throw InternalMismatch("paired carrier is not closed");
        t[i * m + j] = k;
      }
    return t;
  };
  FiniteAlgebra pa;
  pa.kind = A->kind;
  pa.n = m;
  pa.t1 = build(A->t1, B->t1);
  if (A->is_ring()) pa.t2 = build(A->t2, B->t2);
  AlgPtr obj = finish(std::move(pa), false, kMaxInternal);
  std::vector<int32_t> m1(m), m2(m);
  for (int i = 0; i < m; ++i) {
    m1[i] = pairs[i].first;
    m2[i] = pairs[i].second;
  }
  return PairedAlgebra{obj, Morphism{obj, A, std::move(m1)}, Morphism{obj, B, std::move(m2)},
                       std::move(pairs)};
}

}  // namespace detail

struct KernelPair {
  AlgPtr obj;
  Morphism p1, p2;
  Morphism diag;  // A -> obj, a |-> (a,a)
  std::vector<std::pair<int32_t, int32_t>> pairs;
};

inline KernelPair kernel_pair(const Morphism& f) {
  auto pa = detail::pair_algebra(f.dom, f.dom,
                                 [&](int x, int y) { return f.map[x] == f.map[y]; });
  std::vector<int32_t> idx((size_t)f.dom->n * f.dom->n, -1);
  for (size_t i = 0; i < pa.pairs.size(); ++i)
    idx[(size_t)pa.pairs[i].first * f.dom->n + pa.pairs[i].second] = (int)i;
  std::vector<int32_t> d(f.dom->n);
  for (int x = 0; x < f.dom->n; ++x) d[x] = idx[(size_t)x * f.dom->n + x];
  return KernelPair{pa.obj, pa.p1, pa.p2, Morphism{f.dom, pa.obj, std::move(d)}, pa.pairs};
}

struct PullbackResult {
  AlgPtr obj;
  Morphism p1, p2;  // obj -> dom(f), obj -> dom(g)
  std::vector<std::pair<int32_t, int32_t>> pairs;
};

inline PullbackResult pullback(const Morphism& f, const Morphism& g) {
  if (!same_algebra(f.cod, g.cod)) throw AmbientMismatch("pullback: different codomains");
  auto pa = detail::pair_algebra(f.dom, g.dom,
                                 [&](int x, int y) { return f.map[x] == g.map[y]; });
  return PullbackResult{pa.obj, pa.p1, pa.p2, pa.pairs};
}

inline PullbackResult product(const AlgPtr& a, const AlgPtr& b) {
  if (a->kind != b->kind) throw AmbientMismatch("product across kinds");
  AlgPtr t = trivial_algebra(a->kind);
  Morphism za{a, t, std::vector<int32_t>(a->n, 0)};
  Morphism zb{b, t, std::vector<int32_t>(b->n, 0)};
  return pullback(za, zb);
}

// True iff (f1, f2) exhibits P as the pullback of g1, g2: the square commutes
// and p |-> (f1 p, f2 p) is a bijection onto the fibre product carrier.
inline bool is_pullback_square(const Morphism& f1, const Morphism& f2, const Morphism& g1,
                               const Morphism& g2) {
  if (!same_algebra(f1.dom, f2.dom) || !same_algebra(f1.cod, g1.dom) ||
      !same_algebra(f2.cod, g2.dom) || !same_algebra(g1.cod, g2.cod))
    throw AmbientMismatch("is_pullback_square: shape mismatch");
  int np = f1.dom->n;
  for (int p = 0; p < np; ++p)
    if (g1.map[f1.map[p]] != g2.map[f2.map[p]]) return false;
  int64_t fibre = 0;
  for (int a = 0; a < g1.dom->n; ++a)
    for (int b = 0; b < g2.dom->n; ++b)
      if (g1.map[a] == g2.map[b]) ++fibre;
  if (fibre != np) return false;
  std::set<std::pair<int32_t, int32_t>> seen;
  for (int p = 0; p < np; ++p)
    if (!seen.insert({f1.map[p], f2.map[p]}).second) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Short exact sequences

struct ShortExactSequence {
  Morphism k;  // K -> A
  Morphism f;  // A -> B
  std::optional<Morphism> s;  // section of f, if known
};

// ---------------------------------------------------------------------------
// Homomorphism search

struct HomOpts {
  bool surjective_only = false;
  bool injective_only = false;
  size_t limit = 0;  // stop after this many hits (0 = all)
  // Extra per-element candidate filter: allowed(x in dom, y in cod).
  std::function<bool(int, int)> allowed;
};

namespace detail {

// t1 order of x: size of the cyclic subobject generated via t1 (groups and
// ring additions are associative, loops fall back to subloop size).
inline std::vector<int> t1_orders(const FiniteAlgebra& a) {
  std::vector<int> ord(a.n, 1);
  for (int x = 0; x < a.n; ++x) {
    if (a.kind == Kind::loop) {
      std::vector<char> in(a.n, 0);
      std::vector<int> s{0, x};
      in[0] = in[x] = 1;
      bool grew = true;
      while (grew) {
        grew = false;
        size_t sz = s.size();
        for (size_t i = 0; i < sz; ++i)
          for (size_t j = 0; j < sz; ++j) {
            int v = a.t1[s[i] * a.n + s[j]];
            if (!in[v]) {
              in[v] = 1;
              s.push_back(v);
              grew = true;
            }
          }
      }
      ord[x] = (int)s.size();
    } else {
      int k = 1, cur = x;
      while (cur != 0) {
        cur = a.t1[cur * a.n + x];
        ++k;
      }
      ord[x] = k;
    }
  }
  return ord;
}

struct HomSearch {
  const FiniteAlgebra& A;
  const FiniteAlgebra& B;
  const HomOpts& opts;
  std::vector<int> ordA, ordB;
  std::vector<int32_t> img;
  std::vector<int32_t> assigned;  // dom elements with img set, in assignment order
  std::vector<char> used;         // cod elements used (for injective mode)
  const std::function<bool(const std::vector<int32_t>&)>& cb;
  size_t hits = 0;
  bool stop = false;

  HomSearch(const FiniteAlgebra& a, const FiniteAlgebra& b, const HomOpts& o,
            const std::function<bool(const std::vector<int32_t>&)>& c)
      : A(a), B(b), opts(o), cb(c) {
    ordA = t1_orders(A);
    ordB = t1_orders(B);
    img.assign(A.n, -1);
    used.assign(B.n, 0);
  }

  bool candidate_ok(int x, int y) const {
    // ordB[y] | ordA[x] for any hom: <f(x)> is a quotient of <x> in all
    // three signatures (normal-subloop cosets have equal size).
    if (opts.injective_only && (used[y] || ordA[x] != ordB[y])) return false;
    if (!opts.injective_only && ordA[x] % ordB[y] != 0) return false;
    if (opts.allowed && !opts.allowed(x, y)) return false;
    return true;
  }

  // Assign img[x] = y and propagate all forced products. Returns the trail
  // length before the assignment so the caller can undo, or -1 on conflict.
  int assign(int x, int y) {
    int mark = (int)assigned.size();
    if (!force(x, y)) {
      undo(mark);
      return -1;
    }
    size_t i = mark;
    while (i < assigned.size()) {
      int a = assigned[i++];
      size_t cnt = assigned.size();
      for (size_t j = 0; j < cnt && j < assigned.size(); ++j) {
        int b = assigned[j];
        if (!force(A.t1[a * A.n + b], B.t1[img[a] * B.n + img[b]]) ||
            !force(A.t1[b * A.n + a], B.t1[img[b] * B.n + img[a]])) {
          undo(mark);
          return -1;
        }
        if (A.is_ring()) {
          if (!force(A.t2[a * A.n + b], B.t2[img[a] * B.n + img[b]]) ||
              !force(A.t2[b * A.n + a], B.t2[img[b] * B.n + img[a]])) {
            undo(mark);
            return -1;
          }
        } else {
          if (!force(A.ld[a * A.n + b], B.ld[img[a] * B.n + img[b]]) ||
              !force(A.ld[b * A.n + a], B.ld[img[b] * B.n + img[a]]) ||
              !force(A.rd[a * A.n + b], B.rd[img[a] * B.n + img[b]]) ||
              !force(A.rd[b * A.n + a], B.rd[img[b] * B.n + img[a]])) {
            undo(mark);
            return -1;
          }
        }
      }
    }
    return mark;
  }

  bool force(int x, int y) {
    if (img[x] == y) return true;
    if (img[x] != -1) return false;
    if (opts.injective_only && used[y]) return false;
    img[x] = y;
    if (opts.injective_only) used[y] = 1;
    assigned.push_back(x);
    return true;
  }

  void undo(int mark) {
    while ((int)assigned.size() > mark) {
      int x = assigned.back();
      assigned.pop_back();
      if (opts.injective_only) used[img[x]] = 0;
      img[x] = -1;
    }
  }

  void run() {
    int mark = assign(0, 0);
    if (mark < 0) return;
    recurse();
  }

  void recurse() {
    if (stop) return;
    int x = -1;
    for (int i = 1; i < A.n; ++i)
      if (img[i] == -1) {
        x = i;
        break;
      }
    if (x == -1) {
      if (opts.surjective_only) {
        std::vector<char> seen(B.n, 0);
        int cnt = 0;
        for (auto v : img)
          if (!seen[v]++) ++cnt;
        if (cnt != B.n) return;
      }
      ++hits;
      if (!cb(img)) stop = true;
      if (opts.limit && hits >= opts.limit) stop = true;
      return;
    }
    for (int y = 0; y < B.n; ++y) {
      if (!candidate_ok(x, y)) continue;
      int mark = assign(x, y);
      if (mark < 0) continue;
      recurse();
      undo(mark);
      if (stop) return;
    }
  }
};

}  // namespace detail

// Enumerates morphisms A -> B in a deterministic order; cb returns false to
// stop early. Returns the number of morphisms visited.
inline size_t for_each_hom(const AlgPtr& A, const AlgPtr& B, const HomOpts& opts,
                           const std::function<bool(const std::vector<int32_t>&)>& cb) {
  if (A->kind != B->kind) throw AmbientMismatch("hom search across kinds");
  detail::HomSearch hs(*A, *B, opts, cb);
  hs.run();
  return hs.hits;
}

inline std::vector<Morphism> all_morphisms(const AlgPtr& A, const AlgPtr& B, HomOpts opts = {}) {
  std::vector<Morphism> out;
  for_each_hom(A, B, opts, [&](const std::vector<int32_t>& m) {
    out.push_back(Morphism{A, B, m});
    return true;
  });
  return out;
}

inline std::vector<Morphism> all_surjections(const AlgPtr& A, const AlgPtr& B) {
  HomOpts o;
  o.surjective_only = true;
  return all_morphisms(A, B, o);
}

inline std::optional<Morphism> find_section(const Morphism& f) {
  if (!is_surjective(f)) return std::nullopt;
  HomOpts o;
  o.allowed = [&f](int b, int a) { return f.map[a] == b; };
  std::optional<Morphism> out;
  for_each_hom(f.cod, f.dom, o, [&](const std::vector<int32_t>& m) {
    out = Morphism{f.cod, f.dom, m};
    return false;
  });
  return out;
}

// Mono + regular epi + exactness at the middle + (stored or searched) section.
inline bool is_split_exact(const ShortExactSequence& seq) {
  if (!same_algebra(seq.k.cod, seq.f.dom)) throw AmbientMismatch("sequence endpoints disagree");
  if (!is_injective(seq.k)) return false;
  if (!is_surjective(seq.f)) return false;
  std::vector<int32_t> im(seq.k.map.begin(), seq.k.map.end());
  std::sort(im.begin(), im.end());
  if (im != kernel(seq.f).elems) return false;
  if (seq.s) {
    const Morphism& s = *seq.s;
    if (!same_algebra(s.dom, seq.f.cod) || !same_algebra(s.cod, seq.f.dom)) return false;
    for (int b = 0; b < s.dom->n; ++b)
      if (seq.f.map[s.map[b]] != b) return false;
    return true;
  }
  return find_section(seq.f).has_value();
}

inline std::optional<std::vector<int32_t>> find_isomorphism(const AlgPtr& A, const AlgPtr& B) {
  if (A->kind != B->kind || A->n != B->n) return std::nullopt;
  HomOpts o;
  o.injective_only = true;
  std::optional<std::vector<int32_t>> out;
  for_each_hom(A, B, o, [&](const std::vector<int32_t>& m) {
    out = m;
    return false;
  });
  return out;
}

inline bool isomorphic(const AlgPtr& A, const AlgPtr& B) {
  return find_isomorphism(A, B).has_value();
}

// ---------------------------------------------------------------------------
// Canonical labels

// Order-insensitive invariant string; equal labels are necessary but not
// sufficient for isomorphism.
inline std::string fingerprint(const FiniteAlgebra& a) {
  auto ord = detail::t1_orders(a);
  std::vector<std::string> locals(a.n);
  for (int x = 0; x < a.n; ++x) {
    if (a.kind == Kind::ring) {
      int nil = 0, cur = x;
      for (int k = 1; k <= a.n + 1; ++k) {
        if (cur == 0) {
          nil = k;
          break;
        }
        cur = a.t2[cur * a.n + x];
      }
      int ann = 0;
      for (int y = 0; y < a.n; ++y)
        if (a.t2[x * a.n + y] == 0 && a.t2[y * a.n + x] == 0) ++ann;
      locals[x] = cat(ord[x], ".", nil, ".", ann);
    } else {
      // Cycle type of the left translation by x.
      std::vector<char> seen(a.n, 0);
      std::vector<int> cyc;
      for (int s = 0; s < a.n; ++s) {
        if (seen[s]) continue;
        int len = 0, cur = s;
        while (!seen[cur]) {
          seen[cur] = 1;
          cur = a.t1[x * a.n + cur];
          ++len;
        }
        cyc.push_back(len);
      }
      std::sort(cyc.begin(), cyc.end());
      std::string c;
      for (auto l : cyc) c += cat(l, ",");
      locals[x] = cat(ord[x], ":", c);
    }
  }
  std::sort(locals.begin(), locals.end());
  int centre = 0;
  for (int z = 0; z < a.n; ++z) {
    bool ok = true;
    for (int x = 0; x < a.n && ok; ++x) {
      ok = a.t1[z * a.n + x] == a.t1[x * a.n + z];
      if (ok && a.is_ring()) ok = a.t2[z * a.n + x] == a.t2[x * a.n + z];
    }
    if (ok) ++centre;
  }
  std::string body = cat(kind_name(a.kind), a.n, ";c", centre, ";");
  for (auto& s : locals) body += s + "|";
  return cat("fp", a.n, ":", hex64(fnv1a64(body)));
}

// Canonical label: lexicographically minimal relabelled table over all
// point-preserving bijections (exact up to canonical_bound), fingerprint
// above the bound.
inline std::string iso_type(const FiniteAlgebra& a, int canonical_bound = 10) {
  if (a.n > canonical_bound) return fingerprint(a);
  int n = a.n;
  std::vector<int32_t> perm(n);  // old -> new
  std::vector<int32_t> inv(n);   // new -> old
  std::iota(inv.begin(), inv.end(), 0);
  std::vector<int32_t> best;
  auto flatten = [&](const std::vector<int32_t>& newToOld, std::vector<int32_t>& out) {
    for (int i = 0; i < n; ++i) perm[newToOld[i]] = i;
    out.clear();
    out.reserve((size_t)n * n * (a.is_ring() ? 2 : 1));
    bool maybe_better = best.empty();
    size_t pos = 0;
    auto push = [&](int v) {
      out.push_back(v);
      if (!maybe_better && !best.empty()) {
        if (v < best[pos]) maybe_better = true;
        else if (v > best[pos]) return false;
      }
      ++pos;
      return true;
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!push(perm[a.t1[inv[i] * n + inv[j]]])) return false;
    if (a.is_ring())
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!push(perm[a.t2[inv[i] * n + inv[j]]])) return false;
    return true;
  };
  std::vector<int32_t> cur;
  do {
    if (flatten(inv, cur) && (best.empty() || cur < best)) best = cur;
  } while (std::next_permutation(inv.begin() + 1, inv.end()));
  std::string s = cat(kind_name(a.kind)[0], n, ":");
  static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  for (auto v : best) s += digits[v];
  return s;
}

inline std::string iso_type(const AlgPtr& a, int canonical_bound = 10) {
  return iso_type(*a, canonical_bound);
}

// ---------------------------------------------------------------------------
// Factorisation helpers

// Given surjective p: X -> Q and g: X -> T with ker p <= ker g elementwise,
// the unique induced Q -> T; throws InternalMismatch if ill-defined.
inline Morphism induce_through(const Morphism& p, const Morphism& g) {
  if (!same_algebra(p.dom, g.dom)) throw AmbientMismatch("induce_through: different domains");
  if (!is_surjective(p)) throw NotSurjective("induce_through needs a surjective p");
  std::vector<int32_t> m(p.cod->n, -1);
  for (int x = 0; x < p.dom->n; ++x) {
    int q = p.map[x];
    if (m[q] == -1) m[q] = g.map[x];
    else if (m[q] != g.map[x])
      throw InternalMismatch(cat("map does not factor: elements over ", q, " disagree"));
  }
  return Morphism{p.cod, g.cod, std::move(m)};
}

inline bool is_abelian_t1(const FiniteAlgebra& a) {
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < x; ++y)
      if (a.t1[x * a.n + y] != a.t1[y * a.n + x]) return false;
  return true;
}

inline bool is_commutative_mul(const FiniteAlgebra& a) {
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < x; ++y)
      if (a.t2[x * a.n + y] != a.t2[y * a.n + x]) return false;
  return true;
}

inline bool is_associative_t1(const FiniteAlgebra& a) {
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < a.n; ++y) {
      int xy = a.t1[x * a.n + y];
      for (int z = 0; z < a.n; ++z)
        if (a.t1[xy * a.n + z] != a.t1[x * a.n + a.t1[y * a.n + z]]) return false;
    }
  return true;
}

inline std::string fingerprint(const AlgPtr& a) { return fingerprint(*a); }
inline bool is_abelian_t1(const AlgPtr& a) { return is_abelian_t1(*a); }
inline bool is_commutative_mul(const AlgPtr& a) { return is_commutative_mul(*a); }
inline bool is_associative_t1(const AlgPtr& a) { return is_associative_t1(*a); }

}  // namespace galkit
