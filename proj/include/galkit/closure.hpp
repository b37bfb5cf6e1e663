#pragma once

// The closure operator a reflection induces on normal subobjects, computed
// through the pullback definition: close(K <= A) is the preimage under
// q: A -> A/K of the kernel of the unit at A/K. The axiom suite and the
// Fermeture checks are templated over a "world" so the same code path runs
// over finite tables (FinWorld) and presented f.g. abelian groups (AbTfWorld).
//
// A world W provides:
//   types Obj, Sub, Mor, Quot{obj,q}
//   name, birkhoff
//   admits(Obj), unit(Obj)->Mor, quot(Obj,Sub)->Quot
//   kernel_of(Mor), preimage_of(Mor,Sub), join_of(Sub,Sub), zero_of(Obj)
//   leq, eq on Sub; is_epi(Mor)
//   subs(Obj) -> vector<Sub>       (complete for finite, sampled for fgab)
//   homs(Obj from, Obj to, exhaustive_max, limit, seed) -> vector<Mor>
//   label_obj(Obj), label_sub(Sub)

#include <atomic>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "galkit/abworld.hpp"
#include "galkit/finalg.hpp"
#include "galkit/reflect.hpp"
#include "galkit/util.hpp"

namespace galkit {

template <class W>
typename W::Sub close(const W& w, const typename W::Obj& a, const typename W::Sub& k) {
  auto q = w.quot(a, k);
  return w.preimage_of(q.q, w.kernel_of(w.unit(q.obj)));
}

// Birkhoff shortcut K v close(0). Cross-check only; never the primary path.
template <class W>
typename W::Sub close_by_join(const W& w, const typename W::Obj& a, const typename W::Sub& k) {
  return w.join_of(k, close(w, a, w.zero_of(a)));
}

// ---------------------------------------------------------------------------
// Worlds

struct FinWorld {
  using Obj = AlgPtr;
  using Sub = Subset;
  using Mor = Morphism;
  struct Quot {
    Obj obj;
    Mor q;
  };

  std::string name;
  bool birkhoff = false;
  std::function<bool(const AlgPtr&)> admits_fn;
  std::function<Reflection(const AlgPtr&)> reflect_fn;

  bool admits(const Obj& a) const { return !admits_fn || admits_fn(a); }
  Mor unit(const Obj& a) const { return reflect_fn(a).unit; }
  Quot quot(const Obj& a, const Sub& k) const {
    auto r = galkit::quotient(a, Subset{a, k.elems});
    return {r.obj, r.q};
  }
  Sub kernel_of(const Mor& f) const { return galkit::kernel(f); }
  Sub preimage_of(const Mor& f, const Sub& s) const { return galkit::preimage(f, s); }
  Sub join_of(const Sub& x, const Sub& y) const { return galkit::join(x, y); }
  Sub zero_of(const Obj& a) const { return zero_sub(a); }
  bool leq(const Sub& x, const Sub& y) const { return subset_leq(x, y); }
  bool eq(const Sub& x, const Sub& y) const { return x.elems == y.elems; }
  bool is_epi(const Mor& f) const { return is_surjective(f); }
  std::vector<Sub> subs(const Obj& a) const { return all_normal_subobjects(a); }
  std::vector<Mor> homs(const Obj& from, const Obj& to, int exhaustive_max, size_t limit,
                        uint64_t) const {
    HomOpts opts;
    if (from->n > exhaustive_max || to->n > exhaustive_max) opts.limit = limit;
    return all_morphisms(from, to, opts);
  }
  std::string label_obj(const Obj& a) const { return iso_type(a); }
  std::string label_sub(const Sub& s) const {
    std::string out = "{";
    for (size_t i = 0; i < s.elems.size(); ++i) out += (i ? "," : "") + std::to_string(s.elems[i]);
    return out + "}";
  }
};

inline FinWorld fin_world(const Reflector& r) {
  return FinWorld{r.name, r.birkhoff, r.admits, r.reflect};
}

inline FinWorld fin_world(const CompositeAdjunction& g) {
  bool birkhoff = g.inner.birkhoff && g.outer.name == "id";
  return FinWorld{g.name, birkhoff, [g](const AlgPtr& a) { return g.admits(a); },
                  [g](const AlgPtr& a) { return g.reflect(a); }};
}

struct AbTfWorld {
  using Obj = PresAb;
  using Sub = PresSub;
  using Mor = PresMor;
  struct Quot {
    Obj obj;
    Mor q;
  };

  std::string name = "tf";
  bool birkhoff = false;
  int sub_count = 6;
  int hom_count = 8;
  uint64_t seed = 20260815ull;

  bool admits(const Obj&) const { return true; }
  Mor unit(const Obj& a) const { return pres_tf_unit(a); }
  Quot quot(const Obj& a, const Sub& s) const {
    auto r = pres_quotient(a, s);
    return {r.obj, r.q};
  }
  Sub kernel_of(const Mor& f) const { return pres_kernel(f); }
  Sub preimage_of(const Mor& f, const Sub& s) const { return pres_preimage(f, s); }
  Sub join_of(const Sub& x, const Sub& y) const { return pres_join(x, y); }
  Sub zero_of(const Obj& a) const { return pres_zero(a); }
  bool leq(const Sub& x, const Sub& y) const { return pres_sub_leq(x, y); }
  bool eq(const Sub& x, const Sub& y) const { return pres_sub_eq(x, y); }
  bool is_epi(const Mor& f) const { return pres_is_surjective(f); }
  std::vector<Sub> subs(const Obj& a) const {
    return pres_sub_sample(a, sub_count, seed ^ fnv1a64(to_string(a.rel)));
  }
  std::vector<Mor> homs(const Obj& from, const Obj& to, int, size_t, uint64_t salt) const {
    return pres_hom_sample(from, to, hom_count, seed ^ salt);
  }
  std::string label_obj(const Obj& a) const { return to_string(a); }
  std::string label_sub(const Sub& s) const { return to_string(s.lat); }
};

// ---------------------------------------------------------------------------
// Reports

struct ClosureViolation {
  std::string axiom;
  std::string where;
  std::string witness;
};

struct SuiteOpts {
  int jobs = 0;             // 0 = one thread per hardware core
  int exhaustive_max = 8;   // full hom search when both objects are this small
  size_t hom_limit = 150;   // sampled homs per pair above that
  uint64_t seed = 1;
};

struct SuiteReport {
  std::string reflector;
  std::string suite;
  uint64_t checks = 0;
  std::vector<ClosureViolation> violations;
  std::vector<std::string> strict_witnesses;  // fermeture, non-Birkhoff only
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline unsigned resolve_jobs(int jobs) {
  if (jobs > 0) return (unsigned)jobs;
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

inline void sort_violations(std::vector<ClosureViolation>& v) {
  std::sort(v.begin(), v.end(), [](const ClosureViolation& a, const ClosureViolation& b) {
    return std::tie(a.axiom, a.where, a.witness) < std::tie(b.axiom, b.where, b.witness);
  });
}

// Closure memo per ambient object; key = printed subobject.
template <class W>
struct CloseCache {
  const W& w;
  const typename W::Obj& obj;
  std::map<std::string, typename W::Sub> memo;

  const typename W::Sub& get(const typename W::Sub& k) {
    auto key = w.label_sub(k);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, close(w, obj, k)).first;
    return it->second;
  }
};

}  // namespace detail

// Runs the five closure-operator axioms over every admitted corpus object.
// Axiom (3) runs over hom samples between corpus pairs (exhaustive at small
// sizes), (5) over those homs that are epi and over all quotient projections.
template <class W>
SuiteReport axiom_suite(const W& w, const std::vector<typename W::Obj>& corpus,
                        SuiteOpts opts = {}) {
  using Sub = typename W::Sub;
  SuiteReport rep{w.name, "closure-axioms"};

  std::vector<typename W::Obj> objs;
  std::vector<std::string> labels;
  for (size_t i = 0; i < corpus.size(); ++i)
    if (w.admits(corpus[i])) {
      objs.push_back(corpus[i]);
      labels.push_back(cat("#", i, " ", w.label_obj(corpus[i])));
    }
  const size_t n = objs.size();

  std::vector<std::vector<Sub>> subs(n), cls(n);
  std::atomic<uint64_t> checks{0};

  // Per-object phase: enumerate subobjects, close them, check (1), (2), (4).
  const unsigned jobs = detail::resolve_jobs(opts.jobs);
  std::vector<std::vector<ClosureViolation>> found(n);
  parallel_for(n, jobs, [&](size_t i) {
    detail::CloseCache<W> cache{w, objs[i], {}};
    subs[i] = w.subs(objs[i]);
    auto& viol = found[i];
    for (const auto& k : subs[i]) cls[i].push_back(cache.get(k));
    for (size_t j = 0; j < subs[i].size(); ++j) {
      checks += 2;
      if (!w.leq(subs[i][j], cls[i][j]))
        viol.push_back({"1", labels[i], cat("K=", w.label_sub(subs[i][j]))});
      if (!w.eq(cache.get(cls[i][j]), cls[i][j]))
        viol.push_back({"4", labels[i], cat("K=", w.label_sub(subs[i][j]))});
      for (size_t l = 0; l < subs[i].size(); ++l) {
        if (l == j) continue;
        ++checks;
        if (w.leq(subs[i][j], subs[i][l]) && !w.leq(cls[i][j], cls[i][l]))
          viol.push_back(
              {"2", labels[i],
               cat("K=", w.label_sub(subs[i][j]), " L=", w.label_sub(subs[i][l]))});
      }
    }
  });

  // Pair phase: (3) for every sampled f: B -> A, (5) when f is epi.
  const size_t pairs = n * n;
  std::vector<std::vector<ClosureViolation>> pfound(pairs);
  parallel_for(pairs, jobs, [&](size_t pi) {
    size_t b = pi / n, a = pi % n;
    auto homs = w.homs(objs[b], objs[a], opts.exhaustive_max, opts.hom_limit,
                       opts.seed * 0x9e3779b97f4a7c15ull + pi);
    if (homs.empty()) return;
    detail::CloseCache<W> cache{w, objs[b], {}};
    auto& viol = pfound[pi];
    for (const auto& f : homs) {
      bool epi = w.is_epi(f);
      for (size_t j = 0; j < subs[a].size(); ++j) {
        ++checks;
        auto pre = w.preimage_of(f, subs[a][j]);
        const auto& cpre = cache.get(pre);
        auto precl = w.preimage_of(f, cls[a][j]);
        if (!w.leq(cpre, precl))
          viol.push_back({"3", cat(labels[b], " -> ", labels[a]),
                          cat("K=", w.label_sub(subs[a][j]))});
        if (epi) {
          ++checks;
          if (!w.eq(cpre, precl))
            viol.push_back({"5", cat(labels[b], " ->> ", labels[a]),
                            cat("K=", w.label_sub(subs[a][j]))});
        }
      }
    }
  });

  // Quotient-projection phase for (5): g: B ->> B/L for every enumerated L.
  std::vector<std::vector<ClosureViolation>> qfound(n);
  parallel_for(n, jobs, [&](size_t i) {
    detail::CloseCache<W> cache{w, objs[i], {}};
    auto& viol = qfound[i];
    for (const auto& l : subs[i]) {
      auto q = w.quot(objs[i], l);
      detail::CloseCache<W> qcache{w, q.obj, {}};
      for (const auto& k : w.subs(q.obj)) {
        ++checks;
        auto pre = w.preimage_of(q.q, k);
        if (!w.eq(cache.get(pre), w.preimage_of(q.q, qcache.get(k))))
          viol.push_back({"5", cat(labels[i], " ->> ", labels[i], "/", w.label_sub(l)),
                          cat("K=", w.label_sub(k))});
      }
    }
  });

  for (auto* group : {&found, &pfound, &qfound})
    for (auto& v : *group)
      rep.violations.insert(rep.violations.end(), v.begin(), v.end());
  detail::sort_violations(rep.violations);
  rep.checks = checks.load();
  return rep;
}

// Lemma checks: (1) closing K v close(0) changes nothing; (2) the Birkhoff
// join formula, exact for Birkhoff reflectors, with strict-containment
// witnesses collected otherwise; (3) join distributivity in the Birkhoff case.
template <class W>
SuiteReport fermeture_checks(const W& w, const std::vector<typename W::Obj>& corpus,
                             SuiteOpts opts = {}) {
  using Sub = typename W::Sub;
  SuiteReport rep{w.name, "fermeture"};

  std::vector<typename W::Obj> objs;
  std::vector<std::string> labels;
  for (size_t i = 0; i < corpus.size(); ++i)
    if (w.admits(corpus[i])) {
      objs.push_back(corpus[i]);
      labels.push_back(cat("#", i, " ", w.label_obj(corpus[i])));
    }
  const size_t n = objs.size();
  std::atomic<uint64_t> checks{0};
  std::vector<std::vector<ClosureViolation>> found(n);
  std::vector<std::vector<std::string>> strict(n);

  parallel_for(n, detail::resolve_jobs(opts.jobs), [&](size_t i) {
    detail::CloseCache<W> cache{w, objs[i], {}};
    auto& viol = found[i];
    auto subs = w.subs(objs[i]);
    const Sub c0 = cache.get(w.zero_of(objs[i]));
    std::vector<Sub> closed;
    for (const auto& k : subs) closed.push_back(cache.get(k));
    for (size_t j = 0; j < subs.size(); ++j) {
      const auto& k = subs[j];
      const auto& ck = closed[j];
      auto kj = w.join_of(k, c0);
      ++checks;
      if (!w.eq(cache.get(kj), ck))
        viol.push_back({"F1", labels[i], cat("K=", w.label_sub(k))});
      ++checks;
      if (!w.leq(kj, ck)) {
        viol.push_back({"F2", labels[i], cat("K v cl0 above clK at K=", w.label_sub(k))});
      } else if (!w.eq(kj, ck)) {
        if (w.birkhoff)
          viol.push_back({"F2", labels[i], cat("K=", w.label_sub(k))});
        else
          strict[i].push_back(cat(labels[i], " K=", w.label_sub(k), ": K v cl0 = ",
                                  w.label_sub(kj), " < clK = ", w.label_sub(ck)));
      }
      if (w.birkhoff)
        for (size_t l = j + 1; l < subs.size(); ++l) {
          ++checks;
          auto lhs = cache.get(w.join_of(k, subs[l]));
          auto rhs = w.join_of(ck, closed[l]);
          if (!w.eq(lhs, rhs))
            viol.push_back({"F3", labels[i],
                            cat("K=", w.label_sub(k), " L=", w.label_sub(subs[l]))});
        }
    }
  });

  for (auto& v : found) rep.violations.insert(rep.violations.end(), v.begin(), v.end());
  for (auto& s : strict)
    rep.strict_witnesses.insert(rep.strict_witnesses.end(), s.begin(), s.end());
  detail::sort_violations(rep.violations);
  std::sort(rep.strict_witnesses.begin(), rep.strict_witnesses.end());
  rep.checks = checks.load();
  return rep;
}

}  // namespace galkit
