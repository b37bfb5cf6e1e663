// Acceptance gate: nine end-to-end criteria, one PASS/FAIL line each, exit
// code equal to the number of failures. An optional argument 1..9 runs a
// single criterion (used by the per-criterion ctest entries).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <galkit/cohom.hpp>
#include <galkit/corpus.hpp>
#include <galkit/hopf.hpp>

using namespace galkit;

namespace {

struct Line {
  bool pass;
  std::string text;
};

const std::vector<AlgPtr>& corpus_groups() {
  static std::vector<AlgPtr> v = [] {
    std::vector<AlgPtr> out;
    for (int n = 1; n <= 16; ++n) {
      auto g = all_groups(n);
      out.insert(out.end(), g.begin(), g.end());
    }
    return out;
  }();
  return v;
}

const std::vector<AlgPtr>& corpus_rings() {
  static std::vector<AlgPtr> v = [] {
    std::vector<AlgPtr> out;
    for (int n = 1; n <= 8; ++n) {
      auto g = all_rings(n);
      out.insert(out.end(), g.begin(), g.end());
    }
    return out;
  }();
  return v;
}

const std::vector<AlgPtr>& corpus_loops() {
  static std::vector<AlgPtr> v = [] {
    std::vector<AlgPtr> out;
    for (int n = 1; n <= 6; ++n) {
      auto g = all_loops(n);
      out.insert(out.end(), g.begin(), g.end());
    }
    return out;
  }();
  return v;
}

const std::vector<AlgPtr>& corpus_of(Kind k) {
  return k == Kind::group ? corpus_groups() : k == Kind::ring ? corpus_rings() : corpus_loops();
}

SuiteOpts opts() {
  SuiteOpts o;
  o.jobs = 0;  // all cores
  return o;
}

// Runs fn on every surjection between admitted ordered corpus pairs,
// in parallel over pairs. fn must be thread-safe; exceptions propagate.
template <class Fn>
uint64_t sweep_surjections(const CompositeAdjunction& g, const std::vector<AlgPtr>& corpus,
                           Fn&& fn) {
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!g.admits(corpus[i])) continue;
    for (size_t j = 0; j < corpus.size(); ++j)
      if (g.admits(corpus[j]) && corpus[i]->n % corpus[j]->n == 0) pairs.emplace_back(i, j);
  }
  std::atomic<uint64_t> count{0};
  parallel_for(pairs.size(), detail::resolve_jobs(0), [&](size_t t) {
    auto [i, j] = pairs[t];
    for (auto& s : all_surjections(corpus[i], corpus[j])) {
      ++count;
      fn(s);
    }
  });
  return count.load();
}

std::string first_violation(const std::vector<ClosureViolation>& v) {
  if (v.empty()) return "none";
  return cat(v[0].axiom, " @ ", v[0].where, " :: ", v[0].witness);
}

// --------------------------------------------------------------------------
// 1. The five closure axioms for every shipped reflector over the corpus.

Line c1() {
  uint64_t checks = 0;
  std::vector<ClosureViolation> viol;
  auto run_fin = [&](const char* name, Kind k) {
    CompositeAdjunction g = adjunction_by_name(name, k);
    SuiteReport r = axiom_suite(fin_world(g), corpus_of(g.ambient()), opts());
    checks += r.checks;
    viol.insert(viol.end(), r.violations.begin(), r.violations.end());
  };
  run_fin("ab", Kind::group);
  run_fin("crng", Kind::ring);
  run_fin("red", Kind::ring);
  run_fin("grp", Kind::loop);
  run_fin("id", Kind::group);
  run_fin("id", Kind::ring);
  run_fin("id", Kind::loop);
  {
    AbTfWorld w;
    SuiteReport r = axiom_suite(w, pres_instances(200, 20260815ull), opts());
    checks += r.checks;
    viol.insert(viol.end(), r.violations.begin(), r.violations.end());
  }
  if (viol.empty())
    return {true, cat("closure axioms hold for ab, crng, red, grp, id, tf (", checks, " checks)")};
  return {false, cat("closure axioms: ", viol.size(), " violation(s); first: ", first_violation(viol))};
}

// --------------------------------------------------------------------------
// 2. Closure-lemma suite: exactness of K v cl(0) = cl(K) for the subvariety
// reflectors, join distributivity, and strict containment for a reflector
// that is epireflective only.

Line c2() {
  uint64_t checks = 0;
  std::vector<ClosureViolation> viol;
  std::map<std::string, size_t> strict;
  auto run_fin = [&](const char* name, Kind k) {
    CompositeAdjunction g = adjunction_by_name(name, k);
    SuiteReport r = fermeture_checks(fin_world(g), corpus_of(g.ambient()), opts());
    checks += r.checks;
    viol.insert(viol.end(), r.violations.begin(), r.violations.end());
    strict[name] += r.strict_witnesses.size();
  };
  run_fin("ab", Kind::group);
  run_fin("crng", Kind::ring);
  run_fin("red", Kind::ring);
  run_fin("grp", Kind::loop);
  run_fin("id", Kind::group);
  run_fin("id", Kind::ring);
  run_fin("id", Kind::loop);
  {
    AbTfWorld w;
    SuiteReport r = fermeture_checks(w, pres_instances(200, 20260815ull), opts());
    checks += r.checks;
    viol.insert(viol.end(), r.violations.begin(), r.violations.end());
    strict["tf"] += r.strict_witnesses.size();
  }
  if (!viol.empty())
    return {false, cat("fermeture: ", viol.size(), " violation(s); first: ", first_violation(viol))};
  if (strict["red"] == 0)
    return {false,
            cat("fermeture: exactness and distributivity hold (", checks,
                " checks; tf strict witnesses: ", strict["tf"],
                "), but no strict witness exists for red: a finite reduced commutative "
                "ring is a product of finite fields, so every radical pushes forward "
                "exactly and K v cl(0) = cl(K) on every finite instance; strictness "
                "needs the infinite tf lane, where it is demonstrated")};
  return {true, cat("fermeture holds with a red strict witness (", checks, " checks)")};
}

// --------------------------------------------------------------------------
// 3. Normal = B-central + kernel in the outer subcategory (rings), and
// normal = B-central when the outer reflector is the identity (groups).

Line c3() {
  auto cr = adjunction_by_name("crng+red");
  std::atomic<uint64_t> ring_bad{0};
  uint64_t ring_n = sweep_surjections(cr, corpus_rings(), [&](const Morphism& s) {
    Extension f = make_extension(s);
    bool lhs = is_normal_ext(cr, f);
    AlgPtr k = subalgebra(f.total, kernel(f.p).elems).obj;
    bool rhs = is_B_central(cr, f) && cr.outer.member(k);
    if (lhs != rhs) ++ring_bad;
  });
  auto ab = adjunction_by_name("ab+id");
  std::atomic<uint64_t> grp_bad{0};
  uint64_t grp_n = sweep_surjections(ab, corpus_groups(), [&](const Morphism& s) {
    Extension f = make_extension(s);
    if (is_normal_ext(ab, f) != is_B_central(ab, f)) ++grp_bad;
  });
  if (ring_bad == 0 && grp_bad == 0)
    return {true, cat("normality characterisation holds on ", ring_n, " ring and ", grp_n,
                      " group surjections")};
  return {false, cat("normality characterisation: ", ring_bad.load(), " ring and ",
                     grp_bad.load(), " group mismatches")};
}

// --------------------------------------------------------------------------
// 4. Galois-group double path. galois_group computes the kernel of
// <I(p1), I(p2)> and the meet formula and raises InternalMismatch if they
// ever disagree, so agreement is just "no throw" over all normal extensions.

Line c4() {
  std::atomic<uint64_t> normal{0};
  for (const char* name : {"ab+id", "crng+red", "grp+id"}) {
    CompositeAdjunction g = adjunction_by_name(name);
    sweep_surjections(g, corpus_of(g.ambient()), [&](const Morphism& s) {
      try {
        galois_group(g, make_extension(s));
        ++normal;
      } catch (const NotNormalExtension&) {
      }
    });
  }
  auto q8 = dicyclic(2);
  GaloisGroupResult pin =
      galois_group(adjunction_by_name("ab"), quotient_extension(q8, {0, 2}));
  if (pin.group->n != 2 || pin.iso != iso_type(cyclic_group(2)))
    return {false, cat("pinned Galois group of Q8 ->> V came out ", pin.iso)};
  return {true, cat("double path agrees on ", normal.load(),
                    " normal extensions; Gal(Q8 ->> V) = Z/2")};
}

// --------------------------------------------------------------------------
// 5. The Hopf identity on every surjection in the three adjunction corpora.

Line c5() {
  uint64_t checks = 0;
  std::vector<ClosureViolation> viol;
  for (const char* name : {"crng+red", "ab+id", "grp+id"}) {
    CompositeAdjunction g = adjunction_by_name(name);
    SuiteReport r = hopf_identity_suite(g, corpus_of(g.ambient()), opts());
    checks += r.checks;
    viol.insert(viol.end(), r.violations.begin(), r.violations.end());
  }
  if (viol.empty())
    return {true, cat("Hopf identity holds on all ", checks,
                      " surjections across crng+red, ab+id, grp+id")};
  return {false, cat("Hopf identity: ", viol.size(), " mismatch(es); first: ",
                     first_violation(viol))};
}

// --------------------------------------------------------------------------
// 6. pi1 for f.g. abelian groups against the cocycle multiplier.

Line c6() {
  uint64_t tables = 0;
  for (int n = 1; n <= 16; ++n)
    for (const auto& chain : detail::invariant_chains(n)) {
      AlgPtr tbl = abelian_group(chain);
      std::vector<Int> mods(chain.begin(), chain.end());
      FgAb b = canonical_cyclics(0, mods);
      FgAb viaAb = pi1_fgab(b, Pi1Coeff::ab);
      if (!(viaAb == schur_multiplier(tbl)))
        return {false, cat("pi1 mismatch at ", to_string(b), ": got ", to_string(viaAb),
                           ", multiplier ", to_string(schur_multiplier(tbl)))};
      if (!(pi1_fgab(b, Pi1Coeff::abtf) == tf_quotient(viaAb)))
        return {false, cat("tf coefficient mismatch at ", to_string(b))};
      ++tables;
    }
  FgAb klein = canonical_cyclics(0, {2, 2});
  FgAb z2 = canonical_cyclics(0, {2});
  bool pins = pi1_fgab(klein, Pi1Coeff::ab) == z2 &&
              pi1_fgab(canonical_cyclics(0, {12}), Pi1Coeff::ab) == FgAb{} &&
              pi1_fgab(FgAb{2, {}}, Pi1Coeff::ab) == FgAb{1, {}} &&
              pi1_fgab(FgAb{2, {}}, Pi1Coeff::abtf) == FgAb{1, {}} &&
              pi1_fgab(klein, Pi1Coeff::abtf) == FgAb{};
  if (!pins) return {false, "pinned pi1 values do not match"};
  for (const FgAb& b : fgab_instances(200, 20260815ull))
    if (!(pi1_fgab(b, Pi1Coeff::abtf) == tf_quotient(pi1_fgab(b, Pi1Coeff::ab))))
      return {false, cat("tf coefficient mismatch at ", to_string(b))};
  return {true, cat("pi1 matches the cocycle multiplier on ", tables,
                    " abelian tables; tf coefficients collapse the torsion")};
}

// --------------------------------------------------------------------------
// 7. Protoadditivity: red preserves split extensions, ab does not.

Line c7() {
  std::vector<AlgPtr> comm;
  auto red = reflector_red();
  for (const auto& r : corpus_rings())
    if (red.admits(r)) comm.push_back(r);
  if (auto cx = protoadditivity_search(red, comm))
    return {false, cat("red unexpectedly fails protoadditivity at ", iso_type(cx->total),
                       ": ", cx->reason)};
  auto cg = protoadditivity_search(reflector_ab(), corpus_groups());
  if (!cg) return {false, "no protoadditivity counterexample found for ab on groups"};
  return {true, cat("red protoadditive over ", comm.size(),
                    " commutative rings; ab counterexample: ", iso_type(cg->total),
                    " (", cg->reason, ")")};
}

// --------------------------------------------------------------------------
// 8. Cube-of-monos and zero-square lemmas on sampled instances.

Line c8() {
  std::mt19937_64 rng(20260815ull);
  auto pick = [&](size_t n) { return (size_t)(rng() % n); };
  const std::vector<Kind> kinds = {Kind::group, Kind::ring, Kind::loop};

  uint64_t cube_bad = 0;
  for (int t = 0; t < 500; ++t) {
    const auto& pool = corpus_of(kinds[pick(3)]);
    AlgPtr a = pool[pick(pool.size())];
    auto subs = all_normal_subobjects(a);
    QuotientResult q = quotient(a, subs[pick(subs.size())]);
    auto csubs = all_normal_subobjects(q.obj);
    CubeLemmaReport r = cube_lemma_check(q.q, csubs[pick(csubs.size())],
                                         csubs[pick(csubs.size())]);
    if (!r.ok) ++cube_bad;
  }

  uint64_t carre_bad = 0, applicable = 0;
  for (int t = 0; t < 500; ++t) {
    Kind k = kinds[pick(3)];
    const auto& pool = corpus_of(k);
    CompositeAdjunction g = adjunction_by_name(
        k == Kind::group ? "ab+id" : k == Kind::ring ? "crng+red" : "grp+id");
    AlgPtr a = pool[pick(pool.size())];
    auto subs = all_normal_subobjects(a);
    QuotientResult q = quotient(a, subs[pick(subs.size())]);
    CarreZeroReport r = carre_zero_check(g, q.q);
    if (r.applicable) ++applicable;
    if (!r.ok) ++carre_bad;
  }
  if (cube_bad == 0 && carre_bad == 0 && applicable > 0)
    return {true, cat("cube and zero-square lemmas hold on 500 + 500 sampled instances (",
                      applicable, " zero-square applicable)")};
  return {false, cat("lemma failures: cube ", cube_bad, ", zero-square ", carre_bad)};
}

// --------------------------------------------------------------------------
// 9. Integer matrix backbone: Smith form contracts and presentation
// invariance at scale.

Line c9() {
  std::mt19937_64 rng(97);
  auto rnd = [&](int lo, int hi) { return lo + (int)(rng() % (uint64_t)(hi - lo + 1)); };

  for (int t = 0; t < 1000; ++t) {
    int r = rnd(1, 6), c = rnd(1, 6);
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = rnd(-9, 9);
    SnfResult s = smith_normal_form(m);
    if (!(matmul(matmul(s.u, m), s.v) == s.d))
      return {false, cat("U*M*V != D at instance ", t)};
    Int du = determinant(s.u), dv = determinant(s.v);
    if (!((du == 1 || du == -1) && (dv == 1 || dv == -1)))
      return {false, cat("non-unimodular transform at instance ", t)};
    if (!(matmul(s.v, s.vinv) == IntMatrix::identity(c)))
      return {false, cat("vinv is not inverse to v at instance ", t)};
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        if (i != j && s.d.at(i, j) != 0) return {false, cat("D not diagonal at instance ", t)};
        if (i == j && s.d.at(i, j) < 0) return {false, cat("negative diagonal at instance ", t)};
      }
    for (int i = 0; i + 1 < std::min(r, c); ++i) {
      Int a = s.d.at(i, i), b = s.d.at(i + 1, i + 1);
      if (a == 0 && b != 0) return {false, cat("zero before nonzero in D at instance ", t)};
      if (a != 0 && b % a != 0) return {false, cat("divisibility fails at instance ", t)};
    }
  }

  for (int t = 0; t < 200; ++t) {
    int k = rnd(1, 5), m = rnd(1, 5);
    IntMatrix rel(k, m);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < m; ++j) rel.at(i, j) = rnd(-8, 8);
    IntMatrix alt = rel;
    for (int step = 0; step < 12; ++step) {
      int mode = rnd(0, 3);
      if (mode == 0 && k > 1) {  // add a multiple of one row to another
        int a = rnd(0, k - 1), b = rnd(0, k - 1);
        if (a != b) {
          Int f = rnd(-3, 3);
          for (int j = 0; j < m; ++j) alt.at(a, j) += f * alt.at(b, j);
        }
      } else if (mode == 1 && m > 1) {  // column op: change of generators
        int a = rnd(0, m - 1), b = rnd(0, m - 1);
        if (a != b) {
          Int f = rnd(-3, 3);
          for (int i = 0; i < k; ++i) alt.at(i, a) += f * alt.at(i, b);
        }
      } else if (mode == 2) {  // negate a row
        int a = rnd(0, k - 1);
        for (int j = 0; j < m; ++j) alt.at(a, j) = -alt.at(a, j);
      } else if (k > 1) {  // swap rows
        int a = rnd(0, k - 1), b = rnd(0, k - 1);
        for (int j = 0; j < m; ++j) std::swap(alt.at(a, j), alt.at(b, j));
      }
    }
    if (!(from_presentation(rel) == from_presentation(alt)))
      return {false, cat("presentation invariance fails at instance ", t)};
  }
  return {true, "1000 Smith forms verified (transforms unimodular, diagonal divisibility); "
                "200 presentation pairs agree"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 9) {
      std::fprintf(stderr, "usage: %s [criterion 1..9]\n", argv[0]);
      return 2;
    }
  }
  std::vector<Line (*)()> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
  int failures = 0;
  for (int n = 1; n <= 9; ++n) {
    if (only && n != only) continue;
    Line l{false, ""};
    auto t0 = std::chrono::steady_clock::now();
    try {
      l = criteria[n - 1]();
    } catch (const std::exception& e) {
      l = {false, cat("raised: ", e.what())};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d: %s [%.1fs]\n", l.pass ? "PASS" : "FAIL", n, l.text.c_str(), secs);
    std::fflush(stdout);
    failures += l.pass ? 0 : 1;
  }
  return failures;
}
