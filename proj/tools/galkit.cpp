// galkit command line: reflections, closures, relative commutators,
// extension classification, Galois groups, the Hopf formula, low-degree
// cohomology, verification suites, corpus generation, and violation replay.
//
// Exit codes: 0 success, 1 violation found, 2 usage or input error,
// 3 internal mismatch or unexpected failure.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include <galkit/cohom.hpp>
#include <galkit/corpus.hpp>
#include <galkit/hopf.hpp>
#include <galkit/io.hpp>
#include <galkit/report.hpp>

namespace galkit::cli {

namespace fs = std::filesystem;

int run(std::vector<std::string> args, Report* out, bool quiet);

struct Ctx {
  uint64_t seed = 1;
  int max_size = 0;  // 0 = per-suite default
  int jobs = 0;
  std::string format = "text";
  Report rep;
};

inline std::string hash_text(const std::string& text) {
  return cat("fnv1a64:", hex64(fnv1a64(text)));
}

inline std::string slurp(Ctx& c, const std::string& path) {
  std::string text = io_detail::read_file(path);
  c.rep.inputs[path] = hash_text(text);
  return text;
}

inline AlgPtr load_algebra(Ctx& c, const std::string& path) {
  return parse_algebra(slurp(c, path), path);
}

// Endpoint files are part of the run's input surface: record their hashes
// too, resolved the same way read_morphism_file resolves them.
inline Morphism load_morphism(Ctx& c, const std::string& path) {
  std::istringstream is(io_detail::strip_comments(slurp(c, path)));
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    if (ls >> b) {
      auto base = fs::path(path).parent_path();
      slurp(c, (base / a).string());
      slurp(c, (base / b).string());
    }
    break;
  }
  return read_morphism_file(path);
}

inline std::vector<long> parse_list(const std::string& s, const std::string& where) {
  std::vector<long> out;
  std::string tok;
  auto flush = [&] {
    if (!tok.empty()) {
      out.push_back(io_detail::parse_int(tok, where));
      tok.clear();
    }
  };
  for (char ch : s) {
    if (std::isdigit((unsigned char)ch) || ch == '-') {
      tok += ch;
    } else if (ch == ',' || std::isspace((unsigned char)ch)) {
      flush();
    } else {
      throw ParseError(cat(where, ": unexpected character '", ch, "'"));
    }
  }
  flush();
  return out;
}

inline std::vector<int32_t> parse_elems(const std::string& s, const std::string& where) {
  std::vector<int32_t> out;
  for (long v : parse_list(s, where)) out.push_back((int32_t)v);
  return out;
}

inline FgAb parse_fgab(const std::string& s) {
  std::vector<Int> mods;
  for (long v : parse_list(s, "--fgab")) mods.push_back(v);
  return canonical_cyclics(0, mods);
}

// Rows separated by ';', entries by commas or spaces, in generator
// coordinates of the presented group.
inline IntMatrix parse_rows(const std::string& s, int cols) {
  std::vector<std::vector<Int>> rows;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ';') {
      std::vector<Int> row;
      for (long v : parse_list(s.substr(start, i - start), "--subobject")) row.push_back(v);
      if (!row.empty()) rows.push_back(std::move(row));
      start = i + 1;
    }
  }
  return IntMatrix::from_rows(rows, cols);
}

inline Kind variety_kind(const std::string& v) {
  if (v == "grp") return Kind::group;
  if (v == "rng") return Kind::ring;
  if (v == "loop") return Kind::loop;
  throw ParseError(cat("unknown variety: ", v, " (expected grp, rng, or loop)"));
}

inline std::vector<AlgPtr> corpus_for(Kind k, int max_size) {
  int def = k == Kind::group ? 16 : k == Kind::ring ? 8 : 6;
  int cap = max_size > 0 ? max_size : def;
  if (cap > def) throw TooLarge(cat(kind_name(k), " corpus is generated up to order ", def));
  std::vector<AlgPtr> out;
  for (int n = 1; n <= cap; ++n) {
    auto v = k == Kind::group ? all_groups(n) : k == Kind::ring ? all_rings(n) : all_loops(n);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

inline SuiteOpts suite_opts(const Ctx& c) {
  SuiteOpts o;
  o.jobs = c.jobs;
  o.seed = c.seed;
  return o;
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

inline Extension load_extension(Ctx& c, const std::string& map_file,
                                const std::string& total_file) {
  if (map_file.empty()) throw ParseError("needs --map FILE");
  Morphism m = load_morphism(c, map_file);
  if (!total_file.empty()) {
    AlgPtr t = load_algebra(c, total_file);
    if (!same_algebra(t, m.dom))
      throw AmbientMismatch(cat(total_file, " is not the domain of ", map_file));
  }
  return make_extension(std::move(m));
}

inline CompositeAdjunction adjunction_for(const std::string& name, const AlgPtr& a) {
  CompositeAdjunction g = adjunction_by_name(name, a->kind);
  if (!g.admits(a))
    throw AmbientMismatch(
        cat(name, " does not admit this ", kind_name(a->kind), " of order ", a->n));
  return g;
}

inline void fill_suite(Ctx& c, const SuiteReport& r, size_t objects) {
  c.rep.results["suite"] = r.suite;
  c.rep.results["reflector"] = r.reflector;
  c.rep.results["checks"] = r.checks;
  c.rep.results["objects"] = objects;
  c.rep.results["strict_witnesses"] = r.strict_witnesses;
  c.rep.violations = r.violations;
  c.rep.note(cat("suite: ", r.suite, " (", r.reflector, ")"));
  c.rep.note(cat("objects: ", objects, ", checks: ", r.checks));
  for (const auto& s : r.strict_witnesses) c.rep.note(cat("strict: ", s));
  c.rep.note(cat("violations: ", r.violations.size()));
}

// ---------------------------------------------------------------------------
// Subcommand handlers. They fill the report; printing and the exit-code
// policy live in run().

struct Opts {
  std::string reflector, adjunction, variety;
  std::string algebra, fgab, subobject, map, total, pres, group;
  std::string coeff = "ab", stage = "both", suite, out_dir, replay_file;
  long long mod = 0;
  bool expect_birkhoff = false;
};

inline int cmd_reflect(Ctx& c, const Opts& o) {
  if (o.reflector == "tf") {
    if (o.fgab.empty()) throw ParseError("reflector tf needs --fgab");
    FgAb g = parse_fgab(o.fgab);
    FgAbReflection r = tf_of_fgab(g);
    c.rep.results["input"] = to_string(g);
    c.rep.results["reflected"] = to_string(r.obj);
    c.rep.note(cat("input: ", to_string(g)));
    c.rep.note(cat("reflected: ", to_string(r.obj)));
    return 0;
  }
  if (o.algebra.empty()) throw ParseError("reflect needs --algebra (or --fgab with tf)");
  AlgPtr a = load_algebra(c, o.algebra);
  CompositeAdjunction g = adjunction_for(o.reflector, a);
  Reflection r = g.reflect(a);
  c.rep.results["input"] = iso_type(a);
  c.rep.results["reflected"] = iso_type(r.obj);
  c.rep.results["unit_kernel"] = Json(kernel(r.unit).elems);
  c.rep.results["member"] = g.member(a);
  c.rep.results["table"] = algebra_to_text(*r.obj);
  c.rep.note(cat("input: ", iso_type(a)));
  c.rep.note(cat("reflected: ", iso_type(r.obj)));
  c.rep.note(cat("unit kernel: ", format_elems(kernel(r.unit).elems)));
  c.rep.note(cat("member: ", yes_no(g.member(a))));
  return 0;
}

inline int cmd_closure(Ctx& c, const Opts& o) {
  if (o.subobject.empty()) throw ParseError("closure needs --subobject");
  if (o.reflector == "tf") {
    if (o.fgab.empty()) throw ParseError("reflector tf needs --fgab");
    FgAb g = parse_fgab(o.fgab);
    PresAb a = pres_of_fgab(g);
    PresSub s = make_pres_sub(a, parse_rows(o.subobject, a.m));
    AbTfWorld w;
    w.seed = c.seed;
    PresSub cl = close(w, a, s);
    c.rep.results["ambient"] = to_string(g);
    c.rep.results["subobject"] = to_string(s.lat);
    c.rep.results["closure"] = to_string(cl.lat);
    c.rep.results["closure_type"] = to_string(pres_sub_type(a, cl));
    c.rep.results["closed"] = pres_sub_eq(cl, s);
    c.rep.note(cat("ambient: ", to_string(g)));
    c.rep.note(cat("closure: ", to_string(cl.lat), " of type ", to_string(pres_sub_type(a, cl))));
    c.rep.note(cat("closed: ", yes_no(pres_sub_eq(cl, s))));
    return 0;
  }
  if (o.algebra.empty()) throw ParseError("closure needs --algebra (or --fgab with tf)");
  AlgPtr a = load_algebra(c, o.algebra);
  CompositeAdjunction g = adjunction_for(o.reflector, a);
  Subset s = normal_subobject(a, parse_elems(o.subobject, "--subobject"));
  Subset cl = close(fin_world(g), a, s);
  c.rep.results["ambient"] = iso_type(a);
  c.rep.results["subobject"] = Json(s.elems);
  c.rep.results["closure"] = Json(cl.elems);
  c.rep.results["closure_type"] = iso_type(subalgebra(a, cl.elems).obj);
  c.rep.results["closed"] = cl.elems == s.elems;
  c.rep.note(cat("ambient: ", iso_type(a)));
  c.rep.note(cat("closure: ", format_elems(cl.elems)));
  c.rep.note(cat("closed: ", yes_no(cl.elems == s.elems)));
  return 0;
}

inline int cmd_relcomm(Ctx& c, const Opts& o) {
  Extension f = load_extension(c, o.map, o.total);
  CompositeAdjunction g = adjunction_for(o.adjunction, f.total);
  Subset r = relative_commutator(g, f);
  c.rep.results["total"] = iso_type(f.total);
  c.rep.results["base"] = iso_type(f.base);
  c.rep.results["kernel"] = Json(kernel(f.p).elems);
  c.rep.results["relative_commutator"] = Json(r.elems);
  c.rep.results["b_central"] = is_B_central(g, f);
  c.rep.note(cat("extension: ", iso_type(f.total), " ->> ", iso_type(f.base)));
  c.rep.note(cat("relative commutator: ", format_elems(r.elems)));
  c.rep.note(cat("b-central: ", yes_no(is_B_central(g, f))));
  return 0;
}

inline int cmd_classify_ext(Ctx& c, const Opts& o) {
  Extension f = load_extension(c, o.map, o.total);
  CompositeAdjunction g = adjunction_for(o.adjunction, f.total);
  c.rep.results["total"] = iso_type(f.total);
  c.rep.results["base"] = iso_type(f.base);
  c.rep.results["kernel"] = Json(kernel(f.p).elems);
  bool trivial = is_trivial_ext(g, f);
  bool normal = is_normal_ext(g, f);
  c.rep.results["trivial"] = trivial;
  c.rep.results["normal"] = normal;
  c.rep.note(cat("extension: ", iso_type(f.total), " ->> ", iso_type(f.base)));
  c.rep.note(cat("trivial: ", yes_no(trivial)));
  c.rep.note(cat("normal: ", yes_no(normal)));
  if (g.inner.birkhoff) {
    Subset rc = relative_commutator(g, f);
    bool bc = is_B_central(g, f);
    bool fc = is_F_central(g, f);
    c.rep.results["relative_commutator"] = Json(rc.elems);
    c.rep.results["b_central"] = bc;
    c.rep.results["f_central"] = fc;
    c.rep.note(cat("b-central: ", yes_no(bc)));
    c.rep.note(cat("f-central: ", yes_no(fc)));
    c.rep.note(cat("relative commutator: ", format_elems(rc.elems)));
  } else {
    c.rep.results["b_central"] = "n/a";
    c.rep.results["f_central"] = "n/a";
    c.rep.note("b-central: n/a (inner reflector is not a subvariety)");
    c.rep.note("f-central: n/a (inner reflector is not a subvariety)");
  }
  return 0;
}

inline int cmd_centralize(Ctx& c, const Opts& o) {
  Extension f = load_extension(c, o.map, o.total);
  CompositeAdjunction g = adjunction_for(o.adjunction, f.total);
  Extension cur = f;
  if (o.stage == "i1" || o.stage == "both") {
    Centralized c1 = centralize_I1(g, cur);
    cur = c1.ext;
    c.rep.results["i1"] = Json{{"total", iso_type(cur.total)},
                               {"kernel", Json(kernel(cur.p).elems)}};
    c.rep.note(cat("after i1: ", iso_type(cur.total), " ->> ", iso_type(cur.base),
                   ", kernel ", format_elems(kernel(cur.p).elems)));
  }
  if (o.stage == "f1" || o.stage == "both") {
    Centralized c2 = centralize_F1(g, cur);
    cur = c2.ext;
    c.rep.results["f1"] = Json{{"total", iso_type(cur.total)},
                               {"kernel", Json(kernel(cur.p).elems)}};
    c.rep.note(cat("after f1: ", iso_type(cur.total), " ->> ", iso_type(cur.base),
                   ", kernel ", format_elems(kernel(cur.p).elems)));
  }
  c.rep.results["total"] = iso_type(cur.total);
  c.rep.results["base"] = iso_type(cur.base);
  c.rep.results["kernel"] = Json(kernel(cur.p).elems);
  c.rep.results["table"] = algebra_to_text(*cur.total);
  return 0;
}

inline int cmd_galois_group(Ctx& c, const Opts& o) {
  Extension f = load_extension(c, o.map, o.total);
  CompositeAdjunction g = adjunction_for(o.adjunction, f.total);
  GaloisGroupResult r = galois_group(g, f);
  c.rep.results["galois_group"] = r.iso;
  c.rep.results["order"] = r.group->n;
  c.rep.results["witness"] = Json(r.witness.elems);
  c.rep.results["meet"] = Json(r.meet.elems);
  c.rep.note(cat("galois group: ", r.iso));
  c.rep.note(cat("witness: ", format_elems(r.witness.elems)));
  c.rep.note(cat("meet: ", format_elems(r.meet.elems)));
  return 0;
}

inline Extension load_hopf_instance(Ctx& c, const Opts& o) {
  if (!o.pres.empty()) {
    auto pos = o.pres.find(':');
    if (pos == std::string::npos) throw ParseError("--pres expects P.alg:p.mor");
    std::string pfile = o.pres.substr(0, pos), mfile = o.pres.substr(pos + 1);
    AlgPtr p = load_algebra(c, pfile);
    Morphism m = load_morphism(c, mfile);
    if (!same_algebra(p, m.dom))
      throw AmbientMismatch(cat(pfile, " is not the domain of ", mfile));
    return make_extension(std::move(m));
  }
  return load_extension(c, o.map, o.total);
}

inline int cmd_hopf(Ctx& c, const Opts& o, bool identity) {
  Extension f = load_hopf_instance(c, o);
  CompositeAdjunction g = adjunction_for(o.adjunction, f.total);
  if (identity) {
    HopfIdentityReport r = hopf_identity_check({g, f});
    c.rep.results["galois"] = r.lhs_iso;
    c.rep.results["formula"] = r.rhs_iso;
    c.rep.results["holds"] = r.ok;
    c.rep.results["numerator"] = Json(r.rhs.numerator.elems);
    c.rep.results["denominator"] = Json(r.rhs.denominator.elems);
    c.rep.note(cat("galois group: ", r.lhs_iso));
    c.rep.note(cat("formula value: ", r.rhs_iso));
    c.rep.note(cat("identity: ", r.ok ? "holds" : "FAILS"));
    if (!r.ok)
      c.rep.violations.push_back(
          {"IsoMismatch", cat(iso_type(f.total), " ->> ", iso_type(f.base)),
           cat("galois=", r.lhs_iso, " formula=", r.rhs_iso)});
    return 0;
  }
  HopfRhs r = hopf_rhs({g, f});
  c.rep.results["value"] = r.iso;
  c.rep.results["numerator"] = Json(r.numerator.elems);
  c.rep.results["denominator"] = Json(r.denominator.elems);
  c.rep.note(cat("formula value: ", r.iso));
  c.rep.note(cat("numerator: ", format_elems(r.numerator.elems)));
  c.rep.note(cat("denominator: ", format_elems(r.denominator.elems)));
  return 0;
}

inline int cmd_pi1(Ctx& c, const Opts& o) {
  if (o.fgab.empty()) throw ParseError("pi1 needs --fgab");
  FgAb b = parse_fgab(o.fgab);
  FgAb r = pi1_fgab(b, parse_pi1_coeff(o.coeff));
  c.rep.results["input"] = to_string(b);
  c.rep.results["coeff"] = o.coeff;
  c.rep.results["pi1"] = to_string(r);
  c.rep.note(to_string(r));
  return 0;
}

inline int cmd_h2(Ctx& c, const Opts& o) {
  AlgPtr b = load_algebra(c, o.group);
  FgAb r = o.mod > 0 ? h2_mod(b, o.mod) : schur_multiplier(b);
  c.rep.results["group"] = iso_type(b);
  c.rep.results["h2"] = to_string(r);
  if (o.mod > 0) c.rep.results["mod"] = o.mod;
  c.rep.note(to_string(r));
  return 0;
}

inline int cmd_verify(Ctx& c, const Opts& o) {
  SuiteOpts opts = suite_opts(c);
  if (o.suite == "hopf-identity") {
    std::string name = o.adjunction;
    if (name.empty() && !o.variety.empty()) {
      Kind k = variety_kind(o.variety);
      name = k == Kind::group ? "ab+id" : k == Kind::ring ? "crng+red" : "grp+id";
    }
    if (name.empty()) throw ParseError("verify hopf-identity needs --adjunction or --variety");
    Kind k = o.variety.empty() ? Kind::group : variety_kind(o.variety);
    CompositeAdjunction g = adjunction_by_name(name, k);
    if (!g.inner.birkhoff)
      throw NotBirkhoffInner(cat(name, " has a non-subvariety inner reflector"));
    auto objs = corpus_for(g.ambient(), c.max_size);
    fill_suite(c, hopf_identity_suite(g, objs, opts), objs.size());
    return 0;
  }
  if (o.suite != "closure-axioms" && o.suite != "fermeture")
    throw ParseError(cat("unknown suite: ", o.suite,
                         " (expected closure-axioms, fermeture, or hopf-identity)"));
  if (o.reflector.empty()) throw ParseError(cat("verify ", o.suite, " needs --reflector"));
  bool ferm = o.suite == "fermeture";
  if (o.reflector == "tf") {
    AbTfWorld w;
    w.seed = c.seed;
    // Asserting Birkhoff for a reflector that is not one turns every strict
    // containment into a reportable violation; used to exercise replay.
    w.birkhoff = o.expect_birkhoff;
    int count = c.max_size > 0 ? c.max_size : 200;
    auto objs = pres_instances(count, c.seed);
    fill_suite(c, ferm ? fermeture_checks(w, objs, opts) : axiom_suite(w, objs, opts),
               objs.size());
    return 0;
  }
  if (o.reflector == "id" && o.variety.empty())
    throw ParseError("reflector id needs --variety (grp, rng, or loop)");
  Kind k = o.variety.empty() ? Kind::group : variety_kind(o.variety);
  CompositeAdjunction g = adjunction_by_name(o.reflector, k);
  FinWorld w = fin_world(g);
  if (o.expect_birkhoff) w.birkhoff = true;
  auto objs = corpus_for(g.ambient(), c.max_size);
  fill_suite(c, ferm ? fermeture_checks(w, objs, opts) : axiom_suite(w, objs, opts),
             objs.size());
  return 0;
}

inline int cmd_corpus_gen(Ctx& c, const Opts& o) {
  std::string dir = o.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("GALOIS_CORPUS_DIR");
    dir = env && *env ? env : "corpus";
  }
  int gmax = 16, lmax = 6, rmax = 8;
  if (c.max_size > 0) {
    gmax = std::min(gmax, c.max_size);
    lmax = std::min(lmax, c.max_size);
    rmax = std::min(rmax, c.max_size);
  }
  Corpus cp = standard_corpus(gmax, lmax, rmax, 0, c.seed);

  fs::create_directories(fs::path(dir) / "groups");
  fs::create_directories(fs::path(dir) / "loops");
  fs::create_directories(fs::path(dir) / "rings");
  Json files = Json::object();
  auto emit = [&](const fs::path& rel, const std::string& text) {
    fs::path full = fs::path(dir) / rel;
    std::ofstream os(full, std::ios::binary);
    if (!os) throw ParseError(cat("cannot write ", full.string()));
    os << text;
    files[rel.generic_string()] = hash_text(text);
  };
  auto emit_kind = [&](const char* sub, const char* stem, const std::vector<AlgPtr>& v) {
    std::map<int, int> counts, index;
    for (const auto& a : v) {
      char name[48];
      std::snprintf(name, sizeof name, "%s_%02d_%02d.alg", stem, a->n, index[a->n]++);
      emit(fs::path(sub) / name, algebra_to_text(*a));
      ++counts[a->n];
    }
    Json j = Json::object();
    for (auto [n, k] : counts) j[std::to_string(n)] = k;
    return j;
  };
  Json counts;
  counts["groups"] = emit_kind("groups", "group", cp.groups);
  counts["loops"] = emit_kind("loops", "loop", cp.loops);
  counts["rings"] = emit_kind("rings", "ring", cp.rings);

  // Named instances used throughout the docs and tests.
  emit("klein4.alg", algebra_to_text(*abelian_group({2, 2})));
  emit("z2.alg", algebra_to_text(*cyclic_group(2)));
  emit("z4.alg", algebra_to_text(*cyclic_group(4)));
  emit("z8.alg", algebra_to_text(*cyclic_group(8)));
  emit("q8.alg", algebra_to_text(*dicyclic(2)));
  emit("s3.alg", algebra_to_text(*dihedral(3)));
  emit("d4.alg", algebra_to_text(*dihedral(4)));
  emit("a4.alg", algebra_to_text(*alternating4()));
  emit("ring_z4.alg", algebra_to_text(*cyclic_ring(4)));
  emit("ring_z8.alg", algebra_to_text(*cyclic_ring(8)));
  emit("zero_ring4.alg", algebra_to_text(*zero_ring(4)));

  Json manifest;
  manifest["counts"] = counts;
  manifest["files"] = files;
  manifest["seed"] = c.seed;
  {
    fs::path full = fs::path(dir) / "manifest.json";
    std::ofstream os(full, std::ios::binary);
    if (!os) throw ParseError(cat("cannot write ", full.string()));
    os << manifest.dump(2) << "\n";
  }
  c.rep.results["dir"] = dir;
  c.rep.results["counts"] = counts;
  c.rep.results["files"] = files.size() + 1;
  c.rep.note(cat("groups: ", cp.groups.size(), " (orders 1..", gmax, ")"));
  c.rep.note(cat("loops: ", cp.loops.size(), " (orders 1..", lmax, ")"));
  c.rep.note(cat("rings: ", cp.rings.size(), " (orders 1..", rmax, ")"));
  c.rep.note(cat("wrote ", files.size() + 1, " files to ", dir));
  return 0;
}

inline int cmd_replay(Ctx& c, const Opts& o) {
  std::string text = slurp(c, o.replay_file);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(cat(o.replay_file, ": not a JSON report: ", e.what()));
  }
  if (!j.contains("command") || !j["command"].is_array() || j["command"].empty())
    throw ParseError(cat(o.replay_file, ": report carries no command"));
  std::vector<std::string> cmd;
  for (const auto& t : j["command"]) {
    if (!t.is_string()) throw ParseError(cat(o.replay_file, ": malformed command echo"));
    cmd.push_back(t.get<std::string>());
  }
  if (cmd[0] == "replay") throw ParseError("refusing to replay a replay report");
  if (j.contains("inputs"))
    for (const auto& [path, h] : j["inputs"].items()) {
      std::string now = hash_text(io_detail::read_file(path));
      if (now != h.get<std::string>())
        throw ParseError(cat("input changed since the report was written: ", path));
      c.rep.inputs[path] = now;
    }

  Report inner;
  int code = run(cmd, &inner, /*quiet=*/true);
  if (code >= 2) throw InternalMismatch(cat("replayed command exited with code ", code));
  Json got = Json::array();
  for (const auto& v : inner.violations)
    got.push_back({{"what", v.axiom}, {"where", v.where}, {"witness", v.witness}});
  if (got != j.value("violations", Json::array()))
    throw InternalMismatch("replay diverged from the recorded violations");
  c.rep.results["replayed"] = cmd;
  c.rep.results["reproduced"] = inner.violations.size();
  c.rep.violations = inner.violations;
  c.rep.note(cat("reproduced ", inner.violations.size(), " violation(s)"));
  return 0;
}

// ---------------------------------------------------------------------------

inline void emit(Ctx& c) {
  if (c.format == "json") {
    std::cout << c.rep.to_json().dump(2) << "\n";
  } else {
    std::cout << c.rep.to_text();
    std::fprintf(stderr, "time: %.3fs\n", c.rep.seconds);
  }
}

int run(std::vector<std::string> args, Report* out, bool quiet) {
  Ctx c;
  c.rep.command = args;
  Opts o;

  CLI::App app{"categorical Galois theory on finite table-presented algebras"};
  app.name("galkit");
  app.require_subcommand(1);
  app.add_option("--seed", c.seed, "seed for sampled suites");
  app.add_option("--max-size", c.max_size, "cap corpus order / instance count");
  app.add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  app.add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  auto sub = [&](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  CLI::App* s_reflect = sub("reflect", "reflect an algebra into a subcategory");
  s_reflect->add_option("--reflector", o.reflector, "ab, crng, red, grp, id, composite, or tf")
      ->required();
  s_reflect->add_option("--algebra", o.algebra, "algebra table file");
  s_reflect->add_option("--fgab", o.fgab, "f.g. abelian group, e.g. \"0,2\" for Z x Z/2");

  CLI::App* s_closure = sub("closure", "close a normal subobject");
  s_closure->add_option("--reflector", o.reflector)->required();
  s_closure->add_option("--algebra", o.algebra, "algebra table file");
  s_closure->add_option("--fgab", o.fgab, "f.g. abelian ambient (tf lane)");
  s_closure->add_option("--subobject", o.subobject,
                        "elements \"0,2,4\" or generator rows \"2 0; 0 4\" (tf lane)")
      ->required();

  CLI::App* s_relcomm = sub("relcomm", "relative commutator of an extension");
  s_relcomm->add_option("--adjunction", o.adjunction)->required();
  s_relcomm->add_option("--map", o.map, "morphism file")->required();
  s_relcomm->add_option("--total", o.total, "cross-check the domain algebra");

  CLI::App* s_classify = sub("classify-ext", "trivial / normal / central classification");
  s_classify->add_option("--adjunction", o.adjunction)->required();
  s_classify->add_option("--map", o.map, "morphism file")->required();
  s_classify->add_option("--total", o.total);

  CLI::App* s_centralize = sub("centralize", "centralise an extension");
  s_centralize->add_option("--adjunction", o.adjunction)->required();
  s_centralize->add_option("--map", o.map, "morphism file")->required();
  s_centralize->add_option("--total", o.total);
  s_centralize->add_option("--stage", o.stage)->check(CLI::IsMember({"i1", "f1", "both"}));

  CLI::App* s_galois = sub("galois-group", "Galois group of a normal extension");
  s_galois->add_option("--adjunction", o.adjunction)->required();
  s_galois->add_option("--map", o.map, "morphism file")->required();
  s_galois->add_option("--total", o.total);

  CLI::App* s_hopf = sub("hopf", "evaluate the Hopf formula");
  s_hopf->add_option("--adjunction", o.adjunction)->required();
  s_hopf->add_option("--pres", o.pres, "presentation P.alg:p.mor");
  s_hopf->add_option("--map", o.map, "morphism file");
  s_hopf->add_option("--total", o.total);

  CLI::App* s_hopfid = sub("hopf-identity", "compare the formula with the Galois group");
  s_hopfid->add_option("--adjunction", o.adjunction)->required();
  s_hopfid->add_option("--pres", o.pres, "presentation P.alg:p.mor");
  s_hopfid->add_option("--map", o.map, "morphism file");
  s_hopfid->add_option("--total", o.total);

  CLI::App* s_pi1 = sub("pi1", "fundamental group of a f.g. abelian group");
  s_pi1->add_option("--fgab", o.fgab, "moduli list, 0 for a free summand")->required();
  s_pi1->add_option("--coeff", o.coeff, "ab or abtf");

  CLI::App* s_h2 = sub("h2", "Schur multiplier / mod-m multiplier of a group table");
  s_h2->add_option("--group", o.group, "group table file")->required();
  s_h2->add_option("--mod", o.mod, "modulus (omit for the integral multiplier)");

  CLI::App* s_verify = sub("verify", "run a verification suite over the corpus");
  s_verify->add_option("suite", o.suite, "closure-axioms, fermeture, or hopf-identity")
      ->required();
  s_verify->add_option("--reflector", o.reflector);
  s_verify->add_option("--adjunction", o.adjunction);
  s_verify->add_option("--variety", o.variety, "grp, rng, or loop");
  s_verify->add_flag("--expect-birkhoff", o.expect_birkhoff,
                     "treat strict containments as violations");

  CLI::App* s_corpus = sub("corpus", "corpus management");
  s_corpus->require_subcommand(1);
  CLI::App* s_gen = s_corpus->add_subcommand("gen", "write the classified corpus to disk");
  s_gen->fallthrough();
  s_gen->add_option("--out", o.out_dir, "output directory (default $GALOIS_CORPUS_DIR, else ./corpus)");

  CLI::App* s_replay = sub("replay", "re-run a JSON report and compare violations");
  s_replay->add_option("--file", o.replay_file, "report file")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (quiet) return std::string(e.get_name()) == "CallForHelp" ? 0 : 2;
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (app.got_subcommand(s_reflect)) code = cmd_reflect(c, o);
    else if (app.got_subcommand(s_closure)) code = cmd_closure(c, o);
    else if (app.got_subcommand(s_relcomm)) code = cmd_relcomm(c, o);
    else if (app.got_subcommand(s_classify)) code = cmd_classify_ext(c, o);
    else if (app.got_subcommand(s_centralize)) code = cmd_centralize(c, o);
    else if (app.got_subcommand(s_galois)) code = cmd_galois_group(c, o);
    else if (app.got_subcommand(s_hopf)) code = cmd_hopf(c, o, false);
    else if (app.got_subcommand(s_hopfid)) code = cmd_hopf(c, o, true);
    else if (app.got_subcommand(s_pi1)) code = cmd_pi1(c, o);
    else if (app.got_subcommand(s_h2)) code = cmd_h2(c, o);
    else if (app.got_subcommand(s_verify)) code = cmd_verify(c, o);
    else if (app.got_subcommand(s_corpus)) code = cmd_corpus_gen(c, o);
    else if (app.got_subcommand(s_replay)) code = cmd_replay(c, o);
  } catch (const InternalMismatch& e) {
    c.rep.results["error"] = std::string(e.what());
    c.rep.note(cat("error: ", e.what()));
    code = 3;
  } catch (const Error& e) {
    c.rep.results["error"] = std::string(e.what());
    c.rep.note(cat("error: ", e.what()));
    code = 2;
  } catch (const std::exception& e) {
    c.rep.results["error"] = std::string(e.what());
    c.rep.note(cat("error: ", e.what()));
    code = 3;
  }
  if (code == 0 && !c.rep.violations.empty()) code = 1;
  c.rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out) *out = c.rep;
  if (!quiet) emit(c);
  return code;
}

}  // namespace galkit::cli

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return galkit::cli::run(std::move(args), nullptr, false);
}
