#pragma once
// File formats. Algebra: "kind n" then n rows of n indices (rings: a second
// n-row block for multiplication). Morphism: "dom-file cod-file" header line,
// then n indices (paths resolve relative to the morphism file). '#' starts a
// comment anywhere; trailing garbage is rejected.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "finalg.hpp"

namespace galkit {

namespace io_detail {

inline std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char c : text) {
    if (c == '\n') in_comment = false;
    else if (c == '#') in_comment = true;
    if (!in_comment) out.push_back(c);
  }
  return out;
}

inline std::vector<std::string> tokens_of(const std::string& text) {
  std::istringstream is(strip_comments(text));
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

inline long parse_int(const std::string& tok, const std::string& where) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (...) {
    throw ParseError(cat(where, ": expected integer, got '", tok, "'"));
  }
  if (used != tok.size()) throw ParseError(cat(where, ": trailing garbage in '", tok, "'"));
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(cat("cannot open ", path));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace io_detail

inline AlgPtr parse_algebra(const std::string& text, const std::string& name = "<algebra>") {
  auto toks = io_detail::tokens_of(text);
  if (toks.size() < 2) throw ParseError(cat(name, ": missing 'kind n' header"));
  auto kind = parse_kind(toks[0]);
  if (!kind) throw ParseError(cat(name, ": unknown kind '", toks[0], "'"));
  long n = io_detail::parse_int(toks[1], name);
  if (n < 1) throw ParseError(cat(name, ": size must be positive"));
  if (n > kMaxLoad) throw TooLarge(cat(name, ": size ", n, " exceeds ", kMaxLoad));
  size_t tables = *kind == Kind::ring ? 2 : 1;
  size_t want = 2 + tables * (size_t)n * n;
  if (toks.size() != want)
    throw ParseError(cat(name, ": expected ", want - 2, " table entries, found ", toks.size() - 2));
  auto read_table = [&](size_t off) {
    std::vector<int32_t> t((size_t)n * n);
    for (size_t i = 0; i < t.size(); ++i) {
      long v = io_detail::parse_int(toks[off + i], name);
      if (v < 0 || v >= n) throw ParseError(cat(name, ": entry ", v, " out of range 0..", n - 1));
      t[i] = (int32_t)v;
    }
    return t;
  };
  std::vector<int32_t> t1 = read_table(2);
  std::vector<int32_t> t2;
  if (*kind == Kind::ring) t2 = read_table(2 + (size_t)n * n);
  return make_algebra(*kind, (int)n, std::move(t1), std::move(t2));
}

inline std::string algebra_to_text(const FiniteAlgebra& a) {
  std::ostringstream os;
  os << kind_name(a.kind) << " " << a.n << "\n";
  auto dump = [&](const std::vector<int32_t>& t) {
    for (int i = 0; i < a.n; ++i) {
      for (int j = 0; j < a.n; ++j) os << (j ? " " : "") << t[i * a.n + j];
      os << "\n";
    }
  };
  dump(a.t1);
  if (a.is_ring()) {
    os << "\n";
    dump(a.t2);
  }
  return os.str();
}

inline AlgPtr read_algebra_file(const std::string& path) {
  return parse_algebra(io_detail::read_file(path), path);
}

// Morphism files name their endpoint algebra files on the first
// non-comment line; those paths resolve relative to the morphism file.
inline Morphism read_morphism_file(const std::string& path) {
  std::string text = io_detail::strip_comments(io_detail::read_file(path));
  std::istringstream is(text);
  std::string line;
  std::string dom_path, cod_path;
  std::string rest;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;  // blank
    if (!(ls >> b)) throw ParseError(cat(path, ": header needs 'dom-file cod-file'"));
    if (ls >> extra) throw ParseError(cat(path, ": trailing garbage '", extra, "' in header"));
    dom_path = a;
    cod_path = b;
    std::ostringstream os;
    os << is.rdbuf();
    rest = os.str();
    break;
  }
  if (dom_path.empty()) throw ParseError(cat(path, ": missing header line"));
  auto base = std::filesystem::path(path).parent_path();
  AlgPtr dom = read_algebra_file((base / dom_path).string());
  AlgPtr cod = read_algebra_file((base / cod_path).string());
  std::istringstream rs(rest);
  std::vector<int32_t> map;
  std::string tok;
  while (rs >> tok) {
    long v = io_detail::parse_int(tok, path);
    if (v < 0 || v >= cod->n) throw ParseError(cat(path, ": image ", v, " out of range"));
    map.push_back((int32_t)v);
  }
  if ((int)map.size() != dom->n)
    throw ParseError(cat(path, ": expected ", dom->n, " images, found ", map.size()));
  return make_morphism(dom, cod, std::move(map));
}

inline std::string morphism_to_text(const Morphism& f, const std::string& dom_file,
                                    const std::string& cod_file) {
  std::ostringstream os;
  os << dom_file << " " << cod_file << "\n";
  for (size_t i = 0; i < f.map.size(); ++i) os << (i ? " " : "") << f.map[i];
  os << "\n";
  return os.str();
}

}  // namespace galkit
