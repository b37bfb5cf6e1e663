#pragma once

// Finitely generated abelian groups presented as Z^m modulo a relation
// lattice, with subobjects as intermediate lattices. This is the torsion-free
// reflection's home: units, kernels, preimages and joins are all integer
// lattice computations, so closure arguments run exactly, with no enumeration
// of elements (the objects are usually infinite).

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "galkit/fgab.hpp"
#include "galkit/util.hpp"

namespace galkit {

// Z^m / rowspace(rel). rel is kept in row Hermite form, rows may number 0..m.
struct PresAb {
  int m = 0;
  IntMatrix rel{0, 0};

  bool operator==(const PresAb&) const = default;
};

// A subobject of Z^m/rel: a lattice L with rel <= L <= Z^m, rows in Hermite
// form. Subobjects store only the lattice; the ambient is passed alongside.
struct PresSub {
  IntMatrix lat{0, 0};

  bool operator==(const PresSub&) const = default;
};

// Morphism Z^m/relA -> Z^k/relB: column j of mat is the image of generator j.
// Valid iff mat maps the relation lattice of the domain into that of the
// codomain.
struct PresMor {
  PresAb dom, cod;
  IntMatrix mat{0, 0};
};

inline PresAb make_pres(int m, const IntMatrix& rel) {
  if (rel.cols != m && !(rel.rows == 0 && rel.cols == 0))
    throw BasisMismatch("make_pres: relation width differs from rank");
  IntMatrix r = rel.rows == 0 ? IntMatrix(0, m) : rel;
  return PresAb{m, hermite_rows(r)};
}

inline PresAb pres_of_fgab(const FgAb& g) {
  int m = (int)g.gens();
  IntMatrix rel(0, m);
  for (size_t i = 0; i < g.factors.size(); ++i) {
    IntMatrix row(1, m);
    row.at(0, (int)(g.rank + i)) = g.factors[i];
    rel = stack_rows(rel, row);
  }
  return make_pres(m, rel);
}

inline FgAb pres_type(const PresAb& a) { return from_presentation(a.rel); }

inline std::string to_string(const IntMatrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows; ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < m.cols; ++j) {
      if (j) s += ",";
      s += m.at(i, j).str();
    }
    s += "]";
  }
  return s + "]";
}

inline std::string to_string(const PresAb& a) {
  return cat(to_string(pres_type(a)), " = Z^", a.m, "/", to_string(a.rel));
}

// ---------------------------------------------------------------------------
// Subobject lattice

inline PresSub pres_zero(const PresAb& a) { return PresSub{a.rel}; }

inline PresSub pres_full(const PresAb& a) { return PresSub{IntMatrix::identity(a.m)}; }

inline PresSub make_pres_sub(const PresAb& a, const IntMatrix& rows) {
  IntMatrix l = hermite_rows(stack_rows(rows, a.rel));
  return PresSub{std::move(l)};
}

inline bool pres_sub_leq(const PresSub& x, const PresSub& y) {
  return lattice_leq(x.lat, y.lat);
}

inline bool pres_sub_eq(const PresSub& x, const PresSub& y) { return x.lat == y.lat; }

inline PresSub pres_join(const PresSub& x, const PresSub& y) {
  return PresSub{hermite_rows(stack_rows(x.lat, y.lat))};
}

inline PresSub pres_meet(const PresSub& x, const PresSub& y) {
  return PresSub{intersect_rows(x.lat, y.lat)};
}

// The subobject as an abstract group: L/rel.
inline FgAb pres_sub_type(const PresAb& a, const PresSub& s) {
  return quotient_of_lattices(s.lat, a.rel);
}

// ---------------------------------------------------------------------------
// Morphisms

inline void validate_pres_mor(const PresMor& f) {
  if (f.mat.rows != f.cod.m || f.mat.cols != f.dom.m)
    throw BasisMismatch("pres morphism: matrix shape mismatch");
  for (int i = 0; i < f.dom.rel.rows; ++i) {
    std::vector<Int> v(f.dom.m);
    for (int j = 0; j < f.dom.m; ++j) v[j] = f.dom.rel.at(i, j);
    auto w = matvec(f.mat, v);
    IntMatrix row(1, f.cod.m);
    for (int j = 0; j < f.cod.m; ++j) row.at(0, j) = w[j];
    if (!lattice_leq(row, f.cod.rel))
      throw BasisMismatch("pres morphism does not respect the relations");
  }
}

inline PresMor make_pres_mor(const PresAb& dom, const PresAb& cod, IntMatrix mat) {
  PresMor f{dom, cod, std::move(mat)};
  validate_pres_mor(f);
  return f;
}

inline PresMor pres_identity(const PresAb& a) {
  return PresMor{a, a, IntMatrix::identity(a.m)};
}

inline PresMor pres_compose(const PresMor& g, const PresMor& f) {  // g after f
  if (!(f.cod == g.dom)) throw AmbientMismatch("pres compose: middle object differs");
  return PresMor{f.dom, g.cod, matmul(g.mat, f.mat)};
}

// {x in Z^m : Mx in L}, as rows. Solves Mx = L^T y with an integer kernel and
// projects onto x.
inline IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& l) {
  int k = m.rows, w = m.cols, r = l.rows;
  IntMatrix e(k, w + r);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < w; ++j) e.at(i, j) = m.at(i, j);
    for (int t = 0; t < r; ++t) e.at(i, w + t) = -l.at(t, i);
  }
  IntMatrix ker = integer_kernel(e);  // columns span the solution lattice
  IntMatrix rows(ker.cols, w);
  for (int c = 0; c < ker.cols; ++c)
    for (int j = 0; j < w; ++j) rows.at(c, j) = ker.at(j, c);
  return hermite_rows(rows);
}

inline PresSub pres_preimage(const PresMor& f, const PresSub& s) {
  IntMatrix p = preimage_lattice(f.mat, s.lat);
  return PresSub{hermite_rows(stack_rows(p, f.dom.rel))};
}

inline PresSub pres_kernel(const PresMor& f) { return pres_preimage(f, pres_zero(f.cod)); }

inline PresSub pres_direct_image(const PresMor& f, const PresSub& s) {
  IntMatrix img(s.lat.rows, f.cod.m);
  for (int i = 0; i < s.lat.rows; ++i) {
    std::vector<Int> v(f.dom.m);
    for (int j = 0; j < f.dom.m; ++j) v[j] = s.lat.at(i, j);
    auto w = matvec(f.mat, v);
    for (int j = 0; j < f.cod.m; ++j) img.at(i, j) = w[j];
  }
  return PresSub{hermite_rows(stack_rows(img, f.cod.rel))};
}

inline bool pres_is_surjective(const PresMor& f) {
  IntMatrix cols(f.mat.cols, f.mat.rows);
  for (int i = 0; i < f.mat.rows; ++i)
    for (int j = 0; j < f.mat.cols; ++j) cols.at(j, i) = f.mat.at(i, j);
  return hermite_rows(stack_rows(cols, f.cod.rel)) == IntMatrix::identity(f.cod.m);
}

struct PresQuotient {
  PresAb obj;
  PresMor q;
};

// Z^m/rel ->> Z^m/L for rel <= L: the identity matrix, read modulo more
// relations.
inline PresQuotient pres_quotient(const PresAb& a, const PresSub& s) {
  if (!lattice_leq(a.rel, s.lat)) throw NotNormal("pres quotient: lattice misses relations");
  PresAb obj{a.m, hermite_rows(s.lat)};
  return PresQuotient{obj, PresMor{a, obj, IntMatrix::identity(a.m)}};
}

// ---------------------------------------------------------------------------
// The torsion-free reflection

inline bool pres_is_torsion_free(const PresAb& a) {
  return pres_type(a).factors.empty();
}

// Unit at A: Z^m/rel -> Z^m/sat(rel). Kernel = sat(rel)/rel = torsion(A).
inline PresMor pres_tf_unit(const PresAb& a) {
  IntMatrix sat = a.rel.rows == 0 ? a.rel : saturate_rows(a.rel);
  PresAb cod{a.m, hermite_rows(sat)};
  return PresMor{a, cod, IntMatrix::identity(a.m)};
}

// ---------------------------------------------------------------------------
// Hom lattice: integer basis of Hom(Z^m/relA, Z^k/relB) pulled back to
// matrices. Unknowns are the km entries plus auxiliary coefficients writing
// each mapped relation in relB.

inline std::vector<IntMatrix> pres_hom_basis(const PresAb& a, const PresAb& b) {
  int m = a.m, k = b.m, ra = a.rel.rows, rb = b.rel.rows;
  int vars = k * m + ra * rb;
  IntMatrix e(ra * k, vars);
  for (int i = 0; i < ra; ++i)
    for (int c = 0; c < k; ++c) {
      int row = i * k + c;
      for (int j = 0; j < m; ++j) e.at(row, c * m + j) = a.rel.at(i, j);
      for (int t = 0; t < rb; ++t) e.at(row, k * m + i * rb + t) = -b.rel.at(t, c);
    }
  IntMatrix ker = integer_kernel(e);
  // Rows of the projected kernel, reduced, give the hom-lattice basis.
  IntMatrix proj(ker.cols, k * m);
  for (int c = 0; c < ker.cols; ++c)
    for (int j = 0; j < k * m; ++j) proj.at(c, j) = ker.at(j, c);
  proj = hermite_rows(proj);
  std::vector<IntMatrix> basis;
  for (int i = 0; i < proj.rows; ++i) {
    IntMatrix mat(k, m);
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < m; ++j) mat.at(c, j) = proj.at(i, c * m + j);
    basis.push_back(std::move(mat));
  }
  return basis;
}

// Deterministic sample of morphisms A -> B: hom-basis elements and small
// random combinations of them.
inline std::vector<PresMor> pres_hom_sample(const PresAb& a, const PresAb& b, int count,
                                            uint64_t seed) {
  auto basis = pres_hom_basis(a, b);
  std::vector<PresMor> out;
  auto push = [&](IntMatrix mat) {
    PresMor f{a, b, std::move(mat)};
    validate_pres_mor(f);
    out.push_back(std::move(f));
  };
  push(IntMatrix(b.m, a.m));  // zero map
  for (const auto& mat : basis) push(mat);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-2, 2);
  while ((int)out.size() < count && !basis.empty()) {
    IntMatrix mat(b.m, a.m);
    for (const auto& bmat : basis) {
      int c = coef(rng);
      if (!c) continue;
      for (size_t i = 0; i < mat.a.size(); ++i) mat.a[i] += Int(c) * bmat.a[i];
    }
    push(std::move(mat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic instance generators for suites

inline std::vector<PresAb> pres_instances(int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PresAb> out;
  out.push_back(make_pres(1, IntMatrix(0, 1)));                 // Z
  {
    IntMatrix r(1, 1);
    r.at(0, 0) = 4;
    out.push_back(make_pres(1, r));                             // Z/4
  }
  while ((int)out.size() < count) {
    int m = (int)(rng() % 3) + 1;
    int rows = (int)(rng() % (m + 1));
    IntMatrix rel(rows, m);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < m; ++j) rel.at(i, j) = Int((int64_t)(rng() % 9)) - 4;
    out.push_back(make_pres(m, rel));
  }
  return out;
}

inline std::vector<PresSub> pres_sub_sample(const PresAb& a, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PresSub> out;
  auto push = [&](PresSub s) {
    for (const auto& t : out)
      if (t == s) return;
    out.push_back(std::move(s));
  };
  push(pres_zero(a));
  push(pres_full(a));
  if (a.m == 0) return out;
  {
    IntMatrix two = IntMatrix::identity(a.m);
    for (auto& v : two.a) v *= 2;
    push(make_pres_sub(a, two));  // index-2^m sublattice, never torsion-closed
  }
  for (int it = 0; it < count * 3 && (int)out.size() < count; ++it) {
    int rows = (int)(rng() % a.m) + 1;
    IntMatrix extra(rows, a.m);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < a.m; ++j) extra.at(i, j) = Int((int64_t)(rng() % 7)) - 3;
    push(make_pres_sub(a, extra));
  }
  std::sort(out.begin(), out.end(), [](const PresSub& x, const PresSub& y) {
    return to_string(x.lat) < to_string(y.lat);
  });
  return out;
}

}  // namespace galkit
