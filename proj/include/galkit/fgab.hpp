#pragma once
// Finitely generated abelian groups via integer matrices: Smith/Hermite
// normal forms, presentations, subgroup/quotient/kernel/image calculus,
// tensor and exterior square. All arithmetic is exact (cpp_int).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "util.hpp"

namespace galkit {

using Int = boost::multiprecision::cpp_int;

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}
  Int& at(int i, int j) { return a[(size_t)i * cols + j]; }
  const Int& at(int i, int j) const { return a[(size_t)i * cols + j]; }
  bool operator==(const IntMatrix&) const = default;

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rws, int cols) {
    IntMatrix m((int)rws.size(), cols);
    for (int i = 0; i < m.rows; ++i) {
      if ((int)rws[i].size() != cols) throw BasisMismatch("row length mismatch");
      for (int j = 0; j < cols; ++j) m.at(i, j) = rws[i][j];
    }
    return m;
  }
  IntMatrix transposed() const {
    IntMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }
  std::vector<Int> row(int i) const {
    return std::vector<Int>(a.begin() + (size_t)i * cols, a.begin() + (size_t)(i + 1) * cols);
  }
};

inline IntMatrix matmul(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw BasisMismatch("matmul shape mismatch");
  IntMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
    }
  return z;
}

inline std::vector<Int> matvec(const IntMatrix& m, const std::vector<Int>& x) {
  if ((int)x.size() != m.cols) throw BasisMismatch("matvec shape mismatch");
  std::vector<Int> y(m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[i] += m.at(i, j) * x[j];
  return y;
}

// Fraction-free determinant (Bareiss).
inline Int determinant(IntMatrix m) {
  if (m.rows != m.cols) throw BasisMismatch("determinant of non-square matrix");
  int n = m.rows;
  Int prev = 1, sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form. u*m*v = d with u, v unimodular, d diagonal, nonnegative,
// d[0] | d[1] | ... Pivot rule: smallest nonzero absolute value in the
// remaining block, ties broken row-major.

struct SnfResult {
  IntMatrix d, u, v, vinv;
};

inline SnfResult smith_normal_form(const IntMatrix& m0) {
  SnfResult r;
  r.d = m0;
  r.u = IntMatrix::identity(m0.rows);
  r.v = IntMatrix::identity(m0.cols);
  r.vinv = IntMatrix::identity(m0.cols);
  IntMatrix& d = r.d;
  int R = d.rows, C = d.cols;

  auto row_swap = [&](int i, int j) {
    if (i == j) return;
    for (int c = 0; c < C; ++c) std::swap(d.at(i, c), d.at(j, c));
    for (int c = 0; c < R; ++c) std::swap(r.u.at(i, c), r.u.at(j, c));
  };
  auto col_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < R; ++k) std::swap(d.at(k, i), d.at(k, j));
    for (int k = 0; k < C; ++k) std::swap(r.v.at(k, i), r.v.at(k, j));
    for (int c = 0; c < C; ++c) std::swap(r.vinv.at(i, c), r.vinv.at(j, c));
  };
  auto row_add = [&](int dst, int src, const Int& q) {  // row_dst += q*row_src
    if (q == 0) return;
    for (int c = 0; c < C; ++c) d.at(dst, c) += q * d.at(src, c);
    for (int c = 0; c < R; ++c) r.u.at(dst, c) += q * r.u.at(src, c);
  };
  auto col_add = [&](int dst, int src, const Int& q) {  // col_dst += q*col_src
    if (q == 0) return;
    for (int k = 0; k < R; ++k) d.at(k, dst) += q * d.at(k, src);
    for (int k = 0; k < C; ++k) r.v.at(k, dst) += q * r.v.at(k, src);
    for (int c = 0; c < C; ++c) r.vinv.at(src, c) -= q * r.vinv.at(dst, c);
  };
  auto row_negate = [&](int i) {
    for (int c = 0; c < C; ++c) d.at(i, c) = -d.at(i, c);
    for (int c = 0; c < R; ++c) r.u.at(i, c) = -r.u.at(i, c);
  };

  int t = 0;
  for (; t < std::min(R, C); ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      Int pv = 0;
      for (int i = t; i < R; ++i)
        for (int j = t; j < C; ++j) {
          const Int& x = d.at(i, j);
          if (x == 0) continue;
          Int ax = abs(x);
          if (pi < 0 || ax < pv) {
            pi = i;
            pj = j;
            pv = ax;
          }
        }
      if (pi < 0) goto done;
      row_swap(t, pi);
      col_swap(t, pj);
      bool clean = true;
      for (int i = t + 1; i < R; ++i)
        if (d.at(i, t) != 0) {
          Int q = d.at(i, t) / d.at(t, t);
          row_add(i, t, -q);
          if (d.at(i, t) != 0) clean = false;
        }
      for (int j = t + 1; j < C; ++j)
        if (d.at(t, j) != 0) {
          Int q = d.at(t, j) / d.at(t, t);
          col_add(j, t, -q);
          if (d.at(t, j) != 0) clean = false;
        }
      if (!clean) continue;
      int bi = -1;
      for (int i = t + 1; i < R && bi < 0; ++i)
        for (int j = t + 1; j < C; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            bi = i;
            break;
          }
      if (bi >= 0) {
        row_add(t, bi, 1);
        continue;
      }
      break;
    }
    if (d.at(t, t) < 0) row_negate(t);
  }
done:
  return r;
}

// Basis of {x : m*x = 0} as matrix columns.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  SnfResult s = smith_normal_form(m);
  int mn = std::min(m.rows, m.cols);
  std::vector<int> free_cols;
  for (int j = 0; j < m.cols; ++j)
    if (j >= mn || s.d.at(j, j) == 0) free_cols.push_back(j);
  IntMatrix k(m.cols, (int)free_cols.size());
  for (size_t idx = 0; idx < free_cols.size(); ++idx)
    for (int i = 0; i < m.cols; ++i) k.at(i, (int)idx) = s.v.at(i, free_cols[idx]);
  return k;
}

// ---------------------------------------------------------------------------
// Row-style Hermite normal form: canonical basis of the row-span lattice.
// Pivots positive, entries above a pivot reduced into [0, pivot).

inline IntMatrix hermite_rows(IntMatrix m) {
  int R = m.rows, C = m.cols;
  auto row_sub = [&](int dst, int src, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < C; ++c) m.at(dst, c) -= q * m.at(src, c);
  };
  int r = 0;
  for (int c = 0; c < C && r < R; ++c) {
    for (;;) {
      int best = -1;
      Int bv = 0;
      for (int i = r; i < R; ++i) {
        if (m.at(i, c) == 0) continue;
        Int av = abs(m.at(i, c));
        if (best < 0 || av < bv) {
          best = i;
          bv = av;
        }
      }
      if (best < 0) break;
      if (best != r)
        for (int j = 0; j < C; ++j) std::swap(m.at(best, j), m.at(r, j));
      bool lone = true;
      for (int i = r + 1; i < R; ++i)
        if (m.at(i, c) != 0) {
          row_sub(i, r, m.at(i, c) / m.at(r, c));
          if (m.at(i, c) != 0) lone = false;
        }
      if (lone) break;
    }
    if (m.at(r, c) == 0) continue;
    if (m.at(r, c) < 0)
      for (int j = 0; j < C; ++j) m.at(r, j) = -m.at(r, j);
    for (int i = 0; i < r; ++i) {
      Int v = m.at(i, c), p = m.at(r, c);
      Int q = v / p;
      if (v % p < 0) q -= 1;  // floor
      row_sub(i, r, q);
    }
    ++r;
  }
  IntMatrix out(r, C);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < C; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

// Coordinates of v in the HNF row basis b, if v lies in the lattice.
inline std::optional<std::vector<Int>> solve_in_hermite(const IntMatrix& b,
                                                        std::vector<Int> v) {
  if ((int)v.size() != b.cols) throw BasisMismatch("solve_in_hermite length mismatch");
  std::vector<Int> coeff(b.rows);
  for (int i = 0; i < b.rows; ++i) {
    int c = 0;
    while (c < b.cols && b.at(i, c) == 0) ++c;
    if (c == b.cols) continue;
    if (v[c] % b.at(i, c) != 0) return std::nullopt;
    Int q = v[c] / b.at(i, c);
    coeff[i] = q;
    if (q != 0)
      for (int j = 0; j < b.cols; ++j) v[j] -= q * b.at(i, j);
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return coeff;
}

inline bool lattice_contains(const IntMatrix& hnf_basis, const std::vector<Int>& v) {
  return solve_in_hermite(hnf_basis, v).has_value();
}

inline bool lattice_leq(const IntMatrix& gens, const IntMatrix& hnf_basis) {
  for (int i = 0; i < gens.rows; ++i)
    if (!lattice_contains(hnf_basis, gens.row(i))) return false;
  return true;
}

inline IntMatrix stack_rows(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows == 0) return b;
  if (b.rows == 0) return a;
  if (a.cols != b.cols) throw BasisMismatch("stack_rows width mismatch");
  IntMatrix s(a.rows + b.rows, a.cols);
  std::copy(a.a.begin(), a.a.end(), s.a.begin());
  std::copy(b.a.begin(), b.a.end(), s.a.begin() + a.a.size());
  return s;
}

// Saturation of the row lattice: (Q-span of rows) intersected with Z^cols.
inline IntMatrix saturate_rows(const IntMatrix& m) {
  SnfResult s = smith_normal_form(m);
  int rank = 0;
  for (int i = 0; i < std::min(m.rows, m.cols); ++i)
    if (s.d.at(i, i) != 0) ++rank;
  IntMatrix out(rank, m.cols);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < m.cols; ++j) out.at(i, j) = s.vinv.at(i, j);
  return hermite_rows(out);
}

// Intersection of two row lattices.
inline IntMatrix intersect_rows(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.cols) throw BasisMismatch("intersect_rows width mismatch");
  if (a.rows == 0 || b.rows == 0) return IntMatrix(0, a.cols);
  // x = y*a = z*b  <=>  (y, z) in the left kernel of [a; -b].
  IntMatrix stacked(a.rows + b.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) stacked.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < b.cols; ++j) stacked.at(a.rows + i, j) = -b.at(i, j);
  IntMatrix k = integer_kernel(stacked.transposed());  // columns (y,z)
  IntMatrix gens(k.cols, a.cols);
  for (int g = 0; g < k.cols; ++g)
    for (int j = 0; j < a.cols; ++j) {
      Int v = 0;
      for (int i = 0; i < a.rows; ++i) v += k.at(i, g) * a.at(i, j);
      gens.at(g, j) = v;
    }
  return hermite_rows(gens);
}

// ---------------------------------------------------------------------------
// Canonical f.g. abelian groups

struct FgAb {
  int rank = 0;
  std::vector<Int> factors;  // invariant factors >= 2, factors[i] | factors[i+1]
  bool operator==(const FgAb&) const = default;
  int gens() const { return rank + (int)factors.size(); }
  bool finite() const { return rank == 0; }
  Int order() const {  // 0 when infinite
    if (rank > 0) return 0;
    Int o = 1;
    for (const auto& f : factors) o *= f;
    return o;
  }
  Int exponent() const {  // 0 when infinite
    if (rank > 0) return 0;
    return factors.empty() ? Int(1) : factors.back();
  }
};

inline std::string to_string(const FgAb& g) {
  std::string s;
  if (g.rank == 1) s = "Z";
  else if (g.rank > 1) s = cat("Z^", g.rank);
  for (const auto& f : g.factors) s += cat(s.empty() ? "" : " x ", "Z/", f);
  return s.empty() ? "0" : s;
}

// Cokernel of the relation rows acting on Z^cols.
inline FgAb from_presentation(const IntMatrix& relations) {
  FgAb g;
  if (relations.rows == 0) {
    g.rank = relations.cols;
    return g;
  }
  SnfResult s = smith_normal_form(relations);
  int nonzero = 0;
  for (int i = 0; i < std::min(relations.rows, relations.cols); ++i)
    if (s.d.at(i, i) != 0) {
      ++nonzero;
      if (s.d.at(i, i) > 1) g.factors.push_back(s.d.at(i, i));
    }
  g.rank = relations.cols - nonzero;
  return g;
}

// Invariant-factor form of Z^rank + sum of Z/moduli (modulus 0 means Z).
inline FgAb canonical_cyclics(int rank, const std::vector<Int>& moduli) {
  std::vector<Int> torsion;
  for (const auto& m : moduli) {
    if (m < 0) throw BasisMismatch("negative modulus");
    if (m == 0) ++rank;
    else if (m > 1) torsion.push_back(m);
  }
  IntMatrix d((int)torsion.size(), (int)torsion.size());
  for (size_t i = 0; i < torsion.size(); ++i) d.at((int)i, (int)i) = torsion[i];
  FgAb g = from_presentation(d);
  g.rank += rank;
  return g;
}

inline FgAb torsion(const FgAb& g) { return FgAb{0, g.factors}; }
inline FgAb tf_quotient(const FgAb& g) { return FgAb{g.rank, {}}; }

inline FgAb tensor(const FgAb& x, const FgAb& y) {
  std::vector<Int> mods;
  for (const auto& d : x.factors)
    for (const auto& e : y.factors) mods.push_back(gcd(d, e));
  for (const auto& d : x.factors)
    for (int i = 0; i < y.rank; ++i) mods.push_back(d);
  for (const auto& e : y.factors)
    for (int i = 0; i < x.rank; ++i) mods.push_back(e);
  return canonical_cyclics(x.rank * y.rank, mods);
}

// Lambda^2(sum C_i) = sum_{i<j} C_i (x) C_j, Lambda^2(cyclic) = 0.
inline FgAb exterior_square(const FgAb& g) {
  std::vector<Int> parts;  // 0 = Z
  for (int i = 0; i < g.rank; ++i) parts.push_back(0);
  for (const auto& f : g.factors) parts.push_back(f);
  int rank = 0;
  std::vector<Int> mods;
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = i + 1; j < parts.size(); ++j) {
      if (parts[i] == 0 && parts[j] == 0) ++rank;
      else if (parts[i] == 0) mods.push_back(parts[j]);
      else if (parts[j] == 0) mods.push_back(parts[i]);
      else mods.push_back(gcd(parts[i], parts[j]));
    }
  return canonical_cyclics(rank, mods);
}

// Relation lattice of the canonical presentation (rows d_i * e_{rank+i}).
inline IntMatrix relation_rows(const FgAb& g) {
  IntMatrix r((int)g.factors.size(), g.gens());
  for (size_t i = 0; i < g.factors.size(); ++i) r.at((int)i, g.rank + (int)i) = g.factors[i];
  return r;
}

// Isomorphism type of span(sub_rows)/span(rel_rows); rel must lie inside sub.
inline FgAb quotient_of_lattices(const IntMatrix& sub_rows, const IntMatrix& rel_rows) {
  IntMatrix basis = hermite_rows(sub_rows);
  if (basis.rows == 0) return FgAb{};
  std::vector<std::vector<Int>> coeffs;
  for (int i = 0; i < rel_rows.rows; ++i) {
    auto c = solve_in_hermite(basis, rel_rows.row(i));
    if (!c) throw BasisMismatch("relation lattice not inside subgroup lattice");
    coeffs.push_back(*c);
  }
  return from_presentation(IntMatrix::from_rows(coeffs, basis.rows));
}

// Subgroup of g generated by elements (coordinate vectors in the canonical
// basis, length g.gens()).
inline FgAb subgroup(const FgAb& g, const std::vector<std::vector<Int>>& elements) {
  IntMatrix gens = IntMatrix::from_rows(elements, g.gens());
  IntMatrix rel = relation_rows(g);
  return quotient_of_lattices(stack_rows(gens, rel), rel);
}

// Quotient of g by the subgroup generated by elements.
inline FgAb quotient(const FgAb& g, const std::vector<std::vector<Int>>& elements) {
  IntMatrix gens = IntMatrix::from_rows(elements, g.gens());
  return from_presentation(stack_rows(gens, relation_rows(g)));
}

// ---------------------------------------------------------------------------
// Maps between canonical groups

struct FgAbMap {
  FgAb dom, cod;
  IntMatrix m;  // cod.gens() x dom.gens(); column j = image of generator j
};

inline void validate_map(const FgAbMap& f) {
  if (f.m.rows != f.cod.gens() || f.m.cols != f.dom.gens())
    throw BasisMismatch("map matrix shape does not match generator counts");
  for (int j = 0; j < f.dom.gens(); ++j) {
    if (j < f.dom.rank) continue;  // free generator: unconstrained
    const Int& d = f.dom.factors[j - f.dom.rank];
    for (int i = 0; i < f.cod.gens(); ++i) {
      Int v = d * f.m.at(i, j);
      if (i < f.cod.rank) {
        if (v != 0) throw BasisMismatch(cat("torsion generator ", j, " maps outside torsion"));
      } else if (v % f.cod.factors[i - f.cod.rank] != 0) {
        throw BasisMismatch(cat("relation of generator ", j, " is not respected"));
      }
    }
  }
}

inline FgAbMap make_map(FgAb dom, FgAb cod, IntMatrix m) {
  FgAbMap f{std::move(dom), std::move(cod), std::move(m)};
  validate_map(f);
  return f;
}

struct KernelImage {
  FgAb kernel, image;
};

inline KernelImage kernel_image(const FgAbMap& f) {
  KernelImage out;
  std::vector<std::vector<Int>> cols;
  for (int j = 0; j < f.m.cols; ++j) {
    std::vector<Int> c(f.m.rows);
    for (int i = 0; i < f.m.rows; ++i) c[i] = f.m.at(i, j);
    cols.push_back(std::move(c));
  }
  out.image = subgroup(f.cod, cols);
  // Kernel lattice: x with m*x in rel(cod); solve [m | -rel(cod)^T] (x,y) = 0.
  IntMatrix relc = relation_rows(f.cod);
  IntMatrix stacked(f.cod.gens(), f.dom.gens() + relc.rows);
  for (int i = 0; i < f.cod.gens(); ++i) {
    for (int j = 0; j < f.dom.gens(); ++j) stacked.at(i, j) = f.m.at(i, j);
    for (int r = 0; r < relc.rows; ++r) stacked.at(i, f.dom.gens() + r) = -relc.at(r, i);
  }
  IntMatrix k = integer_kernel(stacked);
  IntMatrix khat(k.cols, f.dom.gens());
  for (int g = 0; g < k.cols; ++g)
    for (int j = 0; j < f.dom.gens(); ++j) khat.at(g, j) = k.at(j, g);
  IntMatrix reld = relation_rows(f.dom);
  out.kernel = quotient_of_lattices(stack_rows(khat, reld), reld);
  return out;
}

}  // namespace galkit
