#pragma once

// Group cohomology in degree 2 with finite cyclic coefficients, and the
// Schur multiplier reconstructed from it through universal coefficients.
// Everything reduces to linear algebra over Z/p^k on the normalised cocycle
// system, which keeps the arithmetic in machine words.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include <galkit/fgab.hpp>
#include <galkit/finalg.hpp>
#include <galkit/reflect.hpp>

namespace galkit {

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t q) {
  return (uint64_t)((unsigned __int128)a * b % q);
}

inline uint64_t modinv_u64(uint64_t a, uint64_t q) {
  int64_t t = 0, nt = 1, r = (int64_t)q, nr = (int64_t)(a % q);
  while (nr != 0) {
    int64_t d = r / nr;
    t -= d * nt;
    std::swap(t, nt);
    r -= d * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw InternalMismatch("modular inverse of a non-unit");
  return (uint64_t)(t < 0 ? t + (int64_t)q : t);
}

inline int valuation_u64(uint64_t x, uint64_t p) {
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Diagonalises m (entries already reduced mod q = p^k) by invertible row and
// column operations over Z/q, always pivoting on an entry of minimal
// p-valuation so that every elimination divides exactly. Returns the pivot
// valuations. Column operations are mirrored into V (x = V y) and W = V^-1
// when supplied.
inline std::vector<int> diagonalize_mod_pk(std::vector<std::vector<uint64_t>>& m, int cols,
                                           uint64_t p, uint64_t q,
                                           std::vector<std::vector<uint64_t>>* vt,
                                           std::vector<std::vector<uint64_t>>* wt) {
  int rows = (int)m.size();
  std::vector<int> evals;
  int lim = rows < cols ? rows : cols;
  for (int r = 0; r < lim; ++r) {
    int bi = -1, bj = -1, bv = 0;
    for (int i = r; i < rows; ++i)
      for (int j = r; j < cols; ++j) {
        uint64_t x = m[i][j];
        if (!x) continue;
        int v = valuation_u64(x, p);
        if (bi < 0 || v < bv) {
          bi = i;
          bj = j;
          bv = v;
          if (v == 0) goto found;
        }
      }
  found:
    if (bi < 0) break;
    std::swap(m[r], m[bi]);
    if (bj != r) {
      for (auto& row : m) std::swap(row[r], row[bj]);
      if (vt)
        for (auto& row : *vt) std::swap(row[r], row[bj]);
      if (wt) std::swap((*wt)[r], (*wt)[bj]);
    }
    uint64_t pv = 1;
    for (int t = 0; t < bv; ++t) pv *= p;
    uint64_t inv = modinv_u64(m[r][r] / pv, q);
    for (int j = r; j < cols; ++j) m[r][j] = mulmod_u64(m[r][j], inv, q);
    for (int i = 0; i < rows; ++i) {
      if (i == r || !m[i][r]) continue;
      uint64_t t = m[i][r] / pv;  // exact: the pivot has minimal valuation
      for (int j = r; j < cols; ++j) {
        uint64_t s = mulmod_u64(t, m[r][j], q);
        m[i][j] = m[i][j] >= s ? m[i][j] - s : m[i][j] + q - s;
      }
    }
    for (int j = 0; j < cols; ++j) {
      if (j == r || !m[r][j]) continue;
      uint64_t t = m[r][j] / pv;
      m[r][j] = 0;  // the only nonzero entry of column r is the pivot row
      if (vt)
        for (auto& row : *vt) {
          uint64_t s = mulmod_u64(t, row[r], q);
          row[j] = row[j] >= s ? row[j] - s : row[j] + q - s;
        }
      if (wt)
        for (int c = 0; c < cols; ++c)
          (*wt)[r][c] = ((*wt)[r][c] + mulmod_u64(t, (*wt)[j][c], q)) % q;
    }
    evals.push_back(bv);
  }
  return evals;
}

// Exponents e with H^2(B, Z/p^k) = direct sum of Z/p^e: solve the normalised
// cocycle system mod p^k, change to diagonal coordinates, then divide by the
// coboundary lattice with a second diagonalisation.
inline std::vector<int> h2_exponents(const AlgPtr& b, uint64_t p, int k) {
  const FiniteAlgebra& g = *b;
  const int n = g.n;
  if (n == 1) return {};
  uint64_t q = 1;
  for (int t = 0; t < k; ++t) q *= p;
  const int kv = (n - 1) * (n - 1);
  auto vid = [&](int x, int y) { return (x - 1) * (n - 1) + (y - 1); };

  std::vector<std::vector<uint64_t>> m;
  m.reserve((size_t)(n - 1) * (n - 1) * (n - 1));
  std::vector<uint64_t> row((size_t)kv);
  auto bump = [&](int idx, uint64_t d) { row[idx] = (row[idx] + d) % q; };
  for (int a = 1; a < n; ++a)
    for (int x = 1; x < n; ++x)
      for (int c = 1; c < n; ++c) {
        std::fill(row.begin(), row.end(), 0);
        bump(vid(a, x), 1);
        int ax = g.op(a, x);
        if (ax) bump(vid(ax, c), 1);
        bump(vid(x, c), q - 1);
        int xc = g.op(x, c);
        if (xc) bump(vid(a, xc), q - 1);
        bool zero = true;
        for (uint64_t e : row)
          if (e) {
            zero = false;
            break;
          }
        if (!zero) m.push_back(row);
      }

  std::vector<std::vector<uint64_t>> vt(kv, std::vector<uint64_t>(kv, 0));
  std::vector<std::vector<uint64_t>> wt(kv, std::vector<uint64_t>(kv, 0));
  for (int i = 0; i < kv; ++i) vt[i][i] = wt[i][i] = 1;
  std::vector<int> evals = diagonalize_mod_pk(m, kv, p, q, &vt, &wt);

  // Summand t of the solution group has order p^sume[t] in the diagonal
  // coordinates y = W x.
  std::vector<int> sume(kv, k);
  for (size_t t = 0; t < evals.size(); ++t) sume[t] = evals[t];

  std::vector<int> keep;  // summands with nontrivial order
  for (int t = 0; t < kv; ++t)
    if (sume[t] > 0) keep.push_back(t);
  const int s = (int)keep.size();
  if (s == 0) return {};

  std::vector<std::vector<uint64_t>> rel;
  for (int t = 0; t < s; ++t) {
    std::vector<uint64_t> r((size_t)s, 0);
    uint64_t o = 1;
    for (int e = 0; e < sume[keep[t]]; ++e) o *= p;
    r[t] = o % q;
    rel.push_back(std::move(r));
  }
  for (int u = 1; u < n; ++u) {
    std::fill(row.begin(), row.end(), 0);
    for (int x = 1; x < n; ++x)
      for (int y = 1; y < n; ++y) {
        uint64_t d = 0;
        if (y == u) d += 1;
        if (x == u) d += 1;
        if (g.op(x, y) == u) d += q - 1;
        if (d) bump(vid(x, y), d);
      }
    // y-coordinates of the coboundary, then scale each kept summand down
    std::vector<uint64_t> r((size_t)s, 0);
    for (int t = 0; t < s; ++t) {
      int col = keep[t];
      uint64_t y = 0;
      for (int c = 0; c < kv; ++c) y = (y + mulmod_u64(wt[col][c], row[c], q)) % q;
      uint64_t scale = 1;
      for (int e = sume[col]; e < k; ++e) scale *= p;
      if (y % scale) throw InternalMismatch("coboundary is not a cocycle in diagonal coordinates");
      r[t] = y / scale;
    }
    rel.push_back(std::move(r));
  }
  // Relation rows p^k reduce to zero mod q, so coordinates of full order may
  // end up without a pivot; they survive as Z/p^k summands.
  std::vector<int> fes = diagonalize_mod_pk(rel, s, p, q, nullptr, nullptr);
  std::vector<int> out;
  for (int f : fes)
    if (f > 0) out.push_back(f);
  for (int t = (int)fes.size(); t < s; ++t) out.push_back(k);
  return out;
}

inline std::vector<std::pair<uint64_t, int>> prime_power_split(long long m) {
  std::vector<std::pair<uint64_t, int>> out;
  for (long long p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      int k = 0;
      while (m % p == 0) {
        m /= p;
        ++k;
      }
      out.push_back({(uint64_t)p, k});
    }
  if (m > 1) out.push_back({(uint64_t)m, 1});
  return out;
}

inline int t1_element_order(const FiniteAlgebra& a, int x) {
  int y = x, c = 1;
  while (y != 0) {
    y = a.op(y, x);
    ++c;
  }
  return c;
}

}  // namespace detail

// H^2(B, Z/m) for a finite group table, as a canonical finite abelian group.
// Coefficients split over the prime powers of m.
inline FgAb h2_mod(const AlgPtr& b, long long m) {
  if (b->kind != Kind::group) throw AmbientMismatch("h2_mod expects a group table");
  if (m < 2) throw ParseError("h2_mod needs a modulus of at least 2");
  std::vector<Int> orders;
  for (auto [p, k] : detail::prime_power_split(m))
    for (int e : detail::h2_exponents(b, p, k)) {
      Int o = 1;
      for (int t = 0; t < e; ++t) o *= (long long)p;
      orders.push_back(o);
    }
  return canonical_cyclics(0, orders);
}

// Invariant factors of a finite abelian group table, ascending divisibility.
// An element of maximal order always splits off as a direct summand, so peel
// one and recurse on the quotient table.
inline std::vector<long long> abelian_invariants(const AlgPtr& b) {
  if (b->kind != Kind::group || !is_abelian_t1(b))
    throw AmbientMismatch("abelian invariants need an abelian group table");
  std::vector<long long> out;
  AlgPtr cur = b;
  while (cur->n > 1) {
    int best = 1, bo = 1;
    for (int x = 1; x < cur->n; ++x) {
      int o = detail::t1_element_order(*cur, x);
      if (o > bo) {
        bo = o;
        best = x;
      }
    }
    std::vector<int32_t> cyc;
    int y = best;
    while (y != 0) {
      cyc.push_back(y);
      y = cur->op(y, best);
    }
    cyc.push_back(0);
    out.push_back(bo);
    cur = quotient(cur, normal_subobject(cur, cyc)).obj;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Schur multiplier H_2(B) reconstructed from h2_mod at prime-power moduli:
// universal coefficients give H^2(B, Z/p^k) = Hom(H_2, Z/p^k) + Ext(B^ab,
// Z/p^k); the Ext part is known from the abelianisation, the Hom parts for
// ascending k determine the p-part of H_2. Any inconsistency between moduli
// is an internal error.
inline FgAb schur_multiplier(const AlgPtr& b, int bound = 16) {
  if (b->kind != Kind::group) throw AmbientMismatch("schur_multiplier expects a group table");
  if (b->n > bound) throw TooLarge(cat("group of order ", b->n, " exceeds the bound ", bound));
  if (b->n == 1) return FgAb{};

  auto refl = reflector_ab().reflect(b);
  std::vector<long long> dinv = abelian_invariants(refl.obj);
  long long expo = 1;
  for (int x = 0; x < b->n; ++x) {
    long long o = detail::t1_element_order(*b, x);
    expo = expo / std::gcd(expo, o) * o;
  }

  std::vector<long long> primes;
  for (long long p = 2, n = b->n; n > 1; ++p)
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }

  std::vector<Int> orders;
  for (long long p : primes) {
    int kmax = 0;
    for (long long pk = p; pk <= expo; pk *= p) ++kmax;
    std::vector<std::multiset<int>> rem(kmax + 1);
    for (int k = 1; k <= kmax; ++k) {
      std::multiset<int> have;
      for (int e : detail::h2_exponents(b, (uint64_t)p, k)) have.insert(e);
      for (long long d : dinv) {
        int v = 0;
        while (d % p == 0) {
          d /= p;
          ++v;
        }
        int e = v < k ? v : k;
        if (e == 0) continue;
        auto it = have.find(e);
        if (it == have.end())
          throw InternalMismatch(cat("universal coefficients failed at p=", p, " k=", k));
        have.erase(it);
      }
      rem[k] = std::move(have);
    }
    for (int k = 1; k < kmax; ++k) {
      std::multiset<int> expect;
      for (int v : rem[kmax]) expect.insert(v < k ? v : k);
      if (expect != rem[k])
        throw InternalMismatch(cat("inconsistent multiplier truncations at p=", p, " k=", k));
    }
    for (int v : rem[kmax]) {
      Int o = 1;
      for (int t = 0; t < v; ++t) o *= p;
      orders.push_back(o);
    }
  }
  return canonical_cyclics(0, orders);
}

}  // namespace galkit
