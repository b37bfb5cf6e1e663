#pragma once
// Deterministic test corpora: all groups of order <= 16, all loops of order
// <= 6 and all rings of order <= 8 up to isomorphism, plus seeded
// f.g.-abelian instances. Groups come from stored recipes (order 16 also
// from central extensions by Z/2); loops from reduced-Latin-square
// backtracking; rings from structure-constant search over the additive
// group. Expected class counts are pinned and re-verified on generation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fgab.hpp"
#include "finalg.hpp"

namespace galkit {

// ---------------------------------------------------------------------------
// Recipes

inline AlgPtr cyclic_group(int n) {
  std::vector<int32_t> t((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i * n + j] = (i + j) % n;
  return make_algebra(Kind::group, n, std::move(t), {});
}

// Tuples over moduli, componentwise addition; index is mixed-radix.
inline AlgPtr abelian_group(const std::vector<int>& mods) {
  int n = 1;
  for (int m : mods) n *= m;
  auto decode = [&](int idx) {
    std::vector<int> t(mods.size());
    for (size_t i = 0; i < mods.size(); ++i) {
      t[i] = idx % mods[i];
      idx /= mods[i];
    }
    return t;
  };
  auto encode = [&](const std::vector<int>& t) {
    int idx = 0;
    for (size_t i = mods.size(); i-- > 0;) idx = idx * mods[i] + t[i];
    return idx;
  };
  std::vector<int32_t> tab((size_t)n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto x = decode(a), y = decode(b);
      std::vector<int> z(mods.size());
      for (size_t i = 0; i < mods.size(); ++i) z[i] = (x[i] + y[i]) % mods[i];
      tab[a * n + b] = encode(z);
    }
  return make_algebra(Kind::group, n, std::move(tab), {});
}

// Order 2k: r^i s^e with s r s^-1 = r^-1. Index i + k*e.
inline AlgPtr dihedral(int k) {
  int n = 2 * k;
  std::vector<int32_t> t((size_t)n * n);
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < 2; ++e)
      for (int j = 0; j < k; ++j)
        for (int f = 0; f < 2; ++f) {
          int a = i + k * e, b = j + k * f;
          int m = e == 0 ? (i + j) % k : ((i - j) % k + k) % k;
          t[a * n + b] = m + k * ((e + f) % 2);
        }
  return make_algebra(Kind::group, n, std::move(t), {});
}

// Order 4k: a^i b^e with a^{2k} = 1, b^2 = a^k, b a b^-1 = a^-1.
inline AlgPtr dicyclic(int k) {
  int c = 2 * k, n = 4 * k;
  std::vector<int32_t> t((size_t)n * n);
  for (int i = 0; i < c; ++i)
    for (int e = 0; e < 2; ++e)
      for (int j = 0; j < c; ++j)
        for (int f = 0; f < 2; ++f) {
          int a = i + c * e, b = j + c * f;
          int m = e == 0 ? (i + j) % c : ((i - j) % c + c) % c;
          int g = e + f;
          if (g == 2) {
            m = (m + k) % c;
            g = 0;
          }
          t[a * n + b] = m + c * g;
        }
  return make_algebra(Kind::group, n, std::move(t), {});
}

namespace detail {

inline std::vector<std::array<int, 4>> even_perms4() {
  std::array<int, 4> p{0, 1, 2, 3};
  std::vector<std::array<int, 4>> out;
  do {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inv;
    if (inv % 2 == 0) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;  // lexicographic, identity first
}

}  // namespace detail

inline AlgPtr alternating4() {
  auto ps = detail::even_perms4();
  int n = (int)ps.size();
  auto find = [&](const std::array<int, 4>& q) {
    for (int i = 0; i < n; ++i)
      if (ps[i] == q) return i;
    throw InternalMismatch("permutation not found");
  };
  std::vector<int32_t> t((size_t)n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::array<int, 4> c;
      for (int i = 0; i < 4; ++i) c[i] = ps[a][ps[b][i]];
      t[a * n + b] = find(c);
    }
  return make_algebra(Kind::group, n, std::move(t), {});
}

inline AlgPtr direct_product_group(const AlgPtr& x, const AlgPtr& y) {
  return product(x, y).obj;
}

// Z/n with ordinary multiplication, and the zero-multiplication ring.
inline AlgPtr cyclic_ring(int n) {
  std::vector<int32_t> add((size_t)n * n), mul((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      add[i * n + j] = (i + j) % n;
      mul[i * n + j] = (i * j) % n;
    }
  return make_algebra(Kind::ring, n, std::move(add), std::move(mul));
}

inline AlgPtr zero_ring(int n) {
  std::vector<int32_t> add((size_t)n * n), mul((size_t)n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) add[i * n + j] = (i + j) % n;
  return make_algebra(Kind::ring, n, std::move(add), std::move(mul));
}

// ---------------------------------------------------------------------------
// Deduplication

namespace detail {

// All chains d1 | d2 | ... | dk (each >= 2) with product n; n = 1 gives {}.
inline std::vector<std::vector<int>> invariant_chains(int n) {
  std::vector<std::vector<int>> chains;
  std::vector<int> acc;
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 1) {
      chains.push_back(acc);
      return;
    }
    for (int d = acc.empty() ? 2 : acc.back(); d <= rest; ++d)
      if (rest % d == 0 && (acc.empty() || d % acc.back() == 0)) {
        acc.push_back(d);
        rec(rest / d);
        acc.pop_back();
      }
  };
  rec(n);
  return chains;
}

// Insert a into the class list unless an isomorphic copy is present.
inline bool add_up_to_iso(std::vector<AlgPtr>& classes, const AlgPtr& a,
                          std::vector<std::string>* keys = nullptr) {
  if (a->n <= 10) {
    std::string key = iso_type(a);
    if (keys) {
      for (const auto& k : *keys)
        if (k == key) return false;
      keys->push_back(key);
      classes.push_back(a);
      return true;
    }
    for (const auto& b : classes)
      if (iso_type(b) == key) return false;
    classes.push_back(a);
    return true;
  }
  for (const auto& b : classes)
    if (fingerprint(b) == fingerprint(a) && isomorphic(a, b)) return false;
  classes.push_back(a);
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Groups of order 16 via central extensions by Z/2

namespace detail {

// Normalized 2-cocycles Q x Q -> Z/2 as bitmasks over (q-1)^2 positions.
// Each extension is the set q x {0,1} with (x,a)(y,b) = (xy, a^b^c(x,y)).
inline std::vector<AlgPtr> central_extensions_by_z2(const AlgPtr& q) {
  int m = q->n - 1;  // nontrivial elements
  int vars = m * m;
  if (vars > 63) throw TooLarge("cocycle solver supports bases of order <= 8");
  auto vidx = [&](int x, int y) { return (x - 1) * m + (y - 1); };

  // Cocycle condition c(x,y) + c(xy,z) + c(y,z) + c(x,yz) = 0 over GF(2),
  // terms with a trivial argument vanish by normalization.
  std::vector<uint64_t> rows;
  for (int x = 1; x < q->n; ++x)
    for (int y = 1; y < q->n; ++y)
      for (int z = 1; z < q->n; ++z) {
        uint64_t r = 0;
        r ^= 1ull << vidx(x, y);
        if (q->op(x, y) != 0) r ^= 1ull << vidx(q->op(x, y), z);
        r ^= 1ull << vidx(y, z);
        if (q->op(y, z) != 0) r ^= 1ull << vidx(x, q->op(y, z));
        if (r) rows.push_back(r);
      }
  // Nullspace basis of the GF(2) system via reduced row echelon form.
  std::vector<uint64_t> rref;
  std::vector<int> piv;
  for (uint64_t r : rows) {
    for (size_t i = 0; i < rref.size(); ++i)
      if (r >> piv[i] & 1) r ^= rref[i];
    if (!r) continue;
    int p = 63 - __builtin_clzll(r);
    for (size_t i = 0; i < rref.size(); ++i)
      if (rref[i] >> p & 1) rref[i] ^= r;
    rref.push_back(r);
    piv.push_back(p);
  }
  std::vector<char> is_pivot(vars, 0);
  for (int p : piv) is_pivot[p] = 1;
  std::vector<uint64_t> null_basis;
  for (int f = 0; f < vars; ++f) {
    if (is_pivot[f]) continue;
    uint64_t v = 1ull << f;  // free coordinate f on, pivots determined by RREF
    for (size_t i = 0; i < rref.size(); ++i)
      if (rref[i] >> f & 1) v |= 1ull << piv[i];
    null_basis.push_back(v);
  }
  // Coboundaries: for each nontrivial u, the cocycle d_u(x,y) = [y=u] ^
  // [xy=u] ^ [x=u] spans B^2; quotient the nullspace by them.
  std::vector<uint64_t> cob;
  for (int u = 1; u < q->n; ++u) {
    uint64_t v = 0;
    for (int x = 1; x < q->n; ++x)
      for (int y = 1; y < q->n; ++y) {
        int bit = (y == u) ^ (q->op(x, y) == u) ^ (x == u);
        if (bit) v ^= 1ull << vidx(x, y);
      }
    cob.push_back(v);
  }
  // Reduce null_basis modulo span(cob): echelonize cob, reduce, dedupe.
  std::vector<uint64_t> cb;
  std::vector<int> cp;
  for (uint64_t r : cob) {
    for (size_t i = 0; i < cb.size(); ++i)
      if (r >> cp[i] & 1) r ^= cb[i];
    if (!r) continue;
    cb.push_back(r);
    cp.push_back(63 - __builtin_clzll(r));
  }
  std::vector<uint64_t> reps;  // representatives of H^2 classes, small count
  std::vector<uint64_t> h2gens;
  for (uint64_t v : null_basis) {
    for (size_t i = 0; i < cb.size(); ++i)
      if (v >> cp[i] & 1) v ^= cb[i];
    if (!v) continue;
    uint64_t r = v;
    for (size_t i = 0; i < h2gens.size(); ++i) {
      int p = 63 - __builtin_clzll(h2gens[i]);
      if (r >> p & 1) r ^= h2gens[i];
    }
    if (r) h2gens.push_back(r);
  }
  if (h2gens.size() > 20) throw TooLarge("unexpectedly large H^2");
  reps.push_back(0);
  for (uint64_t g : h2gens) {
    size_t sz = reps.size();
    for (size_t i = 0; i < sz; ++i) reps.push_back(reps[i] ^ g);
  }

  std::vector<AlgPtr> out;
  int n = 2 * q->n;
  for (uint64_t c : reps) {
    auto cval = [&](int x, int y) -> int {
      if (x == 0 || y == 0) return 0;
      return c >> vidx(x, y) & 1;
    };
    std::vector<int32_t> t((size_t)n * n);
    for (int x = 0; x < q->n; ++x)
      for (int a = 0; a < 2; ++a)
        for (int y = 0; y < q->n; ++y)
          for (int b = 0; b < 2; ++b)
            t[(x + q->n * a) * n + (y + q->n * b)] =
                q->op(x, y) + q->n * (a ^ b ^ cval(x, y));
    out.push_back(make_algebra(Kind::group, n, std::move(t), {}));
  }
  return out;
}

}  // namespace detail

// All groups of a given order <= 16, up to isomorphism.
inline std::vector<AlgPtr> all_groups(int n) {
  if (n < 1 || n > 16) throw TooLarge("group corpus covers orders 1..16");
  std::vector<AlgPtr> out;
  auto add = [&](const AlgPtr& a) { detail::add_up_to_iso(out, a); };
  // Abelian groups: one per invariant chain d1 | d2 | ... with product n.
  for (const auto& ch : detail::invariant_chains(n)) add(abelian_group(ch));
  // Nonabelian recipes.
  if (n % 2 == 0 && n >= 6) add(dihedral(n / 2));
  if (n % 4 == 0 && n >= 8) add(dicyclic(n / 4));
  if (n == 12) add(alternating4());
  if (n == 16) {
    for (const AlgPtr& q : all_groups(8))
      for (const AlgPtr& e : detail::central_extensions_by_z2(q)) add(e);
  }
  std::sort(out.begin(), out.end(),
            [](const AlgPtr& a, const AlgPtr& b) { return iso_type(a) < iso_type(b); });
  return out;
}

// ---------------------------------------------------------------------------
// Loops of order <= 6: reduced Latin squares, deduplicated

inline std::vector<AlgPtr> all_loops(int n) {
  if (n < 1 || n > 6) throw TooLarge("loop corpus covers orders 1..6");
  std::vector<AlgPtr> out;
  std::vector<std::string> keys;
  std::vector<int32_t> t((size_t)n * n, -1);
  for (int j = 0; j < n; ++j) t[j] = j;           // identity row
  for (int i = 0; i < n; ++i) t[i * n] = i;       // identity column
  std::function<void(int)> rec = [&](int cell) {
    if (cell == n * n) {
      std::vector<int32_t> copy = t;
      detail::add_up_to_iso(out, make_algebra(Kind::loop, n, std::move(copy), {}), &keys);
      return;
    }
    int r = cell / n, c = cell % n;
    if (t[cell] != -1) {
      rec(cell + 1);
      return;
    }
    for (int v = 0; v < n; ++v) {
      bool ok = true;
      for (int j = 0; j < c && ok; ++j)
        if (t[r * n + j] == v) ok = false;
      for (int i = 0; i < r && ok; ++i)
        if (t[i * n + c] == v) ok = false;
      if (!ok) continue;
      t[cell] = v;
      rec(cell + 1);
      t[cell] = -1;
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [](const AlgPtr& a, const AlgPtr& b) { return iso_type(a) < iso_type(b); });
  return out;
}

// ---------------------------------------------------------------------------
// Rings of order <= 8: structure constants over each additive group

namespace detail {

struct RingSearch {
  std::vector<int> mods;  // invariant chain of the additive group
  int n = 1, k = 0;
  std::vector<int> gen;                 // element index of each generator
  std::vector<std::vector<int>> coord;  // element -> coordinates
  std::vector<int32_t> add;
  std::vector<std::vector<int>> killed_by;  // gcd value -> sorted elements with d*x=0
  std::vector<int> prod;                    // k*k chosen products, -1 unset
  std::vector<AlgPtr>* out = nullptr;
  std::vector<std::string>* keys = nullptr;

  int encode(const std::vector<int>& tup) const {
    int idx = 0;
    for (size_t i = mods.size(); i-- > 0;) idx = idx * mods[i] + tup[i];
    return idx;
  }
  int scale(int s, int x) const {  // s*x in the additive group
    std::vector<int> t(coord[x]);
    for (size_t i = 0; i < t.size(); ++i) t[i] = (int)(((long long)t[i] * s) % mods[i]);
    return encode(t);
  }
  // x*y via bilinear expansion; -1 when a needed product is unset.
  int mul(int x, int y) const {
    std::vector<int> accum(mods.size(), 0);
    for (int i = 0; i < k; ++i) {
      int xi = coord[x][i];
      if (xi == 0) continue;
      for (int j = 0; j < k; ++j) {
        int yj = coord[y][j];
        if (yj == 0) continue;
        int p = prod[i * k + j];
        if (p < 0) return -1;
        int term = scale(xi * yj, p);
        for (size_t c = 0; c < mods.size(); ++c)
          accum[c] = (accum[c] + coord[term][c]) % mods[c];
      }
    }
    return encode(accum);
  }
  bool assoc_consistent() const {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) {
          int ab = prod[a * k + b], bc = prod[b * k + c];
          if (ab < 0 || bc < 0) continue;
          int lhs = mul(ab, gen[c]);
          int rhs = mul(gen[a], bc);
          if (lhs < 0 || rhs < 0) continue;
          if (lhs != rhs) return false;
        }
    return true;
  }
  void emit() {
    std::vector<int32_t> mt((size_t)n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int v = mul(x, y);
        if (v < 0) throw InternalMismatch("incomplete product table at emit");
        mt[x * n + y] = v;
      }
    std::vector<int32_t> at = add;
    add_up_to_iso(*out, make_algebra(Kind::ring, n, std::move(at), std::move(mt)), keys);
  }
  void rec(int slot) {
    if (slot == k * k) {
      emit();
      return;
    }
    int i = slot / k, j = slot % k;
    int g = std::gcd(mods[i], mods[j]);
    for (int v : killed_by[g]) {
      prod[slot] = v;
      if (assoc_consistent()) rec(slot + 1);
    }
    prod[slot] = -1;
  }
};

}  // namespace detail

inline std::vector<AlgPtr> all_rings(int n) {
  if (n < 1 || n > 8) throw TooLarge("ring corpus covers orders 1..8");
  std::vector<AlgPtr> out;
  std::vector<std::string> keys;
  for (const auto& mods : detail::invariant_chains(n)) {
    detail::RingSearch rs;
    rs.mods = mods;
    rs.k = (int)mods.size();
    rs.n = n;
    rs.out = &out;
    rs.keys = &keys;
    rs.coord.resize(n);
    for (int x = 0; x < n; ++x) {
      int idx = x;
      rs.coord[x].resize(mods.size());
      for (size_t i = 0; i < mods.size(); ++i) {
        rs.coord[x][i] = idx % mods[i];
        idx /= mods[i];
      }
    }
    rs.add.resize((size_t)n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        std::vector<int> s(mods.size());
        for (size_t i = 0; i < mods.size(); ++i)
          s[i] = (rs.coord[x][i] + rs.coord[y][i]) % mods[i];
        rs.add[x * n + y] = rs.encode(s);
      }
    rs.gen.resize(rs.k);
    for (int i = 0; i < rs.k; ++i) {
      std::vector<int> e(mods.size(), 0);
      e[i] = 1;
      rs.gen[i] = rs.encode(e);
    }
    rs.killed_by.assign(n + 1, {});
    for (int d = 1; d <= n; ++d)
      for (int x = 0; x < n; ++x)
        if (rs.scale(d, x) == 0) rs.killed_by[d].push_back(x);
    rs.prod.assign(rs.k * rs.k, -1);
    if (rs.k == 0) {
      rs.emit();
      continue;
    }
    rs.rec(0);
  }
  std::sort(out.begin(), out.end(),
            [](const AlgPtr& a, const AlgPtr& b) { return iso_type(a) < iso_type(b); });
  return out;
}

// ---------------------------------------------------------------------------
// Seeded f.g.-abelian instances (canonical invariant chains, small orders)

inline std::vector<FgAb> fgab_instances(int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FgAb> out;
  std::uniform_int_distribution<int> rank(0, 2), nfac(0, 3), base(2, 6), mult(1, 3);
  while ((int)out.size() < count) {
    FgAb g;
    g.rank = rank(rng);
    int k = nfac(rng);
    Int d = 1;
    for (int i = 0; i < k; ++i) {
      d = i == 0 ? Int(base(rng)) : d * mult(rng);
      if (d > 64) break;
      g.factors.push_back(d);
    }
    out.push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pinned classification counts (regression data; re-verified in tests)

inline const std::map<int, int>& expected_group_counts() {
  static const std::map<int, int> c{{1, 1}, {2, 1},  {3, 1}, {4, 2},  {5, 1}, {6, 2},
                                    {7, 1}, {8, 5},  {9, 2}, {10, 2}, {11, 1}, {12, 5},
                                    {13, 1}, {14, 2}, {15, 1}, {16, 14}};
  return c;
}
inline const std::map<int, int>& expected_loop_counts() {
  static const std::map<int, int> c{{1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 6}, {6, 109}};
  return c;
}
inline const std::map<int, int>& expected_ring_counts() {
  static const std::map<int, int> c{{1, 1}, {2, 2}, {3, 2}, {4, 11},
                                    {5, 2}, {6, 4}, {7, 2}, {8, 52}};
  return c;
}

struct Corpus {
  std::vector<AlgPtr> groups, loops, rings;
  std::vector<FgAb> fgabs;
};

// The standard corpus used by the verification suites. Counts are checked
// against the pinned classification numbers.
inline Corpus standard_corpus(int group_max = 16, int loop_max = 6, int ring_max = 8,
                              int fgab_count = 200, uint64_t seed = 20260815ull) {
  Corpus c;
  for (int n = 1; n <= group_max; ++n) {
    auto g = all_groups(n);
    if (expected_group_counts().count(n) && (int)g.size() != expected_group_counts().at(n))
      throw InternalMismatch(cat("group count at order ", n, ": got ", g.size(), ", expected ",
                                 expected_group_counts().at(n)));
    c.groups.insert(c.groups.end(), g.begin(), g.end());
  }
  for (int n = 1; n <= loop_max; ++n) {
    auto l = all_loops(n);
    if (expected_loop_counts().count(n) && (int)l.size() != expected_loop_counts().at(n))
      throw InternalMismatch(cat("loop count at order ", n, ": got ", l.size(), ", expected ",
                                 expected_loop_counts().at(n)));
    c.loops.insert(c.loops.end(), l.begin(), l.end());
  }
  for (int n = 1; n <= ring_max; ++n) {
    auto r = all_rings(n);
    if (expected_ring_counts().count(n) && (int)r.size() != expected_ring_counts().at(n))
      throw InternalMismatch(cat("ring count at order ", n, ": got ", r.size(), ", expected ",
                                 expected_ring_counts().at(n)));
    c.rings.insert(c.rings.end(), r.begin(), r.end());
  }
  c.fgabs = fgab_instances(fgab_count, seed);
  return c;
}

}  // namespace galkit
