#pragma once
// Hand-built reference algebras for cross-checking the recipe builders.
// Constructions here are independent of corpus.hpp: permutation composition
// and literal tables only.

#include <algorithm>
#include <vector>

#include "galkit/finalg.hpp"

namespace tables {

using galkit::AlgPtr;
using galkit::Kind;
using galkit::make_algebra;

// Symmetric group on m points via explicit permutation composition.
// Permutations are listed lexicographically, so index 0 is the identity.
inline AlgPtr perm_group(int m) {
  std::vector<std::vector<int>> ps;
  std::vector<int> p(m);
  for (int i = 0; i < m; ++i) p[i] = i;
  do {
    ps.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  int n = (int)ps.size();
  auto find = [&](const std::vector<int>& q) {
    return (int)(std::lower_bound(ps.begin(), ps.end(), q) - ps.begin());
  };
  std::vector<int32_t> t((size_t)n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(m);
      for (int i = 0; i < m; ++i) c[i] = ps[a][ps[b][i]];
      t[a * n + b] = find(c);
    }
  return make_algebra(Kind::group, n, std::move(t), {});
}

// Quaternion group: 1, -1, i, -i, j, -j, k, -k in that order.
inline AlgPtr quaternion_group() {
  // clang-format off
  std::vector<int32_t> t = {
      0, 1, 2, 3, 4, 5, 6, 7,
      1, 0, 3, 2, 5, 4, 7, 6,
      2, 3, 1, 0, 6, 7, 5, 4,
      3, 2, 0, 1, 7, 6, 4, 5,
      4, 5, 7, 6, 1, 0, 2, 3,
      5, 4, 6, 7, 0, 1, 3, 2,
      6, 7, 4, 5, 3, 2, 1, 0,
      7, 6, 5, 4, 2, 3, 0, 1,
  };
  // clang-format on
  return make_algebra(Kind::group, 8, std::move(t), {});
}

// Upper-triangular 2x2 matrices over F2: element (a, b, c) = [[a, b], [0, c]]
// encoded as a*4 + b*2 + c. Noncommutative, 8 elements.
inline AlgPtr ut2_f2_ring() {
  int n = 8;
  auto A = [](int x) { return x >> 2 & 1; };
  auto B = [](int x) { return x >> 1 & 1; };
  auto C = [](int x) { return x & 1; };
  auto enc = [](int a, int b, int c) { return a * 4 + b * 2 + c; };
  std::vector<int32_t> add((size_t)n * n), mul((size_t)n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      add[x * n + y] = enc(A(x) ^ A(y), B(x) ^ B(y), C(x) ^ C(y));
      mul[x * n + y] = enc(A(x) & A(y), (A(x) & B(y)) ^ (B(x) & C(y)), C(x) & C(y));
    }
  return make_algebra(Kind::ring, n, std::move(add), std::move(mul));
}

// Direct product of two rings on index pairs (x, y) -> x*n2 + y.
inline AlgPtr ring_product(const AlgPtr& r1, const AlgPtr& r2) {
  int n = r1->n * r2->n;
  std::vector<int32_t> add((size_t)n * n), mul((size_t)n * n);
  auto enc = [&](int x, int y) { return x * r2->n + y; };
  for (int x1 = 0; x1 < r1->n; ++x1)
    for (int y1 = 0; y1 < r2->n; ++y1)
      for (int x2 = 0; x2 < r1->n; ++x2)
        for (int y2 = 0; y2 < r2->n; ++y2) {
          add[enc(x1, y1) * n + enc(x2, y2)] = enc(r1->add(x1, x2), r2->add(y1, y2));
          mul[enc(x1, y1) * n + enc(x2, y2)] = enc(r1->mul(x1, x2), r2->mul(y1, y2));
        }
  return make_algebra(Kind::ring, n, std::move(add), std::move(mul));
}

// Exhaustive from-scratch enumeration of group tables with identity 0,
// deduplicated by canonical form. Backtracking over cells with Latin and
// associativity pruning; independent of the recipe constructions.
inline std::vector<AlgPtr> brute_groups(int n) {
  std::vector<AlgPtr> out;
  std::vector<std::string> seen;
  std::vector<int> t((size_t)n * n, -1);
  for (int j = 0; j < n; ++j) t[j] = j;
  for (int i = 0; i < n; ++i) t[i * n] = i;
  auto assoc_ok = [&]() {
    for (int a = 1; a < n; ++a)
      for (int b = 1; b < n; ++b) {
        int ab = t[a * n + b];
        if (ab < 0) continue;
        for (int c = 1; c < n; ++c) {
          int bc = t[b * n + c];
          if (bc < 0) continue;
          int l = t[ab * n + c], r = t[a * n + bc];
          if (l >= 0 && r >= 0 && l != r) return false;
        }
      }
    return true;
  };
  std::function<void(int)> rec = [&](int cell) {
    if (cell == n * n) {
      std::vector<int32_t> copy(t.begin(), t.end());
      AlgPtr g = make_algebra(Kind::group, n, std::move(copy), {});
      std::string key = galkit::iso_type(g);
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
        seen.push_back(key);
        out.push_back(g);
      }
      return;
    }
    if (t[cell] != -1) {
      rec(cell + 1);
      return;
    }
    int r = cell / n, c = cell % n;
    for (int v = 0; v < n; ++v) {
      bool ok = true;
      for (int j = 0; j < n && ok; ++j)
        if (t[r * n + j] == v) ok = false;
      for (int i = 0; i < n && ok; ++i)
        if (t[i * n + c] == v) ok = false;
      if (!ok) continue;
      t[cell] = v;
      if (assoc_ok()) rec(cell + 1);
      t[cell] = -1;
    }
  };
  rec(0);
  return out;
}

}  // namespace tables
