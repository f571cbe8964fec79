#pragma once

// Finite combinatorial categories with fully enumerated hom-sets: truncated
// partial-injection categories (with or without group labels), subset-monoid
// cubes and subset posets, finite pointed sets, and chain posets. Morphisms
// carry combinatorial payloads; composition is computed on payloads and every
// category is exhaustively validated.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <cassert>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyfun {

constexpr int kMorphismBudget = 200000;

inline int popcount32(uint32_t x) { return __builtin_popcount(x); }

// all subsets of {1..n} as bitmasks (bit i-1 <-> element i), sorted ascending
inline std::vector<uint32_t> subsets_of(int n) {
  std::vector<uint32_t> out;
  for (uint32_t m = 0; m < (1u << n); ++m) out.push_back(m);
  return out;
}
inline std::vector<int> mask_elements(uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i + 1);
  return out;
}
inline uint32_t full_mask(int n) { return n >= 32 ? ~0u : (1u << n) - 1; }

enum class CatKind {
  PartialInj,   // fisharp / fi / oi / icat share payloads: arrays with 0 = undefined
  WreathInj,    // fisharp over a finite group: assignment + labels
  CubeMonoid,   // one object, endomorphisms = subsets under intersection
  SubsetPoset,  // J_n (and K_n = its opposite)
  Pointed,      // finite pointed sets and based maps
  ChainPoset,   // 0 -> 1 -> ... -> N
};

struct Mor {
  int src = 0, tgt = 0;
  std::vector<int> data;
};

struct FinCat {
  std::string name;
  CatKind kind = CatKind::PartialInj;
  int window = 0;  // objects are 0..window for skeletal kinds
  int n_obj = 0;
  std::vector<int> obj_grade;
  std::vector<Mor> mors;
  std::vector<int> ids;
  std::vector<std::vector<std::vector<int>>> hom;  // hom[src][tgt] -> mor ids
  std::map<std::tuple<int, int, std::vector<int>>, int> index;
  bool poset_op = false;                  // SubsetPoset: K_n instead of J_n
  std::vector<std::vector<int>> gtab;     // WreathInj: group multiplication table
  mutable std::vector<std::vector<int>> aut_cache;  // per object, computed lazily

  int add_mor(int s, int t, std::vector<int> d) {
    int id = int(mors.size());
    if (id >= kMorphismBudget) throw std::runtime_error("morphism budget exceeded");
    index[{s, t, d}] = id;
    hom[s][t].push_back(id);
    mors.push_back(Mor{s, t, std::move(d)});
    return id;
  }
  int find_mor(int s, int t, const std::vector<int>& d) const {
    auto it = index.find({s, t, d});
    return it == index.end() ? -1 : it->second;
  }

  std::vector<int> compose_data(const Mor& g, const Mor& f) const {
    switch (kind) {
      case CatKind::PartialInj: {
        std::vector<int> d(f.data.size());
        for (size_t i = 0; i < f.data.size(); ++i)
          d[i] = f.data[i] == 0 ? 0 : g.data[f.data[i] - 1];
        return d;
      }
      case CatKind::WreathInj: {
        int m = f.src, n = f.tgt;
        std::vector<int> d(2 * m, 0);
        for (int i = 0; i < m; ++i) {
          int fi = f.data[i];
          if (fi == 0) continue;
          int gfi = g.data[fi - 1];
          if (gfi == 0) continue;
          d[i] = gfi;
          d[m + i] = gtab[g.data[n + fi - 1]][f.data[m + i]];
        }
        return d;
      }
      case CatKind::CubeMonoid:
        return {int(uint32_t(g.data[0]) & uint32_t(f.data[0]))};
      case CatKind::SubsetPoset:
      case CatKind::ChainPoset:
        return {};
      case CatKind::Pointed: {
        std::vector<int> d(f.data.size());
        for (size_t i = 0; i < f.data.size(); ++i)
          d[i] = f.data[i] == 0 ? 0 : g.data[f.data[i] - 1];
        return d;
      }
    }
    return {};
  }

  int compose(int g, int f) const {  // g after f
    const Mor& mf = mors[f];
    const Mor& mg = mors[g];
    assert(mf.tgt == mg.src);
    int id = find_mor(mf.src, mg.tgt, compose_data(mg, mf));
    assert(id >= 0);
    return id;
  }

  const std::vector<int>& endos(int obj) const { return hom[obj][obj]; }

  const std::vector<int>& automorphisms(int obj) const {
    if (aut_cache.empty()) aut_cache.resize(n_obj);
    if (!aut_cache[obj].empty() || endos(obj).empty()) {
      if (!aut_cache[obj].empty()) return aut_cache[obj];
    }
    std::vector<int> out;
    for (int e : endos(obj)) {
      for (int e2 : endos(obj))
        if (compose(e, e2) == ids[obj] && compose(e2, e) == ids[obj]) {
          out.push_back(e);
          break;
        }
    }
    aut_cache[obj] = out;
    return aut_cache[obj];
  }
};

// ---------------------------------------------------------------------------
// Builders

namespace detail {

enum class InjFlavor { FISharp, FI, OI, ICat };

inline void enum_partial_injections(int m, int n, InjFlavor fl,
                                    const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> d(m, 0);
  std::vector<char> used(n + 1, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      emit(d);
      return;
    }
    int pos = i + 1;  // 1-based position
    // undefined allowed except for total flavors
    if (fl == InjFlavor::FISharp || (fl == InjFlavor::ICat)) {
      d[i] = 0;
      rec(i + 1);
    }
    for (int t = 1; t <= n; ++t) {
      if (used[t]) continue;
      if (fl == InjFlavor::ICat && t != pos) continue;
      if (fl == InjFlavor::OI) {
        bool ok = true;
        for (int j = 0; j < i; ++j)
          if (d[j] >= t) ok = false;
        if (!ok) continue;
      }
      d[i] = t;
      used[t] = 1;
      rec(i + 1);
      used[t] = 0;
      d[i] = 0;
    }
  };
  rec(0);
}

inline FinCat build_inj_cat(int N, InjFlavor fl, const std::string& name) {
  FinCat C;
  C.name = name;
  C.kind = CatKind::PartialInj;
  C.window = N;
  C.n_obj = N + 1;
  C.obj_grade.resize(C.n_obj);
  for (int i = 0; i <= N; ++i) C.obj_grade[i] = i;
  C.hom.assign(C.n_obj, std::vector<std::vector<int>>(C.n_obj));
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n)
      enum_partial_injections(m, n, fl, [&](const std::vector<int>& d) {
        if (fl == InjFlavor::ICat) {
          // payload must be a subset of {1..min(m,n)} acting as identity
          for (size_t i = 0; i < d.size(); ++i)
            if (d[i] != 0 && d[i] != int(i) + 1) return;
        }
        C.add_mor(m, n, d);
      });
  C.ids.resize(C.n_obj);
  for (int n = 0; n <= N; ++n) {
    std::vector<int> idd(n);
    for (int i = 0; i < n; ++i) idd[i] = i + 1;
    C.ids[n] = C.find_mor(n, n, idd);
    assert(C.ids[n] >= 0);
  }
  return C;
}

}  // namespace detail

inline FinCat build_fisharp(int N) {
  return detail::build_inj_cat(N, detail::InjFlavor::FISharp, "fisharp<=" + std::to_string(N));
}
inline FinCat build_fi(int N) {
  return detail::build_inj_cat(N, detail::InjFlavor::FI, "fi<=" + std::to_string(N));
}
inline FinCat build_oi(int N) {
  return detail::build_inj_cat(N, detail::InjFlavor::OI, "oi<=" + std::to_string(N));
}
inline FinCat build_icat(int N) {
  return detail::build_inj_cat(N, detail::InjFlavor::ICat, "icat<=" + std::to_string(N));
}

// Partial-injection truncation with group labels: morphisms (phi; {a_i}) with
// a_i a group element for each i in dom(phi). gtab is the multiplication
// table, identity element 0.
inline FinCat build_fisharp_g(int N, std::vector<std::vector<int>> gtab) {
  int G = int(gtab.size());
  for (auto& row : gtab) {
    if (int(row.size()) != G) throw std::runtime_error("invalid group table");
    for (int x : row)
      if (x < 0 || x >= G) throw std::runtime_error("invalid group table");
  }
  for (int x = 0; x < G; ++x)
    if (gtab[0][x] != x || gtab[x][0] != x)
      throw std::runtime_error("invalid group table: 0 must be the identity");
  FinCat C;
  C.name = "fisharp_g<=" + std::to_string(N) + "|G|=" + std::to_string(G);
  C.kind = CatKind::WreathInj;
  C.window = N;
  C.gtab = std::move(gtab);
  C.n_obj = N + 1;
  C.obj_grade.resize(C.n_obj);
  for (int i = 0; i <= N; ++i) C.obj_grade[i] = i;
  C.hom.assign(C.n_obj, std::vector<std::vector<int>>(C.n_obj));
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n)
      detail::enum_partial_injections(m, n, detail::InjFlavor::FISharp,
                                      [&](const std::vector<int>& d) {
        // extend by all label assignments on the defined positions
        std::vector<int> full(2 * m, 0);
        for (int i = 0; i < m; ++i) full[i] = d[i];
        std::function<void(int)> lab = [&](int i) {
          if (i == m) {
            C.add_mor(m, n, full);
            return;
          }
          if (d[i] == 0) {
            lab(i + 1);
            return;
          }
          for (int g = 0; g < G; ++g) {
            full[m + i] = g;
            lab(i + 1);
          }
          full[m + i] = 0;
        };
        lab(0);
      });
  C.ids.resize(C.n_obj);
  for (int n = 0; n <= N; ++n) {
    std::vector<int> idd(2 * n, 0);
    for (int i = 0; i < n; ++i) idd[i] = i + 1;
    C.ids[n] = C.find_mor(n, n, idd);
    assert(C.ids[n] >= 0);
  }
  return C;
}

// The cube monoid I_n: one object, endomorphisms the subsets of {1..n} under
// intersection.
inline FinCat build_cube(int n) {
  FinCat C;
  C.name = "cube" + std::to_string(n);
  C.kind = CatKind::CubeMonoid;
  C.window = 0;
  C.n_obj = 1;
  C.obj_grade = {n};
  C.hom.assign(1, std::vector<std::vector<int>>(1));
  for (uint32_t m : subsets_of(n)) C.add_mor(0, 0, {int(m)});
  C.ids = {C.find_mor(0, 0, {int(full_mask(n))})};
  return C;
}

// The subset poset J_n (op = false): objects are subsets of {1..n} (as masks),
// one morphism S -> T iff S is a subset of T. With op = true this is K_n.
inline FinCat build_subset_poset(int n, bool op) {
  FinCat C;
  C.name = (op ? "K" : "J") + std::to_string(n);
  C.kind = CatKind::SubsetPoset;
  C.poset_op = op;
  C.window = 0;
  C.n_obj = 1 << n;
  C.obj_grade.resize(C.n_obj);
  for (int o = 0; o < C.n_obj; ++o) C.obj_grade[o] = popcount32(uint32_t(o));
  C.hom.assign(C.n_obj, std::vector<std::vector<int>>(C.n_obj));
  for (int s = 0; s < C.n_obj; ++s)
    for (int t = 0; t < C.n_obj; ++t) {
      uint32_t S = uint32_t(s), T = uint32_t(t);
      bool arrow = op ? ((T & S) == T) : ((S & T) == S);
      if (arrow) C.add_mor(s, t, {});
    }
  C.ids.resize(C.n_obj);
  for (int o = 0; o < C.n_obj; ++o) C.ids[o] = C.find_mor(o, o, {});
  return C;
}

// Finite pointed sets: object n is [n] = {0,1,..,n} based at 0; morphisms are
// all based maps, stored on {1..m}.
inline FinCat build_pointed(int N) {
  FinCat C;
  C.name = "pointed<=" + std::to_string(N);
  C.kind = CatKind::Pointed;
  C.window = N;
  C.n_obj = N + 1;
  C.obj_grade.resize(C.n_obj);
  for (int i = 0; i <= N; ++i) C.obj_grade[i] = i;
  C.hom.assign(C.n_obj, std::vector<std::vector<int>>(C.n_obj));
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      std::vector<int> d(m, 0);
      std::function<void(int)> rec = [&](int i) {
        if (i == m) {
          C.add_mor(m, n, d);
          return;
        }
        for (int t = 0; t <= n; ++t) {
          d[i] = t;
          rec(i + 1);
        }
        d[i] = 0;
      };
      rec(0);
    }
  C.ids.resize(C.n_obj);
  for (int n = 0; n <= N; ++n) {
    std::vector<int> idd(n);
    for (int i = 0; i < n; ++i) idd[i] = i + 1;
    C.ids[n] = C.find_mor(n, n, idd);
  }
  return C;
}

// The chain poset 0 -> 1 -> ... -> N.
inline FinCat build_chain(int N) {
  FinCat C;
  C.name = "chain<=" + std::to_string(N);
  C.kind = CatKind::ChainPoset;
  C.window = N;
  C.n_obj = N + 1;
  C.obj_grade.resize(C.n_obj);
  for (int i = 0; i <= N; ++i) C.obj_grade[i] = i;
  C.hom.assign(C.n_obj, std::vector<std::vector<int>>(C.n_obj));
  for (int m = 0; m <= N; ++m)
    for (int n = m; n <= N; ++n) C.add_mor(m, n, {});
  C.ids.resize(C.n_obj);
  for (int o = 0; o <= N; ++o) C.ids[o] = C.find_mor(o, o, {});
  return C;
}

// Exhaustive associativity + identity validation (used by tests).
inline bool validate_category(const FinCat& C, std::string* err = nullptr) {
  for (int o = 0; o < C.n_obj; ++o)
    for (int p = 0; p < C.n_obj; ++p)
      for (int f : C.hom[o][p]) {
        if (C.compose(f, C.ids[o]) != f || C.compose(C.ids[p], f) != f) {
          if (err) *err = "identity law fails at mor " + std::to_string(f);
          return false;
        }
      }
  for (int a = 0; a < C.n_obj; ++a)
    for (int b = 0; b < C.n_obj; ++b)
      for (int c = 0; c < C.n_obj; ++c)
        for (int d = 0; d < C.n_obj; ++d)
          for (int f : C.hom[a][b])
            for (int g : C.hom[b][c])
              for (int h : C.hom[c][d])
                if (C.compose(h, C.compose(g, f)) != C.compose(C.compose(h, g), f)) {
                  if (err)
                    *err = "associativity fails on (" + std::to_string(f) + "," +
                           std::to_string(g) + "," + std::to_string(h) + ")";
                  return false;
                }
  return true;
}

// ---------------------------------------------------------------------------
// Payload helpers for the subset morphisms r / f inside the injection-like
// categories (and cubes / pointed sets).

// The subset morphism m -> n with payload mask (a subset of {1..min(m,n)}):
// identity where defined.
inline int subset_mor(const FinCat& C, int m, int n, uint32_t mask) {
  switch (C.kind) {
    case CatKind::PartialInj: {
      std::vector<int> d(m, 0);
      for (int i = 1; i <= m; ++i)
        if (i <= n && (mask >> (i - 1)) & 1) d[i - 1] = i;
      return C.find_mor(m, n, d);
    }
    case CatKind::WreathInj: {
      std::vector<int> d(2 * m, 0);
      for (int i = 1; i <= m; ++i)
        if (i <= n && (mask >> (i - 1)) & 1) d[i - 1] = i;
      return C.find_mor(m, n, d);
    }
    case CatKind::CubeMonoid:
      assert(m == 0 && n == 0);
      return C.find_mor(0, 0, {int(mask)});
    case CatKind::Pointed: {
      std::vector<int> d(m, 0);
      for (int i = 1; i <= m; ++i)
        if (i <= n && (mask >> (i - 1)) & 1) d[i - 1] = i;
      return C.find_mor(m, n, d);
    }
    default:
      return -1;
  }
}

// r_mask as an endomorphism of n; f_{n,S} = r with the complement of S.
inline int r_endo(const FinCat& C, int n, uint32_t mask) {
  if (C.kind == CatKind::CubeMonoid) return subset_mor(C, 0, 0, mask);
  return subset_mor(C, n, n, mask);
}

// ---------------------------------------------------------------------------
// Functors between finite categories.

struct CatFunctor {
  const FinCat* src = nullptr;
  const FinCat* tgt = nullptr;
  std::vector<int> obj_map;
  std::vector<int> mor_map;
  bool semi = false;
};

inline bool validate_cat_functor(const CatFunctor& F, std::string* err = nullptr) {
  const FinCat& A = *F.src;
  const FinCat& B = *F.tgt;
  for (int o = 0; o < A.n_obj; ++o) {
    if (!F.semi && F.mor_map[A.ids[o]] != B.ids[F.obj_map[o]]) {
      if (err) *err = "identity not preserved at object " + std::to_string(o);
      return false;
    }
  }
  for (size_t f = 0; f < A.mors.size(); ++f) {
    const Mor& mf = A.mors[f];
    if (B.mors[F.mor_map[f]].src != F.obj_map[mf.src] ||
        B.mors[F.mor_map[f]].tgt != F.obj_map[mf.tgt]) {
      if (err) *err = "object boundaries disagree at mor " + std::to_string(f);
      return false;
    }
  }
  for (int a = 0; a < A.n_obj; ++a)
    for (int b = 0; b < A.n_obj; ++b)
      for (int c = 0; c < A.n_obj; ++c)
        for (int f : A.hom[a][b])
          for (int g : A.hom[b][c])
            if (F.mor_map[A.compose(g, f)] !=
                B.compose(F.mor_map[g], F.mor_map[f])) {
              if (err)
                *err = "composition fails on (" + std::to_string(f) + "," +
                       std::to_string(g) + ")";
              return false;
            }
  return true;
}

inline CatFunctor compose_functors(const CatFunctor& F, const CatFunctor& G) {
  // F after G
  assert(G.tgt == F.src);
  CatFunctor H;
  H.src = G.src;
  H.tgt = F.tgt;
  H.semi = F.semi || G.semi;
  H.obj_map.resize(G.obj_map.size());
  for (size_t o = 0; o < G.obj_map.size(); ++o) H.obj_map[o] = F.obj_map[G.obj_map[o]];
  H.mor_map.resize(G.mor_map.size());
  for (size_t f = 0; f < G.mor_map.size(); ++f) H.mor_map[f] = F.mor_map[G.mor_map[f]];
  return H;
}

// z: J_n -> I_n, sending (S subset of T) to the subset morphism with payload
// the complement of T \ S.
inline CatFunctor z_functor(const FinCat& Jn, const FinCat& cube) {
  int n = cube.obj_grade[0];
  CatFunctor F;
  F.src = &Jn;
  F.tgt = &cube;
  F.obj_map.assign(Jn.n_obj, 0);
  F.mor_map.resize(Jn.mors.size());
  for (size_t f = 0; f < Jn.mors.size(); ++f) {
    uint32_t S = uint32_t(Jn.mors[f].src), T = uint32_t(Jn.mors[f].tgt);
    uint32_t payload = full_mask(n) & ~(T & ~S);
    F.mor_map[f] = cube.find_mor(0, 0, {int(payload)});
  }
  return F;
}

// z': K_n -> I_n, sending the K_n-morphism S -> T (meaning T subset of S) to
// the subset morphism with payload the complement of S \ T.
inline CatFunctor zprime_functor(const FinCat& Kn, const FinCat& cube) {
  int n = cube.obj_grade[0];
  CatFunctor F;
  F.src = &Kn;
  F.tgt = &cube;
  F.obj_map.assign(Kn.n_obj, 0);
  F.mor_map.resize(Kn.mors.size());
  for (size_t f = 0; f < Kn.mors.size(); ++f) {
    uint32_t S = uint32_t(Kn.mors[f].src), T = uint32_t(Kn.mors[f].tgt);
    uint32_t payload = full_mask(n) & ~(S & ~T);
    F.mor_map[f] = cube.find_mor(0, 0, {int(payload)});
  }
  return F;
}

// Ordered shifted partitions (lambda_0, ..., lambda_n) of m.
struct ShiftedPartition {
  std::vector<int> parts;  // parts[0] = lambda_0
  int m() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
  }
  int length() const { return int(parts.size()) - 1; }
  // block {i}_lambda as a mask in {1..m}, i in 1..length
  uint32_t block(int i) const {
    int lo = 0;
    for (int j = 0; j < i; ++j) lo += parts[j];
    uint32_t mask = 0;
    for (int t = lo + 1; t <= lo + parts[i]; ++t) mask |= 1u << (t - 1);
    return mask;
  }
  uint32_t expand(uint32_t S) const {  // S subset of {1..length} -> S_lambda
    uint32_t out = 0;
    for (int i = 1; i <= length(); ++i)
      if ((S >> (i - 1)) & 1) out |= block(i);
    return out;
  }
  uint32_t prefix() const {  // {1..lambda_0}
    uint32_t mask = 0;
    for (int t = 1; t <= parts[0]; ++t) mask |= 1u << (t - 1);
    return mask;
  }
  std::string str() const {
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i)
      s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
  }
};

// psi_lambda: I_n -> I_m on cube monoids, S -> S_lambda. A monoid
// homomorphism iff lambda_0 = 0; otherwise a semigroup homomorphism only.
inline CatFunctor psi_lambda(const ShiftedPartition& lam, const FinCat& cube_n,
                             const FinCat& cube_m) {
  assert(cube_n.obj_grade[0] == lam.length() && cube_m.obj_grade[0] == lam.m());
  CatFunctor F;
  F.src = &cube_n;
  F.tgt = &cube_m;
  F.semi = lam.parts[0] > 0;
  F.obj_map = {0};
  F.mor_map.resize(cube_n.mors.size());
  for (size_t f = 0; f < cube_n.mors.size(); ++f) {
    uint32_t S = uint32_t(cube_n.mors[f].data[0]);
    F.mor_map[f] = cube_m.find_mor(0, 0, {int(lam.expand(S))});
  }
  return F;
}

// The canonical embedding of the subset category into a partial-injection
// style category of the same window (identity where defined).
inline CatFunctor inclusion_functor(const FinCat& icat, const FinCat& C) {
  assert(icat.window <= C.window);
  CatFunctor F;
  F.src = &icat;
  F.tgt = &C;
  F.obj_map.resize(icat.n_obj);
  for (int o = 0; o < icat.n_obj; ++o) F.obj_map[o] = o;
  F.mor_map.resize(icat.mors.size());
  for (size_t f = 0; f < icat.mors.size(); ++f) {
    const Mor& m = icat.mors[f];
    uint32_t mask = 0;
    for (size_t i = 0; i < m.data.size(); ++i)
      if (m.data[i] != 0) mask |= 1u << i;
    F.mor_map[f] = subset_mor(C, m.src, m.tgt, mask);
    assert(F.mor_map[f] >= 0);
  }
  return F;
}

// ---------------------------------------------------------------------------
// Stabiliser structures: endofunctors s_k shifting by k with natural
// transformations iota_k: id -> s_k, on the truncation window.

struct Stabiliser {
  const FinCat* C = nullptr;
  int K = 1;
  // per index k (1..K): object/morphism maps and iota components; -1 where the
  // window is exceeded.
  std::vector<std::vector<int>> s_obj;   // [k-1][obj]
  std::vector<std::vector<int>> s_mor;   // [k-1][mor]
  std::vector<std::vector<int>> iota;    // [k-1][obj]
  std::vector<std::vector<int>> retr;    // [k-1][obj], natural left inverses (may be empty)
  bool has_retraction = false;

  int max_obj() const { return C->n_obj - 1; }
};

namespace detail {

// data of s_k(f) for the shift-by-k endofunctor on injection-like and pointed
// categories
inline std::vector<int> shift_data(const FinCat& C, const Mor& f, int k) {
  switch (C.kind) {
    case CatKind::PartialInj:
    case CatKind::Pointed: {
      int m = f.src;
      std::vector<int> d(m + k);
      for (int i = 1; i <= k; ++i) d[i - 1] = i;
      for (int i = 1; i <= m; ++i) d[k + i - 1] = f.data[i - 1] == 0 ? 0 : f.data[i - 1] + k;
      return d;
    }
    case CatKind::WreathInj: {
      int m = f.src;
      std::vector<int> d(2 * (m + k), 0);
      for (int i = 1; i <= k; ++i) d[i - 1] = i;
      for (int i = 1; i <= m; ++i) {
        d[k + i - 1] = f.data[i - 1] == 0 ? 0 : f.data[i - 1] + k;
        d[(m + k) + k + i - 1] = f.data[m + i - 1];
      }
      return d;
    }
    case CatKind::ChainPoset:
      return {};
    default:
      throw std::runtime_error("unsupported category kind for stabiliser");
  }
}

inline std::vector<int> iota_data(const FinCat& C, int n, int k) {
  switch (C.kind) {
    case CatKind::PartialInj:
    case CatKind::Pointed: {
      std::vector<int> d(n);
      for (int i = 1; i <= n; ++i) d[i - 1] = i + k;
      return d;
    }
    case CatKind::WreathInj: {
      std::vector<int> d(2 * n, 0);
      for (int i = 1; i <= n; ++i) d[i - 1] = i + k;
      return d;
    }
    case CatKind::ChainPoset:
      return {};
    default:
      throw std::runtime_error("unsupported category kind for stabiliser");
  }
}

// candidate retraction s_k(n) -> n deleting the first k points (partial
// injections) or collapsing them to the basepoint (pointed sets); empty
// optional when the category has no such morphism.
inline int retraction_mor(const FinCat& C, int n, int k) {
  switch (C.kind) {
    case CatKind::PartialInj: {
      std::vector<int> d(n + k, 0);
      for (int i = 1; i <= n; ++i) d[k + i - 1] = i;
      return C.find_mor(n + k, n, d);
    }
    case CatKind::WreathInj: {
      std::vector<int> d(2 * (n + k), 0);
      for (int i = 1; i <= n; ++i) d[k + i - 1] = i;
      return C.find_mor(n + k, n, d);
    }
    case CatKind::Pointed: {
      std::vector<int> d(n + k, 0);
      for (int i = 1; i <= n; ++i) d[k + i - 1] = i;
      return C.find_mor(n + k, n, d);
    }
    default:
      return -1;
  }
}

}  // namespace detail

inline Stabiliser stabiliser_structure(const FinCat& C, int K = 1) {
  Stabiliser st;
  st.C = &C;
  st.K = K;
  int N = C.n_obj - 1;
  st.s_obj.assign(K, std::vector<int>(C.n_obj, -1));
  st.s_mor.assign(K, std::vector<int>(C.mors.size(), -1));
  st.iota.assign(K, std::vector<int>(C.n_obj, -1));
  st.retr.assign(K, std::vector<int>(C.n_obj, -1));
  bool all_retr = true;
  for (int k = 1; k <= K; ++k) {
    for (int n = 0; n <= N; ++n) {
      if (n + k > N) continue;
      st.s_obj[k - 1][n] = n + k;
      st.iota[k - 1][n] = C.find_mor(n, n + k, detail::iota_data(C, n, k));
      assert(st.iota[k - 1][n] >= 0);
      int r = detail::retraction_mor(C, n, k);
      st.retr[k - 1][n] = r;
      if (r < 0) all_retr = false;
    }
    for (size_t f = 0; f < C.mors.size(); ++f) {
      const Mor& m = C.mors[f];
      if (m.src + k > N || m.tgt + k > N) continue;
      st.s_mor[k - 1][f] = C.find_mor(m.src + k, m.tgt + k, detail::shift_data(C, m, k));
      assert(st.s_mor[k - 1][f] >= 0);
    }
    // verify naturality of iota and of the retraction (when present) on every
    // morphism that stays inside the window
    for (size_t f = 0; f < C.mors.size(); ++f) {
      const Mor& m = C.mors[f];
      if (m.src + k > N || m.tgt + k > N) continue;
      int sf = st.s_mor[k - 1][f];
      assert(C.compose(sf, st.iota[k - 1][m.src]) ==
             C.compose(st.iota[k - 1][m.tgt], int(f)));
      if (all_retr && st.retr[k - 1][m.src] >= 0 && st.retr[k - 1][m.tgt] >= 0) {
        if (C.compose(int(f), st.retr[k - 1][m.src]) !=
            C.compose(st.retr[k - 1][m.tgt], sf))
          all_retr = false;
      }
    }
    for (int n = 0; n + k <= N; ++n)
      if (all_retr && st.retr[k - 1][n] >= 0)
        if (C.compose(st.retr[k - 1][n], st.iota[k - 1][n]) != C.ids[n]) all_retr = false;
  }
  st.has_retraction = all_retr;
  return st;
}

// Exhaustive search for a braiding Psi: s.s -> s.s with
// Psi_n . s(iota_n) = iota_{s(n)} and naturality; returns components per
// object (lexicographically least in automorphism enumeration order) or
// nullopt.
inline std::optional<std::vector<int>> check_braidable(const Stabiliser& st) {
  const FinCat& C = *st.C;
  int N = C.n_obj - 1;
  assert(st.K >= 1);
  std::vector<int> objs;  // objects n with s(s(n)) inside the window
  for (int n = 0; n + 2 <= N; ++n) objs.push_back(n);
  if (objs.empty()) return std::vector<int>{};
  std::vector<std::vector<int>> cand(objs.size());
  for (size_t t = 0; t < objs.size(); ++t) {
    int n = objs[t];
    int siota = st.s_mor[0][st.iota[0][n]];       // s(iota_n): s(n) -> s(s(n))
    int iotasn = st.iota[0][st.s_obj[0][n]];      // iota_{s(n)}
    for (int a : C.automorphisms(n + 2))
      if (C.compose(a, siota) == iotasn) cand[t].push_back(a);
    if (cand[t].empty()) return std::nullopt;
  }
  // naturality couples choices at different objects; backtrack in object order
  std::vector<int> choice(objs.size(), -1);
  std::function<bool(size_t)> rec = [&](size_t t) -> bool {
    if (t == objs.size()) return true;
    int b = objs[t];
    for (int a : cand[t]) {
      choice[t] = a;
      bool ok = true;
      for (size_t u = 0; u <= t && ok; ++u) {
        int aobj = objs[u];
        for (int dir = 0; dir < 2 && ok; ++dir) {
          int from = dir ? b : aobj, to = dir ? aobj : b;
          int psi_from = dir ? choice[t] : choice[u];
          int psi_to = dir ? choice[u] : choice[t];
          for (int f : C.hom[from][to]) {
            int sf = st.s_mor[0][f];
            if (sf < 0) continue;
            int ssf = st.s_mor[0][sf];
            if (ssf < 0) continue;
            if (C.compose(psi_to, ssf) != C.compose(ssf, psi_from)) {
              ok = false;
              break;
            }
          }
        }
      }
      if (ok && rec(t + 1)) return true;
    }
    choice[t] = -1;
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return choice;
}

// Search Aut(n) for phi with phi . r_R . phi^{-1} = r_S.
inline std::optional<int> find_conjugator(const FinCat& C, int n, uint32_t R, uint32_t S) {
  if (popcount32(R) != popcount32(S))
    throw std::invalid_argument("find_conjugator: |R| != |S|");
  int rR = r_endo(C, n, R), rS = r_endo(C, n, S);
  assert(rR >= 0 && rS >= 0);
  int obj = C.kind == CatKind::CubeMonoid ? 0 : n;
  for (int phi : C.automorphisms(obj)) {
    // find the inverse
    int inv = -1;
    for (int psi : C.automorphisms(obj))
      if (C.compose(phi, psi) == C.ids[obj] && C.compose(psi, phi) == C.ids[obj]) {
        inv = psi;
        break;
      }
    if (inv < 0) continue;
    if (C.compose(C.compose(phi, rR), inv) == rS) return phi;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generating words for partial injections: adjacent transpositions tau_{n,i},
// unit insertions u_n: n -> n+1 (i -> i), deletions d_n: n -> n-1 (n
// undefined).

struct GenStep {
  enum Type { Tau, U, D } type;
  int level;  // source object of the step
  int pos;    // tau only: swaps pos, pos+1
};

inline std::vector<int> gen_step_data(const GenStep& g) {
  switch (g.type) {
    case GenStep::Tau: {
      std::vector<int> d(g.level);
      for (int i = 1; i <= g.level; ++i) d[i - 1] = i;
      std::swap(d[g.pos - 1], d[g.pos]);
      return d;
    }
    case GenStep::U: {
      std::vector<int> d(g.level);
      for (int i = 1; i <= g.level; ++i) d[i - 1] = i;
      return d;
    }
    case GenStep::D: {
      std::vector<int> d(g.level);
      for (int i = 1; i < g.level; ++i) d[i - 1] = i;
      d[g.level - 1] = 0;
      return d;
    }
  }
  return {};
}

inline int gen_step_target(const GenStep& g) {
  return g.type == GenStep::Tau ? g.level : (g.type == GenStep::U ? g.level + 1 : g.level - 1);
}

// compose a word (applied right to left: word.back() first)
inline std::vector<int> word_payload(const std::vector<GenStep>& word, int m) {
  std::vector<int> cur(m);
  for (int i = 1; i <= m; ++i) cur[i - 1] = i;
  int level = m;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    assert(it->level == level);
    std::vector<int> g = gen_step_data(*it);
    int tgt = gen_step_target(*it);
    for (int i = 0; i < m; ++i) cur[i] = cur[i] == 0 ? 0 : g[cur[i] - 1];
    level = tgt;
  }
  return cur;
}

namespace detail {

// lexicographically minimal reduced word for a permutation (1-based image
// vector), as adjacent transpositions applied right to left
inline std::vector<int> perm_word(std::vector<int> p) {
  // repeatedly pick the smallest i with p[i] > p[i+1]; recording tau_i on the
  // source side yields a reduced word; applying the recorded steps right to
  // left reproduces p
  std::vector<int> word;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t i = 0; i + 1 < p.size(); ++i)
      if (p[i] > p[i + 1]) {
        std::swap(p[i], p[i + 1]);
        word.push_back(int(i) + 1);
        moved = true;
        break;
      }
  }
  std::reverse(word.begin(), word.end());
  return word;
}

}  // namespace detail

inline std::vector<GenStep> factorize_partial_injection(const std::vector<int>& phi, int m,
                                                        int n) {
  // phi: array of length m with entries in 0..n (0 undefined)
  std::vector<int> dom;
  for (int i = 1; i <= m; ++i)
    if (phi[i - 1] != 0) dom.push_back(i);
  int r = int(dom.size());
  // sigma_src: order-preserving on dom -> {1..r} and complement -> {r+1..m}
  std::vector<int> sigma_s(m);
  {
    int next_def = 1, next_undef = r + 1;
    for (int i = 1; i <= m; ++i)
      sigma_s[i - 1] = phi[i - 1] != 0 ? next_def++ : next_undef++;
  }
  // sigma_tgt on n: position i <= r must go to phi(sigma_s^{-1}(i)); the rest
  // order-preserving onto the unused targets
  std::vector<int> sigma_t(n);
  {
    std::vector<char> used(n + 1, 0);
    std::vector<int> inv_s(m + 1);
    for (int i = 1; i <= m; ++i) inv_s[sigma_s[i - 1]] = i;
    for (int i = 1; i <= r; ++i) {
      sigma_t[i - 1] = phi[inv_s[i] - 1];
      used[sigma_t[i - 1]] = 1;
    }
    int next = r + 1;
    for (int t = 1; t <= n; ++t)
      if (!used[t]) sigma_t[next++ - 1] = t;
  }
  std::vector<GenStep> word;
  // target permutation first (leftmost)
  for (int i : detail::perm_word(sigma_t)) word.push_back({GenStep::Tau, n, i});
  // insertions r -> n (left of deletions)
  for (int lv = n - 1; lv >= r; --lv) word.push_back({GenStep::U, lv, 0});
  // deletions m -> r
  for (int lv = r + 1; lv <= m; ++lv) word.push_back({GenStep::D, lv, 0});
  // source permutation (rightmost)
  for (int i : detail::perm_word(sigma_s)) word.push_back({GenStep::Tau, m, i});
  return word;
}

// ---------------------------------------------------------------------------
// Cat_I structures: s from the subset category, pi to the partial-injection
// skeleton, with surjectivity and locality axioms.

struct CatIStructure {
  const FinCat* C = nullptr;
  const FinCat* Sigma = nullptr;       // fisharp truncation, same window
  std::vector<int> s_obj;              // object of C for each n
  std::function<int(int, int, uint32_t)> s_mor;  // (m, n, payload) -> C mor id
  std::function<int(int)> pi;          // C mor id -> Sigma mor id
};

// The tautological structure on a partial-injection truncation itself; pi
// forgets labels when the category is a wreath product.
inline CatIStructure cati_self(const FinCat& C, const FinCat& Sigma) {
  CatIStructure st;
  st.C = &C;
  st.Sigma = &Sigma;
  st.s_obj.resize(C.n_obj);
  for (int n = 0; n < C.n_obj; ++n) st.s_obj[n] = n;
  st.s_mor = [&C](int m, int n, uint32_t mask) { return subset_mor(C, m, n, mask); };
  if (C.kind == CatKind::WreathInj) {
    st.pi = [&C, &Sigma](int f) {
      const Mor& m = C.mors[f];
      std::vector<int> d(m.data.begin(), m.data.begin() + m.src);
      return Sigma.find_mor(m.src, m.tgt, d);
    };
  } else {
    st.pi = [&C, &Sigma](int f) {
      const Mor& m = C.mors[f];
      return Sigma.find_mor(m.src, m.tgt, m.data);
    };
  }
  return st;
}

struct CatIReport {
  bool inclusion_ok = true;
  bool end_surjective = true;
  bool aut_surjective = true;
  bool locality_ok = true;
  std::vector<std::string> failures;
  bool ok() const { return inclusion_ok && end_surjective && aut_surjective && locality_ok; }
};

inline CatIReport check_cati_axioms(const CatIStructure& st) {
  CatIReport rep;
  const FinCat& C = *st.C;
  const FinCat& S = *st.Sigma;
  int N = int(st.s_obj.size()) - 1;
  // pi . s = inclusion on all subset morphisms in the window
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n)
      for (uint32_t mask : subsets_of(std::min(m, n))) {
        int f = st.s_mor(m, n, mask);
        if (f < 0) {
          rep.inclusion_ok = false;
          rep.failures.push_back("s undefined on subset morphism");
          continue;
        }
        if (st.pi(f) != subset_mor(S, m, n, mask)) {
          rep.inclusion_ok = false;
          rep.failures.push_back("pi.s is not the inclusion at (" + std::to_string(m) + "," +
                                 std::to_string(n) + ")");
        }
      }
  for (int n = 0; n <= N; ++n) {
    int sn = st.s_obj[n];
    // surjectivity onto End and Aut of the skeleton
    std::map<int, char> hit_end, hit_aut;
    for (int e : C.endos(sn)) hit_end[st.pi(e)] = 1;
    for (int a : C.automorphisms(sn)) hit_aut[st.pi(a)] = 1;
    for (int e : S.endos(n))
      if (!hit_end.count(e)) {
        rep.end_surjective = false;
        rep.failures.push_back("pi not surjective onto End at n=" + std::to_string(n));
        break;
      }
    for (int a : S.automorphisms(n))
      if (!hit_aut.count(a)) {
        rep.aut_surjective = false;
        rep.failures.push_back("pi not surjective onto Aut at n=" + std::to_string(n));
        break;
      }
    // locality: forgetting one point exchanges through every endomorphism
    for (int phi : C.endos(sn)) {
      for (int i = 1; i <= n; ++i) {
        uint32_t fi = full_mask(n) & ~(1u << (i - 1));
        bool found = false;
        for (int j = 1; j <= n && !found; ++j) {
          uint32_t fj = full_mask(n) & ~(1u << (j - 1));
          if (C.compose(phi, st.s_mor(n, n, fi)) == C.compose(st.s_mor(n, n, fj), phi))
            found = true;
        }
        if (!found) {
          rep.locality_ok = false;
          rep.failures.push_back("locality fails at n=" + std::to_string(n));
        }
        // symmetric direction
        found = false;
        for (int j = 1; j <= n && !found; ++j) {
          uint32_t fj = full_mask(n) & ~(1u << (j - 1));
          if (C.compose(phi, st.s_mor(n, n, fj)) == C.compose(st.s_mor(n, n, fi), phi))
            found = true;
        }
        if (!found) {
          rep.locality_ok = false;
          rep.failures.push_back("locality (converse) fails at n=" + std::to_string(n));
        }
      }
    }
  }
  return rep;
}

}  // namespace polyfun
