#pragma once

// Functors (and semi-functors) from a finite category into finitely presented
// modules: per-object modules and per-morphism matrices, produced lazily and
// cached. Includes the built-in examples used throughout the test suites and
// the shift/difference machinery T.iota and Delta T.

#include <memory>
#include <random>

#include "polyfun/fincat.hpp"
#include "polyfun/module.hpp"

namespace polyfun {

struct FunctorRep {
  const FinCat* cat = nullptr;
  Ring ring = Ring::Z;
  bool semi = false;
  std::vector<char> valid;  // per object
  std::function<FPModule(int)> obj_fn;
  std::function<Mat(int)> mor_fn;

  std::shared_ptr<std::map<int, FPModule>> obj_cache =
      std::make_shared<std::map<int, FPModule>>();
  std::shared_ptr<std::map<int, Mat>> mor_cache = std::make_shared<std::map<int, Mat>>();

  bool obj_valid(int o) const { return o >= 0 && o < cat->n_obj && valid[o]; }
  bool mor_valid(int f) const {
    return obj_valid(cat->mors[f].src) && obj_valid(cat->mors[f].tgt);
  }

  const FPModule& obj(int o) const {
    assert(obj_valid(o));
    auto it = obj_cache->find(o);
    if (it == obj_cache->end()) it = obj_cache->emplace(o, obj_fn(o)).first;
    return it->second;
  }
  const Mat& mor(int f) const {
    assert(mor_valid(f));
    auto it = mor_cache->find(f);
    if (it == mor_cache->end()) it = mor_cache->emplace(f, mor_fn(f)).first;
    return it->second;
  }
  ModuleHom hom(int f) const {
    return ModuleHom(obj(cat->mors[f].src), obj(cat->mors[f].tgt), mor(f));
  }
};

struct FunctorReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline FunctorReport validate_functor(const FunctorRep& T) {
  FunctorReport rep;
  const FinCat& C = *T.cat;
  for (int o = 0; o < C.n_obj; ++o) {
    if (!T.obj_valid(o)) continue;
    if (!T.semi) {
      ModuleHom idh = T.hom(C.ids[o]);
      if (!homs_equal(idh, ModuleHom(T.obj(o), T.obj(o), Mat::identity(T.obj(o).gens))))
        rep.violations.push_back("identity not preserved at object " + std::to_string(o));
    }
  }
  for (size_t f = 0; f < C.mors.size(); ++f) {
    if (!T.mor_valid(int(f))) continue;
    if (!T.hom(int(f)).well_defined())
      rep.violations.push_back("hom not well-defined at mor " + std::to_string(f));
  }
  for (int a = 0; a < C.n_obj; ++a)
    for (int b = 0; b < C.n_obj; ++b)
      for (int c = 0; c < C.n_obj; ++c) {
        if (!(T.obj_valid(a) && T.obj_valid(b) && T.obj_valid(c))) continue;
        for (int f : C.hom[a][b])
          for (int g : C.hom[b][c]) {
            int gf = C.compose(g, f);
            ModuleHom lhs = T.hom(gf);
            ModuleHom rhs(T.obj(a), T.obj(c), T.mor(g) * T.mor(f));
            if (!homs_equal(lhs, rhs))
              rep.violations.push_back("composition fails on pair (" + std::to_string(f) +
                                       "," + std::to_string(g) + ")");
          }
      }
  return rep;
}

inline std::vector<char> all_valid(const FinCat& C) {
  return std::vector<char>(C.n_obj, 1);
}

// ---------------------------------------------------------------------------
// Built-in functors

// P_k(n) = free module on Hom(k, n); morphisms act by postcomposition.
inline FunctorRep representable_functor(const FinCat& C, int k, Ring ring) {
  FunctorRep T;
  T.cat = &C;
  T.ring = ring;
  T.valid = all_valid(C);
  T.obj_fn = [&C, k, ring](int n) {
    return FPModule::free_module(ring, int(C.hom[k][n].size()));
  };
  T.mor_fn = [&C, k](int f) {
    const Mor& m = C.mors[f];
    const std::vector<int>& bs = C.hom[k][m.src];
    const std::vector<int>& bt = C.hom[k][m.tgt];
    std::map<int, int> idx;
    for (size_t j = 0; j < bt.size(); ++j) idx[bt[j]] = int(j);
    Mat M(int(bt.size()), int(bs.size()));
    for (size_t j = 0; j < bs.size(); ++j) M.at(idx.at(C.compose(f, bs[j])), int(j)) = 1;
    return M;
  };
  return T;
}

inline FunctorRep constant_functor(const FinCat& C, Ring ring, int rank = 1) {
  FunctorRep T;
  T.cat = &C;
  T.ring = ring;
  T.valid = all_valid(C);
  T.obj_fn = [ring, rank](int) { return FPModule::free_module(ring, rank); };
  T.mor_fn = [rank](int) { return Mat::identity(rank); };
  return T;
}

inline FunctorRep zero_functor(const FinCat& C, Ring ring) {
  return constant_functor(C, ring, 0);
}

// Basis for the independent-subset family: subsets of {1..n} of size <= h with
// no two consecutive elements, ordered by size then lexicographically on the
// element sequence.
inline std::vector<uint32_t> th_basis(int h, int n) {
  std::vector<uint32_t> basis;
  for (uint32_t S : subsets_of(n)) {
    if (popcount32(S) > h) continue;
    if (S & (S >> 1)) continue;  // consecutive elements
    basis.push_back(S);
  }
  std::sort(basis.begin(), basis.end(), [](uint32_t a, uint32_t b) {
    if (popcount32(a) != popcount32(b)) return popcount32(a) < popcount32(b);
    return mask_elements(a) < mask_elements(b);
  });
  return basis;
}

// The functor on the subset category whose value at n is free on th_basis(h,n)
// with the subset morphisms acting by intersection on basis elements. h < 0
// means no size bound.
inline FunctorRep build_Th(int h, const FinCat& icat, Ring ring = Ring::Z) {
  assert(icat.kind == CatKind::PartialInj);
  int hh = h < 0 ? icat.window : h;
  FunctorRep T;
  T.cat = &icat;
  T.ring = ring;
  T.valid = all_valid(icat);
  T.obj_fn = [hh, ring](int n) {
    return FPModule::free_module(ring, int(th_basis(hh, n).size()));
  };
  T.mor_fn = [&icat, hh](int f) {
    const Mor& m = icat.mors[f];
    uint32_t mask = 0;
    for (size_t i = 0; i < m.data.size(); ++i)
      if (m.data[i] != 0) mask |= 1u << i;
    std::vector<uint32_t> bs = th_basis(hh, m.src), bt = th_basis(hh, m.tgt);
    std::map<uint32_t, int> idx;
    for (size_t j = 0; j < bt.size(); ++j) idx[bt[j]] = int(j);
    Mat M(int(bt.size()), int(bs.size()));
    for (size_t j = 0; j < bs.size(); ++j) M.at(idx.at(bs[j] & mask), int(j)) = 1;
    return M;
  };
  return T;
}

// Reduced linearisation on finite pointed sets: value at [n] is free on
// {1..n}; a based map sends i to f(i), with the basepoint giving 0.
inline FunctorRep reduced_linearization(const FinCat& gamma, Ring ring = Ring::Z) {
  assert(gamma.kind == CatKind::Pointed);
  FunctorRep T;
  T.cat = &gamma;
  T.ring = ring;
  T.valid = all_valid(gamma);
  T.obj_fn = [ring](int n) { return FPModule::free_module(ring, n); };
  T.mor_fn = [&gamma](int f) {
    const Mor& m = gamma.mors[f];
    Mat M(m.tgt, m.src);
    for (int i = 1; i <= m.src; ++i)
      if (m.data[i - 1] != 0) M.at(m.data[i - 1] - 1, i - 1) = 1;
    return M;
  };
  return T;
}

// Pointwise tensor product.
inline Mat kronecker(const Mat& A, const Mat& B) {
  Mat K(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      if (A.at(i, j) == 0) continue;
      for (int p = 0; p < B.rows; ++p)
        for (int q = 0; q < B.cols; ++q)
          if (B.at(p, q) != 0) K.at(i * B.rows + p, j * B.cols + q) = A.at(i, j) * B.at(p, q);
    }
  return K;
}

inline FunctorRep tensor_functor(const FunctorRep& A, const FunctorRep& B) {
  assert(A.cat == B.cat && A.ring == B.ring);
  FunctorRep T;
  T.cat = A.cat;
  T.ring = A.ring;
  T.semi = A.semi || B.semi;
  T.valid.resize(A.cat->n_obj);
  for (int o = 0; o < A.cat->n_obj; ++o) T.valid[o] = A.valid[o] && B.valid[o];
  auto pa = std::make_shared<FunctorRep>(A);
  auto pb = std::make_shared<FunctorRep>(B);
  T.obj_fn = [pa, pb](int n) {
    const FPModule& Ma = pa->obj(n);
    const FPModule& Mb = pb->obj(n);
    Mat rel = kronecker(Ma.rel, Mat::identity(Mb.gens))
                  .hcat(kronecker(Mat::identity(Ma.gens), Mb.rel));
    return FPModule(pa->ring, Ma.gens * Mb.gens, rel);
  };
  T.mor_fn = [pa, pb](int f) { return kronecker(pa->mor(f), pb->mor(f)); };
  return T;
}

// Direct sum of functors.
inline FunctorRep direct_sum_functor(const FunctorRep& A, const FunctorRep& B) {
  assert(A.cat == B.cat && A.ring == B.ring);
  FunctorRep T;
  T.cat = A.cat;
  T.ring = A.ring;
  T.semi = A.semi || B.semi;
  T.valid.resize(A.cat->n_obj);
  for (int o = 0; o < A.cat->n_obj; ++o) T.valid[o] = A.valid[o] && B.valid[o];
  auto pa = std::make_shared<FunctorRep>(A);
  auto pb = std::make_shared<FunctorRep>(B);
  T.obj_fn = [pa, pb](int n) {
    const FPModule& Ma = pa->obj(n);
    const FPModule& Mb = pb->obj(n);
    return FPModule(pa->ring, Ma.gens + Mb.gens, direct_sum(Ma.rel, Mb.rel));
  };
  T.mor_fn = [pa, pb](int f) { return direct_sum(pa->mor(f), pb->mor(f)); };
  return T;
}

// ---------------------------------------------------------------------------
// Precomposition and the stabiliser machinery

inline FunctorRep precompose(const FunctorRep& T, const CatFunctor& F) {
  assert(F.tgt == T.cat);
  FunctorRep R;
  R.cat = F.src;
  R.ring = T.ring;
  R.semi = T.semi || F.semi;
  R.valid.resize(F.src->n_obj);
  for (int o = 0; o < F.src->n_obj; ++o) R.valid[o] = T.obj_valid(F.obj_map[o]);
  auto pt = std::make_shared<FunctorRep>(T);
  auto omap = std::make_shared<std::vector<int>>(F.obj_map);
  auto mmap = std::make_shared<std::vector<int>>(F.mor_map);
  R.obj_fn = [pt, omap](int o) { return pt->obj((*omap)[o]); };
  R.mor_fn = [pt, mmap](int f) { return pt->mor((*mmap)[f]); };
  return R;
}

// The composite T.s_k as a functor rep; valid where the shift stays in both
// the category window and T's window.
inline FunctorRep shift_functor(const FunctorRep& T, const Stabiliser& st, int k = 1) {
  FunctorRep R;
  R.cat = T.cat;
  R.ring = T.ring;
  R.semi = T.semi;
  R.valid.resize(T.cat->n_obj);
  for (int o = 0; o < T.cat->n_obj; ++o) {
    int so = st.s_obj[k - 1][o];
    R.valid[o] = so >= 0 && T.obj_valid(so);
  }
  auto pt = std::make_shared<FunctorRep>(T);
  auto smor = std::make_shared<std::vector<int>>(st.s_mor[k - 1]);
  auto sobj = std::make_shared<std::vector<int>>(st.s_obj[k - 1]);
  R.obj_fn = [pt, sobj](int o) { return pt->obj((*sobj)[o]); };
  R.mor_fn = [pt, smor](int f) { return pt->mor((*smor)[f]); };
  return R;
}

struct NatTrans {
  FunctorRep source, target;
  std::map<int, Mat> comp;  // per valid object
};

inline bool validate_nattrans(const NatTrans& t, std::string* err = nullptr) {
  const FinCat& C = *t.source.cat;
  for (size_t f = 0; f < C.mors.size(); ++f) {
    const Mor& m = C.mors[f];
    if (!t.comp.count(m.src) || !t.comp.count(m.tgt)) continue;
    if (!t.source.mor_valid(int(f)) || !t.target.mor_valid(int(f))) continue;
    ModuleHom lhs(t.source.obj(m.src), t.target.obj(m.tgt),
                  t.target.mor(int(f)) * t.comp.at(m.src));
    ModuleHom rhs(t.source.obj(m.src), t.target.obj(m.tgt),
                  t.comp.at(m.tgt) * t.source.mor(int(f)));
    if (!homs_equal(lhs, rhs)) {
      if (err) *err = "naturality fails at mor " + std::to_string(f);
      return false;
    }
  }
  return true;
}

// T.iota_k: T -> T.s_k with components T(iota at n).
inline NatTrans stab_nat_trans(const FunctorRep& T, const Stabiliser& st, int k = 1) {
  NatTrans t;
  t.source = T;
  t.target = shift_functor(T, st, k);
  for (int n = 0; n < T.cat->n_obj; ++n)
    if (t.source.obj_valid(n) && t.target.obj_valid(n))
      t.comp[n] = T.mor(st.iota[k - 1][n]);
  return t;
}

struct DeltaResult {
  FunctorRep delta;                 // coker(T iota_k) with induced maps
  std::map<int, Subobject> kappa;   // kernel subobjects per object
};

inline DeltaResult delta_functor(const FunctorRep& T, const Stabiliser& st, int k = 1) {
  DeltaResult out;
  FunctorRep D;
  D.cat = T.cat;
  D.ring = T.ring;
  D.semi = T.semi;
  D.valid.resize(T.cat->n_obj);
  auto pt = std::make_shared<FunctorRep>(T);
  auto iota = std::make_shared<std::vector<int>>(st.iota[k - 1]);
  auto smor = std::make_shared<std::vector<int>>(st.s_mor[k - 1]);
  auto sobj = std::make_shared<std::vector<int>>(st.s_obj[k - 1]);
  for (int o = 0; o < T.cat->n_obj; ++o) {
    int so = st.s_obj[k - 1][o];
    D.valid[o] = T.obj_valid(o) && so >= 0 && T.obj_valid(so);
  }
  D.obj_fn = [pt, iota, sobj](int n) {
    const FPModule& tgt = pt->obj((*sobj)[n]);
    return FPModule(pt->ring, tgt.gens, tgt.rel.hcat(pt->mor((*iota)[n])));
  };
  D.mor_fn = [pt, smor](int f) { return pt->mor((*smor)[f]); };
  out.delta = D;
  for (int n = 0; n < T.cat->n_obj; ++n)
    if (D.valid[n])
      out.kappa.emplace(
          n, kernel_subobject(ModuleHom(T.obj(n), T.obj(st.s_obj[k - 1][n]),
                                        T.mor(st.iota[k - 1][n]))));
  return out;
}

inline bool is_zero_functor(const FunctorRep& T) {
  for (int o = 0; o < T.cat->n_obj; ++o)
    if (T.obj_valid(o) && !module_invariants(T.obj(o)).is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Random functors: quotients of finite direct sums of representables by
// action-closed random subfunctors; functorial by construction.

struct RandomFunctorParams {
  int max_summands = 2;
  int max_rep_obj = 2;   // representables P_k with k <= this
  int max_relations = 2;
  int coeff_bound = 2;
};

inline FunctorRep random_quotient_functor(const FinCat& C, Ring ring, std::mt19937_64& rng,
                                          RandomFunctorParams par = {}) {
  int ns = 1 + int(rng() % par.max_summands);
  auto ks = std::make_shared<std::vector<int>>();
  for (int i = 0; i < ns; ++i)
    ks->push_back(int(rng() % uint64_t(std::min(par.max_rep_obj, C.n_obj - 1) + 1)));
  const FinCat* pc = &C;
  auto free_gens = [pc, ks](int n) {
    int g = 0;
    for (int k : *ks) g += int(pc->hom[k][n].size());
    return g;
  };
  auto free_mor = [pc, ks](int f) {
    const Mor& m = pc->mors[f];
    Mat M(0, 0);
    for (int k : *ks) {
      const std::vector<int>& bs = pc->hom[k][m.src];
      const std::vector<int>& bt = pc->hom[k][m.tgt];
      std::map<int, int> idx;
      for (size_t j = 0; j < bt.size(); ++j) idx[bt[j]] = int(j);
      Mat B(int(bt.size()), int(bs.size()));
      for (size_t j = 0; j < bs.size(); ++j)
        B.at(idx.at(pc->compose(f, bs[j])), int(j)) = 1;
      M = direct_sum(M, B);
    }
    return M;
  };
  // planted random elements, one per relation, at random objects
  int nrel = int(rng() % uint64_t(par.max_relations + 1));
  auto planted = std::make_shared<std::vector<std::pair<int, Mat>>>();
  for (int j = 0; j < nrel; ++j) {
    int n0 = int(rng() % uint64_t(C.n_obj));
    int g = free_gens(n0);
    if (g == 0) continue;
    Mat v(g, 1);
    for (int i = 0; i < g; ++i)
      v.at(i, 0) = int(rng() % uint64_t(2 * par.coeff_bound + 1)) - par.coeff_bound;
    planted->push_back({n0, v});
  }
  FunctorRep T;
  T.cat = &C;
  T.ring = ring;
  T.valid = all_valid(C);
  T.obj_fn = [pc, ring, free_gens, free_mor, planted](int n) {
    int g = free_gens(n);
    int nc = 0;
    for (auto& [n0, v] : *planted) nc += int(pc->hom[n0][n].size());
    Mat rel(g, nc);
    int c = 0;
    for (auto& [n0, v] : *planted)
      for (int f : pc->hom[n0][n]) {
        Mat col = free_mor(f) * v;
        for (int i = 0; i < g; ++i) rel.at(i, c) = col.at(i, 0);
        ++c;
      }
    return FPModule(ring, g, rel);
  };
  T.mor_fn = [free_mor](int f) { return free_mor(f); };
  return T;
}

}  // namespace polyfun
