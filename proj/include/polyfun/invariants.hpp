#pragma once

// The invariant calculators: cross-effects in the image / cokernel / kernel
// flavours, the three height notions (subset-category mode, ordered-partition
// mode, and the injective-maps mode), the four recursive degrees, the graded
// cross-effect functor with its monoid actions, and Taylor approximations on
// finite pointed sets.

#include "polyfun/funrep.hpp"

namespace polyfun {

enum class CrossFlavor { Cr, CrBar, CrBarPrime };
enum class HeightMode { I, Oplus, FI };

inline const char* flavor_name(CrossFlavor f) {
  switch (f) {
    case CrossFlavor::Cr: return "cr";
    case CrossFlavor::CrBar: return "crbar";
    case CrossFlavor::CrBarPrime: return "crbarprime";
  }
  return "";
}
inline const char* mode_name(HeightMode m) {
  switch (m) {
    case HeightMode::I: return "I";
    case HeightMode::Oplus: return "oplus";
    case HeightMode::FI: return "FI";
  }
  return "";
}

namespace detail {

inline Mat vcat(const Mat& A, const Mat& B) {
  assert(A.cols == B.cols || A.rows == 0 || B.rows == 0);
  int cols = A.rows ? A.cols : B.cols;
  Mat R(A.rows + B.rows, cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) R.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) R.at(A.rows + i, j) = B.at(i, j);
  return R;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cross-effects of a (semi-)functor given on a cube category (Cr), the subset
// poset (CrBar), or its opposite (CrBarPrime).

inline FPModule cross_effect(const FunctorRep& f, CrossFlavor flavor) {
  const FinCat& C = *f.cat;
  switch (flavor) {
    case CrossFlavor::Cr: {
      if (C.kind != CatKind::CubeMonoid)
        throw std::invalid_argument("cr expects a cube-monoid functor");
      int n = C.obj_grade[0];
      const FPModule& V = f.obj(0);
      Mat N(V.gens, V.gens);
      for (uint32_t S : subsets_of(n)) {
        Mat M = f.mor(C.find_mor(0, 0, {int(full_mask(n) & ~S)}));
        N = popcount32(S) % 2 ? N - M : N + M;
      }
      return hom_decompose(ModuleHom(V, V, N)).image.source;
    }
    case CrossFlavor::CrBar: {
      if (C.kind != CatKind::SubsetPoset || C.poset_op)
        throw std::invalid_argument("crbar expects a subset-poset functor");
      int full = C.n_obj - 1;
      const FPModule& V = f.obj(full);
      Mat rel = V.rel;
      for (int s = 0; s < full; ++s) rel = rel.hcat(f.mor(C.find_mor(s, full, {})));
      return FPModule(f.ring, V.gens, rel);
    }
    case CrossFlavor::CrBarPrime: {
      if (C.kind != CatKind::SubsetPoset || !C.poset_op)
        throw std::invalid_argument("crbarprime expects an op-subset-poset functor");
      int full = C.n_obj - 1;
      const FPModule& V = f.obj(full);
      Mat stacked(0, V.gens);
      Mat rel_blocks(0, 0);
      for (int t = 0; t < full; ++t) {
        stacked = detail::vcat(stacked, f.mor(C.find_mor(full, t, {})));
        rel_blocks = direct_sum(rel_blocks, f.obj(t).rel);
      }
      FPModule target(f.ring, stacked.rows, rel_blocks);
      return hom_decompose(ModuleHom(V, target, stacked)).kernel.source;
    }
  }
  return FPModule::zero(f.ring);
}

// ---------------------------------------------------------------------------
// Subset endomorphism structures for heights: the object realising level m
// and the subset endomorphisms r_mask at each level.

struct IStructure {
  const FinCat* C = nullptr;
  std::vector<int> s_obj;
  std::function<int(int, uint32_t)> s_endo;  // (m, mask) -> endo mor id at s_obj[m]
};

inline IStructure istructure_of(const FinCat& C) {
  IStructure ist;
  ist.C = &C;
  ist.s_obj.resize(C.n_obj);
  for (int n = 0; n < C.n_obj; ++n) ist.s_obj[n] = n;
  ist.s_endo = [&C](int m, uint32_t mask) { return r_endo(C, m, mask); };
  return ist;
}

// Image of the alternating sum over S of T(r over the complementary blocks of
// lambda): the partition-indexed subobject in its alternating-sum form.
inline Subobject partition_subobject_alt(const FunctorRep& T, const IStructure& ist, int m,
                                         const ShiftedPartition& lam) {
  assert(lam.m() == m);
  int n = lam.length();
  const FPModule& V = T.obj(ist.s_obj[m]);
  Mat N(V.gens, V.gens);
  for (uint32_t S : subsets_of(n)) {
    uint32_t payload = lam.expand(full_mask(n) & ~S);
    Mat M = T.mor(ist.s_endo(m, payload));
    N = popcount32(S) % 2 ? N - M : N + M;
  }
  return image_subobject(ModuleHom(V, V, N));
}

// The same subobject in its intersection form: image of keeping only the
// blocks, intersected with the kernels of forgetting each single block.
inline Subobject partition_subobject_int(const FunctorRep& T, const IStructure& ist, int m,
                                         const ShiftedPartition& lam) {
  assert(lam.m() == m);
  int n = lam.length();
  FPModule V = T.obj(ist.s_obj[m]);
  // the iterated intersections below repeatedly feed the ambient relations
  // into kernel computations; replace them by their canonical span basis so
  // a wide relation matrix is processed once instead of per intersection
  if (V.rel.cols > V.rel.rows) V.rel = canonical_cols(V.ring, V.rel);
  uint32_t all_blocks = lam.expand(full_mask(n));
  std::vector<Subobject> parts;
  parts.push_back(image_subobject(ModuleHom(V, V, T.mor(ist.s_endo(m, all_blocks)))));
  for (int i = 1; i <= n; ++i) {
    uint32_t keep = full_mask(m) & ~lam.block(i);
    parts.push_back(kernel_subobject(ModuleHom(V, V, T.mor(ist.s_endo(m, keep)))));
  }
  return sub_intersect(parts);
}

// The level-(m, lambda) cross-effect of T in the requested flavour, as a
// module: image of the alternating sum (Cr), cokernel of the summed images
// over proper sub-expansions (CrBar), or kernel of the assembled restriction
// map (CrBarPrime).
inline FPModule partition_cross_effect(const FunctorRep& T, const IStructure& ist, int m,
                                       const ShiftedPartition& lam, CrossFlavor flavor) {
  assert(lam.m() == m);
  int n = lam.length();
  const FPModule& V = T.obj(ist.s_obj[m]);
  switch (flavor) {
    case CrossFlavor::Cr:
      return partition_subobject_alt(T, ist, m, lam).as_module().source;
    case CrossFlavor::CrBar: {
      Mat rel = V.rel;
      for (uint32_t S : subsets_of(n)) {
        if (S == full_mask(n)) continue;
        rel = rel.hcat(T.mor(ist.s_endo(m, lam.expand(S))));
      }
      return FPModule(T.ring, V.gens, rel);
    }
    case CrossFlavor::CrBarPrime: {
      Mat stacked(0, V.gens);
      Mat rel_blocks(0, 0);
      for (uint32_t S : subsets_of(n)) {
        if (S == full_mask(n)) continue;
        stacked = detail::vcat(stacked, T.mor(ist.s_endo(m, lam.expand(S))));
        rel_blocks = direct_sum(rel_blocks, V.rel);
      }
      FPModule target(T.ring, stacked.rows, rel_blocks);
      return hom_decompose(ModuleHom(V, target, stacked)).kernel.source;
    }
  }
  return FPModule::zero(T.ring);
}

// ---------------------------------------------------------------------------
// Heights

struct HeightWitness {
  int m = 0, n = 0;
  std::vector<int> lambda;  // empty in FI mode
  ModInvariants inv;
};

struct HeightReport {
  HeightMode mode = HeightMode::I;
  CrossFlavor flavor = CrossFlavor::Cr;
  int window = 0;
  int value = -1;                        // height as certified within the window
  std::vector<HeightWitness> witnesses;  // smallest witness per nonzero level
  bool subobject_checks_ok = true;       // mode I + Cr: both subobject forms agreed
};

namespace detail {

// compositions of m into n parts >= 1, lexicographic
inline std::vector<std::vector<int>> compositions(int m, int n) {
  std::vector<std::vector<int>> out;
  if (n == 0) {
    if (m == 0) out.push_back({});
    return out;
  }
  std::vector<int> cur(n);
  std::function<void(int, int)> rec = [&](int i, int rem) {
    if (i == n) {
      if (rem == 0) out.push_back(cur);
      return;
    }
    for (int p = 1; p <= rem - (n - i - 1); ++p) {
      cur[i] = p;
      rec(i + 1, rem - p);
    }
  };
  rec(0, m);
  return out;
}

}  // namespace detail

// Height via subset endomorphisms. Mode I uses the partitions with singleton
// blocks at the top; mode Oplus ranges over all ordered partitions with empty
// prefix. Witnesses are the lexicographically first nonzero (m, lambda) per
// level. Mode I with the image flavour also recomputes each subobject in its
// intersection form and records agreement.
inline HeightReport height(const FunctorRep& T, const IStructure& ist, HeightMode mode,
                           CrossFlavor flavor, int window) {
  assert(mode != HeightMode::FI);
  HeightReport rep;
  rep.mode = mode;
  rep.flavor = flavor;
  rep.window = window;
  for (int n = 0; n <= window; ++n) {
    bool found = false;
    for (int m = n; m <= window && !found; ++m) {
      if (m >= int(ist.s_obj.size()) || !T.obj_valid(ist.s_obj[m])) continue;
      std::vector<ShiftedPartition> lams;
      if (mode == HeightMode::I) {
        std::vector<int> parts(n + 1, 1);
        parts[0] = m - n;
        lams.push_back(ShiftedPartition{parts});
      } else {
        for (auto& c : detail::compositions(m, n)) {
          std::vector<int> parts(n + 1, 0);
          for (int i = 0; i < n; ++i) parts[i + 1] = c[i];
          lams.push_back(ShiftedPartition{parts});
        }
      }
      for (auto& lam : lams) {
        FPModule ce = partition_cross_effect(T, ist, m, lam, flavor);
        ModInvariants inv = module_invariants(ce);
        if (mode == HeightMode::I && flavor == CrossFlavor::Cr) {
          Subobject a = partition_subobject_alt(T, ist, m, lam);
          Subobject b = partition_subobject_int(T, ist, m, lam);
          if (!a.same_as(b)) rep.subobject_checks_ok = false;
        }
        if (!inv.is_zero()) {
          rep.witnesses.push_back({m, n, lam.parts, inv});
          rep.value = std::max(rep.value, n);
          found = true;
          break;
        }
      }
    }
  }
  return rep;
}

// Height via order-preserving injections, as a generation degree: at each m
// find the least h such that the images of T applied to the order-preserving
// injections from all subsets of size at most h span T(m) (h = -1 demands
// T(m) = 0); the height is the maximum over the window. T must live on a
// category whose morphism data contains the order-preserving injections (the
// injective-maps truncations).
inline HeightReport height_fi(const FunctorRep& T, int window) {
  const FinCat& C = *T.cat;
  HeightReport rep;
  rep.mode = HeightMode::FI;
  rep.flavor = CrossFlavor::Cr;
  rep.window = window;
  for (int m = 0; m <= window; ++m) {
    if (!T.obj_valid(m)) continue;
    const FPModule& V = T.obj(m);
    Mat rel = V.rel;
    int hm = -1;
    ModInvariants last;
    for (int h = -1; h < m; ++h) {
      if (h >= 0) {
        for (uint32_t S : subsets_of(m)) {
          if (popcount32(S) != h) continue;
          std::vector<int> elems;
          for (int i = 1; i <= m; ++i)
            if ((S >> (i - 1)) & 1) elems.push_back(i);
          std::vector<int> data = elems;
          if (C.kind == CatKind::WreathInj) data.resize(2 * h, 0);
          int f = C.find_mor(h, m, data);
          assert(f >= 0);
          rel = rel.hcat(T.mor(f));
        }
      }
      ModInvariants inv = module_invariants(FPModule(T.ring, V.gens, rel));
      hm = h;
      if (inv.is_zero()) break;
      last = inv;
      hm = h + 1;  // not yet spanned: at least one more size is needed
    }
    if (hm > rep.value) {
      rep.value = hm;
      rep.witnesses.push_back({m, hm, {}, last});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Degrees

enum class DegreeVariant { Deg, IDeg, SDeg, WDeg };

inline const char* variant_name(DegreeVariant v) {
  switch (v) {
    case DegreeVariant::Deg: return "deg";
    case DegreeVariant::IDeg: return "ideg";
    case DegreeVariant::SDeg: return "sdeg";
    case DegreeVariant::WDeg: return "wdeg";
  }
  return "";
}

struct DegreeValue {
  int d = -1;
  bool exact = true;  // false: only a lower bound was certified in the window
  bool operator==(const DegreeValue&) const = default;
  std::string str() const {
    return (exact ? "Exact(" : "AtLeast(") + std::to_string(d) + ")";
  }
};

struct DegreeReport {
  DegreeVariant variant = DegreeVariant::Deg;
  DegreeValue value;
  bool window_split = false;  // sdeg: splittings verified inside the window only
  std::vector<std::string> trace;
};

namespace detail {

constexpr int kDegInf = 1 << 20;

inline bool shift_pair_valid(const FunctorRep& T, const Stabiliser& st, int k, int n) {
  int sn = st.s_obj[k - 1][n];
  return T.obj_valid(n) && sn >= 0 && T.obj_valid(sn);
}

inline bool kernels_vanish(const FunctorRep& T, const Stabiliser& st, int k) {
  for (int n = 0; n < T.cat->n_obj; ++n) {
    if (!shift_pair_valid(T, st, k, n)) continue;
    ModuleHom h(T.obj(n), T.obj(st.s_obj[k - 1][n]), T.mor(st.iota[k - 1][n]));
    if (!kernel_subobject(h).is_zero()) return false;
  }
  return true;
}

inline bool kappa_full(const FunctorRep& T, const Stabiliser& st) {
  for (int n = 0; n < T.cat->n_obj; ++n) {
    if (!T.obj_valid(n)) continue;
    std::vector<Subobject> kers;
    for (int k = 1; k <= st.K; ++k) {
      if (!shift_pair_valid(T, st, k, n)) continue;
      kers.push_back(kernel_subobject(
          ModuleHom(T.obj(n), T.obj(st.s_obj[k - 1][n]), T.mor(st.iota[k - 1][n]))));
    }
    if (kers.empty()) continue;
    if (!sub_sum(kers).same_as(Subobject(T.obj(n), Mat::identity(T.obj(n).gens))))
      return false;
  }
  return true;
}

// Exact search for a natural left inverse of T iota_k within the window, by
// solving the defining linear system over the coefficient ring (unknown
// component matrices plus relation slack). Returns nullopt when the system is
// too large; categories with a categorical retraction never reach this.
inline std::optional<bool> natural_split_exists(const FunctorRep& T, const Stabiliser& st,
                                                int k) {
  const FinCat& C = *T.cat;
  if (C.mors.size() > 2000) return std::nullopt;
  std::vector<int> objs;
  for (int n = 0; n < C.n_obj; ++n)
    if (shift_pair_valid(T, st, k, n)) objs.push_back(n);
  if (objs.empty()) return true;
  std::map<int, int> base;
  int nvars = 0;
  auto gs = [&](int n) { return T.obj(st.s_obj[k - 1][n]).gens; };
  for (int n : objs) {
    base[n] = nvars;
    nvars += T.obj(n).gens * gs(n);
  }
  auto pvar = [&](int n, int i, int j) { return base.at(n) + i * gs(n) + j; };

  std::vector<std::map<int, mpq_class>> rows;
  std::vector<mpq_class> rhs;
  int total = nvars;
  // one matrix equation = g x c scalar equations, slack from rel per column
  auto add_mateq = [&](int g, int c, const Mat& rel,
                       const std::function<void(int, int, std::map<int, mpq_class>&)>& lhs,
                       const std::function<int(int, int)>& rhsf) {
    int rc = rel.cols;
    int b0 = total;
    total += rc * c;
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < g; ++i) {
        std::map<int, mpq_class> row;
        lhs(i, j, row);
        for (int t = 0; t < rc; ++t)
          if (rel.at(i, t) != 0) row[b0 + j * rc + t] -= rel.at(i, t);
        rows.push_back(std::move(row));
        rhs.push_back(rhsf(i, j));
      }
  };
  for (int n : objs) {
    const Mat& MI = T.mor(st.iota[k - 1][n]);
    int g = T.obj(n).gens;
    add_mateq(
        g, g, T.obj(n).rel,
        [&, n](int i, int j, std::map<int, mpq_class>& row) {
          for (int t = 0; t < MI.rows; ++t)
            if (MI.at(t, j) != 0) row[pvar(n, i, t)] += MI.at(t, j);
        },
        [](int i, int j) { return i == j ? 1 : 0; });
  }
  for (size_t f = 0; f < C.mors.size(); ++f) {
    const Mor& m = C.mors[f];
    if (!base.count(m.src) || !base.count(m.tgt)) continue;
    int sf = st.s_mor[k - 1][f];
    if (sf < 0) continue;
    const Mat& MF = T.mor(int(f));
    const Mat& MSF = T.mor(sf);
    add_mateq(
        T.obj(m.tgt).gens, gs(m.src), T.obj(m.tgt).rel,
        [&, a = m.src, b = m.tgt](int i, int j, std::map<int, mpq_class>& row) {
          for (int t = 0; t < MF.cols; ++t)
            if (MF.at(i, t) != 0) row[pvar(a, t, j)] += MF.at(i, t);
          for (int u = 0; u < MSF.rows; ++u)
            if (MSF.at(u, j) != 0) row[pvar(b, i, u)] -= MSF.at(u, j);
        },
        [](int, int) { return 0; });
    if (total > 600 || rows.size() > 1500) return std::nullopt;
  }
  if (total > 600 || rows.size() > 1500) return std::nullopt;
  Mat A(int(rows.size()), total), b(int(rows.size()), 1);
  for (size_t e = 0; e < rows.size(); ++e) {
    for (auto& [v, cf] : rows[e]) A.at(int(e), v) = cf;
    b.at(int(e), 0) = rhs[e];
  }
  return solve_ring(T.ring, A, b).has_value();
}

inline DegreeValue degree_rec(const FunctorRep& T, const Stabiliser& st, DegreeVariant v,
                              bool* window_split, std::vector<std::string>* trace,
                              int depth) {
  bool any_obj = false;
  for (int n = 0; n < T.cat->n_obj; ++n) any_obj = any_obj || T.obj_valid(n);
  if (!any_obj) return {-1, false};
  if (is_zero_functor(T)) return {-1, true};
  if (v == DegreeVariant::WDeg && kappa_full(T, st)) return {-1, true};
  DegreeValue out{-1, true};
  for (int k = 1; k <= st.K; ++k) {
    bool computable = false;
    for (int n = 0; n < T.cat->n_obj; ++n)
      computable = computable || shift_pair_valid(T, st, k, n);
    DegreeValue child{-1, false};
    if (computable) {
      bool force_inexact = false;
      if (v == DegreeVariant::IDeg && !kernels_vanish(T, st, k)) {
        if (trace)
          trace->push_back("depth " + std::to_string(depth) + " shift " +
                           std::to_string(k) + ": nonzero kernel, no finite value");
        return {kDegInf, false};
      }
      if (v == DegreeVariant::SDeg && !st.has_retraction) {
        auto split = natural_split_exists(T, st, k);
        if (!split.has_value()) {
          force_inexact = true;
        } else if (!*split) {
          if (trace)
            trace->push_back("depth " + std::to_string(depth) + " shift " +
                             std::to_string(k) + ": no natural splitting");
          return {kDegInf, false};
        } else if (window_split) {
          *window_split = true;
        }
      }
      child = degree_rec(delta_functor(T, st, k).delta, st, v, window_split, trace,
                         depth + 1);
      if (force_inexact) child.exact = false;
    }
    if (child.d > out.d) out.d = child.d;
    out.exact = out.exact && child.exact;
  }
  if (out.d >= kDegInf) return {kDegInf, false};
  return {out.d + 1, out.exact};
}

}  // namespace detail

inline DegreeReport degree(const FunctorRep& T, const Stabiliser& st, DegreeVariant v) {
  DegreeReport rep;
  rep.variant = v;
  rep.value = detail::degree_rec(T, st, v, &rep.window_split, &rep.trace, 0);
  if (!rep.value.exact && rep.value.d > st.C->window)
    rep.value.d = st.C->window;  // certified-unbounded results clamp to the window
  return rep;
}

// ---------------------------------------------------------------------------
// The graded cross-effect functor: at total grade n, the piece (k, l) is the
// subobject of T(s(n)) cut out by keeping the last k points and killing each
// of them individually, together with the action of the endomorphisms whose
// shadow preserves the first l and the last k points as blocks.

struct CrossEffectPiece {
  int n = 0, k = 0, l = 0;
  Subobject sub;
  FPModule module;          // the piece as a module in its own right
  Mat incl;                 // ambient coordinates of the piece's generators
  std::vector<int> endos;   // mor ids of the block-preserving endomorphisms
  std::vector<Mat> action;  // matching action matrices on the piece
  bool actions_ok = true;   // every endomorphism preserved the subobject
};

// Does the partial injection on n points preserve {1..l} and {l+1..n}
// separately?
inline bool shadow_preserves_blocks(const std::vector<int>& p, int n, int l) {
  for (int i = 1; i <= n; ++i) {
    int v = p[i - 1];
    if (v == 0) continue;
    if (i <= l && v > l) return false;
    if (i > l && v <= l) return false;
  }
  return true;
}

inline std::vector<CrossEffectPiece> cross_effect_pieces(const FunctorRep& T,
                                                         const CatIStructure& cst, int n) {
  const FinCat& C = *cst.C;
  const FinCat& Sigma = *cst.Sigma;
  int sn = cst.s_obj[n];
  const FPModule& V = T.obj(sn);
  std::vector<CrossEffectPiece> out;
  for (int l = 0; l <= n; ++l) {
    int k = n - l;
    // image of keeping the last k points ...
    uint32_t lastk = full_mask(n) & ~full_mask(l);
    std::vector<Subobject> parts;
    parts.push_back(image_subobject(ModuleHom(V, V, T.mor(cst.s_mor(n, n, lastk)))));
    // ... intersected with the kernels of dropping each of them
    for (int i = l + 1; i <= n; ++i) {
      uint32_t keep = full_mask(n) & ~(1u << (i - 1));
      parts.push_back(kernel_subobject(ModuleHom(V, V, T.mor(cst.s_mor(n, n, keep)))));
    }
    CrossEffectPiece piece{n,        k,       l,  sub_intersect(parts),
                           FPModule(), Mat(0, 0), {}, {},
                           true};
    ModuleHom inc = piece.sub.as_module();
    piece.module = inc.source;
    piece.incl = inc.matrix;
    for (int e : C.endos(sn)) {
      const Mor& shadow = Sigma.mors[cst.pi(e)];
      if (!shadow_preserves_blocks(shadow.data, n, l)) continue;
      piece.endos.push_back(e);
      // M_e . W = W . A + rel . Y, read off A
      Mat rhs = T.mor(e) * piece.incl;
      auto sol = solve_ring(T.ring, piece.incl.hcat(V.rel), rhs);
      if (!sol.has_value()) {
        piece.actions_ok = false;
        piece.action.push_back(Mat(piece.incl.cols, piece.incl.cols));
        continue;
      }
      piece.action.push_back(sol->row_range(0, piece.incl.cols));
    }
    out.push_back(std::move(piece));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taylor approximations of a functor on finite pointed sets. The degree-d
// approximation at c quotients T(c) by the image under the fold map of the
// joint kernel of collapsing (d+1)-fold wedges of c onto proper sub-wedges.

namespace detail {

// based collapse (n copies of c) -> (|S| copies of c), keeping the copies in S
inline std::vector<int> wedge_collapse_data(int n, int c, uint32_t S) {
  std::vector<int> pos(n + 1, 0);
  int t = 0;
  for (int j = 1; j <= n; ++j)
    if ((S >> (j - 1)) & 1) pos[j] = ++t;
  std::vector<int> d(n * c, 0);
  for (int j = 1; j <= n; ++j)
    if (pos[j])
      for (int i = 1; i <= c; ++i) d[(j - 1) * c + i - 1] = (pos[j] - 1) * c + i;
  return d;
}

inline std::vector<int> wedge_fold_data(int n, int c) {
  std::vector<int> d(n * c);
  for (int i = 0; i < n * c; ++i) d[i] = i % c + 1;
  return d;
}

}  // namespace detail

// The generators (in T(c)) of the subobject the degree-d approximation kills.
inline Subobject taylor_killed_subobject(const FunctorRep& T, int c, int d) {
  const FinCat& G = *T.cat;
  assert(G.kind == CatKind::Pointed);
  int n = d + 1;
  const FPModule& W = T.obj(n * c);
  Mat stacked(0, W.gens);
  Mat rel_blocks(0, 0);
  for (uint32_t S : subsets_of(n)) {
    if (S == full_mask(n)) continue;
    int s = popcount32(S);
    int f = G.find_mor(n * c, s * c, detail::wedge_collapse_data(n, c, S));
    stacked = detail::vcat(stacked, T.mor(f));
    rel_blocks = direct_sum(rel_blocks, T.obj(s * c).rel);
  }
  FPModule target(T.ring, stacked.rows, rel_blocks);
  Subobject K = kernel_subobject(ModuleHom(W, target, stacked));
  int fold = G.find_mor(n * c, c, detail::wedge_fold_data(n, c));
  return Subobject(T.obj(c), T.mor(fold) * K.gens);
}

// The degree-d approximation as a functor, valid where the wedge fits the
// window. Generators agree with T, so the projection is the identity matrix.
inline FunctorRep taylor_approximation(const FunctorRep& T, int d) {
  const FinCat& G = *T.cat;
  assert(G.kind == CatKind::Pointed);
  FunctorRep P;
  P.cat = T.cat;
  P.ring = T.ring;
  P.valid.resize(G.n_obj, 0);
  for (int c = 0; c < G.n_obj; ++c)
    P.valid[c] = T.obj_valid(c) && (d + 1) * c < G.n_obj && T.obj_valid((d + 1) * c);
  auto pt = std::make_shared<FunctorRep>(T);
  P.obj_fn = [pt, d](int c) {
    Subobject killed = taylor_killed_subobject(*pt, c, d);
    const FPModule& V = pt->obj(c);
    return FPModule(pt->ring, V.gens, V.rel.hcat(killed.gens));
  };
  P.mor_fn = [pt](int f) { return pt->mor(f); };
  return P;
}

// The tower map from the degree-d to the degree-(d-1) approximation: identity
// on generators, defined on the smaller of the two validity windows.
inline NatTrans taylor_tower_map(const FunctorRep& T, int d) {
  assert(d >= 1);
  NatTrans t;
  t.source = taylor_approximation(T, d);
  t.target = taylor_approximation(T, d - 1);
  for (int c = 0; c < T.cat->n_obj; ++c) {
    t.target.valid[c] = t.target.valid[c] && t.source.valid[c];
    if (t.source.obj_valid(c) && t.target.obj_valid(c))
      t.comp[c] = Mat::identity(T.obj(c).gens);
  }
  return t;
}

}  // namespace polyfun
