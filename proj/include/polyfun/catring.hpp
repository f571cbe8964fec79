#pragma once

// Category rings, induction (left Kan extension) along a functor between
// finite categories, tensor induction over endomorphism monoids with the
// factorisation certificate that transports it to the automorphism groups,
// and the block decomposition of a functor's values into induced pieces.

#include <array>
#include <set>

#include "polyfun/invariants.hpp"

namespace polyfun {

// ---------------------------------------------------------------------------
// The category ring: free abelian group on the morphisms, product of two
// basis elements their composite when composable and zero otherwise.

struct CategoryRing {
  const FinCat* C = nullptr;

  int rank() const { return int(C->mors.size()); }
  // basis product i . j (apply j first); -1 is the zero element
  int product(int i, int j) const {
    if (C->mors[j].tgt != C->mors[i].src) return -1;
    return C->compose(i, j);
  }
  // the unit is the sum of the identities
  const std::vector<int>& unit() const { return C->ids; }

  bool associative() const {
    int N = rank();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        int ij = product(i, j);
        for (int k = 0; k < N; ++k) {
          int jk = product(j, k);
          int lhs = ij < 0 ? -1 : product(ij, k);
          int rhs = jk < 0 ? -1 : product(i, jk);
          if (lhs != rhs) return false;
        }
      }
    return true;
  }
  bool unital() const {
    for (int i = 0; i < rank(); ++i) {
      int le = 0, re = 0;
      for (int e : unit()) {
        if (product(e, i) >= 0) {
          if (product(e, i) != i) return false;
          ++le;
        }
        if (product(i, e) >= 0) {
          if (product(i, e) != i) return false;
          ++re;
        }
      }
      if (le != 1 || re != 1) return false;
    }
    return true;
  }
};

inline CategoryRing category_ring(const FinCat& C) { return CategoryRing{&C}; }

// ---------------------------------------------------------------------------
// A one-object-plus-basepoint category whose endomorphisms of the fat object
// are the elements of a finite group (multiplication table, identity 0).

inline FinCat build_group_object(std::vector<std::vector<int>> gtab) {
  int G = int(gtab.size());
  FinCat C;
  C.name = "group|G|=" + std::to_string(G);
  C.kind = CatKind::WreathInj;
  C.window = 1;
  C.gtab = std::move(gtab);
  C.n_obj = 2;
  C.obj_grade = {0, 1};
  C.hom.assign(2, std::vector<std::vector<int>>(2));
  C.add_mor(0, 0, {});
  for (int g = 0; g < G; ++g) C.add_mor(1, 1, {1, g});
  C.ids = {C.find_mor(0, 0, {}), C.find_mor(1, 1, {1, 0})};
  return C;
}

// ---------------------------------------------------------------------------
// Induction along F: A -> B. The value at b is presented on generators
// (a, beta: F(a) -> b, j) with j a generator of g(a), modulo the relations of
// each g(a) and the identifications (beta . F(alpha)) x x = beta x g(alpha)x.

namespace detail {
struct IndLayout {
  std::vector<std::array<int, 3>> pairs;       // (a, beta, j)
  std::map<std::pair<int, int>, int> base;     // (a, beta) -> first index
};
}  // namespace detail

struct Induction {
  FunctorRep fun;
  std::shared_ptr<std::vector<detail::IndLayout>> layouts;

  int index(int b, int a, int beta, int j) const {
    auto it = (*layouts)[b].base.find({a, beta});
    return it == (*layouts)[b].base.end() ? -1 : it->second + j;
  }
};

inline Induction induce_along(const CatFunctor& F, const FunctorRep& g) {
  const FinCat& A = *F.src;
  const FinCat& B = *F.tgt;
  auto pg = std::make_shared<FunctorRep>(g);
  auto pF = std::make_shared<CatFunctor>(F);
  auto layouts = std::make_shared<std::vector<detail::IndLayout>>(B.n_obj);
  for (int b = 0; b < B.n_obj; ++b) {
    detail::IndLayout& L = (*layouts)[b];
    for (int a = 0; a < A.n_obj; ++a) {
      if (!g.obj_valid(a)) continue;
      int ga = g.obj(a).gens;
      for (int beta : B.hom[F.obj_map[a]][b]) {
        L.base[{a, beta}] = int(L.pairs.size());
        for (int j = 0; j < ga; ++j) L.pairs.push_back({a, beta, j});
      }
    }
  }
  const FinCat* pa = F.src;
  const FinCat* pb = F.tgt;
  FunctorRep R;
  R.cat = pb;
  R.ring = g.ring;
  R.semi = g.semi || F.semi;
  R.valid = all_valid(B);
  R.obj_fn = [pg, pF, pa, pb, layouts](int b) {
    const detail::IndLayout& L = (*layouts)[b];
    int n = int(L.pairs.size());
    std::vector<Mat> cols;
    // relations of each summand
    for (auto& [key, base] : L.base) {
      auto [a, beta] = key;
      const Mat& rel = pg->obj(a).rel;
      for (int r = 0; r < rel.cols; ++r) {
        Mat v(n, 1);
        for (int i = 0; i < rel.rows; ++i) v.at(base + i, 0) = rel.at(i, r);
        cols.push_back(std::move(v));
      }
    }
    // bilinearity over every morphism of the source
    for (size_t alpha = 0; alpha < pa->mors.size(); ++alpha) {
      if (!pg->mor_valid(int(alpha))) continue;
      const Mor& am = pa->mors[int(alpha)];
      const Mat& M = pg->mor(int(alpha));
      for (int beta : pb->hom[pF->obj_map[am.tgt]][b]) {
        int bcomp = pb->compose(beta, pF->mor_map[int(alpha)]);
        auto it1 = L.base.find({am.src, bcomp});
        auto it2 = L.base.find({am.tgt, beta});
        assert(it1 != L.base.end() && it2 != L.base.end());
        for (int j = 0; j < pg->obj(am.src).gens; ++j) {
          Mat v(n, 1);
          v.at(it1->second + j, 0) += 1;
          for (int i = 0; i < M.rows; ++i) v.at(it2->second + i, 0) -= M.at(i, j);
          if (!v.is_zero()) cols.push_back(std::move(v));
        }
      }
    }
    Mat rel(n, int(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
      for (int i = 0; i < n; ++i) rel.at(i, int(c)) = cols[c].at(i, 0);
    return FPModule(pg->ring, n, std::move(rel));
  };
  R.mor_fn = [pb, layouts](int f) {
    const Mor& m = pb->mors[f];
    const detail::IndLayout& Ls = (*layouts)[m.src];
    const detail::IndLayout& Lt = (*layouts)[m.tgt];
    Mat M(int(Lt.pairs.size()), int(Ls.pairs.size()));
    for (size_t c = 0; c < Ls.pairs.size(); ++c) {
      auto [a, beta, j] = Ls.pairs[c];
      auto it = Lt.base.find({a, pb->compose(f, beta)});
      assert(it != Lt.base.end());
      M.at(it->second + j, int(c)) += 1;
    }
    return M;
  };
  return {std::move(R), layouts};
}

// unit of the adjunction: g -> (induction along F) restricted back along F
inline NatTrans adjunction_unit(const CatFunctor& F, const FunctorRep& g,
                                const Induction& ind) {
  NatTrans t;
  t.source = g;
  t.target = precompose(ind.fun, F);
  for (int a = 0; a < F.src->n_obj; ++a) {
    if (!g.obj_valid(a)) continue;
    int fa = F.obj_map[a];
    Mat M(ind.fun.obj(fa).gens, g.obj(a).gens);
    for (int j = 0; j < g.obj(a).gens; ++j)
      M.at(ind.index(fa, a, F.tgt->ids[fa], j), j) = 1;
    t.comp[a] = std::move(M);
  }
  return t;
}

// The tensor product of the category ring of B with the total module of g
// over the category ring of A: all pairs (beta, a, j), with beta x x killed
// when beta does not start at F(a).
inline FPModule ring_induction_total(const CatFunctor& F, const FunctorRep& g) {
  const FinCat& A = *F.src;
  const FinCat& B = *F.tgt;
  std::vector<std::array<int, 3>> pairs;
  std::map<std::pair<int, int>, int> base;
  for (size_t beta = 0; beta < B.mors.size(); ++beta)
    for (int a = 0; a < A.n_obj; ++a) {
      if (!g.obj_valid(a)) continue;
      base[{int(beta), a}] = int(pairs.size());
      for (int j = 0; j < g.obj(a).gens; ++j) pairs.push_back({int(beta), a, j});
    }
  int n = int(pairs.size());
  std::vector<Mat> cols;
  for (auto& [key, bs] : base) {
    auto [beta, a] = key;
    if (B.mors[beta].src != F.obj_map[a]) {
      // beta x x = beta x (id_a . x) = (beta . F(id_a)) x x = 0
      for (int j = 0; j < g.obj(a).gens; ++j) {
        Mat v(n, 1);
        v.at(bs + j, 0) = 1;
        cols.push_back(std::move(v));
      }
      continue;
    }
    const Mat& rel = g.obj(a).rel;
    for (int r = 0; r < rel.cols; ++r) {
      Mat v(n, 1);
      for (int i = 0; i < rel.rows; ++i) v.at(bs + i, 0) = rel.at(i, r);
      cols.push_back(std::move(v));
    }
  }
  for (size_t alpha = 0; alpha < A.mors.size(); ++alpha) {
    if (!g.mor_valid(int(alpha))) continue;
    const Mor& am = A.mors[int(alpha)];
    const Mat& M = g.mor(int(alpha));
    for (size_t beta = 0; beta < B.mors.size(); ++beta) {
      if (B.mors[beta].src != F.obj_map[am.tgt]) continue;
      int bcomp = B.compose(int(beta), F.mor_map[int(alpha)]);
      int b1 = base.at({bcomp, am.src});
      int b2 = base.at({int(beta), am.tgt});
      for (int j = 0; j < g.obj(am.src).gens; ++j) {
        Mat v(n, 1);
        v.at(b1 + j, 0) += 1;
        for (int i = 0; i < M.rows; ++i) v.at(b2 + i, 0) -= M.at(i, j);
        if (!v.is_zero()) cols.push_back(std::move(v));
      }
    }
  }
  Mat rel(n, int(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (int i = 0; i < n; ++i) rel.at(i, int(c)) = cols[c].at(i, 0);
  return FPModule(g.ring, n, std::move(rel));
}

// ---------------------------------------------------------------------------
// Monoid induction. A module over a submonoid of the endomorphisms of one
// object, induced up to a larger submonoid via a sparse tensor presentation.

// greedy generating set for a set of endomorphisms closed under composition;
// each round adds the candidate whose closure covers the most
inline std::vector<int> monoid_generators(const FinCat& C, const std::vector<int>& elems) {
  if (elems.empty()) return {};
  int idm = C.ids[C.mors[elems.front()].src];
  std::set<int> closed{idm};
  auto closure_with = [&C](const std::set<int>& base, int extra) {
    std::set<int> cl = base;
    cl.insert(extra);
    std::vector<int> work(cl.begin(), cl.end());
    while (!work.empty()) {
      int x = work.back();
      work.pop_back();
      for (int y : std::vector<int>(cl.begin(), cl.end()))
        for (int p : {C.compose(x, y), C.compose(y, x)})
          if (cl.insert(p).second) work.push_back(p);
    }
    return cl;
  };
  auto covered = [&]() {
    for (int e : elems)
      if (!closed.count(e)) return false;
    return true;
  };
  std::vector<int> gens;
  while (!covered()) {
    int best = -1;
    size_t best_size = 0;
    for (int e : elems) {
      if (closed.count(e)) continue;
      size_t sz = closure_with(closed, e).size();
      if (sz > best_size) {
        best_size = sz;
        best = e;
      }
    }
    gens.push_back(best);
    closed = closure_with(closed, best);
  }
  return gens;
}

struct MonoidModule {
  FPModule mod;
  std::vector<int> elems;   // endomorphism ids, a submonoid
  std::vector<Mat> action;  // aligned with elems, mod.gens x mod.gens

  const Mat& act(int e) const {
    auto it = std::find(elems.begin(), elems.end(), e);
    assert(it != elems.end());
    return action[it - elems.begin()];
  }
  MonoidModule restricted(const std::vector<int>& sub) const {
    MonoidModule out{mod, sub, {}};
    for (int e : sub) out.action.push_back(act(e));
    return out;
  }
};

struct InducedModule {
  std::vector<int> basis;  // elements of the big monoid, one block each
  int block = 0;           // generators per block
  SparseReduction red;
};

inline InducedModule induce_module(const FinCat& C, const std::vector<int>& B,
                                   const MonoidModule& M, bool track = true) {
  assert(M.mod.ring == Ring::Z);
  std::map<int, int> bpos;
  for (size_t i = 0; i < B.size(); ++i) bpos[B[i]] = int(i);
  int g = M.mod.gens;
  int total = int(B.size()) * g;
  auto as_int = [](const mpq_class& q) {
    assert(q.get_den() == 1);
    return q.get_num();
  };
  std::vector<std::map<int, mpz_class>> cols;
  for (size_t ib = 0; ib < B.size(); ++ib)
    for (int r = 0; r < M.mod.rel.cols; ++r) {
      std::map<int, mpz_class> col;
      for (int i = 0; i < g; ++i)
        if (M.mod.rel.at(i, r) != 0) col[int(ib) * g + i] = as_int(M.mod.rel.at(i, r));
      if (!col.empty()) cols.push_back(std::move(col));
    }
  int idm = B.empty() ? -1 : C.ids[C.mors[B.front()].src];
  for (int a : monoid_generators(C, M.elems)) {
    if (a == idm) continue;
    const Mat& Aa = M.act(a);
    for (size_t ib = 0; ib < B.size(); ++ib) {
      int tb = bpos.at(C.compose(B[ib], a));
      for (int j = 0; j < g; ++j) {
        std::map<int, mpz_class> col;
        col[tb * g + j] += 1;
        for (int i = 0; i < g; ++i)
          if (Aa.at(i, j) != 0) col[int(ib) * g + i] -= as_int(Aa.at(i, j));
        for (auto it = col.begin(); it != col.end();)
          it = it->second == 0 ? col.erase(it) : std::next(it);
        if (!col.empty()) cols.push_back(std::move(col));
      }
    }
  }
  return {B, g, sparse_reduce(Ring::Z, total, cols, track)};
}

// trace over Q of left multiplication by sigma on the induced module
inline mpq_class induced_trace(const InducedModule& I, const FinCat& C, int sigma) {
  std::map<int, int> bpos;
  for (size_t i = 0; i < I.basis.size(); ++i) bpos[I.basis[i]] = int(i);
  int ng = I.red.reduced.gens;
  assert(I.red.tracked);
  Mat N(ng, ng);
  for (int c = 0; c < ng; ++c) {
    int orig = I.red.surviving[c];
    int ib = orig / I.block, j = orig % I.block;
    int target = bpos.at(C.compose(sigma, I.basis[ib])) * I.block + j;
    for (int r = 0; r < ng; ++r) N.at(r, c) = I.red.old_to_new.at(r, target);
  }
  return rational_trace_on_quotient(I.red.reduced.rel, N);
}

// ---------------------------------------------------------------------------
// Factorisation squares of endomorphism monoids: D with submonoids B, C and
// A = B meet C, together with a set X of pairs certifying that induction from
// C to D agrees with induction from A to B.

struct MonoidSquare {
  const FinCat* C = nullptr;
  int obj = 0;
  std::vector<int> D, B, Cm, A;                  // morphism ids
  std::function<std::vector<int>(int)> shadow;   // underlying partial injection
};

struct StarReport {
  bool surjective = false;  // every element of D is a product from X
  bool coherent = false;    // equal products differ by an element of A
  std::vector<std::pair<int, int>> X;
  std::vector<std::string> failures;
  bool holds() const { return surjective && coherent; }
};

// is b increasing on the positions of {1..n} missed by the image of c?
inline bool order_preserving_on_complement(const std::vector<int>& b,
                                           const std::vector<int>& c, int n) {
  std::vector<char> hit(n + 1, 0);
  for (int i = 0; i < n; ++i)
    if (c[i] > 0) hit[c[i]] = 1;
  int prev = 0;
  for (int i = 1; i <= n; ++i) {
    if (hit[i]) continue;
    if (b[i - 1] <= prev) return false;
    prev = b[i - 1];
  }
  return true;
}

inline StarReport check_property_star(const MonoidSquare& sq,
                                      const std::vector<std::pair<int, int>>* supplied =
                                          nullptr) {
  const FinCat& C = *sq.C;
  StarReport rep;
  if (supplied) {
    rep.X = *supplied;
  } else if (sq.shadow) {
    // canonical choice: b must be order-preserving off the image of c
    for (int b : sq.B) {
      std::vector<int> sb = sq.shadow(b);
      int n = int(sb.size());
      for (int c : sq.Cm)
        if (order_preserving_on_complement(sb, sq.shadow(c), n)) rep.X.push_back({b, c});
    }
  } else {
    if (int64_t(sq.B.size()) * int64_t(sq.Cm.size()) > (1 << 16)) {
      rep.failures.push_back("square too large for the exhaustive pair set");
      return rep;
    }
    for (int b : sq.B)
      for (int c : sq.Cm) rep.X.push_back({b, c});
  }
  std::map<int, std::vector<int>> by_product;
  for (size_t t = 0; t < rep.X.size(); ++t)
    by_product[C.compose(rep.X[t].first, rep.X[t].second)].push_back(int(t));
  rep.surjective = true;
  for (int d : sq.D)
    if (!by_product.count(d)) {
      rep.surjective = false;
      rep.failures.push_back("no factorisation of element " + std::to_string(d));
      break;
    }
  rep.coherent = true;
  for (auto& [d, ts] : by_product) {
    for (int t1 : ts)
      for (int t2 : ts) {
        auto [b1, c1] = rep.X[t1];
        auto [b2, c2] = rep.X[t2];
        bool found = false;
        for (int a : sq.A)
          if (C.compose(b2, a) == b1 && C.compose(a, c1) == c2) {
            found = true;
            break;
          }
        if (!found) {
          rep.coherent = false;
          rep.failures.push_back("factorisations of element " + std::to_string(d) +
                                 " are not related over the intersection");
          return rep;
        }
      }
  }
  return rep;
}

// The square at level n whose submonoids preserve the split of the first l
// points from the last k = n - l.
inline MonoidSquare block_square(const CatIStructure& cst, int n, int l) {
  const FinCat& C = *cst.C;
  const FinCat* Sig = cst.Sigma;
  auto pi = cst.pi;
  MonoidSquare sq;
  sq.C = &C;
  sq.obj = cst.s_obj[n];
  sq.D = C.endos(sq.obj);
  sq.B = C.automorphisms(sq.obj);
  std::set<int> auts(sq.B.begin(), sq.B.end());
  for (int e : sq.D)
    if (shadow_preserves_blocks(Sig->mors[pi(e)].data, n, l)) {
      sq.Cm.push_back(e);
      if (auts.count(e)) sq.A.push_back(e);
    }
  sq.shadow = [Sig, pi](int e) { return Sig->mors[pi(e)].data; };
  return sq;
}

// random module over a submonoid: free on |Cm| x rank places, permuted by the
// action, modulo a few planted orbits of relations
inline MonoidModule random_monoid_module(const FinCat& C, const std::vector<int>& Cm,
                                         int rank, int planted, std::mt19937_64& rng) {
  std::map<int, int> pos;
  for (size_t i = 0; i < Cm.size(); ++i) pos[Cm[i]] = int(i);
  int g = int(Cm.size()) * rank;
  MonoidModule M;
  M.elems = Cm;
  for (int e : Cm) {
    Mat A(g, g);
    for (size_t i = 0; i < Cm.size(); ++i) {
      int t = pos.at(C.compose(e, Cm[i]));
      for (int j = 0; j < rank; ++j) A.at(t * rank + j, int(i) * rank + j) = 1;
    }
    M.action.push_back(std::move(A));
  }
  Mat rel(g, planted * int(Cm.size()));
  for (int p = 0; p < planted; ++p) {
    Mat v(g, 1);
    for (int i = 0; i < g; ++i) v.at(i, 0) = int(rng() % 5) - 2;
    for (size_t i = 0; i < Cm.size(); ++i) {
      Mat w = M.action[i] * v;
      for (int r = 0; r < g; ++r) rel.at(r, p * int(Cm.size()) + int(i)) = w.at(r, 0);
    }
  }
  M.mod = FPModule(Ring::Z, g, std::move(rel));
  return M;
}

// the cross-effect piece at (n - l, l) as a module over the block-preserving
// endomorphisms; the class of modules the transport statement is about
inline MonoidModule piece_monoid_module(const FunctorRep& T, const CatIStructure& cst,
                                        int n, int l) {
  std::vector<CrossEffectPiece> pieces = cross_effect_pieces(T, cst, n);
  CrossEffectPiece& p = pieces.at(l);
  if (!p.actions_ok)
    throw std::runtime_error("cross-effect piece not preserved by its monoid");
  return MonoidModule{p.module, p.endos, p.action};
}

struct TransportReport {
  ModInvariants big, small;
  bool invariants_match = false;
  bool characters_match = false;
  std::vector<std::string> failures;
  bool ok() const { return invariants_match && characters_match; }
};

// compare induction of M from Cm to D with induction of M|_A from A to B
inline TransportReport check_transport(const MonoidSquare& sq, const MonoidModule& M) {
  const FinCat& C = *sq.C;
  TransportReport rep;
  InducedModule big = induce_module(C, sq.D, M);
  InducedModule small = induce_module(C, sq.B, M.restricted(sq.A));
  rep.big = module_invariants(big.red.reduced);
  rep.small = module_invariants(small.red.reduced);
  rep.invariants_match = rep.big == rep.small;
  if (!rep.invariants_match)
    rep.failures.push_back("invariant factors differ: " + rep.big.str() + " vs " +
                           rep.small.str());
  rep.characters_match = true;
  for (int b : sq.B) {
    mpq_class tb = induced_trace(big, C, b);
    mpq_class ts = induced_trace(small, C, b);
    if (tb != ts) {
      rep.characters_match = false;
      rep.failures.push_back("character differs at element " + std::to_string(b) + ": " +
                             tb.get_str() + " vs " + ts.get_str());
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Decomposition of a functor's value at level n into cross-effect pieces
// induced up from the block-preserving endomorphisms, certified by invariant
// factors and by the characters of all automorphisms over Q.

struct DecompReport {
  int n = 0;
  ModInvariants lhs, rhs;
  bool pieces_ok = true;
  bool invariants_match = false;
  bool characters_match = false;
  std::vector<std::string> failures;
  bool ok() const { return pieces_ok && invariants_match && characters_match; }
};

inline DecompReport equivariant_decomposition_check(const FunctorRep& T,
                                                    const CatIStructure& cst, int n,
                                                    bool group_form = true) {
  const FinCat& C = *T.cat;
  DecompReport rep;
  rep.n = n;
  int sn = cst.s_obj[n];
  rep.lhs = module_invariants(T.obj(sn));
  std::vector<int> Blist = group_form ? C.automorphisms(sn) : C.endos(sn);
  std::set<int> auts;
  if (group_form)
    for (int a : C.automorphisms(sn)) auts.insert(a);
  std::vector<InducedModule> inds;
  for (CrossEffectPiece& piece : cross_effect_pieces(T, cst, n)) {
    if (!piece.actions_ok) {
      rep.pieces_ok = false;
      rep.failures.push_back("piece (" + std::to_string(piece.k) + "," +
                             std::to_string(piece.l) + ") not preserved by its monoid");
      continue;
    }
    MonoidModule M{piece.module, {}, {}};
    for (size_t i = 0; i < piece.endos.size(); ++i)
      if (!group_form || auts.count(piece.endos[i])) {
        M.elems.push_back(piece.endos[i]);
        M.action.push_back(piece.action[i]);
      }
    if (piece.module.gens == 0) continue;
    inds.push_back(induce_module(C, Blist, M));
  }
  if (!rep.pieces_ok) return rep;
  Mat rhs_rel(0, 0);
  int rhs_gens = 0;
  for (const InducedModule& I : inds) {
    rhs_rel = direct_sum(rhs_rel, I.red.reduced.rel);
    rhs_gens += I.red.reduced.gens;
  }
  rep.rhs = module_invariants(FPModule(T.ring, rhs_gens, std::move(rhs_rel)));
  rep.invariants_match = rep.lhs == rep.rhs;
  if (!rep.invariants_match)
    rep.failures.push_back("invariant factors differ: " + rep.lhs.str() + " vs " +
                           rep.rhs.str());
  rep.characters_match = true;
  for (int sigma : C.automorphisms(sn)) {
    mpq_class lt = rational_trace_on_quotient(T.obj(sn).rel, T.mor(sigma));
    mpq_class rt = 0;
    for (const InducedModule& I : inds) rt += induced_trace(I, C, sigma);
    if (lt != rt) {
      rep.characters_match = false;
      rep.failures.push_back("character differs at automorphism " + std::to_string(sigma) +
                             ": " + lt.get_str() + " vs " + rt.get_str());
      break;
    }
  }
  return rep;
}

}  // namespace polyfun
