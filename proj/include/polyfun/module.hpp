#pragma once

// Finitely presented modules over Z or Q as cokernel presentations, module
// homomorphisms as generator matrices, canonical subobjects, and the
// kernel/image/cokernel engine used by every invariant computation.

#include <functional>
#include <map>
#include <unordered_map>

#include "polyfun/matrix.hpp"

namespace polyfun {

struct FPModule {
  Ring ring = Ring::Z;
  int gens = 0;
  Mat rel;  // gens x r, columns are relation vectors

  FPModule() : rel(0, 0) {}
  FPModule(Ring rg, int g, Mat r) : ring(rg), gens(g), rel(std::move(r)) {
    assert(rel.rows == gens);
  }
  static FPModule free_module(Ring rg, int g) { return FPModule(rg, g, Mat(g, 0)); }
  static FPModule zero(Ring rg) { return free_module(rg, 0); }
};

// (torsion invariant factors ascending, free rank). Over Q torsion is empty.
struct ModInvariants {
  std::vector<mpz_class> torsion;
  int free_rank = 0;
  bool operator==(const ModInvariants&) const = default;
  bool is_zero() const { return torsion.empty() && free_rank == 0; }
  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < torsion.size(); ++i) os << (i ? "," : "") << torsion[i];
    os << "] rank " << free_rank;
    return os.str();
  }
};

inline ModInvariants module_invariants(const FPModule& M) {
  if (M.ring == Ring::Q) return {{}, M.gens - rank_Q(M.rel)};
  std::vector<mpz_class> div = invariant_factors(M.rel);
  ModInvariants inv;
  for (auto& d : div)
    if (d != 1) inv.torsion.push_back(d);
  inv.free_rank = M.gens - int(div.size());
  return inv;
}

inline bool is_zero_module(const FPModule& M) { return module_invariants(M).is_zero(); }

// Columns X with A*X inside the column span of B (over the ring; over Z the
// result generates all integral such X). When B is block diagonal up to
// permutation the condition splits into one small membership problem per
// block, and the answers intersect as sublattices of the source; this keeps
// the integer kernels small where a single Hermite reduction of the combined
// matrix would suffer coefficient swell.
inline Mat preimage_span(Ring ring, const Mat& A, const Mat& B) {
  assert(A.rows == B.rows);
  auto direct = [&](const Mat& Ar, const Mat& Br) {
    // only the column span of Br matters; the canonical span basis has at
    // most Br.rows columns, which keeps the kernel problem small when the
    // relation matrix is wide
    Mat reduced;
    const Mat* Bu = &Br;
    if (Br.cols > Br.rows) { reduced = canonical_cols(ring, Br); Bu = &reduced; }
    Mat K = kernel_ring(ring, Ar.hcat(Bu->scaled(-1)));
    return K.row_range(0, Ar.cols);
  };
  if (ring == Ring::Q || A.rows == 0) return direct(A, B);
  // group rows joined by a common nonzero column of B
  std::vector<int> parent(A.rows);
  for (int i = 0; i < A.rows; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (int j = 0; j < B.cols; ++j) {
    int first = -1;
    for (int i = 0; i < B.rows; ++i) {
      if (B.at(i, j) == 0) continue;
      if (first < 0) first = i;
      else parent[find(i)] = find(first);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < A.rows; ++i) groups[find(i)].push_back(i);
  if (groups.size() <= 1) return direct(A, B);
  Mat L = Mat::identity(A.cols);
  for (auto& [root, rows] : groups) {
    Mat Ag(int(rows.size()), A.cols);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < A.cols; ++j) Ag.at(int(i), j) = A.at(rows[i], j);
    std::vector<int> bcols;
    for (int j = 0; j < B.cols; ++j)
      for (int i : rows)
        if (B.at(i, j) != 0) { bcols.push_back(j); break; }
    Mat Bg(int(rows.size()), int(bcols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < bcols.size(); ++j) Bg.at(int(i), int(j)) = B.at(rows[i], bcols[j]);
    Mat Kg = direct(Ag, Bg);
    // restrict L to the part landing in the lattice spanned by Kg
    Mat W = kernel_ring(ring, L.hcat(Kg.scaled(-1)));
    L = L * W.row_range(0, L.cols);
    if (L.cols == 0) break;
  }
  return L;
}

struct ModuleHom {
  FPModule source, target;
  Mat matrix;  // target.gens x source.gens

  ModuleHom() = default;
  ModuleHom(FPModule s, FPModule t, Mat m)
      : source(std::move(s)), target(std::move(t)), matrix(std::move(m)) {
    assert(matrix.rows == target.gens && matrix.cols == source.gens);
  }
  bool well_defined() const {
    if (source.rel.cols == 0) return true;
    return solve_ring(source.ring, target.rel, matrix * source.rel).has_value();
  }
};

// Two homs are equal as maps of presented modules iff columns differ by
// relations of the target.
inline bool homs_equal(const ModuleHom& f, const ModuleHom& g) {
  assert(f.matrix.rows == g.matrix.rows && f.matrix.cols == g.matrix.cols);
  Mat d = f.matrix - g.matrix;
  if (d.is_zero()) return true;
  return solve_ring(f.target.ring, f.target.rel, d).has_value();
}

struct Subobject {
  FPModule ambient;
  Mat gens;  // ambient.gens x k, columns are elements of the ambient

  Subobject(FPModule amb, Mat g) : ambient(std::move(amb)), gens(std::move(g)) {
    assert(gens.rows == ambient.gens);
  }
  // Canonical form: normal form of [generators | ambient relations]; equality
  // of subobjects is matrix equality of canonical forms.
  Mat canonical() const { return canonical_cols(ambient.ring, gens.hcat(ambient.rel)); }
  bool is_zero() const {
    // zero iff every generator lies in the relation span
    return solve_ring(ambient.ring, ambient.rel, gens).has_value();
  }
  bool same_as(const Subobject& o) const { return canonical() == o.canonical(); }
  bool contains(const Subobject& o) const {
    return solve_ring(ambient.ring, gens.hcat(ambient.rel), o.gens).has_value();
  }
  // The subobject as a module in its own right, with inclusion hom.
  ModuleHom as_module() const {
    FPModule sub(ambient.ring, gens.cols, preimage_span(ambient.ring, gens, ambient.rel));
    return ModuleHom(sub, ambient, gens);
  }
  // Ambient modulo this subobject, with projection hom.
  ModuleHom quotient() const {
    FPModule q(ambient.ring, ambient.gens, ambient.rel.hcat(gens));
    return ModuleHom(ambient, q, Mat::identity(ambient.gens));
  }
};

inline Subobject sub_sum(const std::vector<Subobject>& parts) {
  assert(!parts.empty());
  Mat g = parts[0].gens;
  for (size_t i = 1; i < parts.size(); ++i) g = g.hcat(parts[i].gens);
  return Subobject(parts[0].ambient, g);
}

inline Subobject sub_intersect(const Subobject& A, const Subobject& B) {
  // W1 x1 = W2 x2 + rel y  =>  element W1 x1 of the intersection
  Ring ring = A.ambient.ring;
  Mat K = kernel_ring(ring, A.gens.hcat(B.gens.scaled(-1)).hcat(A.ambient.rel.scaled(-1)));
  return Subobject(A.ambient, A.gens * K.row_range(0, A.gens.cols));
}

inline Subobject sub_intersect(const std::vector<Subobject>& parts) {
  assert(!parts.empty());
  // Replacing the generators by the canonical column span of [gens | rel]
  // gives the same subobject with at most ambient.gens columns; without this
  // the iterated intersections pile up columns and entry sizes.
  auto canon = [](const Subobject& s) { return Subobject(s.ambient, s.canonical()); };
  Subobject r = canon(parts[0]);
  for (size_t i = 1; i < parts.size(); ++i) r = canon(sub_intersect(r, canon(parts[i])));
  return r;
}

struct HomDecomposition {
  ModuleHom kernel;    // kernel module -> source
  ModuleHom image;     // image module -> target
  ModuleHom cokernel;  // target -> cokernel module
};

inline HomDecomposition hom_decompose(const ModuleHom& phi) {
  Ring ring = phi.source.ring;
  Mat W = preimage_span(ring, phi.matrix, phi.target.rel);  // ker gens on source gens
  FPModule ker(ring, W.cols, preimage_span(ring, W, phi.source.rel));
  FPModule img(ring, phi.source.gens, W);
  FPModule coker(ring, phi.target.gens, phi.target.rel.hcat(phi.matrix));
  return {ModuleHom(ker, phi.source, W), ModuleHom(img, phi.target, phi.matrix),
          ModuleHom(phi.target, coker, Mat::identity(phi.target.gens))};
}

inline Subobject image_subobject(const ModuleHom& phi) {
  return Subobject(phi.target, phi.matrix);
}
inline Subobject kernel_subobject(const ModuleHom& phi) {
  return Subobject(phi.source, preimage_span(phi.source.ring, phi.matrix, phi.target.rel));
}

// ---------------------------------------------------------------------------
// Sparse presentation shrinking (Tietze moves on +-1 pivots), with optional
// tracking of the change of generators. Used for large tensor presentations.

struct SparseReduction {
  FPModule reduced;
  std::vector<int> surviving;  // old generator index per new generator
  Mat old_to_new;              // new gens x old gens; the iso on quotients (if tracked)
  bool tracked = false;
};

inline SparseReduction sparse_reduce(Ring ring, int gens,
                                     const std::vector<std::map<int, mpz_class>>& columns,
                                     bool track) {
  std::vector<std::unordered_map<int, mpz_class>> cols(columns.size());
  for (size_t j = 0; j < columns.size(); ++j)
    for (auto& [i, v] : columns[j])
      if (v != 0) cols[j][i] = v;
  // row -> set of columns with a nonzero entry there
  std::vector<std::unordered_map<int, char>> row_occ(gens);
  for (size_t j = 0; j < cols.size(); ++j)
    for (auto& [i, v] : cols[j]) row_occ[i][int(j)] = 1;
  std::vector<char> gen_dead(gens, 0), col_dead(cols.size(), 0);
  // (eliminated gen, expression over gens alive at that time)
  std::vector<std::pair<int, std::vector<std::pair<int, mpz_class>>>> elims;

  while (true) {
    // pick a unit entry, preferring the sparsest column
    int bj = -1, bi = -1;
    size_t best = SIZE_MAX;
    for (size_t j = 0; j < cols.size(); ++j) {
      if (col_dead[j]) continue;
      for (auto& [i, v] : cols[j])
        if ((v == 1 || v == -1) && cols[j].size() < best) {
          best = cols[j].size();
          bj = int(j);
          bi = i;
          break;
        }
    }
    if (bj < 0) break;
    mpz_class e = cols[bj].at(bi);  // +-1
    if (track) {
      std::vector<std::pair<int, mpz_class>> expr;
      for (auto& [k, c] : cols[bj])
        if (k != bi) expr.emplace_back(k, -e * c);
      elims.emplace_back(bi, std::move(expr));
    }
    std::vector<int> touched;
    for (auto& [j2, _] : row_occ[bi])
      if (!col_dead[j2] && j2 != bj) touched.push_back(j2);
    for (int j2 : touched) {
      mpz_class a = cols[j2].at(bi);
      mpz_class f = a * e;  // coefficient of the pivot column to subtract
      for (auto& [k, c] : cols[bj]) {
        auto it = cols[j2].find(k);
        if (it == cols[j2].end()) {
          mpz_class nv = -f * c;
          if (nv != 0) {
            cols[j2][k] = nv;
            row_occ[k][j2] = 1;
          }
        } else {
          it->second -= f * c;
          if (it->second == 0) {
            cols[j2].erase(it);
            row_occ[k].erase(j2);
          }
        }
      }
    }
    for (auto& [k, c] : cols[bj]) row_occ[k].erase(bj);
    col_dead[bj] = 1;
    gen_dead[bi] = 1;
  }

  std::vector<int> surviving, new_index(gens, -1);
  for (int i = 0; i < gens; ++i)
    if (!gen_dead[i]) {
      new_index[i] = int(surviving.size());
      surviving.push_back(i);
    }
  int ng = int(surviving.size());
  // remaining columns, deduplicated and nonzero
  std::vector<Mat> keep;
  std::map<std::vector<std::pair<int, std::string>>, char> seen;
  Mat rel(ng, 0);
  {
    std::vector<std::vector<std::pair<int, mpz_class>>> rels;
    for (size_t j = 0; j < cols.size(); ++j) {
      if (col_dead[j] || cols[j].empty()) continue;
      std::vector<std::pair<int, mpz_class>> col(cols[j].begin(), cols[j].end());
      std::sort(col.begin(), col.end(),
                [](auto& a, auto& b) { return a.first < b.first; });
      std::vector<std::pair<int, std::string>> key;
      for (auto& [i, v] : col) key.emplace_back(new_index[i], v.get_str());
      if (seen.emplace(key, 1).second) rels.push_back(std::move(col));
    }
    rel = Mat(ng, int(rels.size()));
    for (size_t j = 0; j < rels.size(); ++j)
      for (auto& [i, v] : rels[j]) rel.at(new_index[i], int(j)) = v;
  }
  SparseReduction out{FPModule(ring, ng, rel), surviving, Mat(0, 0), track};
  if (track) {
    // back-substitute eliminated generators, in reverse elimination order
    std::vector<std::vector<mpq_class>> expansion(gens);
    auto basis_of = [&](int k) -> std::vector<mpq_class> {
      if (new_index[k] >= 0) {
        std::vector<mpq_class> v(ng, 0);
        v[new_index[k]] = 1;
        return v;
      }
      return expansion[k];  // filled already (eliminated later than current)
    };
    for (auto it = elims.rbegin(); it != elims.rend(); ++it) {
      std::vector<mpq_class> v(ng, 0);
      for (auto& [k, c] : it->second) {
        std::vector<mpq_class> b = basis_of(k);
        for (int x = 0; x < ng; ++x)
          if (b[x] != 0) v[x] += mpq_class(c) * b[x];
      }
      expansion[it->first] = std::move(v);
    }
    Mat P(ng, gens);
    for (int k = 0; k < gens; ++k) {
      std::vector<mpq_class> b = basis_of(k);
      for (int x = 0; x < ng; ++x) P.at(x, k) = b[x];
    }
    out.old_to_new = std::move(P);
  }
  return out;
}

// Trace of the endomorphism induced by A on the quotient of Q^g by the column
// span of rel. A must preserve the span.
inline mpq_class rational_trace_on_quotient(const Mat& rel, const Mat& A) {
  Mat C = rref_cols(rel);
  if (C.cols == 0) return A.trace();
  auto X = solve_Q(C, A * C);
  assert(X.has_value());
  return A.trace() - X->trace();
}

}  // namespace polyfun
