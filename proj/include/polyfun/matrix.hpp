#pragma once

// Exact dense matrices over Z and Q (GMP), with the normal forms and solvers
// that everything else is built on: Smith normal form, column Hermite form,
// integer/rational kernels and linear solving.

#include <gmpxx.h>

#include <cassert>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace polyfun {

enum class Ring { Z, Q };

inline const char* ring_name(Ring r) { return r == Ring::Z ? "Z" : "Q"; }

struct Mat {
  int rows = 0, cols = 0;
  std::vector<mpq_class> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static Mat zero(int r, int c) { return Mat(r, c); }

  mpq_class& at(int i, int j) {
    assert(i >= 0 && i < rows && j >= 0 && j < cols);
    return a[size_t(i) * cols + j];
  }
  const mpq_class& at(int i, int j) const {
    assert(i >= 0 && i < rows && j >= 0 && j < cols);
    return a[size_t(i) * cols + j];
  }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  bool is_zero() const {
    for (auto& x : a)
      if (x != 0) return false;
    return true;
  }
  bool is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }
  bool is_integral() const {
    for (auto& x : a)
      if (x.get_den() != 1) return false;
    return true;
  }

  Mat operator*(const Mat& o) const {
    assert(cols == o.rows);
    Mat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const mpq_class& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.cols; ++j) {
          const mpq_class& y = o.at(k, j);
          if (y != 0) r.at(i, j) += x * y;
        }
      }
    return r;
  }
  Mat operator+(const Mat& o) const {
    assert(rows == o.rows && cols == o.cols);
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    assert(rows == o.rows && cols == o.cols);
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }
  Mat scaled(const mpq_class& c) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = c * a[i];
    return r;
  }
  Mat transpose() const {
    Mat r(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
  }
  Mat hcat(const Mat& o) const {
    if (rows == 0 && cols == 0) return o;
    if (o.rows == 0 && o.cols == 0) return *this;
    assert(rows == o.rows);
    Mat r(rows, cols + o.cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
      for (int j = 0; j < o.cols; ++j) r.at(i, cols + j) = o.at(i, j);
    }
    return r;
  }
  Mat col_range(int j0, int j1) const {  // columns [j0, j1)
    assert(0 <= j0 && j0 <= j1 && j1 <= cols);
    Mat r(rows, j1 - j0);
    for (int i = 0; i < rows; ++i)
      for (int j = j0; j < j1; ++j) r.at(i, j - j0) = at(i, j);
    return r;
  }
  Mat row_range(int i0, int i1) const {  // rows [i0, i1)
    assert(0 <= i0 && i0 <= i1 && i1 <= rows);
    Mat r(i1 - i0, cols);
    for (int i = i0; i < i1; ++i)
      for (int j = 0; j < cols; ++j) r.at(i - i0, j) = at(i, j);
    return r;
  }
  Mat column(int j) const { return col_range(j, j + 1); }
  mpq_class trace() const {
    assert(rows == cols);
    mpq_class t = 0;
    for (int i = 0; i < rows; ++i) t += at(i, i);
    return t;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows; ++i) {
      if (i) os << "; ";
      for (int j = 0; j < cols; ++j) {
        if (j) os << ",";
        os << at(i, j);
      }
    }
    os << "](" << rows << "x" << cols << ")";
    return os.str();
  }
};

inline Mat direct_sum(const Mat& A, const Mat& B) {
  Mat r(A.rows + B.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) r.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) r.at(A.rows + i, A.cols + j) = B.at(i, j);
  return r;
}

// Internal integer matrix used by the normal-form routines.
namespace detail {

struct ZMat {
  int rows = 0, cols = 0;
  std::vector<mpz_class> a;
  ZMat() = default;
  ZMat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}
  mpz_class& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const mpz_class& at(int i, int j) const { return a[size_t(i) * cols + j]; }
  static ZMat identity(int n) {
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < cols; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < rows; ++k) std::swap(at(k, i), at(k, j));
  }
  void addmul_row(int dst, int src, const mpz_class& c) {  // row dst += c*row src
    if (c == 0) return;
    for (int k = 0; k < cols; ++k) at(dst, k) += c * at(src, k);
  }
  void addmul_col(int dst, int src, const mpz_class& c) {
    if (c == 0) return;
    for (int k = 0; k < rows; ++k) at(k, dst) += c * at(k, src);
  }
  void negate_row(int i) {
    for (int k = 0; k < cols; ++k) at(i, k) = -at(i, k);
  }
  void negate_col(int j) {
    for (int k = 0; k < rows; ++k) at(k, j) = -at(k, j);
  }
};

inline ZMat to_zmat(const Mat& m) {
  assert(m.is_integral());
  ZMat z(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) z.a[i] = m.a[i].get_num();
  return z;
}
inline Mat to_mat(const ZMat& z) {
  Mat m(z.rows, z.cols);
  for (size_t i = 0; i < z.a.size(); ++i) m.a[i] = z.a[i];
  return m;
}

// Row Hermite normal form; returns H with zero rows removed. Pivots positive,
// entries above each pivot reduced into [0, pivot). Canonical for the row lattice.
inline ZMat hnf_rows(ZMat H) {
  int row = 0;
  for (int col = 0; col < H.cols && row < H.rows; ++col) {
    // clear below (row) in this column using gcd row operations
    while (true) {
      int piv = -1;
      for (int i = row; i < H.rows; ++i)
        if (H.at(i, col) != 0 &&
            (piv < 0 || mpz_cmpabs(H.at(i, col).get_mpz_t(), H.at(piv, col).get_mpz_t()) < 0))
          piv = i;
      if (piv < 0) break;
      H.swap_rows(row, piv);
      bool clean = true;
      for (int i = row + 1; i < H.rows; ++i) {
        if (H.at(i, col) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), H.at(i, col).get_mpz_t(), H.at(row, col).get_mpz_t());
        H.addmul_row(i, row, -q);
        if (H.at(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (row < H.rows && H.at(row, col) != 0) {
      if (H.at(row, col) < 0) H.negate_row(row);
      for (int i = 0; i < row; ++i) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), H.at(i, col).get_mpz_t(), H.at(row, col).get_mpz_t());
        H.addmul_row(i, row, -q);
      }
      ++row;
    }
  }
  ZMat R(row, H.cols);
  for (int i = 0; i < row; ++i)
    for (int j = 0; j < H.cols; ++j) R.at(i, j) = H.at(i, j);
  return R;
}

}  // namespace detail

struct SNF {
  Mat U, D, V;  // U*M*V = D, U and V unimodular, D diagonal d1 | d2 | ... >= 0
};

inline SNF smith_normal_form(const Mat& M) {
  using detail::ZMat;
  ZMat D = detail::to_zmat(M);
  ZMat U = ZMat::identity(M.rows), V = ZMat::identity(M.cols);
  int n = std::min(M.rows, M.cols);
  for (int t = 0; t < n; ++t) {
    // locate a minimal nonzero entry in the remaining block
    int pi = -1, pj = -1;
    auto pick = [&]() {
      pi = pj = -1;
      for (int i = t; i < D.rows; ++i)
        for (int j = t; j < D.cols; ++j)
          if (D.at(i, j) != 0 &&
              (pi < 0 || mpz_cmpabs(D.at(i, j).get_mpz_t(), D.at(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
    };
    pick();
    if (pi < 0) break;
    while (true) {
      D.swap_rows(t, pi);
      U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      V.swap_cols(t, pj);
      bool clean = true;
      for (int i = t + 1; i < D.rows; ++i) {
        if (D.at(i, t) == 0) continue;
        mpz_class q = D.at(i, t) / D.at(t, t);
        D.addmul_row(i, t, -q);
        U.addmul_row(i, t, -q);
        if (D.at(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < D.cols; ++j) {
        if (D.at(t, j) == 0) continue;
        mpz_class q = D.at(t, j) / D.at(t, t);
        D.addmul_col(j, t, -q);
        V.addmul_col(j, t, -q);
        if (D.at(t, j) != 0) clean = false;
      }
      if (clean) {
        // enforce divisibility of the remaining block by the pivot
        bool bad = false;
        for (int i = t + 1; i < D.rows && !bad; ++i)
          for (int j = t + 1; j < D.cols && !bad; ++j)
            if (D.at(i, j) % D.at(t, t) != 0) {
              D.addmul_row(t, i, 1);
              U.addmul_row(t, i, 1);
              bad = true;
            }
        if (!bad) break;
      }
      pick();
    }
    if (D.at(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
  }
  return {detail::to_mat(U), detail::to_mat(D), detail::to_mat(V)};
}

// Nonzero diagonal of the Smith form, in divisibility order, without the
// transform matrices. Unit pivots are peeled off first with fill-minimising
// pivoting: a +-1 pivot contributes the divisor 1, and with its column
// cleared the implicit column operations touch nothing else, so the sparse
// phase never grows entries beyond small products. Only the unit-free core
// goes through the dense pivoting loop.
inline std::vector<mpz_class> invariant_factors(const Mat& M) {
  detail::ZMat A = detail::to_zmat(M);
  int r = M.rows, c = M.cols;
  std::vector<char> row_act(r, 1), col_act(c, 1);
  std::vector<int> rnnz(r, 0), cnnz(c, 0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (A.at(i, j) != 0) { ++rnnz[i]; ++cnnz[j]; }
  int units = 0;
  while (true) {
    int bi = -1, bj = -1;
    long best = -1;
    for (int i = 0; i < r; ++i) {
      if (!row_act[i]) continue;
      for (int j = 0; j < c; ++j) {
        if (!col_act[j] || !(A.at(i, j) == 1 || A.at(i, j) == -1)) continue;
        long cost = long(rnnz[i] - 1) * long(cnnz[j] - 1);
        if (best < 0 || cost < best) { best = cost; bi = i; bj = j; }
      }
      if (best == 0) break;
    }
    if (bi < 0) break;
    for (int i = 0; i < r; ++i) {
      if (!row_act[i] || i == bi || A.at(i, bj) == 0) continue;
      mpz_class f = A.at(i, bj) * (A.at(bi, bj) == 1 ? 1 : -1);
      for (int j = 0; j < c; ++j) {
        if (!col_act[j]) continue;
        bool was = A.at(i, j) != 0;
        A.at(i, j) -= f * A.at(bi, j);
        bool is = A.at(i, j) != 0;
        if (was != is) {
          rnnz[i] += is ? 1 : -1;
          cnnz[j] += is ? 1 : -1;
        }
      }
    }
    row_act[bi] = 0;
    col_act[bj] = 0;
    for (int j = 0; j < c; ++j)
      if (col_act[j] && A.at(bi, j) != 0) --cnnz[j];
    ++units;
  }
  std::vector<int> rows, cols;
  for (int i = 0; i < r; ++i)
    if (row_act[i] && rnnz[i] > 0) rows.push_back(i);
  for (int j = 0; j < c; ++j)
    if (col_act[j] && cnnz[j] > 0) cols.push_back(j);
  detail::ZMat D(int(rows.size()), int(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) D.at(int(i), int(j)) = A.at(rows[i], cols[j]);
  std::vector<mpz_class> div(units, 1);
  int n = std::min(D.rows, D.cols);
  for (int t = 0; t < n; ++t) {
    int pi = -1, pj = -1;
    auto pick = [&]() {
      pi = pj = -1;
      for (int i = t; i < D.rows; ++i)
        for (int j = t; j < D.cols; ++j)
          if (D.at(i, j) != 0 &&
              (pi < 0 || mpz_cmpabs(D.at(i, j).get_mpz_t(), D.at(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
    };
    pick();
    if (pi < 0) break;
    while (true) {
      D.swap_rows(t, pi);
      D.swap_cols(t, pj);
      bool clean = true;
      for (int i = t + 1; i < D.rows; ++i) {
        if (D.at(i, t) == 0) continue;
        mpz_class q = D.at(i, t) / D.at(t, t);
        D.addmul_row(i, t, -q);
        if (D.at(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < D.cols; ++j) {
        if (D.at(t, j) == 0) continue;
        mpz_class q = D.at(t, j) / D.at(t, t);
        D.addmul_col(j, t, -q);
        if (D.at(t, j) != 0) clean = false;
      }
      if (clean) {
        bool bad = false;
        for (int i = t + 1; i < D.rows && !bad; ++i)
          for (int j = t + 1; j < D.cols && !bad; ++j)
            if (D.at(i, j) % D.at(t, t) != 0) {
              D.addmul_row(t, i, 1);
              bad = true;
            }
        if (!bad) break;
      }
      pick();
    }
    div.push_back(abs(D.at(t, t)));
  }
  return div;
}

// Canonical basis matrix (columns) for the integer column span of M, with the
// ambient relations already included by the caller when relevant. Zero columns
// are dropped; equality of spans is equality of results.
inline Mat hnf_cols(const Mat& M) {
  detail::ZMat H = detail::hnf_rows(detail::to_zmat(M.transpose()));
  return detail::to_mat(H).transpose();
}

namespace detail {

// Kernel lattice basis via Hermite reduction of [M^T | I]: rows whose left
// block vanishes carry the kernel in their right block. Subject to
// coefficient swell; used only on matrices with no unit entries left.
inline Mat kernel_Z_dense(const ZMat& A, int r, int c) {
  ZMat B(c, r + c);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < r; ++j) B.at(i, j) = A.at(j, i);
    B.at(i, r + i) = 1;
  }
  ZMat H = hnf_rows(std::move(B));
  std::vector<int> null_rows;
  for (int i = 0; i < H.rows; ++i) {
    bool zero = true;
    for (int j = 0; j < r && zero; ++j) zero = H.at(i, j) == 0;
    if (zero) null_rows.push_back(i);
  }
  Mat K(c, int(null_rows.size()));
  for (size_t t = 0; t < null_rows.size(); ++t)
    for (int j = 0; j < c; ++j) K.at(j, int(t)) = H.at(null_rows[t], r + j);
  return K;
}

}  // namespace detail

// Basis (columns) of {x integral : M x = 0}; generates every integral
// solution. Unit pivots are eliminated first (a +-1 pivot makes its variable
// an integral function of the others, so the reduced problem has the same
// integer kernel); pivots are chosen to minimise fill-in, which keeps entries
// small on the sparse structured matrices that arise here. Whatever core
// remains without unit entries goes through the Hermite fallback.
inline Mat kernel_Z(const Mat& M) {
  detail::ZMat A = detail::to_zmat(M);
  int r = M.rows, c = M.cols;
  std::vector<char> row_act(r, 1), col_act(c, 1);
  struct Pivot {
    int col;
    std::vector<mpz_class> row;  // pivot coefficient normalised to +1
  };
  std::vector<Pivot> pivots;
  std::vector<int> rnnz(r, 0), cnnz(c, 0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (A.at(i, j) != 0) { ++rnnz[i]; ++cnnz[j]; }
  while (true) {
    int bi = -1, bj = -1;
    long best = -1;
    for (int i = 0; i < r; ++i) {
      if (!row_act[i]) continue;
      for (int j = 0; j < c; ++j) {
        if (!col_act[j] || !(A.at(i, j) == 1 || A.at(i, j) == -1)) continue;
        long cost = long(rnnz[i] - 1) * long(cnnz[j] - 1);
        if (best < 0 || cost < best) { best = cost; bi = i; bj = j; }
      }
      if (best == 0) break;
    }
    if (bi < 0) break;
    if (A.at(bi, bj) == -1)
      for (int j = 0; j < c; ++j)
        if (col_act[j]) A.at(bi, j) = -A.at(bi, j);
    for (int i = 0; i < r; ++i) {
      if (!row_act[i] || i == bi || A.at(i, bj) == 0) continue;
      mpz_class f = A.at(i, bj);
      for (int j = 0; j < c; ++j) {
        if (!col_act[j]) continue;
        bool was = A.at(i, j) != 0;
        A.at(i, j) -= f * A.at(bi, j);
        bool is = A.at(i, j) != 0;
        if (was != is) {
          rnnz[i] += is ? 1 : -1;
          cnnz[j] += is ? 1 : -1;
        }
      }
    }
    Pivot p{bj, std::vector<mpz_class>(c)};
    for (int j = 0; j < c; ++j)
      if (col_act[j]) p.row[j] = A.at(bi, j);
    pivots.push_back(std::move(p));
    row_act[bi] = 0;
    col_act[bj] = 0;
    for (int j = 0; j < c; ++j)
      if (col_act[j] && A.at(bi, j) != 0) --cnnz[j];
  }
  // core: surviving rows and columns with no unit entries
  std::vector<int> rows, cols;
  for (int i = 0; i < r; ++i) {
    if (!row_act[i]) continue;
    bool zero = true;
    for (int j = 0; j < c && zero; ++j) zero = !col_act[j] || A.at(i, j) == 0;
    if (!zero) rows.push_back(i);
  }
  for (int j = 0; j < c; ++j)
    if (col_act[j]) cols.push_back(j);
  detail::ZMat core(int(rows.size()), int(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) core.at(int(i), int(j)) = A.at(rows[i], cols[j]);
  Mat Kcore = rows.empty() ? Mat::identity(int(cols.size()))
                           : detail::kernel_Z_dense(core, int(rows.size()), int(cols.size()));
  // lift: fill the free coordinates, then back-substitute the pivots
  Mat K(c, Kcore.cols);
  for (size_t j = 0; j < cols.size(); ++j)
    for (int t = 0; t < Kcore.cols; ++t) K.at(cols[j], t) = Kcore.at(int(j), t);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    for (int t = 0; t < K.cols; ++t) {
      mpq_class s = 0;
      for (int j = 0; j < c; ++j)
        if (j != it->col && it->row[j] != 0) s += mpq_class(it->row[j]) * K.at(j, t);
      K.at(it->col, t) = -s;
    }
  }
  return K;
}

// Reduced column echelon form over Q (canonical for the column space); zero
// columns dropped.
inline Mat rref_cols(const Mat& M) {
  Mat A = M.transpose();  // row-reduce the transpose
  int row = 0;
  for (int col = 0; col < A.cols && row < A.rows; ++col) {
    int piv = -1;
    for (int i = row; i < A.rows; ++i)
      if (A.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int k = 0; k < A.cols; ++k) std::swap(A.at(row, k), A.at(piv, k));
    mpq_class inv = 1 / A.at(row, col);
    for (int k = col; k < A.cols; ++k) A.at(row, k) *= inv;
    for (int i = 0; i < A.rows; ++i) {
      if (i == row || A.at(i, col) == 0) continue;
      mpq_class c = A.at(i, col);
      for (int k = col; k < A.cols; ++k) A.at(i, k) -= c * A.at(row, k);
    }
    ++row;
  }
  return A.row_range(0, row).transpose();
}

inline int rank_Q(const Mat& M) { return rref_cols(M).cols; }

// Basis of the rational kernel of M (columns), scaled to integer entries.
inline Mat kernel_Q(const Mat& M) {
  // Solve by echelon form of M with column tracking.
  Mat A = M;
  std::vector<int> pivot_col;
  int row = 0;
  std::vector<int> col_of_row;
  std::vector<bool> is_pivot(A.cols, false);
  for (int col = 0; col < A.cols && row < A.rows; ++col) {
    int piv = -1;
    for (int i = row; i < A.rows; ++i)
      if (A.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int k = 0; k < A.cols; ++k) std::swap(A.at(row, k), A.at(piv, k));
    mpq_class inv = 1 / A.at(row, col);
    for (int k = col; k < A.cols; ++k) A.at(row, k) *= inv;
    for (int i = 0; i < A.rows; ++i) {
      if (i == row || A.at(i, col) == 0) continue;
      mpq_class c = A.at(i, col);
      for (int k = col; k < A.cols; ++k) A.at(i, k) -= c * A.at(row, k);
    }
    is_pivot[col] = true;
    col_of_row.push_back(col);
    ++row;
  }
  std::vector<int> free_cols;
  for (int j = 0; j < A.cols; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Mat K(A.cols, int(free_cols.size()));
  for (size_t f = 0; f < free_cols.size(); ++f) {
    int j = free_cols[f];
    K.at(j, int(f)) = 1;
    for (int r = 0; r < row; ++r) K.at(col_of_row[r], int(f)) = -A.at(r, j);
    // clear denominators
    mpz_class lcm = 1;
    for (int i = 0; i < K.rows; ++i)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), K.at(i, int(f)).get_den().get_mpz_t());
    for (int i = 0; i < K.rows; ++i) K.at(i, int(f)) *= mpq_class(lcm);
  }
  return K;
}

// Integral solutions X of A X = B, or absent.
inline std::optional<Mat> solve_Z(const Mat& A, const Mat& B) {
  assert(A.rows == B.rows);
  SNF s = smith_normal_form(A);
  Mat C = s.U * B;
  int n = std::min(A.rows, A.cols);
  Mat Y(A.cols, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    const mpq_class d = i < n ? s.D.at(i, i) : mpq_class(0);
    for (int j = 0; j < B.cols; ++j) {
      if (d == 0) {
        if (C.at(i, j) != 0) return std::nullopt;
      } else {
        mpq_class q = C.at(i, j) / d;
        if (q.get_den() != 1) return std::nullopt;
        Y.at(i, j) = q;
      }
    }
  }
  return s.V * Y;
}

// Rational solutions X of A X = B, or absent.
inline std::optional<Mat> solve_Q(const Mat& A, const Mat& B) {
  assert(A.rows == B.rows);
  Mat W = A.hcat(B);
  // row echelon with tracking
  int row = 0;
  std::vector<int> col_of_row;
  for (int col = 0; col < A.cols && row < W.rows; ++col) {
    int piv = -1;
    for (int i = row; i < W.rows; ++i)
      if (W.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int k = 0; k < W.cols; ++k) std::swap(W.at(row, k), W.at(piv, k));
    mpq_class inv = 1 / W.at(row, col);
    for (int k = col; k < W.cols; ++k) W.at(row, k) *= inv;
    for (int i = 0; i < W.rows; ++i) {
      if (i == row || W.at(i, col) == 0) continue;
      mpq_class c = W.at(i, col);
      for (int k = col; k < W.cols; ++k) W.at(i, k) -= c * W.at(row, k);
    }
    col_of_row.push_back(col);
    ++row;
  }
  for (int i = row; i < W.rows; ++i)
    for (int j = 0; j < B.cols; ++j)
      if (W.at(i, A.cols + j) != 0) return std::nullopt;
  Mat X(A.cols, B.cols);
  for (int r = 0; r < row; ++r)
    for (int j = 0; j < B.cols; ++j) X.at(col_of_row[r], j) = W.at(r, A.cols + j);
  return X;
}

inline std::optional<Mat> solve_ring(Ring ring, const Mat& A, const Mat& B) {
  return ring == Ring::Z ? solve_Z(A, B) : solve_Q(A, B);
}
inline Mat kernel_ring(Ring ring, const Mat& M) {
  return ring == Ring::Z ? kernel_Z(M) : kernel_Q(M);
}
inline Mat canonical_cols(Ring ring, const Mat& M) {
  return ring == Ring::Z ? hnf_cols(M) : rref_cols(M);
}

}  // namespace polyfun
