#pragma once

// Dense square matrices and vectors over a Field, plus Gaussian elimination.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cobase/error.hpp"
#include "cobase/field.hpp"

namespace cobase {

using Vector = std::vector<Elem>;

struct Matrix {
  int n = 0;
  std::vector<Elem> a;  // row-major

  Matrix() = default;
  explicit Matrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0) {}
  Matrix(int dim, std::vector<Elem> entries) : n(dim), a(std::move(entries)) {
    require(a.size() == static_cast<std::size_t>(dim) * dim, Errc::DimensionMismatch,
            "matrix entry count does not match dimension");
  }

  Elem& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  Elem operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline Matrix identity(const Field& F, int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = F.one();
  return m;
}

inline Matrix scalar_matrix(const Field& F, int n, Elem c) {
  Matrix m(n);
  (void)F;
  for (int i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

inline Matrix diagonal_matrix(const Vector& d) {
  const int n = static_cast<int>(d.size());
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

// The matrix sending e_j to e_{perm[j]}.
inline Matrix permutation_matrix(const Field& F, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Matrix m(n);
  for (int j = 0; j < n; ++j) m(perm[j], j) = F.one();
  return m;
}

inline Matrix mul(const Field& F, const Matrix& A, const Matrix& B) {
  require(A.n == B.n, Errc::DimensionMismatch, "matrix dimensions differ");
  const int n = A.n;
  Matrix C(n);
  if (F.degree() == 1) {
    const std::uint64_t p = F.size();
    std::vector<std::uint64_t> row(n);
    for (int i = 0; i < n; ++i) {
      std::fill(row.begin(), row.end(), 0);
      for (int k = 0; k < n; ++k) {
        const std::uint64_t aik = A(i, k);
        if (aik == 0) continue;
        const Elem* b = &B.a[static_cast<std::size_t>(k) * n];
        for (int j = 0; j < n; ++j) row[j] += aik * b[j];
      }
      for (int j = 0; j < n; ++j) C(i, j) = static_cast<Elem>(row[j] % p);
    }
    return C;
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Elem aik = A(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < n; ++j) {
        const Elem bkj = B(k, j);
        if (bkj != 0) C(i, j) = F.add(C(i, j), F.mul(aik, bkj));
      }
    }
  return C;
}

inline Vector apply(const Field& F, const Matrix& A, const Vector& v) {
  require(static_cast<int>(v.size()) == A.n, Errc::DimensionMismatch,
          "vector length does not match matrix dimension");
  const int n = A.n;
  Vector r(n, 0);
  if (F.degree() == 1) {
    const std::uint64_t p = F.size();
    for (int i = 0; i < n; ++i) {
      std::uint64_t s = 0;
      const Elem* row = &A.a[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) s += static_cast<std::uint64_t>(row[j]) * v[j];
      r[i] = static_cast<Elem>(s % p);
    }
    return r;
  }
  for (int i = 0; i < n; ++i) {
    Elem s = 0;
    for (int j = 0; j < n; ++j)
      if (A(i, j) != 0 && v[j] != 0) s = F.add(s, F.mul(A(i, j), v[j]));
    r[i] = s;
  }
  return r;
}

inline Matrix transpose(const Matrix& A) {
  Matrix T(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) T(j, i) = A(i, j);
  return T;
}

inline Matrix add(const Field& F, const Matrix& A, const Matrix& B) {
  Matrix C(A.n);
  for (std::size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
  return C;
}

inline Matrix sub(const Field& F, const Matrix& A, const Matrix& B) {
  Matrix C(A.n);
  for (std::size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
  return C;
}

inline Matrix scale(const Field& F, Elem c, const Matrix& A) {
  Matrix C(A.n);
  for (std::size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.mul(c, A.a[i]);
  return C;
}

// (A ⊗ B)[(i1,i2),(j1,j2)] = A[i1][j1]·B[i2][j2], index i1·dim(B) + i2.
inline Matrix kron(const Field& F, const Matrix& A, const Matrix& B) {
  const int n = A.n * B.n;
  Matrix K(n);
  for (int i1 = 0; i1 < A.n; ++i1)
    for (int j1 = 0; j1 < A.n; ++j1) {
      const Elem a = A(i1, j1);
      if (a == 0) continue;
      for (int i2 = 0; i2 < B.n; ++i2)
        for (int j2 = 0; j2 < B.n; ++j2)
          K(i1 * B.n + i2, j1 * B.n + j2) = F.mul(a, B(i2, j2));
    }
  return K;
}

inline Vector kron(const Field& F, const Vector& a, const Vector& b) {
  Vector r(a.size() * b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = F.mul(a[i], b[j]);
  return r;
}

inline Matrix power(const Field& F, Matrix A, std::uint64_t e) {
  Matrix R = identity(F, A.n);
  while (e > 0) {
    if (e & 1) R = mul(F, R, A);
    e >>= 1;
    if (e) A = mul(F, A, A);
  }
  return R;
}

inline bool is_identity(const Field& F, const Matrix& A) {
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j)
      if (A(i, j) != (i == j ? F.one() : 0)) return false;
  return true;
}

inline bool is_diagonal(const Matrix& A) {
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j)
      if (i != j && A(i, j) != 0) return false;
  return true;
}

inline bool is_scalar(const Matrix& A) {
  if (!is_diagonal(A)) return false;
  for (int i = 1; i < A.n; ++i)
    if (A(i, i) != A(0, 0)) return false;
  return true;
}

inline bool is_monomial(const Matrix& A) {
  std::vector<int> col_count(A.n, 0);
  for (int i = 0; i < A.n; ++i) {
    int row_count = 0;
    for (int j = 0; j < A.n; ++j)
      if (A(i, j) != 0) {
        ++row_count;
        ++col_count[j];
      }
    if (row_count != 1) return false;
  }
  return std::all_of(col_count.begin(), col_count.end(), [](int c) { return c == 1; });
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(const Field& F, std::vector<Vector>& rows, int ncols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Elem inv = F.inv(rows[r][c]);
    for (int j = c; j < ncols; ++j) rows[r][j] = F.mul(rows[r][j], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Elem f = rows[i][c];
      for (int j = c; j < ncols; ++j)
        if (rows[r][j] != 0) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

inline int rank(const Field& F, std::vector<Vector> rows, int ncols) {
  return static_cast<int>(rref(F, rows, ncols).size());
}

// Basis of {v : rows·v = 0}, one vector per free column (that coordinate set to 1).
inline std::vector<Vector> kernel(const Field& F, std::vector<Vector> rows, int ncols) {
  const auto pivots = rref(F, rows, ncols);
  std::vector<int> pivot_of(ncols, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of[pivots[i]] = static_cast<int>(i);
  std::vector<Vector> basis;
  for (int free = 0; free < ncols; ++free) {
    if (pivot_of[free] >= 0) continue;
    Vector v(ncols, 0);
    v[free] = F.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(rows[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<Vector> matrix_rows(const Matrix& A) {
  std::vector<Vector> rows(A.n);
  for (int i = 0; i < A.n; ++i)
    rows[i].assign(A.a.begin() + static_cast<std::ptrdiff_t>(i) * A.n,
                   A.a.begin() + static_cast<std::ptrdiff_t>(i + 1) * A.n);
  return rows;
}

inline Elem det(const Field& F, const Matrix& A) {
  auto rows = matrix_rows(A);
  const int n = A.n;
  Elem d = F.one();
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && rows[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(rows[piv], rows[c]);
      d = F.neg(d);
    }
    d = F.mul(d, rows[c][c]);
    const Elem inv = F.inv(rows[c][c]);
    for (int i = c + 1; i < n; ++i) {
      if (rows[i][c] == 0) continue;
      const Elem f = F.mul(rows[i][c], inv);
      for (int j = c; j < n; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[c][j]));
    }
  }
  return d;
}

inline Matrix inverse(const Field& F, const Matrix& A) {
  const int n = A.n;
  std::vector<Vector> rows(n, Vector(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rows[i][j] = A(i, j);
    rows[i][n + i] = F.one();
  }
  const auto pivots = rref(F, rows, 2 * n);
  if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1)
    throw Error(Errc::SingularGenerator, "matrix is singular");
  Matrix inv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = rows[i][n + j];
  return inv;
}

inline std::uint64_t element_order(const Field& F, const Matrix& A,
                                   std::uint64_t limit = std::uint64_t{1} << 32) {
  Matrix P = A;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    if (is_identity(F, P)) return k;
    P = mul(F, P, A);
  }
  throw Error(Errc::PreconditionViolated, "element order exceeds limit");
}

// Kernel of A − I.
inline std::vector<Vector> fixed_space(const Field& F, const Matrix& A) {
  auto rows = matrix_rows(sub(F, A, identity(F, A.n)));
  return kernel(F, std::move(rows), A.n);
}

// Common fixed space of several matrices.
inline std::vector<Vector> fixed_space(const Field& F, const std::vector<Matrix>& gens, int n) {
  std::vector<Vector> rows;
  for (const auto& g : gens) {
    auto r = matrix_rows(sub(F, g, identity(F, n)));
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return kernel(F, std::move(rows), n);
}

inline Vector unit_vector(const Field& F, int n, int i) {
  Vector v(n, 0);
  v[i] = F.one();
  return v;
}

inline Vector vec_add(const Field& F, const Vector& a, const Vector& b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
  return r;
}

inline Vector vec_scale(const Field& F, Elem c, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(c, a[i]);
  return r;
}

// a + c·b
inline Vector vec_axpy(const Field& F, const Vector& a, Elem c, const Vector& b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], F.mul(c, b[i]));
  return r;
}

inline bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
}

inline int support_size(const Vector& v) {
  return static_cast<int>(std::count_if(v.begin(), v.end(), [](Elem e) { return e != 0; }));
}

inline bool in_span(const Field& F, const std::vector<Vector>& basis, const Vector& v) {
  if (basis.empty()) return is_zero(v);
  const int n = static_cast<int>(v.size());
  std::vector<Vector> rows = basis;
  const int r0 = rank(F, rows, n);
  rows.push_back(v);
  return rank(F, std::move(rows), n) == r0;
}

// Vector of length q^n with index i ↦ the i-th vector in canonical order.
inline Vector vector_from_index(const Field& F, int n, std::uint64_t index) {
  Vector v(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    v[i] = static_cast<Elem>(index % F.size());
    index /= F.size();
  }
  return v;
}

inline std::uint64_t vector_index(const Field& F, const Vector& v) {
  std::uint64_t r = 0;
  for (Elem e : v) r = r * F.size() + e;
  return r;
}

// Canonical byte encodings: entries in row-major order, each as its f
// coefficients at fixed width. Byte order agrees with lexicographic order on
// coefficient tuples.
inline std::string canonical_bytes(const Field& F, const Vector& v) {
  std::string s;
  s.reserve(v.size() * F.degree() * F.coeff_width());
  for (Elem e : v) F.append_bytes(s, e);
  return s;
}

inline std::string canonical_bytes(const Field& F, const Matrix& A) {
  std::string s;
  s.reserve(A.a.size() * F.degree() * F.coeff_width());
  for (Elem e : A.a) F.append_bytes(s, e);
  return s;
}

// Text form: all coefficients of all entries, comma-separated.
inline std::string format_vector(const Field& F, const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += F.format(v[i]);
  }
  return s;
}

inline Vector parse_vector(const Field& F, std::string_view text, int n) {
  std::vector<int> coeffs;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw Error(Errc::ParseError, "bad vector '" + std::string(text) + "'");
    coeffs.push_back(v);
    start = end + 1;
  }
  const int f = F.degree();
  if (static_cast<int>(coeffs.size()) != n * f)
    throw Error(Errc::DimensionMismatch, "vector '" + std::string(text) + "' needs " +
                                             std::to_string(n * f) + " coefficients");
  Vector v(n);
  for (int i = 0; i < n; ++i)
    v[i] = F.from_coeffs(std::vector<int>(coeffs.begin() + i * f, coeffs.begin() + (i + 1) * f));
  return v;
}

inline std::vector<Vector> parse_vectors(const Field& F, std::string_view text, int n) {
  std::vector<Vector> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_vector(F, text.substr(start, end - start), n));
    start = end + 1;
  }
  return out;
}

inline std::string format_matrix(const Field& F, const Matrix& A) {
  std::string s;
  for (int i = 0; i < A.n; ++i) {
    for (int j = 0; j < A.n; ++j) {
      if (j) s += ' ';
      s += F.format(A(i, j));
    }
    s += '\n';
  }
  return s;
}

}  // namespace cobase
