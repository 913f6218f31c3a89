#pragma once

// Groups of symplectic type. N = Z·R with R extraspecial of order r^(1+2k):
// the monomial scaffold N = D⋊S on a basis indexed by W = F_r^k, the δ·π
// decomposition, regular partitions of W, the explicit base vectors, and
// normalizers of N computed through their action on N/Z ≅ F_r^(2k).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cobase/error.hpp"
#include "cobase/field.hpp"
#include "cobase/linear_group.hpp"
#include "cobase/matrix.hpp"

namespace cobase {

namespace detail {

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t out = 1;
  while (e-- > 0) out *= b;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Indexing of W = F_r^k. u_1 ↔ 0; e_2 has weight 1, e_1 weight r and e_j
// weight r^(j-1) for j ≥ 3, so ⟨e_1, e_2⟩_W is u_1..u_(r²). For k = 1 the
// single coordinate has weight 1. Coordinates below are 0-based.

using WVector = std::vector<int>;

struct WIndexing {
  int r = 2;
  int k = 1;

  int size() const { return static_cast<int>(detail::ipow(r, k)); }

  int weight(int j) const {
    if (k == 1) return 1;
    if (j == 0) return r;
    if (j == 1) return 1;
    return static_cast<int>(detail::ipow(r, j));
  }

  int index(const WVector& w) const {
    int idx = 0;
    for (int j = 0; j < k; ++j) idx += ((w[j] % r + r) % r) * weight(j);
    return idx;
  }

  WVector vector(int idx) const {
    WVector w(k, 0);
    for (int j = 0; j < k; ++j) w[j] = (idx / weight(j)) % r;
    return w;
  }

  WVector unit(int j) const {
    WVector w(k, 0);
    w[j] = 1;
    return w;
  }

  WVector add(const WVector& a, const WVector& b) const {
    WVector c(k);
    for (int j = 0; j < k; ++j) c[j] = (a[j] + b[j]) % r;
    return c;
  }

  WVector scale(int c, const WVector& a) const {
    WVector out(k);
    for (int j = 0; j < k; ++j) out[j] = (c * a[j]) % r;
    return out;
  }
};

// ---------------------------------------------------------------------------
// Monomial scaffold.

struct MonomialStructure {
  int r = 0;
  int k = 0;
  int n = 0;
  FieldPtr field;
  Elem zeta = 0;  // primitive r-th root of unity
  WIndexing W;
  std::vector<Matrix> d1_gens;  // diagonal, generator j has ζ^(w_j) at u_w
  std::vector<Matrix> s_gens;   // translation by e_j
  Matrix z_gen;                 // scalar by the primitive element

  const Field& F() const { return *field; }

  // Generators of R modulo Z in class order: d_1..d_k, s_1..s_k.
  std::vector<Matrix> r_generators() const {
    std::vector<Matrix> out = d1_gens;
    out.insert(out.end(), s_gens.begin(), s_gens.end());
    return out;
  }

  std::vector<Matrix> normal_generators() const {
    auto out = r_generators();
    out.push_back(z_gen);
    return out;
  }

  Vector basis(const WVector& w) const { return unit_vector(F(), n, W.index(w)); }
};

inline Elem primitive_root_of_unity(const Field& F, int r) {
  const std::uint64_t q1 = F.size() - 1;
  if (r < 1 || q1 % static_cast<std::uint64_t>(r) != 0)
    throw Error(Errc::RootOfUnityMissing,
                "GF(" + std::to_string(F.size()) + ") has no primitive " + std::to_string(r) +
                    "-th root of unity");
  return F.pow(F.primitive(), static_cast<std::int64_t>(q1 / static_cast<std::uint64_t>(r)));
}

inline MonomialStructure build_monomial_normal(int r, int k, FieldPtr field) {
  require(r >= 2 && is_prime(static_cast<std::uint64_t>(r)), Errc::NonPrime,
          "r must be prime");
  require(k >= 1 && detail::ipow(r, k) <= 4096, Errc::PreconditionViolated,
          "r^k must lie in [r, 4096]");
  const Field& F = *field;
  MonomialStructure M;
  M.r = r;
  M.k = k;
  M.W = WIndexing{r, k};
  M.n = M.W.size();
  M.zeta = primitive_root_of_unity(F, r);
  M.field = std::move(field);
  for (int j = 0; j < k; ++j) {
    Vector diag(M.n);
    std::vector<int> perm(M.n);
    for (int i = 0; i < M.n; ++i) {
      const WVector w = M.W.vector(i);
      diag[i] = F.pow(M.zeta, w[j]);
      perm[i] = M.W.index(M.W.add(w, M.W.unit(j)));
    }
    M.d1_gens.push_back(diagonal_matrix(diag));
    M.s_gens.push_back(permutation_matrix(F, perm));
  }
  M.z_gen = scalar_matrix(F, M.n, F.primitive());
  return M;
}

// ---------------------------------------------------------------------------
// g = δ(g)·π(g) for monomial g. pi[j] is the row of the nonzero entry in
// column j; pi_matrix = permutation_matrix(pi).

struct MonomialElement {
  Matrix delta;
  std::vector<int> pi;
  Matrix pi_matrix;
};

inline MonomialElement monomial_decompose(const Field& F, const Matrix& g) {
  if (!is_monomial(g)) throw Error(Errc::NotMonomial, "matrix is not monomial");
  MonomialElement out;
  out.pi.assign(g.n, -1);
  Vector diag(g.n, 0);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (g(i, j) != 0) {
        out.pi[j] = i;
        diag[i] = g(i, j);
      }
  out.delta = diagonal_matrix(diag);
  out.pi_matrix = permutation_matrix(F, out.pi);
  return out;
}

// ---------------------------------------------------------------------------
// Regular partitions of W.

struct WPartition {
  int r = 0;
  int k = 0;
  int shape = 0;  // 1: r ≥ 3, k = 1; 2: r ≥ 3, k ≥ 2; 3: r = 2, k ≥ 3
  std::vector<std::vector<WVector>> parts;
  bool regular = false;
  bool bound_applies = false;
  bool bound_holds = false;
};

// Number of A ∈ GL(k,r) with A(Ω_i) = Ω_i for every part, by backtracking on
// the images of e_1..e_k. The partition is GL(k,r)-regular iff this is 1.
inline std::uint64_t count_part_preserving_maps(int r, int k,
                                                const std::vector<std::vector<WVector>>& parts) {
  const WIndexing W{r, k};
  const int size = W.size();
  std::vector<int> part_of(size, -1);
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (const auto& w : parts[p]) {
      const int idx = W.index(w);
      require(part_of[idx] < 0, Errc::PreconditionViolated, "parts overlap");
      part_of[idx] = static_cast<int>(p);
    }
  for (int i = 0; i < size; ++i)
    require(part_of[i] >= 0, Errc::PreconditionViolated, "parts do not cover W");

  std::vector<WVector> img(k);
  std::uint64_t count = 0;
  // Images of all combinations Σ_{i≤j} c_i e_i, with c_j ≠ 0, must stay in
  // their part and be nonzero.
  auto consistent = [&](int j) {
    const std::uint64_t combos = detail::ipow(r, j);
    for (std::uint64_t m = 0; m < combos; ++m) {
      WVector src(k, 0), dst(k, 0);
      std::uint64_t rest = m;
      for (int i = 0; i < j; ++i) {
        const int c = static_cast<int>(rest % r);
        rest /= r;
        src[i] = c;
        dst = W.add(dst, W.scale(c, img[i]));
      }
      for (int c = 1; c < r; ++c) {
        const WVector s2 = W.add(src, W.scale(c, W.unit(j)));
        const WVector d2 = W.add(dst, W.scale(c, img[j]));
        const int di = W.index(d2);
        if (di == 0 || part_of[di] != part_of[W.index(s2)]) return false;
      }
    }
    return true;
  };
  std::function<void(int)> dfs = [&](int j) {
    if (j == k) {
      ++count;
      return;
    }
    const int want = part_of[W.index(W.unit(j))];
    for (int cand = 1; cand < size; ++cand) {
      if (part_of[cand] != want) continue;
      img[j] = W.vector(cand);
      if (consistent(j)) dfs(j + 1);
    }
  };
  dfs(0);
  return count;
}

inline WPartition w_partition(int r, int k) {
  require(r >= 2 && is_prime(static_cast<std::uint64_t>(r)), Errc::NonPrime, "r must be prime");
  if (r == 2 && k <= 2)
    throw Error(Errc::CaseNotCovered, "r = 2 needs k >= 3; smaller cases use gl4_vectors");
  require(k >= 1 && detail::ipow(r, k) <= 4096, Errc::PreconditionViolated,
          "r^k must lie in [r, 4096]");
  const WIndexing W{r, k};
  WPartition P;
  P.r = r;
  P.k = k;
  std::vector<bool> used(W.size(), false);
  auto take = [&](std::vector<WVector> part) {
    for (const auto& w : part) used[W.index(w)] = true;
    P.parts.push_back(std::move(part));
  };
  auto rest = [&] {
    std::vector<WVector> out;
    for (int i = 0; i < W.size(); ++i)
      if (!used[i]) out.push_back(W.vector(i));
    return out;
  };
  auto e = [&](int j) { return W.unit(j); };
  const int size = W.size();
  if (r >= 3 && k == 1) {
    P.shape = 1;
    take({e(0)});
    take(rest());
    P.bound_applies = size != 3;
    P.bound_holds = 4 * P.parts[0].size() < static_cast<std::size_t>(size);
  } else if (r >= 3) {
    P.shape = 2;
    take({e(0)});
    std::vector<WVector> omega2;
    for (int j = 1; j < k; ++j) omega2.push_back(e(j));
    for (int j = 0; j + 1 < k; ++j) omega2.push_back(W.add(e(j), e(j + 1)));
    take(omega2);
    take(rest());
    P.bound_applies = size != 9;
    P.bound_holds = 4 * (P.parts[1].size() + 2) < static_cast<std::size_t>(size);
  } else {
    P.shape = 3;
    take({e(0)});
    take({e(1)});
    std::vector<WVector> omega3;
    if (k == 3) {
      omega3.push_back(e(2));
    } else {
      for (int j = 2; j < k; ++j) omega3.push_back(e(j));
      for (int j = 1; j + 1 < k; ++j) omega3.push_back(W.add(e(j), e(j + 1)));
      omega3.push_back(W.add(e(k - 1), e(0)));
    }
    take(omega3);
    take(rest());
    P.bound_applies = size != 16;
    P.bound_holds = 4 * P.parts[2].size() < static_cast<std::size_t>(size);
  }
  P.regular = count_part_preserving_maps(r, k, P.parts) == 1;
  if (!P.regular) throw Error(Errc::TheoremViolation, "partition of W is not GL(k,r)-regular");
  return P;
}

// ---------------------------------------------------------------------------
// Base vectors.

struct SymplecticVectors {
  Vector x;
  Vector y;
  std::string branch;
};

inline SymplecticVectors symplectic_vectors_r_odd(const MonomialStructure& M) {
  require(M.r >= 3, Errc::PreconditionViolated, "r must be odd");
  const Field& F = M.F();
  const Elem alpha = F.primitive();
  const WVector zero(M.k, 0);
  SymplecticVectors out;
  out.x = M.basis(zero);
  Vector y(M.n, 0);
  if (M.k == 1 && M.r == 3) {
    y[M.W.index({1})] = alpha;
    y[M.W.index({2})] = F.one();
    out.branch = "W=3";
  } else if (M.k == 1) {
    const WPartition P = w_partition(M.r, M.k);
    for (const auto& w : P.parts[1]) y[M.W.index(w)] = F.one();
    out.branch = "k=1";
  } else if (M.n == 9) {
    for (int i = 0; i < M.n; ++i) y[i] = F.one();
    y[M.W.index(M.W.unit(0))] = alpha;
    y[M.W.index(M.W.unit(1))] = 0;
    out.branch = "W=9";
  } else {
    const WPartition P = w_partition(M.r, M.k);
    for (const auto& w : P.parts[2]) y[M.W.index(w)] = F.one();
    y[M.W.index(M.W.unit(0))] = alpha;
    out.branch = "k>=2";
  }
  out.y = std::move(y);
  return out;
}

// (x_0, y_0) in dimension 4 for the scaffold of N = Z∘2^(1+4).
inline SymplecticVectors gl4_vectors(const Field& F) {
  if (F.characteristic() == 2)
    throw Error(Errc::EvenCharacteristic, "gl4_vectors needs odd q");
  const Elem alpha = F.primitive();
  auto v = [&](std::vector<Elem> c) { return Vector(c.begin(), c.end()); };
  const Elem one = F.one(), two = F.from_int(2);
  SymplecticVectors out;
  switch (F.size()) {
    case 3:
      out = {v({one, 0, 0, 0}), v({one, 0, one, one}), "q=3"};
      break;
    case 9:
      out = {v({one, 0, one, one}), v({0, one, one, alpha}), "q=9"};
      break;
    case 5:
      out = {v({one, one, two, 0}), v({0, one, one, two}), "q=5"};
      break;
    default:
      if (F.pow(alpha, 8) == one)
        throw Error(Errc::TheoremViolation, "primitive element has order dividing 8");
      out = {v({one, 0, 0, 0}), v({0, one, alpha, F.inv(alpha)}), "generic"};
  }
  return out;
}

inline SymplecticVectors symplectic_vectors_r2(const MonomialStructure& M) {
  require(M.r == 2 && M.k >= 3, Errc::PreconditionViolated, "needs r = 2 and k >= 3");
  const Field& F = M.F();
  const auto& W = M.W;
  const WVector e1 = W.unit(0), e2 = W.unit(1);
  const std::vector<int> corner{W.index(WVector(M.k, 0)), W.index(e2), W.index(e1),
                                W.index(W.add(e1, e2))};
  if (std::vector<int>{0, 1, 2, 3} != [&] {
        auto c = corner;
        std::sort(c.begin(), c.end());
        return c;
      }())
    throw Error(Errc::BadIndexing, "<e_1, e_2> is not u_1..u_4");
  const SymplecticVectors c = gl4_vectors(F);
  if (support_size(c.y) != 3) throw Error(Errc::BadIndexing, "y_0 is not a three-term vector");
  Vector x0(M.n, 0), y0(M.n, 0);
  for (int i = 0; i < 4; ++i) {
    x0[i] = c.x[i];
    y0[i] = c.y[i];
  }
  Vector v(M.n, 0);
  if (M.n == 16) {
    for (int i = 4; i < 16; ++i) v[i] = F.one();
    v[W.index(W.unit(2))] = 0;
    v[W.index(W.unit(3))] = F.from_int(2);
  } else {
    const WPartition P = w_partition(2, M.k);
    for (const auto& w : P.parts[3]) {
      const int idx = W.index(w);
      if (idx >= 4) v[idx] = F.one();
    }
  }
  SymplecticVectors out;
  out.x = y0;
  out.y = vec_add(F, x0, v);
  out.branch = std::string(M.n == 16 ? "W=16" : "generic") + "/" + c.branch;
  return out;
}

inline SymplecticVectors monomial_vectors(const MonomialStructure& M) {
  if (M.r != 2) return symplectic_vectors_r_odd(M);
  if (M.k == 1) return {M.basis({0}), M.basis({1}), "n=2"};
  if (M.k == 2) return gl4_vectors(M.F());
  return symplectic_vectors_r2(M);
}

// ---------------------------------------------------------------------------
// Non-monomial case: U = W ⊗ V with Q acting on the 2-dimensional W and the
// monomial scaffold of rank k-1 on V. Basis w_a ⊗ u_b has index a·(n/2) + b.

struct QuaternionPair {
  Matrix i;
  Matrix j;
};

// i = [[0,-1],[1,0]], j = [[a,b],[b,-a]] for the first (a,b) with a²+b² = -1.
inline QuaternionPair quaternion_representation(const Field& F) {
  require(F.characteristic() != 2, Errc::EvenCharacteristic, "quaternion pair needs odd q");
  const Elem m1 = F.neg(F.one());
  for (Elem a = 0; a < F.size(); ++a)
    for (Elem b = 0; b < F.size(); ++b)
      if (F.add(F.mul(a, a), F.mul(b, b)) == m1) {
        QuaternionPair Q;
        Q.i = Matrix(2, {0, m1, F.one(), 0});
        Q.j = Matrix(2, {a, b, b, F.neg(a)});
        return Q;
      }
  throw Error(Errc::TheoremViolation, "no solution of a^2 + b^2 = -1");
}

struct NonmonomialStructure {
  int k = 0;  // n = 2^k
  int n = 0;
  FieldPtr field;
  QuaternionPair quaternion;
  MonomialStructure inner;  // rank k-1 on V

  const Field& F() const { return *field; }

  // i⊗1, j⊗1, then 1⊗d_1.., 1⊗s_1..
  std::vector<Matrix> r_generators() const {
    const Field& f = F();
    const Matrix I2 = identity(f, 2), IV = identity(f, inner.n);
    std::vector<Matrix> out{kron(f, quaternion.i, IV), kron(f, quaternion.j, IV)};
    for (const auto& g : inner.r_generators()) out.push_back(kron(f, I2, g));
    return out;
  }

  std::vector<Matrix> normal_generators() const {
    auto out = r_generators();
    out.push_back(scalar_matrix(F(), n, F().primitive()));
    return out;
  }
};

inline NonmonomialStructure build_nonmonomial_normal(int k, FieldPtr field) {
  const Field& F = *field;
  if (F.characteristic() == 2 || F.size() % 4 != 3)
    throw Error(Errc::WrongCharacterClass, "non-monomial case needs q = -1 mod 4");
  require(k >= 2, Errc::CaseNotCovered, "non-monomial vectors need dim V >= 2");
  NonmonomialStructure S;
  S.k = k;
  S.n = static_cast<int>(detail::ipow(2, k));
  S.quaternion = quaternion_representation(F);
  S.inner = build_monomial_normal(2, k - 1, field);
  S.field = std::move(field);
  return S;
}

inline SymplecticVectors nonmonomial_vectors(const NonmonomialStructure& S) {
  const Field& F = S.F();
  const int m = S.inner.n;
  const Vector w1{F.one(), 0}, w2{0, F.one()};
  const Vector u1 = unit_vector(F, m, 0);
  SymplecticVectors out;
  if (m == 2) {
    out.x = kron(F, w1, u1);
    out.y = vec_add(F, kron(F, w2, u1), kron(F, w1, unit_vector(F, m, 1)));
    out.branch = "dimV=2";
    return out;
  }
  SymplecticVectors inner;
  if (m == 4) {
    const SymplecticVectors c = gl4_vectors(F);
    inner = {c.y, c.x, "dimV=4/" + c.branch};
  } else {
    inner = symplectic_vectors_r2(S.inner);
    inner.branch = "dimV>=8/" + inner.branch;
  }
  if (inner.y[0] != F.one())
    throw Error(Errc::TheoremViolation, "y_1 does not have u_1-coefficient 1");
  for (int i = 1; i < 4; ++i)
    if (inner.y[i] != 0) throw Error(Errc::TheoremViolation, "y_1 meets u_2..u_4");
  if (support_size(inner.x) != 3) throw Error(Errc::TheoremViolation, "x_1 is not three-term");
  out.x = vec_add(F, kron(F, w1, inner.x), kron(F, w2, u1));
  out.y = kron(F, w1, inner.y);
  out.branch = inner.branch;
  return out;
}

// |Sp(2k,r)| and |O^±(2k,2)|.
inline std::uint64_t symplectic_group_order(int k, std::uint64_t r) {
  std::uint64_t out = detail::ipow(r, k * k);
  for (int i = 1; i <= k; ++i) out *= detail::ipow(r, 2 * i) - 1;
  return out;
}

inline std::uint64_t orthogonal_group_order(int k, int epsilon) {
  std::uint64_t out = 2 * detail::ipow(2, k * (k - 1));
  out = epsilon > 0 ? out * (detail::ipow(2, k) - 1) : out * (detail::ipow(2, k) + 1);
  for (int i = 1; i < k; ++i) out *= detail::ipow(2, 2 * i) - 1;
  return out;
}

// ---------------------------------------------------------------------------
// N = ⟨R generators, scalars⟩ with N/Z ≅ F_r^(2k), generator i in class e_i.
// An element g normalizing N induces a symplectic map on N/Z; conversely a
// symplectic A lifts to GL(n,q) iff each generator class can be given a
// representative with the same r-th power, and the lift is the (unique up to
// scalars) intertwiner of the two representations.

class ExtraspecialNormal {
 public:
  ExtraspecialNormal(FieldPtr field, int r, std::vector<Matrix> r_gens,
                     const Options& opt = {})
      : field_(std::move(field)), r_(r), gens_(std::move(r_gens)) {
    const Field& F = *field_;
    require(!gens_.empty() && gens_.size() % 2 == 0, Errc::PreconditionViolated,
            "R needs an even number of generators");
    n_ = gens_[0].n;
    fr_ = field_make(r, 1);
    zeta_ = primitive_root_of_unity(F, r);
    const int m = rank();
    const Matrix z = scalar_matrix(F, n_, F.primitive());
    std::vector<Matrix> all = gens_;
    all.push_back(z);
    check_generators(F, n_, all);

    // Enumerate N with class coordinates.
    auto set = std::make_shared<ElementSet>(n_, F.size());
    set->insert(identity(F, n_));
    coords_.push_back(Vector(m, 0));
    for (std::size_t i = 0; i < set->size(); ++i) {
      const Matrix e = set->at(i);
      for (std::size_t s = 0; s < all.size(); ++s) {
        auto [idx, fresh] = set->insert(mul(F, all[s], e));
        if (!fresh) continue;
        Vector c = coords_[i];
        if (static_cast<int>(s) < m) c[s] = fr_->add(c[s], fr_->one());
        coords_.push_back(std::move(c));
        (void)idx;
        if (set->size() > opt.cap) throw CapExceeded(set->size(), opt.cap);
      }
    }
    const std::uint64_t classes = detail::ipow(r, m);
    require(set->size() == classes * (F.size() - 1), Errc::TheoremViolation,
            "N does not have order r^(2k)·(q-1)");
    normal_ = make_group(field_, n_, all, "N", set->size());
    normal_.elements = set;

    // Class representatives and r-th powers.
    rep_.assign(classes, -1);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      const auto key = vector_index(*fr_, coords_[i]);
      if (rep_[key] < 0) rep_[key] = static_cast<std::int64_t>(i);
    }
    for (std::uint64_t c = 0; c < classes; ++c) {
      const Matrix p = power(F, set->at(static_cast<std::size_t>(rep_[c])), r);
      require(is_scalar(p), Errc::TheoremViolation, "r-th power is not scalar");
      rep_power_.push_back(p(0, 0));
    }
    for (const auto& g : gens_) {
      const Matrix p = power(F, g, r);
      require(is_scalar(p), Errc::TheoremViolation, "r-th power is not scalar");
      gen_power_.push_back(p(0, 0));
    }
    // Commutator form: [g_i, g_j] = ζ^(ω_ij).
    form_ = Matrix(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Matrix c = mul(F, mul(F, gens_[i], gens_[j]),
                             mul(F, inverse(F, gens_[i]), inverse(F, gens_[j])));
        require(is_scalar(c), Errc::TheoremViolation, "commutator is not scalar");
        form_(i, j) = static_cast<Elem>(root_exponent(c(0, 0)));
      }
    require(rank_of(*fr_, form_) == m, Errc::TheoremViolation,
            "commutator form is degenerate");
  }

  static constexpr std::uint64_t kExhaustiveImage = 100'000;

  const Field& F() const { return *field_; }
  const FieldPtr& field() const { return field_; }
  const FieldPtr& class_field() const { return fr_; }
  int r() const { return r_; }
  int n() const { return n_; }
  int rank() const { return static_cast<int>(gens_.size()); }
  const MatrixGroup& group() const { return normal_; }
  const Matrix& form() const { return form_; }

  std::optional<Vector> class_of(const Matrix& g) const {
    const auto idx = normal_.elements->find(g);
    if (idx < 0) return std::nullopt;
    return coords_[static_cast<std::size_t>(idx)];
  }

  // Induced map on N/Z (column i = class of g·g_i·g⁻¹), if g normalizes N.
  std::optional<Matrix> action(const Matrix& g) const {
    const Field& F = *field_;
    const Matrix gi = inverse(F, g);
    const int m = rank();
    Matrix A(m);
    for (int i = 0; i < m; ++i) {
      const auto c = class_of(mul(F, mul(F, g, gens_[i]), gi));
      if (!c) return std::nullopt;
      for (int j = 0; j < m; ++j) A(j, i) = (*c)[j];
    }
    return A;
  }

  std::uint64_t symplectic_order() const {
    return symplectic_group_order(rank() / 2, static_cast<std::uint64_t>(r_));
  }

  bool is_symplectic(const Matrix& A) const {
    return mul(*fr_, mul(*fr_, transpose(A), form_), A) == form_;
  }

  bool liftable(const Matrix& A) const {
    if (det(*fr_, A) == 0 || !is_symplectic(A)) return false;
    for (int i = 0; i < rank(); ++i)
      if (!scalar_for(i, A)) return false;
    return true;
  }

  Matrix lift(const Matrix& A) const {
    require(liftable(A), Errc::PreconditionViolated, "map does not lift to the normalizer");
    const Field& F = *field_;
    const int n = n_, nn = n_ * n_;
    std::vector<Vector> rows;
    for (int i = 0; i < rank(); ++i) {
      const auto [c, cls] = *scalar_for(i, A);
      const Matrix target =
          scale(F, c, normal_.elements->at(static_cast<std::size_t>(rep_[cls])));
      const Matrix& g = gens_[i];
      // X·g_i − target·X = 0, unknown X(a,b) at a·n + b.
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Vector row(nn, 0);
          for (int t = 0; t < n; ++t) {
            row[a * n + t] = F.add(row[a * n + t], g(t, b));
            row[t * n + b] = F.sub(row[t * n + b], target(a, t));
          }
          if (!is_zero(row)) rows.push_back(std::move(row));
        }
      rref(F, rows, nn);
    }
    const auto ker = kernel(F, rows, nn);
    if (ker.size() != 1) throw Error(Errc::TheoremViolation, "intertwiner space is not 1-dimensional");
    Matrix X(n, ker[0]);
    const auto lead = std::find_if(X.a.begin(), X.a.end(), [](Elem e) { return e != 0; });
    X = scale(F, F.inv(*lead), X);
    require(det(F, X) != 0, Errc::TheoremViolation, "intertwiner is singular");
    return X;
  }

  // Symplectic transvections x ↦ x + c·B(x,v)·v for every nonzero v, with c
  // running over square-class representatives, in an order shuffled by seed.
  std::vector<Matrix> transvections(std::uint64_t seed) const {
    const Field& Fr = *fr_;
    const int m = rank();
    std::vector<Elem> scalars{Fr.one()};
    if (r_ > 2) scalars.push_back(Fr.primitive());
    std::vector<Matrix> out;
    for (std::uint64_t idx = 1; idx < detail::ipow(r_, m); ++idx) {
      const Vector v = vector_from_index(Fr, m, idx);
      const Vector w = apply(Fr, form_, v);
      for (Elem c : scalars) {
        Matrix T = identity(Fr, m);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) T(a, b) = Fr.add(T(a, b), Fr.mul(c, Fr.mul(v[a], w[b])));
        out.push_back(std::move(T));
      }
    }
    std::mt19937_64 rng(seed);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
  }

  // The group of all liftable maps. When Sp(2k,r) is small it is enumerated
  // and filtered; otherwise the image is grown from transvections and
  // products of two non-liftable transvections.
  MatrixGroup image(const Options& opt = {}) const {
    const Field& Fr = *fr_;
    if (symplectic_order() <= kExhaustiveImage) {
      const MatrixGroup Sp = group_close(fr_, rank(), transvections(opt.seed), opt.cap);
      require(*Sp.order == symplectic_order(), Errc::TheoremViolation,
              "transvections do not generate Sp(2k,r)");
      MatrixGroup I = filter_subgroup(Sp, [&](const Matrix& A) { return liftable(A); }, opt);
      I.description = "image";
      return I;
    }
    MatrixGroup I = trivial_group(fr_, rank());
    const auto cands = transvections(opt.seed);
    std::vector<Matrix> rejected;
    auto consider = [&](const Matrix& A) {
      if (I.elements->contains(A)) return true;
      if (!liftable(A)) return false;
      I = extend_closure(I, {A}, opt.cap);
      return true;
    };
    for (const auto& T : cands)
      if (!consider(T)) rejected.push_back(T);
    for (const auto& a : rejected)
      for (const auto& b : rejected) consider(mul(Fr, a, b));
    I.description = "image";
    return I;
  }

  // ⟨N, extra⟩ for normalizing elements; the order |N|·|image of extra| is
  // exact because the kernel of the action on N/Z is N itself.
  MatrixGroup extend(const std::vector<Matrix>& extra, std::string description,
                     const Options& opt = {}) const {
    std::vector<Matrix> images;
    for (const auto& g : extra) {
      auto A = action(g);
      if (!A) throw Error(Errc::PreconditionViolated, "element does not normalize N");
      images.push_back(std::move(*A));
    }
    const MatrixGroup J = group_close(fr_, rank(), images, opt.cap);
    std::vector<Matrix> gens = normal_.generators;
    gens.insert(gens.end(), extra.begin(), extra.end());
    return make_group(field_, n_, std::move(gens), std::move(description),
                      *normal_.order * *J.order);
  }

  MatrixGroup preimage(const MatrixGroup& J, std::string description,
                       const Options& opt = {}) const {
    std::vector<Matrix> lifts;
    for (const auto& A : J.generators) lifts.push_back(lift(A));
    return extend(lifts, std::move(description), opt);
  }

 private:
  static int rank_of(const Field& F, const Matrix& A) { return cobase::rank(F, matrix_rows(A), A.n); }

  int root_exponent(Elem c) const {
    Elem p = F().one();
    for (int e = 0; e < r_; ++e) {
      if (p == c) return e;
      p = F().mul(p, zeta_);
    }
    throw Error(Errc::TheoremViolation, "commutator is not an r-th root of unity");
  }

  // Smallest c with (c·rep)^r = g_i^r for rep the representative of class A·e_i.
  std::optional<std::pair<Elem, std::uint64_t>> scalar_for(int i, const Matrix& A) const {
    const Field& F = *field_;
    Vector t(rank());
    for (int j = 0; j < rank(); ++j) t[j] = A(j, i);
    const auto cls = vector_index(*fr_, t);
    const Elem want = F.div(gen_power_[i], rep_power_[cls]);
    for (Elem c = 1; c < F.size(); ++c)
      if (F.pow(c, r_) == want) return std::make_pair(c, cls);
    return std::nullopt;
  }

  FieldPtr field_;
  FieldPtr fr_;
  int r_;
  int n_ = 0;
  Elem zeta_ = 0;
  std::vector<Matrix> gens_;
  MatrixGroup normal_;
  std::vector<Vector> coords_;
  std::vector<std::int64_t> rep_;
  std::vector<Elem> rep_power_, gen_power_;
  Matrix form_;
};

// Hadamard matrix on coordinate h of W: u_w ↦ u_(w with w_h=0) ± u_(w with w_h=1).
// It normalizes N and swaps the classes of d_h and s_h.
inline Matrix hadamard_matrix(const MonomialStructure& M, int h) {
  const Field& F = M.F();
  const Elem m1 = F.neg(F.one());
  Matrix H(M.n);
  for (int idx = 0; idx < M.n; ++idx) {
    WVector w = M.W.vector(idx);
    const int bit = w[h];
    w[h] = 0;
    const int lo = M.W.index(w);
    w[h] = 1;
    const int hi = M.W.index(w);
    H(lo, idx) = F.one();
    H(hi, idx) = bit ? m1 : F.one();
  }
  return H;
}

// 2-subgroup of the monomial normalizer for r = 2 whose image in O^+(2k,2) has
// order 2^(k(k-1)+1), a Sylow 2-subgroup. It is generated by the permutations
// u_w ↦ u_(Aw) for A = I + E_ij (i > j), the phases diag((-1)^(w_i w_j)) for
// i < j and the Hadamard matrix on the last coordinate, all conjugated by the
// Hadamard matrix on the first coordinate. Without that conjugation the group
// contains every quadratic sign pattern, and for q = 3 one of them fixes both
// constructed vectors.
inline std::vector<Matrix> flag_two_group_generators(const MonomialStructure& M) {
  require(M.r == 2, Errc::PreconditionViolated, "flag 2-group needs r = 2");
  const Field& F = M.F();
  const auto& W = M.W;
  std::vector<Matrix> raw;
  for (int j = 0; j < M.k; ++j)
    for (int i = j + 1; i < M.k; ++i) {
      std::vector<int> perm(M.n);
      for (int idx = 0; idx < M.n; ++idx) {
        WVector w = W.vector(idx);
        w[i] ^= w[j];
        perm[idx] = W.index(w);
      }
      raw.push_back(permutation_matrix(F, perm));
    }
  const Elem m1 = F.neg(F.one());
  for (int i = 0; i < M.k; ++i)
    for (int j = i + 1; j < M.k; ++j) {
      Vector d(M.n);
      for (int idx = 0; idx < M.n; ++idx) {
        const WVector w = W.vector(idx);
        d[idx] = (w[i] & w[j]) ? m1 : F.one();
      }
      raw.push_back(diagonal_matrix(d));
    }
  raw.push_back(hadamard_matrix(M, M.k - 1));
  const Matrix g = hadamard_matrix(M, 0);
  const Matrix gi = inverse(F, g);
  std::vector<Matrix> out;
  for (const auto& x : raw) out.push_back(mul(F, mul(F, g, x), gi));
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end setup for one instance: scaffold, vectors, normalizer data and
// the acting group used for verification.

struct SymplecticSetup {
  int r = 0;
  int k = 0;
  bool nonmonomial = false;
  FieldPtr field;
  std::optional<MonomialStructure> monomial;
  std::optional<NonmonomialStructure> nonmono;
  std::shared_ptr<const ExtraspecialNormal> normal;
  SymplecticVectors vectors;
  std::uint64_t full_order = 0;  // |N_GL(N)|
  bool full_coprime = false;
  MatrixGroup acting;
  std::string acting_choice;

  int n() const { return normal->n(); }
};

// Order of the image of N_GL(n,q)(N) in Sp(2k,r).
inline std::uint64_t expected_image_order(int r, int k, const Field& F, bool nonmonomial) {
  if (r != 2 || F.size() % 4 == 1) return symplectic_group_order(k, static_cast<std::uint64_t>(r));
  return orthogonal_group_order(k, nonmonomial ? -1 : 1);
}

// Acting group: the full normalizer when it is coprime; otherwise for r = 2,
// q = 3 mod 4 monomial the flag 2-group, and in the remaining cases the
// preimage of a Sylow r-subgroup of the image. With prefer_full the full
// normalizer is used regardless.
inline SymplecticSetup symplectic_setup(int r, int k, FieldPtr field, bool nonmonomial,
                                        const Options& opt = {}, bool prefer_full = false) {
  SymplecticSetup S;
  S.r = r;
  S.k = k;
  S.nonmonomial = nonmonomial;
  S.field = field;
  const Field& F = *field;
  std::vector<Matrix> rgens;
  if (nonmonomial) {
    require(r == 2, Errc::PreconditionViolated, "non-monomial case has r = 2");
    S.nonmono = build_nonmonomial_normal(k, field);
    S.vectors = nonmonomial_vectors(*S.nonmono);
    rgens = S.nonmono->r_generators();
  } else {
    S.monomial = build_monomial_normal(r, k, field);
    S.vectors = monomial_vectors(*S.monomial);
    rgens = S.monomial->r_generators();
  }
  S.normal = std::make_shared<ExtraspecialNormal>(field, r, rgens, opt);
  const std::uint64_t image_order = expected_image_order(r, k, F, nonmonomial);
  S.full_order = *S.normal->group().order * image_order;
  const auto p = static_cast<std::uint64_t>(F.characteristic());
  S.full_coprime = S.full_order % p != 0;
  const std::string tag = "N_GL(" + std::to_string(S.n()) + "," + std::to_string(F.size()) + ")(N)";

  if (S.full_coprime || prefer_full) {
    const MatrixGroup I = S.normal->image(opt);
    if (*I.order != image_order)
      throw Error(Errc::OrderMismatch, "normalizer image has order " + std::to_string(*I.order) +
                                           ", expected " + std::to_string(image_order));
    S.acting = S.normal->preimage(I, tag, opt);
    S.acting_choice = S.full_coprime ? "full normalizer" : "full normalizer (not coprime)";
  } else if (!nonmonomial && r == 2 && F.size() % 4 == 3) {
    S.acting = S.normal->extend(flag_two_group_generators(*S.monomial), "flag 2-group of " + tag, opt);
    S.acting_choice = "flag 2-subgroup";
  } else {
    const MatrixGroup I = S.normal->image(opt);
    if (*I.order != image_order)
      throw Error(Errc::OrderMismatch, "normalizer image has the wrong order");
    const MatrixGroup P = sylow_subgroup(I, static_cast<std::uint64_t>(r), opt);
    S.acting = S.normal->preimage(P, "Sylow-" + std::to_string(r) + " preimage in " + tag, opt);
    S.acting_choice = "Sylow-" + std::to_string(r) + " preimage";
  }
  if (*S.acting.order % p == 0 && S.acting_choice.find("full") == std::string::npos)
    throw Error(Errc::NotCoprime, "acting group is not coprime");
  return S;
}

}  // namespace cobase
