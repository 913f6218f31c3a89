#pragma once

// Constructive two-element bases: imprimitive gluing, strong bases, tensor
// powers, semilinear lifts, deleted permutation modules and the fixed-space
// covering search for almost quasisimple groups.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cobase/error.hpp"
#include "cobase/field.hpp"
#include "cobase/linear_group.hpp"
#include "cobase/matrix.hpp"
#include "cobase/perm_group.hpp"

namespace cobase {

using VectorPair = std::pair<Vector, Vector>;

// ---------------------------------------------------------------------------
// Imprimitive gluing

struct BlockSystem {
  std::vector<std::vector<Vector>> blocks;  // basis of each V_i
  std::vector<Matrix> coset_reps;           // g_1 = 1, g_i V_1 = V_i
  PermGroup block_perm_group;
};

// Index of the block containing g·V_i.
inline int block_image(const Field& F, const std::vector<std::vector<Vector>>& blocks,
                       const Matrix& g, int i) {
  std::vector<Vector> img;
  for (const auto& b : blocks[i]) img.push_back(apply(F, g, b));
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    bool inside = blocks[j].size() == img.size();
    for (std::size_t k = 0; k < img.size() && inside; ++k) inside = in_span(F, blocks[j], img[k]);
    if (inside) return static_cast<int>(j);
  }
  throw Error(Errc::PreconditionViolated, "element does not permute the blocks");
}

// Checks the decomposition and coset representatives, and computes the image
// of G on the blocks.
inline BlockSystem make_block_system(const MatrixGroup& G, std::vector<std::vector<Vector>> blocks,
                                     std::vector<Matrix> coset_reps) {
  const Field& F = G.F();
  const int k = static_cast<int>(blocks.size());
  require(k >= 1 && static_cast<int>(coset_reps.size()) == k, Errc::LabelCountMismatch,
          "one coset representative per block");
  std::vector<Vector> all;
  for (const auto& b : blocks)
    for (const auto& v : b) {
      require(static_cast<int>(v.size()) == G.n, Errc::DimensionMismatch, "block vector length");
      all.push_back(v);
    }
  require(static_cast<int>(all.size()) == G.n && rank(F, all, G.n) == G.n,
          Errc::DimensionMismatch, "blocks do not form a direct sum decomposition of V");
  require(is_identity(F, coset_reps[0]), Errc::PreconditionViolated, "g_1 must be the identity");
  for (int i = 0; i < k; ++i)
    require(block_image(F, blocks, coset_reps[i], 0) == i, Errc::PreconditionViolated,
            "g_i does not map V_1 onto V_i");
  std::vector<Permutation> perms;
  for (const auto& g : G.generators) {
    std::vector<int> im(k);
    for (int i = 0; i < k; ++i) im[i] = block_image(F, blocks, g, i);
    perms.emplace_back(std::move(im));
  }
  BlockSystem B;
  B.blocks = std::move(blocks);
  B.coset_reps = std::move(coset_reps);
  B.block_perm_group = PermGroup(k, std::move(perms));
  return B;
}

// x = Σ g_i x_1, y = Σ g_i y_1 + a_i g_i x_1 with a_i the label of block i
// read as an element of the prime field.
inline VectorPair imprimitive_glue(const Field& F, const BlockSystem& B, const Vector& x1,
                                   const Vector& y1, const RegularPartition& labels) {
  const std::size_t k = B.blocks.size();
  require(labels.labels.size() == k, Errc::LabelCountMismatch, "one label per block");
  require(x1.size() == y1.size() && !B.coset_reps.empty() &&
              static_cast<int>(x1.size()) == B.coset_reps[0].n,
          Errc::DimensionMismatch, "x1, y1 must live in the ambient space");
  for (int l : labels.labels)
    require(l >= 0 && l < F.characteristic(), Errc::LabelCountMismatch,
            "labels must be prime-field elements");
  Vector x(x1.size(), 0), y(x1.size(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const Vector xi = apply(F, B.coset_reps[i], x1);
    const Vector yi = apply(F, B.coset_reps[i], y1);
    x = vec_add(F, x, xi);
    y = vec_add(F, y, vec_axpy(F, yi, F.from_int(labels.labels[i]), xi));
  }
  return {x, y};
}

// ---------------------------------------------------------------------------
// Strong bases

namespace detail {

inline MatrixGroup enumerated(const MatrixGroup& G, const Options& opt) {
  return G.enumerated() ? G : group_close(G, opt.cap);
}

inline bool independent(const Field& F, const Vector& a, const Vector& b) {
  return rank(F, {a, b}, static_cast<int>(a.size())) == 2;
}

}  // namespace detail

// X_γ: eigenvalues λ ≠ 1 with g u_1 = u_1 and g(u_1 + γu_2) = λ(u_1 + γu_2).
inline std::set<Elem> strong_base_eigenvalues(const Field& F, const MatrixGroup& stab_u1,
                                              const Vector& u1, const Vector& u2, Elem gamma) {
  const Vector v = vec_axpy(F, u1, gamma, u2);
  std::size_t lead = 0;
  while (lead < v.size() && v[lead] == 0) ++lead;
  std::set<Elem> out;
  for (std::size_t i = 0; i < stab_u1.elements->size(); ++i) {
    const Matrix g = stab_u1.elements->at(i);
    if (!fixes_line(F, g, v)) continue;
    const Elem lambda = F.div(apply(F, g, v)[lead], v[lead]);
    if (lambda != F.one()) out.insert(lambda);
  }
  return out;
}

struct StrongBaseResult {
  Vector v1, v2;
  std::optional<Elem> gamma;  // empty when u_1, u_2 are dependent
};

// Returns (u_1, u_1 + γu_2) with X_γ empty, γ scanned in code order.
inline StrongBaseResult strong_base_from_base(const MatrixGroup& G0, const Vector& u1,
                                              const Vector& u2, const Options& opt = {}) {
  const MatrixGroup G = detail::enumerated(G0, opt);
  const Field& F = G.F();
  require(coprimality_check(G), Errc::NotCoprime, "group order divisible by the characteristic");
  require(G.elements->contains(scalar_matrix(F, G.n, F.primitive())), Errc::ScalarsMissing,
          "group does not contain the scalars");
  if (!verify_base(G, {u1, u2}, MethodChoice::Enumerate, opt).verified)
    throw Error(Errc::NotABase, "u1, u2 is not a base");
  if (!detail::independent(F, u1, u2)) return {u1, u1, std::nullopt};
  const MatrixGroup stab = stabilizer_by_filter(G, u1, opt).group;
  for (Elem gamma = 1; gamma < F.size(); ++gamma)
    if (strong_base_eigenvalues(F, stab, u1, u2, gamma).empty())
      return {u1, vec_axpy(F, u1, gamma, u2), gamma};
  throw Error(Errc::TheoremViolation, "every X_gamma is nonempty");
}

// ---------------------------------------------------------------------------
// Tensor powers

inline Vector tensor_power(const Field& F, const Vector& v, int k) {
  Vector r{F.one()};
  for (int i = 0; i < k; ++i) r = kron(F, r, v);
  return r;
}

inline Vector tensor_product(const Field& F, const std::vector<Vector>& factors) {
  Vector r{F.one()};
  for (const auto& v : factors) r = kron(F, r, v);
  return r;
}

// Matrix permuting tensor factors: the factor in position j moves to
// position perm[j]. Basis tuples are ordered leftmost factor most significant.
inline Matrix tensor_factor_permutation(const Field& F, int m, const std::vector<int>& perm) {
  const int t = static_cast<int>(perm.size());
  int dim = 1;
  for (int i = 0; i < t; ++i) dim *= m;
  std::vector<int> images(dim);
  std::vector<int> digits(t), moved(t);
  for (int idx = 0; idx < dim; ++idx) {
    int r = idx;
    for (int j = t - 1; j >= 0; --j) {
      digits[j] = r % m;
      r /= m;
    }
    for (int j = 0; j < t; ++j) moved[perm[j]] = digits[j];
    int img = 0;
    for (int j = 0; j < t; ++j) img = img * m + moved[j];
    images[idx] = img;
  }
  return permutation_matrix(F, images);
}

// Generators of G_1 ≀_c S_t on the t-th tensor power.
inline MatrixGroup central_wreath_product(const MatrixGroup& G1, int t, std::string description = {}) {
  require(t >= 1, Errc::PreconditionViolated, "t must be positive");
  const Field& F = G1.F();
  const int m = G1.n;
  std::vector<Matrix> gens;
  for (const auto& g : G1.generators)
    for (int pos = 0; pos < t; ++pos) {
      Matrix acc = identity(F, 1);
      for (int j = 0; j < t; ++j) acc = kron(F, acc, j == pos ? g : identity(F, m));
      gens.push_back(std::move(acc));
    }
  if (t >= 2) {
    std::vector<int> swap(t), cycle(t);
    for (int j = 0; j < t; ++j) {
      swap[j] = j;
      cycle[j] = (j + 1) % t;
    }
    std::swap(swap[0], swap[1]);
    gens.push_back(tensor_factor_permutation(F, m, swap));
    if (t >= 3) gens.push_back(tensor_factor_permutation(F, m, cycle));
  }
  const int dim = gens[0].n;
  return make_group(G1.field, dim, std::move(gens), std::move(description));
}

// x = x_1^(t) + y_1^(t); for t = 2, y = x_1⊗z_1 + y_1⊗x_1, and for t ≥ 3,
// y = x_1^(t) + Σ_{i=1}^{t-1} x_1^(t-i) ⊗ y_1^(i).
inline VectorPair tensor_power_vectors(const Field& F, int t, const Vector& x1, const Vector& y1,
                                       const std::optional<Vector>& z1 = std::nullopt) {
  const int d = static_cast<int>(x1.size());
  require(t >= 2, Errc::PreconditionViolated, "t must be at least 2");
  require(static_cast<int>(y1.size()) == d && d >= 2, Errc::DimensionMismatch,
          "factor vectors must have the same length >= 2");
  if (d == 2 && t == 2) throw Error(Errc::ShapeExcluded, "(d,t) = (2,2) is excluded");
  require(detail::independent(F, x1, y1), Errc::PreconditionViolated,
          "x1 and y1 must be independent");
  const Vector x = vec_add(F, tensor_power(F, x1, t), tensor_power(F, y1, t));
  if (t == 2) {
    if (!z1 || static_cast<int>(z1->size()) != d || in_span(F, {x1, y1}, *z1))
      throw Error(Errc::BadZ1, "z1 must lie outside <x1, y1>");
    return {x, vec_add(F, kron(F, x1, *z1), kron(F, y1, x1))};
  }
  Vector y = tensor_power(F, x1, t);
  for (int i = 1; i < t; ++i)
    y = vec_add(F, y, kron(F, tensor_power(F, x1, t - i), tensor_power(F, y1, i)));
  return {x, y};
}

struct Tensor22Result {
  Vector x, y;
  std::string branch;  // "candidate-1", "candidate-2" or "exhaustive"
  BaseCertificate certificate;
};

// Candidates u_i = x_i⊗x_i, v_i = x_i⊗x_{3-i} + α x_{3-i}⊗x_i with α primitive,
// then an exhaustive pair search over orbit representatives.
inline Tensor22Result tensor_22_search(const MatrixGroup& G0, const Vector& x1, const Vector& x2,
                                       const Options& opt = {}) {
  const MatrixGroup G = detail::enumerated(G0, opt);
  const Field& F = G.F();
  require(G.n == 4 && x1.size() == 2 && x2.size() == 2, Errc::DimensionMismatch,
          "expects G <= GL(4,q) and factor vectors of length 2");
  // Even q is the trivial case and the S_2 swap makes |G| even, so coprimality
  // is only enforced for odd q.
  if (F.characteristic() != 2)
    require(coprimality_check(G), Errc::NotCoprime, "group order divisible by the characteristic");
  const Elem alpha = F.primitive();
  const Vector xs[2] = {x1, x2};
  for (int i = 0; i < 2; ++i) {
    const Vector u = kron(F, xs[i], xs[i]);
    const Vector v = vec_axpy(F, kron(F, xs[i], xs[1 - i]), alpha, kron(F, xs[1 - i], xs[i]));
    BaseCertificate c = verify_base(G, {u, v}, MethodChoice::Enumerate, opt);
    if (c.verified) return {u, v, "candidate-" + std::to_string(i + 1), std::move(c)};
  }
  const auto vecs = detail::nonzero_vectors(F, 4, kSearchBound);
  std::unordered_set<std::uint64_t> seen;
  for (const auto& x : vecs) {
    if (seen.count(vector_index(F, x))) continue;
    const StabilizerResult sx = stabilizer_by_filter(G, x, opt);
    for (const auto& p : compute_orbit(F, G.generators, x).points) seen.insert(vector_index(F, p));
    for (const auto& y : vecs) {
      bool trivial = true;
      for (std::size_t k = 0; k < sx.group.elements->size() && trivial; ++k) {
        const Matrix g = sx.group.elements->at(k);
        trivial = is_identity(F, g) || apply(F, g, y) != y;
      }
      if (trivial) {
        BaseCertificate c = verify_base(G, {x, y}, MethodChoice::Enumerate, opt);
        return {x, y, "exhaustive", std::move(c)};
      }
    }
  }
  throw Error(Errc::TheoremViolation, "no two-element base exists");
}

// ---------------------------------------------------------------------------
// Semilinear groups: (M, s) acts as v ↦ M·φ^s(v), φ the Frobenius x ↦ x^p.

struct SemilinearElement {
  Matrix matrix;
  int frob = 0;  // in [0, f)
};

inline Vector frobenius_vector(const Field& F, const Vector& v, int s) {
  Vector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = F.frobenius(v[i], s);
  return r;
}

inline Matrix frobenius_matrix(const Field& F, const Matrix& A, int s) {
  Matrix r = A;
  for (auto& e : r.a) e = F.frobenius(e, s);
  return r;
}

inline Vector semilinear_apply(const Field& F, const SemilinearElement& g, const Vector& v) {
  return apply(F, g.matrix, frobenius_vector(F, v, g.frob));
}

// (A,s)∘(B,t) = (A·φ^s(B), s+t).
inline SemilinearElement semilinear_mul(const Field& F, const SemilinearElement& a,
                                        const SemilinearElement& b) {
  return {mul(F, a.matrix, frobenius_matrix(F, b.matrix, a.frob)), (a.frob + b.frob) % F.degree()};
}

inline std::vector<SemilinearElement> semilinear_close(const Field& F, int n,
                                                       const std::vector<SemilinearElement>& gens,
                                                       std::uint64_t cap = Options{}.cap) {
  for (const auto& g : gens) {
    require(g.matrix.n == n, Errc::DimensionMismatch, "generator dimension mismatch");
    if (det(F, g.matrix) == 0) throw Error(Errc::SingularGenerator, "singular generator");
  }
  auto key = [&](const SemilinearElement& g) {
    return canonical_bytes(F, g.matrix) + static_cast<char>(g.frob);
  };
  std::vector<SemilinearElement> out{{identity(F, n), 0}};
  std::unordered_set<std::string> seen{key(out[0])};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : gens) {
      SemilinearElement h = semilinear_mul(F, out[i], s);
      if (seen.insert(key(h)).second) {
        out.push_back(std::move(h));
        if (out.size() > cap) throw CapExceeded(out.size(), cap);
      }
    }
  return out;
}

struct SemilinearLiftResult {
  Vector u1, u2;
  Elem gamma = 0;
};

// H_α = C_Γ(u_1) ∩ C_Γ(u_2 + αu_1).
inline std::vector<SemilinearElement> semilinear_pair_stabilizer(
    const Field& F, const std::vector<SemilinearElement>& gamma_elems, const Vector& u1,
    const Vector& u2) {
  std::vector<SemilinearElement> out;
  for (const auto& g : gamma_elems)
    if (semilinear_apply(F, g, u1) == u1 && semilinear_apply(F, g, u2) == u2) out.push_back(g);
  return out;
}

// First γ in code order with C_Γ(u_1) ∩ C_Γ(u_2 + γu_1) = 1.
inline SemilinearLiftResult semilinear_lift(const Field& F,
                                            const std::vector<SemilinearElement>& gamma_elems,
                                            const Vector& u1, const Vector& u2,
                                            bool require_coprime = true) {
  if (require_coprime)
    require(gamma_elems.size() % static_cast<std::size_t>(F.characteristic()) != 0,
            Errc::NotCoprime, "semilinear group order divisible by the characteristic");
  std::vector<SemilinearElement> H;
  for (const auto& g : gamma_elems)
    if (g.frob == 0) H.push_back(g);
  if (semilinear_pair_stabilizer(F, H, u1, u2).size() != 1)
    throw Error(Errc::NotABaseForH, "u1, u2 is not a base for the linear part");
  for (Elem gamma = 0; gamma < F.size(); ++gamma) {
    const Vector v = vec_axpy(F, u2, gamma, u1);
    if (semilinear_pair_stabilizer(F, gamma_elems, u1, v).size() == 1) return {u1, v, gamma};
  }
  throw Error(Errc::TheoremViolation, "no gamma lifts the base");
}

// ---------------------------------------------------------------------------
// Deleted permutation modules

// Action of Sym(c) on the sum-zero subspace of F_p^c in the basis e_i - e_c,
// i < c; coordinates are the first c-1 entries.
inline Matrix deleted_permutation_matrix(const Field& F, const Permutation& pi) {
  const int c = pi.degree();
  Matrix M(c - 1);
  for (int i = 0; i < c - 1; ++i) {
    Vector w(c, 0);
    w[pi(i)] = F.add(w[pi(i)], F.one());
    w[pi(c - 1)] = F.sub(w[pi(c - 1)], F.one());
    for (int r = 0; r < c - 1; ++r) M(r, i) = w[r];
  }
  return M;
}

inline MatrixGroup deleted_permutation_group(FieldPtr field, int c, bool symmetric, bool scalars) {
  const Field& F = *field;
  require(c >= 3, Errc::PreconditionViolated, "c must be at least 3");
  require(c < F.characteristic() && F.degree() == 1, Errc::PreconditionViolated,
          "needs c < p over a prime field");
  std::vector<Matrix> gens;
  if (symmetric) {
    gens.push_back(deleted_permutation_matrix(F, Permutation::from_cycles(c, {{0, 1}})));
    std::vector<int> all(c);
    for (int i = 0; i < c; ++i) all[i] = i;
    gens.push_back(deleted_permutation_matrix(F, Permutation::from_cycles(c, {all})));
  } else {
    for (int k = 2; k < c; ++k)
      gens.push_back(deleted_permutation_matrix(F, Permutation::from_cycles(c, {{0, 1, k}})));
  }
  if (scalars) gens.push_back(scalar_matrix(F, c - 1, F.primitive()));
  return group_close(field, c - 1, std::move(gens));
}

// Coordinates of the projection of e_1 + 2e_2 + ... + c e_c along the all-ones vector.
inline Vector deleted_permutation_vector(const Field& F, int c) {
  require(c < F.characteristic(), Errc::PreconditionViolated, "needs c < p");
  Elem sum = 0;
  for (int i = 1; i <= c; ++i) sum = F.add(sum, F.from_int(i));
  const Elem mean = F.div(sum, F.from_int(c));
  Vector x(c - 1);
  for (int i = 0; i < c - 1; ++i) x[i] = F.sub(F.from_int(i + 1), mean);
  return x;
}

struct DeletedPermutationBase {
  Vector x, y;
  std::uint64_t stabilizer_order = 0;
  bool stabilizer_abelian = false;
  BaseCertificate certificate;
};

// G acts on the deleted module of A_c; x as above, then y from a regular
// orbit of the abelian group C_G(x).
inline DeletedPermutationBase deleted_permutation_base(const MatrixGroup& G0, int c,
                                                       const Options& opt = {}) {
  const MatrixGroup G = detail::enumerated(G0, opt);
  const Field& F = G.F();
  require(G.n == c - 1, Errc::DimensionMismatch, "group must act on the (c-1)-dimensional module");
  DeletedPermutationBase out;
  out.x = deleted_permutation_vector(F, c);
  const MatrixGroup Cx = stabilizer_by_filter(G, out.x, opt).group;
  out.stabilizer_order = Cx.elements->size();
  const MatrixGroup N = deleted_permutation_group(G.field, c, false, false);
  const auto cx = all_elements(Cx);
  for (const auto& g : cx)
    if (!is_identity(F, g) && N.elements->contains(g))
      throw Error(Errc::TheoremViolation, "C_N(x) is not trivial");
  out.stabilizer_abelian = true;
  for (std::size_t i = 0; i < cx.size() && out.stabilizer_abelian; ++i)
    for (std::size_t j = i + 1; j < cx.size() && out.stabilizer_abelian; ++j)
      out.stabilizer_abelian = mul(F, cx[i], cx[j]) == mul(F, cx[j], cx[i]);
  for (const auto& y : detail::nonzero_vectors(F, G.n, kSearchBound)) {
    bool regular = true;
    for (const auto& g : cx)
      if (!is_identity(F, g) && apply(F, g, y) == y) {
        regular = false;
        break;
      }
    if (regular) {
      out.y = y;
      out.certificate = verify_base(G, {out.x, out.y}, MethodChoice::Enumerate, opt);
      return out;
    }
  }
  throw Error(Errc::TheoremViolation, "C_G(x) has no regular orbit");
}

// ---------------------------------------------------------------------------
// Fixed-space covering search

struct CoverCertificate {
  int subgroups = 0;        // s, the number of minimal subgroups of C_G(x)
  int large = 0;            // r: fixed space of dimension n-1
  int small = 0;            // t: fixed space of dimension <= n-2
  bool few_subgroups = false;   // s < q+1
  bool counting_bound = false;  // rq - r + t + 1 < q^2
  std::vector<int> fixed_dims;
};

struct QuasisimpleSearchResult {
  Vector y;
  CoverCertificate cover;
  std::optional<std::uint64_t> union_size;  // |∪ C_V(H_i)| when q^n is scanned
  BaseCertificate certificate;
};

inline CoverCertificate cover_certificate(const Field& F, int n,
                                          const std::vector<MinimalSubgroup>& subs) {
  CoverCertificate c;
  c.subgroups = static_cast<int>(subs.size());
  for (const auto& h : subs) {
    const int dim = static_cast<int>(fixed_space(F, h.generator).size());
    c.fixed_dims.push_back(dim);
    (dim >= n - 1 ? c.large : c.small)++;
  }
  const std::uint64_t q = F.size();
  c.few_subgroups = static_cast<std::uint64_t>(c.subgroups) < q + 1;
  c.counting_bound = static_cast<std::uint64_t>(c.large) * q - c.large + c.small + 1 < q * q;
  return c;
}

// First y in canonical order outside the union of C_V(H) over the minimal
// subgroups H of C_G(x).
inline QuasisimpleSearchResult quasisimple_search(const MatrixGroup& G, const Vector& x,
                                                  const Options& opt = {}) {
  const Field& F = G.F();
  const MatrixGroup Cx = vector_stabilizer(G, x, MethodChoice::Auto, opt).group;
  const auto subs = minimal_subgroups(Cx);
  QuasisimpleSearchResult out;
  out.cover = cover_certificate(F, G.n, subs);
  const long double space = std::pow(static_cast<long double>(F.size()), G.n);
  const bool full = space <= static_cast<long double>(kSearchBound);
  const std::uint64_t total = full ? static_cast<std::uint64_t>(space) : kSearchBound;
  std::optional<Vector> found;
  std::uint64_t covered = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    const Vector y = vector_from_index(F, G.n, i);
    bool in_union = false;
    for (const auto& h : subs)
      if (apply(F, h.generator, y) == y) {
        in_union = true;
        break;
      }
    covered += in_union;
    if (!in_union && !found) {
      found = y;
      if (!full) break;
    }
  }
  if (full) out.union_size = covered;
  if (!found) throw Error(Errc::CoverIsWholeSpace, "fixed spaces cover V; choose another x");
  out.y = *found;
  out.certificate = verify_base(G, {x, out.y}, MethodChoice::Auto, opt);
  return out;
}

}  // namespace cobase
