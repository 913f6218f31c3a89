#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cobase/base_construct.hpp"
#include "cobase/group_data.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace cobase;
using namespace corpus;

namespace {

Matrix from_rows(const Field& F, std::vector<std::vector<int>> rows) {
  const int n = static_cast<int>(rows.size());
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = F.from_int(rows[i][j]);
  return m;
}

Vector vec(const Field& F, std::vector<int> v) {
  Vector r;
  for (int x : v) r.push_back(F.from_int(x));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(Imprimitive, SignedSwapExample) {
  const auto F = field_make(3, 1);
  const auto G = monomial_group(F, 2, {{1, 0}});
  ASSERT_EQ(G.size(), 8u);
  const auto B = make_block_system(G, {{vec(*F, {1, 0})}, {vec(*F, {0, 1})}},
                                   {identity(*F, 2), permutation_matrix(*F, {1, 0})});
  EXPECT_EQ(B.block_perm_group.order(), 2u);
  const Vector e1 = vec(*F, {1, 0});
  const auto [x, y] = imprimitive_glue(*F, B, e1, e1, RegularPartition{{0, 1}, 3});
  EXPECT_EQ(x, vec(*F, {1, 1}));
  EXPECT_EQ(y, vec(*F, {1, 2}));
  EXPECT_TRUE(verify_base(G, {x, y}).verified);

  const auto [xc, yc] = imprimitive_glue(*F, B, e1, e1, RegularPartition{{1, 1}, 3});
  const auto cert = verify_base(G, {xc, yc});
  EXPECT_FALSE(cert.verified);
  EXPECT_EQ(cert.order_chain.back(), 2u);
}

TEST(Imprimitive, SingleBlock) {
  const auto F = field_make(5, 1);
  const auto G = monomial_group(F, 2, {});
  const auto B = make_block_system(G, {{vec(*F, {1, 0}), vec(*F, {0, 1})}}, {identity(*F, 2)});
  const auto [x, y] = imprimitive_glue(*F, B, vec(*F, {1, 0}), vec(*F, {0, 1}),
                                       RegularPartition{{1}, 5});
  EXPECT_EQ(x, vec(*F, {1, 0}));
  EXPECT_EQ(y, vec(*F, {1, 1}));
  EXPECT_TRUE(verify_base(G, {x, y}).verified);
}

TEST(Imprimitive, MonomialOverFiveWithRegularLabels) {
  const auto F = field_make(5, 1);
  const auto G = monomial_group(F, 3, {{1, 0, 2}, {1, 2, 0}});
  ASSERT_EQ(G.size(), 384u);
  ASSERT_TRUE(coprimality_check(G));
  std::vector<std::vector<Vector>> blocks;
  for (int i = 0; i < 3; ++i) blocks.push_back({unit_vector(*F, 3, i)});
  const auto B = make_block_system(
      G, blocks,
      {identity(*F, 3), permutation_matrix(*F, {1, 0, 2}), permutation_matrix(*F, {2, 1, 0})});
  const auto labels = regular_partition_coprime(B.block_perm_group, 5);
  ASSERT_TRUE(is_regular_partition(B.block_perm_group, labels));
  const Vector e1 = unit_vector(*F, 3, 0);
  const auto [x, y] = imprimitive_glue(*F, B, e1, e1, labels);
  EXPECT_TRUE(verify_base(G, {x, y}).verified);

  // Rescaling both outputs keeps a base.
  std::mt19937 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const Elem c = 1 + rng() % 4;
    EXPECT_TRUE(verify_base(G, {vec_scale(*F, c, x), vec_scale(*F, c, y)}).verified);
  }
}

TEST(Imprimitive, Errors) {
  const auto F = field_make(3, 1);
  const auto G = monomial_group(F, 2, {{1, 0}});
  EXPECT_THROW(make_block_system(G, {{vec(*F, {1, 0})}}, {identity(*F, 2)}), Error);
  EXPECT_THROW(make_block_system(G, {{vec(*F, {1, 0})}, {vec(*F, {0, 1})}},
                                 {identity(*F, 2), identity(*F, 2)}),
               Error);
  const auto B = make_block_system(G, {{vec(*F, {1, 0})}, {vec(*F, {0, 1})}},
                                   {identity(*F, 2), permutation_matrix(*F, {1, 0})});
  const Vector e1 = vec(*F, {1, 0});
  EXPECT_THROW(imprimitive_glue(*F, B, e1, e1, RegularPartition{{0}, 3}), Error);
  EXPECT_THROW(imprimitive_glue(*F, B, vec(*F, {1}), e1, RegularPartition{{0, 1}, 3}), Error);
}

// ---------------------------------------------------------------------------

TEST(StrongBase, DependentPair) {
  const auto F = field_make(5, 1);
  const auto G = monomial_group(F, 1, {});
  const Vector u = vec(*F, {1});
  const auto r = strong_base_from_base(G, u, vec(*F, {3}));
  EXPECT_FALSE(r.gamma.has_value());
  EXPECT_EQ(r.v1, u);
  EXPECT_EQ(r.v2, u);
  EXPECT_TRUE(strong_base_check(G, {r.v1}));
}

TEST(StrongBase, DiagonalGroupOverFive) {
  const auto F = field_make(5, 1);
  const auto G = monomial_group(F, 2, {});
  const Vector e1 = vec(*F, {1, 0}), e2 = vec(*F, {0, 1});
  const auto stab = stabilizer_by_filter(G, e1).group;
  int empty = 0;
  for (Elem g = 1; g < 5; ++g) empty += strong_base_eigenvalues(*F, stab, e1, e2, g).empty();
  EXPECT_GT(empty, 0);
  const auto r = strong_base_from_base(G, e1, e2);
  ASSERT_TRUE(r.gamma.has_value());
  EXPECT_TRUE(strong_base_check(G, {r.v1, r.v2}));
}

TEST(StrongBase, Errors) {
  const auto F5 = field_make(5, 1);
  const auto D = monomial_group(F5, 2, {});
  EXPECT_THROW(strong_base_from_base(D, vec(*F5, {1, 0}), vec(*F5, {1, 0})), Error);
  const auto noscalars = group_close(F5, 2, {diagonal_matrix({1, 2})});
  try {
    strong_base_from_base(noscalars, vec(*F5, {1, 0}), vec(*F5, {0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ScalarsMissing);
  }
  const auto F3 = field_make(3, 1);
  try {
    strong_base_from_base(general_linear_group(F3, 2), vec(*F3, {1, 0}), vec(*F3, {0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCoprime);
  }
}


TEST(StrongBase, PigeonholeDisjointness) {
  for (const auto& c : coprime_corpus()) {
    const MatrixGroup& G = c.group;
    const Field& F = G.F();
    const auto [u1, u2] = some_base(G);
    if (rank(F, {u1, u2}, G.n) < 2) continue;
    const auto stab = stabilizer_by_filter(G, u1).group;
    std::vector<std::set<Elem>> X;
    for (Elem g = 1; g < F.size(); ++g) X.push_back(strong_base_eigenvalues(F, stab, u1, u2, g));
    for (std::size_t a = 0; a < X.size(); ++a)
      for (std::size_t b = a + 1; b < X.size(); ++b)
        for (Elem l : X[a]) EXPECT_EQ(X[b].count(l), 0u) << c.name;
    const auto r = strong_base_from_base(G, u1, u2);
    EXPECT_TRUE(strong_base_check(G, {r.v1, r.v2})) << c.name;
  }
}

TEST(StrongBase, BaseSizeSandwich) {
  std::vector<MatrixGroup> groups;
  for (auto& c : coprime_corpus()) groups.push_back(c.group);
  groups.push_back(general_linear_group(field_make(3, 1), 2));
  groups.push_back(general_linear_group(field_make(2, 1), 3));
  groups.push_back(general_linear_group(field_make(2, 2), 2));
  for (const auto& G : groups) {
    const int b = minimal_base_size(G).size;
    const int bs = minimal_strong_base_size(G).size;
    EXPECT_LE(b, bs);
    EXPECT_LE(bs, b + 1);
  }
}

// ---------------------------------------------------------------------------

TEST(Tensor, FormulaSupports) {
  const auto F = field_make(5, 1);
  const auto e = [&](int i) { return unit_vector(*F, 3, i); };
  const auto [x, y] = tensor_power_vectors(*F, 2, e(0), e(1), e(2));
  auto support = [](const Vector& v) {
    std::set<int> s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) s.insert(static_cast<int>(i));
    return s;
  };
  // (i,j) ↦ 3(i-1) + (j-1).
  EXPECT_EQ(support(x), (std::set<int>{0, 4}));
  EXPECT_EQ(support(y), (std::set<int>{2, 3}));

  const Vector f1 = unit_vector(*F, 2, 0), f2 = unit_vector(*F, 2, 1);
  const auto [x3, y3] = tensor_power_vectors(*F, 3, f1, f2);
  EXPECT_EQ(support(x3), (std::set<int>{0, 7}));
  EXPECT_EQ(support(y3), (std::set<int>{0, 1, 3}));
  for (int i : {0, 1, 3}) EXPECT_EQ(y3[i], F->one());
}

TEST(Tensor, Errors) {
  const auto F = field_make(5, 1);
  const Vector f1 = unit_vector(*F, 2, 0), f2 = unit_vector(*F, 2, 1);
  try {
    tensor_power_vectors(*F, 2, f1, f2, f1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ShapeExcluded);
  }
  const Vector e1 = unit_vector(*F, 3, 0), e2 = unit_vector(*F, 3, 1);
  try {
    tensor_power_vectors(*F, 2, e1, e2, vec_add(*F, e1, e2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadZ1);
  }
  EXPECT_THROW(tensor_power_vectors(*F, 2, e1, e2), Error);
}

TEST(Tensor, FactorPermutationActsOnTensors) {
  const auto F = field_make(3, 1);
  const Vector a = vec(*F, {1, 2}), b = vec(*F, {0, 1}), c = vec(*F, {1, 1});
  const Matrix P = tensor_factor_permutation(*F, 2, {1, 2, 0});
  // Factor j moves to position perm[j]: a⊗b⊗c ↦ c⊗a⊗b.
  EXPECT_EQ(apply(*F, P, tensor_product(*F, {a, b, c})), tensor_product(*F, {c, a, b}));
}

namespace {

// x_1, y_1 independent strong base of G1 plus, for dimension >= 3, the first
// z_1 outside their span.
struct FactorBase {
  Vector x1, y1, z1;
};

FactorBase factor_strong_base(const MatrixGroup& G1) {
  const Field& F = G1.F();
  auto [u1, u2] = some_base(G1);
  if (rank(F, {u1, u2}, G1.n) < 2) {
    for (std::uint64_t i = 1;; ++i) {
      u2 = vector_from_index(F, G1.n, i);
      if (rank(F, {u1, u2}, G1.n) == 2) break;
    }
  }
  const auto sb = strong_base_from_base(G1, u1, u2);
  FactorBase out{sb.v1, sb.v2, {}};
  for (std::uint64_t i = 1; G1.n >= 3; ++i) {
    out.z1 = vector_from_index(F, G1.n, i);
    if (!in_span(F, {out.x1, out.y1}, out.z1)) break;
  }
  return out;
}

}  // namespace

TEST(Tensor, SquareOfCoprimeMonomialGroupOverGF4) {
  const auto F = field_make(2, 2);
  const auto G1 = monomial_group(F, 3, {{1, 2, 0}});
  ASSERT_EQ(G1.size(), 81u);
  const auto fb = factor_strong_base(G1);
  ASSERT_TRUE(strong_base_check(G1, {fb.x1, fb.y1}));
  const auto G = group_close(central_wreath_product(G1, 2));
  EXPECT_EQ(G.size(), 81u * 81u / 3u * 2u);
  const auto [x, y] = tensor_power_vectors(*F, 2, fb.x1, fb.y1, fb.z1);
  EXPECT_TRUE(verify_base(G, {x, y}).verified);
}

TEST(Tensor, CubeOfDiagonalGroup) {
  const auto F = field_make(5, 1);
  const auto G1 = monomial_group(F, 2, {});
  const auto fb = factor_strong_base(G1);
  const auto G = group_close(central_wreath_product(G1, 3));
  EXPECT_EQ(G.size(), 16u * 16u * 16u / 16u * 6u);
  const auto [x, y] = tensor_power_vectors(*F, 3, fb.x1, fb.y1);
  EXPECT_TRUE(verify_base(G, {x, y}).verified);
}

TEST(Tensor, CentralizerLawTwoFactors) {
  for (auto [p, f, m] : {std::tuple{3, 1, 2}, {5, 1, 2}, {2, 2, 2}, {3, 1, 3}}) {
    const auto F = field_make(p, f);
    const bool small = F->size() <= 3 && m == 2;
    EXPECT_EQ(oracle::centralizer_t2_bruteforce(*F, m, small), oracle::centralizer_t2_formula(*F, m))
        << "q=" << F->size() << " m=" << m;
  }
}

TEST(Tensor, CentralizerLawLargerFactors) {
  for (auto [p, f] : {std::pair{2, 2}, {5, 1}})
    EXPECT_TRUE(oracle::centralizer_t2_matches_per_matrix(*field_make(p, f), 3)) << p;
}

TEST(Tensor, CentralizerLawRowSearchMatchesPairSearch) {
  const auto F = field_make(3, 1);
  EXPECT_EQ(oracle::centralizer_t2_bruteforce(*F, 2, true),
            oracle::centralizer_t2_bruteforce(*F, 2, false));
}

TEST(Tensor, CentralizerLawThreeFactors) {
  const auto F = field_make(3, 1);
  const auto brute = oracle::centralizer_t3_bruteforce(*F);
  EXPECT_EQ(brute, oracle::centralizer_t3_formula(*F));
}

// ---------------------------------------------------------------------------

TEST(Tensor22, ExceptionalWreathOverThree) {
  const auto F = field_make(3, 1);
  const auto G1 = sl23_times_scalars(F);
  ASSERT_EQ(G1.size(), 24u);
  EXPECT_EQ(minimal_base_size(G1).size, 2);
  EXPECT_EQ(minimal_strong_base_size(G1).size, 2);
  const auto G = group_close(central_wreath_product(G1, 2));
  EXPECT_EQ(minimal_base_size(G).size, 3);
  try {
    tensor_22_search(G, vec(*F, {1, 0}), vec(*F, {0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCoprime);
  }
}

TEST(Tensor22, CoprimeWreathOverFive) {
  const auto F = field_make(5, 1);
  const auto G1 = sl23_times_scalars(F);
  ASSERT_EQ(G1.size(), 48u);
  const auto fb = factor_strong_base(G1);
  const auto G = group_close(central_wreath_product(G1, 2));
  ASSERT_EQ(G.size(), 48u * 48u / 4u * 2u);
  const auto r = tensor_22_search(G, fb.x1, fb.y1);
  EXPECT_TRUE(r.certificate.verified);
  EXPECT_NE(r.branch, "exhaustive");
}

TEST(Tensor22, EvenCharacteristic) {
  const auto F = field_make(2, 2);
  // Companion matrix of t^2 + t + ω, irreducible over GF(4).
  Matrix S(2);
  S(0, 1) = F->primitive();
  S(1, 0) = F->one();
  S(1, 1) = F->one();
  const auto G1 = group_close(F, 2, {S});
  const auto G = group_close(central_wreath_product(G1, 2));
  const auto r = tensor_22_search(G, vec(*F, {1, 0}), vec(*F, {0, 1}));
  EXPECT_TRUE(r.certificate.verified);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<SemilinearElement> linear_only(const MatrixGroup& G) {
  std::vector<SemilinearElement> out;
  for (const auto& g : all_elements(G)) out.push_back({g, 0});
  return out;
}

}  // namespace

TEST(Semilinear, PrimeFieldGammaZero) {
  const auto F = field_make(5, 1);
  const auto G = monomial_group(F, 2, {});
  const auto r = semilinear_lift(*F, linear_only(G), vec(*F, {1, 0}), vec(*F, {0, 1}));
  EXPECT_EQ(r.gamma, 0u);
}

TEST(Semilinear, FrobeniusOverGF4) {
  const auto F = field_make(2, 2);
  const std::vector<SemilinearElement> gens{{scalar_matrix(*F, 1, F->primitive()), 0},
                                            {identity(*F, 1), 1}};
  const auto elems = semilinear_close(*F, 1, gens);
  EXPECT_EQ(elems.size(), 6u);
  const Vector one{F->one()};
  // |Γ| = 6 is even, so the coprime hypothesis fails here.
  EXPECT_THROW(semilinear_lift(*F, elems, one, one), Error);
  const auto r = semilinear_lift(*F, elems, one, one, false);
  EXPECT_EQ(semilinear_pair_stabilizer(*F, elems, r.u1, r.u2).size(), 1u);
  EXPECT_EQ(r.u2, vec_axpy(*F, one, r.gamma, one));
  EXPECT_TRUE(subfield_cosets_hold(*F, elems, one, one));
}

TEST(Semilinear, DiagonalTimesFrobeniusOverGF9) {
  const auto F = field_make(3, 2);
  const Elem a = F->primitive();
  const std::vector<SemilinearElement> gens{{diagonal_matrix({a, F->one()}), 0},
                                            {diagonal_matrix({F->one(), a}), 0},
                                            {identity(*F, 2), 1}};
  const auto elems = semilinear_close(*F, 2, gens);
  EXPECT_EQ(elems.size(), 128u);
  const Vector e1 = unit_vector(*F, 2, 0), e2 = unit_vector(*F, 2, 1);
  const auto r = semilinear_lift(*F, elems, e1, e2);
  EXPECT_EQ(semilinear_pair_stabilizer(*F, elems, r.u1, r.u2).size(), 1u);
  EXPECT_EQ(fixed_subfield(*F, 1).count(r.gamma), 0u);
  EXPECT_TRUE(subfield_cosets_hold(*F, elems, e1, e2));
}

TEST(Semilinear, NotABaseForLinearPart) {
  const auto F = field_make(3, 2);
  const std::vector<SemilinearElement> gens{{diagonal_matrix({F->one(), F->primitive()}), 0},
                                            {identity(*F, 2), 1}};
  const auto elems = semilinear_close(*F, 2, gens);
  const Vector e1 = unit_vector(*F, 2, 0);
  try {
    semilinear_lift(*F, elems, e1, e1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotABaseForH);
  }
}

// ---------------------------------------------------------------------------

TEST(DeletedPermutation, AlternatingThreeOverFive) {
  const auto F = field_make(5, 1);
  const Vector x = deleted_permutation_vector(*F, 3);
  EXPECT_EQ(x, vec(*F, {-1, 0}));
  const auto N = deleted_permutation_group(F, 3, false, false);
  EXPECT_EQ(N.size(), 3u);
  int fixers = 0;
  for (const auto& g : all_elements(N)) fixers += apply(*F, g, x) == x;
  EXPECT_EQ(fixers, 1);
}

TEST(DeletedPermutation, SymmetricFourTimesScalarsOverFive) {
  const auto F = field_make(5, 1);
  const auto G = deleted_permutation_group(F, 4, true, true);
  EXPECT_EQ(G.size(), 96u);
  const auto r = deleted_permutation_base(G, 4);
  EXPECT_EQ(r.x, vec(*F, {1, 2, 3}));
  EXPECT_TRUE(r.stabilizer_abelian);
  EXPECT_TRUE(r.certificate.verified);
}

TEST(DeletedPermutation, LargerCases) {
  for (auto [p, c] : {std::pair{7, 5}, {7, 6}, {11, 5}}) {
    const auto F = field_make(p, 1);
    const auto G = deleted_permutation_group(F, c, true, true);
    ASSERT_TRUE(coprimality_check(G));
    const auto r = deleted_permutation_base(G, c);
    EXPECT_TRUE(r.stabilizer_abelian) << p << " " << c;
    EXPECT_TRUE(r.certificate.verified) << p << " " << c;
  }
  EXPECT_THROW(deleted_permutation_vector(*field_make(5, 1), 5), Error);
}

// ---------------------------------------------------------------------------

TEST(Quasisimple, TrivialStabilizerTakesZero) {
  const auto F = field_make(7, 1);
  const auto Z = group_close(F, 1, {scalar_matrix(*F, 1, F->primitive())});
  const auto r = quasisimple_search(Z, Vector{F->one()});
  EXPECT_EQ(r.y, Vector{0});
  EXPECT_EQ(r.cover.subgroups, 0);
  EXPECT_TRUE(r.certificate.verified);
}

TEST(Quasisimple, TwoA5AtEleven) {
  const auto G = group_close(two_a5_star_z(11).group());
  const auto m = min_stabilizer_scan(G);
  ASSERT_EQ(m.order, 5u);
  const auto r = quasisimple_search(G, m.witness);
  EXPECT_EQ(r.cover.subgroups, 1);
  EXPECT_TRUE(r.cover.few_subgroups);
  EXPECT_TRUE(r.certificate.verified);
}

TEST(Quasisimple, CountingBoundHoldsExactly) {
  for (int p : {11, 19, 29, 31, 41, 61}) {
    const auto G = group_close(two_a5_star_z(p).group());
    const Field& F = G.F();
    const auto m = min_stabilizer_scan(G);
    const auto r = quasisimple_search(G, m.witness);
    ASSERT_TRUE(r.union_size.has_value());
    // Direct count of the union of fixed spaces.
    const auto subs = minimal_subgroups(vector_stabilizer(G, m.witness).group);
    std::uint64_t direct = 0;
    for (std::uint64_t i = 0; i < F.size() * F.size(); ++i) {
      const Vector y = vector_from_index(F, 2, i);
      bool hit = false;
      for (const auto& h : subs) hit = hit || apply(F, h.generator, y) == y;
      direct += hit;
    }
    EXPECT_EQ(*r.union_size, direct) << p;
    const std::uint64_t q = F.size();
    EXPECT_LE(direct, r.cover.large * q - r.cover.large + r.cover.small + 1) << p;
    EXPECT_TRUE(r.certificate.verified) << p;
  }
}

TEST(Quasisimple, CoverOfWholeSpace) {
  // The identity stabilizer chain of GL(2,3) at x = 0: C_G(0) = G, whose minimal
  // subgroups' fixed spaces cover F_3^2.
  const auto F = field_make(3, 1);
  const auto G = general_linear_group(F, 2);
  try {
    quasisimple_search(G, Vector{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CoverIsWholeSpace);
  }
}
