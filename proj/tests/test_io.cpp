#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cobase/io.hpp"
#include "cobase/symplectic.hpp"

using namespace cobase;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in.good()) << path;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return std::string(COBASE_DATA_DIR) + "/" + name; }

}  // namespace

TEST(VectorText, ExtensionFieldRoundTrip) {
  const auto F = field_make(3, 2);
  const Vector v{F->one(), F->primitive(), 0};
  const std::string text = format_vector(*F, v);
  EXPECT_EQ(text, "1,0," + F->format(F->primitive()) + ",0,0");
  EXPECT_EQ(parse_vector(*F, text, 3), v);
  const auto vs = parse_vectors(*F, text + "; 0,0,1,0,2,2", 3);
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0], v);
  EXPECT_THROW(parse_vector(*F, "1,0,0", 3), Error);
}

TEST(CertificateJson, RoundTripAndRecheck) {
  const auto F = field_make(5, 1);
  const MatrixGroup G = group_close(F, 2, {permutation_matrix(*F, {1, 0}),
                                           diagonal_matrix({F->primitive(), F->one()})},
                                    Options{}.cap, "C4 wr C2");
  const BaseCertificate c = verify_base(G, {Vector{1, 0}, Vector{1, 2}});
  ASSERT_TRUE(c.verified);
  const Json j = certificate_json(c, *F);
  EXPECT_EQ(j["group"], "C4 wr C2");
  EXPECT_EQ(j["vectors"][1], "1,2");
  const BaseCertificate back = certificate_from_json(Json::parse(j.dump()));
  EXPECT_EQ(certificate_json(back, *F).dump(), j.dump());
  EXPECT_TRUE(recheck_certificate(back, G));

  BaseCertificate tampered = back;
  tampered.order_chain.back() = 2;
  EXPECT_FALSE(recheck_certificate(tampered, G));
  Json bad = j;
  bad["method"] = "Guess";
  EXPECT_THROW(certificate_from_json(bad), Error);
  bad.erase("method");
  EXPECT_THROW(certificate_from_json(bad), Error);
}

TEST(BundledData, TwoA5FilesMatchRegeneration) {
  for (int p : {11, 19, 29, 31, 41, 61}) {
    const std::string path = data("two_a5_z_p" + std::to_string(p) + ".grp");
    EXPECT_EQ(slurp(path), format_group(two_a5_star_z(p))) << p;
    const MatrixGroup G = load_and_check(path);
    EXPECT_EQ(G.size(), 60u * static_cast<std::uint64_t>(p - 1));
  }
}

TEST(BundledData, TablesJsonMatchesExport) {
  EXPECT_EQ(slurp(data("tables.json")), tables_json().dump(2) + "\n");
  const Json t = Json::parse(slurp(data("tables.json")));
  EXPECT_EQ(t["table1"].size(), 9u);
  EXPECT_EQ(t["table2"].size(), 21u);
}

TEST(BundledData, NormalizerFilesMatchConstruction) {
  const auto F3 = field_make(3, 1);
  const auto S3 = symplectic_setup(2, 2, F3, false, {}, true);
  const GroupRecord r3 = load_group(data("gl43_normalizer.grp"));
  EXPECT_EQ(r3.generators, S3.acting.generators);
  EXPECT_EQ(load_and_check(data("gl43_normalizer.grp")).size(), 2304u);

  const auto F7 = field_make(7, 1);
  const auto S7 = symplectic_setup(2, 2, F7, false);
  const GroupRecord r7 = load_group(data("gl47_normalizer.grp"));
  EXPECT_EQ(r7.generators, S7.acting.generators);
  EXPECT_EQ(load_and_check(data("gl47_normalizer.grp")).size(), 6912u);
}

TEST(BundledData, SmallGroupFilesParse) {
  EXPECT_EQ(load_and_check(data("trivial.grp")).size(), 1u);
  EXPECT_EQ(load_and_check(data("gl1_5.grp")).size(), 4u);
  EXPECT_EQ(load_and_check(data("gf9_squares.grp")).size(), 4u);
  EXPECT_EQ(load_and_check(data("sl23_z_p3.grp")).size(), 24u);
  EXPECT_EQ(load_and_check(data("sl23_z_p5.grp")).size(), 48u);
  EXPECT_EQ(load_perm_group(data("s3.perm")).order(), 6u);
  EXPECT_EQ(load_perm_group(data("s4.perm")).order(), 24u);
  EXPECT_EQ(load_perm_group(data("c5.perm")).order(), 5u);
}
