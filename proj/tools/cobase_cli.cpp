// cobase: construct, verify and report two-element bases of coprime linear groups.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 resource cap. Results go to stdout, diagnostics and timings to stderr.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cobase/base_construct.hpp"
#include "cobase/group_data.hpp"
#include "cobase/io.hpp"
#include "cobase/symplectic.hpp"

using namespace cobase;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kCap = 3;

struct Global {
  bool json = false;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::optional<std::uint64_t> cap;
  std::string method = "auto";
};

// What a command produced; printed once at the end.
struct Report {
  std::string command;
  std::vector<Json> certificates;
  Json results = Json::object();
  std::vector<std::string> lines;  // human-readable form
  bool ok = true;
};

class Timer {
 public:
  explicit Timer(std::string phase) : phase_(std::move(phase)), start_(clock::now()) {}
  ~Timer() {
    const double s = std::chrono::duration<double>(clock::now() - start_).count();
    std::cerr << "phase " << phase_ << ": " << s << " s\n";
  }

 private:
  using clock = std::chrono::steady_clock;
  std::string phase_;
  clock::time_point start_;
};

MethodChoice method_choice(const std::string& m) {
  if (m == "enum") return MethodChoice::Enumerate;
  if (m == "schreier") return MethodChoice::Schreier;
  return MethodChoice::Auto;
}

FieldPtr field_of_order(std::uint64_t q) {
  for (std::uint64_t p = 2; p <= q; ++p) {
    if (q % p) continue;
    std::uint64_t x = q;
    int f = 0;
    while (x % p == 0) {
      x /= p;
      ++f;
    }
    if (x != 1) break;
    return field_make(static_cast<int>(p), f);
  }
  throw Error(Errc::NonPrime, std::to_string(q) + " is not a prime power");
}

std::string support_text(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s += (s.empty() ? "" : " ") + std::to_string(i);
  return "{" + s + "}";
}

Json support_json(const Vector& v) {
  Json a = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) a.push_back(i);
  return a;
}

void add_certificate(Report& rep, const BaseCertificate& c, const Field& F) {
  rep.certificates.push_back(certificate_json(c, F));
  rep.ok = rep.ok && c.verified;
  std::string chain, vecs;
  for (auto o : c.order_chain) chain += (chain.empty() ? "" : " ") + std::to_string(o);
  for (const auto& v : c.vectors) vecs += (vecs.empty() ? "" : "; ") + format_vector(F, v);
  rep.lines.push_back("group: " + c.group_ref);
  rep.lines.push_back("field: " + c.field + "  dim: " + std::to_string(c.dim));
  rep.lines.push_back("vectors: " + vecs);
  rep.lines.push_back("method: " + method_name(c.method));
  rep.lines.push_back("order_chain: " + chain);
  for (const auto& [k, v] : c.metadata) rep.lines.push_back(k + ": " + v);
  rep.lines.push_back(std::string("verified: ") + (c.verified ? "true" : "false"));
}

Options options(const Global& g) {
  Options opt;
  if (const char* env = std::getenv("COBASE_CAP")) {
    try {
      std::size_t used = 0;
      opt.cap = std::stoull(env, &used);
      if (used != std::string(env).size() || opt.cap == 0) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, std::string("COBASE_CAP is not a positive integer: ") + env);
    }
  }
  if (g.cap) opt.cap = *g.cap;
  opt.threads = g.threads;
  opt.seed = g.seed;
  return opt;
}

Json config_json(const Global& g, const Options& opt) {
  return {{"cap", opt.cap}, {"seed", opt.seed}, {"threads", g.threads}, {"method", g.method}};
}

// ---------------------------------------------------------------------------
// Commands

struct VerifyArgs {
  std::string group, vectors;
};

void cmd_verify(const Global& g, const Options& opt, const VerifyArgs& a, Report& rep) {
  const GroupRecord rec = load_group(a.group);
  const MatrixGroup G = rec.group();
  const auto vecs = parse_vectors(*rec.field, a.vectors, rec.dim);
  Timer t("verify");
  add_certificate(rep, verify_base(G, vecs, method_choice(g.method), opt), *rec.field);
}

struct FindArgs {
  std::string group;
  int max_size = 3;
  bool strong = false;
};

void cmd_find(const Global& g, const Options& opt, const FindArgs& a, Report& rep) {
  const GroupRecord rec = load_group(a.group);
  MatrixGroup G;
  {
    Timer t("enumerate");
    G = group_close(rec.group(), opt.cap);
  }
  const Field& F = *rec.field;
  BaseSearchResult r;
  try {
    Timer t("search");
    r = a.strong ? minimal_strong_base_size(G, a.max_size) : minimal_base_size(G, a.max_size);
  } catch (const Error& e) {
    // q^n too large is a resource limit; otherwise no base of the allowed size exists.
    const long double space = std::pow(static_cast<long double>(F.size()), G.n);
    if (e.code() != Errc::SearchSpaceTooLarge || space > kSearchBound) throw;
    rep.ok = false;
    rep.results["size"] = nullptr;
    rep.results["max_size"] = a.max_size;
    rep.lines.push_back("no base of size <= " + std::to_string(a.max_size));
    return;
  }
  const char* label = a.strong ? "strong_base_size" : "base_size";
  rep.results[label] = r.size;
  Json w = Json::array();
  for (const auto& v : r.witness) w.push_back(format_vector(F, v));
  rep.results["witness"] = w;
  rep.lines.push_back(std::string(label) + ": " + std::to_string(r.size));
  if (!r.witness.empty() && !a.strong)
    add_certificate(rep, verify_base(G, r.witness, MethodChoice::Enumerate, opt), F);
}

struct ConstructArgs {
  std::string recipe;
  // symplectic
  int r = 0, k = 0;
  std::uint64_t q = 0;
  bool nonmonomial = false, full = false;
  std::string write_group;
  // deleted-perm
  int c = 0;
  bool symmetric = false, scalars = false;
  // tensor, semilinear, imprimitive
  std::string group, perm_group;
  int t = 0;
  std::string x1, y1, z1, u1, u2;
  int frobenius = 1;
  bool allow_noncoprime = false;
};

void need(bool cond, const std::string& what) {
  if (!cond) throw Error(Errc::PreconditionViolated, what);
}

void recipe_symplectic(const Global& g, const Options& opt, const ConstructArgs& a, Report& rep) {
  need(a.r > 0 && a.k > 0 && a.q > 0, "symplectic needs --r, --k and --q");
  const FieldPtr F = field_of_order(a.q);
  SymplecticSetup S;
  {
    Timer t("setup");
    S = symplectic_setup(a.r, a.k, F, a.nonmonomial, opt, a.full);
  }
  if (!a.write_group.empty()) {
    GroupRecord rec;
    rec.name = S.acting.description;
    rec.field = F;
    rec.dim = S.n();
    rec.generators = S.acting.generators;
    rec.expected_order = S.acting.order;
    std::ofstream out(a.write_group);
    if (!out) throw Error(Errc::ParseError, "cannot write " + a.write_group);
    out << format_group(rec);
  }
  BaseCertificate c;
  {
    Timer t("verify");
    c = verify_base(S.acting, {S.vectors.x, S.vectors.y}, method_choice(g.method), opt);
  }
  c.metadata["acting_group"] = S.acting_choice;
  c.metadata["branch"] = S.vectors.branch;
  c.metadata["full_normalizer_order"] = std::to_string(S.full_order);
  add_certificate(rep, c, *F);
  rep.results["supports"] = {{"x", support_json(S.vectors.x)}, {"y", support_json(S.vectors.y)}};
  rep.lines.push_back("support(x): " + support_text(S.vectors.x));
  rep.lines.push_back("support(y): " + support_text(S.vectors.y));
}

void recipe_deleted(const Options& opt, const ConstructArgs& a, Report& rep) {
  need(a.c > 0 && a.q > 0, "deleted-perm needs --c and --q");
  const FieldPtr F = field_of_order(a.q);
  MatrixGroup G;
  {
    Timer t("enumerate");
    G = deleted_permutation_group(F, a.c, a.symmetric, a.scalars);
  }
  Timer t("construct");
  DeletedPermutationBase b = deleted_permutation_base(G, a.c, opt);
  b.certificate.group_ref = std::string(a.symmetric ? "S" : "A") + std::to_string(a.c) +
                            (a.scalars ? " x Z" : "") + " on the deleted permutation module";
  b.certificate.metadata["stabilizer_order"] = std::to_string(b.stabilizer_order);
  b.certificate.metadata["stabilizer_abelian"] = b.stabilizer_abelian ? "true" : "false";
  add_certificate(rep, b.certificate, *F);
}

void recipe_tensor(const Global& g, const Options& opt, const ConstructArgs& a, Report& rep) {
  need(!a.group.empty() && a.t >= 2 && !a.x1.empty() && !a.y1.empty(),
       "tensor needs --group, --t >= 2, --x1 and --y1");
  const GroupRecord rec = load_group(a.group);
  const Field& F = *rec.field;
  const Vector x1 = parse_vector(F, a.x1, rec.dim);
  const Vector y1 = parse_vector(F, a.y1, rec.dim);
  const MatrixGroup G1 = rec.group();
  const std::string desc = rec.name + " wr S" + std::to_string(a.t);
  if (rec.dim == 2 && a.t == 2) {
    Timer t("search");
    const MatrixGroup G = group_close(central_wreath_product(G1, 2, desc), opt.cap);
    Tensor22Result r = tensor_22_search(G, x1, y1, opt);
    r.certificate.metadata["branch"] = r.branch;
    add_certificate(rep, r.certificate, F);
    return;
  }
  std::optional<Vector> z1;
  if (!a.z1.empty()) z1 = parse_vector(F, a.z1, rec.dim);
  const auto [x, y] = tensor_power_vectors(F, a.t, x1, y1, z1);
  Timer t("verify");
  add_certificate(rep, verify_base(central_wreath_product(G1, a.t, desc), {x, y},
                                   method_choice(g.method), opt),
                  F);
}

void recipe_semilinear(const Options& opt, const ConstructArgs& a, Report& rep) {
  need(!a.group.empty() && !a.u1.empty() && !a.u2.empty(), "semilinear needs --group, --u1 and --u2");
  const GroupRecord rec = load_group(a.group);
  const Field& F = *rec.field;
  need(F.degree() > 1, "semilinear needs a non-prime field");
  const Vector u1 = parse_vector(F, a.u1, rec.dim);
  const Vector u2 = parse_vector(F, a.u2, rec.dim);
  std::vector<SemilinearElement> gens;
  for (const auto& h : rec.generators) gens.push_back({h, 0});
  gens.push_back({identity(F, rec.dim), ((a.frobenius % F.degree()) + F.degree()) % F.degree()});
  Timer t("construct");
  const auto elems = semilinear_close(F, rec.dim, gens, opt.cap);
  const SemilinearLiftResult r = semilinear_lift(F, elems, u1, u2, !a.allow_noncoprime);
  std::uint64_t fix1 = 0;
  for (const auto& e : elems) fix1 += semilinear_apply(F, e, r.u1) == r.u1;
  const auto both = semilinear_pair_stabilizer(F, elems, r.u1, r.u2);
  BaseCertificate c;
  c.group_ref = rec.name + " with Frobenius";
  c.field = F.spec_text();
  c.dim = rec.dim;
  c.vectors = {r.u1, r.u2};
  c.method = VerifyMethod::FullEnumeration;
  c.order_chain = {elems.size(), fix1, both.size()};
  c.verified = both.size() == 1;
  c.metadata["gamma"] = F.format(r.gamma);
  add_certificate(rep, c, F);
}

// H wr P on V^k: H acts on the first block, P permutes the blocks.
void recipe_imprimitive(const Global& g, const Options& opt, const ConstructArgs& a, Report& rep) {
  need(!a.group.empty() && !a.perm_group.empty(), "imprimitive needs --group and --perm-group");
  const GroupRecord rec = load_group(a.group);
  const FieldPtr field = rec.field;
  const Field& F = *field;
  const int d = rec.dim;
  const PermGroup P = load_perm_group(a.perm_group);
  const int k = P.degree();
  const MatrixGroup H = group_close(rec.group(), opt.cap);

  Vector x1, y1;
  if (!a.x1.empty() || !a.y1.empty()) {
    need(!a.x1.empty() && !a.y1.empty(), "give both --x1 and --y1");
    x1 = parse_vector(F, a.x1, d);
    y1 = parse_vector(F, a.y1, d);
  } else {
    const auto b = minimal_base_size(H, 2);
    x1 = b.size == 0 ? unit_vector(F, d, 0) : b.witness[0];
    y1 = b.witness.size() > 1 ? b.witness[1] : x1;
  }

  auto block_matrix = [&](const std::vector<int>& images) {
    return kron(F, permutation_matrix(F, images), identity(F, d));
  };
  std::vector<Matrix> gens;
  for (const auto& h : H.generators) {
    Matrix m = identity(F, k * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = h(i, j);
    gens.push_back(std::move(m));
  }
  for (const auto& s : P.generators()) gens.push_back(block_matrix(s.images));
  std::uint64_t order = P.order();
  for (int i = 0; i < k; ++i) order *= H.size();
  const MatrixGroup G = make_group(field, k * d, gens, rec.name + " wr degree-" + std::to_string(k),
                                   order);

  std::vector<std::vector<Vector>> blocks(k);
  std::vector<Matrix> reps(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) blocks[i].push_back(unit_vector(F, k * d, i * d + j));
    for (const auto& s : P.elements())
      if (s(0) == i) {
        reps[i] = block_matrix(s.images);
        break;
      }
    need(reps[i].n == k * d, "the permutation group must be transitive");
  }
  const BlockSystem B = make_block_system(G, blocks, reps);
  const RegularPartition labels = regular_partition_coprime(B.block_perm_group, F.characteristic());
  // x1, y1 live in the first block.
  Vector ex(k * d, 0), ey(k * d, 0);
  std::copy(x1.begin(), x1.end(), ex.begin());
  std::copy(y1.begin(), y1.end(), ey.begin());
  const auto [x, y] = imprimitive_glue(F, B, ex, ey, labels);
  Timer t("verify");
  BaseCertificate c = verify_base(G, {x, y}, method_choice(g.method), opt);
  c.metadata["labels"] = format_partition(labels);
  add_certificate(rep, c, F);
}

void cmd_construct(const Global& g, const Options& opt, const ConstructArgs& a, Report& rep) {
  if (a.recipe == "symplectic") return recipe_symplectic(g, opt, a, rep);
  if (a.recipe == "deleted-perm") return recipe_deleted(opt, a, rep);
  if (a.recipe == "tensor") return recipe_tensor(g, opt, a, rep);
  if (a.recipe == "semilinear") return recipe_semilinear(opt, a, rep);
  return recipe_imprimitive(g, opt, a, rep);
}

void cmd_partition(const std::string& file, int parts, Report& rep) {
  const PermGroup P = load_perm_group(file);
  Timer t("partition");
  const RegularPartition part = regular_partition_coprime(P, parts);
  const bool regular = is_regular_partition(P, part);
  rep.ok = regular;
  Json groups = Json::array();
  for (const auto& p : part.parts()) groups.push_back(p);
  rep.results = {{"degree", P.degree()},
                 {"order", P.order()},
                 {"parts", parts},
                 {"labels", part.labels},
                 {"blocks", groups},
                 {"regular", regular}};
  rep.lines.push_back("labels: " + format_partition(part));
  rep.lines.push_back(std::string("regular: ") + (regular ? "true" : "false"));
}

void regress_table1(Report& rep) {
  Json rows = Json::array();
  for (const auto& row : table1_rows()) {
    Timer t("table1 " + row.group);
    const PermGroup G = table1_group(row.group);
    const auto p3 = regular_orbit_count(G, 3);
    const auto p4 = regular_orbit_count(G, 4);
    const bool ok = G.order() == row.order && row.on_p3.matches(p3) && row.on_p4.matches(p4);
    rep.ok = rep.ok && ok;
    rows.push_back({{"group", row.group},
                    {"order", G.order()},
                    {"regular_orbits_p3", p3},
                    {"expected_p3", row.on_p3.text()},
                    {"regular_orbits_p4", p4},
                    {"expected_p4", row.on_p4.text()},
                    {"match", ok}});
    rep.lines.push_back(row.group + ": P3 " + std::to_string(p3) + " (" + row.on_p3.text() +
                        "), P4 " + std::to_string(p4) + " (" + row.on_p4.text() + ") " +
                        (ok ? "ok" : "MISMATCH"));
  }
  rep.results["table1"] = rows;
}

void regress_table2(const Options& opt, Report& rep) {
  Json rows = Json::array();
  for (const auto& row : table2_rows()) {
    if (!row.bundled) continue;
    for (const auto& e : row.entries) {
      Timer t("table2 " + row.group + " p=" + std::to_string(e.p));
      const GroupRecord rec = two_a5_star_z(e.p);
      const MatrixGroup G = group_close(rec.group(), opt.cap);
      const MinStabilizer m = min_stabilizer_scan(G);
      const QuasisimpleSearchResult s = quasisimple_search(G, m.witness, opt);
      const bool ok = m.order == e.min_stabilizer_order && s.certificate.verified;
      rep.ok = rep.ok && ok;
      rows.push_back({{"group", row.group},
                      {"p", e.p},
                      {"order", G.size()},
                      {"min_stabilizer_order", m.order},
                      {"expected", e.min_stabilizer_order},
                      {"x", format_vector(*rec.field, m.witness)},
                      {"y", format_vector(*rec.field, s.y)},
                      {"base_verified", s.certificate.verified},
                      {"match", ok}});
      rep.lines.push_back(row.group + " p=" + std::to_string(e.p) + ": min stabilizer " +
                          std::to_string(m.order) + " (" + e.min_stabilizer + "), base " +
                          (s.certificate.verified ? "verified" : "FAILED") + " " +
                          (ok ? "ok" : "MISMATCH"));
    }
  }
  rep.results["table2"] = rows;
}

void cmd_min_stabilizer(const Options& opt, const std::string& file, Report& rep) {
  const GroupRecord rec = load_group(file);
  Timer t("scan");
  const MatrixGroup G = group_close(rec.group(), opt.cap);
  const MinStabilizer m = min_stabilizer_scan(G);
  rep.results = {{"order", G.size()},
                 {"min_stabilizer_order", m.order},
                 {"witness", format_vector(*rec.field, m.witness)}};
  if (rec.expected_min_stabilizer_order) {
    rep.ok = *rec.expected_min_stabilizer_order == m.order;
    rep.results["expected"] = *rec.expected_min_stabilizer_order;
  }
  rep.lines.push_back("min stabilizer order: " + std::to_string(m.order));
  rep.lines.push_back("witness: " + format_vector(*rec.field, m.witness));
}

void cmd_quasisimple(const Options& opt, const std::string& file, const std::string& x, Report& rep) {
  const GroupRecord rec = load_group(file);
  const MatrixGroup G = rec.group();
  const Vector xv = parse_vector(*rec.field, x, rec.dim);
  Timer t("search");
  QuasisimpleSearchResult r = quasisimple_search(G, xv, opt);
  r.certificate.metadata["minimal_subgroups"] = std::to_string(r.cover.subgroups);
  add_certificate(rep, r.certificate, *rec.field);
}

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::CapExceeded:
    case Errc::SearchSpaceTooLarge:
    case Errc::DegreeTooLarge:
      return kCap;
    case Errc::TheoremViolation:
    case Errc::NotABase:
    case Errc::NotABaseForH:
      return kVerifyFailed;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-element bases of coprime linear groups"};
  app.require_subcommand(1);
  Global g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_flag("--json", g.json, "Print the run report as JSON");
    sub->add_option("--seed", g.seed, "Seed for randomized normalizer generation");
    sub->add_option("--threads", g.threads, "Worker threads (0: all cores)");
    sub->add_option("--cap", g.cap, "Enumeration cap (overrides COBASE_CAP)");
  };
  add_globals(&app);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-base", "Verify that vectors form a base");
  verify->add_option("--group", va.group, "Group file")->required();
  verify->add_option("--vectors", va.vectors, "Vectors as \"v1;v2\"")->required();
  verify->add_option("--method", g.method)->check(CLI::IsMember({"auto", "enum", "schreier"}));
  add_globals(verify);

  FindArgs fa;
  auto* find = app.add_subcommand("find-base", "Exact base size by exhaustive search");
  find->add_option("--group", fa.group, "Group file")->required();
  find->add_option("--max-size", fa.max_size)->check(CLI::Range(1, 8));
  find->add_flag("--strong", fa.strong, "Search for a strong base instead");
  add_globals(find);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a base by a recipe and verify it");
  construct->add_option("--recipe", ca.recipe)
      ->required()
      ->check(CLI::IsMember({"imprimitive", "tensor", "symplectic", "deleted-perm", "semilinear"}));
  construct->add_option("--r", ca.r);
  construct->add_option("--k", ca.k);
  construct->add_option("--q", ca.q);
  construct->add_flag("--nonmonomial", ca.nonmonomial);
  construct->add_flag("--full", ca.full, "Use the full normalizer even when it is not coprime");
  construct->add_option("--write-group", ca.write_group, "Write the acting group to a file");
  construct->add_option("--c", ca.c);
  construct->add_flag("--symmetric", ca.symmetric);
  construct->add_flag("--scalars", ca.scalars);
  construct->add_option("--group", ca.group, "Group file (factor, linear part or block group)");
  construct->add_option("--perm-group", ca.perm_group, "Permutation group on the blocks");
  construct->add_option("--t", ca.t, "Tensor power");
  construct->add_option("--x1", ca.x1);
  construct->add_option("--y1", ca.y1);
  construct->add_option("--z1", ca.z1);
  construct->add_option("--u1", ca.u1);
  construct->add_option("--u2", ca.u2);
  construct->add_option("--frobenius", ca.frobenius, "Power of the Frobenius generator");
  construct->add_flag("--allow-noncoprime", ca.allow_noncoprime);
  construct->add_option("--method", g.method)->check(CLI::IsMember({"auto", "enum", "schreier"}));
  add_globals(construct);

  std::string perm_file;
  int parts = 0;
  auto* partition = app.add_subcommand("partition", "Regular partition of a permutation group");
  partition->add_option("--perm-group", perm_file)->required();
  partition->add_option("--parts", parts)->required()->check(CLI::PositiveNumber);
  add_globals(partition);

  int table = 0;
  auto* regress = app.add_subcommand("regress", "Run the bundled regression rows");
  regress->add_option("--table", table)->required()->check(CLI::IsMember({1, 2}));
  add_globals(regress);

  std::string scan_file;
  auto* scan = app.add_subcommand("min-stabilizer", "Smallest vector stabilizer by exhaustive scan");
  scan->add_option("--group", scan_file)->required();
  add_globals(scan);

  std::string qs_file, qs_x;
  auto* qs = app.add_subcommand("quasisimple-search", "Find y completing a base with a given x");
  qs->add_option("--group", qs_file)->required();
  qs->add_option("--x", qs_x)->required();
  add_globals(qs);

  auto* tables = app.add_subcommand("tables", "Export the regression tables as JSON");
  add_globals(tables);

  int a5_p = 0;
  auto* two_a5 = app.add_subcommand("two-a5", "Print the bundled 2.A5*Z group file for a prime");
  two_a5->add_option("--p", a5_p)->required();
  add_globals(two_a5);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Report rep;
  std::string echo;
  for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);
  rep.command = echo;
  int status = kOk;
  Options opt;
  try {
    opt = options(g);
    if (*verify) cmd_verify(g, opt, va, rep);
    else if (*find) cmd_find(g, opt, fa, rep);
    else if (*construct) cmd_construct(g, opt, ca, rep);
    else if (*partition) cmd_partition(perm_file, parts, rep);
    else if (*regress) table == 1 ? regress_table1(rep) : regress_table2(opt, rep);
    else if (*scan) cmd_min_stabilizer(opt, scan_file, rep);
    else if (*qs) cmd_quasisimple(opt, qs_file, qs_x, rep);
    else if (*tables) {
      std::cout << tables_json().dump(2) << "\n";
      return kOk;
    } else if (*two_a5) {
      std::cout << format_group(two_a5_star_z(a5_p));
      return kOk;
    }
    status = rep.ok ? kOk : kVerifyFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = exit_code_for(e.code());
    if (!g.json) return status;
    rep.results["error"] = e.what();
  }

  if (g.json) {
    Json out;
    out["command"] = rep.command;
    out["config"] = config_json(g, opt);
    out["certificates"] = rep.certificates;
    out["results"] = rep.results;
    out["exit_status"] = status;
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& l : rep.lines) std::cout << l << "\n";
  }
  return status;
}
