#pragma once

// Group files, the two regression tables, and the bundled desk-scale groups.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cobase/error.hpp"
#include "cobase/field.hpp"
#include "cobase/linear_group.hpp"
#include "cobase/matrix.hpp"
#include "cobase/perm_group.hpp"

namespace cobase {

struct GroupRecord {
  std::string name;
  FieldPtr field;
  int dim = 0;
  std::vector<Matrix> generators;
  std::optional<std::uint64_t> expected_order;
  std::optional<std::uint64_t> expected_min_stabilizer_order;
  std::string table_row_ref;

  MatrixGroup group() const {
    return make_group(field, dim, generators, name, expected_order);
  }
};

namespace detail {

inline std::vector<std::pair<int, std::string>> tokens_with_columns(const std::string& line) {
  std::vector<std::pair<int, std::string>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.emplace_back(static_cast<int>(i) + 1, line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_uint(const std::string& tok, int line, int col) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, col, "expected a non-negative integer, got '" + tok + "'");
  return v;
}

}  // namespace detail

// Line-oriented group file:
//   field p f c_0 ... c_f     (modulus coefficients, constant first)
//   dim n
//   name <text>               (optional)
//   order <N>                 (optional; closure must match)
//   min-stabilizer <N>        (optional)
//   then n rows of n field elements per generator; blank lines and '#' ignored.
inline GroupRecord parse_group(const std::string& text) {
  GroupRecord rec;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::vector<Elem> pending;
  int pending_rows = 0;
  int p = 0, f = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = raw.substr(0, raw.find('#'));
    auto toks = detail::tokens_with_columns(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].second;
    if (head == "field") {
      if (toks.size() < 4) throw ParseError(line_no, 1, "field needs p, f and f+1 coefficients");
      p = static_cast<int>(detail::parse_uint(toks[1].second, line_no, toks[1].first));
      f = static_cast<int>(detail::parse_uint(toks[2].second, line_no, toks[2].first));
      if (static_cast<int>(toks.size()) != 3 + f + 1)
        throw ParseError(line_no, 1, "modulus needs " + std::to_string(f + 1) + " coefficients");
      std::vector<int> mod;
      for (std::size_t i = 3; i < toks.size(); ++i)
        mod.push_back(static_cast<int>(detail::parse_uint(toks[i].second, line_no, toks[i].first)));
      try {
        rec.field = field_with_modulus(p, mod);
      } catch (const Error& e) {
        throw ParseError(line_no, toks[1].first, e.what());
      }
      continue;
    }
    if (head == "dim") {
      if (toks.size() != 2) throw ParseError(line_no, 1, "dim takes one value");
      rec.dim = static_cast<int>(detail::parse_uint(toks[1].second, line_no, toks[1].first));
      if (rec.dim < 1) throw ParseError(line_no, toks[1].first, "dimension must be positive");
      continue;
    }
    if (head == "name") {
      rec.name = line.substr(static_cast<std::size_t>(toks[1].first - 1));
      while (!rec.name.empty() && (rec.name.back() == ' ' || rec.name.back() == '\r'))
        rec.name.pop_back();
      continue;
    }
    if (head == "order" || head == "min-stabilizer") {
      if (toks.size() != 2) throw ParseError(line_no, 1, head + " takes one value");
      const auto v = detail::parse_uint(toks[1].second, line_no, toks[1].first);
      (head == "order" ? rec.expected_order : rec.expected_min_stabilizer_order) = v;
      continue;
    }
    if (!rec.field || rec.dim == 0)
      throw ParseError(line_no, 1, "matrix rows before the field and dim headers");
    if (static_cast<int>(toks.size()) != rec.dim)
      throw ParseError(line_no, 1,
                       "expected " + std::to_string(rec.dim) + " entries, got " +
                           std::to_string(toks.size()));
    for (const auto& [col, tok] : toks) {
      try {
        pending.push_back(rec.field->parse(tok));
      } catch (const Error& e) {
        throw ParseError(line_no, col, e.what());
      }
    }
    if (++pending_rows == rec.dim) {
      Matrix m(rec.dim, std::move(pending));
      if (det(*rec.field, m) == 0) throw ParseError(line_no, 1, "generator is singular");
      rec.generators.push_back(std::move(m));
      pending.clear();
      pending_rows = 0;
    }
  }
  if (!rec.field) throw ParseError(line_no, 1, "missing field header");
  if (rec.dim == 0) throw ParseError(line_no, 1, "missing dim header");
  if (pending_rows != 0) throw ParseError(line_no, 1, "incomplete matrix at end of file");
  return rec;
}

inline GroupRecord load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  GroupRecord rec = parse_group(ss.str());
  if (rec.name.empty()) rec.name = path;
  return rec;
}

// Loads and, when an order is declared, checks it by closure.
inline MatrixGroup load_and_check(const std::string& path, std::uint64_t cap = Options{}.cap) {
  GroupRecord rec = load_group(path);
  MatrixGroup G = rec.group();
  if (rec.expected_order && *rec.expected_order <= cap) G = group_close(G, cap);
  return G;
}

inline std::string format_group(const GroupRecord& rec) {
  std::string s;
  const Field& F = *rec.field;
  s += "field " + std::to_string(F.characteristic()) + " " + std::to_string(F.degree());
  for (int c : F.modulus()) s += " " + std::to_string(c);
  s += "\ndim " + std::to_string(rec.dim) + "\n";
  if (!rec.name.empty()) s += "name " + rec.name + "\n";
  if (rec.expected_order) s += "order " + std::to_string(*rec.expected_order) + "\n";
  if (rec.expected_min_stabilizer_order)
    s += "min-stabilizer " + std::to_string(*rec.expected_min_stabilizer_order) + "\n";
  for (const auto& g : rec.generators) s += "\n" + format_matrix(F, g);
  return s;
}

// Permutation group file: "degree m" then one image list per line.
inline PermGroup parse_perm_group(const std::string& text, std::uint64_t cap = 2'000'000) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0, degree = -1;
  std::vector<Permutation> gens;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = raw.substr(0, raw.find('#'));
    auto toks = detail::tokens_with_columns(line);
    if (toks.empty()) continue;
    if (toks[0].second == "degree") {
      if (toks.size() != 2) throw ParseError(line_no, 1, "degree takes one value");
      degree = static_cast<int>(detail::parse_uint(toks[1].second, line_no, toks[1].first));
      continue;
    }
    if (degree < 0) throw ParseError(line_no, 1, "permutation before the degree header");
    if (static_cast<int>(toks.size()) != degree)
      throw ParseError(line_no, 1, "expected " + std::to_string(degree) + " images");
    std::vector<int> im;
    for (const auto& [col, tok] : toks)
      im.push_back(static_cast<int>(detail::parse_uint(tok, line_no, col)));
    try {
      gens.emplace_back(std::move(im));
    } catch (const Error& e) {
      throw ParseError(line_no, 1, e.what());
    }
  }
  if (degree < 0) throw ParseError(line_no, 1, "missing degree header");
  return PermGroup(degree, std::move(gens), cap);
}

inline PermGroup load_perm_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_perm_group(ss.str());
}

// ---------------------------------------------------------------------------
// Table 1: primitive groups with fewer than three regular orbits on ordered
// 3-partitions.

struct OrbitCount {
  std::uint64_t value = 0;
  bool at_least = false;  // "≥ value"

  std::string text() const {
    if (value == 0 && !at_least) return "-";
    return (at_least ? ">=" : "") + std::to_string(value);
  }
  bool matches(std::uint64_t observed) const {
    return at_least ? observed >= value : observed == value;
  }
};

struct Table1Row {
  std::string group;
  int degree = 0;
  int max_alternating_section = 0;
  OrbitCount on_p3;
  OrbitCount on_p4;
  std::uint64_t order = 0;
};

inline std::vector<Table1Row> table1_rows() {
  return {
      {"S3", 3, 3, {1, false}, {4, true}, 6},
      {"PSL(2,5)", 6, 5, {1, false}, {4, true}, 60},
      {"PGammaL(2,8)", 9, 3, {1, false}, {4, true}, 1512},
      {"S4", 4, 4, {0, false}, {1, false}, 24},
      {"PGL(2,5)", 6, 5, {0, false}, {4, true}, 120},
      {"PSL(3,2)", 7, 4, {0, false}, {4, true}, 168},
      {"M11", 11, 6, {0, false}, {4, true}, 7920},
      {"M12", 12, 6, {0, false}, {4, true}, 95040},
      {"ASL(3,2)", 8, 4, {0, false}, {1, false}, 1344},
  };
}

namespace detail {

// Points of PG(1,q): field codes 0..q-1, then q for infinity.
inline Permutation mobius(const Field& F, Elem a, Elem b, Elem c, Elem d, int frob = 0) {
  const int q = static_cast<int>(F.size());
  std::vector<int> im(q + 1);
  for (int z = 0; z <= q; ++z) {
    Elem num, den;
    if (z == q) {
      num = a;
      den = c;
    } else {
      const Elem w = F.frobenius(static_cast<Elem>(z), frob);
      num = F.add(F.mul(a, w), b);
      den = F.add(F.mul(c, w), d);
    }
    im[z] = den == 0 ? q : static_cast<int>(F.div(num, den));
  }
  return Permutation(std::move(im));
}

inline int vec_code(const Vector& v) {
  int c = 0;
  for (Elem e : v) c = c * 2 + static_cast<int>(e);
  return c;
}

}  // namespace detail

// Permutation representations of the Table 1 groups.
inline PermGroup table1_group(const std::string& name) {
  if (name == "S3")
    return PermGroup(3, {Permutation::from_cycles(3, {{0, 1}}), Permutation::from_cycles(3, {{0, 1, 2}})});
  if (name == "S4")
    return PermGroup(4, {Permutation::from_cycles(4, {{0, 1}}),
                         Permutation::from_cycles(4, {{0, 1, 2, 3}})});
  if (name == "PSL(2,5)" || name == "PGL(2,5)") {
    auto F = field_make(5, 1);
    std::vector<Permutation> gens{detail::mobius(*F, 1, 1, 0, 1), detail::mobius(*F, 0, 4, 1, 0),
                                  detail::mobius(*F, 4, 0, 0, 1)};
    if (name == "PGL(2,5)") gens.push_back(detail::mobius(*F, 2, 0, 0, 1));
    return PermGroup(6, gens);
  }
  if (name == "PGammaL(2,8)") {
    auto F = field_make(2, 3);
    const Elem one = F->one(), a = F->primitive();
    return PermGroup(9, {detail::mobius(*F, one, one, 0, one), detail::mobius(*F, a, 0, 0, one),
                         detail::mobius(*F, 0, one, one, 0), detail::mobius(*F, one, 0, 0, one, 1)});
  }
  if (name == "PSL(3,2)" || name == "ASL(3,2)") {
    auto F = field_make(2, 1);
    const bool affine = name == "ASL(3,2)";
    std::vector<Permutation> gens;
    for (const auto& g : gl_generators(*F, 3)) {
      std::vector<int> im(affine ? 8 : 7);
      for (int v = affine ? 0 : 1; v < 8; ++v) {
        const int img = detail::vec_code(apply(*F, g, vector_from_index(*F, 3, v)));
        im[affine ? v : v - 1] = affine ? img : img - 1;
      }
      gens.emplace_back(std::move(im));
    }
    if (affine) {
      std::vector<int> im(8);
      for (int v = 0; v < 8; ++v) im[v] = v ^ 4;
      gens.emplace_back(std::move(im));
    }
    return PermGroup(affine ? 8 : 7, gens);
  }
  if (name == "M11" || name == "M12") {
    // (1,...,11) and (3,7,11,8)(4,10,5,6); M12 adds (1,12)(2,11)(3,6)(4,8)(5,9)(7,10).
    const int m = name == "M11" ? 11 : 12;
    std::vector<Permutation> gens{
        Permutation::from_cycles(m, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}),
        Permutation::from_cycles(m, {{2, 6, 10, 7}, {3, 9, 4, 5}})};
    if (m == 12)
      gens.push_back(Permutation::from_cycles(12, {{0, 11}, {1, 10}, {2, 5}, {3, 7}, {4, 8}, {6, 9}}));
    return PermGroup(m, gens);
  }
  throw Error(Errc::PreconditionViolated, "unknown Table 1 group " + name);
}

// ---------------------------------------------------------------------------
// Table 2: coprime linear groups of quasisimple type with no regular orbit.

struct Table2Entry {
  int p = 0;
  std::string min_stabilizer;
  std::uint64_t min_stabilizer_order = 0;
};

struct Table2Row {
  std::string group;
  int n = 0;
  std::vector<Table2Entry> entries;
  bool bundled = false;  // generators shipped with the library
};

inline std::vector<Table2Row> table2_rows() {
  return {
      {"A5 x Z", 3, {{11, "C2", 2}}, false},
      {"A5.2 x Z", 4, {{7, "C2", 2}}, false},
      {"2.A5 * Z", 2,
       {{29, "C2", 2}, {41, "C2", 2}, {61, "C2", 2}, {11, "C5", 5}, {19, "C3", 3}, {31, "C3", 3}},
       true},
      {"Z.(8 * 2.A5).2", 4, {{7, "V4", 4}}, false},
      {"A6.2 x Z", 5, {{7, "C2", 2}}, false},
      {"2.A6.2 * Z", 4, {{7, "C3", 3}}, false},
      {"3.A6 * Z", 3, {{19, "C2", 2}, {31, "C2", 2}}, false},
      {"2.A7 * Z", 4, {{11, "C3", 3}}, false},
      {"L2(7) x Z", 3, {{11, "C2", 2}}, false},
      {"Z.(6 x L2(7)).2", 6, {{5, "C2", 2}}, false},
      {"U3(3) x Z", 7, {{5, "C2", 2}}, false},
      {"U3(3).2 x Z", 7, {{5, "C2", 2}}, false},
      {"(U3(3) x Z).2", 6, {{5, "S3", 6}}, false},
      {"U4(2) x Z", 5, {{7, "S4", 24}, {13, "V4", 4}, {19, "C2", 2}}, false},
      {"U4(2).2 x Z", 6, {{7, "D12", 12}, {11, "V4", 4}, {13, "C2", 2}}, false},
      {"2.U4(2) * Z", 4,
       {{7, "U72", 72}, {13, "U18", 18}, {19, "C3^2 or C9", 9}, {31, "C3", 3}, {37, "C2", 2}},
       false},
      {"6_1.U4(3).2_2 * Z", 6,
       {{13, "W(B3)", 48}, {19, "S3 x C2", 12}, {31, "V4", 4}, {37, "C2", 2}}, false},
      {"U5(2) x Z", 10, {{7, "V4", 4}}, false},
      {"Sp6(2) x Z", 7, {{11, "C2^3", 8}, {13, "V4", 4}, {17, "C2", 2}, {19, "C2", 2}}, false},
      {"2.O8+(2) * Z", 8,
       {{11, "W(B3)", 48}, {13, "S4", 24}, {17, "S3", 6}, {19, "V4", 4}, {23, "C2", 2}}, false},
      {"2.J2 * Z", 6, {{11, "S3", 6}}, false},
  };
}

// SL(2,5) ≤ SL(2,p) for p ≡ ±1 mod 5: A = [[0,-1],[1,0]] of order 4 and the
// first B = [[a,b],[c,1-a]] of determinant 1 with trace(AB) = b - c = τ,
// τ² = τ + 1. Then A, B, AB have orders 4, 6, 10 and generate 2.A5.
inline std::vector<Matrix> sl25_generators(const FieldPtr& field) {
  const Field& F = *field;
  require(F.degree() == 1, Errc::PreconditionViolated, "prime field expected");
  const Elem p = F.size();
  require(p % 5 == 1 || p % 5 == 4, Errc::PreconditionViolated, "needs p ≡ ±1 mod 5");
  Elem tau = p;
  for (Elem t = 0; t < p && tau == p; ++t)
    if (F.mul(t, t) == F.add(t, F.one())) tau = t;
  Matrix A(2, {0, F.neg(F.one()), F.one(), 0});
  for (Elem a = 0; a < p; ++a)
    for (Elem b = 0; b < p; ++b) {
      const Elem c = F.sub(b, tau), d = F.sub(F.one(), a);
      if (F.sub(F.mul(a, d), F.mul(b, c)) != F.one()) continue;
      Matrix B(2, {a, b, c, d});
      try {
        if (*group_close(field, 2, {A, B}, 120).order == 120) return {A, B};
      } catch (const CapExceeded&) {
      }
    }
  throw Error(Errc::TheoremViolation, "no SL(2,5) generators found");
}

// 2.A5 ⋆ Z ≤ GL(2,p), Z the full scalar group; order 120·(p-1)/2.
inline GroupRecord two_a5_star_z(int p) {
  auto F = field_make(p, 1);
  GroupRecord rec;
  rec.name = "2.A5*Z p=" + std::to_string(p);
  rec.field = F;
  rec.dim = 2;
  rec.generators = sl25_generators(F);
  rec.generators.push_back(scalar_matrix(*F, 2, F->primitive()));
  rec.expected_order = 120ULL * static_cast<std::uint64_t>(p - 1) / 2;
  for (const auto& row : table2_rows())
    if (row.group == "2.A5 * Z")
      for (const auto& e : row.entries)
        if (e.p == p) rec.expected_min_stabilizer_order = e.min_stabilizer_order;
  rec.table_row_ref = "Table 2: 2.A5 * Z, n=2";
  return rec;
}

struct MinStabilizer {
  std::uint64_t order = 0;
  Vector witness;
};

// Smallest |C_G(x)| over nonzero x with the lexicographically least witness.
// Vectors are visited in canonical order and each orbit is swept once, so the
// first vector seen in an orbit is its least element.
inline MinStabilizer min_stabilizer_scan(const MatrixGroup& G, std::uint64_t bound = 1'000'000) {
  const Field& F = G.F();
  const long double space = std::pow(static_cast<long double>(F.size()), G.n);
  if (space > static_cast<long double>(bound))
    throw Error(Errc::SearchSpaceTooLarge, "q^n exceeds the scan bound");
  const std::uint64_t total = static_cast<std::uint64_t>(space);
  const std::uint64_t order = G.size();
  std::vector<bool> seen(total, false);
  MinStabilizer best;
  best.order = UINT64_MAX;
  for (std::uint64_t i = 1; i < total; ++i) {
    if (seen[i]) continue;
    const Vector x = vector_from_index(F, G.n, i);
    const Orbit o = compute_orbit(F, G.generators, x);
    for (const auto& v : o.points) seen[vector_index(F, v)] = true;
    const std::uint64_t stab = order / o.points.size();
    if (stab < best.order) {
      best.order = stab;
      best.witness = x;
    }
  }
  return best;
}

}  // namespace cobase
