#pragma once

// Matrix groups over GF(q): closure, orbits, vector stabilizers (by filtering
// or by Schreier generators), base verification and brute-force searches.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cobase/error.hpp"
#include "cobase/field.hpp"
#include "cobase/matrix.hpp"
#include "cobase/parallel.hpp"

namespace cobase {

// Hash set of n×n matrices stored packed, one to three bytes per entry code.
class ElementSet {
 public:
  ElementSet(int n, Elem q)
      : n_(n),
        width_(q <= 256 ? 1 : (q <= 65536 ? 2 : 3)),
        stride_(static_cast<std::size_t>(n) * n * width_),
        slots_(64, 0) {}

  int dim() const { return n_; }
  std::size_t size() const { return count_; }

  Matrix at(std::size_t i) const {
    Matrix m(n_);
    const std::uint8_t* src = &data_[i * stride_];
    for (std::size_t k = 0; k < m.a.size(); ++k) {
      Elem e = 0;
      for (int b = 0; b < width_; ++b) e = (e << 8) | src[k * width_ + b];
      m.a[k] = e;
    }
    return m;
  }

  std::int64_t find(const Matrix& m) const {
    Buffer buf(stride_);
    pack(m, buf.data());
    const std::uint64_t h = hash(buf.data());
    std::size_t mask = slots_.size() - 1, s = h & mask;
    while (slots_[s] != 0) {
      const std::size_t idx = slots_[s] - 1;
      if (std::memcmp(&data_[idx * stride_], buf.data(), stride_) == 0)
        return static_cast<std::int64_t>(idx);
      s = (s + 1) & mask;
    }
    return -1;
  }

  bool contains(const Matrix& m) const { return find(m) >= 0; }

  // Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Matrix& m) {
    require(m.n == n_, Errc::DimensionMismatch, "element dimension mismatch");
    if ((count_ + 1) * 2 > slots_.size()) grow();
    Buffer buf(stride_);
    pack(m, buf.data());
    const std::uint64_t h = hash(buf.data());
    std::size_t mask = slots_.size() - 1, s = h & mask;
    while (slots_[s] != 0) {
      const std::size_t idx = slots_[s] - 1;
      if (std::memcmp(&data_[idx * stride_], buf.data(), stride_) == 0) return {idx, false};
      s = (s + 1) & mask;
    }
    data_.insert(data_.end(), buf.data(), buf.data() + stride_);
    slots_[s] = static_cast<std::uint32_t>(++count_);
    return {count_ - 1, true};
  }

 private:
  // Stack storage for the common case, heap above it.
  class Buffer {
   public:
    explicit Buffer(std::size_t n) {
      if (n > sizeof(local_)) heap_.resize(n);
    }
    std::uint8_t* data() { return heap_.empty() ? local_ : heap_.data(); }

   private:
    std::uint8_t local_[512];
    std::vector<std::uint8_t> heap_;
  };

  void pack(const Matrix& m, std::uint8_t* out) const {
    for (std::size_t k = 0; k < m.a.size(); ++k)
      for (int b = 0; b < width_; ++b)
        out[k * width_ + b] = static_cast<std::uint8_t>(m.a[k] >> (8 * (width_ - 1 - b)));
  }

  std::uint64_t hash(const std::uint8_t* p) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < stride_; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
    return h ^ (h >> 29);
  }

  void grow() {
    std::vector<std::uint32_t> fresh(slots_.size() * 2, 0);
    const std::size_t mask = fresh.size() - 1;
    for (std::size_t i = 0; i < count_; ++i) {
      std::size_t s = hash(&data_[i * stride_]) & mask;
      while (fresh[s] != 0) s = (s + 1) & mask;
      fresh[s] = static_cast<std::uint32_t>(i + 1);
    }
    slots_ = std::move(fresh);
  }

  int n_;
  int width_;
  std::size_t stride_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> data_;
  std::vector<std::uint32_t> slots_;
};

struct MatrixGroup {
  FieldPtr field;
  int n = 0;
  std::vector<Matrix> generators;
  std::optional<std::uint64_t> order;
  std::shared_ptr<const ElementSet> elements;
  std::string description;

  const Field& F() const { return *field; }
  bool enumerated() const { return elements != nullptr; }
  std::uint64_t size() const {
    if (!order) throw Error(Errc::OrderUnknown, "group order unknown");
    return *order;
  }
};

inline void check_generators(const Field& F, int n, const std::vector<Matrix>& gens) {
  for (const auto& g : gens) {
    require(g.n == n, Errc::DimensionMismatch, "generator dimension mismatch");
    if (det(F, g) == 0) throw Error(Errc::SingularGenerator, "generator is singular");
  }
}

// Unenumerated group from generators; order may be supplied when certified
// by other means.
inline MatrixGroup make_group(FieldPtr field, int n, std::vector<Matrix> gens,
                              std::string description = {},
                              std::optional<std::uint64_t> order = std::nullopt) {
  check_generators(*field, n, gens);
  MatrixGroup G;
  G.field = std::move(field);
  G.n = n;
  G.generators = std::move(gens);
  G.order = order;
  G.description = std::move(description);
  return G;
}

// Breadth-first closure: identity first, then right multiplication by
// generators in order.
inline MatrixGroup group_close(FieldPtr field, int n, std::vector<Matrix> gens,
                               std::uint64_t cap = Options{}.cap, std::string description = {}) {
  require(cap >= 1, Errc::PreconditionViolated, "cap must be positive");
  const Field& F = *field;
  check_generators(F, n, gens);
  auto set = std::make_shared<ElementSet>(n, F.size());
  set->insert(identity(F, n));
  for (std::size_t i = 0; i < set->size(); ++i) {
    const Matrix e = set->at(i);
    for (const auto& s : gens) {
      auto [idx, fresh] = set->insert(mul(F, e, s));
      (void)idx;
      if (fresh && set->size() > cap) throw CapExceeded(set->size(), cap);
    }
  }
  MatrixGroup G;
  G.field = std::move(field);
  G.n = n;
  G.generators = std::move(gens);
  G.order = set->size();
  G.elements = std::move(set);
  G.description = std::move(description);
  return G;
}

inline MatrixGroup group_close(const MatrixGroup& G, std::uint64_t cap = Options{}.cap) {
  if (G.enumerated()) return G;
  MatrixGroup H = group_close(G.field, G.n, G.generators, cap, G.description);
  if (G.order && *G.order != *H.order)
    throw Error(Errc::OrderMismatch, "closure has order " + std::to_string(*H.order) +
                                         ", expected " + std::to_string(*G.order));
  return H;
}

// Enumerates ⟨H, extra⟩ from an enumerated H as a union of cosets x·H.
inline MatrixGroup extend_closure(const MatrixGroup& H, const std::vector<Matrix>& extra,
                                  std::uint64_t cap) {
  const Field& F = H.F();
  check_generators(F, H.n, extra);
  std::vector<Matrix> gens = H.generators;
  gens.insert(gens.end(), extra.begin(), extra.end());
  std::vector<Matrix> base(H.elements->size());
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = H.elements->at(i);
  auto set = std::make_shared<ElementSet>(*H.elements);
  std::vector<Matrix> reps{identity(F, H.n)};
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (const auto& s : gens) {
      Matrix y = mul(F, s, reps[r]);
      if (set->contains(y)) continue;
      for (const auto& h : base) set->insert(mul(F, y, h));
      if (set->size() > cap) throw CapExceeded(set->size(), cap);
      reps.push_back(std::move(y));
    }
  }
  MatrixGroup G;
  G.field = H.field;
  G.n = H.n;
  G.generators = std::move(gens);
  G.order = set->size();
  G.elements = std::move(set);
  G.description = H.description;
  return G;
}

inline MatrixGroup trivial_group(FieldPtr field, int n) {
  return group_close(std::move(field), n, {}, 1);
}

// Enumerated subgroup from an explicit element list that is already closed.
// Generators are chosen greedily in list order.
inline MatrixGroup subgroup_from_elements(FieldPtr field, int n, const std::vector<Matrix>& elems,
                                          std::uint64_t cap = Options{}.cap) {
  MatrixGroup K = trivial_group(field, n);
  for (const auto& g : elems) {
    if (K.elements->size() == elems.size()) break;
    if (!K.elements->contains(g)) K = extend_closure(K, {g}, cap);
  }
  require(K.elements->size() == elems.size(), Errc::PreconditionViolated,
          "element list is not a subgroup");
  // keep the caller's element order
  auto set = std::make_shared<ElementSet>(n, field->size());
  for (const auto& g : elems) set->insert(g);
  K.elements = std::move(set);
  return K;
}

inline std::vector<Matrix> all_elements(const MatrixGroup& G) {
  require(G.enumerated(), Errc::NotEnumerated, "group is not enumerated");
  std::vector<Matrix> out(G.elements->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = G.elements->at(i);
  return out;
}

inline bool coprimality_check(const MatrixGroup& G) {
  if (!G.order) throw Error(Errc::OrderUnknown, "group order unknown");
  return *G.order % static_cast<std::uint64_t>(G.F().characteristic()) != 0;
}

// Keys for vectors: base-q integer when it fits, byte string otherwise.
class VectorIndex {
 public:
  VectorIndex(const Field& F, int n) : F_(&F), n_(n) {
    long double bits = n * std::log2(static_cast<long double>(F.size()));
    small_ = bits < 63.0L;
  }

  std::int64_t find(const Vector& v) const {
    if (small_) {
      auto it = small_map_.find(vector_index(*F_, v));
      return it == small_map_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }
    auto it = big_map_.find(canonical_bytes(*F_, v));
    return it == big_map_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }

  // Inserts with the given value if absent; returns (value, inserted).
  std::pair<std::uint32_t, bool> insert(const Vector& v, std::uint32_t value) {
    if (small_) {
      auto [it, fresh] = small_map_.emplace(vector_index(*F_, v), value);
      return {it->second, fresh};
    }
    auto [it, fresh] = big_map_.emplace(canonical_bytes(*F_, v), value);
    return {it->second, fresh};
  }

  std::size_t size() const { return small_ ? small_map_.size() : big_map_.size(); }

 private:
  const Field* F_;
  int n_;
  bool small_ = true;
  std::unordered_map<std::uint64_t, std::uint32_t> small_map_;
  std::unordered_map<std::string, std::uint32_t> big_map_;
};

// Orbit with a Schreier vector: points[i] = gens[via[i]] · points[parent[i]].
struct Orbit {
  std::vector<Vector> points;
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> via;
};

inline Orbit compute_orbit(const Field& F, const std::vector<Matrix>& gens, const Vector& x,
                           std::uint64_t limit = std::uint64_t{1} << 31) {
  Orbit o;
  VectorIndex index(F, static_cast<int>(x.size()));
  o.points.push_back(x);
  o.parent.push_back(-1);
  o.via.push_back(-1);
  index.insert(x, 0);
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Vector y = apply(F, gens[s], o.points[i]);
      auto [idx, fresh] = index.insert(y, static_cast<std::uint32_t>(o.points.size()));
      (void)idx;
      if (!fresh) continue;
      o.points.push_back(std::move(y));
      o.parent.push_back(static_cast<std::int32_t>(i));
      o.via.push_back(static_cast<std::int32_t>(s));
      if (o.points.size() > limit) throw CapExceeded(o.points.size(), limit);
    }
  }
  return o;
}

enum class VerifyMethod { FullEnumeration, SchreierStabilizer };
enum class MethodChoice { Auto, Enumerate, Schreier };

inline std::string method_name(VerifyMethod m) {
  return m == VerifyMethod::FullEnumeration ? "FullEnumeration" : "SchreierStabilizer";
}

struct StabilizerResult {
  MatrixGroup group;  // enumerated
  std::uint64_t orbit_size = 0;
  VerifyMethod method = VerifyMethod::FullEnumeration;
};

// Filters an enumerated group and checks |orbit|·|stabilizer| = |G| against an
// independent orbit computation.
inline StabilizerResult stabilizer_by_filter(const MatrixGroup& G, const Vector& x,
                                             const Options& opt = {}) {
  require(G.enumerated(), Errc::NotEnumerated, "filtering needs an enumerated group");
  require(static_cast<int>(x.size()) == G.n, Errc::DimensionMismatch, "vector length mismatch");
  const Field& F = G.F();
  const std::uint64_t total = G.elements->size();
  std::vector<std::vector<std::uint32_t>> hits(chunk_count(total, opt.threads));
  parallel_chunks(total, opt.threads, [&](std::size_t c, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i)
      if (apply(F, G.elements->at(i), x) == x) hits[c].push_back(static_cast<std::uint32_t>(i));
  });
  std::vector<Matrix> elems;
  for (const auto& h : hits)
    for (auto i : h) elems.push_back(G.elements->at(i));
  StabilizerResult r;
  r.group = subgroup_from_elements(G.field, G.n, elems, opt.cap);
  r.group.description = "stabilizer";
  if (!G.generators.empty() || total == 1) {
    r.orbit_size = compute_orbit(F, G.generators, x).points.size();
    if (r.orbit_size * elems.size() != total)
      throw Error(Errc::TheoremViolation, "orbit-stabilizer identity failed");
  } else {
    r.orbit_size = total / elems.size();
  }
  r.method = VerifyMethod::FullEnumeration;
  return r;
}

// Orbit-stabilizer with Schreier generators. When |G| is known the sweep
// stops as soon as |H|·|orbit| = |G|; otherwise every Schreier generator is
// tried.
inline StabilizerResult stabilizer_by_schreier(const MatrixGroup& G, const Vector& x,
                                               const Options& opt = {}) {
  require(static_cast<int>(x.size()) == G.n, Errc::DimensionMismatch, "vector length mismatch");
  const Field& F = G.F();
  const auto& gens = G.generators;
  std::vector<Matrix> inv_gens;
  for (const auto& g : gens) inv_gens.push_back(inverse(F, g));
  Orbit o = compute_orbit(F, gens, x);
  VectorIndex index(F, G.n);
  for (std::size_t i = 0; i < o.points.size(); ++i)
    index.insert(o.points[i], static_cast<std::uint32_t>(i));

  std::optional<std::uint64_t> target;
  if (G.order) {
    if (*G.order % o.points.size() != 0)
      throw Error(Errc::OrderMismatch, "orbit size does not divide the group order");
    target = *G.order / o.points.size();
    if (*target > opt.cap) throw CapExceeded(*target, opt.cap);
  }

  auto transversal = [&](std::size_t i) {
    Matrix t = identity(F, G.n);
    while (o.parent[i] >= 0) {
      t = mul(F, t, gens[o.via[i]]);
      i = static_cast<std::size_t>(o.parent[i]);
    }
    return t;  // maps x to points[i]
  };
  auto transversal_inv = [&](std::size_t i) {
    Matrix t = identity(F, G.n);
    while (o.parent[i] >= 0) {
      t = mul(F, inv_gens[o.via[i]], t);
      i = static_cast<std::size_t>(o.parent[i]);
    }
    return t;
  };

  MatrixGroup H = trivial_group(G.field, G.n);
  const std::uint64_t pairs = o.points.size() * gens.size();
  if (!(target && *target == 1) && pairs > 0) {
    // Visit all (point, generator) pairs in a scrambled but fixed order.
    std::uint64_t stride = static_cast<std::uint64_t>(pairs * 0.6180339887) | 1;
    while (std::gcd(stride, pairs) != 1) stride += 2;
    std::uint64_t pos = 0;
    for (std::uint64_t t = 0; t < pairs; ++t, pos = (pos + stride) % pairs) {
      if (target && H.elements->size() == *target) break;
      const std::size_t i = pos / gens.size(), s = pos % gens.size();
      const Vector img = apply(F, gens[s], o.points[i]);
      const auto j = static_cast<std::size_t>(index.find(img));
      if (o.parent[j] == static_cast<std::int32_t>(i) && o.via[j] == static_cast<std::int32_t>(s))
        continue;
      Matrix sg = mul(F, transversal_inv(j), mul(F, gens[s], transversal(i)));
      if (H.elements->contains(sg)) continue;
      H = extend_closure(H, {sg}, opt.cap);
    }
  }
  if (target && H.elements->size() != *target)
    throw Error(Errc::TheoremViolation, "Schreier generators did not reach the expected order");
  H.description = "stabilizer";
  StabilizerResult r;
  r.orbit_size = o.points.size();
  r.group = std::move(H);
  r.method = VerifyMethod::SchreierStabilizer;
  return r;
}

inline StabilizerResult vector_stabilizer(const MatrixGroup& G, const Vector& x,
                                          MethodChoice how = MethodChoice::Auto,
                                          const Options& opt = {}) {
  switch (how) {
    case MethodChoice::Schreier:
      return stabilizer_by_schreier(G, x, opt);
    case MethodChoice::Enumerate:
      return stabilizer_by_filter(group_close(G, opt.cap), x, opt);
    case MethodChoice::Auto:
      break;
  }
  if (G.enumerated()) return stabilizer_by_filter(G, x, opt);
  if (G.order && *G.order <= opt.cap) return stabilizer_by_filter(group_close(G, opt.cap), x, opt);
  if (!G.order) {
    try {
      return stabilizer_by_filter(group_close(G, opt.cap), x, opt);
    } catch (const CapExceeded&) {
    }
  }
  return stabilizer_by_schreier(G, x, opt);
}

struct IteratedStabilizer {
  MatrixGroup group;
  std::vector<std::uint64_t> order_chain;  // |G|, |C_G(v1)|, |C_G(v1) ∩ C_G(v2)|, ...
  VerifyMethod method = VerifyMethod::FullEnumeration;
};

inline IteratedStabilizer iterated_stabilizer(const MatrixGroup& G,
                                              const std::vector<Vector>& vectors,
                                              MethodChoice how = MethodChoice::Auto,
                                              const Options& opt = {}) {
  IteratedStabilizer out;
  MatrixGroup cur = G;
  if (vectors.empty()) {
    cur = group_close(G, opt.cap);
    out.order_chain.push_back(*cur.order);
    out.group = cur;
    return out;
  }
  bool first = true;
  for (const auto& v : vectors) {
    StabilizerResult r = first ? vector_stabilizer(cur, v, how, opt) : stabilizer_by_filter(cur, v, opt);
    if (first) {
      out.method = r.method;
      out.order_chain.push_back(r.orbit_size * r.group.elements->size());
      if (G.order && *G.order != out.order_chain.back())
        throw Error(Errc::OrderMismatch, "orbit-stabilizer identity failed");
    }
    out.order_chain.push_back(r.group.elements->size());
    cur = std::move(r.group);
    first = false;
  }
  out.group = std::move(cur);
  return out;
}

struct BaseCertificate {
  std::string group_ref;
  std::string field;
  int dim = 0;
  std::vector<Vector> vectors;
  VerifyMethod method = VerifyMethod::FullEnumeration;
  bool verified = false;
  std::vector<std::uint64_t> order_chain;
  std::map<std::string, std::string> metadata;
};

inline BaseCertificate verify_base(const MatrixGroup& G, const std::vector<Vector>& vectors,
                                   MethodChoice how = MethodChoice::Auto, const Options& opt = {}) {
  require(!vectors.empty() && vectors.size() <= 3, Errc::PreconditionViolated,
          "a certificate holds one to three vectors");
  for (const auto& v : vectors)
    require(static_cast<int>(v.size()) == G.n, Errc::DimensionMismatch, "vector length mismatch");
  IteratedStabilizer it = iterated_stabilizer(G, vectors, how, opt);
  BaseCertificate c;
  c.group_ref = G.description;
  c.field = G.F().spec_text();
  c.dim = G.n;
  c.vectors = vectors;
  c.method = it.method;
  c.order_chain = it.order_chain;
  c.verified = it.order_chain.back() == 1;
  return c;
}

inline bool fixes_line(const Field& F, const Matrix& g, const Vector& v) {
  const Vector w = apply(F, g, v);
  std::size_t i = 0;
  while (i < v.size() && v[i] == 0) ++i;
  if (i == v.size()) return true;
  const Elem lambda = F.div(w[i], v[i]);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (w[j] != F.mul(lambda, v[j])) return false;
  return true;
}

// Every element fixing each line ⟨v⟩ is scalar.
inline bool strong_base_check(const MatrixGroup& G, const std::vector<Vector>& vectors) {
  require(G.enumerated(), Errc::NotEnumerated, "group is not enumerated");
  for (std::size_t i = 0; i < G.elements->size(); ++i) {
    const Matrix g = G.elements->at(i);
    if (is_scalar(g)) continue;
    bool all = true;
    for (const auto& v : vectors)
      if (!fixes_line(G.F(), g, v)) {
        all = false;
        break;
      }
    if (all) return false;
  }
  return true;
}

struct BaseSearchResult {
  int size = 0;
  std::vector<Vector> witness;
};

namespace detail {

// Smallest s with s vectors v_1 < ... < v_s (canonical order) such that no
// nontrivial element fixes all of them under `fixes`; the first found is the
// lexicographically least witness. Only candidates that shrink the running
// stabilizer are extended.
template <typename Fixes, typename Trivial>
BaseSearchResult base_search(const MatrixGroup& G, const std::vector<Vector>& candidates,
                             int max_size, Fixes fixes, Trivial trivial) {
  const auto elems = all_elements(G);
  std::vector<std::size_t> start;
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (!trivial(elems[i])) start.push_back(i);
  BaseSearchResult res;
  if (start.empty()) return res;
  std::vector<std::size_t> chosen;
  std::function<bool(int, std::size_t, const std::vector<std::size_t>&)> dfs =
      [&](int remaining, std::size_t from, const std::vector<std::size_t>& stab) -> bool {
    for (std::size_t c = from; c < candidates.size(); ++c) {
      std::vector<std::size_t> next;
      for (auto e : stab)
        if (fixes(elems[e], candidates[c])) next.push_back(e);
      if (next.size() == stab.size()) continue;
      chosen.push_back(c);
      if (next.empty()) return true;
      if (remaining > 1 && dfs(remaining - 1, c + 1, next)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (int s = 1; s <= max_size; ++s) {
    chosen.clear();
    if (dfs(s, 0, start)) {
      res.size = s;
      for (auto c : chosen) res.witness.push_back(candidates[c]);
      return res;
    }
  }
  throw Error(Errc::SearchSpaceTooLarge, "no base of size <= " + std::to_string(max_size));
}

inline std::vector<Vector> nonzero_vectors(const Field& F, int n, std::uint64_t bound) {
  long double total = std::pow(static_cast<long double>(F.size()), n);
  if (total > static_cast<long double>(bound))
    throw Error(Errc::SearchSpaceTooLarge, "q^n exceeds the search bound");
  std::vector<Vector> out;
  for (std::uint64_t i = 1; i < static_cast<std::uint64_t>(total); ++i)
    out.push_back(vector_from_index(F, n, i));
  return out;
}

}  // namespace detail

inline constexpr std::uint64_t kSearchBound = std::uint64_t{1} << 20;

// Exact b(G) with the lexicographically least witness.
inline BaseSearchResult minimal_base_size(const MatrixGroup& G, int max_size = 8,
                                          std::uint64_t bound = kSearchBound) {
  require(G.enumerated(), Errc::NotEnumerated, "group is not enumerated");
  const Field& F = G.F();
  const auto cands = detail::nonzero_vectors(F, G.n, bound);
  return detail::base_search(
      G, cands, max_size, [&](const Matrix& g, const Vector& v) { return apply(F, g, v) == v; },
      [&](const Matrix& g) { return is_identity(F, g); });
}

// Exact b*(G); candidates are line representatives (first nonzero entry 1).
inline BaseSearchResult minimal_strong_base_size(const MatrixGroup& G, int max_size = 8,
                                                 std::uint64_t bound = kSearchBound) {
  require(G.enumerated(), Errc::NotEnumerated, "group is not enumerated");
  const Field& F = G.F();
  std::vector<Vector> cands;
  for (auto& v : detail::nonzero_vectors(F, G.n, bound)) {
    std::size_t i = 0;
    while (v[i] == 0) ++i;
    if (v[i] == F.one()) cands.push_back(std::move(v));
  }
  return detail::base_search(
      G, cands, max_size, [&](const Matrix& g, const Vector& v) { return fixes_line(F, g, v); },
      [&](const Matrix& g) { return is_scalar(g); });
}

inline std::vector<Vector> fixed_space(const MatrixGroup& H) {
  return fixed_space(H.F(), H.generators, H.n);
}

inline MatrixGroup filter_subgroup(const MatrixGroup& ambient,
                                   const std::function<bool(const Matrix&)>& keep,
                                   const Options& opt = {}) {
  require(ambient.enumerated(), Errc::NotEnumerated, "ambient group is not enumerated");
  const std::uint64_t total = ambient.elements->size();
  std::vector<std::vector<std::uint32_t>> hits(chunk_count(total, opt.threads));
  parallel_chunks(total, opt.threads, [&](std::size_t c, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i)
      if (keep(ambient.elements->at(i))) hits[c].push_back(static_cast<std::uint32_t>(i));
  });
  std::vector<Matrix> elems;
  for (const auto& h : hits)
    for (auto i : h) elems.push_back(ambient.elements->at(i));
  return subgroup_from_elements(ambient.field, ambient.n, elems, opt.cap);
}

inline MatrixGroup centralizer_bruteforce(const std::vector<Matrix>& gens,
                                          const MatrixGroup& ambient, const Options& opt = {}) {
  const Field& F = ambient.F();
  MatrixGroup C = filter_subgroup(
      ambient,
      [&](const Matrix& g) {
        for (const auto& s : gens)
          if (mul(F, g, s) != mul(F, s, g)) return false;
        return true;
      },
      opt);
  C.description = "centralizer";
  return C;
}

inline MatrixGroup normalizer_bruteforce(const MatrixGroup& N, const MatrixGroup& ambient,
                                         const Options& opt = {}) {
  require(N.enumerated(), Errc::NotEnumerated, "normal subgroup is not enumerated");
  const Field& F = ambient.F();
  MatrixGroup R = filter_subgroup(
      ambient,
      [&](const Matrix& g) {
        const Matrix gi = inverse(F, g);
        for (const auto& s : N.generators)
          if (!N.elements->contains(mul(F, mul(F, g, s), gi))) return false;
        return true;
      },
      opt);
  R.description = "normalizer";
  return R;
}

struct MinimalSubgroup {
  Matrix generator;
  int prime = 0;
  std::vector<Matrix> elements;  // generator^0 .. generator^(prime-1)
};

// Cyclic subgroups of prime order, each listed once, in order of their first
// element in G's enumeration.
inline std::vector<MinimalSubgroup> minimal_subgroups(const MatrixGroup& G) {
  require(G.enumerated(), Errc::NotEnumerated, "group is not enumerated");
  const Field& F = G.F();
  ElementSet seen(G.n, F.size());
  std::vector<MinimalSubgroup> out;
  for (std::size_t i = 0; i < G.elements->size(); ++i) {
    const Matrix g = G.elements->at(i);
    if (is_identity(F, g) || seen.contains(g)) continue;
    const std::uint64_t ord = element_order(F, g, G.elements->size());
    if (!is_prime(ord)) continue;
    MinimalSubgroup m;
    m.generator = g;
    m.prime = static_cast<int>(ord);
    Matrix p = identity(F, G.n);
    for (std::uint64_t k = 0; k < ord; ++k) {
      m.elements.push_back(p);
      if (k > 0) seen.insert(p);
      p = mul(F, p, g);
    }
    out.push_back(std::move(m));
  }
  return out;
}

// Sylow p-subgroup of an enumerated group, grown from the identity by adding
// p-parts of normalizing elements.
inline MatrixGroup sylow_subgroup(const MatrixGroup& G, std::uint64_t p, const Options& opt = {}) {
  require(G.enumerated(), Errc::NotEnumerated, "group is not enumerated");
  require(is_prime(p), Errc::NonPrime, "sylow prime must be prime");
  const Field& F = G.F();
  std::uint64_t target = 1, rest = G.elements->size();
  while (rest % p == 0) {
    target *= p;
    rest /= p;
  }
  const auto elems = all_elements(G);
  MatrixGroup P = trivial_group(G.field, G.n);
  while (P.elements->size() < target) {
    bool grew = false;
    for (const auto& g : elems) {
      if (P.elements->contains(g)) continue;
      const Matrix gi = inverse(F, g);
      bool normalizes = true;
      for (const auto& s : P.generators)
        if (!P.elements->contains(mul(F, mul(F, g, s), gi))) {
          normalizes = false;
          break;
        }
      if (!normalizes) continue;
      std::uint64_t ord = element_order(F, g, elems.size()), m = ord;
      while (m % p == 0) m /= p;
      const Matrix h = power(F, g, m);
      if (P.elements->contains(h)) continue;
      P = extend_closure(P, {h}, opt.cap);
      grew = true;
      break;
    }
    if (!grew) throw Error(Errc::TheoremViolation, "Sylow growth stalled");
  }
  P.description = "sylow-" + std::to_string(p);
  return P;
}

inline std::uint64_t gl_order(int n, std::uint64_t q) {
  unsigned __int128 order = 1, qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  unsigned __int128 qi = 1;
  for (int i = 0; i < n; ++i) {
    order *= (qn - qi);
    qi *= q;
    if (order > static_cast<unsigned __int128>(UINT64_MAX))
      throw Error(Errc::SearchSpaceTooLarge, "|GL(n,q)| exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(order);
}

// diag(α,1,...,1) and the transvections I + α^t E_ij (t < f).
inline std::vector<Matrix> gl_generators(const Field& F, int n) {
  std::vector<Matrix> gens;
  Matrix d = identity(F, n);
  d(0, 0) = F.primitive();
  if (F.size() > 2) gens.push_back(d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int t = 0; t < F.degree(); ++t) {
        Matrix m = identity(F, n);
        m(i, j) = F.pow(F.primitive(), t);
        gens.push_back(m);
      }
    }
  return gens;
}

inline MatrixGroup general_linear_group(FieldPtr field, int n, std::uint64_t cap = Options{}.cap) {
  auto gens = gl_generators(*field, n);
  const std::uint64_t q = field->size();
  MatrixGroup G = group_close(field, n, std::move(gens), cap,
                              "GL(" + std::to_string(n) + "," + std::to_string(q) + ")");
  if (*G.order != gl_order(n, q))
    throw Error(Errc::OrderMismatch, "GL generators closed to the wrong order");
  return G;
}

}  // namespace cobase
