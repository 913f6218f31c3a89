#pragma once

// Permutation groups of small degree and regular (distinguishing) partitions.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cobase/error.hpp"
#include "cobase/field.hpp"

namespace cobase {

struct Permutation {
  std::vector<int> images;

  Permutation() = default;
  explicit Permutation(std::vector<int> im) : images(std::move(im)) {
    std::vector<char> seen(images.size(), 0);
    for (int v : images) {
      require(v >= 0 && v < static_cast<int>(images.size()) && !seen[v],
              Errc::PreconditionViolated, "image list is not a permutation");
      seen[v] = 1;
    }
  }

  static Permutation identity(int m) {
    std::vector<int> im(m);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  // Product of disjoint cycles on {0..m-1}.
  static Permutation from_cycles(int m, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> im(m);
    std::iota(im.begin(), im.end(), 0);
    for (const auto& c : cycles)
      for (std::size_t i = 0; i < c.size(); ++i) im[c[i]] = c[(i + 1) % c.size()];
    return Permutation(std::move(im));
  }

  int degree() const { return static_cast<int>(images.size()); }
  int operator()(int i) const { return images[i]; }
  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (images[i] != i) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

// (a·b)(i) = a(b(i))
inline Permutation compose(const Permutation& a, const Permutation& b) {
  std::vector<int> im(a.degree());
  for (int i = 0; i < a.degree(); ++i) im[i] = a(b(i));
  Permutation r;
  r.images = std::move(im);
  return r;
}

inline Permutation inverse(const Permutation& a) {
  Permutation r;
  r.images.assign(a.degree(), 0);
  for (int i = 0; i < a.degree(); ++i) r.images[a(i)] = i;
  return r;
}

inline std::uint64_t order(const Permutation& a) {
  std::uint64_t l = 1;
  std::vector<char> seen(a.degree(), 0);
  for (int i = 0; i < a.degree(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (int j = i; !seen[j]; j = a(j)) {
      seen[j] = 1;
      ++len;
    }
    l = std::lcm(l, len);
  }
  return l;
}

inline std::vector<std::vector<int>> cycles(const Permutation& a) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(a.degree(), 0);
  for (int i = 0; i < a.degree(); ++i) {
    if (seen[i]) continue;
    std::vector<int> c;
    for (int j = i; !seen[j]; j = a(j)) {
      seen[j] = 1;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string format_permutation(const Permutation& a) {
  std::string s;
  for (int i = 0; i < a.degree(); ++i) {
    if (i) s += ' ';
    s += std::to_string(a(i));
  }
  return s;
}

inline Permutation parse_permutation(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> im;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (...) {
      used = 0;
    }
    if (used != tok.size()) throw Error(Errc::ParseError, "bad permutation token '" + tok + "'");
    im.push_back(v);
  }
  return Permutation(std::move(im));
}

class PermGroup {
 public:
  PermGroup() = default;

  // Breadth-first closure, identity first.
  PermGroup(int degree, std::vector<Permutation> gens, std::uint64_t cap = 2'000'000)
      : degree_(degree), generators_(std::move(gens)) {
    for (const auto& g : generators_)
      require(g.degree() == degree, Errc::DimensionMismatch, "generator degree mismatch");
    add(Permutation::identity(degree));
    for (std::size_t i = 0; i < elements_.size(); ++i)
      for (const auto& s : generators_) {
        if (add(compose(elements_[i], s)) && elements_.size() > cap)
          throw CapExceeded(elements_.size(), cap);
      }
  }

  static PermGroup from_elements(int degree, const std::vector<Permutation>& elems) {
    PermGroup G;
    G.degree_ = degree;
    for (const auto& e : elems) G.add(e);
    G.generators_ = elems;
    return G;
  }

  int degree() const { return degree_; }
  std::uint64_t order() const { return elements_.size(); }
  const std::vector<Permutation>& generators() const { return generators_; }
  const std::vector<Permutation>& elements() const { return elements_; }
  bool contains(const Permutation& p) const { return index_.count(key(p)) > 0; }

 private:
  static std::string key(const Permutation& p) {
    return std::string(p.images.begin(), p.images.end());
  }
  bool add(const Permutation& p) {
    if (!index_.emplace(key(p), elements_.size()).second) return false;
    elements_.push_back(p);
    return true;
  }

  int degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline PermGroup setwise_stabilizer(const PermGroup& G, const std::vector<int>& X) {
  require(G.order() > 0, Errc::NotEnumerated, "group is not enumerated");
  std::vector<char> in(G.degree(), 0);
  for (int x : X) in[x] = 1;
  std::vector<Permutation> keep;
  for (const auto& g : G.elements()) {
    bool ok = true;
    for (int x : X) ok = ok && in[g(x)];
    if (ok) keep.push_back(g);
  }
  return PermGroup::from_elements(G.degree(), keep);
}

struct RegularPartition {
  std::vector<int> labels;  // part index of each point
  int t = 0;

  std::vector<std::vector<int>> parts() const {
    std::vector<std::vector<int>> out(t);
    for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(static_cast<int>(i));
    return out;
  }
};

inline std::string format_partition(const RegularPartition& P) {
  std::string s;
  for (std::size_t i = 0; i < P.labels.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(P.labels[i]);
  }
  return s;
}

// Elements preserving every part (the intersection of the setwise stabilizers).
inline std::vector<Permutation> partition_stabilizer(const PermGroup& G,
                                                     const RegularPartition& P) {
  require(static_cast<int>(P.labels.size()) == G.degree(), Errc::LabelCountMismatch,
          "label count does not match degree");
  std::vector<Permutation> out;
  for (const auto& g : G.elements()) {
    bool ok = true;
    for (int i = 0; i < G.degree() && ok; ++i) ok = P.labels[g(i)] == P.labels[i];
    if (ok) out.push_back(g);
  }
  return out;
}

inline bool is_regular_partition(const PermGroup& G, const RegularPartition& P) {
  return partition_stabilizer(G, P).size() == 1;
}

inline constexpr std::uint64_t kLabelSpaceBound = 100'000'000;

inline std::uint64_t label_space(int m, int t, std::uint64_t bound = kLabelSpaceBound) {
  std::uint64_t total = 1;
  for (int i = 0; i < m; ++i) {
    total *= static_cast<std::uint64_t>(t);
    if (total > bound) throw Error(Errc::SearchSpaceTooLarge, "t^m exceeds the label-space bound");
  }
  return total;
}

namespace detail {

// One generator per subgroup of prime order.
inline std::vector<Permutation> prime_order_generators(const PermGroup& G) {
  std::set<Permutation> seen;
  std::vector<Permutation> out;
  for (const auto& g : G.elements()) {
    const std::uint64_t o = order(g);
    if (!is_prime(o) || seen.count(g)) continue;
    out.push_back(g);
    Permutation p = g;
    for (std::uint64_t k = 1; k < o; ++k) {
      seen.insert(p);
      p = compose(p, g);
    }
  }
  return out;
}

}  // namespace detail

// Number of labelings in [t]^m whose stabilizer is trivial. A labeling has a
// nontrivial stabilizer iff some element of prime order fixes it, i.e. the
// labeling is constant on that element's cycles.
inline std::uint64_t count_regular_labelings(const PermGroup& G, int t,
                                             std::uint64_t bound = kLabelSpaceBound) {
  const int m = G.degree();
  const std::uint64_t total = label_space(m, t, bound);
  std::vector<std::uint64_t> pow(m + 1, 1);
  for (int i = 1; i <= m; ++i) pow[i] = pow[i - 1] * static_cast<std::uint64_t>(t);
  std::vector<bool> fixed(total, false);
  for (const auto& g : detail::prime_order_generators(G)) {
    const auto cyc = cycles(g);
    std::vector<std::uint64_t> weight(cyc.size(), 0);
    for (std::size_t c = 0; c < cyc.size(); ++c)
      for (int i : cyc[c]) weight[c] += pow[i];
    const std::uint64_t combos = label_space(static_cast<int>(cyc.size()), t, bound);
    for (std::uint64_t idx = 0; idx < combos; ++idx) {
      std::uint64_t code = 0, rest = idx;
      for (std::size_t c = 0; c < cyc.size(); ++c) {
        code += (rest % t) * weight[c];
        rest /= t;
      }
      fixed[code] = true;
    }
  }
  std::uint64_t free = 0;
  for (std::uint64_t i = 0; i < total; ++i) free += !fixed[i];
  return free;
}

// Orbits of G on ordered regular t-partitions; these orbits are free.
inline std::uint64_t regular_orbit_count(const PermGroup& G, int t,
                                         std::uint64_t bound = kLabelSpaceBound) {
  const std::uint64_t n = count_regular_labelings(G, t, bound);
  if (n % G.order() != 0)
    throw Error(Errc::TheoremViolation, "regular labelings not divisible by |G|");
  return n / G.order();
}

// Smallest t admitting a regular partition.
inline int distinguishing_number(const PermGroup& G, std::uint64_t bound = kLabelSpaceBound) {
  for (int t = 1; t <= std::max(1, G.degree()); ++t)
    if (count_regular_labelings(G, t, bound) > 0) return t;
  throw Error(Errc::TheoremViolation, "discrete partition is not regular");
}

inline RegularPartition labeling_from_index(int m, int t, std::uint64_t idx) {
  RegularPartition P;
  P.t = t;
  P.labels.resize(m);
  for (int i = 0; i < m; ++i) {
    P.labels[i] = static_cast<int>(idx % t);
    idx /= t;
  }
  return P;
}

// First regular labeling in base-t order (position 0 least significant),
// restricted to labelings using all t labels when m >= t. Splitting a part
// preserves regularity, so the restriction never loses existence.
inline RegularPartition regular_partition_coprime(const PermGroup& G, int t,
                                                  std::uint64_t bound = kLabelSpaceBound) {
  require(t >= 1, Errc::PreconditionViolated, "t must be positive");
  require(G.order() % static_cast<std::uint64_t>(t) != 0 || (t == 1 && G.order() == 1),
          Errc::PreconditionViolated, "t divides |G|");
  const int m = G.degree();
  const std::uint64_t total = label_space(m, t, bound);
  const bool surjective = m >= t;
  std::vector<Permutation> nontrivial;
  for (const auto& g : G.elements())
    if (!g.is_identity()) nontrivial.push_back(g);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    RegularPartition P = labeling_from_index(m, t, idx);
    if (surjective) {
      std::vector<char> used(t, 0);
      for (int l : P.labels) used[l] = 1;
      if (std::count(used.begin(), used.end(), 1) != t) continue;
    }
    bool regular = true;
    for (const auto& g : nontrivial) {
      bool fixes = true;
      for (int i = 0; i < m && fixes; ++i) fixes = P.labels[g(i)] == P.labels[i];
      if (fixes) {
        regular = false;
        break;
      }
    }
    if (regular) return P;
  }
  throw Error(Errc::TheoremViolation, "no regular partition with " + std::to_string(t) + " parts");
}

}  // namespace cobase
