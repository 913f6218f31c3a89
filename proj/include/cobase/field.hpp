#pragma once

// Arithmetic in GF(p^f).
//
// Elements are stored as a single integer code: the coefficient tuple
// (c_0, c_1, ..., c_{f-1}) of c_0 + c_1 x + ... read as a base-p numeral with
// c_0 the most significant digit. Integer order on codes is therefore the
// lexicographic order on coefficient tuples compared constant term first, and
// every search that walks "in canonical order" simply counts codes upward.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cobase/error.hpp"

namespace cobase {

using Elem = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace poly {

// Polynomials over Z/p as coefficient vectors, constant term first, no
// trailing zeros (the zero polynomial is empty).
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  long long r = 1, b = a % p, e = p - 2;
  if (b < 0) b += p;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

inline Poly sub(Poly a, const Poly& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  trim(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<int>((r[i + j] + 1LL * a[i] * b[j]) % p);
  trim(r);
  return r;
}

inline Poly mod(Poly a, const Poly& m, int p) {
  trim(a);
  const int lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const long long c = 1LL * a.back() * lead_inv % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = static_cast<int>(((a[shift + i] - c * m[i]) % p + p) % p);
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, int p) {
  Poly r{1};
  base = mod(base, m, p);
  while (e > 0) {
    if (e & 1) r = mod(mul(r, base, p), m, p);
    base = mod(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

}  // namespace poly

// Ben-Or: a monic polynomial g of degree f is irreducible iff
// gcd(x^(p^i) - x, g) = 1 for every 1 <= i <= f/2.
inline bool is_irreducible(int p, const std::vector<int>& monic) {
  poly::Poly g = monic;
  poly::trim(g);
  const int f = static_cast<int>(g.size()) - 1;
  if (f < 1) return false;
  if (f == 1) return true;
  const poly::Poly x{0, 1};
  poly::Poly xp = x;
  for (int i = 1; i <= f / 2; ++i) {
    xp = poly::powmod(xp, static_cast<std::uint64_t>(p), g, p);
    poly::Poly d = poly::gcd(g, poly::sub(xp, x, p), p);
    if (d.size() > 1) return false;
  }
  return true;
}

class Field {
 public:
  static constexpr std::uint64_t kDefaultBound = std::uint64_t{1} << 20;

  // modulus: monic, degree f, constant term first.
  Field(int p, std::vector<int> modulus, std::uint64_t bound = kDefaultBound)
      : p_(p), modulus_(std::move(modulus)) {
    require(p >= 2 && is_prime(static_cast<std::uint64_t>(p)), Errc::NonPrime,
            std::to_string(p) + " is not prime");
    require(modulus_.size() >= 2 && modulus_.back() == 1, Errc::PreconditionViolated,
            "modulus must be monic of degree >= 1");
    for (int c : modulus_)
      require(c >= 0 && c < p_, Errc::PreconditionViolated, "modulus coefficient out of range");
    f_ = static_cast<int>(modulus_.size()) - 1;
    std::uint64_t q = 1;
    for (int i = 0; i < f_; ++i) {
      q *= static_cast<std::uint64_t>(p_);
      require(q <= bound, Errc::DegreeTooLarge,
              "field size exceeds bound " + std::to_string(bound));
    }
    require(is_irreducible(p_, modulus_), Errc::PreconditionViolated, "modulus is reducible");
    q_ = static_cast<Elem>(q);
    place_.assign(f_, 1);
    for (int i = f_ - 2; i >= 0; --i) place_[i] = place_[i + 1] * static_cast<Elem>(p_);
    one_ = place_[0];
    build_tables();
  }

  int characteristic() const { return p_; }
  int degree() const { return f_; }
  Elem size() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return one_; }
  Elem primitive() const { return prim_; }

  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % p_;
    if (r < 0) r += p_;
    return static_cast<Elem>(r) * one_;
  }

  std::vector<int> coeffs(Elem a) const {
    std::vector<int> c(f_);
    for (int i = f_ - 1; i >= 0; --i) {
      c[i] = static_cast<int>(a % static_cast<Elem>(p_));
      a /= static_cast<Elem>(p_);
    }
    return c;
  }

  Elem from_coeffs(const std::vector<int>& c) const {
    require(static_cast<int>(c.size()) == f_, Errc::DimensionMismatch,
            "expected " + std::to_string(f_) + " coefficients");
    Elem r = 0;
    for (int i = 0; i < f_; ++i) {
      require(c[i] >= 0 && c[i] < p_, Errc::PreconditionViolated, "coefficient out of range");
      r = r * static_cast<Elem>(p_) + static_cast<Elem>(c[i]);
    }
    return r;
  }

  Elem add(Elem a, Elem b) const {
    if (f_ == 1) {
      Elem s = a + b;
      return s >= q_ ? s - q_ : s;
    }
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    Elem r = 0;
    for (int i = 0; i < f_; ++i) {
      const Elem da = (a / place_[i]) % p_, db = (b / place_[i]) % p_;
      r += ((da + db) % p_) * place_[i];
    }
    return r;
  }

  Elem neg(Elem a) const {
    if (f_ == 1) return a == 0 ? 0 : q_ - a;
    if (p_ == 2) return a;
    return neg_table_[a];
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (f_ == 1) return static_cast<Elem>(std::uint64_t{a} * b % q_);
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }

  Elem inv(Elem a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    if (a == one_) return one_;
    const std::uint32_t l = log_[a];
    return exp_[l == 0 ? 0 : (q_ - 1) - l];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  // Square-and-multiply; negative exponents go through the inverse.
  Elem pow(Elem a, std::int64_t e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Elem r = one_;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  // e -> e^(p^d)
  Elem frobenius(Elem a, int d) const {
    std::uint64_t e = 1;
    for (int i = 0; i < d; ++i) e *= static_cast<std::uint64_t>(p_);
    return pow(a, static_cast<std::int64_t>(e));
  }

  std::uint64_t mult_order(Elem a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "order of zero");
    std::uint64_t n = q_ - 1;
    for (std::uint64_t l : prime_factors(q_ - 1))
      while (n % l == 0 && pow(a, static_cast<std::int64_t>(n / l)) == one_) n /= l;
    return n;
  }

  // Discrete log base primitive(); a must be nonzero.
  std::uint32_t log(Elem a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "log of zero");
    return log_[a];
  }
  Elem exp(std::uint64_t e) const { return exp_[e % (q_ - 1)]; }

  // Bytes per coefficient in canonical encodings.
  int coeff_width() const { return p_ < 256 ? 1 : (p_ < 65536 ? 2 : 3); }

  void append_bytes(std::string& out, Elem a) const {
    const int w = coeff_width();
    if (f_ == 1 && w == 1) {
      out.push_back(static_cast<char>(a));
      return;
    }
    for (int i = 0; i < f_; ++i) {
      Elem d = (a / place_[i]) % static_cast<Elem>(p_);
      for (int b = w - 1; b >= 0; --b) out.push_back(static_cast<char>((d >> (8 * b)) & 0xff));
    }
  }

  std::string format(Elem a) const {
    std::string s;
    auto c = coeffs(a);
    for (int i = 0; i < f_; ++i) {
      if (i) s += ',';
      s += std::to_string(c[i]);
    }
    return s;
  }

  // Parses f comma-separated coefficients, constant term first.
  Elem parse(std::string_view text) const {
    std::vector<int> c;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view tok = text.substr(start, end - start);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      int v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      require(ec == std::errc() && ptr == tok.data() + tok.size() && !tok.empty(),
              Errc::ParseError, "bad field element '" + std::string(text) + "'");
      c.push_back(v);
      start = end + 1;
    }
    require(static_cast<int>(c.size()) == f_, Errc::ParseError,
            "field element '" + std::string(text) + "' needs " + std::to_string(f_) +
                " coefficients");
    return from_coeffs(c);
  }

  std::string spec_text() const {
    std::string s = "p=" + std::to_string(p_) + ",f=" + std::to_string(f_) + ",mod=";
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(modulus_[i]);
    }
    return s;
  }

  bool operator==(const Field& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }

 private:
  poly::Poly to_poly(Elem a) const {
    poly::Poly r = coeffs(a);
    poly::trim(r);
    return r;
  }

  Elem from_poly(poly::Poly a) const {
    a.resize(f_, 0);
    return from_coeffs(a);
  }

  Elem slow_mul(Elem a, Elem b) const {
    return from_poly(poly::mod(poly::mul(to_poly(a), to_poly(b), p_), modulus_, p_));
  }

  Elem slow_pow(Elem a, std::uint64_t e) const {
    Elem r = one_;
    while (e > 0) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return r;
  }

  void build_tables() {
    const auto factors = prime_factors(q_ - 1);
    prim_ = 0;
    for (Elem a = 1; a < q_; ++a) {
      bool ok = true;
      for (std::uint64_t l : factors)
        if (slow_pow(a, (q_ - 1) / l) == one_) {
          ok = false;
          break;
        }
      if (ok) {
        prim_ = a;
        break;
      }
    }
    if (q_ == 2) prim_ = one_;
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    Elem cur = one_;
    for (Elem i = 0; i + 1 < q_; ++i) {
      exp_[i] = cur;
      log_[cur] = i;
      cur = slow_mul(cur, prim_);
    }
    if (f_ > 1 && p_ != 2) {
      neg_table_.assign(q_, 0);
      for (Elem a = 0; a < q_; ++a) {
        Elem r = 0;
        for (int i = 0; i < f_; ++i) {
          const Elem d = (a / place_[i]) % p_;
          r += ((p_ - d) % p_) * place_[i];
        }
        neg_table_[a] = r;
      }
      if (q_ <= 256) {
        add_table_.assign(static_cast<std::size_t>(q_) * q_, 0);
        for (Elem a = 0; a < q_; ++a)
          for (Elem b = 0; b < q_; ++b) {
            Elem r = 0;
            for (int i = 0; i < f_; ++i) {
              const Elem da = (a / place_[i]) % p_, db = (b / place_[i]) % p_;
              r += ((da + db) % p_) * place_[i];
            }
            add_table_[static_cast<std::size_t>(a) * q_ + b] = r;
          }
      }
    }
  }

  int p_;
  int f_ = 1;
  Elem q_ = 0;
  Elem one_ = 1;
  Elem prim_ = 1;
  std::vector<int> modulus_;
  std::vector<Elem> place_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> neg_table_;
  std::vector<Elem> add_table_;
};

using FieldPtr = std::shared_ptr<const Field>;

// Lexicographically smallest irreducible monic modulus, coefficients compared
// constant term first.
inline std::vector<int> smallest_irreducible(int p, int f) {
  std::vector<int> c(f, 0);
  while (true) {
    std::vector<int> m = c;
    m.push_back(1);
    if (is_irreducible(p, m)) return m;
    // advance the tuple (c_0, ..., c_{f-1}) lexicographically, c_0 most significant
    int i = f - 1;
    while (i >= 0 && c[i] == p - 1) c[i--] = 0;
    if (i < 0) throw Error(Errc::TheoremViolation, "no irreducible polynomial found");
    ++c[i];
  }
}

inline FieldPtr field_make(int p, int f, std::uint64_t bound = Field::kDefaultBound) {
  require(p >= 2 && is_prime(static_cast<std::uint64_t>(p)), Errc::NonPrime,
          std::to_string(p) + " is not prime");
  require(f >= 1, Errc::DegreeTooLarge, "degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < f; ++i) {
    q *= static_cast<std::uint64_t>(p);
    require(q <= bound, Errc::DegreeTooLarge,
            "p^f exceeds bound " + std::to_string(bound));
  }
  if (f == 1) return std::make_shared<const Field>(p, std::vector<int>{0, 1}, bound);
  return std::make_shared<const Field>(p, smallest_irreducible(p, f), bound);
}

inline FieldPtr field_with_modulus(int p, std::vector<int> modulus,
                                   std::uint64_t bound = Field::kDefaultBound) {
  return std::make_shared<const Field>(p, std::move(modulus), bound);
}

// Parses "p=3,f=2,mod=1,0,1".
inline FieldPtr parse_field_spec(std::string_view text) {
  auto fail = [&] { throw Error(Errc::ParseError, "bad field spec '" + std::string(text) + "'"); };
  if (text.substr(0, 2) != "p=") fail();
  std::size_t comma = text.find(",f=");
  if (comma == std::string_view::npos) fail();
  std::size_t mod = text.find(",mod=");
  if (mod == std::string_view::npos || mod < comma) fail();
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail();
    return v;
  };
  const int p = to_int(text.substr(2, comma - 2));
  const int f = to_int(text.substr(comma + 3, mod - comma - 3));
  std::vector<int> m;
  std::string_view rest = text.substr(mod + 5);
  while (true) {
    std::size_t c = rest.find(',');
    m.push_back(to_int(rest.substr(0, c)));
    if (c == std::string_view::npos) break;
    rest = rest.substr(c + 1);
  }
  if (static_cast<int>(m.size()) != f + 1) fail();
  return field_with_modulus(p, std::move(m));
}

inline Elem primitive_element(const Field& F) { return F.primitive(); }

inline Elem frobenius_orbit(const Field& F, Elem e, int d) {
  require(d >= 0 && d < F.degree(), Errc::PreconditionViolated, "frobenius power out of range");
  return F.frobenius(e, d);
}

// Value-semantics element bound to its field.
class FieldElement {
 public:
  FieldElement(FieldPtr spec, Elem code) : spec_(std::move(spec)), code_(code) {}

  static FieldElement from_coeffs(FieldPtr spec, const std::vector<int>& c) {
    Elem e = spec->from_coeffs(c);
    return FieldElement(std::move(spec), e);
  }

  const FieldPtr& spec() const { return spec_; }
  Elem code() const { return code_; }
  std::vector<int> coeffs() const { return spec_->coeffs(code_); }
  bool is_zero() const { return code_ == 0; }

  FieldElement operator+(const FieldElement& o) const {
    check(o);
    return {spec_, spec_->add(code_, o.code_)};
  }
  FieldElement operator-(const FieldElement& o) const {
    check(o);
    return {spec_, spec_->sub(code_, o.code_)};
  }
  FieldElement operator-() const { return {spec_, spec_->neg(code_)}; }
  FieldElement operator*(const FieldElement& o) const {
    check(o);
    return {spec_, spec_->mul(code_, o.code_)};
  }
  FieldElement operator/(const FieldElement& o) const {
    check(o);
    return {spec_, spec_->div(code_, o.code_)};
  }
  FieldElement inv() const { return {spec_, spec_->inv(code_)}; }
  FieldElement pow(std::int64_t e) const { return {spec_, spec_->pow(code_, e)}; }

  bool operator==(const FieldElement& o) const {
    return same_field(o) && code_ == o.code_;
  }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  std::string to_string() const { return spec_->format(code_); }

 private:
  bool same_field(const FieldElement& o) const {
    return spec_ == o.spec_ || *spec_ == *o.spec_;
  }
  void check(const FieldElement& o) const {
    if (!same_field(o)) throw Error(Errc::SpecMismatch, "operands from different fields");
  }

  FieldPtr spec_;
  Elem code_;
};

}  // namespace cobase
