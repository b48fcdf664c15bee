#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>

#include "symdet/error.hpp"
#include "symdet/rng.hpp"

namespace symdet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { rational, prime, binary };

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Product of two residues modulo a degree-k polynomial over GF(2); operands have degree < k.
inline std::uint64_t gf2_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t modulus, unsigned k) {
  std::uint64_t r = 0;
  const std::uint64_t top = std::uint64_t{1} << k;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= modulus;
  }
  return r;
}

inline int gf2_degree(std::uint64_t a) { return a == 0 ? -1 : 63 - __builtin_clzll(a); }

inline std::uint64_t gf2_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    while (a && gf2_degree(a) >= gf2_degree(b)) a ^= b << (gf2_degree(a) - gf2_degree(b));
    std::swap(a, b);
  }
  return a;
}

// Rabin's test: f irreducible iff x^(2^k) = x mod f and gcd(x^(2^(k/q)) - x, f) = 1 for primes q | k.
inline bool gf2_irreducible(std::uint64_t modulus, unsigned k) {
  if (gf2_degree(modulus) != static_cast<int>(k)) return false;
  if (k == 1) return true;
  auto x_pow_2_pow = [&](unsigned i) {
    std::uint64_t x = 2;
    for (unsigned j = 0; j < i; ++j) x = gf2_mulmod(x, x, modulus, k);
    return x;
  };
  if (x_pow_2_pow(k) != 2) return false;
  for (unsigned q = 2; q <= k; ++q) {
    if (k % q != 0) continue;
    bool q_prime = true;
    for (unsigned r = 2; r * r <= q; ++r) q_prime = q_prime && (q % r != 0);
    if (!q_prime) continue;
    if (gf2_gcd(x_pow_2_pow(k / q) ^ 2, modulus) != 1) return false;
  }
  return true;
}

inline std::uint64_t parse_u64(std::string_view text, int base) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::parse_error, "bad integer literal '" + std::string(text) + "'");
  }
  return v;
}

inline BigInt parse_bigint(std::string_view text) {
  std::string_view digits = text;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (digits.empty()) throw Error(ErrorCode::parse_error, "empty integer literal");
  BigInt v = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw Error(ErrorCode::parse_error, "bad integer literal '" + std::string(text) + "'");
    v = v * 10 + (ch - '0');
  }
  return negative ? BigInt(-v) : v;
}

inline bool is_hex_literal(std::string_view text) {
  return text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
}

}  // namespace detail

/// Which field a value lives in: Q, Z_p (p < 2^63) or GF(2^k) = GF(2)[x]/(f), 1 <= k <= 63.
class FieldSpec {
 public:
  FieldSpec() = default;

  static FieldSpec rational() { return FieldSpec(); }

  static FieldSpec prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 63) || !detail::is_prime_u64(p)) {
      throw Error(ErrorCode::invalid_field, "modulus " + std::to_string(p) + " is not a prime below 2^63");
    }
    FieldSpec s;
    s.kind_ = FieldKind::prime;
    s.modulus_ = p;
    return s;
  }

  /// `modulus` carries all k+1 coefficient bits, e.g. 0x1002b for x^16+x^5+x^3+x+1.
  static FieldSpec binary(unsigned k, std::uint64_t modulus) {
    if (k < 1 || k > 63 || !detail::gf2_irreducible(modulus, k)) {
      throw Error(ErrorCode::invalid_field, "GF(2^" + std::to_string(k) + ") modulus is not irreducible of degree k");
    }
    FieldSpec s;
    s.kind_ = FieldKind::binary;
    s.modulus_ = modulus;
    s.degree_ = k;
    return s;
  }

  static FieldSpec mersenne61() { return prime((std::uint64_t{1} << 61) - 1); }
  static FieldSpec gf2_16() { return binary(16, 0x1002b); }
  static FieldSpec gf2() { return binary(1, 0x3); }

  /// Accepts the forms produced by name(), plus the shorthands `p` and `gf2k`.
  static FieldSpec parse(std::string_view text) {
    if (text == "Q" || text == "q" || text == "rational") return rational();
    if (text == "p" || text == "mersenne61") return mersenne61();
    if (text == "gf2k" || text == "GF2^16") return gf2_16();
    if (text == "GF2" || text == "gf2") return gf2();
    if (text.starts_with("Fp:")) return prime(detail::parse_u64(text.substr(3), 10));
    if (text.starts_with("GF2^")) {
      auto colon = text.find(':');
      if (colon != std::string_view::npos) {
        auto k = static_cast<unsigned>(detail::parse_u64(text.substr(4, colon - 4), 10));
        auto mod = text.substr(colon + 1);
        if (detail::is_hex_literal(mod)) mod.remove_prefix(2);
        return binary(k, detail::parse_u64(mod, 16));
      }
    }
    throw Error(ErrorCode::invalid_field, "unknown field '" + std::string(text) + "'");
  }

  FieldKind kind() const { return kind_; }
  std::uint64_t modulus() const { return modulus_; }
  unsigned degree() const { return degree_; }
  bool is_finite() const { return kind_ != FieldKind::rational; }

  /// 0 for Q.
  std::uint64_t characteristic() const {
    switch (kind_) {
      case FieldKind::rational: return 0;
      case FieldKind::prime: return modulus_;
      case FieldKind::binary: return 2;
    }
    return 0;
  }

  double log2_size() const {
    switch (kind_) {
      case FieldKind::rational: return std::numeric_limits<double>::infinity();
      case FieldKind::prime: return static_cast<double>(detail::gf2_degree(modulus_)) + 1.0 - 1e-9;
      case FieldKind::binary: return degree_;
    }
    return 0;
  }

  std::string name() const {
    switch (kind_) {
      case FieldKind::rational: return "Q";
      case FieldKind::prime: return "Fp:" + std::to_string(modulus_);
      case FieldKind::binary: {
        if (*this == gf2_16()) return "GF2^16";
        if (degree_ == 1) return "GF2";
        char buf[32];
        std::snprintf(buf, sizeof buf, "GF2^%u:0x%llx", degree_, static_cast<unsigned long long>(modulus_));
        return buf;
      }
    }
    return "?";
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldKind kind_ = FieldKind::rational;
  std::uint64_t modulus_ = 0;
  unsigned degree_ = 0;
};

/// An exact value of one field. Rationals stay in lowest terms with a
/// positive denominator; residues lie in [0, p); binary values have degree < k.
class FieldElement {
 public:
  FieldElement() : value_(Rational(0)) {}
  explicit FieldElement(const FieldSpec& spec) : spec_(spec) {
    if (spec.is_finite()) value_ = std::uint64_t{0};
  }

  static FieldElement zero(const FieldSpec& spec) { return FieldElement(spec); }
  static FieldElement one(const FieldSpec& spec) { return from_int(spec, 1); }

  static FieldElement from_int(const FieldSpec& spec, std::int64_t v) { return from_big(spec, BigInt(v)); }

  static FieldElement from_big(const FieldSpec& spec, const BigInt& v) {
    FieldElement e(spec);
    switch (spec.kind()) {
      case FieldKind::rational: e.value_ = Rational(v); break;
      case FieldKind::prime: {
        BigInt r = v % spec.modulus();
        if (r < 0) r += spec.modulus();
        e.value_ = static_cast<std::uint64_t>(r);
        break;
      }
      case FieldKind::binary: e.value_ = static_cast<std::uint64_t>(boost::multiprecision::bit_test(v, 0) ? 1 : 0); break;
    }
    return e;
  }

  static FieldElement from_rational(const FieldSpec& spec, const Rational& q) {
    if (spec.kind() == FieldKind::rational) {
      FieldElement e;
      e.value_ = q;
      return e;
    }
    return from_big(spec, boost::multiprecision::numerator(q)) / from_big(spec, boost::multiprecision::denominator(q));
  }

  /// Raw residue (prime) or coefficient bit-vector (binary), reduced.
  static FieldElement from_raw(const FieldSpec& spec, std::uint64_t raw) {
    FieldElement e(spec);
    switch (spec.kind()) {
      case FieldKind::rational: e.value_ = Rational(raw); break;
      case FieldKind::prime: e.value_ = raw % spec.modulus(); break;
      case FieldKind::binary:
        if (detail::gf2_degree(raw) >= static_cast<int>(spec.degree())) {
          throw Error(ErrorCode::parse_error, "binary field literal exceeds degree");
        }
        e.value_ = raw;
        break;
    }
    return e;
  }

  /// The constant 1/2; undefined in characteristic 2.
  static FieldElement half(const FieldSpec& spec) {
    if (spec.characteristic() == 2) throw Error(ErrorCode::char_two_half, "1/2 does not exist in " + spec.name());
    return one(spec) / from_int(spec, 2);
  }

  const FieldSpec& spec() const { return spec_; }

  bool is_zero() const {
    if (auto* q = std::get_if<Rational>(&value_)) return q->is_zero();
    return std::get<std::uint64_t>(value_) == 0;
  }
  bool is_one() const {
    if (auto* q = std::get_if<Rational>(&value_)) return *q == 1;
    return std::get<std::uint64_t>(value_) == 1;
  }

  const Rational& rational() const { return std::get<Rational>(value_); }
  std::uint64_t raw() const { return std::get<std::uint64_t>(value_); }

  FieldElement operator+(const FieldElement& o) const {
    check_same(o);
    FieldElement r(spec_);
    switch (spec_.kind()) {
      case FieldKind::rational: r.value_ = rational() + o.rational(); break;
      case FieldKind::prime: {
        std::uint64_t s = raw() + o.raw();
        r.value_ = s >= spec_.modulus() ? s - spec_.modulus() : s;
        break;
      }
      case FieldKind::binary: r.value_ = raw() ^ o.raw(); break;
    }
    return r;
  }

  FieldElement operator-() const {
    FieldElement r(spec_);
    switch (spec_.kind()) {
      case FieldKind::rational: r.value_ = Rational(-rational()); break;
      case FieldKind::prime: r.value_ = raw() == 0 ? 0 : spec_.modulus() - raw(); break;
      case FieldKind::binary: r.value_ = raw(); break;
    }
    return r;
  }

  FieldElement operator-(const FieldElement& o) const { return *this + (-o); }

  FieldElement operator*(const FieldElement& o) const {
    check_same(o);
    FieldElement r(spec_);
    switch (spec_.kind()) {
      case FieldKind::rational: r.value_ = rational() * o.rational(); break;
      case FieldKind::prime: r.value_ = detail::mulmod(raw(), o.raw(), spec_.modulus()); break;
      case FieldKind::binary: r.value_ = detail::gf2_mulmod(raw(), o.raw(), spec_.modulus(), spec_.degree()); break;
    }
    return r;
  }

  FieldElement inverse() const {
    if (is_zero()) throw Error(ErrorCode::division_by_zero, "inverse of zero in " + spec_.name());
    switch (spec_.kind()) {
      case FieldKind::rational: {
        FieldElement r;
        r.value_ = Rational(1) / rational();
        return r;
      }
      case FieldKind::prime: return from_raw(spec_, detail::powmod(raw(), spec_.modulus() - 2, spec_.modulus()));
      case FieldKind::binary: {
        // a^(2^k - 2) = a^(-1); the exponent is 2 + 4 + ... + 2^(k-1).
        FieldElement result = one(spec_);
        FieldElement sq = *this;
        for (unsigned i = 1; i < spec_.degree(); ++i) {
          sq = sq * sq;
          result = result * sq;
        }
        return result;
      }
    }
    return *this;
  }

  FieldElement operator/(const FieldElement& o) const {
    check_same(o);
    return *this * o.inverse();
  }

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement pow(std::uint64_t e) const {
    FieldElement result = one(spec_), base = *this;
    while (e) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.value_ == b.value_;
  }

  /// Decimal integer, `a/b`, or `0x..` for binary fields.
  std::string to_string() const {
    switch (spec_.kind()) {
      case FieldKind::rational: return rational().str();
      case FieldKind::prime: return std::to_string(raw());
      case FieldKind::binary: {
        char buf[24];
        std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(raw()));
        return buf;
      }
    }
    return "?";
  }

  static FieldElement parse(std::string_view text, const FieldSpec& spec) {
    if (detail::is_hex_literal(text)) {
      if (spec.kind() != FieldKind::binary) {
        throw Error(ErrorCode::mixed_fields, "hex literal '" + std::string(text) + "' outside a binary field");
      }
      return from_raw(spec, detail::parse_u64(text.substr(2), 16));
    }
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return from_big(spec, detail::parse_bigint(text));
    BigInt num = detail::parse_bigint(text.substr(0, slash));
    BigInt den = detail::parse_bigint(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::division_by_zero, "zero denominator in '" + std::string(text) + "'");
    if (spec.kind() == FieldKind::rational) return from_rational(spec, Rational(num, den));
    return from_big(spec, num) / from_big(spec, den);
  }

 private:
  void check_same(const FieldElement& o) const {
    if (!(spec_ == o.spec_)) throw Error(ErrorCode::mixed_fields, spec_.name() + " vs " + o.spec_.name());
  }

  FieldSpec spec_;
  std::variant<Rational, std::uint64_t> value_;
};

inline FieldElement operator*(std::int64_t k, const FieldElement& e) {
  return FieldElement::from_int(e.spec(), k) * e;
}

/// Canonical image of `e` in `target`. Q maps into any field whose characteristic
/// does not divide the denominator; the prime subfield {0,1} of a binary field maps
/// into any other binary field; everything else is MixedFields.
inline FieldElement embed(const FieldElement& e, const FieldSpec& target) {
  if (e.spec() == target) return e;
  switch (e.spec().kind()) {
    case FieldKind::rational: {
      const auto& q = e.rational();
      FieldElement den = FieldElement::from_big(target, boost::multiprecision::denominator(q));
      if (den.is_zero()) {
        throw Error(ErrorCode::division_by_zero, "constant " + e.to_string() + " has no image in " + target.name());
      }
      return FieldElement::from_big(target, boost::multiprecision::numerator(q)) / den;
    }
    case FieldKind::binary:
      if (target.kind() == FieldKind::binary && e.raw() <= 1) return FieldElement::from_raw(target, e.raw());
      break;
    case FieldKind::prime: break;
  }
  throw Error(ErrorCode::mixed_fields, "cannot embed " + e.spec().name() + " into " + target.name());
}

/// Spec-free literal: hex strings live in GF(2^16), everything else in Q.
inline FieldElement parse_constant(std::string_view text) {
  return FieldElement::parse(text, detail::is_hex_literal(text) ? FieldSpec::gf2_16() : FieldSpec::rational());
}

inline FieldElement sample_random(const FieldSpec& spec, Rng& rng) {
  switch (spec.kind()) {
    case FieldKind::rational: throw Error(ErrorCode::unsupported_field, "cannot sample uniformly from Q");
    case FieldKind::prime: return FieldElement::from_raw(spec, rng.below(spec.modulus()));
    case FieldKind::binary: return FieldElement::from_raw(spec, rng.bits(spec.degree()));
  }
  return FieldElement(spec);
}

}  // namespace symdet
