#pragma once

// Exact arithmetic in F_{p^d} and univariate polynomials over it.
//
// Elements are packed as the integer sum c_i p^i of their coefficient vector
// (low-to-high over the canonical modulus). That integer order is the
// canonical enumeration order used by every "least"/"first" choice here.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schemefactor/error.hpp"
#include "schemefactor/numtheory.hpp"

namespace sf {

class FieldCtx {
 public:
  using Elem = u64;
  static constexpr u64 kDefaultMagnitudeCap = ~u64{0} >> 1;

  FieldCtx() = default;

  /// F_{p^d}; modulus is the least monic irreducible of degree d.
  static FieldCtx make(u64 p, unsigned d, u64 magnitude_cap = kDefaultMagnitudeCap);

  bool valid() const { return impl_ != nullptr; }
  u64 characteristic() const { return impl_->p; }
  unsigned degree() const { return impl_->d; }
  u64 order() const { return impl_->q; }
  /// Low-to-high, monic, length d+1. For d = 1 this is the placeholder x - 0.
  const std::vector<u64>& modulus() const { return impl_->modulus; }
  /// Least primitive element (generator of the multiplicative group).
  Elem primitive_element() const;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  Elem add(Elem a, Elem b) const {
    const Impl& f = *impl_;
    if (f.mode == Mode::Prime) {
      u64 s = a + b;
      return s >= f.p ? s - f.p : s;
    }
    if (f.mode == Mode::Table) {
      if (a == 0) return b;
      if (b == 0) return a;
      u64 la = f.log[a], lb = f.log[b];
      u64 t = lb >= la ? lb - la : lb + f.q - 1 - la;
      uint32_t z = f.zech[t];
      if (z == kNoLog) return 0;
      return f.exp[la + z];
    }
    return add_generic(a, b);
  }

  Elem neg(Elem a) const {
    const Impl& f = *impl_;
    if (a == 0) return 0;
    if (f.mode == Mode::Prime) return f.p - a;
    if (f.mode == Mode::Table) return f.exp[f.log[a] + f.log_minus_one];
    return neg_generic(a);
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    const Impl& f = *impl_;
    if (f.mode == Mode::Prime) {
      if (f.p < (u64{1} << 32)) return a * b % f.p;
      return mulmod(a, b, f.p);
    }
    if (f.mode == Mode::Table) {
      if (a == 0 || b == 0) return 0;
      return f.exp[f.log[a] + f.log[b]];
    }
    return mul_generic(a, b);
  }

  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, u64 e) const;

  /// Reduces an integer into the prime subfield.
  Elem from_int(long long v) const;
  std::vector<u64> digits(Elem a) const;
  Elem from_digits(std::span<const u64> digits) const;
  bool in_prime_field(Elem a) const { return a < impl_->p; }
  /// Absolute trace to F_p, returned as a prime-field element.
  Elem trace(Elem a) const;

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) {
    if (a.impl_ == b.impl_) return true;
    if (!a.impl_ || !b.impl_) return false;
    return a.impl_->p == b.impl_->p && a.impl_->modulus == b.impl_->modulus;
  }

  std::string describe() const;

 private:
  static constexpr uint32_t kNoLog = 0xffffffffu;
  enum class Mode { Prime, Table, Generic };
  struct Impl {
    u64 p = 0;
    unsigned d = 0;
    u64 q = 0;
    std::vector<u64> modulus;
    Mode mode = Mode::Prime;
    std::vector<uint32_t> log;   // size q, log[0] unused
    std::vector<u64> exp;        // size 2(q-1), doubled to skip a reduction
    std::vector<uint32_t> zech;  // zech[t] = log(1 + g^t)
    u64 log_minus_one = 0;
    u64 primitive = 0;
  };
  std::shared_ptr<const Impl> impl_;

  Elem add_generic(Elem a, Elem b) const;
  Elem neg_generic(Elem a) const;
  Elem mul_generic(Elem a, Elem b) const;
};

inline FieldCtx field_ctx(u64 p, unsigned d, u64 magnitude_cap = FieldCtx::kDefaultMagnitudeCap) {
  return FieldCtx::make(p, d, magnitude_cap);
}

/// Value type bound to its field. Bulk code works on packed values directly.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(FieldCtx field, u64 packed) : field_(std::move(field)), value_(packed) {}

  const FieldCtx& field() const { return field_; }
  u64 value() const { return value_; }
  std::vector<u64> coeffs() const { return field_.digits(value_); }
  bool is_zero() const { return value_ == 0; }

  FieldElem operator+(const FieldElem& o) const { return {field_, field_.add(value_, checked(o))}; }
  FieldElem operator-(const FieldElem& o) const { return {field_, field_.sub(value_, checked(o))}; }
  FieldElem operator*(const FieldElem& o) const { return {field_, field_.mul(value_, checked(o))}; }
  FieldElem operator/(const FieldElem& o) const { return {field_, field_.div(value_, checked(o))}; }
  FieldElem operator-() const { return {field_, field_.neg(value_)}; }
  FieldElem pow(u64 e) const { return {field_, field_.pow(value_, e)}; }
  FieldElem inverse() const { return {field_, field_.inv(value_)}; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.value_ == b.value_ && a.field_ == b.field_;
  }
  friend auto operator<=>(const FieldElem& a, const FieldElem& b) { return a.value_ <=> b.value_; }

 private:
  u64 checked(const FieldElem& o) const {
    if (!(o.field_ == field_)) fail(ErrorKind::FieldMismatch, "operands live in different fields");
    return o.value_;
  }
  FieldCtx field_;
  u64 value_ = 0;
};

/// Univariate polynomial, coefficients low-to-high, no trailing zeros.
struct Poly {
  FieldCtx field;
  std::vector<u64> coeffs;

  Poly() = default;
  Poly(FieldCtx f, std::vector<u64> c) : field(std::move(f)), coeffs(std::move(c)) { normalize(); }

  static Poly from_ints(const FieldCtx& f, std::span<const long long> values);
  static Poly monomial(const FieldCtx& f, u64 coeff, std::size_t degree);
  static Poly constant(const FieldCtx& f, u64 c) { return Poly(f, {c}); }
  static Poly x(const FieldCtx& f) { return Poly(f, {0, 1}); }

  void normalize() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }
  bool is_zero() const { return coeffs.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
  u64 lead() const { return coeffs.empty() ? 0 : coeffs.back(); }
  u64 coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }
  u64 eval(u64 point) const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.field == b.field && a.coeffs == b.coeffs; }
  std::string to_string() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& a, u64 c);
Poly make_monic(const Poly& a);

struct PolyDivision {
  Poly quotient;
  Poly remainder;
};
PolyDivision poly_divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& b);
/// (base^e) mod m
Poly poly_powmod(const Poly& base, u64 e, const Poly& m);

/// Monic gcd; throws FieldMismatch across fields, InvalidArgument if both zero.
Poly poly_gcd(const Poly& a, const Poly& b);

/// f divides x^Q - x, i.e. f is squarefree and splits into distinct linear factors.
bool is_split_squarefree(const Poly& f);

/// Irreducibility over the coefficient field (Rabin's test).
bool is_irreducible(const Poly& f);

struct ScanPolicy {
  /// Maximum number of nonzero candidates examined; nullopt = 2*(log2 Q)^2.
  std::optional<u64> cap;
};

u64 default_nonresidue_cap(u64 order);

/// First nonzero element (canonical order) that is not an r-th power.
FieldElem find_nonresidue(u64 r, const FieldCtx& field, ScanPolicy policy = {});

/// Canonically least r-th root of a, or nullopt if a is not an r-th power.
std::optional<FieldElem> rth_root(const FieldElem& a, u64 r, ScanPolicy policy = {});

/// Least-degree F_{q^d} such that every prime s <= m, s != char, divides q^d - 1.
FieldCtx extension_for_levels(const FieldCtx& base, unsigned m,
                              u64 magnitude_cap = FieldCtx::kDefaultMagnitudeCap);
/// Same, for an explicit list of primes.
FieldCtx extension_for_primes(const FieldCtx& base, std::span<const u64> primes,
                              u64 magnitude_cap = FieldCtx::kDefaultMagnitudeCap);

/// Embedding of a subfield into a larger field of the same characteristic.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldCtx from, FieldCtx to);
  const FieldCtx& from() const { return from_; }
  const FieldCtx& to() const { return to_; }
  u64 operator()(u64 a) const;
  Poly map(const Poly& f) const;
  /// Inverse image, or nullopt if `b` is outside the embedded subfield.
  std::optional<u64> preimage(u64 b) const;

 private:
  FieldCtx from_, to_;
  u64 generator_image_ = 0;
};

}  // namespace sf
