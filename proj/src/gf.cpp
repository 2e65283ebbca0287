#include "schemefactor/gf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schemefactor/radical.hpp"

namespace sf {

namespace {

constexpr u64 kTableLimit = u64{1} << 20;

// Dense polynomial helpers over the prime field F_p, used to bootstrap the
// modulus search before any FieldCtx exists.
using PV = std::vector<u64>;

void trim(PV& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PV pv_mod(PV a, const PV& m, u64 p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 inv_lead = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    u64 factor = mulmod(a.back(), inv_lead, p);
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      u64 sub = mulmod(factor, m[i], p);
      a[shift + i] = (a[shift + i] + p - sub) % p;
    }
    trim(a);
  }
  return a;
}

PV pv_mulmod(const PV& a, const PV& b, const PV& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  PV out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
  return pv_mod(std::move(out), m, p);
}

PV pv_gcd(PV a, PV b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PV r = pv_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin: monic g of degree d over F_p is irreducible iff x^{p^d} = x mod g and
// gcd(x^{p^{d/l}} - x, g) = 1 for every prime l | d.
bool pv_irreducible(const PV& g, u64 p) {
  const unsigned d = static_cast<unsigned>(g.size() - 1);
  if (d == 1) return true;
  auto frob_power = [&](unsigned times) {
    PV acc = pv_mod({0, 1}, g, p);
    for (unsigned i = 0; i < times; ++i) {
      // acc^p mod g
      PV result{1};
      PV base = acc;
      u64 e = p;
      while (e) {
        if (e & 1) result = pv_mulmod(result, base, g, p);
        e >>= 1;
        if (e) base = pv_mulmod(base, base, g, p);
      }
      acc = std::move(result);
    }
    return acc;
  };
  PV full = frob_power(d);
  PV xx = pv_mod({0, 1}, g, p);
  if (full != xx) return false;
  for (u64 l : prime_divisors(d)) {
    PV h = frob_power(d / static_cast<unsigned>(l));
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    PV gg = pv_gcd(g, h, p);
    if (gg.size() != 1) return false;
  }
  return true;
}

PV least_irreducible(u64 p, unsigned d) {
  // enumerate non-leading coefficient vectors by packed value 0, 1, 2, ...
  PV g(d + 1, 0);
  g[d] = 1;
  for (u64 idx = 0;; ++idx) {
    u64 v = idx;
    for (unsigned i = 0; i < d; ++i) {
      g[i] = v % p;
      v /= p;
    }
    if (g[0] == 0) continue;
    if (pv_irreducible(g, p)) return g;
  }
}

}  // namespace

FieldCtx FieldCtx::make(u64 p, unsigned d, u64 magnitude_cap) {
  if (p < 2 || d < 1) fail(ErrorKind::InvalidArgument, "field_ctx requires p >= 2 and d >= 1");
  if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  u64 q = 0;
  if (!checked_pow(p, d, magnitude_cap, q))
    fail(ErrorKind::Overflow, std::to_string(p) + "^" + std::to_string(d) + " exceeds the magnitude cap");
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->d = d;
  impl->q = q;
  if (d == 1) {
    impl->modulus = {0, 1};
    impl->mode = Mode::Prime;
  } else {
    impl->modulus = least_irreducible(p, d);
    impl->mode = Mode::Generic;
  }
  FieldCtx ctx;
  ctx.impl_ = impl;
  if (d == 1) {
    impl->primitive = ctx.primitive_element();
    return ctx;
  }
  impl->primitive = ctx.primitive_element();
  if (q <= kTableLimit) {
    const u64 g = impl->primitive;
    impl->log.assign(q, kNoLog);
    impl->exp.assign(2 * (q - 1), 0);
    u64 cur = 1;
    for (u64 i = 0; i < q - 1; ++i) {
      impl->exp[i] = cur;
      impl->exp[i + q - 1] = cur;
      impl->log[cur] = static_cast<uint32_t>(i);
      cur = ctx.mul_generic(cur, g);
    }
    impl->zech.assign(q - 1, kNoLog);
    for (u64 t = 0; t < q - 1; ++t) {
      u64 s = ctx.add_generic(1, impl->exp[t]);
      impl->zech[t] = s == 0 ? kNoLog : impl->log[s];
    }
    impl->log_minus_one = impl->log[ctx.neg_generic(1)];
    impl->mode = Mode::Table;
  }
  return ctx;
}

FieldCtx::Elem FieldCtx::primitive_element() const {
  if (impl_->primitive != 0) return impl_->primitive;
  const u64 q1 = impl_->q - 1;
  if (q1 == 1) return 1;
  auto primes = prime_divisors(q1);
  for (u64 g = 1; g < impl_->q; ++g) {
    bool ok = true;
    for (u64 l : primes) {
      if (pow(g, q1 / l) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail(ErrorKind::InvalidArgument, "no primitive element found");
}

std::vector<u64> FieldCtx::digits(Elem a) const {
  std::vector<u64> out(impl_->d, 0);
  for (unsigned i = 0; i < impl_->d; ++i) {
    out[i] = a % impl_->p;
    a /= impl_->p;
  }
  return out;
}

FieldCtx::Elem FieldCtx::from_digits(std::span<const u64> ds) const {
  if (ds.size() > impl_->d) fail(ErrorKind::InvalidArgument, "too many coefficients for field element");
  u64 v = 0;
  for (std::size_t i = ds.size(); i-- > 0;) v = v * impl_->p + ds[i] % impl_->p;
  return v;
}

FieldCtx::Elem FieldCtx::add_generic(Elem a, Elem b) const {
  auto da = digits(a), db = digits(b);
  for (unsigned i = 0; i < impl_->d; ++i) {
    u64 s = da[i] + db[i];
    da[i] = s >= impl_->p ? s - impl_->p : s;
  }
  return from_digits(da);
}

FieldCtx::Elem FieldCtx::neg_generic(Elem a) const {
  auto da = digits(a);
  for (auto& c : da) c = c == 0 ? 0 : impl_->p - c;
  return from_digits(da);
}

FieldCtx::Elem FieldCtx::mul_generic(Elem a, Elem b) const {
  const u64 p = impl_->p;
  auto da = digits(a), db = digits(b);
  trim(da);
  trim(db);
  PV prod = pv_mulmod(da, db, impl_->modulus, p);
  prod.resize(impl_->d, 0);
  return from_digits(prod);
}

FieldCtx::Elem FieldCtx::pow(Elem a, u64 e) const {
  Elem acc = 1;
  while (e) {
    if (e & 1) acc = mul(acc, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return acc;
}

FieldCtx::Elem FieldCtx::inv(Elem a) const {
  if (a == 0) fail(ErrorKind::InvalidArgument, "inverse of zero");
  if (impl_->mode == Mode::Table) return impl_->exp[(impl_->q - 1 - impl_->log[a]) % (impl_->q - 1)];
  return pow(a, impl_->q - 2);
}

FieldCtx::Elem FieldCtx::from_int(long long v) const {
  const long long p = static_cast<long long>(impl_->p);
  if (impl_->p > static_cast<u64>(std::numeric_limits<long long>::max())) {
    if (v >= 0) return static_cast<u64>(v) % impl_->p;
    return impl_->p - (static_cast<u64>(-(v + 1)) + 1) % impl_->p;
  }
  long long r = v % p;
  if (r < 0) r += p;
  return static_cast<u64>(r);
}

FieldCtx::Elem FieldCtx::trace(Elem a) const {
  Elem acc = 0, cur = a;
  for (unsigned i = 0; i < impl_->d; ++i) {
    acc = add(acc, cur);
    cur = pow(cur, impl_->p);
  }
  return acc;
}

std::string FieldCtx::describe() const {
  std::ostringstream os;
  os << "F_" << impl_->p;
  if (impl_->d > 1) os << "^" << impl_->d;
  return os.str();
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::from_ints(const FieldCtx& f, std::span<const long long> values) {
  std::vector<u64> c;
  c.reserve(values.size());
  for (long long v : values) c.push_back(f.from_int(v));
  return Poly(f, std::move(c));
}

Poly Poly::monomial(const FieldCtx& f, u64 coeff, std::size_t degree) {
  std::vector<u64> c(degree + 1, 0);
  c[degree] = coeff;
  return Poly(f, std::move(c));
}

u64 Poly::eval(u64 point) const {
  u64 acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = field.add(field.mul(acc, point), coeffs[i]);
  return acc;
}

std::string Poly::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ',';
    os << coeffs[i];
  }
  return os.str();
}

namespace {
void same_field(const Poly& a, const Poly& b) {
  if (!(a.field == b.field)) fail(ErrorKind::FieldMismatch, "polynomials over different fields");
}
}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  same_field(a, b);
  std::vector<u64> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.field.add(a.coeff(i), b.coeff(i));
  return Poly(a.field, std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  same_field(a, b);
  std::vector<u64> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.field.sub(a.coeff(i), b.coeff(i));
  return Poly(a.field, std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  same_field(a, b);
  if (a.is_zero() || b.is_zero()) return Poly(a.field, {});
  const FieldCtx& f = a.field;
  std::vector<u64> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] = f.add(c[i + j], f.mul(a.coeffs[i], b.coeffs[j]));
  }
  return Poly(f, std::move(c));
}

Poly scale(const Poly& a, u64 c) {
  std::vector<u64> out(a.coeffs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.field.mul(a.coeffs[i], c);
  return Poly(a.field, std::move(out));
}

Poly make_monic(const Poly& a) {
  if (a.is_zero()) return a;
  return scale(a, a.field.inv(a.lead()));
}

PolyDivision poly_divmod(const Poly& a, const Poly& b) {
  same_field(a, b);
  if (b.is_zero()) fail(ErrorKind::InvalidArgument, "polynomial division by zero");
  const FieldCtx& f = a.field;
  std::vector<u64> rem = a.coeffs;
  const std::size_t db = b.coeffs.size() - 1;
  if (rem.size() <= db) return {Poly(f, {}), a};
  std::vector<u64> quo(rem.size() - db, 0);
  const u64 inv_lead = f.inv(b.lead());
  for (std::size_t i = rem.size(); i-- > db;) {
    u64 factor = f.mul(rem[i], inv_lead);
    if (factor == 0) continue;
    quo[i - db] = factor;
    for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] = f.sub(rem[i - db + j], f.mul(factor, b.coeffs[j]));
  }
  return {Poly(f, std::move(quo)), Poly(f, std::move(rem))};
}

Poly poly_mod(const Poly& a, const Poly& b) { return poly_divmod(a, b).remainder; }

Poly poly_powmod(const Poly& base, u64 e, const Poly& m) {
  Poly acc = poly_mod(Poly::constant(base.field, 1), m);
  Poly b = poly_mod(base, m);
  while (e) {
    if (e & 1) acc = poly_mod(acc * b, m);
    e >>= 1;
    if (e) b = poly_mod(b * b, m);
  }
  return acc;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  same_field(a, b);
  if (a.is_zero() && b.is_zero()) fail(ErrorKind::InvalidArgument, "gcd(0, 0) is undefined");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(x);
}

bool is_split_squarefree(const Poly& f) {
  if (f.degree() < 1) fail(ErrorKind::InvalidArgument, "is_split_squarefree needs a nonconstant polynomial");
  Poly monic = make_monic(f);
  Poly xq = poly_powmod(Poly::x(f.field), f.field.order(), monic);
  return poly_mod(xq - Poly::x(f.field), monic).is_zero();
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  const Poly g = make_monic(f);
  const unsigned d = static_cast<unsigned>(g.degree());
  const u64 q = f.field.order();
  auto frob = [&](unsigned times) {
    Poly acc = poly_mod(Poly::x(f.field), g);
    for (unsigned i = 0; i < times; ++i) acc = poly_powmod(acc, q, g);
    return acc;
  };
  if (!(poly_mod(frob(d) - Poly::x(f.field), g).is_zero())) return false;
  for (u64 l : prime_divisors(d)) {
    Poly h = frob(d / static_cast<unsigned>(l)) - Poly::x(f.field);
    if (h.is_zero() || poly_gcd(g, h).degree() != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Nonresidues and roots

u64 default_nonresidue_cap(u64 order) {
  const double l = std::log2(static_cast<double>(order));
  return static_cast<u64>(std::ceil(2.0 * l * l));
}

FieldElem find_nonresidue(u64 r, const FieldCtx& field, ScanPolicy policy) {
  if (!is_prime(r)) fail(ErrorKind::InvalidArgument, "find_nonresidue: r must be prime");
  if (r == field.characteristic())
    fail(ErrorKind::NoNonresidue, "r equals the characteristic; every element is an r-th power");
  const u64 q1 = field.order() - 1;
  if (q1 % r != 0)
    fail(ErrorKind::NoNonresidue, std::to_string(r) + " does not divide |F|-1 = " + std::to_string(q1));
  const u64 cap = policy.cap.value_or(default_nonresidue_cap(field.order()));
  const u64 e = q1 / r;
  for (u64 a = 1, scanned = 1; a < field.order(); ++a, ++scanned) {
    if (scanned > cap)
      fail(ErrorKind::ScanCapExceeded, "no " + std::to_string(r) + "-th nonresidue among the first " +
                                           std::to_string(cap) + " elements of " + field.describe());
    if (field.pow(a, e) != 1) return FieldElem(field, a);
  }
  fail(ErrorKind::NoNonresidue, "no nonresidue exists");
}

std::optional<FieldElem> rth_root(const FieldElem& a, u64 r, ScanPolicy policy) {
  const FieldCtx& k = a.field();
  if (a.is_zero()) fail(ErrorKind::InvalidArgument, "rth_root requires a nonzero element");
  if (!is_prime(r)) fail(ErrorKind::InvalidArgument, "rth_root: r must be prime");
  const u64 q1 = k.order() - 1;
  if (r == k.characteristic()) {
    // inverse Frobenius: (a^{Q/p})^p = a^Q = a
    return FieldElem(k, k.pow(a.value(), k.order() / k.characteristic()));
  }
  if (q1 % r != 0) return FieldElem(k, k.pow(a.value(), modinv(r % q1, q1)));
  if (k.pow(a.value(), q1 / r) != 1) return std::nullopt;
  const FieldElem g = find_nonresidue(r, k, policy);
  FieldRing ring{k};
  auto out = amm_root(ring, k, a.value(), r, g.value());
  if (out.kind != RadicalOutcome<FieldRing>::Kind::Root) return std::nullopt;
  // all roots are y * zeta^j; pick the least packed value
  const u64 zeta = k.pow(g.value(), q1 / r);
  u64 best = out.value, cur = out.value;
  for (u64 j = 1; j < r; ++j) {
    cur = k.mul(cur, zeta);
    best = std::min(best, cur);
  }
  return FieldElem(k, best);
}

FieldCtx extension_for_primes(const FieldCtx& base, std::span<const u64> primes, u64 magnitude_cap) {
  const u64 q = base.order();
  u64 d = 1;
  for (u64 s : primes) {
    if (s == base.characteristic()) continue;
    u64 ord = multiplicative_order(q % s, s);
    d = d / gcd_u64(d, ord) * ord;
  }
  u64 total = static_cast<u64>(base.degree()) * d;
  if (total > 64) fail(ErrorKind::Overflow, "extension degree " + std::to_string(total) + " exceeds the magnitude cap");
  if (d == 1) return base;
  return FieldCtx::make(base.characteristic(), static_cast<unsigned>(total), magnitude_cap);
}

FieldCtx extension_for_levels(const FieldCtx& base, unsigned m, u64 magnitude_cap) {
  if (m < 2) fail(ErrorKind::InvalidArgument, "extension_for_levels requires m >= 2");
  std::vector<u64> primes;
  for (u64 s = 2; s <= m; ++s)
    if (is_prime(s)) primes.push_back(s);
  return extension_for_primes(base, primes, magnitude_cap);
}

// ---------------------------------------------------------------------------
// Embeddings

FieldEmbedding::FieldEmbedding(FieldCtx from, FieldCtx to) : from_(std::move(from)), to_(std::move(to)) {
  if (from_.characteristic() != to_.characteristic())
    fail(ErrorKind::FieldMismatch, "embedding across characteristics");
  if (to_.degree() % from_.degree() != 0)
    fail(ErrorKind::FieldMismatch, from_.describe() + " is not a subfield of " + to_.describe());
  if (from_.degree() == 1 || from_ == to_) return;
  // least root of from's modulus inside `to`
  const auto& mod = from_.modulus();
  for (u64 cand = 0; cand < to_.order(); ++cand) {
    u64 acc = 0;
    for (std::size_t i = mod.size(); i-- > 0;) acc = to_.add(to_.mul(acc, cand), mod[i]);
    if (acc == 0) {
      generator_image_ = cand;
      return;
    }
  }
  fail(ErrorKind::FieldMismatch, "modulus has no root in the target field");
}

u64 FieldEmbedding::operator()(u64 a) const {
  if (from_.degree() == 1 || from_ == to_) return a;
  auto ds = from_.digits(a);
  u64 acc = 0;
  for (std::size_t i = ds.size(); i-- > 0;) acc = to_.add(to_.mul(acc, generator_image_), ds[i]);
  return acc;
}

Poly FieldEmbedding::map(const Poly& f) const {
  std::vector<u64> c;
  c.reserve(f.coeffs.size());
  for (u64 v : f.coeffs) c.push_back((*this)(v));
  return Poly(to_, std::move(c));
}

std::optional<u64> FieldEmbedding::preimage(u64 b) const {
  if (from_ == to_) return b;
  if (from_.degree() == 1) {
    if (b < from_.characteristic()) return b;
    return std::nullopt;
  }
  for (u64 a = 0; a < from_.order(); ++a)
    if ((*this)(a) == b) return a;
  return std::nullopt;
}

}  // namespace sf
