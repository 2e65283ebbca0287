#pragma once

// Adleman-Manders-Miller r-th roots, written once for any commutative
// k-algebra that can answer "is x equal to the scalar c?". Over a field the
// answer is yes/no. Over a product of fields the answer can be "only in some
// components", in which case x - c is a zero divisor and we hand it back.

#include <concepts>
#include <cstdint>

#include "schemefactor/gf.hpp"

namespace sf {

enum class ScalarTest { Equal, Different, ZeroDivisor };

template <class R>
concept RadicalRing = requires(const R& ring, const typename R::Element& x, u64 e, u64 c,
                               typename R::Element& witness) {
  { ring.one() } -> std::convertible_to<typename R::Element>;
  { ring.mul(x, x) } -> std::convertible_to<typename R::Element>;
  { ring.scale(x, c) } -> std::convertible_to<typename R::Element>;
  { ring.compare_scalar(x, c, witness) } -> std::same_as<ScalarTest>;
};

template <class R>
typename R::Element ring_pow(const R& ring, typename R::Element base, u64 e) {
  typename R::Element acc = ring.one();
  while (e != 0) {
    if (e & 1) acc = ring.mul(acc, base);
    e >>= 1;
    if (e != 0) base = ring.mul(base, base);
  }
  return acc;
}

template <class R>
struct RadicalOutcome {
  enum class Kind { Root, NotAPower, ZeroDivisor } kind;
  typename R::Element value;
};

/// Root y with y^r = a, for a prime r dividing |k| - 1. `nonresidue` must be
/// an r-th nonresidue of the scalar field k.
template <RadicalRing R>
RadicalOutcome<R> amm_root(const R& ring, const FieldCtx& k, const typename R::Element& a, u64 r,
                           u64 nonresidue) {
  using Out = RadicalOutcome<R>;
  using Elem = typename R::Element;
  const u64 q1 = k.order() - 1;
  if (r < 2 || q1 % r != 0) fail(ErrorKind::NoNonresidue, "amm_root: r does not divide |k|-1");

  Elem witness{};
  Elem test = ring_pow(ring, a, q1 / r);
  switch (ring.compare_scalar(test, 1, witness)) {
    case ScalarTest::Different: return {Out::Kind::NotAPower, Elem{}};
    case ScalarTest::ZeroDivisor: return {Out::Kind::ZeroDivisor, witness};
    case ScalarTest::Equal: break;
  }

  unsigned e = 0;
  u64 t = q1;
  u64 re = 1;  // r^e
  while (t % r == 0) {
    t /= r;
    re *= r;
    ++e;
  }
  // k0 = r^{-1} mod t
  u64 k0 = 0;
  if (t > 1) k0 = modinv(r % t, t);
  Elem x0 = ring_pow(ring, a, k0);
  // x0^r = a * err with err = (a^t)^E, E = (r*k0 - 1)/t taken mod r^e
  __int128 big = (static_cast<__int128>(r) * k0 - 1) / static_cast<__int128>(t);
  __int128 emod = big % static_cast<__int128>(re);
  if (emod < 0) emod += re;
  Elem at = ring_pow(ring, a, t);
  Elem err = ring_pow(ring, at, static_cast<u64>(emod));
  // h = err^{-1}; the Sylow r-part has exponent dividing r^e
  Elem h = ring_pow(ring, err, re - 1);

  const u64 c = k.pow(nonresidue, t);        // generator of the Sylow r-subgroup of k*
  const u64 zeta = k.pow(c, re / r);         // primitive r-th root of unity
  u64 log = 0;                               // discrete log of h to base c
  u64 rpow = 1;
  for (unsigned i = 0; i < e; ++i) {
    u64 cinv = k.inv(k.pow(c, log));
    Elem y = ring_pow(ring, ring.scale(h, cinv), re / rpow / r);
    u64 candidate = 1;
    bool found = false;
    for (u64 j = 0; j < r; ++j) {
      ScalarTest cmp = ring.compare_scalar(y, candidate, witness);
      if (cmp == ScalarTest::ZeroDivisor) return {Out::Kind::ZeroDivisor, witness};
      if (cmp == ScalarTest::Equal) {
        log += j * rpow;
        found = true;
        break;
      }
      candidate = k.mul(candidate, zeta);
    }
    if (!found) return {Out::Kind::NotAPower, Elem{}};
    rpow *= r;
  }
  if (log % r != 0) return {Out::Kind::NotAPower, Elem{}};
  return {Out::Kind::Root, ring.scale(x0, k.pow(c, log / r))};
}

/// The field itself as a RadicalRing.
struct FieldRing {
  using Element = u64;
  FieldCtx k;
  Element one() const { return 1; }
  Element mul(Element a, Element b) const { return k.mul(a, b); }
  Element scale(Element a, u64 c) const { return k.mul(a, c); }
  ScalarTest compare_scalar(Element x, u64 c, Element&) const {
    return x == c ? ScalarTest::Equal : ScalarTest::Different;
  }
};

}  // namespace sf
