#include "schemefactor/numtheory.hpp"

#include <string>

#include "schemefactor/error.hpp"

namespace sf {

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  unsigned twos = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++twos;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < twos; ++i) {
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

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

u64 gcd_u64(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 modinv(u64 a, u64 m) {
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) fail(ErrorKind::InvalidArgument, "modinv: not a unit");
  old_s %= static_cast<__int128>(m);
  if (old_s < 0) old_s += m;
  return static_cast<u64>(old_s);
}

u64 multiplicative_order(u64 a, u64 m) {
  if (m == 1) return 1;
  if (gcd_u64(a % m, m) != 1) fail(ErrorKind::InvalidArgument, "multiplicative_order: not a unit");
  // order divides phi(m); compute phi then strip factors
  u64 phi = m;
  for (auto [p, e] : factorize(m)) phi = phi / p * (p - 1);
  u64 order = phi;
  for (auto [p, e] : factorize(phi)) {
    while (order % p == 0 && powmod(a, order / p, m) == 1) order /= p;
  }
  return order;
}

u64 smooth_divisor(u64 n, u64 r) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "smooth_divisor: N must be >= 1");
  u64 out = 1;
  for (auto [p, e] : factorize(n)) {
    if (p > r) continue;
    for (unsigned i = 0; i < e; ++i) out *= p;
  }
  return out;
}

u64 linnik_p1s(u64 s, u64 cap_factor) {
  if (s == 0) fail(ErrorKind::InvalidArgument, "linnik_p1s: s must be >= 1");
  const u64 cap = cap_factor * s * s;
  // candidates 1 + i*s, i = 1, 2, ...; s = 1 degenerates to a plain prime scan
  for (u64 i = 1; i <= cap; ++i) {
    u64 candidate = 1 + i * s;
    if (is_prime(candidate)) return candidate;
  }
  fail(ErrorKind::ScanCapExceeded, "no prime = 1 mod " + std::to_string(s) + " within " +
                                       std::to_string(cap) + " candidates");
}

unsigned ceil_log2(u64 x) {
  unsigned k = 0;
  while ((u64{1} << k) < x) ++k;
  return k;
}

bool checked_pow(u64 base, unsigned exp, u64 cap, u64& out) {
  u128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > cap) return false;
  }
  out = static_cast<u64>(acc);
  return true;
}

}  // namespace sf
