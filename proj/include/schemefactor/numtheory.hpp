#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sf {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Prime factorisation by trial division (desk-scale inputs), ascending primes.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);

std::vector<u64> prime_divisors(u64 n);

u64 gcd_u64(u64 a, u64 b);

/// Inverse of a modulo m; a must be a unit.
u64 modinv(u64 a, u64 m);

/// Multiplicative order of a modulo m (gcd(a, m) == 1 required).
u64 multiplicative_order(u64 a, u64 m);

/// Largest divisor of `n` whose prime factors are all at most `r`.
u64 smooth_divisor(u64 n, u64 r);

/// Least prime p with p = 1 (mod s), scanning at most `cap_factor * s^2`
/// candidates. Throws ScanCapExceeded beyond that.
u64 linnik_p1s(u64 s, u64 cap_factor = 10);

/// ceil(log2(x)) for integer x >= 1.
unsigned ceil_log2(u64 x);

/// Checked integer power; returns false on overflow past `cap`.
bool checked_pow(u64 base, unsigned exp, u64 cap, u64& out);

}  // namespace sf
