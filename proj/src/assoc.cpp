#include "schemefactor/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sf {

namespace {
constexpr uint32_t kNone = 0xffffffffu;
}

Scheme Scheme::from_matrix(unsigned n, std::vector<uint32_t> color) {
  if (color.size() != static_cast<std::size_t>(n) * n) fail(ErrorKind::NotAScheme, "color matrix is not n x n");
  Scheme s;
  s.n = n;
  s.color = std::move(color);
  uint32_t mx = 0;
  for (uint32_t c : s.color) mx = std::max(mx, c);
  s.num_colors = n == 0 ? 0 : mx + 1;
  s.adjoint.assign(s.num_colors, kNone);
  for (unsigned x = 0; x < n; ++x)
    for (unsigned y = 0; y < n; ++y) {
      uint32_t g = s.at(x, y);
      if (s.adjoint[g] == kNone) s.adjoint[g] = s.at(y, x);
    }
  return s;
}

Scheme Scheme::canonical() const {
  std::vector<uint32_t> relabel(num_colors, kNone);
  relabel[0] = 0;
  uint32_t next = 1;
  for (uint32_t c : color)
    if (relabel[c] == kNone) relabel[c] = next++;
  std::vector<uint32_t> out(color.size());
  for (std::size_t i = 0; i < color.size(); ++i) out[i] = relabel[color[i]];
  return from_matrix(n, std::move(out));
}

std::optional<SchemeViolation> verify_scheme(const Scheme& s) {
  const unsigned n = s.n;
  const uint32_t d1 = s.num_colors;
  for (unsigned x = 0; x < n; ++x)
    for (unsigned y = 0; y < n; ++y)
      if ((s.at(x, y) == 0) != (x == y)) {
        SchemeViolation v;
        v.axiom = "identity";
        v.h = s.at(x, y);
        v.pair1 = {x, y};
        return v;
      }
  std::vector<u64> seen(d1, 0);
  for (uint32_t c : s.color) ++seen[c];
  for (uint32_t g = 0; g < d1; ++g)
    if (seen[g] == 0) {
      SchemeViolation v;
      v.axiom = "nonempty";
      v.h = g;
      return v;
    }
  for (unsigned x = 0; x < n; ++x)
    for (unsigned y = 0; y < n; ++y)
      if (s.adjoint[s.at(x, y)] != s.at(y, x)) {
        SchemeViolation v;
        v.axiom = "adjoint";
        v.h = s.at(x, y);
        v.pair1 = {x, y};
        return v;
      }

  // Reference counts per color h come from its first pair; every later pair
  // must agree. Each pair touches exactly n (f, g) cells, so comparing the
  // touched cells suffices: the reference also sums to n.
  std::vector<u64> ref(static_cast<std::size_t>(d1) * d1 * d1, 0);
  std::vector<std::pair<unsigned, unsigned>> first(d1, {kNone, kNone});
  std::vector<u64> cnt(static_cast<std::size_t>(d1) * d1, 0);
  std::vector<std::size_t> touched;
  touched.reserve(n);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      const uint32_t h = s.at(a, b);
      touched.clear();
      for (unsigned c = 0; c < n; ++c) {
        std::size_t idx = static_cast<std::size_t>(s.at(a, c)) * d1 + s.at(c, b);
        if (cnt[idx]++ == 0) touched.push_back(idx);
      }
      u64* r = &ref[static_cast<std::size_t>(h) * d1 * d1];
      if (first[h].first == kNone) {
        first[h] = {a, b};
        for (auto idx : touched) r[idx] = cnt[idx];
      } else {
        bool ok = true;
        for (auto idx : touched)
          if (r[idx] != cnt[idx]) ok = false;
        if (!ok) {
          for (std::size_t idx = 0; idx < cnt.size(); ++idx)
            if (r[idx] != cnt[idx]) {
              SchemeViolation v;
              v.axiom = "intersection";
              v.f = static_cast<uint32_t>(idx / d1);
              v.g = static_cast<uint32_t>(idx % d1);
              v.h = h;
              v.pair1 = first[h];
              v.pair2 = {a, b};
              v.count1 = r[idx];
              v.count2 = cnt[idx];
              return v;
            }
        }
      }
      for (auto idx : touched) cnt[idx] = 0;
    }
  return std::nullopt;
}

IntersectionTensor intersection_tensor(const Scheme& s) {
  if (auto v = verify_scheme(s))
    fail(ErrorKind::NotAScheme, "scheme axiom '" + v->axiom + "' fails at color " + std::to_string(v->h));
  const unsigned n = s.n;
  const uint32_t d1 = s.num_colors;
  IntersectionTensor t;
  t.d1 = d1;
  t.n = n;
  t.adjoint = s.adjoint;
  t.c.assign(static_cast<std::size_t>(d1) * d1 * d1, 0);
  std::vector<bool> done(d1, false);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      const uint32_t h = s.at(a, b);
      if (done[h]) continue;
      done[h] = true;
      for (unsigned c = 0; c < n; ++c) ++t.at(h, s.at(a, c), s.at(c, b));
    }
  t.valency.resize(d1);
  t.indistinguishing.assign(d1, 0);
  for (uint32_t g = 0; g < d1; ++g) t.valency[g] = t.at(0, g, s.adjoint[g]);
  for (uint32_t g = 0; g < d1; ++g)
    for (uint32_t v = 0; v < d1; ++v) t.indistinguishing[g] += t.at(g, v, s.adjoint[v]);
  return t;
}

std::optional<FailedIdentity> verify_identities(const IntersectionTensor& t) {
  const uint32_t d1 = t.d1;
  const auto& adj = t.adjoint;
  const auto& nv = t.valency;
  auto failed = [](int id, std::vector<uint32_t> w, long long l, long long r) {
    return FailedIdentity{id, std::move(w), l, r};
  };
  // (3) sum_g c^f_{ge} = n_{e*}
  for (uint32_t f = 0; f < d1; ++f)
    for (uint32_t e = 0; e < d1; ++e) {
      u64 sum = 0;
      for (uint32_t g = 0; g < d1; ++g) sum += t.at(f, g, e);
      if (sum != nv[adj[e]]) return failed(3, {f, e}, static_cast<long long>(sum), static_cast<long long>(nv[adj[e]]));
    }
  // (4) sum_g c^g_{ef} n_g = n_e n_f
  for (uint32_t e = 0; e < d1; ++e)
    for (uint32_t f = 0; f < d1; ++f) {
      u64 sum = 0;
      for (uint32_t g = 0; g < d1; ++g) sum += t.at(g, e, f) * nv[g];
      if (sum != nv[e] * nv[f]) return failed(4, {e, f}, static_cast<long long>(sum), static_cast<long long>(nv[e] * nv[f]));
    }
  // (1) c^f_{de} = c^{f*}_{e*d*}
  for (uint32_t d = 0; d < d1; ++d)
    for (uint32_t e = 0; e < d1; ++e)
      for (uint32_t f = 0; f < d1; ++f)
        if (t.at(f, d, e) != t.at(adj[f], adj[e], adj[d]))
          return failed(1, {d, e, f}, static_cast<long long>(t.at(f, d, e)),
                        static_cast<long long>(t.at(adj[f], adj[e], adj[d])));
  // (2) c^e_{df} n_e = c^d_{ef*} n_d
  for (uint32_t d = 0; d < d1; ++d)
    for (uint32_t e = 0; e < d1; ++e)
      for (uint32_t f = 0; f < d1; ++f) {
        u64 l = t.at(e, d, f) * nv[e], r = t.at(d, e, adj[f]) * nv[d];
        if (l != r) return failed(2, {d, e, f}, static_cast<long long>(l), static_cast<long long>(r));
      }
  // |S_v| counted two ways, for u != 1 and v not in {1, u}
  for (uint32_t u = 1; u < d1; ++u)
    for (uint32_t v = 1; v < d1; ++v) {
      if (v == u) continue;
      u64 lhs = 0, rhs = 0;
      for (uint32_t b = 1; b < d1; ++b) lhs += t.at(u, b, u) * t.at(b, v, adj[v]);
      for (uint32_t w = 0; w < d1; ++w) {
        u64 cw = t.at(w, adj[u], v);
        if (cw != 0) rhs += t.at(u, v, adj[w]) * (cw - 1);
      }
      if (lhs != rhs) return failed(5, {u, v}, static_cast<long long>(lhs), static_cast<long long>(rhs));
    }
  return std::nullopt;
}

std::optional<FailedIdentity> verify_identities(const Scheme& s) { return verify_identities(intersection_tensor(s)); }

Scheme cyclotomic_scheme(u64 p, u64 e) {
  if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  u64 alpha = 1;
  if (p > 2) {
    auto primes = prime_divisors(p - 1);
    for (alpha = 2;; ++alpha) {
      bool ok = true;
      for (u64 l : primes)
        if (powmod(alpha, (p - 1) / l, p) == 1) ok = false;
      if (ok) break;
    }
  }
  return cyclotomic_scheme(p, e, alpha);
}

Scheme cyclotomic_scheme(u64 p, u64 e, u64 alpha) {
  if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (e == 0 || (p - 1) % e != 0)
    fail(ErrorKind::EDoesNotDivide, std::to_string(e) + " does not divide " + std::to_string(p - 1));
  if (p > 4096) fail(ErrorKind::InvalidArgument, "cyclotomic_scheme is limited to p <= 4096");
  if (multiplicative_order(alpha % p, p) != p - 1)
    fail(ErrorKind::InvalidArgument, std::to_string(alpha) + " is not a primitive root mod " + std::to_string(p));
  std::vector<u64> log(p, 0);
  u64 cur = 1;
  for (u64 i = 0; i < p - 1; ++i) {
    log[cur] = i;
    cur = cur * alpha % p;
  }
  const unsigned n = static_cast<unsigned>(p);
  std::vector<uint32_t> color(static_cast<std::size_t>(n) * n, 0);
  for (unsigned x = 0; x < n; ++x)
    for (unsigned y = 0; y < n; ++y) {
      if (x == y) continue;
      u64 diff = (x + p - y) % p;
      u64 i = log[diff] % e;
      color[static_cast<std::size_t>(x) * n + y] = static_cast<uint32_t>(i == 0 ? e : i);
    }
  return Scheme::from_matrix(n, std::move(color));
}

Rational::Rational(u64 n, u64 d) : num(n), den(d) {
  if (d == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
  u64 g = std::gcd(n, d);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

BoundsProfile auto_profile(const IntersectionTensor& t, u64 ell) {
  BoundsProfile p;
  p.ell = ell;
  if (t.d1 < 2) return p;
  u64 mn = ~u64{0}, mx = 0, cmax = 0;
  for (uint32_t g = 1; g < t.d1; ++g) {
    mn = std::min(mn, t.valency[g]);
    mx = std::max(mx, t.valency[g]);
    cmax = std::max(cmax, t.indistinguishing[g]);
  }
  p.k = mn;
  p.delta1 = Rational(1);
  p.delta1p = Rational(mx, mn);
  p.delta2p = Rational(1);
  p.c = cmax;
  return p;
}

SearchResult small_intersection_search(const Scheme& s, u64 ell, std::optional<BoundsProfile> given) {
  if (ell < 2) fail(ErrorKind::BadEll, "ell must be at least 2, got " + std::to_string(ell));
  const IntersectionTensor t = intersection_tensor(s);
  SearchResult out;
  out.profile = given ? *given : auto_profile(t, ell);
  out.profile.ell = ell;
  const BoundsProfile& bp = out.profile;
  const uint32_t d1 = t.d1;
  const auto& adj = t.adjoint;

  for (uint32_t u = 1; u < d1 && !out.witness; ++u)
    for (uint32_t v = 1; v < d1 && !out.witness; ++v) {
      if (u == v) continue;
      const uint32_t us = adj[u];
      for (uint32_t w = 1; w < d1 && !out.witness; ++w) {
        const u64 c1 = t.at(w, us, v);
        if (c1 == 0 || c1 >= ell) continue;
        for (uint32_t w2 = 1; w2 < d1; ++w2) {
          if (w2 == w) continue;
          const u64 c2 = t.at(w2, us, v);
          if (c2 >= c1 && c2 < ell) {
            out.witness = IntersectionWitness{u, v, w, w2, c1, c2};
            break;
          }
        }
      }
    }

  if (d1 >= 2 && bp.k > 0) {
    // delta1 k <= n_g <= delta1' k and c(g) <= delta2' c for every g != 1
    out.profile_valid = true;
    for (uint32_t g = 1; g < d1; ++g) {
      const Rational ng(t.valency[g]);
      const Rational lo(bp.delta1.num * bp.k, bp.delta1.den);
      const Rational hi(bp.delta1p.num * bp.k, bp.delta1p.den);
      const Rational cg(t.indistinguishing[g]);
      const Rational cb(bp.delta2p.num * bp.c, bp.delta2p.den);
      if (ng < lo || hi < ng || cb < cg) out.profile_valid = false;
    }
    // |G| >= 2 (d1'/d1)^3 d2' c / (ell-1) + 2, exactly over the integers
    const u128 a3 = static_cast<u128>(bp.delta1p.num) * bp.delta1p.num * bp.delta1p.num;
    const u128 b3 = static_cast<u128>(bp.delta1p.den) * bp.delta1p.den * bp.delta1p.den;
    const u128 d3num = static_cast<u128>(bp.delta1.den) * bp.delta1.den * bp.delta1.den;
    const u128 d3den = static_cast<u128>(bp.delta1.num) * bp.delta1.num * bp.delta1.num;
    const u128 num = 2 * a3 * d3num * bp.delta2p.num * bp.c;
    const u128 den = b3 * d3den * bp.delta2p.den * (ell - 1);
    out.hypothesis_held = static_cast<u128>(d1 - 2) * den >= num;
    // 1 < ell < (d1^2 / d1') k
    const u128 lhs = static_cast<u128>(ell) * bp.delta1.den * bp.delta1.den * bp.delta1p.num;
    const u128 rhs = static_cast<u128>(bp.delta1.num) * bp.delta1.num * bp.delta1p.den * bp.k;
    out.ell_in_range = ell > 1 && lhs < rhs;
  }

  bool equal_valency = d1 >= 2;
  for (uint32_t g = 1; g < d1; ++g)
    if (t.valency[g] != t.valency[1]) equal_valency = false;
  out.prime_order = is_prime(s.n) && equal_valency;
  if (d1 >= 2) {
    const u64 k = t.valency[1];
    out.corollary_bound = static_cast<u128>(d1 - 2) * (ell - 1) >= static_cast<u128>(2) * (k - 1);
  }

  if (!out.witness && out.profile_valid && out.hypothesis_held && out.ell_in_range)
    fail(ErrorKind::TheoremContradiction,
         "no small intersection numbers although |G| = " + std::to_string(d1) + " meets the bound for ell = " +
             std::to_string(ell));
  return out;
}

MCollection scheme_to_3scheme(const Scheme& s) {
  if (s.n < 3) fail(ErrorKind::TooSmall, "scheme_to_3scheme needs at least 3 points");
  if (auto v = verify_scheme(s)) fail(ErrorKind::NotAScheme, "input fails axiom '" + v->axiom + "'");
  const unsigned n = s.n;
  std::vector<std::vector<uint32_t>> levels(3);
  levels[0].assign(n, 0);
  levels[1].resize(tuples::count(n, 2));
  for (u64 r = 0; r < levels[1].size(); ++r) {
    Tuple t = tuples::unrank(n, 2, r);
    levels[1][r] = s.at(t[0], t[1]) - 1;
  }
  // triple colors keyed by the colors of (1,2), (1,3), (2,3)
  const u64 d1 = s.num_colors;
  const u64 cnt3 = tuples::count(n, 3);
  std::vector<u64> key(cnt3);
  for (u64 r = 0; r < cnt3; ++r) {
    Tuple t = tuples::unrank(n, 3, r);
    key[r] = (static_cast<u64>(s.at(t[0], t[1])) * d1 + s.at(t[0], t[2])) * d1 + s.at(t[1], t[2]);
  }
  std::vector<u64> sorted = key;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  levels[2].resize(cnt3);
  for (u64 r = 0; r < cnt3; ++r)
    levels[2][r] = static_cast<uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), key[r]) - sorted.begin());
  return MCollection(n, std::move(levels), true);
}

Scheme level2_to_scheme(const MCollection& pi) {
  if (pi.m() < 3) fail(ErrorKind::Not3Scheme, "need levels 1..3");
  if (pi.num_colors(1) != 1) fail(ErrorKind::NotHomogeneous, "level 1 has " + std::to_string(pi.num_colors(1)) + " colors");
  MCollection low(pi.n(), {pi.colors(1), pi.colors(2), pi.colors(3)}, true);
  PropertyReport rep = check_properties(low);
  if (!rep.is_scheme()) fail(ErrorKind::Not3Scheme, "levels 1..3 are not compatible, regular and invariant");
  const unsigned n = pi.n();
  std::vector<uint32_t> color(static_cast<std::size_t>(n) * n, 0);
  for (u64 r = 0; r < tuples::count(n, 2); ++r) {
    Tuple t = tuples::unrank(n, 2, r);
    color[static_cast<std::size_t>(t[0]) * n + t[1]] = pi.color_at(2, r) + 1;
  }
  return Scheme::from_matrix(n, std::move(color));
}

DeviationReport cyclotomic_deviation_report(u64 p, u64 e) {
  const Scheme s = cyclotomic_scheme(p, e);
  const IntersectionTensor t = intersection_tensor(s);
  DeviationReport rep;
  rep.p = p;
  rep.e = e;
  const double center = static_cast<double>(p + 1) / static_cast<double>(e * e);
  for (uint32_t r = 1; r < t.d1; ++r)
    for (uint32_t q = 1; q < t.d1; ++q)
      for (uint32_t h = 1; h < t.d1; ++h) {
        DeviationRow row;
        row.r = r;
        row.s = q;
        row.t = h;
        row.c = t.at(h, r, q);
        row.deviation = std::abs(static_cast<double>(row.c) - center);
        rep.max_deviation = std::max(rep.max_deviation, row.deviation);
        rep.rows.push_back(row);
      }
  rep.bound = std::sqrt(static_cast<double>(p)) + static_cast<double>(e);
  rep.within_bound = rep.max_deviation <= rep.bound;
  return rep;
}

}  // namespace sf
