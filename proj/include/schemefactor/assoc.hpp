#pragma once

// Association schemes on {0, ..., n-1} given by a color matrix. Color 0 is
// the identity relation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schemefactor/error.hpp"
#include "schemefactor/mscheme.hpp"
#include "schemefactor/numtheory.hpp"

namespace sf {

struct Scheme {
  unsigned n = 0;
  uint32_t num_colors = 0;       // |G| = d + 1
  std::vector<uint32_t> color;   // row-major n x n
  std::vector<uint32_t> adjoint; // g -> g*

  uint32_t at(unsigned x, unsigned y) const { return color[static_cast<std::size_t>(x) * n + y]; }

  /// Fills num_colors and adjoint from the matrix. Throws NotAScheme when the
  /// matrix is malformed (ids not dense, transpose not a single class, ...).
  static Scheme from_matrix(unsigned n, std::vector<uint32_t> color);
  /// Relabel colors by first appearance in row-major order (0 stays 0).
  Scheme canonical() const;
  friend bool operator==(const Scheme&, const Scheme&) = default;
};

struct SchemeViolation {
  std::string axiom;  // "identity", "adjoint", "intersection"
  uint32_t f = 0, g = 0, h = 0;
  std::pair<unsigned, unsigned> pair1, pair2;
  u64 count1 = 0, count2 = 0;
};

std::optional<SchemeViolation> verify_scheme(const Scheme& s);

struct IntersectionTensor {
  uint32_t d1 = 0;  // number of colors
  unsigned n = 0;
  std::vector<u64> c;  // c[(h*d1 + f)*d1 + g] = c^h_{fg}
  std::vector<u64> valency;
  std::vector<u64> indistinguishing;
  std::vector<uint32_t> adjoint;

  u64 at(uint32_t h, uint32_t f, uint32_t g) const { return c[(static_cast<std::size_t>(h) * d1 + f) * d1 + g]; }
  u64& at(uint32_t h, uint32_t f, uint32_t g) { return c[(static_cast<std::size_t>(h) * d1 + f) * d1 + g]; }
};

IntersectionTensor intersection_tensor(const Scheme& s);

struct FailedIdentity {
  int id = 0;  // 1-4 as in the standard identity list, 5 = double counting
  std::vector<uint32_t> witness;
  long long lhs = 0, rhs = 0;
};

std::optional<FailedIdentity> verify_identities(const Scheme& s);
std::optional<FailedIdentity> verify_identities(const IntersectionTensor& t);

/// Colors x - y in alpha^i <alpha^e>, i = 1..e, alpha the least primitive root.
Scheme cyclotomic_scheme(u64 p, u64 e);
/// Same with an explicit primitive root (for generator-independence checks).
Scheme cyclotomic_scheme(u64 p, u64 e, u64 alpha);

/// Exact nonnegative rational.
struct Rational {
  u64 num = 0, den = 1;
  Rational() = default;
  Rational(u64 n, u64 d = 1);
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return static_cast<u128>(a.num) * b.den <=> static_cast<u128>(b.num) * a.den;
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

struct BoundsProfile {
  u64 k = 0;
  Rational delta1{1}, delta1p{1}, delta2p{1};
  u64 c = 0;
  u64 ell = 0;
};

/// k = min valency, delta1 = 1, delta1' = max valency / k, c = max c(g), delta2' = 1.
BoundsProfile auto_profile(const IntersectionTensor& t, u64 ell);

struct IntersectionWitness {
  uint32_t u = 0, v = 0, w = 0, w2 = 0;
  u64 c1 = 0, c2 = 0;
};

struct SearchResult {
  std::optional<IntersectionWitness> witness;
  BoundsProfile profile;
  bool profile_valid = false;     // valency and c(g) bounds hold for every g != 1
  bool hypothesis_held = false;   // |G| >= 2 (d1'/d1)^3 d2' c / (ell-1) + 2
  bool ell_in_range = false;      // 1 < ell < (d1^2 / d1') k
  bool prime_order = false;       // n prime and all nontrivial valencies equal
  bool corollary_bound = false;   // |G| >= 2 (k-1)/(ell-1) + 2
};

/// Lexicographically first u != v, w != w' (all nontrivial) with
/// 0 < c^w_{u*v} <= c^{w'}_{u*v} < ell. Throws TheoremContradiction if the
/// full theorem hypothesis holds and no witness exists.
SearchResult small_intersection_search(const Scheme& s, u64 ell, std::optional<BoundsProfile> profile = {});

MCollection scheme_to_3scheme(const Scheme& s);
Scheme level2_to_scheme(const MCollection& pi);

struct DeviationRow {
  uint32_t r = 0, s = 0, t = 0;
  u64 c = 0;
  double deviation = 0;
};

struct DeviationReport {
  u64 p = 0, e = 0;
  std::vector<DeviationRow> rows;
  double max_deviation = 0;
  double bound = 0;  // sqrt(p) + e
  bool within_bound = false;
};

DeviationReport cyclotomic_deviation_report(u64 p, u64 e);

}  // namespace sf
