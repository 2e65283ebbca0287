#pragma once

// m-collections on the point set {0, ..., n-1}.
//
// Essential s-tuples are ranked in lexicographic order (a mixed-radix Lehmer
// code), and each level stores one color id per rank. Constructors number
// colors by first appearance in rank order unless asked to keep given ids;
// equality is always up to relabelling.
//
// Coordinates in projections, permutations and matchings are 1-based, as in
// the usual notation pi^s_{i_1..i_k}.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "schemefactor/error.hpp"
#include "schemefactor/numtheory.hpp"

namespace sf {

using Tuple = std::vector<uint32_t>;
using Perm = std::vector<uint32_t>;  // 0-based image list

namespace tuples {
/// n (n-1) ... (n-s+1)
u64 count(unsigned n, unsigned s);
u64 rank(unsigned n, std::span<const uint32_t> t);
Tuple unrank(unsigned n, unsigned s, u64 r);
/// Delete the 1-based coordinates in `idx` (any order, distinct).
Tuple project(std::span<const uint32_t> t, std::span<const unsigned> idx);
/// (v_1, ..., v_s)^tau = (v_{1^tau}, ..., v_{s^tau}); tau is 0-based.
Tuple permute(std::span<const uint32_t> t, std::span<const uint32_t> tau);
/// All permutations of {0..s-1} in lexicographic order (identity first).
std::vector<Perm> all_perms(unsigned s);
}  // namespace tuples

inline constexpr unsigned kMaxPoints = 64;
inline constexpr u64 kDefaultWorkCap = 10'000'000;

class MCollection {
 public:
  MCollection() = default;
  /// levels[s-1][rank] = color id of the s-th level. With keep_ids the ids
  /// must already be dense (every id in [0, max] used).
  MCollection(unsigned n, std::vector<std::vector<uint32_t>> levels, bool keep_ids = false);

  unsigned n() const { return n_; }
  unsigned m() const { return static_cast<unsigned>(levels_.size()); }
  const std::vector<uint32_t>& colors(unsigned s) const { return levels_.at(s - 1).color; }
  uint32_t num_colors(unsigned s) const { return static_cast<uint32_t>(levels_.at(s - 1).size.size()); }
  uint32_t color_of(std::span<const uint32_t> t) const;
  uint32_t color_at(unsigned s, u64 rank) const { return levels_[s - 1].color[rank]; }
  u64 color_size(unsigned s, uint32_t c) const { return levels_.at(s - 1).size.at(c); }
  /// Least tuple of the color.
  Tuple representative(unsigned s, uint32_t c) const;
  /// All tuples of a color in rank order.
  std::vector<u64> members(unsigned s, uint32_t c) const;
  /// Color of pi_idx(representative(P)); the projected class when P1 holds.
  uint32_t project_color(unsigned s, uint32_t c, std::span<const unsigned> idx) const;
  /// Raw image set {pi_idx(t) : t in P}, as sorted ranks.
  std::vector<u64> project_set(unsigned s, uint32_t c, std::span<const unsigned> idx) const;

  /// Equal partitions at every level.
  friend bool operator==(const MCollection& a, const MCollection& b);

 private:
  struct Level {
    std::vector<uint32_t> color;
    std::vector<u64> size;
    std::vector<u64> rep;
  };
  unsigned n_ = 0;
  std::vector<Level> levels_;
};

struct Violation {
  std::string property;  // "P1", "P2", "P3", "P5", "P6"
  unsigned level = 0;
  std::vector<uint32_t> colors;
  std::vector<Tuple> tuples;
  unsigned coordinate = 0;  // 1-based, for P1/P2
  Perm tau;                 // for P3/P5/P6
  std::string detail;
};

struct PropertyReport {
  unsigned m = 0;
  // indexed by level s; entries 0 and 1 are vacuously true
  std::vector<bool> compatible, regular, invariant, antisymmetric, symmetric;
  bool homogeneous = false;
  std::vector<Violation> violations;

  bool all(const std::vector<bool>& v) const;
  bool is_scheme() const { return all(compatible) && all(regular) && all(invariant); }
  bool is_antisymmetric() const { return all(antisymmetric); }
};

PropertyReport check_properties(const MCollection& pi);
/// Re-checks a violation against the raw partitions; true if it still holds.
bool replay_violation(const MCollection& pi, const Violation& v);

/// |P| / |Q| where Q is a projection of P.
u64 subdegree(const MCollection& pi, unsigned s, uint32_t p, unsigned s_low, uint32_t q);

struct Matching {
  unsigned level = 0;
  uint32_t color = 0;
  std::vector<unsigned> i, j;  // 1-based, strictly increasing
  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Checks both defining equalities on raw tuple sets.
bool verify_matching(const MCollection& pi, const Matching& mt);
/// Builds a Matching, throwing NotAMatching if it fails verification.
Matching make_matching(const MCollection& pi, unsigned level, uint32_t color, std::vector<unsigned> i,
                       std::vector<unsigned> j);

std::vector<Matching> find_matchings(const MCollection& pi);

/// Iterated halving from a color P_t over pi_i(P_t) with subdegree at most ell.
Matching matching_chase(const MCollection& pi, unsigned t, uint32_t p_t, unsigned i, u64 ell);

/// Matching in a homogeneous antisymmetric m-scheme on a prime number of points.
Matching prime_matching(const MCollection& pi, u64 ell);

struct ContradictionWitness {
  u64 r = 0;
  u64 lhs = 0;  // r! * n
  u64 rhs = 0;  // n (n-1) ... (n-r+1)
};
using NonexistenceResult = std::variant<std::monostate, ContradictionWitness>;

NonexistenceResult nonexistence_check(const MCollection& pi);
/// Same verdict from an already computed (possibly hand-made) report.
NonexistenceResult nonexistence_check(const PropertyReport& report, unsigned n);

MCollection orbit_mscheme(const std::vector<Perm>& generators, unsigned n, unsigned m,
                          u64 work_cap = kDefaultWorkCap);

struct CatalogGroup {
  std::string name;
  unsigned degree = 0;
  std::vector<Perm> generators;  // 0-based
};
/// Built-in permutation groups used by scans and tests.
const std::vector<CatalogGroup>& group_catalog();

}  // namespace sf
