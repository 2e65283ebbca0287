#pragma once

// Ideal systems over the essential parts A^(1), ..., A^(m) of A = k[x]/(f),
// the refinement rules, matching-driven refinement and the factoring drivers.
//
// Each level holds pairwise orthogonal idempotents summing to E_s. The rules
// never evaluate at roots: fibre structure comes from relative traces, and
// the only roots of unity used are those of the working field k.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "schemefactor/algebra.hpp"
#include "schemefactor/mscheme.hpp"

namespace sf {

enum class Rule { R1, R2, R3, R4, R5 };
std::string rule_name(Rule r);

struct LogEntry {
  std::string event;  // R1..R5, M (matching), level, field, factor, part, stuck
  unsigned level = 0;
  std::vector<u64> args;
  std::vector<u64> dims;  // dimensions of the pieces produced
};
/// Compact JSON array, one object per entry.
std::string log_to_json(const std::vector<LogEntry>& log);

struct Ideal {
  Vec idempotent;
  u64 dim = 0;
};

struct FactorOptions {
  u64 dim_cap = kDefaultDimCap;
  u64 tensor_cap = kDefaultTensorCap;
  /// Bound on the order of a matching automorphism before giving up.
  u64 order_cap = 1'000'000;
};

struct StepResult {
  enum class Kind { NoChange, Refined, Factor, NeedsPrime } kind = Kind::NoChange;
  Poly factor;    // Factor: over the field of the input polynomial
  u64 prime = 0;  // NeedsPrime: a prime order with no root of unity in k
};

class IdealSystem {
 public:
  /// f monic, split and squarefree over its own field; k an extension of it.
  /// Starts with the single ideal A^(s) at each level s <= m.
  IdealSystem(const Poly& f, const FieldCtx& k, unsigned m, FactorOptions opts = {});

  unsigned n() const { return tensor_->n(); }
  unsigned m() const { return static_cast<unsigned>(levels_.size()); }
  const TensorAlgebra& tensor() const { return *tensor_; }
  const Poly& base_poly() const { return f_; }
  const std::vector<Ideal>& level(unsigned s) const { return levels_.at(s - 1).ideals; }
  const std::vector<LogEntry>& log() const { return log_; }
  void note(LogEntry e) { log_.push_back(std::move(e)); }

  void add_level();
  /// Replace a level wholesale (tests); throws InvalidSystem unless the
  /// idempotents are orthogonal and sum to E_s.
  void set_level(unsigned s, const std::vector<Vec>& idempotents);

  StepResult refine_step(Rule rule);
  /// First effective rule in the order R4, R1, R2, R3, R5.
  StepResult sweep();

  /// Matchings of the induced scheme; needs a system stable under R1 and R2.
  std::vector<Matching> matchings() const;
  StepResult matching_refinement(const Matching& mt);

  /// Orthogonal idempotents summing to E_s with exact dimension sums, every level.
  bool consistent() const;

 private:
  struct Level {
    std::vector<Ideal> ideals;
    std::vector<Vec> bits;  // bits[b] = sum of ideals whose index has bit b set
    std::vector<u64> hashes;  // of each idempotent up to scaling
    std::unordered_map<u64, std::vector<std::size_t>> index;
  };
  struct Located {
    std::size_t index = 0;
    bool inside = true;  // the element lies inside one ideal
    Vec part;            // element times that ideal
  };

  void rebuild_index(unsigned s);
  u64 shape_hash(const Vec& v) const;
  std::optional<std::pair<std::size_t, u64>> find_multiple(unsigned s, const Vec& t) const;
  Located locate(unsigned s, const Vec& t) const;
  void split(unsigned s, std::size_t i, std::vector<Vec> pieces, LogEntry entry);
  Vec proj_chain(unsigned s, std::size_t p, std::span<const unsigned> coords, std::size_t& q, bool& injective) const;
  Poly level_one_factor(const Vec& e) const;

  StepResult r1();
  StepResult r2();
  StepResult r3();
  StepResult r4();
  StepResult r5();

  Poly f_;  // over the input field
  std::shared_ptr<const TensorAlgebra> tensor_;
  FactorOptions opts_;
  std::vector<Level> levels_;
  std::vector<LogEntry> log_;
};

struct StuckCertificate {
  bool idempotent = false;
  bool sums = false;
  bool dimensions = false;
  bool orthogonal = false;  // follows from the three above
  bool stable = false;      // no rule acts
  bool no_matching = false;
  bool homogeneous = false;  // level 1 is a single ideal
  std::vector<u64> level_dims;
  bool valid() const { return idempotent && sums && dimensions && orthogonal && stable && no_matching && homogeneous; }
};
StuckCertificate certify(const IdealSystem& sys);

struct FactorResult {
  enum class Status { Factored, Stuck } status = Status::Stuck;
  Poly factor;             // canonical least factor found
  std::vector<Poly> parts;  // finest factorization reached, in canonical order
  unsigned m_used = 0;
  std::vector<LogEntry> log;
  std::shared_ptr<IdealSystem> stuck;
  std::optional<StuckCertificate> certificate;
};

/// Canonical order on factors: degree, then the negated coefficients from
/// x^{d-1} down (for linear factors: by root).
bool factor_less(const Poly& a, const Poly& b);

/// Iterative deepening over m' = 2..min(m, deg f); every factor found is split
/// further with the same procedure. Throws NotSplit, DimCapExceeded.
FactorResult iks_factor(const Poly& f, unsigned m, FactorOptions opts = {});

struct PrimeDegreePlan {
  u64 smooth = 0;  // largest r-smooth divisor of n-1
  u64 ell_prime = 0;
  unsigned m = 0;
};
/// Checks the preconditions (NotPrimeDegree, SmoothDivisorTooSmall) and the depth.
PrimeDegreePlan prime_degree_plan(const Poly& f, u64 r, u64 ell);
/// A Stuck outcome contradicts the theorem and is raised as TheoremContradiction.
FactorResult prime_degree_factor(const Poly& f, u64 r, u64 ell, FactorOptions opts = {});

/// Transparent model: the m-collection of supports, given the distinct roots of
/// f (in the input field). Colors are ideal indices. Throws NotAPartition.
MCollection supports(const IdealSystem& sys, std::span<const u64> roots);

}  // namespace sf
