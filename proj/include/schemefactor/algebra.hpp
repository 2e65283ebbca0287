#pragma once

// Finite-dimensional commutative algebras used by the factoring pipeline.
//
// A = k[x]/(f) for a monic f of degree n. The tensor power A^{(x)s} is stored
// in the monomial basis x_1^{a_1} ... x_s^{a_s}, 0 <= a_l < n, slot 1 being the
// least significant digit of the index. When f splits with distinct roots V,
// A^{(x)s} is the algebra of functions on V^s; the essential part A^(s) is the
// ideal of functions supported on tuples with distinct entries, generated by
// the idempotent E_s = prod_{i<j} (x_i - x_j)^{Q-1}.
//
// Ideals of these (reduced) algebras are handled through their idempotent
// generators, which are unique, so equality of ideals is equality of vectors.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "schemefactor/gf.hpp"
#include "schemefactor/linalg.hpp"

namespace sf {

inline constexpr u64 kDefaultDimCap = 1'000'000;
inline constexpr u64 kDefaultTensorCap = 20'000;

class TensorAlgebra {
 public:
  /// f must be monic of degree >= 1 with coefficients in k.
  TensorAlgebra(FieldCtx k, Poly f);

  const FieldCtx& field() const { return k_; }
  const Poly& poly() const { return f_; }
  unsigned n() const { return n_; }
  /// n^s; throws Overflow past 2^40.
  std::size_t size(unsigned s) const;

  Vec zero(unsigned s) const { return Vec(size(s), 0); }
  Vec one(unsigned s) const;
  Vec scalar(unsigned s, u64 c) const;
  /// The variable x_slot (1-based).
  Vec var(unsigned s, unsigned slot) const;

  Vec add(const Vec& a, const Vec& b) const;
  Vec sub(const Vec& a, const Vec& b) const;
  Vec scale(const Vec& a, u64 c) const;
  Vec mul(unsigned s, const Vec& a, const Vec& b) const;
  Vec mul_var(unsigned s, const Vec& a, unsigned slot) const;
  Vec pow(unsigned s, Vec a, u64 e) const;
  /// a^{Q-1}: the idempotent of the support of a when A splits.
  Vec support(unsigned s, const Vec& a) const;

  /// Relative trace over the copy of A^{(x)(s-1)} missing `slot`: the fibre sum.
  Vec trace_slot(unsigned s, const Vec& a, unsigned slot) const;
  /// iota_slot: A^{(x)(s-1)} -> A^{(x)s}, a function of s-1 points becomes a
  /// function of s points ignoring coordinate `slot`.
  Vec embed_slot(unsigned s, const Vec& a, unsigned slot) const;
  /// b(v) = a(v^tau) with (v^tau)_i = v_{tau(i)}, tau 0-based.
  Vec permute(unsigned s, const Vec& a, std::span<const uint32_t> tau) const;

  /// Values of a on the grid pts^s, indexed like the monomials (slot 1 fastest).
  Vec eval_grid(unsigned s, const Vec& a, std::span<const u64> pts) const;

  /// E_s, cached.
  const Vec& essential_idempotent(unsigned s) const;
  /// Exact dimension of e*A^{(x)s} for an idempotent e in A^(s); needs char > n-s
  /// (always true over the prime field of a split f).
  u64 idempotent_dim(unsigned s, const Vec& e) const;
  /// Indicator idempotents [t = c] for c = 0..bound, where t takes values in
  /// {0, ..., bound} pointwise.
  std::vector<Vec> value_classes(unsigned s, const Vec& t, unsigned bound) const;

  /// Tr_{A/k}(x^c) for c < n: power sums of the roots.
  u64 power_sum(unsigned c) const { return power_sums_.at(c); }

 private:
  const std::vector<u64>& spread(unsigned s) const;

  FieldCtx k_;
  Poly f_;
  unsigned n_;
  std::vector<Vec> nf_;          // nf_[e] = x^e mod f, e < 2n
  std::vector<u64> power_sums_;  // c < n
  mutable std::vector<std::vector<u64>> spread_;
  mutable std::vector<Vec> essential_;
};

/// Algebra with explicit structure constants in a fixed basis.
struct Algebra {
  FieldCtx field;
  std::size_t dim = 0;
  std::vector<u64> table;  // coefficient of b_l in b_i b_j at (i*dim + j)*dim + l
  Vec one;

  Vec mul(const Vec& a, const Vec& b) const;
  /// Commutativity, associativity and unit on all basis triples (small dims).
  bool check_axioms() const;
};

/// k[x]/(f) in the basis 1, x, ..., x^{n-1}; no splitting requirement.
Algebra polynomial_algebra(const Poly& f);
/// Same over k (f is mapped into k), after checking f splits with distinct
/// roots over its own field. Throws NotSplit.
Algebra quotient_algebra(const Poly& f, const FieldCtx& k);

struct EssentialPart {
  std::shared_ptr<const TensorAlgebra> tensor;
  unsigned s = 0;
  Vec identity;  // E_s
  u64 dim = 0;   // n (n-1) ... (n-s+1)
};

/// Throws ZeroAlgebra if s > n, DimCapExceeded if dim > dim_cap or n^s > tensor_cap.
EssentialPart essential_part(std::shared_ptr<const TensorAlgebra> tensor, unsigned s, u64 dim_cap = kDefaultDimCap,
                             u64 tensor_cap = kDefaultTensorCap);
/// E_s * iota_j(a) for a in A^(s-1).
Vec embed(const EssentialPart& target, const Vec& a, unsigned j);
/// RREF basis of the ideal e A^{(x)s}.
std::vector<Vec> ideal_basis(const TensorAlgebra& tensor, unsigned s, const Vec& e);
/// RREF basis of E_s A^{(x)s} by linear algebra (small cases).
std::vector<Vec> essential_basis(const EssentialPart& part);
/// RREF basis of the intersection over i<j of the ideals generated by
/// iota_i(b) - iota_j(b), b a basis of A (small cases; used as a cross-check).
std::vector<Vec> diagonal_ideal_intersection(const TensorAlgebra& tensor, unsigned s);

/// A commutative algebra given by operations, for automorphism splitting.
struct AlgebraView {
  const FieldCtx* field = nullptr;
  Vec one;
  std::function<Vec(const Vec&, const Vec&)> mul;
  /// Algebra generators, tried in order when looking for eigenvectors.
  std::vector<Vec> generators;
  /// A basis of the algebra (only needed when r equals the characteristic).
  std::function<std::vector<Vec>()> basis;
};

struct SplitOutcome {
  bool split = false;
  Vec zero_divisor;  // nonzero, not invertible; valid when split
};

/// sigma must be an algebra automorphism of prime order r with r | Q-1 or
/// r = char k. Throws TrivialAutomorphism, MissingRootOfUnity.
SplitOutcome split_by_automorphism(const AlgebraView& b, const std::function<Vec(const Vec&)>& sigma, u64 r);
/// Matrix form: sigma(a) = sigma * a on coordinate columns.
SplitOutcome split_by_automorphism(const Algebra& b, const Matrix& sigma, u64 r);

}  // namespace sf
