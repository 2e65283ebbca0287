#include <memory>
#include <random>

#include "doctest.h"
#include "schemefactor/algebra.hpp"

using namespace sf;

namespace {

Poly poly(u64 p, std::initializer_list<long long> c) {
  auto k = FieldCtx::make(p, 1);
  std::vector<long long> v(c);
  return Poly::from_ints(k, v);
}

std::shared_ptr<const TensorAlgebra> tensor(const Poly& f) { return std::make_shared<TensorAlgebra>(f.field, f); }

}  // namespace

TEST_CASE("quotient algebra") {
  auto a = quotient_algebra(poly(7, {-1, 0, 0, 1}), FieldCtx::make(7, 1));
  CHECK(a.dim == 3);
  CHECK(a.check_axioms());
  CHECK(a.mul({0, 1, 0}, {0, 0, 1}) == Vec{1, 0, 0});
  CHECK_THROWS_WITH_AS(quotient_algebra(poly(7, {1, 0, 1}), FieldCtx::make(7, 1)), doctest::Contains("NotSplit"), Error);
  auto b = quotient_algebra(poly(13, {1, 0, 1}), FieldCtx::make(13, 1));
  CHECK(b.dim == 2);
  // (x - 5)(x + 5) = x^2 - 25 = 0
  CHECK(b.mul({8, 1}, {5, 1}) == Vec{0, 0});
}

TEST_CASE("essential part dimensions") {
  auto t = tensor(poly(7, {-1, 0, 0, 1}));
  CHECK(essential_part(t, 1).dim == 3);
  CHECK(essential_part(t, 1).identity == t->one(1));
  CHECK(essential_part(t, 2).dim == 6);
  CHECK(essential_part(t, 3).dim == 6);
  CHECK_THROWS_WITH_AS(essential_part(t, 4), doctest::Contains("ZeroAlgebra"), Error);
  CHECK_THROWS_WITH_AS(essential_part(t, 2, 5), doctest::Contains("DimCapExceeded"), Error);
  auto t5 = tensor(poly(11, {-1, 0, 0, 0, 0, 1}));
  for (unsigned s = 1; s <= 5; ++s) {
    u64 want = 1;
    for (unsigned i = 0; i < s; ++i) want *= 5 - i;
    CHECK(essential_part(t5, s).dim == want);
  }
}

TEST_CASE("essential part equals the intersection of diagonal ideals") {
  for (auto f : {poly(7, {-1, 0, 0, 1}), poly(5, {-1, 0, 0, 0, 1}), poly(13, {1, 0, 1})}) {
    auto t = tensor(f);
    for (unsigned s = 1; s <= std::min(3u, t->n()); ++s) {
      auto part = essential_part(t, s);
      auto basis = essential_basis(part);
      CHECK(basis.size() == part.dim);
      CHECK(basis == diagonal_ideal_intersection(*t, s));
    }
  }
}

TEST_CASE("embeddings and traces in the transparent model") {
  auto f = poly(7, {-1, 0, 0, 1});
  auto t = tensor(f);
  const std::vector<u64> roots{1, 2, 4};
  auto e2 = essential_part(t, 2);
  CHECK(embed(e2, t->one(1), 1) == e2.identity);
  CHECK(embed(e2, t->one(1), 2) == e2.identity);
  const Vec a{3, 1, 5}, b{2, 6, 1};
  auto va = t->eval_grid(1, a, roots), vb = t->eval_grid(1, b, roots);
  auto prod = t->eval_grid(2, t->mul(2, t->embed_slot(2, a, 1), t->embed_slot(2, b, 2)), roots);
  // iota_1 ignores coordinate 1, iota_2 ignores coordinate 2
  for (unsigned v1 = 0; v1 < 3; ++v1)
    for (unsigned v2 = 0; v2 < 3; ++v2) CHECK(prod[v1 + 3 * v2] == t->field().mul(va[v2], vb[v1]));
  // fibre counts of E_2 over either slot
  for (unsigned j : {1u, 2u}) CHECK(t->trace_slot(2, e2.identity, j) == t->scalar(1, 2));
}

TEST_CASE("embedding is a ring map") {
  auto t = tensor(poly(11, {-1, 0, 0, 0, 0, 1}));
  auto e3 = essential_part(t, 3);
  std::mt19937_64 rng(7);
  for (int it = 0; it < 5; ++it) {
    Vec a(t->size(2)), b(t->size(2));
    for (auto& x : a) x = rng() % 11;
    for (auto& x : b) x = rng() % 11;
    for (unsigned j = 1; j <= 3; ++j)
      CHECK(embed(e3, t->mul(2, a, b), j) == t->mul(3, embed(e3, a, j), embed(e3, b, j)));
  }
}

TEST_CASE("support idempotents and dimensions") {
  auto t = tensor(poly(7, {-1, 0, 0, 1}));
  // x - 1 vanishes at the root 1 only
  Vec z{6, 1, 0};
  Vec e = t->support(1, z);
  CHECK(t->mul(1, e, e) == e);
  CHECK(t->idempotent_dim(1, e) == 2);
  const std::vector<u64> roots{1, 2, 4};
  CHECK(t->eval_grid(1, e, roots) == Vec{0, 1, 1});
}

TEST_CASE("split_by_automorphism hand cases") {
  auto b = polynomial_algebra(poly(7, {-1, 0, 1}));
  Matrix swap = Matrix::identity(2);
  swap.at(1, 1) = 6;
  auto out = split_by_automorphism(b, swap, 2);
  REQUIRE(out.split);
  CHECK(out.zero_divisor == Vec{6, 1});
  CHECK_THROWS_WITH_AS(split_by_automorphism(b, Matrix::identity(2), 2), doctest::Contains("TrivialAutomorphism"),
                       Error);
  auto field = polynomial_algebra(poly(5, {-2, 0, 1}));
  Matrix neg = Matrix::identity(2);
  neg.at(1, 1) = 4;
  CHECK_FALSE(split_by_automorphism(field, neg, 2).split);
  // F_7 has no primitive 5th root of unity
  CHECK_THROWS_WITH_AS(split_by_automorphism(b, swap, 5), doctest::Contains("MissingRootOfUnity"), Error);
}

TEST_CASE("split_by_automorphism in characteristic r") {
  // F_3[x]/(x^3 - x) with x -> x + 1 permutes the three roots cyclically
  auto b = polynomial_algebra(poly(3, {0, -1, 0, 1}));
  Matrix sigma(3, 3);
  // images of 1, x, x^2: 1, x + 1, x^2 + 2x + 1
  sigma.at(0, 0) = 1;
  sigma.at(0, 1) = 1;
  sigma.at(1, 1) = 1;
  sigma.at(0, 2) = 1;
  sigma.at(1, 2) = 2;
  sigma.at(2, 2) = 1;
  auto out = split_by_automorphism(b, sigma, 3);
  REQUIRE(out.split);
  const Vec& z = out.zero_divisor;
  CHECK(z != Vec{0, 0, 0});
  // over F_3^3 the support idempotent z^2 differs from 1 exactly when z is singular
  const Vec s2 = b.mul(z, z);
  CHECK(s2 != b.one);
  CHECK(b.mul(s2, s2) == s2);
}
