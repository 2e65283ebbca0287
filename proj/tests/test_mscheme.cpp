#include <algorithm>
#include <set>

#include "doctest.h"
#include "schemefactor/assoc.hpp"
#include "schemefactor/mscheme.hpp"

using namespace sf;

namespace {

Perm cycle(unsigned n) {
  Perm p(n);
  for (unsigned i = 0; i < n; ++i) p[i] = (i + 1) % n;
  return p;
}

// orbit of a tuple under the group generated by gens, by closure
std::set<Tuple> orbit(const std::vector<Perm>& gens, Tuple t) {
  std::set<Tuple> seen{t};
  std::vector<Tuple> todo{t};
  while (!todo.empty()) {
    Tuple x = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      Tuple y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = g[x[i]];
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("tuple ranking is lexicographic") {
  for (unsigned n : {4u, 6u}) {
    for (unsigned s = 1; s <= 3; ++s) {
      std::vector<Tuple> all;
      for (u64 r = 0; r < tuples::count(n, s); ++r) all.push_back(tuples::unrank(n, s, r));
      CHECK(std::is_sorted(all.begin(), all.end()));
      CHECK(std::set<Tuple>(all.begin(), all.end()).size() == all.size());
      for (u64 r = 0; r < all.size(); ++r) CHECK(tuples::rank(n, all[r]) == r);
    }
  }
}

TEST_CASE("orbit colors match closure orbits") {
  const auto& cat = group_catalog();
  auto it = std::find_if(cat.begin(), cat.end(), [](const CatalogGroup& g) { return g.name == "D8"; });
  REQUIRE(it != cat.end());
  const std::vector<Perm>& gens = it->generators;
  const unsigned n = static_cast<unsigned>(gens[0].size());
  auto pi = orbit_mscheme(gens, n, 3);
  for (unsigned s = 1; s <= 3; ++s)
    for (uint32_t c = 0; c < pi.num_colors(s); ++c) {
      auto rep = pi.representative(s, c);
      auto orb = orbit(gens, rep);
      CHECK(orb.size() == pi.color_size(s, c));
      for (const auto& t : orb) CHECK(pi.color_of(t) == c);
    }
}

TEST_CASE("orbit_mscheme examples") {
  auto z5 = orbit_mscheme({cycle(5)}, 5, 3);
  CHECK(z5.num_colors(1) == 1);
  CHECK(z5.num_colors(2) == 4);
  for (uint32_t c = 0; c < 4; ++c) CHECK(z5.color_size(2, c) == 5);
  auto rep = check_properties(z5);
  CHECK(rep.is_scheme());
  CHECK(rep.homogeneous);
  CHECK(rep.is_antisymmetric());
  CHECK_FALSE(rep.all(rep.symmetric));

  auto z6 = check_properties(orbit_mscheme({cycle(6)}, 6, 2));
  CHECK(z6.homogeneous);
  CHECK_FALSE(z6.antisymmetric[2]);

  auto s3 = orbit_mscheme({{1, 2, 0}, {1, 0, 2}}, 3, 2);
  CHECK(s3.num_colors(2) == 1);
  CHECK(s3.color_size(2, 0) == 6);
  CHECK(check_properties(s3).symmetric[2]);
}

TEST_CASE("color ids follow the least tuple") {
  auto pi = orbit_mscheme({cycle(7)}, 7, 3);
  for (unsigned s = 1; s <= 3; ++s)
    for (uint32_t c = 1; c < pi.num_colors(s); ++c)
      CHECK(tuples::rank(7, pi.representative(s, c - 1)) < tuples::rank(7, pi.representative(s, c)));
}

TEST_CASE("check_properties finds irregular collections") {
  // 3 points, level-2 colors {(1,2)} and everything else
  std::vector<uint32_t> l2(6, 1);
  l2[0] = 0;
  MCollection pi(3, {{0, 0, 0}, l2});
  auto rep = check_properties(pi);
  CHECK_FALSE(rep.regular[2]);
  bool saw = false;
  for (const auto& v : rep.violations) {
    CHECK(replay_violation(pi, v));
    saw = saw || v.property == "P2";
  }
  CHECK(saw);
}

TEST_CASE("violations replay") {
  auto z6 = orbit_mscheme({cycle(6)}, 6, 3);
  auto rep = check_properties(z6);
  CHECK_FALSE(rep.violations.empty());
  for (const auto& v : rep.violations) CHECK(replay_violation(z6, v));
}

TEST_CASE("subdegree") {
  auto z5 = orbit_mscheme({cycle(5)}, 5, 3);
  const uint32_t p = z5.color_of(Tuple{0, 1, 2});
  const uint32_t q = z5.color_of(Tuple{0, 1});
  CHECK(subdegree(z5, 3, p, 2, q) == 1);
  auto k4 = orbit_mscheme({{1, 2, 3, 0}, {1, 0, 2, 3}}, 4, 3);  // S_4
  CHECK(subdegree(k4, 3, 0, 2, 0) == 2);
  const uint32_t q2 = z5.color_of(Tuple{0, 3});
  CHECK_THROWS_WITH_AS(subdegree(z5, 3, p, 2, q2), doctest::Contains("NotAProjection"), Error);
}

TEST_CASE("find_matchings") {
  auto z5 = orbit_mscheme({cycle(5)}, 5, 3);
  auto ms = find_matchings(z5);
  const uint32_t p = z5.color_of(Tuple{0, 1, 2});
  bool found = false;
  for (const auto& m : ms) {
    CHECK(verify_matching(z5, m));
    found = found || (m.level == 3 && m.color == p && m.i == std::vector<unsigned>{1} && m.j == std::vector<unsigned>{3});
  }
  CHECK(found);
  CHECK_FALSE(find_matchings(orbit_mscheme({cycle(7)}, 7, 3)).empty());
  CHECK(find_matchings(orbit_mscheme({{1, 2, 0}, {1, 0, 2}}, 3, 2)).empty());
}

TEST_CASE("matching_chase") {
  auto z7 = orbit_mscheme({cycle(7)}, 7, 3);
  auto m = matching_chase(z7, 2, 0, 2, 2);
  CHECK(verify_matching(z7, m));
  auto k5 = orbit_mscheme({cycle(5), {1, 0, 2, 3, 4}}, 5, 3);
  CHECK_THROWS_WITH_AS(matching_chase(k5, 2, 0, 2, 4), doctest::Contains("NotAntisymmetric"), Error);
  auto z13 = orbit_mscheme({cycle(13)}, 13, 5);
  auto m13 = matching_chase(z13, 2, 0, 2, 2);
  CHECK(m13.level <= 3);
  CHECK(verify_matching(z13, m13));
}

TEST_CASE("matching_chase halves on a nonthin scheme") {
  // Frobenius group Z7 x| Z3: level-2 subdegree 3 over level 1
  const auto& cat = group_catalog();
  auto it = std::find_if(cat.begin(), cat.end(), [](const CatalogGroup& g) { return g.name == "F21"; });
  REQUIRE(it != cat.end());
  auto pi = orbit_mscheme(it->generators, 7, 4);
  auto rep = check_properties(pi);
  REQUIRE(rep.antisymmetric[2]);
  const unsigned i1[1] = {2};
  const uint32_t q = pi.project_color(2, 0, i1);
  CHECK(subdegree(pi, 2, 0, 1, q) == 3);
  auto m = matching_chase(pi, 2, 0, 2, 3);
  CHECK(verify_matching(pi, m));
}

TEST_CASE("prime_matching") {
  auto z13 = orbit_mscheme({cycle(13)}, 13, 5);
  auto m = prime_matching(z13, 2);
  CHECK(verify_matching(z13, m));
  CHECK_THROWS_WITH_AS(prime_matching(orbit_mscheme({cycle(6)}, 6, 5), 2), doctest::Contains("not prime"), Error);
  CHECK_THROWS_WITH_AS(prime_matching(orbit_mscheme({cycle(5)}, 5, 3), 2), doctest::Contains("m = 3"), Error);
}

TEST_CASE("nonexistence_check") {
  CHECK(std::holds_alternative<std::monostate>(nonexistence_check(orbit_mscheme({cycle(5)}, 5, 2))));
  CHECK(std::holds_alternative<std::monostate>(nonexistence_check(orbit_mscheme({cycle(6)}, 6, 2))));
  PropertyReport fake;
  fake.m = 2;
  fake.compatible = fake.regular = fake.invariant = fake.antisymmetric = fake.symmetric = {true, true, true};
  fake.homogeneous = true;
  auto w = nonexistence_check(fake, 4);
  REQUIRE(std::holds_alternative<ContradictionWitness>(w));
  const auto& cw = std::get<ContradictionWitness>(w);
  CHECK(cw.r == 2);
  CHECK(cw.rhs % cw.lhs != 0);
}

TEST_CASE("catalog loads") {
  const auto& cat = group_catalog();
  CHECK(cat.size() == 21);
  for (const auto& g : cat)
    for (const auto& p : g.generators) CHECK(p.size() == g.degree);
}
