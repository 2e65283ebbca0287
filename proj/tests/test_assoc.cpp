#include <cmath>

#include "doctest.h"
#include "schemefactor/assoc.hpp"

using namespace sf;

namespace {

// naive c^h_{fg} from the first pair of color h, no shortcuts
u64 naive_c(const Scheme& s, uint32_t h, uint32_t f, uint32_t g) {
  for (unsigned a = 0; a < s.n; ++a)
    for (unsigned b = 0; b < s.n; ++b)
      if (s.at(a, b) == h) {
        u64 cnt = 0;
        for (unsigned c = 0; c < s.n; ++c) cnt += s.at(a, c) == f && s.at(c, b) == g;
        return cnt;
      }
  return 0;
}

Scheme complete_scheme(unsigned n) {
  std::vector<uint32_t> col(n * n, 1);
  for (unsigned i = 0; i < n; ++i) col[i * n + i] = 0;
  return Scheme::from_matrix(n, col);
}

}  // namespace

TEST_CASE("verify_scheme examples") {
  CHECK_FALSE(verify_scheme(cyclotomic_scheme(13, 4)));
  // path 1-2-3: color 1 on edges, color 2 on {13, 31}
  std::vector<uint32_t> path = {0, 1, 2, 1, 0, 1, 2, 1, 0};
  auto v = verify_scheme(Scheme::from_matrix(3, path));
  REQUIRE(v);
  CHECK(v->axiom == "intersection");
  CHECK(v->count1 != v->count2);
  CHECK_FALSE(verify_scheme(Scheme::from_matrix(1, {0})));
}

TEST_CASE("intersection tensor examples") {
  auto t = intersection_tensor(cyclotomic_scheme(13, 6));
  for (uint32_t g = 1; g < t.d1; ++g) {
    CHECK(t.valency[g] == 2);
    CHECK(t.indistinguishing[g] == 1);
  }
  auto c = intersection_tensor(complete_scheme(5));
  CHECK(c.valency[1] == 4);
  CHECK(c.indistinguishing[1] == 3);
  auto t52 = intersection_tensor(cyclotomic_scheme(5, 2));
  for (uint32_t g = 1; g < 3; ++g) {
    CHECK(t52.valency[g] == 2);
    CHECK(t52.indistinguishing[g] == 1);
  }
}

TEST_CASE("tensor agrees with naive counting") {
  for (u64 p : {7, 11, 13}) {
    for (u64 e = 1; e < p; ++e) {
      if ((p - 1) % e) continue;
      auto s = cyclotomic_scheme(p, e);
      auto t = intersection_tensor(s);
      for (uint32_t h = 0; h < t.d1; ++h)
        for (uint32_t f = 0; f < t.d1; ++f)
          for (uint32_t g = 0; g < t.d1; ++g) CHECK(t.at(h, f, g) == naive_c(s, h, f, g));
    }
  }
}

TEST_CASE("identity suite") {
  CHECK_FALSE(verify_identities(cyclotomic_scheme(13, 4)));
  auto t = intersection_tensor(cyclotomic_scheme(13, 4));
  t.at(1, 2, 3) += 1;
  auto bad = verify_identities(t);
  REQUIRE(bad);
  CHECK(bad->id == 3);
  CHECK_FALSE(verify_identities(Scheme::from_matrix(1, {0})));
  CHECK_FALSE(verify_identities(complete_scheme(6)));
}

TEST_CASE("cyclotomic scheme shape") {
  auto s = cyclotomic_scheme(13, 4);
  CHECK(s.num_colors == 5);
  auto t = intersection_tensor(s);
  for (uint32_t g = 1; g < 5; ++g) CHECK(t.valency[g] == 3);
  auto s72 = cyclotomic_scheme(7, 2);
  CHECK(s72.num_colors == 3);
  CHECK(s72.adjoint[1] == 2);
  CHECK(s72.adjoint[2] == 1);
  CHECK_THROWS_WITH_AS(cyclotomic_scheme(13, 5), doctest::Contains("EDoesNotDivide"), Error);
  CHECK_THROWS_WITH_AS(cyclotomic_scheme(15, 2), doctest::Contains("NotPrime"), Error);
}

TEST_CASE("cyclotomic partition does not depend on the primitive root") {
  for (u64 alpha : {2, 6, 7, 11}) {
    auto a = cyclotomic_scheme(13, 4).canonical();
    auto b = cyclotomic_scheme(13, 4, alpha).canonical();
    CHECK(a == b);
  }
}

TEST_CASE("small intersection search") {
  auto r = small_intersection_search(cyclotomic_scheme(13, 6), 2);
  REQUIRE(r.witness);
  CHECK(r.witness->c1 == 1);
  CHECK(r.witness->c2 == 1);
  CHECK(r.corollary_bound);
  auto r5 = small_intersection_search(cyclotomic_scheme(5, 2), 2);
  CHECK_FALSE(r5.corollary_bound);
  CHECK_THROWS_WITH_AS(small_intersection_search(cyclotomic_scheme(5, 2), 1), doctest::Contains("BadEll"), Error);
}

TEST_CASE("witness is lexicographically least") {
  auto s = cyclotomic_scheme(13, 6);
  auto t = intersection_tensor(s);
  auto r = small_intersection_search(s, 3);
  REQUIRE(r.witness);
  // brute force the first (u, v, w, w') in lexicographic order
  bool found = false;
  for (uint32_t u = 1; u < t.d1 && !found; ++u)
    for (uint32_t v = 1; v < t.d1 && !found; ++v)
      for (uint32_t w = 1; w < t.d1 && !found; ++w)
        for (uint32_t w2 = 1; w2 < t.d1 && !found; ++w2) {
          if (u == v || w == w2) continue;
          u64 a = naive_c(s, w, s.adjoint[u], v), b = naive_c(s, w2, s.adjoint[u], v);
          if (a > 0 && a <= b && b < 3) {
            found = true;
            CHECK(r.witness->u == u);
            CHECK(r.witness->v == v);
            CHECK(r.witness->w == w);
            CHECK(r.witness->w2 == w2);
          }
        }
  CHECK(found);
}

TEST_CASE("3-scheme round trip") {
  auto s = cyclotomic_scheme(7, 2);
  auto pi = scheme_to_3scheme(s);
  CHECK(pi.num_colors(2) == 2);
  auto rep = check_properties(pi);
  CHECK(rep.is_scheme());
  CHECK(level2_to_scheme(pi) == s);
  auto pi5 = scheme_to_3scheme(cyclotomic_scheme(5, 2));
  CHECK(check_properties(pi5).is_scheme());
  CHECK_THROWS_WITH_AS(scheme_to_3scheme(Scheme::from_matrix(1, {0})), doctest::Contains("TooSmall"), Error);
}

TEST_CASE("level2_to_scheme on orbit schemes") {
  Perm z5{1, 2, 3, 4, 0};
  auto s = level2_to_scheme(orbit_mscheme({z5}, 5, 3));
  CHECK(s.num_colors == 5);
  auto t = intersection_tensor(s);
  for (uint32_t g = 1; g < 5; ++g) CHECK(t.valency[g] == 1);
  // two orbits on points
  Perm swap01{1, 0, 2, 3};
  CHECK_THROWS_WITH_AS(level2_to_scheme(orbit_mscheme({swap01}, 4, 3)), doctest::Contains("NotHomogeneous"), Error);
}

TEST_CASE("deviation report") {
  auto r = cyclotomic_deviation_report(13, 4);
  CHECK(r.within_bound);
  CHECK(r.bound == doctest::Approx(std::sqrt(13.0) + 4));
  CHECK(cyclotomic_deviation_report(5, 2).rows.size() == 8);
  auto r71 = cyclotomic_deviation_report(7, 1);
  REQUIRE(r71.rows.size() == 1);
  CHECK(r71.rows[0].c == 5);
  CHECK(r71.rows[0].deviation == doctest::Approx(3.0));
}
