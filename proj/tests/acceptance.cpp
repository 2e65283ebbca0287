// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-red 3,...] [--only 1,5,...]
//
// Exit status is 0 exactly when the set of failing criteria equals the
// --expect-red set (empty by default).

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "schemefactor/assoc.hpp"
#include "schemefactor/factor.hpp"
#include "schemefactor/mscheme.hpp"

using namespace sf;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;  // printed as INFO lines
};

std::vector<u64> primes_upto(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p <= n; ++p) {
    bool prime = true;
    for (u64 d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime) out.push_back(p);
  }
  return out;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

Verdict c1_axioms() {
  Verdict v;
  int checked = 0;
  for (u64 p : primes_upto(97))
    for (u64 e : divisors(p - 1)) {
      const Scheme s = cyclotomic_scheme(p, e);
      if (verify_scheme(s) || verify_identities(s)) {
        v.pass = false;
        v.detail = "cyclotomic(" + std::to_string(p) + "," + std::to_string(e) + ") fails";
        return v;
      }
      ++checked;
    }
  v.detail = std::to_string(checked) + " schemes";
  return v;
}

Verdict c2_prime_order() {
  Verdict v;
  int checked = 0;
  for (u64 p : primes_upto(97))
    for (u64 e : divisors(p - 1)) {
      const auto t = intersection_tensor(cyclotomic_scheme(p, e));
      const u64 k = (p - 1) / e;
      for (uint32_t g = 0; g < t.d1; ++g) {
        if (t.valency[g] == 1 && t.indistinguishing[g] == p) continue;  // identity color
        if (t.valency[g] != k || t.indistinguishing[g] != k - 1) {
          v.pass = false;
          v.detail = "cyclotomic(" + std::to_string(p) + "," + std::to_string(e) + ") color " + std::to_string(g);
          return v;
        }
      }
      ++checked;
    }
  v.detail = std::to_string(checked) + " schemes";
  return v;
}

Verdict c3_small_intersections() {
  Verdict v;
  int applicable = 0, failures = 0, applicable_k2 = 0, failures_k2 = 0, contradictions = 0;
  std::string first;
  for (u64 p : primes_upto(97))
    for (u64 e : divisors(p - 1)) {
      const Scheme s = cyclotomic_scheme(p, e);
      const u64 k = (p - 1) / e;
      for (u64 ell : {2, 3, 4}) {
        SearchResult r;
        try {
          r = small_intersection_search(s, ell);
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::TheoremContradiction) throw;
          ++contradictions;
          continue;
        }
        if (!r.corollary_bound) continue;
        ++applicable;
        if (k >= 2) ++applicable_k2;
        const bool ok = r.witness && r.witness->c1 > 0 && r.witness->c1 <= r.witness->c2 && r.witness->c2 < ell;
        if (!ok) {
          ++failures;
          if (k >= 2) ++failures_k2;
          if (first.empty())
            first = "(p,e,ell)=(" + std::to_string(p) + "," + std::to_string(e) + "," + std::to_string(ell) + ")";
        }
      }
    }
  v.pass = failures == 0 && contradictions == 0;
  v.detail = std::to_string(failures) + "/" + std::to_string(applicable) + " applicable cases without a witness" +
             (first.empty() ? "" : ", first " + first) + ", " + std::to_string(contradictions) + " contradictions";
  v.notes.push_back("criterion 3 restricted to k >= 2: " + std::to_string(failures_k2) + "/" +
                    std::to_string(applicable_k2) + " failures (every failure is a thin scheme, k = 1)");
  return v;
}

Verdict c4_deviation() {
  Verdict v;
  double worst = 0;  // over p >= 5
  std::string bad;
  int checked = 0;
  for (u64 p : primes_upto(97))
    for (u64 e : divisors(p - 1)) {
      if (e > 6) continue;
      const DeviationReport r = cyclotomic_deviation_report(p, e);
      const double bound = std::sqrt(static_cast<double>(p)) + static_cast<double>(e);
      ++checked;
      if (p >= 5) worst = std::max(worst, r.max_deviation - bound);
      if (!(r.max_deviation <= bound)) {
        v.pass = false;
        std::ostringstream os;
        os << (bad.empty() ? "" : ", ") << "(" << p << "," << e << "): " << r.max_deviation << " > " << bound;
        bad += os.str();
      }
    }
  v.detail = std::to_string(checked) + " schemes" + (bad.empty() ? "" : ", over the bound: " + bad);
  std::ostringstream os;
  os << "criterion 4 restricted to p >= 5: max(deviation - (sqrt p + e)) = " << worst
     << (worst <= 0 ? ", within the bound" : ", over the bound");
  v.notes.push_back(os.str());
  return v;
}

Verdict c5_round_trip() {
  Verdict v;
  int checked = 0, small = 0;
  for (u64 p : primes_upto(31))
    for (u64 e : divisors(p - 1)) {
      const Scheme s = cyclotomic_scheme(p, e);
      MCollection pi;
      try {
        pi = scheme_to_3scheme(s);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::TooSmall) throw;
        ++small;  // fewer than 3 points: no 3-tuples
        continue;
      }
      if (!check_properties(pi).is_scheme() || !(level2_to_scheme(pi) == s)) {
        v.pass = false;
        v.detail = "cyclotomic(" + std::to_string(p) + "," + std::to_string(e) + ")";
        return v;
      }
      ++checked;
    }
  v.detail = std::to_string(checked) + " schemes, " + std::to_string(small) + " below 3 points";
  return v;
}

Verdict c6_nonexistence() {
  Verdict v;
  int checked = 0;
  for (const auto& g : group_catalog())
    for (unsigned m = 2; m <= std::min(4u, g.degree); ++m) {
      bool prime_divisor = false;
      for (unsigned r = 2; r <= m; ++r)
        if (is_prime(r) && g.degree % r == 0) prime_divisor = true;
      if (!prime_divisor) continue;
      const auto rep = check_properties(orbit_mscheme(g.generators, g.degree, m));
      ++checked;
      if (rep.homogeneous && rep.is_antisymmetric()) {
        v.pass = false;
        v.detail = g.name + " m=" + std::to_string(m);
        return v;
      }
    }
  v.detail = std::to_string(checked) + " orbit schemes";
  return v;
}

Verdict c7_orbit_matchings() {
  Verdict v;
  int ha = 0;
  for (const auto& g : group_catalog()) {
    if (g.degree < 4) continue;
    const MCollection pi = orbit_mscheme(g.generators, g.degree, 4);
    const auto rep = check_properties(pi);
    if (!(rep.homogeneous && rep.is_antisymmetric())) continue;
    ++ha;
    if (find_matchings(pi).empty()) {
      v.pass = false;
      v.detail = g.name + " has no matching";
      return v;
    }
  }
  for (unsigned n : {5u, 7u, 11u, 13u}) {
    Perm shift(n);
    for (unsigned i = 0; i < n; ++i) shift[i] = (i + 1) % n;
    if (find_matchings(orbit_mscheme({shift}, n, ceil_log2(n))).empty()) {
      v.pass = false;
      v.detail = "Z_" + std::to_string(n) + " has no matching at m = ceil(log2 n)";
      return v;
    }
  }
  v.detail = std::to_string(ha) + " homogeneous antisymmetric catalog entries, Z_5..Z_13 regular";
  return v;
}

struct FactorRuns {
  std::string logs;
};

Poly from_roots(const FieldCtx& k, const std::vector<u64>& roots) {
  Poly f = Poly::constant(k, 1);
  for (u64 r : roots) f = f * Poly(k, {k.neg(r), 1});
  return f;
}

Verdict c8_oracle(FactorRuns& runs) {
  Verdict v;
  int total = 0;
  for (u64 q : {5u, 7u, 11u}) {
    const FieldCtx k = FieldCtx::make(q, 1);
    for (unsigned d = 2; d <= 5; ++d) {
      std::vector<std::vector<u64>> sets;
      for (u64 mask = 0; mask < (u64{1} << q); ++mask)
        if (static_cast<unsigned>(__builtin_popcountll(mask)) == d) {
          std::vector<u64> s;
          for (u64 a = 0; a < q; ++a)
            if ((mask >> a) & 1) s.push_back(a);
          sets.push_back(std::move(s));
        }
      if (sets.size() > 200) {
        std::mt19937_64 rng(q * 100 + d);
        std::shuffle(sets.begin(), sets.end(), rng);
        sets.resize(200);
        std::sort(sets.begin(), sets.end());
      }
      for (const auto& roots : sets) {
        const Poly f = from_roots(k, roots);
        const FactorResult r = iks_factor(f, 4);
        runs.logs += log_to_json(r.log);
        ++total;
        const Poly& g = r.factor;
        bool ok = r.status == FactorResult::Status::Factored && g.degree() > 0 && g.degree() < f.degree() &&
                  poly_divmod(f, g).remainder.is_zero();
        // brute-force roots of g must be roots of f, and g is x minus the least root
        std::vector<u64> groots;
        for (u64 a = 0; a < q && ok; ++a)
          if (g.eval(a) == 0) groots.push_back(a);
        ok = ok && static_cast<long>(groots.size()) == g.degree() && from_roots(k, groots) == g;
        for (u64 a : groots) ok = ok && std::find(roots.begin(), roots.end(), a) != roots.end();
        ok = ok && g == from_roots(k, {roots.front()});
        if (!ok) {
          v.pass = false;
          v.detail = "f = " + f.to_string() + " over F_" + std::to_string(q);
          return v;
        }
      }
    }
  }
  v.detail = std::to_string(total) + " polynomials, zero stuck";
  return v;
}

Poly x_pow_minus_one(u64 p, unsigned n) {
  const FieldCtx k = FieldCtx::make(p, 1);
  std::vector<u64> c(n + 1, 0);
  c[0] = k.neg(1);
  c[n] = 1;
  return Poly(k, c);
}

Verdict c9_prime_degree(FactorRuns& runs) {
  Verdict v;
  struct Case {
    u64 p;
    unsigned n;
    u64 r;
    unsigned m;
  };
  for (const Case& c : {Case{11, 5, 2, 5}, Case{29, 7, 3, 7}}) {
    const Poly f = x_pow_minus_one(c.p, c.n);
    const auto plan = prime_degree_plan(f, c.r, 1);
    FactorResult r;
    try {
      r = prime_degree_factor(f, c.r, 1);
    } catch (const Error& err) {
      v.pass = false;
      v.detail = err.what();
      return v;
    }
    runs.logs += log_to_json(r.log);
    const bool ok = plan.m == c.m && r.status == FactorResult::Status::Factored &&
                    r.factor == Poly(f.field, {f.field.neg(1), 1}) && tuples::count(c.n, r.m_used) <= 5040;
    if (!ok) {
      v.pass = false;
      v.detail = "x^" + std::to_string(c.n) + "-1 over F_" + std::to_string(c.p);
      return v;
    }
    v.detail += (v.detail.empty() ? "" : "; ") + ("n=" + std::to_string(c.n) + " m=" + std::to_string(plan.m) +
                                                 " used " + std::to_string(r.m_used));
  }
  return v;
}

Verdict c10_n13(FactorRuns& runs) {
  Verdict v;
  const Poly f = x_pow_minus_one(53, 13);
  const FactorResult r = iks_factor(f, 3);
  runs.logs += log_to_json(r.log);
  if (r.status == FactorResult::Status::Factored) {
    v.pass = poly_divmod(f, r.factor).remainder.is_zero() && r.factor.degree() > 0 && r.factor.degree() < 13;
    v.detail = "factored, least factor " + r.factor.to_string() + ", " + std::to_string(r.parts.size()) + " parts";
  } else {
    const auto& c = *r.certificate;
    u64 dims = 0;
    for (const Ideal& I : r.stuck->level(3)) dims += I.dim;
    v.pass = c.valid() && dims == 13 * 12 * 11;
    v.detail = std::string("stuck, certificate ") + (c.valid() ? "valid" : "invalid");
  }
  return v;
}

Verdict c11_hand_split() {
  Verdict v;
  const FieldCtx k = FieldCtx::make(7, 1);
  const Algebra b = polynomial_algebra(Poly(k, {6, 0, 1}));
  Matrix neg = Matrix::identity(2);
  neg.at(1, 1) = 6;
  const SplitOutcome out = split_by_automorphism(b, neg, 2);
  v.pass = out.split && out.zero_divisor == Vec{6, 1};
  v.detail = "zero divisor x - 1";
  return v;
}

Verdict c12_determinism(const FactorRuns& first) {
  Verdict v;
  FactorRuns again;
  c8_oracle(again);
  c9_prime_degree(again);
  c10_n13(again);
  v.pass = !first.logs.empty() && again.logs == first.logs;
  v.detail = std::to_string(first.logs.size()) + " bytes of logs";
  return v;
}

Verdict c13_number_theory() {
  Verdict v;
  auto naive_prime = [](u64 x) {
    if (x < 2) return false;
    for (u64 d = 2; d * d <= x; ++d)
      if (x % d == 0) return false;
    return true;
  };
  for (u64 s = 1; s <= 200; ++s) {
    u64 p = s + 1;
    while (!naive_prime(p)) p += s;
    if (linnik_p1s(s) != p) {
      v.pass = false;
      v.detail = "linnik s=" + std::to_string(s);
      return v;
    }
  }
  for (u64 r : {2u, 3u, 5u})
    for (u64 n = 1; n <= 10000; ++n) {
      u64 want = 1, x = n;
      for (u64 q = 2; q <= r; ++q)
        while (x % q == 0) {
          x /= q;
          want *= q;
        }
      if (smooth_divisor(n, r) != want) {
        v.pass = false;
        v.detail = "smooth N=" + std::to_string(n) + " r=" + std::to_string(r);
        return v;
      }
    }
  v.detail = "s <= 200, N <= 10^4";
  return v;
}

std::set<int> parse_set(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string expect_red, only;
  app.add_option("--expect-red", expect_red, "Criteria known to fail, comma separated");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected = parse_set(expect_red);
  const std::set<int> selected = parse_set(only);

  FactorRuns runs;
  struct Criterion {
    int id;
    double budget;  // seconds
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 30, c1_axioms},
      {2, 30, c2_prime_order},
      {3, 60, c3_small_intersections},
      {4, 30, c4_deviation},
      {5, 30, c5_round_trip},
      {6, 60, c6_nonexistence},
      {7, 120, c7_orbit_matchings},
      {8, 300, [&] { return c8_oracle(runs); }},
      {9, 300, [&] { return c9_prime_degree(runs); }},
      {10, 600, [&] { return c10_n13(runs); }},
      {11, 5, c11_hand_split},
      {12, 1200, [&] { return c12_determinism(runs); }},
      {13, 10, c13_number_theory},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    if (c.id == 12 && !selected.empty() && !(selected.count(8) && selected.count(9) && selected.count(10))) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) {
      v.pass = false;
      v.detail += " (over the time budget)";
    }
    if (!v.pass) failed.insert(c.id);
    std::printf("CRITERION %2d: %s  %s  [%.2f s]\n", c.id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    for (const auto& note : v.notes) std::printf("  INFO: %s\n", note.c_str());
    std::fflush(stdout);
  }
  std::set<int> expected_run;
  for (int id : expected)
    if (selected.empty() || selected.count(id)) expected_run.insert(id);
  if (failed == expected_run) {
    std::printf("failing set matches expectation (%zu known red)\n", expected_run.size());
    return 0;
  }
  std::printf("failing set differs from expectation\n");
  return 1;
}
