#include <algorithm>

#include "json.hpp"
#include "schemefactor/error.hpp"
#include "schemefactor/factor.hpp"

namespace sf {

std::string log_to_json(const std::vector<LogEntry>& log) {
  nlohmann::json arr = nlohmann::json::array();
  for (const LogEntry& e : log)
    arr.push_back({{"event", e.event}, {"level", e.level}, {"args", e.args}, {"dims", e.dims}});
  return arr.dump();
}

bool factor_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const FieldCtx& k = a.field;
  for (long i = a.degree() - 1; i >= 0; --i) {
    const u64 x = k.neg(a.coeff(static_cast<std::size_t>(i)));
    const u64 y = k.neg(b.coeff(static_cast<std::size_t>(i)));
    if (x != y) return x < y;
  }
  return false;
}

namespace {

struct RunOutcome {
  std::optional<Poly> factor;
  std::shared_ptr<IdealSystem> stuck;
};

void append(std::vector<LogEntry>& log, const std::vector<LogEntry>& more) {
  log.insert(log.end(), more.begin(), more.end());
}

// One deepening run on a monic split squarefree f; restarts over a larger
// field when a matching automorphism has an order without roots of unity.
RunOutcome run(const Poly& f, unsigned m, const FactorOptions& opts, std::vector<LogEntry>& log, unsigned& m_used) {
  const unsigned n = static_cast<unsigned>(f.degree());
  m = std::min(m, n);
  std::vector<u64> extra;
  while (true) {
    FieldCtx k;
    if (extra.empty()) {
      k = extension_for_levels(f.field, m);
    } else {
      std::vector<u64> primes = extra;
      for (u64 p = 2; p <= m; ++p)
        if (is_prime(p) && p != f.field.characteristic()) primes.push_back(p);
      k = extension_for_primes(f.field, primes);
    }
    log.push_back(LogEntry{"field", 0, {k.degree()}, {}});
    auto sys = std::make_shared<IdealSystem>(f, k, 2, opts);
    std::optional<u64> need;
    for (unsigned level = 2;; ++level) {
      if (level > 2) sys->add_level();
      m_used = std::max(m_used, level);
      while (true) {
        const StepResult st = sys->sweep();
        if (st.kind == StepResult::Kind::Factor) {
          append(log, sys->log());
          return {st.factor, nullptr};
        }
        if (st.kind == StepResult::Kind::Refined) continue;
        const auto ms = sys->matchings();
        if (ms.empty()) break;
        const StepResult mr = sys->matching_refinement(ms.front());
        if (mr.kind == StepResult::Kind::NeedsPrime) {
          need = mr.prime;
          break;
        }
      }
      if (need || level >= m) break;
    }
    append(log, sys->log());
    if (!need) {
      log.push_back(LogEntry{"stuck", sys->m(), {}, {}});
      return {std::nullopt, sys};
    }
    extra.push_back(*need);
  }
}

Poly checked_input(const Poly& f) {
  if (!f.field.valid() || f.degree() < 2) fail(ErrorKind::InvalidArgument, "need a polynomial of degree at least 2");
  Poly g = make_monic(f);
  if (!is_split_squarefree(g)) fail(ErrorKind::NotSplit, g.to_string() + " does not split into distinct linear factors");
  if (g.field.characteristic() < static_cast<u64>(g.degree()))
    fail(ErrorKind::PreconditionFailed, "characteristic must be at least deg f for exact fibre counts");
  return g;
}

}  // namespace

FactorResult iks_factor(const Poly& f, unsigned m, FactorOptions opts) {
  if (m < 2) fail(ErrorKind::InvalidArgument, "m must be at least 2");
  const Poly g = checked_input(f);
  FactorResult res;
  const RunOutcome first = run(g, m, opts, res.log, res.m_used);
  if (!first.factor) {
    res.status = FactorResult::Status::Stuck;
    res.stuck = first.stuck;
    res.certificate = certify(*first.stuck);
    return res;
  }
  res.status = FactorResult::Status::Factored;
  std::vector<Poly> work{*first.factor, poly_divmod(g, *first.factor).quotient};
  res.log.push_back(LogEntry{"factor", 0, {static_cast<u64>(first.factor->degree())}, {}});
  while (!work.empty()) {
    Poly h = std::move(work.back());
    work.pop_back();
    if (h.degree() <= 1) {
      res.parts.push_back(std::move(h));
      continue;
    }
    res.log.push_back(LogEntry{"part", 0, {static_cast<u64>(h.degree())}, {}});
    const RunOutcome sub = run(h, m, opts, res.log, res.m_used);
    if (!sub.factor) {
      res.parts.push_back(std::move(h));
      continue;
    }
    res.log.push_back(LogEntry{"factor", 0, {static_cast<u64>(sub.factor->degree())}, {}});
    work.push_back(poly_divmod(h, *sub.factor).quotient);
    work.push_back(*sub.factor);
  }
  std::sort(res.parts.begin(), res.parts.end(), factor_less);
  res.factor = res.parts.front();
  return res;
}

PrimeDegreePlan prime_degree_plan(const Poly& f, u64 r, u64 ell) {
  const long n = f.degree();
  if (n < 2 || !is_prime(static_cast<u64>(n)))
    fail(ErrorKind::NotPrimeDegree, "degree " + std::to_string(n) + " is not prime");
  if (r < 2) fail(ErrorKind::InvalidArgument, "r must be at least 2");
  if (ell < 1 || ell > (u64{1} << 30)) fail(ErrorKind::BadEll, "ell must lie in [1, 2^30]");
  PrimeDegreePlan plan;
  plan.smooth = smooth_divisor(static_cast<u64>(n) - 1, r);
  const u64 d = plan.smooth - 1;
  if (d == 0 || ell * d * d < static_cast<u64>(n))
    fail(ErrorKind::SmoothDivisorTooSmall, "largest " + std::to_string(r) + "-smooth divisor of n-1 is " +
                                               std::to_string(plan.smooth) + ", below sqrt(n/ell)+1");
  plan.ell_prime = 2 * ell + 1;
  const u64 depth = std::max<u64>(r + 1, ceil_log2(plan.ell_prime * plan.ell_prime) + 3);
  plan.m = static_cast<unsigned>(std::min<u64>(static_cast<u64>(n), depth));
  return plan;
}

FactorResult prime_degree_factor(const Poly& f, u64 r, u64 ell, FactorOptions opts) {
  const PrimeDegreePlan plan = prime_degree_plan(make_monic(f), r, ell);
  FactorResult res;
  try {
    res = iks_factor(f, plan.m, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DimCapExceeded) throw;
    fail(ErrorKind::DimCapExceeded, std::string(e.what()) + " (required m = " + std::to_string(plan.m) + ")");
  }
  if (res.status == FactorResult::Status::Stuck)
    fail(ErrorKind::TheoremContradiction, "stuck at m = " + std::to_string(res.m_used) + " on a prime-degree input");
  return res;
}

}  // namespace sf
