// schemefactor command-line front end. Every command prints one JSON object
// (to stdout, or to --json PATH) and exits with
//   0 success / factored, 2 stuck, 3 invalid input, 4 precondition or cap,
//   5 a theorem or conjecture check failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "schemefactor/assoc.hpp"
#include "schemefactor/factor.hpp"
#include "schemefactor/mscheme.hpp"

using json = nlohmann::ordered_json;
using namespace sf;

namespace {

constexpr int kOk = 0, kStuck = 2, kInvalid = 3, kPrecondition = 4, kContradiction = 5;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PreconditionFailed:
    case ErrorKind::NotPrimeDegree:
    case ErrorKind::SmoothDivisorTooSmall:
    case ErrorKind::DimCapExceeded:
    case ErrorKind::WorkCapExceeded:
    case ErrorKind::ScanCapExceeded:
    case ErrorKind::DepthExhausted:
    case ErrorKind::Overflow:
    case ErrorKind::TooSmall:
      return kPrecondition;
    case ErrorKind::TheoremContradiction: return kContradiction;
    default: return kInvalid;
  }
}

// Flag value, else environment variable, else the library default.
u64 cap(const std::optional<u64>& flag, const char* env, u64 fallback) {
  if (flag) return *flag;
  if (const char* v = std::getenv(env)) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, std::string(env) + " is not an integer");
    }
  }
  return fallback;
}

std::vector<long long> parse_ints(const std::string& text, char sep = ',') {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "cannot parse integer '" + item + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::InvalidArgument, "empty integer list");
  return out;
}

json poly_json(const Poly& f) { return f.coeffs; }

json log_json(const std::vector<LogEntry>& log) { return json::parse(log_to_json(log)); }

json report_json(const PropertyReport& rep) {
  auto levels = [](const std::vector<bool>& v) {
    json a = json::array();
    for (std::size_t s = 2; s < v.size(); ++s) a.push_back(static_cast<bool>(v[s]));
    return a;
  };
  json out;
  out["m"] = rep.m;
  out["scheme"] = rep.is_scheme();
  out["homogeneous"] = rep.homogeneous;
  out["antisymmetric"] = rep.is_antisymmetric();
  out["compatible"] = levels(rep.compatible);
  out["regular"] = levels(rep.regular);
  out["invariant"] = levels(rep.invariant);
  out["violations"] = rep.violations.size();
  return out;
}

json matching_json(const Matching& mt) {
  return {{"level", mt.level}, {"color", mt.color}, {"i", mt.i}, {"j", mt.j}};
}

struct Output {
  json doc;
  int code = kOk;
};

Output run_factor(u64 p, unsigned d, const std::string& poly_text, unsigned m, std::optional<u64> r, u64 ell,
                  const FactorOptions& opts) {
  Output out;
  out.doc["command"] = "factor";
  const FieldCtx k = FieldCtx::make(p, d);
  const auto ints = parse_ints(poly_text);
  const Poly f = Poly::from_ints(k, ints);
  const bool prime_route = r && f.degree() >= 2 && is_prime(static_cast<u64>(f.degree()));
  const FactorResult res = prime_route ? prime_degree_factor(f, *r, ell, opts) : iks_factor(f, m, opts);
  out.doc["route"] = prime_route ? "prime_degree" : "deepening";
  out.doc["m_used"] = res.m_used;
  if (res.status == FactorResult::Status::Factored) {
    out.doc["status"] = "factored";
    out.doc["factor"] = poly_json(res.factor);
    json parts = json::array();
    for (const Poly& g : res.parts) parts.push_back(poly_json(g));
    out.doc["parts"] = parts;
  } else {
    out.code = kStuck;
    out.doc["status"] = "stuck";
    const StuckCertificate& c = *res.certificate;
    out.doc["certificate"] = {{"valid", c.valid()},           {"idempotent", c.idempotent},
                              {"sums", c.sums},               {"dimensions", c.dimensions},
                              {"orthogonal", c.orthogonal},   {"stable", c.stable},
                              {"no_matching", c.no_matching}, {"homogeneous", c.homogeneous},
                              {"ideals_per_level", c.level_dims}};
  }
  out.doc["refinement_log"] = log_json(res.log);
  return out;
}

Output run_scheme_report(u64 p, u64 e) {
  Output out;
  out.doc["command"] = "scheme-report";
  const Scheme s = cyclotomic_scheme(p, e);
  const IntersectionTensor t = intersection_tensor(s);
  out.doc["n"] = s.n;
  out.doc["colors"] = s.num_colors;
  out.doc["valencies"] = t.valency;
  out.doc["indistinguishing"] = t.indistinguishing;
  out.doc["adjoint"] = t.adjoint;
  json pairs = json::array();
  for (uint32_t g = 0; g < t.d1; ++g)
    if (t.adjoint[g] > g) pairs.push_back({g, t.adjoint[g]});
  out.doc["antisymmetric_pairs"] = pairs;
  const auto failed = verify_identities(t);
  out.doc["identities"] = failed ? json{{"ok", false}, {"failed", failed->id}, {"lhs", failed->lhs}, {"rhs", failed->rhs}}
                                 : json{{"ok", true}};
  json witnesses = json::object();
  for (u64 ell : {2, 3, 4}) {
    const SearchResult sr = small_intersection_search(s, ell);
    json w = nullptr;
    if (sr.witness) w = {{"u", sr.witness->u}, {"v", sr.witness->v}, {"w", sr.witness->w}, {"w2", sr.witness->w2},
                         {"c1", sr.witness->c1}, {"c2", sr.witness->c2}};
    witnesses[std::to_string(ell)] = {{"witness", w}, {"hypothesis_held", sr.hypothesis_held}};
  }
  out.doc["small_intersections"] = witnesses;
  const DeviationReport dev = cyclotomic_deviation_report(p, e);
  json rows = json::array();
  for (const auto& row : dev.rows)
    rows.push_back({{"r", row.r}, {"s", row.s}, {"t", row.t}, {"c", row.c}, {"deviation", row.deviation}});
  out.doc["deviation"] = {{"expected", Rational(p + 1, e * e).str()},
                          {"max", dev.max_deviation},
                          {"bound", dev.bound},
                          {"within_bound", dev.within_bound},
                          {"rows", rows}};
  return out;
}

json scan_one(const std::string& name, const std::vector<Perm>& gens, unsigned n, unsigned m, u64 work_cap,
              int& code) {
  m = std::min(m, n);
  const MCollection pi = orbit_mscheme(gens, n, m, work_cap);
  const PropertyReport rep = check_properties(pi);
  json entry;
  entry["group"] = name;
  entry["n"] = n;
  entry["m"] = m;
  entry["report"] = report_json(rep);
  json ms = json::array();
  const bool ha = rep.homogeneous && rep.is_antisymmetric();
  std::size_t found = 0;
  if (rep.is_scheme()) {
    const auto list = find_matchings(pi);
    found = list.size();
    for (const auto& mt : list) ms.push_back(matching_json(mt));
  }
  entry["matchings"] = ms;
  const auto verdict = nonexistence_check(rep, n);
  if (const auto* w = std::get_if<ContradictionWitness>(&verdict))
    entry["nonexistence"] = {{"r", w->r}, {"lhs", w->lhs}, {"rhs", w->rhs}};
  else
    entry["nonexistence"] = nullptr;
  const bool failure = ha && m >= 4 && found == 0;
  entry["conjecture_failure"] = failure;
  if (failure) code = kContradiction;
  return entry;
}

std::vector<Perm> parse_generators(const std::string& text, unsigned n) {
  std::vector<Perm> gens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    Perm g;
    for (long long v : parse_ints(item)) {
      if (v < 0 || v >= static_cast<long long>(n)) fail(ErrorKind::InvalidArgument, "generator entry out of range");
      g.push_back(static_cast<uint32_t>(v));
    }
    if (g.size() != n) fail(ErrorKind::InvalidArgument, "generator has wrong length");
    std::vector<uint32_t> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    for (uint32_t i = 0; i < n; ++i)
      if (sorted[i] != i) fail(ErrorKind::InvalidArgument, "generator is not a permutation");
    gens.push_back(std::move(g));
  }
  if (gens.empty()) fail(ErrorKind::InvalidArgument, "no generators");
  return gens;
}

Output run_orbit_scan(const std::string& group, const std::string& gens_text, unsigned n, unsigned m, bool catalog,
                      u64 work_cap) {
  Output out;
  out.doc["command"] = "orbit-scan";
  out.doc["m"] = m;
  json entries = json::array();
  if (catalog) {
    for (const auto& g : group_catalog()) entries.push_back(scan_one(g.name, g.generators, g.degree, m, work_cap, out.code));
  } else if (!group.empty()) {
    const auto& cat = group_catalog();
    auto it = std::find_if(cat.begin(), cat.end(), [&](const CatalogGroup& g) { return g.name == group; });
    if (it == cat.end()) fail(ErrorKind::InvalidArgument, "unknown catalog group " + group);
    entries.push_back(scan_one(it->name, it->generators, it->degree, m, work_cap, out.code));
  } else {
    if (n == 0) fail(ErrorKind::InvalidArgument, "--n is required with --gens");
    entries.push_back(scan_one("custom", parse_generators(gens_text, n), n, m, work_cap, out.code));
  }
  out.doc["entries"] = entries;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic polynomial factoring through ideal systems and m-schemes"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string json_path;
  app.add_option("--json", json_path, "Write the JSON report to this file instead of stdout");
  std::optional<u64> dim_cap, tensor_cap, work_cap;
  app.add_option("--dim-cap", dim_cap, "Cap on dim A^(s) (env SF_DIM_CAP)");
  app.add_option("--tensor-cap", tensor_cap, "Cap on n^s (env SF_TENSOR_CAP)");
  app.add_option("--work-cap", work_cap, "Cap on orbit enumeration work (env SF_WORK_CAP)");

  u64 p = 0, e = 0, ell = 2, s_arg = 0, big_n = 0, cap_factor = 10;
  unsigned d = 1, m = 4, n = 0;
  std::optional<u64> r;
  std::string poly_text, group, gens;
  bool catalog = false;

  auto* fac = app.add_subcommand("factor", "Factor a split squarefree polynomial");
  fac->add_option("--p", p, "Characteristic")->required();
  fac->add_option("--d", d, "Extension degree of the base field");
  fac->add_option("--poly", poly_text, "Coefficients low to high, comma separated")->required();
  fac->add_option("--m", m, "Deepest level");
  fac->add_option("--r", r, "Smoothness bound; selects the prime-degree route");
  fac->add_option("--l", ell, "Intersection bound ell for the prime-degree route");

  auto* rep = app.add_subcommand("scheme-report", "Report on the cyclotomic scheme of (p, e)");
  rep->add_option("--p", p, "Prime")->required();
  rep->add_option("--e", e, "Divisor of p - 1")->required();

  auto* orb = app.add_subcommand("orbit-scan", "Orbit m-scheme properties and matchings");
  orb->add_option("--group", group, "Catalog group name");
  orb->add_option("--gens", gens, "Generators as 0-based image lists separated by ';'");
  orb->add_option("--n", n, "Number of points (with --gens)");
  orb->add_option("--m", m, "Depth");
  orb->add_flag("--catalog", catalog, "Scan every catalog group");

  auto* lin = app.add_subcommand("linnik", "Least prime congruent to 1 mod s");
  lin->add_option("--s", s_arg, "Modulus")->required();
  lin->add_option("--cap-factor", cap_factor, "Scan bound factor c in c*s^2");

  auto* smo = app.add_subcommand("smooth", "Largest r-smooth divisor of N");
  smo->add_option("--n", big_n, "N")->required();
  smo->add_option("--r", r, "Smoothness bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kInvalid;
  }

  Output out;
  try {
    FactorOptions opts;
    opts.dim_cap = cap(dim_cap, "SF_DIM_CAP", kDefaultDimCap);
    opts.tensor_cap = cap(tensor_cap, "SF_TENSOR_CAP", kDefaultTensorCap);
    const u64 wcap = cap(work_cap, "SF_WORK_CAP", kDefaultWorkCap);
    if (*fac) {
      out = run_factor(p, d, poly_text, m, r, ell, opts);
    } else if (*rep) {
      out = run_scheme_report(p, e);
    } else if (*orb) {
      out = run_orbit_scan(group, gens, n, m, catalog, wcap);
    } else if (*lin) {
      out.doc = {{"command", "linnik"}, {"s", s_arg}, {"prime", linnik_p1s(s_arg, cap_factor)}};
    } else if (*smo) {
      if (big_n < 1 || *r < 2) fail(ErrorKind::InvalidArgument, "need N >= 1 and r >= 2");
      out.doc = {{"command", "smooth"}, {"n", big_n}, {"r", *r}, {"divisor", smooth_divisor(big_n, *r)}};
    }
  } catch (const Error& err) {
    out.code = exit_code(err.kind());
    out.doc = {{"command", app.get_subcommands().front()->get_name()},
               {"status", "error"},
               {"error", std::string(to_string(err.kind()))},
               {"message", err.what()}};
  }

  const std::string text = out.doc.dump(2) + "\n";
  if (json_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(json_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot write " << json_path << "\n";
      return kInvalid;
    }
    file << text;
  }
  return out.code;
}
