#include <algorithm>
#include <numeric>

#include "schemefactor/error.hpp"
#include "schemefactor/factor.hpp"

namespace sf {

namespace {

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

unsigned bits_for(std::size_t count) { return count <= 1 ? 0 : ceil_log2(count); }

u64 perm_order(const Perm& tau) {
  std::vector<bool> seen(tau.size(), false);
  u64 order = 1;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (seen[i]) continue;
    u64 len = 0;
    for (std::size_t j = i; !seen[j]; j = tau[j]) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

Perm inverse(const Perm& tau) {
  Perm inv(tau.size());
  for (uint32_t i = 0; i < tau.size(); ++i) inv[tau[i]] = i;
  return inv;
}

std::vector<std::vector<unsigned>> subsets(unsigned s, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(k);
  std::iota(cur.begin(), cur.end(), 1u);
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[i] == s - k + 1 + static_cast<unsigned>(i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (unsigned j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
  }
  return "?";
}

IdealSystem::IdealSystem(const Poly& f, const FieldCtx& k, unsigned m, FactorOptions opts) : f_(f), opts_(opts) {
  if (!f.is_monic() || f.degree() < 1) fail(ErrorKind::InvalidArgument, "f must be monic of positive degree");
  if (m < 1) fail(ErrorKind::InvalidArgument, "m must be at least 1");
  tensor_ = std::make_shared<TensorAlgebra>(k, FieldEmbedding(f.field, k).map(f));
  for (unsigned s = 1; s <= m; ++s) add_level();
}

void IdealSystem::add_level() {
  const unsigned s = m() + 1;
  const EssentialPart part = essential_part(tensor_, s, opts_.dim_cap, opts_.tensor_cap);
  levels_.push_back(Level{});
  levels_.back().ideals.push_back(Ideal{part.identity, part.dim});
  rebuild_index(s);
  log_.push_back(LogEntry{"level", s, {}, {part.dim}});
}

u64 IdealSystem::shape_hash(const Vec& v) const {
  const FieldCtx& k = tensor_->field();
  auto first = std::find_if(v.begin(), v.end(), [](u64 x) { return x != 0; });
  if (first == v.end()) return 0;
  const u64 norm = k.inv(*first);
  u64 h = 1469598103934665603ull;
  for (u64 x : v) {
    h ^= k.mul(x, norm);
    h *= 1099511628211ull;
  }
  return h;
}

void IdealSystem::rebuild_index(unsigned s) {
  Level& L = levels_[s - 1];
  const auto& t = *tensor_;
  L.bits.assign(bits_for(L.ideals.size()), t.zero(s));
  L.hashes.clear();
  L.index.clear();
  for (std::size_t i = 0; i < L.ideals.size(); ++i) {
    const Vec& e = L.ideals[i].idempotent;
    for (unsigned b = 0; b < L.bits.size(); ++b)
      if ((i >> b) & 1) L.bits[b] = t.add(L.bits[b], e);
    L.hashes.push_back(shape_hash(e));
    L.index[L.hashes.back()].push_back(i);
  }
}

void IdealSystem::set_level(unsigned s, const std::vector<Vec>& idempotents) {
  if (s < 1 || s > m()) fail(ErrorKind::InvalidArgument, "no level " + std::to_string(s));
  const auto& t = *tensor_;
  Vec sum = t.zero(s);
  std::vector<Ideal> ideals;
  u64 total = 0;
  for (const Vec& e : idempotents) {
    if (e.size() != t.size(s) || is_zero(e) || t.mul(s, e, e) != e)
      fail(ErrorKind::InvalidSystem, "level " + std::to_string(s) + " needs nonzero idempotents");
    sum = t.add(sum, e);
    ideals.push_back(Ideal{e, t.idempotent_dim(s, e)});
    total += ideals.back().dim;
  }
  if (sum != t.essential_idempotent(s) || total != tuples::count(n(), s))
    fail(ErrorKind::InvalidSystem, "level " + std::to_string(s) + " is not a decomposition of the essential part");
  levels_[s - 1].ideals = std::move(ideals);
  rebuild_index(s);
}

bool IdealSystem::consistent() const {
  const auto& t = *tensor_;
  for (unsigned s = 1; s <= m(); ++s) {
    Vec sum = t.zero(s);
    u64 total = 0;
    for (const Ideal& I : level(s)) {
      if (t.mul(s, I.idempotent, I.idempotent) != I.idempotent) return false;
      if (t.idempotent_dim(s, I.idempotent) != I.dim) return false;
      sum = t.add(sum, I.idempotent);
      total += I.dim;
    }
    if (sum != t.essential_idempotent(s) || total != tuples::count(n(), s)) return false;
  }
  return true;
}

std::optional<std::pair<std::size_t, u64>> IdealSystem::find_multiple(unsigned s, const Vec& v) const {
  if (is_zero(v)) return std::nullopt;
  const Level& L = levels_[s - 1];
  auto it = L.index.find(shape_hash(v));
  if (it == L.index.end()) return std::nullopt;
  const FieldCtx& k = tensor_->field();
  const std::size_t f = static_cast<std::size_t>(std::find_if(v.begin(), v.end(), [](u64 x) { return x != 0; }) - v.begin());
  for (std::size_t idx : it->second) {
    const Vec& e = L.ideals[idx].idempotent;
    if (e[f] == 0) continue;
    const u64 c = k.div(v[f], e[f]);
    bool same = true;
    for (std::size_t a = 0; a < v.size() && same; ++a) same = v[a] == k.mul(c, e[a]);
    if (same) return std::make_pair(idx, c);
  }
  return std::nullopt;
}

// Binary descent through the bit classes: the ideal met by the largest
// restriction of v, and whether v lies inside it.
IdealSystem::Located IdealSystem::locate(unsigned s, const Vec& v) const {
  const Level& L = levels_[s - 1];
  Located out;
  out.part = v;
  for (unsigned b = 0; b < L.bits.size(); ++b) {
    Vec p = tensor_->mul(s, out.part, L.bits[b]);
    if (is_zero(p)) continue;
    out.index |= std::size_t{1} << b;
    if (p != out.part) {
      out.inside = false;
      out.part = std::move(p);
    }
  }
  if (out.index >= L.ideals.size()) fail(ErrorKind::InvalidSystem, "element outside the essential part");
  return out;
}

void IdealSystem::split(unsigned s, std::size_t i, std::vector<Vec> pieces, LogEntry entry) {
  Level& L = levels_[s - 1];
  const auto& t = *tensor_;
  const std::size_t old_count = L.ideals.size();
  const Vec old = L.ideals[i].idempotent;
  entry.dims.clear();
  std::vector<Ideal> made;
  for (Vec& p : pieces) {
    const u64 d = t.idempotent_dim(s, p);
    entry.dims.push_back(d);
    made.push_back(Ideal{std::move(p), d});
  }
  // bit classes
  const unsigned old_bits = static_cast<unsigned>(L.bits.size());
  const std::size_t new_count = old_count + made.size() - 1;
  L.bits.resize(bits_for(new_count), t.zero(s));
  for (unsigned b = 0; b < old_bits; ++b)
    if ((i >> b) & 1) L.bits[b] = t.add(t.sub(L.bits[b], old), made[0].idempotent);
  for (std::size_t a = 1; a < made.size(); ++a) {
    const std::size_t idx = old_count + a - 1;
    for (unsigned b = 0; b < L.bits.size(); ++b)
      if ((idx >> b) & 1) L.bits[b] = t.add(L.bits[b], made[a].idempotent);
  }
  // shape index
  auto& bucket = L.index[L.hashes[i]];
  bucket.erase(std::find(bucket.begin(), bucket.end(), i));
  if (bucket.empty()) L.index.erase(L.hashes[i]);
  for (std::size_t a = 0; a < made.size(); ++a) {
    const std::size_t idx = a == 0 ? i : old_count + a - 1;
    const u64 h = shape_hash(made[a].idempotent);
    if (a == 0) {
      L.hashes[i] = h;
      L.ideals[i] = std::move(made[0]);
    } else {
      L.hashes.push_back(h);
      L.ideals.push_back(std::move(made[a]));
    }
    L.index[h].push_back(idx);
  }
  log_.push_back(std::move(entry));
}

Poly IdealSystem::level_one_factor(const Vec& e) const {
  const auto& t = *tensor_;
  const FieldCtx& k = t.field();
  const Poly g = poly_gcd(t.poly(), Poly(k, t.sub(t.one(1), e)));
  const FieldEmbedding emb(f_.field, k);
  std::vector<u64> c;
  for (u64 x : g.coeffs) {
    auto pre = emb.preimage(x);
    if (!pre) fail(ErrorKind::InvalidSystem, "level-1 factor is not defined over the input field");
    c.push_back(*pre);
  }
  return Poly(f_.field, std::move(c));
}

StepResult IdealSystem::r4() {
  const auto& L = level(1);
  if (L.size() < 2) return {};
  StepResult out;
  out.kind = StepResult::Kind::Factor;
  for (const Ideal& I : L) {
    Poly g = level_one_factor(I.idempotent);
    if (out.factor.is_zero() || factor_less(g, out.factor)) out.factor = std::move(g);
  }
  log_.push_back(LogEntry{"R4", 1, {static_cast<u64>(out.factor.degree())}, {}});
  return out;
}

StepResult IdealSystem::r1() {
  const auto& t = *tensor_;
  for (unsigned s = 2; s <= m(); ++s)
    for (std::size_t ip = 0; ip < level(s).size(); ++ip)
      for (unsigned j = 1; j <= s; ++j) {
        const Vec& e = level(s)[ip].idempotent;
        const Vec tr = t.trace_slot(s, e, j);
        if (find_multiple(s - 1, tr)) continue;
        const Located loc = locate(s - 1, tr);
        if (loc.inside) continue;
        const Vec h = t.mul(s, e, t.embed_slot(s, level(s - 1)[loc.index].idempotent, j));
        std::vector<Vec> pieces{h, t.sub(e, h)};
        split(s, ip, std::move(pieces), LogEntry{"R1", s, {ip, j, loc.index}, {}});
        return {StepResult::Kind::Refined, {}, 0};
      }
  return {};
}

StepResult IdealSystem::r2() {
  const auto& t = *tensor_;
  for (unsigned s = 2; s <= m(); ++s)
    for (std::size_t ip = 0; ip < level(s).size(); ++ip)
      for (unsigned j = 1; j <= s; ++j) {
        const Vec tr = t.trace_slot(s, level(s)[ip].idempotent, j);
        if (find_multiple(s - 1, tr)) continue;
        const Located loc = locate(s - 1, tr);
        if (!loc.inside) continue;
        const Vec& e = level(s - 1)[loc.index].idempotent;
        auto classes = t.value_classes(s - 1, tr, n() - s + 1);
        Vec rest = e;
        std::vector<Vec> pieces;
        for (std::size_t c = 1; c < classes.size(); ++c) {
          if (is_zero(classes[c])) continue;
          rest = t.sub(rest, classes[c]);
          pieces.push_back(std::move(classes[c]));
        }
        if (!is_zero(rest)) pieces.insert(pieces.begin(), std::move(rest));
        if (pieces.size() < 2) fail(ErrorKind::InvalidSystem, "fibre counts are not a function of the ideal");
        split(s - 1, loc.index, std::move(pieces), LogEntry{"R2", s - 1, {loc.index, s, ip, j}, {}});
        return {StepResult::Kind::Refined, {}, 0};
      }
  return {};
}

StepResult IdealSystem::r3() {
  const auto& t = *tensor_;
  for (unsigned s = 2; s <= m(); ++s) {
    const auto perms = tuples::all_perms(s);
    for (std::size_t pi = 1; pi < perms.size(); ++pi) {
      const Perm& tau = perms[pi];
      for (std::size_t i = 0; i < level(s).size(); ++i) {
        const Vec h = t.permute(s, level(s)[i].idempotent, tau);
        if (auto hit = find_multiple(s, h); hit && hit->second == 1) continue;
        const Located loc = locate(s, h);
        const Vec& target = level(s)[loc.index].idempotent;
        LogEntry entry{"R3", s, {}, {}};
        if (loc.part != target) {
          // tau(I_i) cuts I_idx
          entry.args = {i, loc.index};
          entry.args.insert(entry.args.end(), tau.begin(), tau.end());
          std::vector<Vec> pieces{loc.part, t.sub(target, loc.part)};
          split(s, loc.index, std::move(pieces), std::move(entry));
        } else {
          // tau(I_i) contains I_idx properly, so tau^{-1}(I_idx) cuts I_i
          const Perm inv = inverse(tau);
          const Vec g = t.permute(s, target, inv);
          entry.args = {loc.index, i};
          entry.args.insert(entry.args.end(), inv.begin(), inv.end());
          std::vector<Vec> pieces{g, t.sub(level(s)[i].idempotent, g)};
          split(s, i, std::move(pieces), std::move(entry));
        }
        return {StepResult::Kind::Refined, {}, 0};
      }
    }
  }
  return {};
}

namespace {

AlgebraView ideal_view(const TensorAlgebra& t, unsigned s, const Vec& e) {
  AlgebraView view;
  view.field = &t.field();
  view.one = e;
  view.mul = [&t, s](const Vec& a, const Vec& b) { return t.mul(s, a, b); };
  for (unsigned l = 1; l <= s; ++l) view.generators.push_back(t.mul_var(s, e, l));
  view.basis = [&t, s, e] { return ideal_basis(t, s, e); };
  return view;
}

}  // namespace

StepResult IdealSystem::r5() {
  const auto& t = *tensor_;
  for (unsigned s = 2; s <= m(); ++s) {
    const auto perms = tuples::all_perms(s);
    for (std::size_t pi = 1; pi < perms.size(); ++pi) {
      const Perm& tau = perms[pi];
      const u64 r = perm_order(tau);
      if (!is_prime(r)) continue;
      for (std::size_t i = 0; i < level(s).size(); ++i) {
        const Vec e = level(s)[i].idempotent;
        if (t.permute(s, e, tau) != e) continue;
        const AlgebraView view = ideal_view(t, s, e);
        const auto out = split_by_automorphism(view, [&](const Vec& a) { return t.permute(s, a, tau); }, r);
        if (!out.split) fail(ErrorKind::InvalidSystem, "invariant ideal did not split under a fixed-point-free automorphism");
        const Vec z = t.mul(s, t.support(s, out.zero_divisor), e);
        LogEntry entry{"R5", s, {i, r}, {}};
        entry.args.insert(entry.args.end(), tau.begin(), tau.end());
        std::vector<Vec> pieces{z, t.sub(e, z)};
        split(s, i, std::move(pieces), std::move(entry));
        return {StepResult::Kind::Refined, {}, 0};
      }
    }
  }
  return {};
}

StepResult IdealSystem::refine_step(Rule rule) {
  switch (rule) {
    case Rule::R1: return r1();
    case Rule::R2: return r2();
    case Rule::R3: return r3();
    case Rule::R4: return r4();
    case Rule::R5: return r5();
  }
  return {};
}

StepResult IdealSystem::sweep() {
  for (Rule r : {Rule::R4, Rule::R1, Rule::R2, Rule::R3, Rule::R5}) {
    StepResult out = refine_step(r);
    if (out.kind != StepResult::Kind::NoChange) return out;
  }
  return {};
}

Vec IdealSystem::proj_chain(unsigned s, std::size_t p, std::span<const unsigned> coords, std::size_t& q,
                            bool& injective) const {
  const auto& t = *tensor_;
  Vec cur = level(s)[p].idempotent;
  unsigned lvl = s;
  q = p;
  injective = true;
  for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
    const Vec tr = t.trace_slot(lvl, cur, *it);
    const auto hit = find_multiple(lvl - 1, tr);
    if (!hit) fail(ErrorKind::InvalidSystem, "projection is not a single ideal with constant fibres; refine first");
    if (hit->second != 1) injective = false;
    q = hit->first;
    --lvl;
    cur = level(lvl)[q].idempotent;
  }
  return cur;
}

std::vector<Matching> IdealSystem::matchings() const {
  std::vector<Matching> out;
  for (unsigned s = 2; s <= m(); ++s)
    for (std::size_t p = 0; p < level(s).size(); ++p)
      for (unsigned k = 1; k < s; ++k) {
        const auto sets = subsets(s, k);
        std::vector<std::size_t> q(sets.size());
        std::vector<bool> inj(sets.size());
        for (std::size_t a = 0; a < sets.size(); ++a) {
          bool b = true;
          proj_chain(s, p, sets[a], q[a], b);
          inj[a] = b;
        }
        for (std::size_t a = 0; a < sets.size(); ++a)
          for (std::size_t b = a + 1; b < sets.size(); ++b)
            if (inj[a] && q[a] == q[b]) out.push_back(Matching{s, static_cast<uint32_t>(p), sets[a], sets[b]});
      }
  return out;
}

StepResult IdealSystem::matching_refinement(const Matching& mt) {
  const auto& t = *tensor_;
  const FieldCtx& k = t.field();
  const unsigned s = mt.level;
  auto bad = [&](const std::string& why) { fail(ErrorKind::NotAMatching, why); };
  if (s < 2 || s > m() || mt.color >= level(s).size()) bad("no such ideal");
  if (mt.i.empty() || mt.i.size() != mt.j.size() || mt.i.size() >= s || mt.i == mt.j) bad("bad coordinate sets");
  for (const auto* v : {&mt.i, &mt.j})
    for (std::size_t a = 0; a < v->size(); ++a)
      if ((*v)[a] < 1 || (*v)[a] > s || (a && (*v)[a] <= (*v)[a - 1])) bad("coordinates must increase within 1..s");
  std::size_t qi = 0, qj = 0;
  bool inj_i = true, inj_j = true;
  const Vec eq = proj_chain(s, mt.color, mt.i, qi, inj_i);
  proj_chain(s, mt.color, mt.j, qj, inj_j);
  if (qi != qj || !inj_i) bad("projections differ or are not injective");

  const unsigned lo = s - static_cast<unsigned>(mt.i.size());
  const Vec& ep = level(s)[mt.color].idempotent;
  auto sigma = [&](const Vec& a) {
    Vec b = a;
    unsigned l = lo;
    for (unsigned slot : mt.j) b = t.embed_slot(++l, b, slot);
    b = t.mul(s, b, ep);
    for (auto it = mt.i.rbegin(); it != mt.i.rend(); ++it) b = t.trace_slot(l--, b, *it);
    return b;
  };

  const AlgebraView view = ideal_view(t, lo, eq);
  std::vector<Vec> cur = view.generators;
  u64 order = 0;
  do {
    for (Vec& g : cur) g = sigma(g);
    if (++order > opts_.order_cap) fail(ErrorKind::WorkCapExceeded, "matching automorphism order exceeds the cap");
  } while (cur != view.generators);
  if (order == 1) fail(ErrorKind::TrivialAutomorphism, "matching induces the identity");

  u64 r = 0;
  const auto primes = prime_divisors(order);
  for (u64 c : primes)
    if (c == k.characteristic() || (k.order() - 1) % c == 0) {
      r = c;
      break;
    }
  if (r == 0) return {StepResult::Kind::NeedsPrime, {}, primes.front()};

  const u64 steps = order / r;
  auto sigma_r = [&](const Vec& a) {
    Vec b = a;
    for (u64 i = 0; i < steps; ++i) b = sigma(b);
    return b;
  };
  const auto out = split_by_automorphism(view, sigma_r, r);
  if (!out.split) fail(ErrorKind::InvalidSystem, "matching automorphism did not split its ideal");
  const Vec z = t.mul(lo, t.support(lo, out.zero_divisor), eq);
  LogEntry entry{"M", s, {mt.color, mt.i.size()}, {}};
  entry.args.insert(entry.args.end(), mt.i.begin(), mt.i.end());
  entry.args.insert(entry.args.end(), mt.j.begin(), mt.j.end());
  entry.args.push_back(qi);
  entry.args.push_back(r);
  std::vector<Vec> pieces{z, t.sub(eq, z)};
  split(lo, qi, std::move(pieces), std::move(entry));
  if (lo == 1) return r4();
  return {StepResult::Kind::Refined, {}, 0};
}

StuckCertificate certify(const IdealSystem& sys) {
  StuckCertificate c;
  const auto& t = sys.tensor();
  c.idempotent = c.sums = c.dimensions = true;
  for (unsigned s = 1; s <= sys.m(); ++s) {
    Vec sum = t.zero(s);
    u64 total = 0;
    for (const Ideal& I : sys.level(s)) {
      if (t.mul(s, I.idempotent, I.idempotent) != I.idempotent) c.idempotent = false;
      sum = t.add(sum, I.idempotent);
      total += t.idempotent_dim(s, I.idempotent);
    }
    if (sum != t.essential_idempotent(s)) c.sums = false;
    if (total != tuples::count(sys.n(), s)) c.dimensions = false;
    c.level_dims.push_back(sys.level(s).size());
  }
  // indicator functions summing to 1 mod p with total size |E_s| cover each tuple once
  c.orthogonal = c.idempotent && c.sums && c.dimensions;
  c.homogeneous = sys.level(1).size() == 1;
  IdealSystem copy = sys;
  c.stable = copy.sweep().kind == StepResult::Kind::NoChange;
  c.no_matching = c.stable && copy.matchings().empty();
  return c;
}

MCollection supports(const IdealSystem& sys, std::span<const u64> roots) {
  const auto& t = sys.tensor();
  const unsigned n = sys.n();
  if (roots.size() != n) fail(ErrorKind::InvalidArgument, "need exactly deg f roots");
  const FieldEmbedding emb(sys.base_poly().field, t.field());
  std::vector<u64> pts;
  for (u64 r : roots) {
    if (sys.base_poly().eval(r) != 0) fail(ErrorKind::InvalidArgument, "not a root of f");
    pts.push_back(emb(r));
  }
  std::vector<std::vector<uint32_t>> levels;
  for (unsigned s = 1; s <= sys.m(); ++s) {
    const u64 count = tuples::count(n, s);
    std::vector<uint32_t> color(count, UINT32_MAX);
    for (std::size_t i = 0; i < sys.level(s).size(); ++i) {
      const Vec vals = t.eval_grid(s, sys.level(s)[i].idempotent, pts);
      for (std::size_t g = 0; g < vals.size(); ++g) {
        if (vals[g] == 0) continue;
        Tuple tup(s);
        std::size_t x = g;
        for (unsigned l = 0; l < s; ++l, x /= n) tup[l] = static_cast<uint32_t>(x % n);
        std::vector<uint32_t> sorted = tup;
        std::sort(sorted.begin(), sorted.end());
        const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        if (vals[g] != 1 || !distinct) fail(ErrorKind::NotAPartition, "ideal is not an indicator of essential tuples");
        uint32_t& c = color[tuples::rank(n, tup)];
        if (c != UINT32_MAX) fail(ErrorKind::NotAPartition, "ideals overlap");
        c = static_cast<uint32_t>(i);
      }
    }
    if (std::find(color.begin(), color.end(), UINT32_MAX) != color.end())
      fail(ErrorKind::NotAPartition, "ideals do not cover the essential tuples");
    levels.push_back(std::move(color));
  }
  return MCollection(n, std::move(levels), true);
}

}  // namespace sf
