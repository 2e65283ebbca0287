#include "schemefactor/mscheme.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "json.hpp"
#include "schemefactor/assoc.hpp"
#include "schemefactor_catalog.hpp"

namespace sf {

namespace {
constexpr uint32_t kNone = 0xffffffffu;

std::vector<std::vector<unsigned>> combinations(unsigned s, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(k);
  std::iota(cur.begin(), cur.end(), 1u);
  if (k == 0 || k > s) return out;
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[i] == s - k + 1 + static_cast<unsigned>(i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::string join(const std::vector<unsigned>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}
}  // namespace

// ---------------------------------------------------------------------------
// tuple encoding

namespace tuples {

u64 count(unsigned n, unsigned s) {
  if (s > n) return 0;
  u64 c = 1;
  for (unsigned i = 0; i < s; ++i) c *= n - i;
  return c;
}

u64 rank(unsigned n, std::span<const uint32_t> t) {
  u64 used = 0, r = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const u64 below = t[i] == 0 ? 0 : (~used) & ((u64{1} << t[i]) - 1);
    r = r * (n - i) + static_cast<u64>(std::popcount(below));
    used |= u64{1} << t[i];
  }
  return r;
}

Tuple unrank(unsigned n, unsigned s, u64 r) {
  std::vector<unsigned> digit(s);
  for (unsigned i = s; i-- > 0;) {
    digit[i] = static_cast<unsigned>(r % (n - i));
    r /= (n - i);
  }
  Tuple t(s);
  u64 used = 0;
  for (unsigned i = 0; i < s; ++i) {
    unsigned d = digit[i];
    for (uint32_t v = 0; v < n; ++v) {
      if (used >> v & 1) continue;
      if (d-- == 0) {
        t[i] = v;
        used |= u64{1} << v;
        break;
      }
    }
  }
  return t;
}

Tuple project(std::span<const uint32_t> t, std::span<const unsigned> idx) {
  Tuple out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::find(idx.begin(), idx.end(), static_cast<unsigned>(i + 1)) == idx.end()) out.push_back(t[i]);
  return out;
}

Tuple permute(std::span<const uint32_t> t, std::span<const uint32_t> tau) {
  Tuple out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[tau[i]];
  return out;
}

std::vector<Perm> all_perms(unsigned s) {
  std::vector<Perm> out;
  Perm p(s);
  std::iota(p.begin(), p.end(), 0u);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace tuples

// ---------------------------------------------------------------------------
// MCollection

MCollection::MCollection(unsigned n, std::vector<std::vector<uint32_t>> levels, bool keep_ids) : n_(n) {
  if (n == 0 || n > kMaxPoints) fail(ErrorKind::InvalidArgument, "point count must be in [1, 64]");
  if (levels.empty() || levels.size() > n) fail(ErrorKind::InvalidArgument, "depth m must be in [1, n]");
  levels_.resize(levels.size());
  for (unsigned s = 1; s <= levels.size(); ++s) {
    auto& src = levels[s - 1];
    if (src.size() != tuples::count(n, s))
      fail(ErrorKind::InvalidArgument, "level " + std::to_string(s) + " has the wrong number of tuples");
    Level& lv = levels_[s - 1];
    if (keep_ids) {
      uint32_t mx = 0;
      for (uint32_t c : src) mx = std::max(mx, c);
      lv.size.assign(static_cast<std::size_t>(mx) + 1, 0);
      lv.rep.assign(static_cast<std::size_t>(mx) + 1, ~u64{0});
      for (u64 r = 0; r < src.size(); ++r) {
        if (lv.size[src[r]]++ == 0) lv.rep[src[r]] = r;
      }
      for (u64 sz : lv.size)
        if (sz == 0) fail(ErrorKind::InvalidArgument, "color ids at level " + std::to_string(s) + " are not dense");
      lv.color = std::move(src);
    } else {
      std::map<uint32_t, uint32_t> relabel;
      lv.color.resize(src.size());
      for (u64 r = 0; r < src.size(); ++r) {
        auto [it, fresh] = relabel.emplace(src[r], static_cast<uint32_t>(relabel.size()));
        if (fresh) {
          lv.size.push_back(0);
          lv.rep.push_back(r);
        }
        lv.color[r] = it->second;
        ++lv.size[it->second];
      }
    }
  }
}

uint32_t MCollection::color_of(std::span<const uint32_t> t) const {
  return levels_.at(t.size() - 1).color[tuples::rank(n_, t)];
}

Tuple MCollection::representative(unsigned s, uint32_t c) const { return tuples::unrank(n_, s, levels_.at(s - 1).rep.at(c)); }

std::vector<u64> MCollection::members(unsigned s, uint32_t c) const {
  std::vector<u64> out;
  const auto& col = levels_.at(s - 1).color;
  for (u64 r = levels_[s - 1].rep.at(c); r < col.size(); ++r)
    if (col[r] == c) out.push_back(r);
  return out;
}

uint32_t MCollection::project_color(unsigned s, uint32_t c, std::span<const unsigned> idx) const {
  return color_of(tuples::project(representative(s, c), idx));
}

std::vector<u64> MCollection::project_set(unsigned s, uint32_t c, std::span<const unsigned> idx) const {
  std::vector<u64> out;
  for (u64 r : members(s, c)) out.push_back(tuples::rank(n_, tuples::project(tuples::unrank(n_, s, r), idx)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool operator==(const MCollection& a, const MCollection& b) {
  if (a.n_ != b.n_ || a.levels_.size() != b.levels_.size()) return false;
  for (std::size_t i = 0; i < a.levels_.size(); ++i) {
    const auto& ca = a.levels_[i].color;
    const auto& cb = b.levels_[i].color;
    if (a.levels_[i].size.size() != b.levels_[i].size.size()) return false;
    std::vector<uint32_t> ab(a.levels_[i].size.size(), kNone);
    for (std::size_t r = 0; r < ca.size(); ++r) {
      if (ab[ca[r]] == kNone) ab[ca[r]] = cb[r];
      if (ab[ca[r]] != cb[r]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// properties

bool PropertyReport::all(const std::vector<bool>& v) const {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

namespace {

// fixed[c] = (P_c^tau == P_c), by the definition on every tuple
std::vector<bool> fixed_colors(const MCollection& pi, unsigned s, const Perm& tau) {
  std::vector<bool> fixed(pi.num_colors(s), true);
  const auto& col = pi.colors(s);
  for (u64 r = 0; r < col.size(); ++r) {
    Tuple t = tuples::unrank(pi.n(), s, r);
    if (pi.color_of(tuples::permute(t, tau)) != col[r]) fixed[col[r]] = false;
  }
  return fixed;
}

// fibre counts #{t in P : pi_i(t) = u}, for every u in the color Q
std::vector<u64> fibre_counts(const MCollection& pi, unsigned s, uint32_t p, unsigned i, uint32_t q) {
  const unsigned idx[1] = {i};
  std::map<u64, u64> hits;
  for (u64 r : pi.members(s, p)) ++hits[tuples::rank(pi.n(), tuples::project(tuples::unrank(pi.n(), s, r), idx))];
  std::vector<u64> out;
  for (u64 r : pi.members(s - 1, q)) {
    auto it = hits.find(r);
    out.push_back(it == hits.end() ? 0 : it->second);
  }
  return out;
}

}  // namespace

PropertyReport check_properties(const MCollection& pi) {
  const unsigned n = pi.n(), m = pi.m();
  PropertyReport rep;
  rep.m = m;
  rep.compatible.assign(m + 1, true);
  rep.regular.assign(m + 1, true);
  rep.invariant.assign(m + 1, true);
  rep.antisymmetric.assign(m + 1, true);
  rep.symmetric.assign(m + 1, true);
  rep.homogeneous = pi.num_colors(1) == 1;

  for (unsigned s = 2; s <= m; ++s) {
    const auto& col = pi.colors(s);
    const uint32_t nc = pi.num_colors(s);
    // P1 and the projection ranks used by P2
    std::vector<uint32_t> proj(static_cast<std::size_t>(nc) * s, kNone);
    std::vector<u64> proj_first(static_cast<std::size_t>(nc) * s, 0);
    std::vector<std::vector<std::pair<u64, uint32_t>>> fibres(s);
    for (auto& f : fibres) f.reserve(col.size());
    for (u64 r = 0; r < col.size(); ++r) {
      Tuple t = tuples::unrank(n, s, r);
      for (unsigned i = 1; i <= s; ++i) {
        const unsigned idx[1] = {i};
        Tuple pt = tuples::project(t, idx);
        const u64 pr = tuples::rank(n, pt);
        const uint32_t pc = pi.color_at(s - 1, pr);
        fibres[i - 1].emplace_back(pr, col[r]);
        std::size_t slot = static_cast<std::size_t>(col[r]) * s + (i - 1);
        if (proj[slot] == kNone) {
          proj[slot] = pc;
          proj_first[slot] = r;
        } else if (proj[slot] != pc && rep.compatible[s]) {
          rep.compatible[s] = false;
          Violation v;
          v.property = "P1";
          v.level = s;
          v.colors = {col[r]};
          v.tuples = {tuples::unrank(n, s, proj_first[slot]), t};
          v.coordinate = i;
          v.detail = "projections along coordinate " + std::to_string(i) + " land in different colors";
          rep.violations.push_back(v);
        }
      }
    }
    // P2
    for (unsigned i = 1; i <= s && rep.regular[s]; ++i) {
      auto& fb = fibres[i - 1];
      std::sort(fb.begin(), fb.end());
      // (Q, P) -> (count, number of u, witness u)
      std::map<std::pair<uint32_t, uint32_t>, std::tuple<u64, u64, u64>> seen;
      for (std::size_t a = 0; a < fb.size() && rep.regular[s];) {
        std::size_t b = a;
        while (b < fb.size() && fb[b] == fb[a]) ++b;
        const u64 u = fb[a].first;
        const uint32_t p = fb[a].second;
        const uint32_t q = pi.color_at(s - 1, u);
        const u64 cnt = b - a;
        auto [it, fresh] = seen.emplace(std::make_pair(q, p), std::make_tuple(cnt, 0, u));
        auto& [c0, num, u0] = it->second;
        ++num;
        if (!fresh && c0 != cnt) {
          rep.regular[s] = false;
          Violation v;
          v.property = "P2";
          v.level = s;
          v.colors = {p, q};
          v.tuples = {tuples::unrank(n, s - 1, u0), tuples::unrank(n, s - 1, u)};
          v.coordinate = i;
          v.detail = "fibre sizes " + std::to_string(c0) + " and " + std::to_string(cnt) + " over one color";
          rep.violations.push_back(v);
        }
        a = b;
      }
      for (auto& [key, val] : seen) {
        if (!rep.regular[s]) break;
        const auto [q, p] = key;
        if (std::get<1>(val) == pi.color_size(s - 1, q)) continue;
        // some u in Q has an empty fibre in P
        auto counts = fibre_counts(pi, s, p, i, q);
        auto mem = pi.members(s - 1, q);
        std::size_t zero = 0;
        while (zero < counts.size() && counts[zero] != 0) ++zero;
        rep.regular[s] = false;
        Violation v;
        v.property = "P2";
        v.level = s;
        v.colors = {p, q};
        v.tuples = {tuples::unrank(n, s - 1, std::get<2>(val)), tuples::unrank(n, s - 1, mem[zero])};
        v.coordinate = i;
        v.detail = "fibre sizes " + std::to_string(std::get<0>(val)) + " and 0 over one color";
        rep.violations.push_back(v);
      }
    }
    // P3 via adjacent transpositions
    for (unsigned a = 0; a + 1 < s && rep.invariant[s]; ++a) {
      Perm tau(s);
      std::iota(tau.begin(), tau.end(), 0u);
      std::swap(tau[a], tau[a + 1]);
      std::vector<uint32_t> img(nc, kNone);
      for (u64 r = 0; r < col.size() && rep.invariant[s]; ++r) {
        Tuple t = tuples::unrank(n, s, r);
        const uint32_t c = pi.color_of(tuples::permute(t, tau));
        if (img[col[r]] == kNone) img[col[r]] = c;
        if (img[col[r]] != c) {
          rep.invariant[s] = false;
          Violation v;
          v.property = "P3";
          v.level = s;
          v.colors = {col[r]};
          v.tuples = {pi.representative(s, col[r]), t};
          v.tau = tau;
          v.detail = "image of the color under tau meets two colors";
          rep.violations.push_back(v);
        }
      }
      for (uint32_t c = 0; c < nc && rep.invariant[s]; ++c)
        if (pi.color_size(s, img[c]) != pi.color_size(s, c)) {
          rep.invariant[s] = false;
          Violation v;
          v.property = "P3";
          v.level = s;
          v.colors = {c, img[c]};
          v.tuples = {pi.representative(s, c)};
          v.tau = tau;
          v.detail = "image of the color under tau is a proper subset of a color";
          rep.violations.push_back(v);
        }
    }
    // P5 / P6
    auto perms = tuples::all_perms(s);
    for (std::size_t k = 1; k < perms.size(); ++k) {
      const Perm& tau = perms[k];
      std::vector<bool> fixed;
      if (rep.invariant[s]) {
        fixed.resize(nc);
        for (uint32_t c = 0; c < nc; ++c) fixed[c] = pi.color_of(tuples::permute(pi.representative(s, c), tau)) == c;
      } else {
        fixed = fixed_colors(pi, s, tau);
      }
      for (uint32_t c = 0; c < nc; ++c) {
        if (fixed[c] && rep.antisymmetric[s]) {
          rep.antisymmetric[s] = false;
          Violation v;
          v.property = "P5";
          v.level = s;
          v.colors = {c};
          v.tuples = {pi.representative(s, c)};
          v.tau = tau;
          v.detail = "color fixed by a nontrivial coordinate permutation";
          rep.violations.push_back(v);
        }
        if (!fixed[c] && rep.symmetric[s]) {
          rep.symmetric[s] = false;
          Violation v;
          v.property = "P6";
          v.level = s;
          v.colors = {c};
          v.tuples = {pi.representative(s, c)};
          v.tau = tau;
          v.detail = "color moved by a coordinate permutation";
          rep.violations.push_back(v);
        }
      }
    }
  }
  return rep;
}

bool replay_violation(const MCollection& pi, const Violation& v) {
  const unsigned s = v.level;
  if (v.property == "P1") {
    const unsigned idx[1] = {v.coordinate};
    return pi.color_of(v.tuples[0]) == pi.color_of(v.tuples[1]) &&
           pi.color_of(tuples::project(v.tuples[0], idx)) != pi.color_of(tuples::project(v.tuples[1], idx));
  }
  if (v.property == "P2") {
    if (pi.color_of(v.tuples[0]) != pi.color_of(v.tuples[1])) return false;
    const unsigned idx[1] = {v.coordinate};
    const u64 r0 = tuples::rank(pi.n(), v.tuples[0]), r1 = tuples::rank(pi.n(), v.tuples[1]);
    u64 c0 = 0, c1 = 0;
    for (u64 r : pi.members(s, v.colors[0])) {
      const u64 pr = tuples::rank(pi.n(), tuples::project(tuples::unrank(pi.n(), s, r), idx));
      c0 += pr == r0;
      c1 += pr == r1;
    }
    return c0 != c1;
  }
  if (v.property == "P3") {
    std::vector<uint32_t> hit;
    for (u64 r : pi.members(s, v.colors[0])) hit.push_back(pi.color_of(tuples::permute(tuples::unrank(pi.n(), s, r), v.tau)));
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    return hit.size() > 1 || pi.color_size(s, hit[0]) != pi.color_size(s, v.colors[0]);
  }
  if (v.property == "P5" || v.property == "P6") {
    bool fixed = true;
    for (u64 r : pi.members(s, v.colors[0]))
      if (pi.color_of(tuples::permute(tuples::unrank(pi.n(), s, r), v.tau)) != v.colors[0]) fixed = false;
    return v.property == "P5" ? fixed : !fixed;
  }
  return false;
}

u64 subdegree(const MCollection& pi, unsigned s, uint32_t p, unsigned s_low, uint32_t q) {
  if (s_low == 0 || s_low >= s || s > pi.m())
    fail(ErrorKind::NotAProjection, "level " + std::to_string(s_low) + " is not below level " + std::to_string(s));
  bool found = false;
  for (const auto& idx : combinations(s, s - s_low))
    if (pi.project_color(s, p, idx) == q) {
      found = true;
      break;
    }
  if (!found)
    fail(ErrorKind::NotAProjection, "color " + std::to_string(q) + " at level " + std::to_string(s_low) +
                                        " is not a projection of color " + std::to_string(p));
  const u64 a = pi.color_size(s, p), b = pi.color_size(s_low, q);
  if (a % b != 0) fail(ErrorKind::NonIntegral, std::to_string(a) + "/" + std::to_string(b) + " is not integral");
  return a / b;
}

// ---------------------------------------------------------------------------
// matchings

bool verify_matching(const MCollection& pi, const Matching& mt) {
  if (mt.level < 2 || mt.level > pi.m() || mt.i.size() != mt.j.size() || mt.i.empty() || mt.i == mt.j) return false;
  if (mt.i.size() >= mt.level || mt.color >= pi.num_colors(mt.level)) return false;
  auto increasing = [&](const std::vector<unsigned>& v) {
    for (std::size_t a = 0; a < v.size(); ++a)
      if (v[a] < 1 || v[a] > mt.level || (a && v[a] <= v[a - 1])) return false;
    return true;
  };
  if (!increasing(mt.i) || !increasing(mt.j)) return false;
  auto a = pi.project_set(mt.level, mt.color, mt.i);
  auto b = pi.project_set(mt.level, mt.color, mt.j);
  return a == b && a.size() == pi.color_size(mt.level, mt.color);
}

Matching make_matching(const MCollection& pi, unsigned level, uint32_t color, std::vector<unsigned> i,
                       std::vector<unsigned> j) {
  Matching mt{level, color, std::move(i), std::move(j)};
  if (!verify_matching(pi, mt))
    fail(ErrorKind::NotAMatching, "color " + std::to_string(color) + " at level " + std::to_string(level) +
                                      " with " + join(mt.i) + " vs " + join(mt.j) + " is not a matching");
  return mt;
}

std::vector<Matching> find_matchings(const MCollection& pi) {
  const PropertyReport rep = check_properties(pi);
  const bool fast = rep.all(rep.compatible) && rep.all(rep.regular);
  std::vector<Matching> out;
  for (unsigned s = 2; s <= pi.m(); ++s)
    for (uint32_t p = 0; p < pi.num_colors(s); ++p)
      for (unsigned k = 1; k < s; ++k) {
        if (pi.color_size(s, p) > tuples::count(pi.n(), s - k)) continue;
        auto sets = combinations(s, k);
        std::vector<uint32_t> pc(sets.size());
        for (std::size_t a = 0; a < sets.size(); ++a) pc[a] = pi.project_color(s, p, sets[a]);
        for (std::size_t a = 0; a < sets.size(); ++a)
          for (std::size_t b = a + 1; b < sets.size(); ++b) {
            Matching mt{s, p, sets[a], sets[b]};
            if (fast) {
              if (pc[a] != pc[b] || pi.color_size(s - k, pc[a]) != pi.color_size(s, p)) continue;
              out.push_back(mt);
            } else if (verify_matching(pi, mt)) {
              out.push_back(mt);
            }
          }
      }
  return out;
}

namespace {

bool antisymmetric_level2(const MCollection& pi) {
  if (pi.m() < 2) return true;
  std::vector<bool> fixed(pi.num_colors(2), true);
  for (u64 r = 0; r < pi.colors(2).size(); ++r) {
    Tuple t = tuples::unrank(pi.n(), 2, r);
    const uint32_t a = pi.colors(2)[r];
    const uint32_t b = pi.color_of(Tuple{t[1], t[0]});
    if (a != b) fixed[a] = false;
  }
  return std::none_of(fixed.begin(), fixed.end(), [](bool b) { return b; });
}

}  // namespace

Matching matching_chase(const MCollection& pi, unsigned t, uint32_t p_t, unsigned i, u64 ell) {
  if (t < 2 || t > pi.m() || i < 1 || i > t) fail(ErrorKind::InvalidArgument, "matching_chase: bad level or coordinate");
  if (!antisymmetric_level2(pi)) fail(ErrorKind::NotAntisymmetric, "the collection is not antisymmetric at level 2");
  const unsigned idx[1] = {i};
  const uint32_t q = pi.project_color(t, p_t, idx);
  const u64 s0 = subdegree(pi, t, p_t, t - 1, q);
  if (s0 > ell)
    fail(ErrorKind::PreconditionFailed, "subdegree " + std::to_string(s0) + " exceeds ell = " + std::to_string(ell));
  if (s0 == 1) {
    // a subdegree-1 color matches itself along any coordinate with the same projection
    for (unsigned j = 1; j <= t; ++j) {
      if (j == i) continue;
      Matching mt{t, p_t, {std::min(i, j)}, {std::max(i, j)}};
      if (verify_matching(pi, mt)) return mt;
    }
    fail(ErrorKind::PreconditionFailed, "subdegree 1 but no second coordinate with the same projection");
  }
  if (t >= pi.m() || pi.m() < t - 1 + ceil_log2(ell))
    fail(ErrorKind::PreconditionFailed, "m = " + std::to_string(pi.m()) + " is below t - 1 + ceil(log2 ell) = " +
                                            std::to_string(t - 1 + ceil_log2(ell)) + " or not above t");
  // move coordinate i to the end so that the chase always projects along the last one
  Perm tau;
  for (unsigned a = 0; a < t; ++a)
    if (a != i - 1) tau.push_back(a);
  tau.push_back(i - 1);
  uint32_t cur = pi.color_of(tuples::permute(pi.representative(t, p_t), tau));
  unsigned level = t;
  u64 prev = s0;
  const unsigned n = pi.n();
  while (true) {
    if (level + 1 > pi.m())
      fail(ErrorKind::DepthExhausted, "matching chase needs level " + std::to_string(level + 1) + " but m = " +
                                          std::to_string(pi.m()));
    // U = {v : pi_level(v), pi_{level+1}(v) in cur}; take its least color
    uint32_t best = kNone;
    for (u64 r : pi.members(level, cur)) {
      Tuple x = tuples::unrank(n, level, r);
      u64 used = 0;
      for (uint32_t v : x) used |= u64{1} << v;
      for (uint32_t b = 0; b < n; ++b) {
        if (used >> b & 1) continue;
        Tuple y = x;
        y.back() = b;
        if (pi.color_of(y) != cur) continue;
        Tuple v = x;
        v.push_back(b);
        best = std::min(best, pi.color_of(v));
      }
    }
    if (best == kNone) fail(ErrorKind::PreconditionFailed, "empty extension set at level " + std::to_string(level + 1));
    const u64 sub = subdegree(pi, level + 1, best, level, cur);
    if (2 * sub >= prev)
      fail(ErrorKind::PreconditionFailed, "subdegree did not halve (" + std::to_string(prev) + " -> " +
                                              std::to_string(sub) + "): input is not an antisymmetric scheme");
    ++level;
    if (sub == 1) return make_matching(pi, level, best, {level - 1}, {level});
    cur = best;
    prev = sub;
  }
}

Matching prime_matching(const MCollection& pi, u64 ell) {
  const unsigned n = pi.n();
  if (!is_prime(n)) fail(ErrorKind::PreconditionFailed, "n = " + std::to_string(n) + " is not prime");
  if (ell < 2) fail(ErrorKind::PreconditionFailed, "ell must be at least 2");
  const unsigned need = ceil_log2(ell * ell) + 3;
  if (pi.m() < need)
    fail(ErrorKind::PreconditionFailed, "m = " + std::to_string(pi.m()) + " < ceil(2 log2 ell) + 3 = " + std::to_string(need));
  if (pi.num_colors(1) != 1) fail(ErrorKind::PreconditionFailed, "not homogeneous");
  const PropertyReport rep = check_properties(pi);
  if (!rep.is_scheme()) fail(ErrorKind::PreconditionFailed, "not an m-scheme");
  if (!rep.is_antisymmetric()) fail(ErrorKind::PreconditionFailed, "not antisymmetric");
  const Scheme sch = level2_to_scheme(pi);
  const IntersectionTensor ten = intersection_tensor(sch);
  const u64 k = ten.valency[1];
  for (uint32_t g = 1; g < ten.d1; ++g)
    if (ten.valency[g] != k) fail(ErrorKind::PreconditionFailed, "nontrivial valencies differ");
  const u64 p2 = pi.num_colors(2);
  if (static_cast<u128>(p2 - 1) * (ell - 1) < static_cast<u128>(2) * (k - 1))
    fail(ErrorKind::PreconditionFailed, "|P_2| = " + std::to_string(p2) + " < 2(k-1)/(ell-1) + 1 with k = " + std::to_string(k));
  if (k == 1) return make_matching(pi, 2, 0, {1}, {2});

  const SearchResult res = small_intersection_search(sch, ell);
  if (!res.witness)
    fail(ErrorKind::TheoremContradiction, "no small intersection numbers for ell = " + std::to_string(ell) +
                                              " in a prime order scheme meeting the bound");
  const auto [u, v, w, w2, c1, c2] = *res.witness;
  // (alpha, beta) in u, gamma and gamma' seen from alpha in v and from beta in w, w'
  for (unsigned alpha = 0; alpha < n; ++alpha)
    for (unsigned beta = 0; beta < n; ++beta) {
      if (sch.at(alpha, beta) != u) continue;
      for (unsigned g = 0; g < n; ++g) {
        if (sch.at(alpha, g) != v || sch.at(beta, g) != w) continue;
        for (unsigned g2 = 0; g2 < n; ++g2) {
          if (sch.at(alpha, g2) != v || sch.at(beta, g2) != w2) continue;
          const Tuple tup{beta, alpha, g, g2};
          const uint32_t p = pi.color_of(tup);
          const uint32_t vc = v - 1;
          const unsigned i13[2] = {1, 3}, i14[2] = {1, 4}, i4[1] = {4};
          if (pi.project_color(4, p, i13) != vc || pi.project_color(4, p, i14) != vc)
            fail(ErrorKind::PreconditionFailed, "witness tuple does not project onto v");
          const u64 spv = subdegree(pi, 4, p, 2, vc);
          if (spv == 1) return make_matching(pi, 4, p, {1, 3}, {1, 4});
          const uint32_t q = pi.project_color(4, p, i4);
          const u64 spq = subdegree(pi, 4, p, 3, q);
          if (spq > 1) return matching_chase(pi, 4, p, 4, ell * ell);
          return matching_chase(pi, 3, q, 1, ell * ell);
        }
      }
    }
  fail(ErrorKind::TheoremContradiction, "intersection witness has no realising tuple");
}

NonexistenceResult nonexistence_check(const PropertyReport& report, unsigned n) {
  if (!(report.homogeneous && report.is_antisymmetric() && report.is_scheme())) return std::monostate{};
  for (u64 r = 2; r <= report.m; ++r) {
    if (!is_prime(r) || n % r != 0) continue;
    ContradictionWitness w;
    w.r = r;
    u64 fact = 1;
    for (u64 i = 2; i <= r; ++i) fact *= i;
    w.lhs = fact * n;
    w.rhs = 1;
    for (u64 i = 0; i < r; ++i) w.rhs *= n - i;
    return w;
  }
  return std::monostate{};
}

NonexistenceResult nonexistence_check(const MCollection& pi) { return nonexistence_check(check_properties(pi), pi.n()); }

// ---------------------------------------------------------------------------
// orbit schemes

MCollection orbit_mscheme(const std::vector<Perm>& generators, unsigned n, unsigned m, u64 work_cap) {
  if (n == 0 || n > kMaxPoints) fail(ErrorKind::InvalidArgument, "point count must be in [1, 64]");
  if (m < 1 || m > n) fail(ErrorKind::InvalidArgument, "m must be in [1, n]");
  for (const auto& g : generators) {
    if (g.size() != n) fail(ErrorKind::InvalidArgument, "generator has the wrong degree");
    std::vector<bool> hit(n, false);
    for (uint32_t x : g) {
      if (x >= n || hit[x]) fail(ErrorKind::InvalidArgument, "generator is not a permutation");
      hit[x] = true;
    }
  }
  std::vector<std::vector<uint32_t>> levels(m);
  for (unsigned s = 1; s <= m; ++s) {
    const u64 cnt = tuples::count(n, s);
    if (cnt * s > work_cap)
      fail(ErrorKind::WorkCapExceeded, "level " + std::to_string(s) + " needs " + std::to_string(cnt * s) +
                                           " tuple slots, cap is " + std::to_string(work_cap));
    std::vector<u64> parent(cnt);
    std::iota(parent.begin(), parent.end(), u64{0});
    auto find = [&](u64 x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    for (u64 r = 0; r < cnt; ++r) {
      Tuple t = tuples::unrank(n, s, r);
      for (const auto& g : generators) {
        Tuple img(s);
        for (unsigned a = 0; a < s; ++a) img[a] = g[t[a]];
        u64 x = find(r), y = find(tuples::rank(n, img));
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
    levels[s - 1].resize(cnt);
    for (u64 r = 0; r < cnt; ++r) levels[s - 1][r] = static_cast<uint32_t>(find(r));
  }
  return MCollection(n, std::move(levels));
}

const std::vector<CatalogGroup>& group_catalog() {
  static const std::vector<CatalogGroup> groups = [] {
    std::vector<CatalogGroup> out;
    auto doc = nlohmann::json::parse(kGroupCatalogJson);
    for (const auto& g : doc.at("groups")) {
      CatalogGroup cg;
      cg.name = g.at("name").get<std::string>();
      cg.degree = g.at("degree").get<unsigned>();
      for (const auto& gen : g.at("generators")) {
        Perm p;
        for (const auto& x : gen) p.push_back(x.get<uint32_t>() - 1);
        cg.generators.push_back(std::move(p));
      }
      out.push_back(std::move(cg));
    }
    return out;
  }();
  return groups;
}

}  // namespace sf
