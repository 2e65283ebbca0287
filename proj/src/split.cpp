#include <algorithm>

#include "schemefactor/algebra.hpp"
#include "schemefactor/error.hpp"
#include "schemefactor/radical.hpp"

namespace sf {

namespace {

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

struct ViewOps {
  const AlgebraView& b;
  const FieldCtx& k;

  Vec sub(const Vec& x, const Vec& y) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = k.sub(x[i], y[i]);
    return r;
  }
  Vec add(const Vec& x, const Vec& y) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = k.add(x[i], y[i]);
    return r;
  }
  Vec scale(const Vec& x, u64 c) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = k.mul(x[i], c);
    return r;
  }
  Vec pow(Vec x, u64 e) const {
    Vec acc = b.one;
    while (e) {
      if (e & 1) acc = b.mul(acc, x);
      e >>= 1;
      if (e) x = b.mul(x, x);
    }
    return acc;
  }
  enum class Unit { Invertible, ZeroDivisor, NotSplit };
  // Over a product of copies of k, x^{Q-1} is the idempotent of the support of x.
  Unit classify(const Vec& x) const {
    const Vec s = pow(x, k.order() - 1);
    if (s == b.one) return Unit::Invertible;
    if (b.mul(s, s) != s) return Unit::NotSplit;
    return Unit::ZeroDivisor;
  }
  Vec inverse(const Vec& x) const { return pow(x, k.order() - 2); }
};

struct ViewRing {
  using Element = Vec;
  const ViewOps& ops;
  Element one() const { return ops.b.one; }
  Element mul(const Element& x, const Element& y) const { return ops.b.mul(x, y); }
  Element scale(const Element& x, u64 c) const { return ops.scale(x, c); }
  ScalarTest compare_scalar(const Element& x, u64 c, Element& witness) const {
    Vec d = ops.sub(x, ops.scale(ops.b.one, c));
    if (is_zero(d)) return ScalarTest::Equal;
    if (ops.classify(d) != ViewOps::Unit::ZeroDivisor) return ScalarTest::Different;
    witness = std::move(d);
    return ScalarTest::ZeroDivisor;
  }
};

SplitOutcome zero_divisor(Vec z) { return {true, std::move(z)}; }
SplitOutcome no_split() { return {false, {}}; }

// Some w - c (c in `roots`) is a zero divisor once w^r = w or w^r = 1 and w is not scalar.
SplitOutcome first_singular_shift(const ViewOps& ops, const Vec& w, const std::vector<u64>& roots) {
  for (u64 c : roots) {
    Vec h = ops.sub(w, ops.scale(ops.b.one, c));
    if (is_zero(h)) continue;
    switch (ops.classify(h)) {
      case ViewOps::Unit::ZeroDivisor: return zero_divisor(std::move(h));
      case ViewOps::Unit::NotSplit: return no_split();
      case ViewOps::Unit::Invertible: break;
    }
  }
  return no_split();
}

SplitOutcome kummer_route(const ViewOps& ops, const std::function<Vec(const Vec&)>& sigma, u64 r) {
  const FieldCtx& k = ops.k;
  const u64 q1 = k.order() - 1;
  if (q1 % r != 0)
    fail(ErrorKind::MissingRootOfUnity, "no primitive " + std::to_string(r) + "-th root of unity in " + k.describe());
  const u64 nonres = find_nonresidue(r, k).value();
  const u64 zeta = k.pow(nonres, q1 / r);
  const u64 rinv = k.inv(k.from_int(static_cast<long long>(r)));

  // eigenvector: first nonzero projection (1/r) sum_j zeta^{-ij} sigma^j(g)
  Vec z;
  for (u64 i = 1; i < r && z.empty(); ++i) {
    const u64 step = k.inv(k.pow(zeta, i));
    for (const Vec& g : ops.b.generators) {
      Vec acc(g.size(), 0), cur = g;
      u64 coef = 1;
      for (u64 j = 0; j < r; ++j) {
        acc = ops.add(acc, ops.scale(cur, coef));
        cur = sigma(cur);
        coef = k.mul(coef, step);
      }
      acc = ops.scale(acc, rinv);
      if (!is_zero(acc)) {
        z = std::move(acc);
        break;
      }
    }
  }
  if (z.empty()) fail(ErrorKind::TrivialAutomorphism, "sigma fixes every generator");
  switch (ops.classify(z)) {
    case ViewOps::Unit::ZeroDivisor: return zero_divisor(std::move(z));
    case ViewOps::Unit::NotSplit: return no_split();
    case ViewOps::Unit::Invertible: break;
  }
  const Vec u = ops.pow(z, r);
  ViewRing ring{ops};
  auto out = amm_root(ring, k, u, r, nonres);
  if (out.kind == RadicalOutcome<ViewRing>::Kind::ZeroDivisor) return zero_divisor(std::move(out.value));
  if (out.kind == RadicalOutcome<ViewRing>::Kind::NotAPower) return no_split();
  const Vec w = ops.b.mul(out.value, ops.inverse(z));
  std::vector<u64> roots;
  u64 c = 1;
  for (u64 j = 0; j < r; ++j) {
    roots.push_back(c);
    c = k.mul(c, zeta);
  }
  return first_singular_shift(ops, w, roots);
}

// r = char k: sigma - 1 is nilpotent. Find z with sigma(z) = z + 1, then a
// sigma-fixed y with y^p - y = z^p - z; w = z - y has w^p = w and is not scalar.
SplitOutcome artin_schreier_route(const ViewOps& ops, const std::function<Vec(const Vec&)>& sigma) {
  const FieldCtx& k = ops.k;
  const u64 p = k.characteristic();
  auto D = [&](const Vec& x) { return ops.sub(sigma(x), x); };
  Vec z;
  for (const Vec& g : ops.b.generators)
    if (!is_zero(D(g))) {
      z = g;
      break;
    }
  if (z.empty()) fail(ErrorKind::TrivialAutomorphism, "sigma fixes every generator");
  Vec c = D(z);
  for (u64 guard = 0; guard <= p; ++guard) {
    Vec dc = D(c);
    if (is_zero(dc)) break;
    z = c;
    c = std::move(dc);
  }
  switch (ops.classify(c)) {
    case ViewOps::Unit::ZeroDivisor: return zero_divisor(std::move(c));
    case ViewOps::Unit::NotSplit: return no_split();
    case ViewOps::Unit::Invertible: break;
  }
  const Vec z1 = ops.b.mul(z, ops.inverse(c));
  const Vec u = ops.sub(ops.pow(z1, p), z1);

  // basis of the fixed algebra
  const auto basis = ops.b.basis();
  if (basis.empty()) return no_split();
  const std::size_t N = basis[0].size();
  Matrix dm(N, basis.size());
  for (std::size_t l = 0; l < basis.size(); ++l) {
    const Vec img = D(basis[l]);
    for (std::size_t i = 0; i < N; ++i) dm.at(i, l) = img[i];
  }
  std::vector<Vec> fixed;
  for (const Vec& cvec : kernel(k, dm)) {
    Vec v(N, 0);
    for (std::size_t l = 0; l < basis.size(); ++l)
      if (cvec[l]) v = ops.add(v, ops.scale(basis[l], cvec[l]));
    fixed.push_back(std::move(v));
  }
  const Echelon h = rref(k, Matrix::from_rows(fixed, N));
  const std::size_t T = h.rank();
  const unsigned d = k.degree();
  const FieldCtx fp = FieldCtx::make(p, 1);
  // F_p-linear map y -> y^p - y on the fixed algebra, in coordinates (m, a) <-> alpha^a h_m
  auto coords = [&](const Vec& v) {
    Vec out(T * d, 0);
    for (std::size_t m = 0; m < T; ++m) {
      const auto dig = k.digits(v[h.pivots[m]]);
      for (unsigned a = 0; a < d && a < dig.size(); ++a) out[m * d + a] = dig[a];
    }
    return out;
  };
  auto alpha_pow = [&](unsigned a) {
    std::vector<u64> dig(d, 0);
    dig[a] = 1;
    return k.from_digits(dig);
  };
  Matrix phi(T * d, T * d);
  for (std::size_t m = 0; m < T; ++m)
    for (unsigned a = 0; a < d; ++a) {
      const Vec v = ops.scale(h.reduced.row(m), alpha_pow(a));
      const Vec col = coords(ops.sub(ops.pow(v, p), v));
      for (std::size_t i = 0; i < T * d; ++i) phi.at(i, m * d + a) = col[i];
    }
  const auto sol = solve(fp, phi, coords(u));
  if (!sol) return no_split();
  Vec y(N, 0);
  for (std::size_t m = 0; m < T; ++m)
    for (unsigned a = 0; a < d; ++a)
      if ((*sol)[m * d + a]) y = ops.add(y, ops.scale(h.reduced.row(m), k.mul(alpha_pow(a), (*sol)[m * d + a])));
  if (ops.sub(ops.pow(y, p), y) != u) return no_split();
  const Vec w = ops.sub(z1, y);
  std::vector<u64> roots;
  for (u64 j = 0; j < p; ++j) roots.push_back(k.from_int(static_cast<long long>(j)));
  return first_singular_shift(ops, w, roots);
}

}  // namespace

SplitOutcome split_by_automorphism(const AlgebraView& b, const std::function<Vec(const Vec&)>& sigma, u64 r) {
  if (!b.field) fail(ErrorKind::InvalidArgument, "algebra view without a field");
  if (!is_prime(r)) fail(ErrorKind::InvalidArgument, "automorphism order " + std::to_string(r) + " is not prime");
  const bool moves = std::any_of(b.generators.begin(), b.generators.end(), [&](const Vec& g) { return sigma(g) != g; });
  if (!moves) fail(ErrorKind::TrivialAutomorphism, "sigma is the identity");
  ViewOps ops{b, *b.field};
  if (r == b.field->characteristic()) return artin_schreier_route(ops, sigma);
  return kummer_route(ops, sigma, r);
}

SplitOutcome split_by_automorphism(const Algebra& b, const Matrix& sigma, u64 r) {
  if (sigma.rows != b.dim || sigma.cols != b.dim) fail(ErrorKind::InvalidArgument, "sigma has the wrong shape");
  if (sigma == Matrix::identity(b.dim)) fail(ErrorKind::TrivialAutomorphism, "sigma is the identity");
  AlgebraView view;
  view.field = &b.field;
  view.one = b.one;
  view.mul = [&b](const Vec& x, const Vec& y) { return b.mul(x, y); };
  for (std::size_t i = 0; i < b.dim; ++i) {
    Vec e(b.dim, 0);
    e[i] = 1;
    view.generators.push_back(e);
  }
  view.basis = [gens = view.generators] { return gens; };
  const FieldCtx& k = b.field;
  return split_by_automorphism(view, [&](const Vec& a) { return mat_vec(k, sigma, a); }, r);
}

}  // namespace sf
