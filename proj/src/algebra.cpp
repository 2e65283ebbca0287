#include "schemefactor/algebra.hpp"

#include <algorithm>

#include "schemefactor/error.hpp"

namespace sf {

namespace {

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

// Multiply-accumulate into a u64 array, lazily reduced in the prime case.
struct Accumulator {
  const FieldCtx& k;
  bool prime;
  u64 p;
  std::vector<u64> acc;

  Accumulator(const FieldCtx& field, std::size_t size)
      : k(field), prime(field.degree() == 1 && field.characteristic() < (u64{1} << 31)),
        p(field.characteristic()), acc(size, 0) {}

  void fma(std::size_t i, u64 a, u64 b) {
    if (prime) {
      acc[i] += a * b;
      if (acc[i] >> 63) acc[i] %= p;
    } else {
      acc[i] = k.add(acc[i], k.mul(a, b));
    }
  }
  void add(std::size_t i, u64 a) {
    if (prime) {
      acc[i] += a;
      if (acc[i] >> 63) acc[i] %= p;
    } else {
      acc[i] = k.add(acc[i], a);
    }
  }
  u64 get(std::size_t i) const { return prime ? acc[i] % p : acc[i]; }
  void normalize() {
    if (prime)
      for (auto& x : acc) x %= p;
  }
};

}  // namespace

TensorAlgebra::TensorAlgebra(FieldCtx k, Poly f) : k_(std::move(k)), f_(std::move(f)) {
  if (!(f_.field == k_)) fail(ErrorKind::FieldMismatch, "polynomial is not over the algebra's field");
  if (f_.degree() < 1 || !f_.is_monic()) fail(ErrorKind::InvalidArgument, "f must be monic of positive degree");
  n_ = static_cast<unsigned>(f_.degree());
  nf_.assign(2 * n_, Vec(n_, 0));
  Vec cur(n_, 0);
  cur[0] = 1;
  for (unsigned e = 0; e < 2 * n_; ++e) {
    nf_[e] = cur;
    // cur *= x
    const u64 top = cur[n_ - 1];
    for (unsigned i = n_ - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (unsigned i = 0; i < n_; ++i) cur[i] = k_.sub(cur[i], k_.mul(top, f_.coeff(i)));
  }
  power_sums_.assign(n_, 0);
  for (unsigned c = 0; c < n_; ++c) {
    // trace of multiplication by x^c: sum_i [x^i] (x^{c+i} mod f)
    u64 t = 0;
    for (unsigned i = 0; i < n_; ++i) t = k_.add(t, nf_[c + i][i]);
    power_sums_[c] = t;
  }
}

std::size_t TensorAlgebra::size(unsigned s) const {
  std::size_t r = 1;
  for (unsigned i = 0; i < s; ++i) {
    r *= n_;
    if (r > (std::size_t{1} << 40)) fail(ErrorKind::Overflow, "tensor power too large");
  }
  return r;
}

Vec TensorAlgebra::one(unsigned s) const { return scalar(s, 1); }

Vec TensorAlgebra::scalar(unsigned s, u64 c) const {
  Vec v(size(s), 0);
  v[0] = c;
  return v;
}

Vec TensorAlgebra::var(unsigned s, unsigned slot) const {
  if (slot < 1 || slot > s) fail(ErrorKind::InvalidArgument, "slot out of range");
  Vec v(size(s), 0);
  if (n_ == 1) {
    // x = -f_0 in k[x]/(x + f_0)
    v[0] = k_.neg(f_.coeff(0));
    return v;
  }
  v[size(slot - 1)] = 1;
  return v;
}

Vec TensorAlgebra::add(const Vec& a, const Vec& b) const {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k_.add(a[i], b[i]);
  return r;
}

Vec TensorAlgebra::sub(const Vec& a, const Vec& b) const {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k_.sub(a[i], b[i]);
  return r;
}

Vec TensorAlgebra::scale(const Vec& a, u64 c) const {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k_.mul(a[i], c);
  return r;
}

const std::vector<u64>& TensorAlgebra::spread(unsigned s) const {
  if (spread_.size() <= s) spread_.resize(s + 1);
  auto& sp = spread_[s];
  if (!sp.empty()) return sp;
  const std::size_t N = size(s);
  const u64 w = 2 * n_ - 1;
  sp.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t x = i;
    u64 out = 0, mult = 1;
    for (unsigned l = 0; l < s; ++l) {
      out += (x % n_) * mult;
      x /= n_;
      mult *= w;
    }
    sp[i] = out;
  }
  return sp;
}

Vec TensorAlgebra::mul(unsigned s, const Vec& a, const Vec& b) const {
  const std::size_t N = size(s);
  if (s == 0) return {k_.mul(a[0], b[0])};
  const auto& sp = spread(s);
  std::size_t W = 1;
  for (unsigned l = 0; l < s; ++l) W *= 2 * n_ - 1;
  std::vector<std::pair<u64, u64>> nb;
  nb.reserve(N);
  for (std::size_t j = 0; j < N; ++j)
    if (b[j]) nb.emplace_back(sp[j], b[j]);
  Accumulator acc(k_, W);
  if (nb.empty()) return zero(s);
  for (std::size_t i = 0; i < N; ++i) {
    const u64 x = a[i];
    if (!x) continue;
    const u64 base = sp[i];
    for (const auto& [idx, y] : nb) acc.fma(base + idx, x, y);
  }
  acc.normalize();
  // reduce each slot in turn using x^d mod f for d = n .. 2n-2
  const std::size_t w = 2 * n_ - 1;
  std::size_t stride = 1;
  for (unsigned l = 0; l < s; ++l) {
    const std::size_t block = stride * w;
    for (std::size_t base = 0; base < W; base += block)
      for (std::size_t low = 0; low < stride; ++low)
        for (unsigned d = n_; d < w; ++d) {
          const std::size_t from = base + d * stride + low;
          const u64 v = acc.get(from);
          if (!v) continue;
          acc.acc[from] = 0;
          const Vec& r = nf_[d];
          for (unsigned i = 0; i < n_; ++i)
            if (r[i]) acc.fma(base + i * stride + low, v, r[i]);
        }
    acc.normalize();
    stride = block;
  }
  Vec out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = acc.acc[sp[i]];
  return out;
}

Vec TensorAlgebra::mul_var(unsigned s, const Vec& a, unsigned slot) const {
  if (slot < 1 || slot > s) fail(ErrorKind::InvalidArgument, "slot out of range");
  const std::size_t N = size(s), stride = size(slot - 1);
  Accumulator acc(k_, N);
  const Vec& r = nf_[n_];
  for (std::size_t i = 0; i < N; ++i) {
    const u64 v = a[i];
    if (!v) continue;
    const unsigned d = static_cast<unsigned>((i / stride) % n_);
    if (d + 1 < n_) {
      acc.add(i + stride, v);
    } else {
      const std::size_t base = i - d * stride;
      for (unsigned e = 0; e < n_; ++e)
        if (r[e]) acc.fma(base + e * stride, v, r[e]);
    }
  }
  acc.normalize();
  return acc.acc;
}

Vec TensorAlgebra::pow(unsigned s, Vec a, u64 e) const {
  Vec acc = one(s);
  bool first = true;
  while (e) {
    if (e & 1) {
      acc = first ? a : mul(s, acc, a);
      first = false;
    }
    e >>= 1;
    if (e) a = mul(s, a, a);
  }
  return acc;
}

Vec TensorAlgebra::support(unsigned s, const Vec& a) const { return pow(s, a, k_.order() - 1); }

Vec TensorAlgebra::trace_slot(unsigned s, const Vec& a, unsigned slot) const {
  if (s < 1 || slot < 1 || slot > s) fail(ErrorKind::InvalidArgument, "trace slot out of range");
  const std::size_t N = size(s), lowsz = size(slot - 1), highstep = lowsz * n_;
  Vec out(size(s - 1), 0);
  for (std::size_t i = 0; i < N; ++i) {
    const u64 v = a[i];
    if (!v) continue;
    const std::size_t low = i % lowsz, d = (i / lowsz) % n_, high = i / highstep;
    const u64 ps = power_sums_[d];
    if (!ps) continue;
    const std::size_t j = low + high * lowsz;
    out[j] = k_.add(out[j], k_.mul(v, ps));
  }
  return out;
}

Vec TensorAlgebra::embed_slot(unsigned s, const Vec& a, unsigned slot) const {
  if (s < 1 || slot < 1 || slot > s) fail(ErrorKind::InvalidArgument, "embedding slot out of range");
  const std::size_t M = size(s - 1), lowsz = size(slot - 1);
  Vec out(size(s), 0);
  for (std::size_t i = 0; i < M; ++i) {
    if (!a[i]) continue;
    const std::size_t low = i % lowsz, high = i / lowsz;
    out[low + high * lowsz * n_] = a[i];
  }
  return out;
}

Vec TensorAlgebra::permute(unsigned s, const Vec& a, std::span<const uint32_t> tau) const {
  if (tau.size() != s) fail(ErrorKind::InvalidArgument, "permutation has the wrong size");
  const std::size_t N = size(s);
  std::vector<std::size_t> place(s);
  for (unsigned l = 0; l < s; ++l) place[l] = size(tau[l]);
  Vec out(N, 0);
  for (std::size_t i = 0; i < N; ++i) {
    if (!a[i]) continue;
    std::size_t x = i, j = 0;
    for (unsigned l = 0; l < s; ++l) {
      j += (x % n_) * place[l];
      x /= n_;
    }
    out[j] = a[i];
  }
  return out;
}

Vec TensorAlgebra::eval_grid(unsigned s, const Vec& a, std::span<const u64> pts) const {
  if (pts.size() != n_) fail(ErrorKind::InvalidArgument, "need exactly n evaluation points");
  std::vector<Vec> vander(n_, Vec(n_));
  for (unsigned j = 0; j < n_; ++j) {
    u64 x = 1;
    for (unsigned c = 0; c < n_; ++c) {
      vander[j][c] = x;
      x = k_.mul(x, pts[j]);
    }
  }
  Vec cur = a;
  const std::size_t N = size(s);
  for (unsigned l = 0; l < s; ++l) {
    const std::size_t stride = size(l);
    Vec next(N, 0);
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t d = (i / stride) % n_;
      const std::size_t base = i - d * stride;
      u64 t = 0;
      for (unsigned c = 0; c < n_; ++c) {
        const u64 v = cur[base + c * stride];
        if (v) t = k_.add(t, k_.mul(v, vander[d][c]));
      }
      next[i] = t;
    }
    cur.swap(next);
  }
  return cur;
}

const Vec& TensorAlgebra::essential_idempotent(unsigned s) const {
  if (essential_.size() <= s) essential_.resize(s + 1);
  Vec& e = essential_[s];
  if (e.empty()) {
    Vec d = one(s);
    for (unsigned i = 1; i <= s; ++i)
      for (unsigned j = i + 1; j <= s; ++j) d = sub(mul_var(s, d, i), mul_var(s, d, j));
    e = s >= 2 ? support(s, d) : d;
  }
  return e;
}

std::vector<Vec> TensorAlgebra::value_classes(unsigned s, const Vec& t, unsigned bound) const {
  // Lagrange basis on the points 0..bound, evaluated at t through its powers
  std::vector<Vec> powers{one(s), t};
  for (unsigned i = 2; i <= bound; ++i) powers.push_back(mul(s, powers.back(), t));
  std::vector<Vec> out;
  for (unsigned c = 0; c <= bound; ++c) {
    Poly num = Poly::constant(k_, 1);
    u64 den = 1;
    for (unsigned c2 = 0; c2 <= bound; ++c2) {
      if (c2 == c) continue;
      num = num * Poly(k_, {k_.neg(k_.from_int(c2)), 1});
      den = k_.mul(den, k_.sub(k_.from_int(c), k_.from_int(c2)));
    }
    const u64 inv = k_.inv(den);
    Vec v(size(s), 0);
    for (unsigned i = 0; i <= bound; ++i) {
      const u64 coef = k_.mul(num.coeff(i), inv);
      if (!coef) continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (powers[i][j]) v[j] = k_.add(v[j], k_.mul(coef, powers[i][j]));
    }
    out.push_back(std::move(v));
  }
  return out;
}

u64 TensorAlgebra::idempotent_dim(unsigned s, const Vec& e) const {
  if (is_zero(e)) return 0;
  if (s == 0) return 1;
  if (s == 1) {
    const u64 t = trace_slot(1, e, 1)[0];
    if (!k_.in_prime_field(t)) fail(ErrorKind::InvalidArgument, "idempotent_dim: not an idempotent");
    return t == 0 ? k_.characteristic() : t;
  }
  const unsigned bound = n_ - s + 1;
  if (k_.characteristic() <= bound)
    fail(ErrorKind::PreconditionFailed, "exact fibre counts need characteristic above n - s + 1");
  const Vec t = trace_slot(s, e, s);
  const auto classes = value_classes(s - 1, t, bound);
  u64 total = 0;
  for (unsigned c = 1; c <= bound; ++c) total += c * idempotent_dim(s - 1, classes[c]);
  return total;
}

Vec Algebra::mul(const Vec& a, const Vec& b) const {
  Vec out(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!b[j]) continue;
      const u64 c = field.mul(a[i], b[j]);
      const u64* row = &table[(i * dim + j) * dim];
      for (std::size_t l = 0; l < dim; ++l)
        if (row[l]) out[l] = field.add(out[l], field.mul(c, row[l]));
    }
  }
  return out;
}

bool Algebra::check_axioms() const {
  auto unit = [&](std::size_t i) {
    Vec v(dim, 0);
    v[i] = 1;
    return v;
  };
  for (std::size_t i = 0; i < dim; ++i) {
    if (mul(one, unit(i)) != unit(i)) return false;
    for (std::size_t j = 0; j < dim; ++j) {
      const Vec ij = mul(unit(i), unit(j));
      if (ij != mul(unit(j), unit(i))) return false;
      for (std::size_t l = 0; l < dim; ++l)
        if (mul(ij, unit(l)) != mul(unit(i), mul(unit(j), unit(l)))) return false;
    }
  }
  return true;
}

Algebra polynomial_algebra(const Poly& f) {
  const Poly g = make_monic(f);
  TensorAlgebra t(g.field, g);
  Algebra a;
  a.field = g.field;
  a.dim = t.n();
  a.table.assign(a.dim * a.dim * a.dim, 0);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      Vec xi(a.dim, 0), xj(a.dim, 0);
      xi[i] = 1;
      xj[j] = 1;
      const Vec p = t.mul(1, xi, xj);
      std::copy(p.begin(), p.end(), a.table.begin() + static_cast<std::ptrdiff_t>((i * a.dim + j) * a.dim));
    }
  a.one.assign(a.dim, 0);
  a.one[0] = 1;
  return a;
}

Algebra quotient_algebra(const Poly& f, const FieldCtx& k) {
  if (f.is_zero() || f.degree() < 1) fail(ErrorKind::InvalidArgument, "f must have positive degree");
  const Poly g = make_monic(f);
  if (!is_split_squarefree(g)) fail(ErrorKind::NotSplit, g.to_string() + " does not split into distinct linear factors");
  if (g.field == k) return polynomial_algebra(g);
  return polynomial_algebra(FieldEmbedding(g.field, k).map(g));
}

EssentialPart essential_part(std::shared_ptr<const TensorAlgebra> tensor, unsigned s, u64 dim_cap, u64 tensor_cap) {
  const unsigned n = tensor->n();
  if (s < 1) fail(ErrorKind::InvalidArgument, "level must be at least 1");
  if (s > n) fail(ErrorKind::ZeroAlgebra, "level " + std::to_string(s) + " exceeds n = " + std::to_string(n));
  u64 dim = 1;
  for (unsigned i = 0; i < s; ++i) dim *= n - i;
  if (dim > dim_cap)
    fail(ErrorKind::DimCapExceeded, "dim A^(" + std::to_string(s) + ") = " + std::to_string(dim) + " exceeds cap " +
                                        std::to_string(dim_cap));
  u64 tsize = 1;
  for (unsigned i = 0; i < s; ++i) {
    tsize *= n;
    if (tsize > tensor_cap)
      fail(ErrorKind::DimCapExceeded, "tensor power n^" + std::to_string(s) + " exceeds working cap " +
                                          std::to_string(tensor_cap) + " at level " + std::to_string(s));
  }
  EssentialPart part;
  part.identity = tensor->essential_idempotent(s);
  part.dim = tensor->idempotent_dim(s, part.identity);
  part.tensor = std::move(tensor);
  part.s = s;
  return part;
}

Vec embed(const EssentialPart& target, const Vec& a, unsigned j) {
  const auto& t = *target.tensor;
  return t.mul(target.s, target.identity, t.embed_slot(target.s, a, j));
}

namespace {

// Span of {e * x^alpha}, built by multiplying through the variables.
std::vector<Vec> ideal_span(const TensorAlgebra& t, unsigned s, const Vec& e) {
  const std::size_t N = t.size(s);
  std::vector<Vec> rows(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (i == 0) {
      rows[0] = e;
      continue;
    }
    // the monomial i is the monomial i - stride times x_l for its lowest nonzero digit
    std::size_t x = i, stride = 1;
    unsigned l = 1;
    while (x % t.n() == 0) {
      x /= t.n();
      stride *= t.n();
      ++l;
    }
    rows[i] = t.mul_var(s, rows[i - stride], l);
  }
  return rows;
}

}  // namespace

std::vector<Vec> ideal_basis(const TensorAlgebra& t, unsigned s, const Vec& e) {
  const Echelon ech = rref(t.field(), Matrix::from_rows(ideal_span(t, s, e), t.size(s)));
  std::vector<Vec> out;
  for (std::size_t i = 0; i < ech.rank(); ++i) out.push_back(ech.reduced.row(i));
  return out;
}

std::vector<Vec> essential_basis(const EssentialPart& part) {
  return ideal_basis(*part.tensor, part.s, part.identity);
}

std::vector<Vec> diagonal_ideal_intersection(const TensorAlgebra& t, unsigned s) {
  const std::size_t N = t.size(s);
  std::vector<Vec> acc;
  bool first = true;
  for (unsigned i = 1; i <= s; ++i)
    for (unsigned j = i + 1; j <= s; ++j) {
      // ideal generated by x_i^c - x_j^c, c < n: spanned by monomial multiples
      std::vector<Vec> gens;
      Vec pi = t.one(s), pj = t.one(s);
      for (unsigned c = 0; c < t.n(); ++c) {
        gens.push_back(t.sub(pi, pj));
        pi = t.mul_var(s, pi, i);
        pj = t.mul_var(s, pj, j);
      }
      std::vector<Vec> rows;
      for (const auto& g : gens) {
        auto span = ideal_span(t, s, g);
        rows.insert(rows.end(), span.begin(), span.end());
      }
      const Echelon ech = rref(t.field(), Matrix::from_rows(rows, N));
      std::vector<Vec> basis;
      for (std::size_t r = 0; r < ech.rank(); ++r) basis.push_back(ech.reduced.row(r));
      acc = first ? basis : intersect_spaces(t.field(), acc, basis, N);
      first = false;
    }
  if (first) {
    // s = 1: the whole algebra
    for (std::size_t r = 0; r < N; ++r) {
      Vec v(N, 0);
      v[r] = 1;
      acc.push_back(v);
    }
  }
  return acc;
}

}  // namespace sf
