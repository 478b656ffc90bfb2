#include "padic/fq.hpp"

#include "padic/errors.hpp"

#include <sstream>
#include <stdexcept>

namespace padic {

Fq::Fq(const CtxPtr &ctx) : ctx_(ctx), p_(ctx->p()), f_(ctx->f()) {
  q_ = static_cast<int>(ctx->residue_size());
  if (q_ > 1024)
    throw Unsupported("residue field tables are limited to q <= 1024");
  std::vector<Element> el(q_);
  for (int a = 0; a < q_; ++a)
    el[a] = lift(static_cast<E>(a)).reduce(1);
  add_.resize(static_cast<size_t>(q_) * q_);
  mul_.resize(static_cast<size_t>(q_) * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  for (int a = 0; a < q_; ++a) {
    // digit-wise addition mod p
    for (int b = 0; b < q_; ++b) {
      int s = 0, x = a, y = b, pw = 1;
      for (int j = 0; j < f_; ++j, x /= p_, y /= p_, pw *= p_)
        s += ((x % p_ + y % p_) % p_) * pw;
      add_[a * q_ + b] = static_cast<E>(s);
    }
    for (int b = 0; b <= a; ++b) {
      const E m = reduce(el[a] * el[b]);
      mul_[a * q_ + b] = mul_[b * q_ + a] = m;
    }
  }
  for (int a = 0; a < q_; ++a) {
    for (int b = 0; b < q_; ++b)
      if (add_[a * q_ + b] == 0)
        neg_[a] = static_cast<E>(b);
    for (int b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1)
        inv_[a] = static_cast<E>(b);
  }
}

Fq::E Fq::inv(E a) const {
  if (a == 0)
    throw std::domain_error("inverse of zero in the residue field");
  return inv_[a];
}

Fq::E Fq::from_int(std::int64_t v) const {
  v %= p_;
  if (v < 0)
    v += p_;
  return static_cast<E>(v);
}

Fq::E Fq::reduce(const Element &x) const {
  if (x.precision() < 1)
    throw PrecisionError("residue of an element with no known digits");
  int s = 0, pw = 1;
  for (int j = 0; j < f_; ++j, pw *= p_) {
    i64 c = x.coord(0, j) % p_;
    if (c < 0)
      c += p_;
    s += static_cast<int>(c) * pw;
  }
  return static_cast<E>(s);
}

Element Fq::lift(E a) const {
  std::vector<i64> c(static_cast<size_t>(ctx_->e()) * f_, 0);
  int x = a;
  for (int j = 0; j < f_; ++j, x /= p_)
    c[j] = x % p_;
  return Element(ctx_, c, ctx_->precision());
}

FMat FMat::identity(int d) {
  FMat m(d, d);
  for (int i = 0; i < d; ++i)
    m(i, i) = 1;
  return m;
}

bool FMat::is_zero() const {
  for (auto v : a)
    if (v)
      return false;
  return true;
}

FMat fmul(const Fq &F, const FMat &x, const FMat &y) {
  if (x.c != y.r)
    throw std::invalid_argument("matrix shapes do not match");
  FMat z(x.r, y.c);
  for (int i = 0; i < x.r; ++i)
    for (int k = 0; k < x.c; ++k) {
      const Fq::E s = x(i, k);
      if (!s)
        continue;
      for (int j = 0; j < y.c; ++j)
        z(i, j) = F.add(z(i, j), F.mul(s, y(k, j)));
    }
  return z;
}

FMat fadd(const Fq &F, const FMat &x, const FMat &y) {
  FMat z = x;
  for (size_t i = 0; i < z.a.size(); ++i)
    z.a[i] = F.add(x.a[i], y.a[i]);
  return z;
}

FMat fscale(const Fq &F, Fq::E s, const FMat &x) {
  FMat z = x;
  for (auto &v : z.a)
    v = F.mul(s, v);
  return z;
}

FMat ftranspose(const FMat &x) {
  FMat t(x.c, x.r);
  for (int i = 0; i < x.r; ++i)
    for (int j = 0; j < x.c; ++j)
      t(j, i) = x(i, j);
  return t;
}

Fq::E ftrace(const Fq &F, const FMat &x) {
  Fq::E s = 0;
  for (int i = 0; i < std::min(x.r, x.c); ++i)
    s = F.add(s, x(i, i));
  return s;
}

namespace {

// Gaussian elimination to reduced row echelon form; returns pivot columns.
std::vector<int> rref(const Fq &F, FMat &x) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < x.c && row < x.r; ++col) {
    int sel = -1;
    for (int i = row; i < x.r; ++i)
      if (x(i, col)) {
        sel = i;
        break;
      }
    if (sel < 0)
      continue;
    for (int j = 0; j < x.c; ++j)
      std::swap(x(row, j), x(sel, j));
    const Fq::E iv = F.inv(x(row, col));
    for (int j = 0; j < x.c; ++j)
      x(row, j) = F.mul(iv, x(row, j));
    for (int i = 0; i < x.r; ++i) {
      if (i == row || !x(i, col))
        continue;
      const Fq::E s = x(i, col);
      for (int j = 0; j < x.c; ++j)
        x(i, j) = F.sub(x(i, j), F.mul(s, x(row, j)));
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

} // namespace

Fq::E fdet(const Fq &F, FMat x) {
  if (x.r != x.c)
    throw std::invalid_argument("determinant of a non-square matrix");
  Fq::E d = 1;
  const int n = x.r;
  for (int col = 0; col < n; ++col) {
    int sel = -1;
    for (int i = col; i < n; ++i)
      if (x(i, col)) {
        sel = i;
        break;
      }
    if (sel < 0)
      return 0;
    if (sel != col) {
      for (int j = 0; j < n; ++j)
        std::swap(x(col, j), x(sel, j));
      d = F.neg(d);
    }
    d = F.mul(d, x(col, col));
    const Fq::E iv = F.inv(x(col, col));
    for (int i = col + 1; i < n; ++i) {
      if (!x(i, col))
        continue;
      const Fq::E s = F.mul(x(i, col), iv);
      for (int j = col; j < n; ++j)
        x(i, j) = F.sub(x(i, j), F.mul(s, x(col, j)));
    }
  }
  return d;
}

std::optional<FMat> finverse(const Fq &F, const FMat &x) {
  const int n = x.r;
  FMat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      aug(i, j) = x(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(F, aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1)
    return std::nullopt;
  return fsubmatrix(aug, 0, n, n, n);
}

int frank(const Fq &F, FMat x) { return static_cast<int>(rref(F, x).size()); }

FMat fnullspace(const Fq &F, const FMat &x) {
  FMat r = x;
  auto piv = rref(F, r);
  std::vector<bool> is_piv(x.c, false);
  for (int c : piv)
    is_piv[c] = true;
  const int k = x.c - static_cast<int>(piv.size());
  FMat N(x.c, k);
  int t = 0;
  for (int free = 0; free < x.c; ++free) {
    if (is_piv[free])
      continue;
    N(free, t) = 1;
    for (size_t i = 0; i < piv.size(); ++i)
      N(piv[i], t) = F.neg(r(static_cast<int>(i), free));
    ++t;
  }
  return N;
}

FMat frow_basis(const Fq &F, const FMat &rows) {
  FMat r = rows;
  auto piv = rref(F, r);
  return fsubmatrix(r, 0, 0, static_cast<int>(piv.size()), r.c);
}

FMat fsubmatrix(const FMat &x, int r0, int c0, int nr, int nc) {
  FMat s(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      s(i, j) = x(r0 + i, c0 + j);
  return s;
}

FMat frandom(const Fq &F, int r, int c, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> d(0, F.q() - 1);
  FMat m(r, c);
  for (auto &v : m.a)
    v = static_cast<Fq::E>(d(rng));
  return m;
}

std::string fstr(const FMat &x) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < x.r; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < x.c; ++j)
      os << (j ? ", " : "") << x(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

void FSpan::sift(std::vector<Fq::E> &v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Fq::E s = v[pivots_[i]];
    if (!s)
      continue;
    for (int j = 0; j < n_; ++j)
      v[j] = F_->sub(v[j], F_->mul(s, rows_[i][j]));
  }
}

bool FSpan::add(std::vector<Fq::E> v) {
  auto w = v;
  sift(w);
  int piv = -1;
  for (int j = 0; j < n_; ++j)
    if (w[j]) {
      piv = j;
      break;
    }
  if (piv < 0)
    return false;
  const Fq::E iv = F_->inv(w[piv]);
  for (auto &x : w)
    x = F_->mul(iv, x);
  // keep rows reduced at every pivot so sift is a single pass
  for (auto &r : rows_) {
    const Fq::E s = r[piv];
    if (!s)
      continue;
    for (int j = 0; j < n_; ++j)
      r[j] = F_->sub(r[j], F_->mul(s, w[j]));
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(piv);
  orig_.push_back(std::move(v));
  return true;
}

bool FSpan::contains(std::vector<Fq::E> v) const {
  sift(v);
  for (auto x : v)
    if (x)
      return false;
  return true;
}

} // namespace padic
