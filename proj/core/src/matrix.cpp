#include "padic/matrix.hpp"

#include "padic/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace padic {

namespace {

// v_pi, with elements indistinguishable from zero sent to `inf`.
int val_or(const Element &x, int inf) {
  if (x.is_zero())
    return inf;
  return std::min(x.valuation().pi_units, inf);
}

// a / b for v(b) <= v(a): pi-power quotient times the unit part's inverse.
Element exact_quotient(const Element &a, const Element &b) {
  const int vb = b.valuation().pi_units;
  const Element u = b.div_pi(vb);
  if (a.is_zero())
    return Element::zero(a.context()).with_precision(std::max(0, a.precision() - vb));
  return a.div_pi(vb) * u.inverse();
}

} // namespace

Mat::Mat(CtxPtr ctx, int rows, int cols) : ctx_(std::move(ctx)), r_(rows), c_(cols) {
  a_.assign(static_cast<size_t>(rows) * cols, Element::zero(ctx_));
}

Mat Mat::identity(const CtxPtr &ctx, int d) {
  Mat m(ctx, d, d);
  for (int i = 0; i < d; ++i)
    m(i, i) = Element::one(ctx);
  return m;
}

Mat Mat::from_ints(const CtxPtr &ctx, const std::vector<std::vector<i64>> &rows) {
  const int r = static_cast<int>(rows.size()), c = r ? static_cast<int>(rows[0].size()) : 0;
  Mat m(ctx, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("ragged matrix rows");
    for (int j = 0; j < c; ++j)
      m(i, j) = Element::from_int(ctx, rows[i][j]);
  }
  return m;
}

Mat Mat::diag(const Vec &d) {
  if (d.empty())
    throw std::invalid_argument("empty diagonal");
  Mat m(d[0].context(), static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

Mat Mat::random(const CtxPtr &ctx, int r, int c, std::mt19937_64 &rng) {
  Mat m(ctx, r, c);
  for (auto &x : m.a_)
    x = Element::random(ctx, rng);
  return m;
}

Mat Mat::random_unimodular(const CtxPtr &ctx, int d, std::mt19937_64 &rng) {
  for (;;) {
    Mat m = random(ctx, d, d, rng);
    if (m.det().is_unit())
      return m;
  }
}

Mat Mat::operator*(const Mat &o) const {
  if (c_ != o.r_)
    throw std::invalid_argument("matrix shapes do not match");
  Mat z(ctx_, r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < o.c_; ++j) {
      Element s = Element::zero(ctx_);
      for (int k = 0; k < c_; ++k)
        s += (*this)(i, k) * o(k, j);
      z(i, j) = s;
    }
  return z;
}

Mat Mat::operator+(const Mat &o) const {
  if (r_ != o.r_ || c_ != o.c_)
    throw std::invalid_argument("matrix shapes do not match");
  Mat z = *this;
  for (size_t i = 0; i < a_.size(); ++i)
    z.a_[i] = a_[i] + o.a_[i];
  return z;
}

Mat Mat::operator-(const Mat &o) const {
  if (r_ != o.r_ || c_ != o.c_)
    throw std::invalid_argument("matrix shapes do not match");
  Mat z = *this;
  for (size_t i = 0; i < a_.size(); ++i)
    z.a_[i] = a_[i] - o.a_[i];
  return z;
}

Mat Mat::scale(const Element &s) const {
  Mat z = *this;
  for (auto &x : z.a_)
    x = s * x;
  return z;
}

Mat Mat::mul_pi(int k) const {
  Mat z = *this;
  for (auto &x : z.a_)
    x = x.mul_pi(k);
  return z;
}

Mat Mat::div_pi(int k) const {
  Mat z = *this;
  for (auto &x : z.a_)
    x = x.is_zero() ? Element::zero(ctx_).with_precision(std::max(0, x.precision() - k))
                    : x.div_pi(k);
  return z;
}

Vec Mat::apply(const Vec &v) const {
  if (static_cast<int>(v.size()) != c_)
    throw std::invalid_argument("vector length does not match");
  Vec out(r_, Element::zero(ctx_));
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k)
      out[i] += (*this)(i, k) * v[k];
  return out;
}

Vec Mat::column(int j) const {
  Vec v;
  for (int i = 0; i < r_; ++i)
    v.push_back((*this)(i, j));
  return v;
}

Mat Mat::transpose() const {
  Mat t(ctx_, c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::pow(int k) const {
  if (k < 0)
    throw std::invalid_argument("negative matrix power");
  Mat r = identity(ctx_, r_), b = *this;
  for (; k; k >>= 1, b = b * b)
    if (k & 1)
      r = r * b;
  return r;
}

Element Mat::trace() const {
  Element s = Element::zero(ctx_);
  for (int i = 0; i < std::min(r_, c_); ++i)
    s += (*this)(i, i);
  return s;
}

Element Mat::det() const {
  if (r_ != c_)
    throw std::invalid_argument("determinant of a non-square matrix");
  if (r_ == 0)
    return Element::one(ctx_);
  Mat x = *this;
  const int n = r_;
  Element d = Element::one(ctx_);
  for (int k = 0; k < n; ++k) {
    int sel = k, best = -1;
    for (int i = k; i < n; ++i) {
      if (x(i, k).is_zero())
        continue;
      const int v = x(i, k).valuation().pi_units;
      if (best < 0 || v < best) {
        best = v;
        sel = i;
      }
    }
    if (best < 0)
      return d * x(k, k); // a zero known to the column's precision
    if (sel != k) {
      for (int j = 0; j < n; ++j)
        std::swap(x(k, j), x(sel, j));
      d = -d;
    }
    d *= x(k, k);
    for (int i = k + 1; i < n; ++i) {
      if (x(i, k).is_zero())
        continue;
      const Element fct = exact_quotient(x(i, k), x(k, k));
      for (int j = k; j < n; ++j)
        x(i, j) -= fct * x(k, j);
    }
  }
  return d;
}

Mat Mat::adjugate() const {
  if (r_ != c_)
    throw std::invalid_argument("adjugate of a non-square matrix");
  const int n = r_;
  Mat adj(ctx_, n, n);
  if (n == 1) {
    adj(0, 0) = Element::one(ctx_);
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat minor(ctx_, n - 1, n - 1);
      for (int a = 0, ra = 0; a < n; ++a) {
        if (a == i)
          continue;
        for (int b = 0, cb = 0; b < n; ++b) {
          if (b == j)
            continue;
          minor(ra, cb++) = (*this)(a, b);
        }
        ++ra;
      }
      const Element c = minor.det();
      adj(j, i) = (i + j) % 2 ? -c : c;
    }
  return adj;
}

Mat Mat::inverse() const {
  if (r_ != c_)
    throw std::invalid_argument("inverse of a non-square matrix");
  const int n = r_;
  Mat x = *this, inv = identity(ctx_, n);
  for (int k = 0; k < n; ++k) {
    int sel = -1;
    for (int i = k; i < n; ++i)
      if (x(i, k).is_unit()) {
        sel = i;
        break;
      }
    if (sel < 0)
      throw DomainError("matrix is not invertible over the integers");
    for (int j = 0; j < n; ++j) {
      std::swap(x(k, j), x(sel, j));
      std::swap(inv(k, j), inv(sel, j));
    }
    const Element u = x(k, k).inverse();
    for (int j = 0; j < n; ++j) {
      x(k, j) = u * x(k, j);
      inv(k, j) = u * inv(k, j);
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || x(i, k).is_zero())
        continue;
      const Element fct = x(i, k);
      for (int j = 0; j < n; ++j) {
        x(i, j) -= fct * x(k, j);
        inv(i, j) -= fct * inv(k, j);
      }
    }
  }
  return inv;
}

Mat Mat::reduce(int m) const {
  Mat z = *this;
  for (auto &x : z.a_)
    x = x.reduce(m);
  return z;
}

Mat Mat::with_precision(int m) const {
  Mat z = *this;
  for (auto &x : z.a_)
    x = x.with_precision(std::min(m, x.precision()));
  return z;
}

int Mat::precision() const {
  int p = ctx_ ? ctx_->precision() : 0;
  for (const auto &x : a_)
    p = std::min(p, x.precision());
  return p;
}

int Mat::min_valuation() const {
  int v = ctx_ ? ctx_->precision() : 0;
  for (const auto &x : a_)
    v = std::min(v, val_or(x, x.precision()));
  return v;
}

bool Mat::equals(const Mat &o) const {
  if (r_ != o.r_ || c_ != o.c_)
    return false;
  for (size_t i = 0; i < a_.size(); ++i)
    if (!a_[i].equals(o.a_[i]))
      return false;
  return true;
}

bool Mat::is_identity() const { return r_ == c_ && equals(identity(ctx_, r_)); }

bool Mat::is_zero() const {
  for (const auto &x : a_)
    if (!x.is_zero())
      return false;
  return true;
}

std::string Mat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < c_; ++j)
      os << (j ? ", " : "") << (*this)(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Mat apply(const Embedding &emb, const Mat &m) {
  Mat z(emb.E, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      z(i, j) = emb(m(i, j));
  return z;
}

FMat reduce_fq(const Fq &F, const Mat &m) {
  FMat f(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      f(i, j) = F.reduce(m(i, j));
  return f;
}

Mat lift_fq(const Fq &F, const FMat &m) {
  Mat z(F.context(), m.r, m.c);
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.c; ++j)
      z(i, j) = F.lift(m(i, j));
  return z;
}

QMat QMat::inverse() const {
  const Element d = num.det();
  if (d.is_zero())
    throw DomainError("matrix is singular at working precision");
  const int k = d.valuation().pi_units;
  Mat adj = num.adjugate().scale(d.div_pi(k).inverse());
  if (shift >= k)
    return {adj.mul_pi(shift - k), 0};
  return QMat{adj, k - shift}.normalized();
}

Mat QMat::to_integral() const {
  if (shift <= 0)
    return num.mul_pi(-shift);
  if (num.min_valuation() < shift)
    throw DomainError("matrix is not integral");
  return num.div_pi(shift);
}

bool QMat::is_integral() const { return shift <= 0 || num.min_valuation() >= shift; }

QMat QMat::normalized() const {
  QMat r = *this;
  while (r.shift > 0 && r.num.min_valuation() >= 1 && !r.num.is_zero()) {
    r.num = r.num.div_pi(1);
    --r.shift;
  }
  if (r.shift < 0) {
    r.num = r.num.mul_pi(-r.shift);
    r.shift = 0;
  }
  return r;
}

std::string QMat::str() const {
  if (shift == 0)
    return num.str();
  return "pi^" + std::to_string(-shift) + " * " + num.str();
}

ChainSmith chain_smith(const Mat &A, int m) {
  const int k = A.rows(), n = A.cols();
  Mat x = A.reduce(m);
  ChainSmith out;
  out.m = m;
  out.Q = Mat::identity(A.context(), n).with_precision(m);
  const int steps = std::min(k, n);
  for (int t = 0; t < steps; ++t) {
    int bi = -1, bj = -1, bv = m;
    for (int i = t; i < k && bv > 0; ++i)
      for (int j = t; j < n; ++j) {
        const int v = val_or(x(i, j), m);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
          if (v == 0)
            break;
        }
      }
    if (bi < 0)
      break;
    if (bi != t)
      for (int j = 0; j < n; ++j)
        std::swap(x(t, j), x(bi, j));
    if (bj != t) {
      for (int i = 0; i < k; ++i)
        std::swap(x(i, t), x(i, bj));
      for (int i = 0; i < n; ++i)
        std::swap(out.Q(i, t), out.Q(i, bj));
    }
    const Element piv = x(t, t);
    for (int i = t + 1; i < k; ++i) {
      if (val_or(x(i, t), m) >= m)
        continue;
      const Element fct = exact_quotient(x(i, t), piv).with_precision(m);
      for (int j = t; j < n; ++j)
        x(i, j) = (x(i, j) - fct * x(t, j)).with_precision(m);
    }
    for (int j = t + 1; j < n; ++j) {
      if (val_or(x(t, j), m) >= m)
        continue;
      const Element fct = exact_quotient(x(t, j), piv).with_precision(m);
      for (int i = t; i < k; ++i)
        x(i, j) = (x(i, j) - fct * x(i, t)).with_precision(m);
      for (int i = 0; i < n; ++i)
        out.Q(i, j) = (out.Q(i, j) - fct * out.Q(i, t)).with_precision(m);
    }
    out.invariants.push_back(bv);
    ++out.rank;
  }
  return out;
}

std::vector<Vec> chain_kernel(const Mat &A, int m) {
  const auto S = chain_smith(A, m);
  const int n = A.cols();
  std::vector<Vec> gens;
  for (int t = 0; t < n; ++t) {
    const int a = t < S.rank ? S.invariants[t] : 0;
    if (t < S.rank && a == 0)
      continue;
    Vec v = S.Q.column(t);
    if (t < S.rank)
      for (auto &x : v)
        x = x.mul_pi(m - a).with_precision(m);
    gens.push_back(std::move(v));
  }
  return gens;
}

int chain_length(const Mat &A, int m) {
  const auto S = chain_smith(A, m);
  int len = 0;
  for (int a : S.invariants)
    len += m - a;
  return len;
}

} // namespace padic
