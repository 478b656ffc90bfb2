#include "padic/element.hpp"
#include "padic/errors.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

namespace {
constexpr int kInf = 1 << 28;
}

std::string Valuation::str() const {
  return (lower_bound ? ">=" : "") + to_string(vp());
}

Element::Element(CtxPtr ctx, std::vector<i64> coords, int prec)
    : ctx_(std::move(ctx)), c_(std::move(coords)), prec_(prec) {
  if (static_cast<int>(c_.size()) != ctx_->degree())
    throw std::invalid_argument("coordinate vector has wrong length");
  prec_ = std::clamp(prec_, 0, ctx_->precision());
  for (auto &v : c_)
    v = ctx_->norm(v);
  canonicalize();
}

void Element::canonicalize() {
  const int e = ctx_->e(), f = ctx_->f();
  for (int i = 0; i < e; ++i) {
    const i64 m = ctx_->p_power(ctx_->coord_digits(i, prec_));
    for (int j = 0; j < f; ++j) {
      i64 &v = c_[i * f + j];
      v %= m;
    }
  }
}

Element Element::zero(const CtxPtr &ctx) {
  return Element(ctx, std::vector<i64>(ctx->degree(), 0), ctx->precision());
}

Element Element::one(const CtxPtr &ctx) { return from_int(ctx, 1); }

Element Element::from_int(const CtxPtr &ctx, i64 v) {
  std::vector<i64> c(ctx->degree(), 0);
  c[0] = ctx->norm(v);
  return Element(ctx, std::move(c), ctx->precision());
}

Element Element::pi(const CtxPtr &ctx) {
  if (ctx->e() == 1)
    return from_int(ctx, ctx->p());
  std::vector<i64> c(ctx->degree(), 0);
  c[ctx->f()] = 1;
  return Element(ctx, std::move(c), ctx->precision());
}

Element Element::omega(const CtxPtr &ctx) {
  std::vector<i64> c(ctx->degree(), 0);
  if (ctx->f() == 1)
    throw std::invalid_argument("omega requires f > 1");
  c[1] = 1;
  return Element(ctx, std::move(c), ctx->precision());
}

Element Element::pi_power(const CtxPtr &ctx, int k) {
  if (k < 0)
    throw std::invalid_argument("negative pi power");
  if (k >= ctx->precision())
    return zero(ctx);
  if (k < ctx->e()) {
    std::vector<i64> c(ctx->degree(), 0);
    if (ctx->e() == 1)
      return from_int(ctx, ctx->p_power(k));
    c[k * ctx->f()] = 1;
    return Element(ctx, std::move(c), ctx->precision());
  }
  return pi(ctx).pow(k);
}

Element Element::random(const CtxPtr &ctx, std::mt19937_64 &rng, int val) {
  std::uniform_int_distribution<i64> d(0, ctx->modulus() - 1);
  std::vector<i64> c(ctx->degree());
  for (auto &v : c)
    v = d(rng);
  Element x(ctx, std::move(c), ctx->precision());
  return val > 0 ? x.mul_pi(val) : x;
}

Element Element::random_unit(const CtxPtr &ctx, std::mt19937_64 &rng) {
  for (;;) {
    Element x = random(ctx, rng);
    if (x.is_unit())
      return x;
  }
}

Valuation Element::valuation() const {
  const int e = ctx_->e(), f = ctx_->f(), p = ctx_->p();
  int best = kInf;
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      const i64 v = c_[i * f + j];
      if (v != 0)
        best = std::min(best, e * vp_int(v, p) + i);
    }
  Valuation out;
  out.e = e;
  if (best >= prec_) {
    out.pi_units = prec_;
    out.lower_bound = true;
  } else {
    out.pi_units = best;
  }
  return out;
}

bool Element::is_zero() const { return valuation().lower_bound; }

bool Element::is_unit() const {
  const auto v = valuation();
  return !v.lower_bound && v.pi_units == 0;
}

Element Element::operator+(const Element &o) const {
  std::vector<i64> c(c_.size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = ctx_->add(c_[i], o.c_[i]);
  return Element(ctx_, std::move(c), std::min(prec_, o.prec_));
}

Element Element::operator-(const Element &o) const {
  std::vector<i64> c(c_.size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = ctx_->sub(c_[i], o.c_[i]);
  return Element(ctx_, std::move(c), std::min(prec_, o.prec_));
}

Element Element::operator-() const {
  std::vector<i64> c(c_.size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = ctx_->sub(0, c_[i]);
  return Element(ctx_, std::move(c), prec_);
}

Element Element::operator*(const Element &o) const {
  const int e = ctx_->e(), f = ctx_->f();
  const int va = valuation().pi_units, vb = o.valuation().pi_units;
  const int prec = std::min({ctx_->precision(), va + o.prec_, vb + prec_});
  if (e == 1 && f == 1)
    return Element(ctx_, {ctx_->mul(c_[0], o.c_[0])}, prec);
  std::vector<i64> t((2 * e - 1) * f, 0), tmp(f);
  for (int i1 = 0; i1 < e; ++i1) {
    const i64 *a = &c_[i1 * f];
    if (std::all_of(a, a + f, [](i64 v) { return v == 0; }))
      continue;
    for (int i2 = 0; i2 < e; ++i2) {
      ctx_->mulK(a, &o.c_[i2 * f], tmp.data());
      for (int j = 0; j < f; ++j)
        t[(i1 + i2) * f + j] = ctx_->add(t[(i1 + i2) * f + j], tmp[j]);
    }
  }
  const auto &eis = ctx_->eis_poly();
  for (int d = 2 * e - 2; d >= e; --d) {
    const i64 *cd = &t[d * f];
    if (std::all_of(cd, cd + f, [](i64 v) { return v == 0; }))
      continue;
    std::vector<i64> top(cd, cd + f);
    for (int i = 0; i < e; ++i) {
      ctx_->mulK(top.data(), eis[i].data(), tmp.data());
      for (int j = 0; j < f; ++j)
        t[(d - e + i) * f + j] = ctx_->sub(t[(d - e + i) * f + j], tmp[j]);
    }
  }
  t.resize(e * f);
  return Element(ctx_, std::move(t), prec);
}

Element Element::pow(i64 k) const {
  if (k < 0)
    return inverse().pow(-k);
  Element r = one(ctx_), b = *this;
  while (k > 0) {
    if (k & 1)
      r = r * b;
    k >>= 1;
    if (k)
      b = b * b;
  }
  return r;
}

Element Element::inverse() const {
  if (!is_unit())
    throw DomainError("inverse of a non-unit");
  Element x = with_precision(ctx_->precision());
  Element y = x.pow(ctx_->residue_size() - 2);
  const Element two = from_int(ctx_, 2);
  for (int done = 1; done < ctx_->precision(); done *= 2)
    y = y * (two - x * y);
  return y.with_precision(prec_);
}

Element Element::div_pi(int k) const {
  if (k < 0)
    return mul_pi(-k);
  const auto v = valuation();
  if (v.pi_units < k)
    throw DomainError("division by pi^k of an element of smaller valuation");
  const int e = ctx_->e(), f = ctx_->f(), p = ctx_->p();
  std::vector<i64> c = c_;
  std::vector<i64> w(f), tmp(f);
  const auto &eis = ctx_->eis_poly();
  for (int step = 0; step < k; ++step) {
    for (int j = 0; j < f; ++j)
      tmp[j] = c[j] / p;
    ctx_->mulK(tmp.data(), ctx_->u0_inverse().data(), w.data());
    std::vector<i64> r(e * f, 0);
    for (int i = 0; i + 1 < e; ++i)
      for (int j = 0; j < f; ++j)
        r[i * f + j] = c[(i + 1) * f + j];
    for (int j = 0; j < f; ++j)
      r[(e - 1) * f + j] = ctx_->add(r[(e - 1) * f + j], w[j]);
    for (int i = 0; i + 1 < e; ++i) {
      ctx_->mulK(w.data(), eis[i + 1].data(), tmp.data());
      for (int j = 0; j < f; ++j)
        r[i * f + j] = ctx_->add(r[i * f + j], tmp[j]);
    }
    c = std::move(r);
  }
  return Element(ctx_, std::move(c), prec_ - k);
}

Element Element::mul_pi(int k) const {
  if (k < 0)
    return div_pi(-k);
  if (k == 0)
    return *this;
  return *this * pi_power(ctx_, k);
}

Element Element::reduce(int m) const {
  if (m > prec_)
    throw PrecisionError("reduction mod pi^" + std::to_string(m) + " needs precision " +
                         std::to_string(m) + ", have " + std::to_string(prec_));
  return with_precision(m);
}

Element Element::with_precision(int P) const { return Element(ctx_, c_, P); }

bool Element::equals(const Element &o) const { return (*this - o).is_zero(); }

bool Element::is_rational_integer() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0)
      return false;
  return true;
}

i64 Element::balanced_integer() const {
  const i64 m = ctx_->p_power(ctx_->coord_digits(0, prec_));
  return c_[0] > m / 2 ? c_[0] - m : c_[0];
}

std::string Element::str() const {
  std::ostringstream os;
  if (c_.size() == 1) {
    os << c_[0];
    return os.str();
  }
  os << "[";
  for (size_t i = 0; i < c_.size(); ++i)
    os << (i ? "," : "") << c_[i];
  os << "]";
  return os.str();
}

Valuation valuation(const Element &x) { return x.valuation(); }

Element reduce_mod(const Element &x, int m) { return x.reduce(m); }

int gamma_exponent(int e_rel, int n) {
  if (e_rel < 1)
    throw std::invalid_argument("ramification index must be at least 1");
  if (n < 1)
    throw std::invalid_argument("n must be at least 1");
  return (n - 1) * e_rel + 1;
}

} // namespace padic
