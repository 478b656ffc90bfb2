#include "padic/context.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace padic {

namespace {

using Poly = std::vector<i64>;

i64 mod_p(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}

void trim(Poly &a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

Poly poly_mod(Poly a, const Poly &g, i64 p) {
  trim(a);
  Poly gg = g;
  trim(gg);
  const int dg = static_cast<int>(gg.size()) - 1;
  // g is monic in every use here.
  while (static_cast<int>(a.size()) - 1 >= dg && !a.empty()) {
    const i64 c = a.back();
    const int shift = static_cast<int>(a.size()) - 1 - dg;
    for (int i = 0; i <= dg; ++i)
      a[shift + i] = mod_p(a[shift + i] - c * gg[i], p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly &a, const Poly &b, const Poly &g, i64 p) {
  if (a.empty() || b.empty())
    return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = mod_p(r[i + j] + a[i] * b[j], p);
  return poly_mod(r, g, p);
}

Poly poly_powmod(Poly base, i64 k, const Poly &g, i64 p) {
  Poly r{1};
  base = poly_mod(base, g, p);
  while (k > 0) {
    if (k & 1)
      r = poly_mulmod(r, base, g, p);
    base = poly_mulmod(base, base, g, p);
    k >>= 1;
  }
  return r;
}

i64 inv_mod_p(i64 a, i64 p) {
  i64 r = 1, b = mod_p(a, p), k = p - 2;
  while (k > 0) {
    if (k & 1)
      r = r * b % p;
    b = b * b % p;
    k >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, i64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // make b monic, then a mod b
    const i64 inv = inv_mod_p(b.back(), p);
    for (auto &c : b)
      c = c * inv % p;
    a = poly_mod(a, b, p);
    std::swap(a, b);
  }
  return a;
}

// x^(p^k) mod g
Poly frob_power(int k, const Poly &g, i64 p) {
  Poly x{0, 1};
  for (int i = 0; i < k; ++i)
    x = poly_powmod(x, p, g, p);
  return x;
}

} // namespace

bool is_prime(i64 n) {
  if (n < 2)
    return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

int vp_int(i64 x, int p) {
  if (x == 0)
    return 1 << 28;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

bool irreducible_mod_p(const std::vector<i64> &poly, int p) {
  Poly g(poly.size());
  for (size_t i = 0; i < poly.size(); ++i)
    g[i] = mod_p(poly[i], p);
  trim(g);
  const int f = static_cast<int>(g.size()) - 1;
  if (f < 1 || g.back() != 1)
    return false;
  if (f == 1)
    return true;
  Poly xf = frob_power(f, g, p);
  Poly x = poly_mod(Poly{0, 1}, g, p);
  if (xf != x)
    return false;
  for (int r = 2; r <= f; ++r) {
    if (f % r != 0 || !is_prime(r))
      continue;
    Poly h = frob_power(f / r, g, p);
    h.resize(std::max<size_t>(h.size(), 2), 0);
    h[1] = mod_p(h[1] - 1, p);
    Poly d = poly_gcd(g, h, p);
    if (d.size() > 1)
      return false;
  }
  return true;
}

std::vector<i64> find_irreducible(int p, int f) {
  if (f == 1)
    return {0, 1};
  i64 total = 1;
  for (int i = 0; i < f; ++i)
    total *= p;
  for (i64 code = 0; code < total; ++code) {
    Poly g(f + 1, 0);
    i64 c = code;
    for (int i = 0; i < f; ++i) {
      g[i] = c % p;
      c /= p;
    }
    g[f] = 1;
    if (irreducible_mod_p(g, p))
      return g;
  }
  throw std::logic_error("no irreducible polynomial found");
}

i64 Context::norm(i64 a) const {
  const i64 m = pk_[K_];
  a %= m;
  return a < 0 ? a + m : a;
}
i64 Context::add(i64 a, i64 b) const {
  i64 r = a + b;
  return r >= pk_[K_] ? r - pk_[K_] : r;
}
i64 Context::sub(i64 a, i64 b) const {
  i64 r = a - b;
  return r < 0 ? r + pk_[K_] : r;
}
i64 Context::mul(i64 a, i64 b) const {
  return static_cast<i64>(static_cast<__int128>(a) * b % pk_[K_]);
}

void Context::mulK(const i64 *x, const i64 *y, i64 *out) const {
  if (f_ == 1) {
    out[0] = mul(x[0], y[0]);
    return;
  }
  std::vector<i64> t(2 * f_ - 1, 0);
  for (int i = 0; i < f_; ++i) {
    if (x[i] == 0)
      continue;
    for (int j = 0; j < f_; ++j)
      t[i + j] = add(t[i + j], mul(x[i], y[j]));
  }
  for (int s = f_ - 2; s >= 0; --s) {
    const i64 c = t[f_ + s];
    if (c == 0)
      continue;
    for (int j = 0; j < f_; ++j)
      t[j] = add(t[j], mul(c, omega_red_[s][j]));
  }
  for (int j = 0; j < f_; ++j)
    out[j] = t[j];
}

i64 Context::residue_size() const {
  i64 q = 1;
  for (int i = 0; i < f_; ++i)
    q *= p_;
  return q;
}

int Context::coord_digits(int i, int P) const {
  const int r = P - i;
  if (r <= 0)
    return 0;
  return std::min(K_, (r + e_ - 1) / e_);
}

bool Context::same_field(const Context &o) const {
  return p_ == o.p_ && f_ == o.f_ && e_ == o.e_ && N_ == o.N_ && unram_ == o.unram_ &&
         eis_ == o.eis_;
}

std::string Context::describe() const {
  std::ostringstream os;
  os << "p=" << p_ << " f=" << f_ << " e=" << e_ << " N=" << N_;
  return os.str();
}

void Context::validate() const {
  if (!is_prime(p_))
    throw std::invalid_argument("p must be prime");
  if (f_ < 1 || e_ < 1)
    throw std::invalid_argument("f and e must be at least 1");
  if (N_ < 1)
    throw std::invalid_argument("precision must be at least 1");
  if (static_cast<int>(unram_.size()) != f_ + 1 || unram_.back() != 1)
    throw std::invalid_argument("unram_poly must be monic of degree f");
  if (!irreducible_mod_p(unram_, p_))
    throw std::invalid_argument("unram_poly is not irreducible mod p");
  if (static_cast<int>(eis_.size()) != e_ + 1)
    throw std::invalid_argument("eis_poly must have degree e");
  for (const auto &c : eis_)
    if (static_cast<int>(c.size()) != f_)
      throw std::invalid_argument("eis_poly coefficients must have f coordinates");
  if (eis_.back()[0] != 1 ||
      std::any_of(eis_.back().begin() + 1, eis_.back().end(), [](i64 v) { return v != 0; }))
    throw std::invalid_argument("eis_poly must be monic");
  for (int i = 0; i < e_; ++i)
    for (i64 c : eis_[i])
      if (mod_p(c, p_) != 0)
        throw std::invalid_argument("eis_poly is not Eisenstein: coefficient not divisible by p");
  bool unit = false;
  for (i64 c : eis_[0])
    if (mod_p(c, static_cast<i64>(p_) * p_) != 0)
      unit = true;
  if (!unit)
    throw std::invalid_argument("eis_poly is not Eisenstein: constant term divisible by p^2");
}

void Context::init_tables() {
  pk_.assign(1, 1);
  K_ = (N_ + e_ - 1) / e_;
  for (int i = 1; i <= K_; ++i) {
    if (pk_.back() > (static_cast<i64>(1) << 62) / p_)
      throw std::invalid_argument("precision cap too large: p^ceil(N/e) must stay below 2^62");
    pk_.push_back(pk_.back() * p_);
  }
  for (auto &c : unram_)
    c = norm(c);
  for (auto &v : eis_)
    for (auto &c : v)
      c = norm(c);
  // omega^f = -sum unram[j] omega^j, then shift up.
  omega_red_.assign(std::max(0, f_ - 1), std::vector<i64>(f_, 0));
  std::vector<i64> cur(f_);
  for (int j = 0; j < f_; ++j)
    cur[j] = sub(0, unram_[j]);
  for (int s = 0; s + 1 < f_; ++s) {
    omega_red_[s] = cur;
    std::vector<i64> nxt(f_, 0);
    const i64 top = cur[f_ - 1];
    for (int j = f_ - 1; j >= 1; --j)
      nxt[j] = cur[j - 1];
    for (int j = 0; j < f_; ++j)
      nxt[j] = add(nxt[j], mul(top, sub(0, unram_[j])));
    cur = nxt;
  }
  // u0 = a_0 / p in O_K; store -u0^{-1}.
  std::vector<i64> u0(f_);
  for (int j = 0; j < f_; ++j) {
    const i64 c = eis_[0][j] > pk_[K_] / 2 ? eis_[0][j] - pk_[K_] : eis_[0][j];
    u0[j] = norm(c / p_);
  }
  // residue inverse by exponentiation, then Newton lifting
  const i64 q = residue_size();
  std::vector<i64> y(f_, 0), base = u0, tmp(f_);
  y[0] = 1;
  for (i64 k = q - 2; k > 0; k >>= 1) {
    if (k & 1) {
      mulK(y.data(), base.data(), tmp.data());
      y = tmp;
    }
    mulK(base.data(), base.data(), tmp.data());
    base = tmp;
  }
  for (int it = 0; it < 8 && (1 << it) <= 2 * K_ + 2; ++it) {
    std::vector<i64> xy(f_), two(f_, 0);
    mulK(u0.data(), y.data(), xy.data());
    two[0] = 2;
    for (int j = 0; j < f_; ++j)
      two[j] = sub(two[j], xy[j]);
    mulK(y.data(), two.data(), tmp.data());
    y = tmp;
  }
  u0_inv_.resize(f_);
  for (int j = 0; j < f_; ++j)
    u0_inv_[j] = sub(0, y[j]);
}

CtxPtr Context::make(int p, std::vector<i64> unram, std::vector<std::vector<i64>> eis,
                     int precision) {
  auto c = std::shared_ptr<Context>(new Context());
  c->p_ = p;
  c->f_ = static_cast<int>(unram.size()) - 1;
  c->e_ = static_cast<int>(eis.size()) - 1;
  c->N_ = precision;
  c->unram_ = std::move(unram);
  c->eis_ = std::move(eis);
  c->validate();
  c->init_tables();
  return c;
}

CtxPtr Context::qp(int p, int precision) {
  return make(p, {0, 1}, {{-p}, {1}}, precision);
}

CtxPtr Context::unramified(int p, int f, int precision) {
  std::vector<std::vector<i64>> eis(2, std::vector<i64>(f, 0));
  eis[0][0] = -p;
  eis[1][0] = 1;
  return make(p, find_irreducible(p, f), eis, precision);
}

CtxPtr Context::eisenstein(int p, const std::vector<i64> &coeffs, int precision) {
  std::vector<std::vector<i64>> eis;
  for (i64 c : coeffs)
    eis.push_back({c});
  return make(p, {0, 1}, eis, precision);
}

CtxPtr Context::ramified_over(const CtxPtr &L, int r, int precision) {
  if (r < 1)
    throw std::invalid_argument("ramification degree must be positive");
  const int eL = L->e();
  std::vector<std::vector<i64>> eis(eL * r + 1, std::vector<i64>(L->f(), 0));
  const i64 m = L->modulus();
  for (int i = 0; i <= eL; ++i) {
    eis[i * r] = L->eis_poly()[i];
    for (auto &c : eis[i * r])
      if (c > m / 2)
        c -= m;
  }
  return make(L->p(), L->unram_poly(), eis, precision);
}

} // namespace padic
