#include "padic/galois.hpp"

#include "padic/domain.hpp"
#include "padic/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace padic {

namespace {

int vpi_of(const Element &x) { return x.valuation().pi_units; }

Element unit_part(const Element &x) { return x.div_pi(vpi_of(x)); }

Vec primitive(Vec v) {
  int m = -1;
  for (const auto &c : v)
    if (!c.is_zero())
      m = m < 0 ? vpi_of(c) : std::min(m, vpi_of(c));
  if (m < 0)
    throw std::invalid_argument("zero vector does not span a line");
  for (auto &c : v)
    c = c.is_zero() ? Element::zero(c.context()).with_precision(std::max(0, c.precision() - m))
                    : c.div_pi(m);
  return v;
}

// Generator of the kernel line of a singular, nonzero 2x2 matrix.
Vec kernel_vector(const Mat &A) {
  auto rowmin = [&](int i) {
    int m = std::max(A(i, 0).precision(), A(i, 1).precision());
    for (int j = 0; j < 2; ++j)
      if (!A(i, j).is_zero())
        m = std::min(m, vpi_of(A(i, j)));
    return m;
  };
  const int i = rowmin(0) <= rowmin(1) ? 0 : 1;
  return primitive({-A(i, 1), A(i, 0)});
}

bool same_line(const Vec &a, const Vec &b) { return (a[0] * b[1] - a[1] * b[0]).is_zero(); }

Element p_elem(const CtxPtr &ctx) { return Element::from_int(ctx, ctx->p()); }

} // namespace

// ---- FieldValue ----

FieldValue FieldValue::pi_power(const CtxPtr &ctx, int k) {
  return k >= 0 ? FieldValue{Element::pi_power(ctx, k), 0} : FieldValue{Element::one(ctx), -k};
}

FieldValue FieldValue::p_power(const CtxPtr &ctx, int k) {
  const FieldValue P{p_elem(ctx).pow(std::abs(k)), 0};
  return k >= 0 ? P : P.inverse();
}

int FieldValue::vpi() const { return vpi_of(num) - shift; }

Rational FieldValue::vp() const { return Rational(vpi(), context()->e()); }

FieldValue FieldValue::operator*(const FieldValue &o) const {
  return FieldValue{num * o.num, shift + o.shift}.normalized();
}

FieldValue FieldValue::inverse() const {
  if (num.is_zero())
    throw DomainError("zero has no inverse");
  const int v = vpi_of(num);
  const Element ui = unit_part(num).inverse();
  const int ex = shift - v; // exponent of pi in the inverse
  return ex >= 0 ? FieldValue{ui.mul_pi(ex), 0} : FieldValue{ui, -ex};
}

FieldValue FieldValue::pow(int k) const {
  if (k < 0)
    return inverse().pow(-k);
  FieldValue r{Element::one(context()), 0};
  for (int i = 0; i < k; ++i)
    r = r * *this;
  return r;
}

FieldValue FieldValue::normalized() const {
  if (shift == 0 || num.is_zero())
    return *this;
  const int d = std::min(vpi_of(num), shift);
  return {num.div_pi(d), shift - d};
}

bool FieldValue::equals(const FieldValue &o) const {
  const int S = std::max(shift, o.shift);
  return num.mul_pi(S - shift).equals(o.num.mul_pi(S - o.shift));
}

std::optional<Element> FieldValue::integral() const {
  if (shift == 0)
    return num;
  if (num.is_zero())
    return Element::zero(context()).with_precision(std::max(0, num.precision() - shift));
  if (vpi_of(num) < shift)
    return std::nullopt;
  return num.div_pi(shift);
}

std::string FieldValue::str() const {
  return shift == 0 ? num.str() : "pi^-" + std::to_string(shift) + " * (" + num.str() + ")";
}

// ---- characters ----

Character Character::operator*(const Character &o) const {
  return {weight + o.weight, value_at_p * o.value_at_p};
}

Character Character::pow(int k) const { return {weight * k, value_at_p.pow(k)}; }

Character character_x(const CtxPtr &ctx) { return {1, FieldValue::p_power(ctx, 1)}; }
Character character_abs(const CtxPtr &ctx) { return {0, FieldValue::p_power(ctx, -1)}; }
Character character_chi(const CtxPtr &ctx) { return {1, FieldValue::of(Element::one(ctx))}; }

FieldValue evaluate(const Character &delta, const FieldValue &y) {
  if (y.context()->e() != 1)
    throw std::invalid_argument("characters are evaluated on fields with e = 1");
  if (y.is_zero())
    throw DomainError("characters are defined on nonzero elements");
  const int v = y.vpi();
  const Element u = unit_part(y.num);
  const auto emb = Embedding::make(y.context(), delta.value_at_p.context());
  return FieldValue::of(emb(u)).pow(delta.weight) * delta.value_at_p.pow(v);
}

Regularity regularity(const Character &delta) {
  const auto &ctx = delta.value_at_p.context();
  const int w = delta.weight;
  if (w >= 0 && delta.value_at_p.equals(FieldValue::p_power(ctx, w)))
    return {false, "x^i", w};
  const int i = 1 - w;
  if (i >= 0 && delta.value_at_p.equals(FieldValue::p_power(ctx, -i)))
    return {false, "chi x^-i", i};
  return {};
}

// ---- quadratics ----

std::array<Rational, 2> newton_slopes(const Element &t, const Element &d) {
  if (d.is_zero())
    throw DomainError("constant term must be nonzero");
  const Rational vd = d.valuation().vp();
  if (!t.is_zero()) {
    const Rational vt = t.valuation().vp();
    if (2 * vt < vd)
      return {vt, vd - vt};
  }
  return {vd / 2, vd / 2};
}

QuadraticRoots quadratic_roots(const Element &t, const Element &d, bool allow_extension) {
  const CtxPtr ctx = t.context();
  if (d.is_zero())
    throw DomainError("constant term must be nonzero");
  QuadraticRoots out;
  out.field = ctx;
  out.emb = Embedding::identity(ctx);
  const int vd = vpi_of(d);
  if (!t.is_zero() && 2 * vpi_of(t) < vd) {
    // x -> t - d/x contracts by pi^(vd - 2 vt) around the big root
    const int s = vpi_of(t);
    Element x = t;
    for (int it = 0; it < ctx->precision() + 2; ++it)
      x = t - d.div_pi(s) * x.div_pi(s).inverse();
    const Element y = d.div_pi(s) * x.div_pi(s).inverse();
    out.roots = {x, y};
    return out;
  }
  if (ctx->p() == 2)
    throw Unsupported("equal Newton slopes need the quadratic formula, p = 2 is refused");
  const Element two_inv = Element::from_int(ctx, 2).inverse();
  const Element disc = t * t - Element::from_int(ctx, 4) * d;
  auto from_sqrt = [&](const Embedding &emb, const Element &s) {
    const Element te = emb(t), h = emb(two_inv);
    std::vector<Element> r{(te + s) * h, (te - s) * h};
    std::stable_sort(r.begin(), r.end(),
                     [](const Element &a, const Element &b) { return vpi_of(a) < vpi_of(b); });
    return r;
  };
  if (disc.is_zero()) {
    out.roots = {t * two_inv, t * two_inv};
    out.note = "discriminant indistinguishable from zero; double root";
    return out;
  }
  if (auto s = dth_roots(disc, 2); !s.empty()) {
    out.roots = from_sqrt(*out.emb, s[0]);
    return out;
  }
  if (!allow_extension || ctx->e() != 1 || ctx->f() != 1) {
    out.status = RootStatus::NeedsExtension;
    out.note = "discriminant " + disc.str() + " is not a square and no extension was built";
    return out;
  }
  const int v = vpi_of(disc);
  CtxPtr E;
  if (v % 2 == 0) {
    E = Context::unramified(ctx->p(), 2, ctx->precision());
    out.note = "roots live in the unramified quadratic extension";
  } else {
    const i64 pu = disc.div_pi(v - 1).balanced_integer();
    E = Context::eisenstein(ctx->p(), {-pu, 0, 1}, 2 * ctx->precision());
    out.note = "roots live in Q_p(sqrt(" + std::to_string(pu) + "))";
  }
  const auto emb = Embedding::make(ctx, E);
  const auto s = dth_roots(emb(disc), 2);
  if (s.empty()) {
    out.status = RootStatus::NeedsExtension;
    out.note = "square root not found in the built extension";
    return out;
  }
  out.field = E;
  out.emb = emb;
  out.roots = from_sqrt(emb, s[0]);
  return out;
}

// ---- (phi, N)-modules ----

std::string to_string(PhiKind k) {
  switch (k) {
  case PhiKind::Crystalline:
    return "crystalline";
  case PhiKind::Semistable:
    return "semistable";
  default:
    return "custom";
  }
}

std::string to_string(Admissibility a) {
  switch (a) {
  case Admissibility::Admissible:
    return "admissible";
  case Admissibility::NotAdmissible:
    return "not-admissible";
  default:
    return "needs-extension";
  }
}

PhiInvariants invariants(const PhiModule2 &M) {
  PhiInvariants r;
  r.n_squared_zero = (M.N * M.N).is_zero();
  r.commutation = (M.N * M.phi - (M.phi * M.N).scale(p_elem(M.ctx))).is_zero();
  r.vp_det = M.phi.det().valuation().vp();
  r.hodge_balanced = r.vp_det == Rational(M.k - 1);
  return r;
}

PhiModule2 PhiModule2::custom(const CtxPtr &ctx, Mat phi, Mat N, int k, Vec fil_line) {
  if (phi.rows() != 2 || phi.cols() != 2 || N.rows() != 2 || N.cols() != 2 || fil_line.size() != 2)
    throw std::invalid_argument("rank-2 data expected");
  if (k < 1)
    throw std::invalid_argument("Hodge jump k - 1 must be non-negative");
  PhiModule2 M;
  M.ctx = ctx;
  M.phi = std::move(phi);
  M.N = std::move(N);
  M.k = k;
  M.fil_line = primitive(std::move(fil_line));
  if (M.phi.det().is_zero())
    throw std::invalid_argument("phi must be invertible");
  const auto inv = invariants(M);
  if (!inv.n_squared_zero)
    throw std::invalid_argument("N must satisfy N^2 = 0");
  if (!inv.commutation)
    throw std::invalid_argument("N phi = p phi N fails");
  return M;
}

std::string PhiModule2::str() const {
  std::string s = to_string(kind) + " k=" + std::to_string(k) + "\nphi=" + phi.str() +
                  "\nN=" + N.str() + "\nFil^1 = <(" + fil_line[0].str() + ", " +
                  fil_line[1].str() + ")>";
  if (a_p)
    s += "\na_p=" + a_p->str();
  if (kind == PhiKind::Semistable)
    s += "\nL=" + (L_infinite ? std::string("infinity") : L_inv->str());
  return s;
}

PhiModule2 crystalline_module(int k, const Element &a_p) {
  if (k < 2)
    throw std::invalid_argument("weight k must be at least 2");
  if (!a_p.is_zero() && vpi_of(a_p) <= 0)
    throw DomainError("a_p must lie in the maximal ideal");
  const CtxPtr &ctx = a_p.context();
  Mat phi(ctx, 2, 2), N(ctx, 2, 2);
  phi(0, 1) = Element::from_int(ctx, -1);
  phi(1, 0) = p_elem(ctx).pow(k - 1);
  phi(1, 1) = a_p;
  auto M = PhiModule2::custom(ctx, phi, N, k, {Element::one(ctx), Element::zero(ctx)});
  M.kind = PhiKind::Crystalline;
  M.a_p = a_p;
  if (!M.phi.det().equals(p_elem(ctx).pow(k - 1)))
    throw std::logic_error("det phi != p^(k-1)");
  return M;
}

CtxPtr semistable_context(int p, int precision) {
  return Context::eisenstein(p, {-p, 0, 1}, precision);
}

PhiModule2 semistable_module(const CtxPtr &ctx, int k, const std::optional<FieldValue> &L_inv) {
  if (ctx->p() == 2)
    throw Unsupported("semistable presets refuse p = 2");
  if (k < 2)
    throw std::invalid_argument("weight k must be at least 2");
  const Element w = Element::pi(ctx);
  if (!(w * w).equals(p_elem(ctx)))
    throw std::invalid_argument("context must contain w with w^2 = p as its uniformizer");
  Mat N(ctx, 2, 2);
  Vec fil{Element::one(ctx), Element::one(ctx)};
  if (L_inv) {
    if (!L_inv->context()->same_field(*ctx))
      throw std::invalid_argument("L-invariant lives in another field");
    N(1, 0) = Element::one(ctx);
    fil = {Element::pi_power(ctx, L_inv->shift), L_inv->num};
  }
  auto M = PhiModule2::custom(ctx, Mat::diag({w.pow(k), w.pow(k - 2)}), N, k, fil);
  M.kind = PhiKind::Semistable;
  M.L_inv = L_inv;
  M.L_infinite = !L_inv;
  const auto inv = invariants(M);
  if (!inv.ok())
    throw std::logic_error("semistable preset violates its invariants");
  return M;
}

AdmissibilityReport weak_admissibility(const PhiModule2 &M) {
  AdmissibilityReport rep;
  rep.field = M.ctx;
  rep.t_N = M.phi.det().valuation().vp();
  rep.t_H = Rational(M.k - 1);
  const CtxPtr &ctx = M.ctx;

  auto add_line = [&](const Vec &v, const Element &lambda, const Vec &fil) {
    StableLine l;
    l.v = v;
    l.eigenvalue = lambda;
    l.slope = lambda.valuation().vp();
    l.hodge = same_line(v, fil) ? M.k - 1 : 0;
    l.ok = l.slope >= Rational(l.hodge);
    rep.lines.push_back(std::move(l));
  };
  auto eigenvalue_on = [](const Mat &phi, const Vec &v) {
    const Vec w = phi.apply(v);
    const int i = v[0].is_zero() || (!v[1].is_zero() && vpi_of(v[1]) < vpi_of(v[0])) ? 1 : 0;
    return w[i] * v[i].inverse();
  };

  if (!M.N.is_zero()) {
    // the only N-stable line is ker N, and it is phi-stable
    const Vec v = kernel_vector(M.N);
    add_line(v, eigenvalue_on(M.phi, v), M.fil_line);
  } else if (M.phi(0, 1).is_zero() && M.phi(1, 0).is_zero() && M.phi(0, 0).equals(M.phi(1, 1))) {
    // scalar phi: every line is stable; Fil^1 and a complement are the extremes
    add_line(M.fil_line, M.phi(0, 0), M.fil_line);
    Vec other = M.fil_line[0].is_unit() ? Vec{Element::zero(ctx), Element::one(ctx)}
                                        : Vec{Element::one(ctx), Element::zero(ctx)};
    add_line(other, M.phi(0, 0), M.fil_line);
  } else {
    const auto qr = quadratic_roots(M.phi.trace(), M.phi.det());
    if (qr.status != RootStatus::Ok) {
      rep.verdict = Admissibility::NeedsExtension;
      rep.reason = qr.note;
      return rep;
    }
    rep.field = qr.field;
    const Mat phi = apply(*qr.emb, M.phi);
    const Vec fil{(*qr.emb)(M.fil_line[0]), (*qr.emb)(M.fil_line[1])};
    for (size_t r = 0; r < qr.roots.size(); ++r) {
      if (r == 1 && qr.roots[1].equals(qr.roots[0]))
        break; // non-scalar with a double eigenvalue: one eigenline
      const Mat A = phi - Mat::identity(qr.field, 2).scale(qr.roots[r]);
      add_line(kernel_vector(A), qr.roots[r], fil);
    }
  }
  if (rep.t_N != rep.t_H) {
    rep.verdict = Admissibility::NotAdmissible;
    rep.reason = "t_N = " + to_string(rep.t_N) + " differs from t_H = " + to_string(rep.t_H);
    return rep;
  }
  for (const auto &l : rep.lines)
    if (!l.ok) {
      rep.verdict = Admissibility::NotAdmissible;
      rep.reason = "stable line of slope " + to_string(l.slope) + " below its Hodge number " +
                   std::to_string(l.hodge);
      return rep;
    }
  rep.verdict = Admissibility::Admissible;
  return rep;
}

Triangulation triangulation_parameters(int k, const Element &a_p) {
  if (k < 2)
    throw std::invalid_argument("weight k must be at least 2");
  const CtxPtr &ctx = a_p.context();
  const Element pk = p_elem(ctx).pow(k - 1);
  const auto qr = quadratic_roots(a_p, pk);
  if (qr.status != RootStatus::Ok)
    throw Unsupported("needs-extension: " + qr.note);
  Triangulation T;
  T.field = qr.field;
  T.phi1 = qr.roots[0];
  T.phi2 = qr.roots[1];
  T.delta1 = {0, FieldValue::of(T.phi1)};
  T.delta2 = {-(k - 1), FieldValue::of(T.phi2) * FieldValue::p_power(T.field, 1 - k)};
  const FieldValue prod = T.delta1.value_at_p * T.delta2.value_at_p *
                          FieldValue::p_power(T.field, k - 1);
  if (!prod.equals(FieldValue::of((*qr.emb)(pk))))
    throw PrecisionError("root-finding lost too much precision: phi1 phi2 != p^(k-1)");
  return T;
}

std::pair<Character, Character> semistable_parameters(const CtxPtr &ctx, int k) {
  const Element w = Element::pi(ctx);
  if (!(w * w).equals(p_elem(ctx)))
    throw std::invalid_argument("context must contain w with w^2 = p as its uniformizer");
  // alpha = w^(v_p(x)) |x|^(-1): trivial on units, w p at p
  const Character alpha_char{0, FieldValue::of(w) * FieldValue::p_power(ctx, 1)};
  return {character_abs(ctx) * alpha_char, character_x(ctx).pow(-k) * alpha_char};
}

// ---- explicit radii ----

i64 alpha(i64 km1, int p) {
  if (km1 < 0)
    throw std::invalid_argument("alpha needs k - 1 >= 0");
  i64 s = 0;
  for (i64 d = p - 1; d <= km1; d *= p)
    s += km1 / d;
  return s;
}

i64 vp_factorial(i64 m, int p) {
  i64 s = 0;
  for (i64 q = m / p; q > 0; q /= p)
    s += q;
  return s;
}

CrystallineDisc crystalline_congruence_disc(int k, int p, Rational v_ap0, int n) {
  if (k < 2)
    throw std::invalid_argument("weight k must be at least 2");
  if (v_ap0 <= 0)
    throw std::invalid_argument("v_p(a_p0) must be positive");
  if (n < 1)
    throw std::invalid_argument("n must be at least 1");
  CrystallineDisc c;
  c.disc_radius = 2 * v_ap0 + alpha(k - 1, p);
  c.pointwise_bound = c.disc_radius + (n - 1);
  c.constancy_radius = c.disc_radius + n;
  return c;
}

Rational uniform_reduction_threshold(int k, int p, Rational v_ap0, int n, int e) {
  if (e < 1 || n < 1)
    throw std::invalid_argument("e and n must be positive");
  return 2 * v_ap0 + alpha(k - 1, p) + e * n;
}

Rational semistable_congruence_bound(int k, int p, int n) {
  if (k < 4)
    throw std::invalid_argument("semistable bound needs k >= 4");
  if (p == 2)
    throw Unsupported("semistable bound needs p != 2");
  if (n < 1)
    throw std::invalid_argument("n must be at least 1");
  return Rational(2) - Rational(k, 2) - vp_factorial(k - 2, p) + 1 - n;
}

i64 weight_direction_threshold(i64 m, int n) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("m and n must be positive");
  return m + n - 1;
}

} // namespace padic
