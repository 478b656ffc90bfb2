#include "padic/series.hpp"
#include "padic/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace padic {

namespace {

constexpr int kNoCap = std::numeric_limits<int>::max() / 4;

Monomial add_mono(const Monomial &a, const Monomial &b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] + b[i];
  return r;
}

bool is_constant_mono(const Monomial &m) {
  return std::all_of(m.begin(), m.end(), [](int a) { return a == 0; });
}

std::string coeff_part(i64 c, int i, int j) {
  std::string s = std::to_string(c);
  if (i > 0)
    s += "*pi" + (i > 1 ? "^" + std::to_string(i) : std::string());
  if (j > 0)
    s += "*w" + (j > 1 ? "^" + std::to_string(j) : std::string());
  return s;
}

} // namespace

ModelPtr AlgebraModel::disc(CtxPtr base, std::vector<std::string> bounded,
                            std::vector<std::string> open, int degree_cap) {
  auto m = std::make_shared<AlgebraModel>();
  m->base = std::move(base);
  for (auto &v : bounded) {
    m->vars.push_back(v);
    m->kinds.push_back(VarKind::Bounded);
  }
  for (auto &v : open) {
    m->vars.push_back(v);
    m->kinds.push_back(VarKind::Open);
  }
  m->degree_cap = degree_cap;
  if (m->vars.empty())
    throw std::invalid_argument("disc model needs at least one variable");
  for (size_t i = 0; i < m->vars.size(); ++i)
    for (size_t j = i + 1; j < m->vars.size(); ++j)
      if (m->vars[i] == m->vars[j])
        throw std::invalid_argument("duplicate variable name " + m->vars[i]);
  return m;
}

ModelPtr AlgebraModel::annulus(CtxPtr base, int m, int degree_cap, std::string z1,
                               std::string z2) {
  if (m < 1)
    throw std::invalid_argument("annulus preset needs m >= 1");
  auto mod = std::make_shared<AlgebraModel>();
  mod->base = std::move(base);
  mod->vars = {std::move(z1), std::move(z2)};
  mod->kinds = {VarKind::Bounded, VarKind::Bounded};
  mod->rel.kind = Relation::Kind::Annulus;
  mod->rel.m = m;
  mod->degree_cap = degree_cap;
  return mod;
}

ModelPtr AlgebraModel::cover(CtxPtr base, int d, const std::vector<Element> &g, int degree_cap,
                             std::string t, std::string y) {
  if (d < 1)
    throw std::invalid_argument("cover preset needs d >= 1");
  auto mod = std::make_shared<AlgebraModel>();
  mod->base = base;
  mod->vars = {std::move(t), std::move(y)};
  mod->kinds = {VarKind::Open, VarKind::Bounded};
  mod->degree_cap = degree_cap;
  mod->rel.kind = Relation::Kind::Cover;
  mod->rel.d = d;
  mod->rel.y_index = 1;
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].context().get() != base.get())
      throw std::invalid_argument("cover relation coefficients must live in the base field");
    if (!g[i].is_zero() && static_cast<int>(i) <= degree_cap)
      mod->rel.g[{static_cast<int>(i), 0}] = g[i];
  }
  return mod;
}

int AlgebraModel::index(const std::string &name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name)
      return static_cast<int>(i);
  return -1;
}

int AlgebraModel::open_degree(const Monomial &mono) const {
  int d = 0;
  for (size_t i = 0; i < mono.size(); ++i)
    if (kinds[i] == VarKind::Open)
      d += mono[i];
  return d;
}

bool AlgebraModel::has_open() const {
  return std::any_of(kinds.begin(), kinds.end(), [](VarKind k) { return k == VarKind::Open; });
}

std::string AlgebraModel::describe() const {
  std::ostringstream os;
  os << "O_L<";
  bool first = true;
  for (size_t i = 0; i < vars.size(); ++i)
    if (kinds[i] == VarKind::Bounded) {
      os << (first ? "" : ",") << vars[i];
      first = false;
    }
  os << ">[[";
  first = true;
  for (size_t i = 0; i < vars.size(); ++i)
    if (kinds[i] == VarKind::Open) {
      os << (first ? "" : ",") << vars[i];
      first = false;
    }
  os << "]]";
  if (rel.kind == Relation::Kind::Annulus)
    os << "/(" << vars[0] << "*" << vars[1] << " - pi^" << rel.m << ")";
  if (rel.kind == Relation::Kind::Cover)
    os << "/(" << vars[rel.y_index] << "^" << rel.d << " - g)";
  return os.str();
}

std::string monomial_str(const AlgebraModel &model, const Monomial &mono) {
  std::string s;
  for (size_t i = 0; i < mono.size(); ++i) {
    if (mono[i] == 0)
      continue;
    if (!s.empty())
      s += "*";
    s += model.vars[i];
    if (mono[i] > 1)
      s += "^" + std::to_string(mono[i]);
  }
  return s;
}

Series::Series(ModelPtr model) : model_(std::move(model)), prec_(model_->base->precision()) {}

Series::Series(ModelPtr model, Terms terms, int prec)
    : model_(std::move(model)), terms_(std::move(terms)),
      prec_(std::min(prec, model_->base->precision())) {
  normalize();
}

Series Series::constant(ModelPtr model, const Element &c) {
  Terms t;
  t[Monomial(model->nvars(), 0)] = c;
  const int P = c.precision();
  return Series(std::move(model), std::move(t), P);
}

Series Series::constant(ModelPtr model, i64 c) {
  return constant(model, Element::from_int(model->base, c));
}

Series Series::variable(ModelPtr model, int index) {
  if (index < 0 || index >= model->nvars())
    throw std::invalid_argument("unknown variable index");
  Monomial mono(model->nvars(), 0);
  mono[index] = 1;
  Terms t;
  t[mono] = Element::one(model->base);
  const int P = model->base->precision();
  return Series(std::move(model), std::move(t), P);
}

Series Series::variable(ModelPtr model, const std::string &name) {
  const int i = model->index(name);
  if (i < 0)
    throw std::invalid_argument("unknown variable " + name);
  return variable(std::move(model), i);
}

void Series::normalize() {
  const auto &rel = model_->rel;
  const int D = model_->degree_cap;
  for (const auto &[mono, c] : terms_) {
    if (static_cast<int>(mono.size()) != model_->nvars())
      throw std::invalid_argument("monomial arity does not match the model");
    if (c.context().get() != model_->base.get())
      throw std::invalid_argument("series coefficient outside the base field");
    prec_ = std::min(prec_, c.precision());
  }
  std::vector<std::pair<Monomial, Element>> work(terms_.begin(), terms_.end());
  Terms out;
  while (!work.empty()) {
    auto [mono, c] = std::move(work.back());
    work.pop_back();
    if (rel.kind == Relation::Kind::Annulus) {
      const int k = std::min(mono[0], mono[1]);
      if (k > 0) {
        mono[0] -= k;
        mono[1] -= k;
        c = c.mul_pi(rel.m * k);
      }
    } else if (rel.kind == Relation::Kind::Cover && mono[rel.y_index] >= rel.d) {
      mono[rel.y_index] -= rel.d;
      for (const auto &[gm, gc] : rel.g)
        work.emplace_back(add_mono(mono, gm), c * gc);
      continue;
    }
    if (model_->has_open() && model_->open_degree(mono) > D)
      continue;
    auto it = out.find(mono);
    if (it == out.end())
      out.emplace(std::move(mono), std::move(c));
    else
      it->second += c;
  }
  terms_.clear();
  for (auto &[mono, c] : out) {
    Element r = c.with_precision(prec_);
    if (!r.is_zero())
      terms_.emplace(mono, std::move(r));
  }
}

Element Series::constant_term() const { return coefficient(Monomial(model_->nvars(), 0)); }

Element Series::coefficient(const Monomial &mono) const {
  auto it = terms_.find(mono);
  if (it == terms_.end())
    return Element::zero(model_->base).with_precision(prec_);
  return it->second;
}

int Series::total_degree() const {
  int d = 0;
  for (const auto &[mono, c] : terms_) {
    int s = 0;
    for (int a : mono)
      s += a;
    d = std::max(d, s);
  }
  return d;
}

Series Series::operator+(const Series &o) const {
  Terms t = terms_;
  for (const auto &[mono, c] : o.terms_) {
    auto it = t.find(mono);
    if (it == t.end())
      t.emplace(mono, c);
    else
      it->second += c;
  }
  return Series(model_, std::move(t), std::min(prec_, o.prec_));
}

Series Series::operator-() const {
  Terms t;
  for (const auto &[mono, c] : terms_)
    t.emplace(mono, -c);
  return Series(model_, std::move(t), prec_);
}

Series Series::operator-(const Series &o) const { return *this + (-o); }

Series Series::operator*(const Series &o) const {
  Terms t;
  const bool trunc = model_->has_open();
  for (const auto &[ma, ca] : terms_)
    for (const auto &[mb, cb] : o.terms_) {
      Monomial mono = add_mono(ma, mb);
      if (trunc && model_->open_degree(mono) > model_->degree_cap)
        continue;
      Element c = ca * cb;
      auto it = t.find(mono);
      if (it == t.end())
        t.emplace(std::move(mono), std::move(c));
      else
        it->second += c;
    }
  return Series(model_, std::move(t), std::min(prec_, o.prec_));
}

Series Series::scale(const Element &c) const {
  Terms t;
  for (const auto &[mono, a] : terms_)
    t.emplace(mono, a * c);
  return Series(model_, std::move(t), std::min(prec_, c.precision()));
}

Series Series::pow(int k) const {
  if (k < 0)
    throw std::invalid_argument("negative power of a series");
  Series r = constant(model_, 1), b = *this;
  while (k > 0) {
    if (k & 1)
      r = r * b;
    k >>= 1;
    if (k)
      b = b * b;
  }
  return r;
}

Series Series::with_precision(int P) const { return Series(model_, terms_, std::min(P, prec_)); }

bool Series::identical(const Series &o) const {
  if (model_.get() != o.model_.get() || prec_ != o.prec_ || terms_.size() != o.terms_.size())
    return false;
  auto it = o.terms_.begin();
  for (const auto &[mono, c] : terms_) {
    if (mono != it->first || !c.identical(it->second))
      return false;
    ++it;
  }
  return true;
}

bool Series::equals(const Series &o) const { return (*this - o).is_zero(); }

std::string Series::str() const {
  const auto &ctx = *model_->base;
  std::vector<std::string> parts;
  for (const auto &[mono, c] : terms_) {
    const std::string m = monomial_str(*model_, mono);
    for (int i = 0; i < ctx.e(); ++i)
      for (int j = 0; j < ctx.f(); ++j) {
        i64 v = c.coord(i, j);
        if (v == 0)
          continue;
        const i64 mod = ctx.p_power(ctx.coord_digits(i, prec_));
        if (v > mod / 2)
          v -= mod;
        std::string s = coeff_part(v, i, j);
        if (!m.empty())
          s += "*" + m;
        parts.push_back(s);
      }
  }
  std::string out;
  for (const auto &s : parts) {
    if (out.empty())
      out = s;
    else if (s[0] == '-')
      out += " - " + s.substr(1);
    else
      out += " + " + s;
  }
  if (out.empty())
    out = "0";
  if (prec_ < ctx.precision())
    out += " + O(pi^" + std::to_string(prec_) + ")";
  return out;
}

std::string ModelPoint::str() const {
  std::string s = "(";
  for (size_t i = 0; i < coords.size(); ++i)
    s += (i ? ", " : "") + model->vars[i] + "=" + coords[i].str();
  return s + ")";
}

namespace {

Element eval_terms(const Terms &terms, const ModelPoint &pt) {
  const auto &E = pt.emb.E;
  Element acc = Element::zero(E);
  for (const auto &[mono, c] : terms) {
    Element t = pt.emb(c);
    for (size_t i = 0; i < mono.size(); ++i)
      if (mono[i] > 0)
        t = t * pt.coords[i].pow(mono[i]);
    acc += t;
  }
  return acc;
}

} // namespace

void validate_point(const ModelPoint &pt) {
  const auto &m = *pt.model;
  if (static_cast<int>(pt.coords.size()) != m.nvars())
    throw std::invalid_argument("point has wrong number of coordinates");
  if (pt.emb.L.get() != m.base.get())
    throw std::invalid_argument("point embedding does not start at the model's base field");
  for (int i = 0; i < m.nvars(); ++i) {
    if (pt.coords[i].context().get() != pt.emb.E.get())
      throw std::invalid_argument("point coordinate outside its field");
    if (m.kinds[i] == VarKind::Open) {
      const auto v = pt.coords[i].valuation();
      if (!v.lower_bound && v.pi_units == 0)
        throw DomainError("open variable " + m.vars[i] + " needs positive valuation");
    }
  }
  if (m.rel.kind == Relation::Kind::Annulus) {
    Element lhs = pt.coords[0] * pt.coords[1];
    Element rhs = pt.emb(Element::pi_power(m.base, m.rel.m));
    Element diff = lhs - rhs;
    if (diff.precision() < 1 || !diff.is_zero())
      throw RelationError("point is not on the annulus");
  } else if (m.rel.kind == Relation::Kind::Cover) {
    Element lhs = pt.coords[m.rel.y_index].pow(m.rel.d);
    Element diff = lhs - eval_terms(m.rel.g, pt);
    if (diff.precision() < 1 || !diff.is_zero())
      throw RelationError("point does not satisfy the cover relation");
  }
}

Element evaluate(const Series &f, const ModelPoint &point) {
  validate_point(point);
  const auto &m = *f.model();
  if (point.model.get() != f.model().get())
    throw std::invalid_argument("point and series live on different models");
  Element acc = eval_terms(f.terms(), point);
  int P = std::min(acc.precision(), f.precision() * point.emb.e_rel);
  if (m.has_open()) {
    int vmin = kNoCap;
    for (int i = 0; i < m.nvars(); ++i)
      if (m.kinds[i] == VarKind::Open)
        vmin = std::min(vmin, point.coords[i].valuation().pi_units);
    const long tail = static_cast<long>(m.degree_cap + 1) * vmin;
    if (tail < P)
      P = static_cast<int>(tail);
  }
  if (P < 1)
    throw PrecisionError("evaluation guarantees no digits");
  return acc.with_precision(P);
}

Element evaluate_polynomial(const Series &f, const ModelPoint &point) {
  validate_point(point);
  if (point.model.get() != f.model().get())
    throw std::invalid_argument("point and series live on different models");
  Element acc = eval_terms(f.terms(), point);
  const int P = std::min(acc.precision(), f.precision() * point.emb.e_rel);
  if (P < 1)
    throw PrecisionError("evaluation guarantees no digits");
  return acc.with_precision(P);
}

Series substitute(const Series &f, const ModelPtr &target, const std::vector<Series> &images,
                  int tail_cap) {
  const auto &src = *f.model();
  if (static_cast<int>(images.size()) != src.nvars())
    throw std::invalid_argument("substitution needs one image per variable");
  int P = std::min(f.precision(), tail_cap);
  for (const auto &im : images)
    P = std::min(P, im.precision());
  std::vector<std::vector<Series>> powers(src.nvars());
  for (int i = 0; i < src.nvars(); ++i)
    powers[i].push_back(Series::constant(target, 1));
  Series acc(target);
  for (const auto &[mono, c] : f.terms()) {
    Series t = Series::constant(target, c);
    for (int i = 0; i < src.nvars(); ++i) {
      while (static_cast<int>(powers[i].size()) <= mono[i])
        powers[i].push_back(powers[i].back() * images[i]);
      if (mono[i] > 0)
        t = t * powers[i][mono[i]];
    }
    acc = acc + t;
  }
  return acc.with_precision(P);
}

namespace {

int vpi(const Element &x) { return x.valuation().pi_units; }

ModelPtr single_var_model(const AlgebraModel &src, int keep, VarKind kind) {
  auto m = std::make_shared<AlgebraModel>();
  m->base = src.base;
  m->vars = {src.vars[keep]};
  m->kinds = {kind};
  m->degree_cap = std::max(src.degree_cap, 1);
  return m;
}

} // namespace

Recentering make_recentering(const ModelPtr &model, const std::vector<Element> &center,
                             const std::vector<int> &scales, VarKind new_kind) {
  const auto &m = *model;
  const auto &L = m.base;
  const int N = L->precision();
  if (static_cast<int>(center.size()) != m.nvars() ||
      static_cast<int>(scales.size()) != m.nvars())
    throw std::invalid_argument("recentering needs a center coordinate and scale per variable");
  for (int k : scales)
    if (k < 0)
      throw std::invalid_argument("scale exponents must be non-negative");
  ModelPoint cpt{model, Embedding::identity(L), center};
  validate_point(cpt);

  Recentering ch;
  ch.source = model;
  ch.center = center;
  ch.scales = scales;
  ch.new_kind = new_kind;
  ch.tail_cap = N;
  const int D = m.degree_cap;
  auto open_tail = [&](const Element &c, int k) {
    const int vc = c.is_zero() ? kNoCap : vpi(c);
    const int bound = std::min(vc, new_kind == VarKind::Bounded ? k : kNoCap);
    if (bound < kNoCap)
      ch.tail_cap = std::min<long>(ch.tail_cap, static_cast<long>(D + 1) * bound);
  };

  if (m.rel.kind == Relation::Kind::None) {
    auto t = std::make_shared<AlgebraModel>(m);
    t->kinds.assign(m.nvars(), new_kind);
    t->degree_cap = std::max(D, 1);
    ch.target = t;
    for (int i = 0; i < m.nvars(); ++i) {
      ch.images.push_back(Series::constant(ch.target, center[i]) +
                          Series::variable(ch.target, i).scale(Element::pi_power(L, scales[i])));
      if (m.kinds[i] == VarKind::Open)
        open_tail(center[i], scales[i]);
    }
    return ch;
  }

  if (m.rel.kind == Relation::Kind::Annulus) {
    const int piv = vpi(center[1]) < vpi(center[0]) ? 1 : 0;
    const int other = 1 - piv;
    const int v1 = vpi(center[piv]);
    const int k = scales[piv];
    // an open new variable tolerates k = v1: the ratio U/u is then small
    if (k < v1 || (k == v1 && new_kind == VarKind::Bounded))
      throw Unsupported("annulus recentering needs the scale exponent above v(center) = " +
                        std::to_string(v1));
    ch.pivot = piv;
    ch.target = single_var_model(m, piv, new_kind);
    Series U = Series::variable(ch.target, 0);
    const Element uinv = center[piv].div_pi(v1).with_precision(N).inverse();
    const int base_v = m.rel.m - v1;
    const int step = k - v1;
    const int J = step == 0 ? m.degree_cap : std::max(0, (N - base_v + step - 1) / step);
    Series ratio = U.scale(-(Element::pi_power(L, step) * uinv));
    Series geo = Series::constant(ch.target, 1), pw = geo;
    for (int j = 1; j <= J; ++j) {
      pw = pw * ratio;
      geo = geo + pw;
    }
    std::vector<Series> images(2, Series(ch.target));
    images[piv] = Series::constant(ch.target, center[piv]) + U.scale(Element::pi_power(L, k));
    images[other] = geo.scale(Element::pi_power(L, base_v) * uinv);
    ch.images = std::move(images);
    return ch;
  }

  // cover: T is eliminated through g = a0 + a1*T with a1 a unit
  const int y = m.rel.y_index;
  if (m.nvars() != 2)
    throw Unsupported("cover recentering supports one base variable");
  const int t = 1 - y;
  Element a0 = Element::zero(L), a1 = Element::zero(L);
  for (const auto &[mono, c] : m.rel.g) {
    if (mono[t] == 0)
      a0 = c;
    else if (mono[t] == 1)
      a1 = c;
    else
      throw Unsupported("cover recentering needs g linear in the base variable");
  }
  if (!a1.is_unit())
    throw Unsupported("cover recentering needs a unit coefficient of the base variable in g");
  ch.pivot = y;
  ch.target = single_var_model(m, y, new_kind);
  Series W = Series::variable(ch.target, 0);
  Series Y = Series::constant(ch.target, center[y]) + W.scale(Element::pi_power(L, scales[y]));
  Series T = (Y.pow(m.rel.d) - Series::constant(ch.target, a0)).scale(a1.inverse());
  std::vector<Series> images(2, Series(ch.target));
  images[y] = Y;
  images[t] = T;
  ch.images = std::move(images);
  open_tail(center[t], scales[y]);
  return ch;
}

Series recenter_rescale(const Series &f, const Recentering &chart) {
  if (f.model().get() == chart.target.get())
    return f;
  return substitute(f, chart.target, chart.images, chart.tail_cap);
}

ModelPoint Recentering::pull_back(const ModelPoint &u) const {
  const auto &emb = u.emb;
  const auto &m = *source;
  const int r = emb.e_rel;
  ModelPoint y{source, emb, {}};
  if (pivot < 0) {
    for (size_t i = 0; i < center.size(); ++i)
      y.coords.push_back(emb(center[i]) + u.coords[i].mul_pi(scales[i] * r));
    return y;
  }
  y.coords.assign(2, Element());
  const Element yp = emb(center[pivot]) + u.coords[0].mul_pi(scales[pivot] * r);
  y.coords[pivot] = yp;
  const int other = 1 - pivot;
  if (m.rel.kind == Relation::Kind::Annulus) {
    // the eliminated coordinate is pi^m / yp, computed exactly
    const int v = yp.valuation().pi_units;
    const Element num = emb(Element::pi_power(m.base, m.rel.m)).div_pi(v);
    y.coords[other] = num * yp.div_pi(v).inverse();
  } else {
    Element a0 = Element::zero(m.base), a1 = Element::zero(m.base);
    for (const auto &[mono, c] : m.rel.g)
      (mono[other] == 0 ? a0 : a1) = c;
    y.coords[other] = (yp.pow(m.rel.d) - emb(a0)) * emb(a1).inverse();
  }
  return y;
}

ModelPoint Recentering::push_forward(const ModelPoint &y) const {
  const auto &emb = y.emb;
  const int r = emb.e_rel;
  ModelPoint u{target, emb, {}};
  if (pivot < 0) {
    for (size_t i = 0; i < center.size(); ++i)
      u.coords.push_back((y.coords[i] - emb(center[i])).div_pi(scales[i] * r));
  } else {
    u.coords.push_back((y.coords[pivot] - emb(center[pivot])).div_pi(scales[pivot] * r));
  }
  return u;
}

ConstancyVerdict is_constant_mod(const Series &f, int n) {
  if (n > f.precision())
    throw PrecisionError("constancy mod pi^" + std::to_string(n) + " needs precision " +
                         std::to_string(n) + ", series has " + std::to_string(f.precision()));
  ConstancyVerdict out;
  out.precision = f.precision();
  out.value = f.constant_term().reduce(n);
  out.constant = true;
  for (const auto &[mono, c] : f.terms()) {
    if (is_constant_mono(mono))
      continue;
    if (c.valuation().pi_units < n) {
      out.constant = false;
      out.witness = mono;
      break;
    }
  }
  return out;
}

Series random_series(const ModelPtr &model, std::mt19937_64 &rng, int max_terms,
                     int max_degree) {
  std::uniform_int_distribution<int> nterms(1, std::max(1, max_terms));
  std::uniform_int_distribution<int> deg(0, std::max(0, max_degree));
  std::uniform_int_distribution<int> val(0, 2);
  Terms t;
  const int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    Monomial mono(model->nvars());
    for (auto &a : mono)
      a = deg(rng);
    if (model->has_open() && model->open_degree(mono) > model->degree_cap)
      continue;
    Element c = Element::random(model->base, rng, val(rng));
    auto it = t.find(mono);
    if (it == t.end())
      t.emplace(mono, c);
  }
  return Series(model, std::move(t), model->base->precision());
}

} // namespace padic
