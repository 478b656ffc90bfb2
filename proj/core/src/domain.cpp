#include "padic/domain.hpp"
#include "padic/errors.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace padic {

std::string to_string(DomainKind k) { return k == DomainKind::WideOpenU ? "U" : "V"; }

int ResidueDomain::threshold(int e_rel) const {
  return kind == DomainKind::WideOpenU ? (n - 1) * e_rel + 1 : n * e_rel;
}

std::string ResidueDomain::str() const {
  std::ostringstream os;
  os << to_string(kind) << "^(" << n << ") at " << center.str() << " on " << model->describe();
  if (closed) {
    os << ": " << closed->shape;
    for (const auto &c : closed->constraints)
      os << " [v(" << model->vars[c.var] << " - " << c.center.str() << ") "
         << (c.strict ? ">" : ">=") << " " << to_string(c.radius_vp) << "]";
  }
  return os.str();
}

namespace {

int vpi(const Element &x) { return x.valuation().pi_units; }

void require_base_point(const ModelPtr &model, const ModelPoint &x) {
  if (x.model.get() != model.get())
    throw std::invalid_argument("point lives on a different model");
  if (x.emb.E.get() != model->base.get())
    throw std::invalid_argument("the vanishing ideal is only formed at points over the base field");
  validate_point(x);
}

// g = a0 + a1 T with a1 a unit; returns false otherwise
bool linear_unit_cover(const AlgebraModel &m, Element &a0, Element &a1) {
  const int t = 1 - m.rel.y_index;
  a0 = Element::zero(m.base);
  a1 = Element::zero(m.base);
  for (const auto &[mono, c] : m.rel.g) {
    if (mono[t] == 0)
      a0 = c;
    else if (mono[t] == 1)
      a1 = c;
    else
      return false;
  }
  return a1.is_unit();
}

std::optional<ClosedForm> closed_form(const ModelPtr &model, const ModelPoint &x, int n,
                                      DomainKind kind) {
  const auto &m = *model;
  const int e = m.base->e();
  const bool U = kind == DomainKind::WideOpenU;
  // U: v > (n-1)/e strictly; V: v >= n/e
  auto radius = [&](int k) { return Rational(k, e); };
  const int base_k = U ? n - 1 : n;

  ClosedForm cf;
  if (m.rel.kind == Relation::Kind::None) {
    cf.shape = m.nvars() == 1 ? "disc" : "polydisc";
    for (int i = 0; i < m.nvars(); ++i) {
      if (n == 0 && m.kinds[i] == VarKind::Open)
        cf.constraints.push_back({i, x.coords[i], Rational(0), true});
      else
        cf.constraints.push_back({i, x.coords[i], radius(base_k), U});
    }
    return cf;
  }

  if (m.rel.kind == Relation::Kind::Annulus) {
    const int a[2] = {vpi(x.coords[0]), vpi(x.coords[1])};
    for (int piv = 0; piv < 2; ++piv) {
      // zeta_piv keeps valuation a[piv] throughout when the pivot condition holds
      const bool ok = U ? base_k >= a[piv] : base_k > a[piv];
      if (!ok)
        continue;
      const int k = std::max(base_k, base_k - m.rel.m + 2 * a[piv]);
      cf.shape = "disc";
      cf.constraints.push_back({piv, x.coords[piv], radius(k), U});
      return cf;
    }
    cf.shape = "annulus";
    for (int i = 0; i < 2; ++i)
      cf.constraints.push_back({i, Element::zero(m.base), radius(base_k), U});
    return cf;
  }

  // cover: T - t0 = (Y^d - y0^d)/a1 has valuation >= v(Y - y0)
  Element a0, a1;
  if (n < 1 || !linear_unit_cover(m, a0, a1))
    return std::nullopt;
  const int y = m.rel.y_index;
  cf.shape = "disc";
  cf.constraints.push_back({y, x.coords[y], radius(base_k), U});
  return cf;
}

bool meets(const Element &diff, const Rational &r, bool strict) {
  const auto v = diff.valuation();
  const int eE = diff.context()->e();
  if (v.lower_bound) {
    // only a lower bound prec/e is known
    const Rational lb(diff.precision(), eE);
    if (strict ? lb > r : lb >= r)
      return true;
    throw PrecisionError("closed-form membership undecidable at precision " +
                         std::to_string(diff.precision()));
  }
  return strict ? v.vp() > r : v.vp() >= r;
}

Element near(const Element &c, int vmin, std::mt19937_64 &rng) {
  const auto &ctx = c.context();
  const int P = ctx->precision();
  vmin = std::max(vmin, 0);
  if (vmin > P - 1 || rng() % 16 == 0)
    return c;
  std::uniform_int_distribution<int> vd(vmin, P - 1);
  return c + Element::random_unit(ctx, rng).mul_pi(vd(rng));
}

// pi_E exponent matching a closed-form constraint
int constraint_floor(const DiscConstraint &c, int eE) {
  const Rational R = c.radius_vp * eE;
  // integral for the presets: radius k/e_L with e_L | e_E
  if (R.denominator() != 1)
    throw std::logic_error("closed-form radius is not integral in pi_E units");
  const int k = static_cast<int>(R.numerator());
  return c.strict ? k + 1 : k;
}

Element eval_g(const AlgebraModel &m, const Element &t, const Embedding &emb) {
  const int tv = 1 - m.rel.y_index;
  Element acc = Element::zero(emb.E);
  for (const auto &[mono, c] : m.rel.g)
    acc += emb(c) * t.pow(mono[tv]);
  return acc;
}

} // namespace

std::vector<Series> ideal_generators(const ModelPtr &model, const ModelPoint &x) {
  require_base_point(model, x);
  std::vector<Series> gens;
  for (int i = 0; i < model->nvars(); ++i)
    gens.push_back(Series::variable(model, i) - Series::constant(model, x.coords[i]));
  return gens;
}

ResidueDomain describe(const ModelPtr &model, const ModelPoint &x, int n, DomainKind kind) {
  if (n < 0)
    throw std::invalid_argument("residue level must be >= 0");
  ResidueDomain dom;
  dom.model = model;
  dom.center = x;
  dom.n = n;
  dom.kind = kind;
  dom.gens = ideal_generators(model, x);
  dom.closed = closed_form(model, x, n, kind);
  return dom;
}

ModelPoint embed_point(const ModelPoint &x, const Embedding &emb) {
  if (x.emb.E.get() != emb.L.get())
    throw std::invalid_argument("point does not live over the embedding's source field");
  ModelPoint y{x.model, Embedding::make(x.emb.L, emb.E), {}};
  for (const auto &c : x.coords)
    y.coords.push_back(emb(c));
  return y;
}

bool member(const ResidueDomain &dom, const ModelPoint &y) {
  if (y.model.get() != dom.model.get())
    throw std::invalid_argument("point lives on a different model");
  validate_point(y);
  const int thr = dom.threshold(y.emb.e_rel);
  bool in = true;
  for (const auto &g : dom.gens) {
    const Element val = evaluate_polynomial(g, y);
    const auto v = val.valuation();
    if (v.lower_bound) {
      if (val.precision() < thr)
        throw PrecisionError("membership undecidable: generator known to pi^" +
                             std::to_string(val.precision()) + ", threshold " +
                             std::to_string(thr));
    } else if (v.pi_units < thr) {
      in = false;
    }
  }
  if (dom.kind == DomainKind::WideOpenU && thr >= 1) {
    // residue characterization: y and x agree mod pi_E^gamma
    bool agree = true, decidable = true;
    for (size_t i = 0; i < y.coords.size(); ++i) {
      const Element diff = y.coords[i] - y.emb(dom.center.coords[i]);
      if (diff.precision() < thr)
        decidable = false;
      else if (!diff.reduce(thr).is_zero())
        agree = false;
    }
    if (decidable && agree != in)
      throw std::logic_error("generator predicate disagrees with residue characterization");
  }
  return in;
}

bool member_closed_form(const ResidueDomain &dom, const ModelPoint &y) {
  if (!dom.closed)
    throw std::invalid_argument("domain has no closed form");
  if (y.model.get() != dom.model.get())
    throw std::invalid_argument("point lives on a different model");
  validate_point(y);
  for (const auto &c : dom.closed->constraints)
    if (!meets(y.coords[c.var] - y.emb(c.center), c.radius_vp, c.strict))
      return false;
  return true;
}

std::vector<Element> dth_roots(const Element &c, int d) {
  if (d < 1)
    throw std::invalid_argument("root degree must be positive");
  if (d == 1)
    return {c};
  const auto &ctx = c.context();
  if (d % ctx->p() == 0)
    throw Unsupported("d-th roots with p | d need ramified Hensel lifting");
  if (c.is_zero())
    return {Element::zero(ctx).with_precision((c.precision() + d - 1) / d)};
  const int v = vpi(c);
  if (v % d != 0)
    return {};
  const Element u = c.div_pi(v);
  const int P = u.precision();
  std::vector<Element> roots;
  const Element dd = Element::from_int(ctx, d);
  for (const Element &w0 : enumerate_residues(ctx, 1)) {
    if (w0.is_zero() || !(w0.pow(d) - u).reduce(1).is_zero())
      continue;
    Element w(ctx, w0.coords(), P);
    for (int span = 1; span < 2 * P + 2; span *= 2)
      w = w - (w.pow(d) - u) * (dd * w.pow(d - 1)).inverse();
    roots.push_back(w.with_precision(P).mul_pi(v / d));
  }
  return roots;
}

SampleResult sample(const ResidueDomain &dom, const CtxPtr &ext, int count, std::uint64_t seed) {
  const auto &m = *dom.model;
  const Embedding emb = Embedding::make(m.base, ext);
  const int r = emb.e_rel;
  const int thr = dom.threshold(r);
  const int eE = ext->e();
  std::mt19937_64 rng(seed);
  SampleResult out;
  const int budget = 64 * count + 64;
  const ModelPoint cx = embed_point(dom.center, emb);

  auto accept = [&](ModelPoint pt) {
    try {
      if (member(dom, pt)) {
        out.points.push_back(std::move(pt));
        return;
      }
    } catch (const PrecisionError &) {
    } catch (const RelationError &) {
    } catch (const DomainError &) {
    }
    ++out.rejected;
  };

  while (static_cast<int>(out.points.size()) < count) {
    if (out.attempts >= budget) {
      out.exhausted = true;
      out.diagnostics.push_back("sampling budget of " + std::to_string(budget) +
                                " attempts exhausted");
      break;
    }
    ++out.attempts;
    ModelPoint pt{dom.model, emb, {}};
    if (m.rel.kind == Relation::Kind::None) {
      for (int i = 0; i < m.nvars(); ++i)
        pt.coords.push_back(near(cx.coords[i], std::max(thr, m.kinds[i] == VarKind::Open ? 1 : 0), rng));
      accept(std::move(pt));
    } else if (m.rel.kind == Relation::Kind::Annulus) {
      const int mr = m.rel.m * r;
      const auto &cf = *dom.closed;
      pt.coords.assign(2, Element());
      if (cf.shape == "disc") {
        const auto &c = cf.constraints[0];
        const int piv = c.var;
        const Element z = near(cx.coords[piv], constraint_floor(c, eE), rng);
        const int v = vpi(z);
        if (v > mr) {
          ++out.rejected;
          continue;
        }
        pt.coords[piv] = z;
        pt.coords[1 - piv] = Element::pi_power(ext, mr - v) * z.div_pi(v).inverse();
      } else {
        const int lo = constraint_floor(cf.constraints[0], eE);
        const int hi = mr - constraint_floor(cf.constraints[1], eE);
        if (lo > hi) {
          out.diagnostics.push_back("annulus domain has no points over " + ext->describe());
          break;
        }
        std::uniform_int_distribution<int> vd(lo, hi);
        const int v = vd(rng);
        const Element u = Element::random_unit(ext, rng);
        pt.coords[0] = u.mul_pi(v);
        pt.coords[1] = u.inverse().mul_pi(mr - v);
      }
      accept(std::move(pt));
    } else {
      const int y = m.rel.y_index, t = 1 - y;
      const Element tv = near(cx.coords[t], std::max(thr, 1), rng);
      const auto roots = dth_roots(eval_g(m, tv, emb), m.rel.d);
      if (roots.empty()) {
        ++out.no_root;
        if (out.no_root <= 3)
          out.diagnostics.push_back("no " + std::to_string(m.rel.d) + "-th root of g(" +
                                    m.vars[t] + ") at " + m.vars[t] + " = " + tv.str() +
                                    " in " + ext->describe());
        continue;
      }
      bool found = false;
      for (const auto &root : roots) {
        ModelPoint cand{dom.model, emb, {}};
        cand.coords.assign(2, Element());
        cand.coords[t] = tv;
        cand.coords[y] = root;
        try {
          if (member(dom, cand)) {
            out.points.push_back(std::move(cand));
            found = true;
            break;
          }
        } catch (const PrecisionError &) {
        }
      }
      if (!found)
        ++out.rejected;
    }
  }
  return out;
}

Recentering chart(const ResidueDomain &dom) {
  if (dom.n < 1)
    throw std::invalid_argument("charts need n >= 1");
  const bool U = dom.kind == DomainKind::WideOpenU;
  const int k = U ? dom.n - 1 : dom.n;
  return make_recentering(dom.model, dom.center.coords,
                          std::vector<int>(dom.model->nvars(), k),
                          U ? VarKind::Open : VarKind::Bounded);
}

ModelPtr cover_base(const ModelPtr &cover) {
  if (cover->rel.kind != Relation::Kind::Cover)
    throw std::invalid_argument("not a cover model");
  const int t = 1 - cover->rel.y_index;
  return AlgebraModel::disc(cover->base, {}, {cover->vars[t]}, cover->degree_cap);
}

ModelPoint project(const ModelPtr &base, const ModelPoint &upstairs) {
  const int t = 1 - upstairs.model->rel.y_index;
  return ModelPoint{base, upstairs.emb, {upstairs.coords[t]}};
}

bool CoverReport::containments_hold() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const CoverLevel &l) { return l.contain_u && l.contain_v; });
}

CoverReport cover_compare(const ModelPtr &cover, const ModelPoint &x, int budget,
                          const std::vector<CtxPtr> &exts, int samples, std::uint64_t seed) {
  const auto &m = *cover;
  const ModelPtr base = cover_base(cover);
  const ModelPoint xb = project(base, x);
  require_base_point(cover, x);
  const int d = m.rel.d, y = m.rel.y_index, t = 1 - y;
  const Embedding id = Embedding::identity(m.base);

  CoverReport rep;
  rep.budget = budget;
  rep.single_fiber = d == 1 || eval_g(m, x.coords[t], id).is_zero();
  Element a0, a1;
  if (rep.single_fiber && linear_unit_cover(m, a0, a1)) {
    if (d == 1)
      rep.certificate = "d = 1: Y = g(T) identifies the cover with its base, so both "
                        "neighborhoods agree at every level n >= 1";
    else
      rep.certificate = "T - t0 = Y^" + std::to_string(d) +
                        "/a1 with a1 a unit, so v(T - t0) = " + std::to_string(d) +
                        " v(Y) exactly; hence U^(n)_x = pi^-1 U^(" + std::to_string(d) +
                        "(n-1)+1)_y and V^(n)_x = pi^-1 V^(" + std::to_string(d) +
                        "n)_y for every n >= 1";
  }

  std::uint64_t s = seed;
  for (int n = 1; n <= budget; ++n) {
    CoverLevel lev;
    lev.n = n;
    const auto upU = describe(cover, x, n, DomainKind::WideOpenU);
    const auto upV = describe(cover, x, n, DomainKind::AffinoidV);
    const auto dnU = describe(base, xb, n, DomainKind::WideOpenU);
    const auto dnV = describe(base, xb, n, DomainKind::AffinoidV);
    const auto mU = describe(base, xb, d * (n - 1) + 1, DomainKind::WideOpenU);
    const auto mV = describe(base, xb, d * n, DomainKind::AffinoidV);
    auto note = [&](const std::string &w) {
      if (lev.witnesses.size() < 6)
        lev.witnesses.push_back(w);
    };

    for (const auto &E : exts) {
      // pushforward: U^(n)_x and V^(n)_x land in the downstairs neighborhoods
      for (const auto *up : {&upU, &upV}) {
        const bool isU = up == &upU;
        for (const auto &pt : sample(*up, E, samples, ++s).points) {
          const ModelPoint q = project(base, pt);
          ++lev.samples;
          if (!member(isU ? dnU : dnV, q)) {
            (isU ? lev.contain_u : lev.contain_v) = false;
            note("pushforward leaves the downstairs neighborhood: " + pt.str());
          }
          if (!member(isU ? mU : mV, q)) {
            (isU ? lev.matched_u : lev.matched_v) = false;
            note("pushforward leaves the matched neighborhood: " + pt.str());
          }
        }
      }
      // lifts: every preimage of a downstairs sample must lie upstairs
      const Embedding emb = Embedding::make(m.base, E);
      auto lifts = [&](const ResidueDomain &down, const ResidueDomain &up, bool &flag,
                       const char *what) {
        for (const auto &q : sample(down, E, samples, ++s).points) {
          for (const auto &root : dth_roots(eval_g(m, q.coords[0], emb), d)) {
            ModelPoint pt{cover, emb, std::vector<Element>(2)};
            pt.coords[t] = q.coords[0];
            pt.coords[y] = root;
            if (!member(up, pt)) {
              flag = false;
              note(std::string(what) + " lift outside the upstairs neighborhood: " + pt.str());
            }
          }
        }
      };
      lifts(dnU, upU, lev.literal_u, "literal U");
      lifts(dnV, upV, lev.literal_v, "literal V");
      lifts(mU, upU, lev.matched_u, "matched U");
      lifts(mV, upV, lev.matched_v, "matched V");
    }
    rep.levels.push_back(std::move(lev));
  }

  if (rep.single_fiber) {
    auto scan = [&](auto ok) -> std::optional<int> {
      std::optional<int> n0;
      for (int i = budget; i >= 1; --i) {
        if (!ok(rep.levels[i - 1]))
          break;
        n0 = i;
      }
      return n0;
    };
    rep.n0_literal = scan([](const CoverLevel &l) { return l.literal_u && l.literal_v; });
    rep.n0_matched = scan([](const CoverLevel &l) { return l.matched_u && l.matched_v; });
  }
  return rep;
}

} // namespace padic
