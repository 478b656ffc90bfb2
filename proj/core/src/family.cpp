#include "padic/family.hpp"

#include "padic/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace padic {

SMat SMat::identity(const ModelPtr &model, int d) {
  SMat m{model, d, std::vector<Series>(static_cast<size_t>(d) * d, Series::constant(model, 0))};
  for (int i = 0; i < d; ++i)
    m(i, i) = Series::constant(model, 1);
  return m;
}

SMat SMat::operator*(const SMat &o) const {
  if (d != o.d)
    throw std::invalid_argument("matrix sizes do not match");
  SMat z{model, d, std::vector<Series>(a.size(), Series::constant(model, 0))};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Series s = Series::constant(model, 0);
      for (int k = 0; k < d; ++k)
        s = s + (*this)(i, k) * o(k, j);
      z(i, j) = s;
    }
  return z;
}

SMat SMat::scale(const Series &s) const {
  SMat z = *this;
  for (auto &x : z.a)
    x = s * x;
  return z;
}

Series SMat::trace() const {
  Series s = Series::constant(model, 0);
  for (int i = 0; i < d; ++i)
    s = s + (*this)(i, i);
  return s;
}

namespace {

SMat minor_of(const SMat &m, int r, int c) {
  SMat z{m.model, m.d - 1, {}};
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j)
      if (i != r && j != c)
        z.a.push_back(m(i, j));
  return z;
}

} // namespace

Series SMat::det() const {
  if (d == 0)
    return Series::constant(model, 1);
  if (d == 1)
    return a[0];
  Series s = Series::constant(model, 0);
  for (int j = 0; j < d; ++j) {
    const Series t = (*this)(0, j) * minor_of(*this, 0, j).det();
    s = j % 2 ? s - t : s + t;
  }
  return s;
}

SMat SMat::adjugate() const {
  SMat z{model, d, std::vector<Series>(a.size(), Series::constant(model, 0))};
  if (d == 1) {
    z.a[0] = Series::constant(model, 1);
    return z;
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Series c = minor_of(*this, i, j).det();
      z(j, i) = (i + j) % 2 ? -c : c;
    }
  return z;
}

bool SMat::equals(const SMat &o) const {
  if (d != o.d)
    return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].equals(o.a[i]))
      return false;
  return true;
}

std::string SMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < d; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < d; ++j)
      os << (j ? ", " : "") << (*this)(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Series inverse_unit(const Series &f) {
  const ModelPtr &m = f.model();
  const Element c0 = f.constant_term();
  if (!c0.is_unit())
    throw DomainError("series has a non-unit constant term");
  for (const auto &[mono, c] : f.terms()) {
    if (m->open_degree(mono) > 0 || std::all_of(mono.begin(), mono.end(), [](int e) { return e == 0; }))
      continue;
    if (c.is_unit())
      throw DomainError("series is not a unit: bounded monomial " + monomial_str(*m, mono) +
                        " has a unit coefficient");
  }
  const Element ci = c0.inverse();
  // 1/f = ci * sum (-h ci)^k with h = f - c0
  const Series h = (f - Series::constant(m, c0)).scale(-ci);
  Series acc = Series::constant(m, 1), pw = Series::constant(m, 1);
  const int limit = f.precision() + m->degree_cap + 2;
  for (int k = 1; k <= limit && !pw.is_zero(); ++k) {
    pw = pw * h;
    acc = acc + pw;
  }
  if (!pw.is_zero())
    throw DomainError("inverse series did not converge at working precision");
  return acc.scale(ci);
}

RepFamily RepFamily::make(GroupPresentation group, ModelPtr model, std::vector<SMat> gens) {
  if (static_cast<int>(gens.size()) != group.ngens())
    throw std::invalid_argument("one matrix per generator is required");
  RepFamily f;
  f.group = std::move(group);
  f.model = std::move(model);
  f.dim = gens.at(0).d;
  for (const auto &g : gens) {
    if (g.d != f.dim || static_cast<int>(g.a.size()) != g.d * g.d)
      throw std::invalid_argument("generator matrices must be square of equal size");
    if (g.model.get() != f.model.get())
      throw std::invalid_argument("generator matrix over a different model");
  }
  f.gens = std::move(gens);
  // Determinants that are units only pointwise (closed discs) leave the
  // inverses unset; specialization still checks unit determinants.
  try {
    for (const auto &g : f.gens)
      f.inv.push_back(g.adjugate().scale(inverse_unit(g.det())));
  } catch (const DomainError &) {
    f.inv.clear();
  }
  const SMat I = SMat::identity(f.model, f.dim);
  for (size_t i = 0; i < f.inv.size(); ++i)
    if (!(f.gens[i] * f.inv[i]).equals(I))
      throw std::logic_error("series inverse check failed");
  if (f.group.finite())
    for (int a = 0; a < f.group.order(); ++a)
      for (int i = 0; i < f.group.ngens(); ++i) {
        const int b = f.group.mul(a, f.group.gen_elem(i));
        if (!(f.image(f.group.word_of(a)) * f.gens[i]).equals(f.image(f.group.word_of(b))))
          throw std::invalid_argument("family matrices violate the group table");
      }
  return f;
}

SMat RepFamily::image(const Word &w) const {
  SMat r = SMat::identity(model, dim);
  for (int l : w) {
    const int k = std::abs(l) - 1;
    if (k < 0 || k >= static_cast<int>(gens.size()))
      throw std::invalid_argument("letter outside the generators");
    if (l < 0 && inv.empty())
      throw DomainError("generator determinants are not units of the model algebra");
    r = r * (l > 0 ? gens[k] : inv[k]);
  }
  return r;
}

IntegralRep specialize(const RepFamily &fam, const ModelPoint &point) {
  std::vector<Mat> mats;
  for (const auto &g : fam.gens) {
    Mat m(point.field(), fam.dim, fam.dim);
    for (int i = 0; i < fam.dim; ++i)
      for (int j = 0; j < fam.dim; ++j)
        m(i, j) = evaluate(g(i, j), point);
    mats.push_back(std::move(m));
  }
  return IntegralRep::make(fam.group, std::move(mats));
}

StrictVerdict strict_constancy_check(const RepFamily &fam, const Recentering &chart, int n) {
  if (chart.source.get() != fam.model.get())
    throw std::invalid_argument("recentering is for a different model");
  StrictVerdict out;
  out.n = n;
  out.constant = true;
  for (int g = 0; g < static_cast<int>(fam.gens.size()); ++g) {
    Mat cm(fam.model->base, fam.dim, fam.dim);
    for (int i = 0; i < fam.dim; ++i)
      for (int j = 0; j < fam.dim; ++j) {
        const auto v = is_constant_mod(recenter_rescale(fam.gens[g](i, j), chart), n);
        if (!v.constant) {
          out.constant = false;
          if (!out.witness)
            out.witness = EntryWitness{g, i, j, v.witness.value_or(Monomial{})};
          continue;
        }
        cm(i, j) = v.value;
      }
    if (out.constant)
      out.constant_model.push_back(std::move(cm));
  }
  if (!out.constant)
    out.constant_model.clear();
  return out;
}

std::string FamilyWitness::str(const GroupPresentation &g) const {
  std::string s = "rho" + a.str() + " and rho" + b.str() + " differ mod pi^" + std::to_string(gamma);
  if (trace_word)
    s += ": traces differ on " + word_str(*trace_word, g.gens());
  else
    s += ": " + iso.certificate;
  return s;
}

namespace {

void compare_family(const RepFamily &fam, const ModelPoint &center, const ModelPoint &y,
                    int word_cap, std::uint64_t seed, FamilyExtensionAudit &ea,
                    FamilyAudit &rep) {
  ++ea.sampled;
  try {
    const ModelPoint cx = embed_point(center, y.emb);
    const IntegralRep rx = specialize(fam, cx), ry = specialize(fam, y);
    const int gamma = ea.gamma;
    FamilyWitness w{cx, y, gamma, std::nullopt, {}};
    for (const auto &word : check_words(fam.group, word_cap)) {
      const Element d = rx.trace(word) - ry.trace(word);
      if (d.precision() < gamma)
        throw PrecisionError("trace of " + word_str(word, fam.group.gens()) +
                             " known below pi^" + std::to_string(gamma));
      if (!d.reduce(gamma).is_zero()) {
        w.trace_word = word;
        break;
      }
    }
    if (!w.trace_word) {
      w.iso = iso_mod(reduce_rep_mod(rx, gamma), reduce_rep_mod(ry, gamma), seed);
      if (w.iso.status == IsoStatus::Isomorphic)
        return;
      if (w.iso.status == IsoStatus::Inconclusive) {
        ++ea.inconclusive;
        rep.inconclusive = true;
        if (ea.diagnostics.size() < 4)
          ea.diagnostics.push_back("iso search inconclusive at " + y.str());
        return;
      }
    }
    ++ea.failures;
    rep.pass = false;
    if (!rep.witness)
      rep.witness = std::move(w);
  } catch (const PrecisionError &e) {
    ++ea.undecided;
    rep.inconclusive = true;
    if (ea.diagnostics.size() < 4)
      ea.diagnostics.push_back(e.what());
  }
}

} // namespace

FamilyAudit family_constancy_audit(const RepFamily &fam, const ResidueDomain &dom, int n,
                                   const std::vector<CtxPtr> &exts, int samples, int word_cap,
                                   std::uint64_t seed) {
  if (dom.model.get() != fam.model.get())
    throw std::invalid_argument("domain is on a different model");
  FamilyAudit rep;
  rep.n = n;
  rep.word_cap = word_cap;
  std::uint64_t s = seed;
  for (const auto &E : exts) {
    const Embedding emb = Embedding::make(dom.model->base, E);
    FamilyExtensionAudit ea;
    ea.ext = E;
    ea.gamma = emb.gamma(n);
    if (ea.gamma > E->precision())
      throw PrecisionError("gamma = " + std::to_string(ea.gamma) + " exceeds the precision of " +
                           E->describe());
    const auto smp = sample(dom, E, samples, ++s);
    ea.diagnostics = smp.diagnostics;
    if (smp.points.empty())
      ea.diagnostics.push_back("no points of the domain sampled over " + E->describe());
    for (const auto &y : smp.points)
      compare_family(fam, dom.center, y, word_cap, s, ea, rep);
    rep.per_ext.push_back(std::move(ea));
  }
  return rep;
}

FamilyAudit family_constancy_audit(const RepFamily &fam, const ModelPoint &center,
                                   const std::vector<ModelPoint> &points, int n, int word_cap,
                                   std::uint64_t seed) {
  FamilyAudit rep;
  rep.n = n;
  rep.word_cap = word_cap;
  for (const auto &y : points) {
    FamilyExtensionAudit *ea = nullptr;
    for (auto &e : rep.per_ext)
      if (e.ext.get() == y.emb.E.get())
        ea = &e;
    if (!ea) {
      rep.per_ext.push_back({});
      ea = &rep.per_ext.back();
      ea->ext = y.emb.E;
      ea->gamma = y.emb.gamma(n);
    }
    compare_family(fam, center, y, word_cap, seed, *ea, rep);
  }
  return rep;
}

std::string to_string(TraceAlgebraVerdict v) {
  switch (v) {
  case TraceAlgebraVerdict::Full:
    return "full";
  case TraceAlgebraVerdict::Proper:
    return "proper";
  default:
    return "inconclusive";
  }
}

namespace {

void monomials_up_to(int nvars, int budget, Monomial &cur, int var,
                     std::vector<Monomial> &out) {
  if (var == nvars) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int v = 0; v < var; ++v)
    used += cur[v];
  for (int e = 0; used + e <= budget; ++e) {
    cur[var] = e;
    monomials_up_to(nvars, budget, cur, var + 1, out);
  }
  cur[var] = 0;
}

} // namespace

TraceAlgebraReport trace_algebra_full(const RepFamily &fam, int n, int degree_budget,
                                      int round_budget) {
  const ModelPtr &m = fam.model;
  if (m->rel.kind != Relation::Kind::None)
    throw Unsupported("trace_algebra_full needs a disc model");
  TraceAlgebraReport rep;
  rep.n = n;
  rep.degree_budget = degree_budget;
  std::vector<Monomial> monos;
  Monomial cur(m->nvars(), 0);
  monomials_up_to(m->nvars(), degree_budget, cur, 0, monos);
  std::map<Monomial, int> index;
  for (size_t i = 0; i < monos.size(); ++i)
    index[monos[i]] = static_cast<int>(i);
  const int D = static_cast<int>(monos.size());
  rep.max_length = n * D;
  const CtxPtr &L = m->base;

  auto to_vec = [&](const Series &s) {
    if (s.precision() < n)
      throw PrecisionError("entry known below pi^" + std::to_string(n));
    Vec v(D, Element::zero(L).with_precision(n));
    for (const auto &[mono, c] : s.terms()) {
      auto it = index.find(mono);
      if (it != index.end())
        v[it->second] = c.reduce(n);
    }
    return v;
  };
  auto product = [&](const Vec &a, const Vec &b) {
    Vec v(D, Element::zero(L).with_precision(n));
    for (int i = 0; i < D; ++i) {
      if (a[i].is_zero())
        continue;
      for (int j = 0; j < D; ++j) {
        if (b[j].is_zero())
          continue;
        Monomial mono = monos[i];
        for (size_t k = 0; k < mono.size(); ++k)
          mono[k] += monos[j][k];
        auto it = index.find(mono);
        if (it != index.end())
          v[it->second] = (v[it->second] + a[i] * b[j]).with_precision(n);
      }
    }
    return v;
  };
  std::vector<Vec> span;
  auto length_with = [&](const Vec &extra) {
    Mat M(L, D, static_cast<int>(span.size()) + 1);
    for (size_t c = 0; c < span.size(); ++c)
      for (int r = 0; r < D; ++r)
        M(r, static_cast<int>(c)) = span[c][r];
    for (int r = 0; r < D; ++r)
      M(r, static_cast<int>(span.size())) = extra[r];
    return chain_length(M.with_precision(n), n);
  };
  auto offer = [&](const Vec &v) {
    if (rep.length == rep.max_length)
      return false;
    const int len = length_with(v);
    if (len > rep.length) {
      span.push_back(v);
      rep.length = len;
      return true;
    }
    return false;
  };
  offer(to_vec(Series::constant(m, 1)));
  for (const auto &mat : fam.gens)
    for (const auto &e : mat.a)
      offer(to_vec(e));
  for (const auto &mat : fam.inv)
    for (const auto &e : mat.a)
      offer(to_vec(e));
  bool stable = false;
  for (rep.rounds = 1; rep.rounds <= round_budget; ++rep.rounds) {
    bool grew = false;
    const auto snapshot = span;
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i; j < snapshot.size(); ++j)
        grew = offer(product(snapshot[i], snapshot[j])) || grew;
    if (!grew || rep.length == rep.max_length) {
      stable = true;
      break;
    }
  }
  if (rep.length == rep.max_length)
    rep.verdict = TraceAlgebraVerdict::Full;
  else
    rep.verdict = stable ? TraceAlgebraVerdict::Proper : TraceAlgebraVerdict::Inconclusive;
  return rep;
}

} // namespace padic
