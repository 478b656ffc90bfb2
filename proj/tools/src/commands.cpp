#include "padic_cli/commands.hpp"

#include "padic_cli/spec.hpp"

#include "CLI11.hpp"
#include "padic/audit.hpp"
#include "padic/errors.hpp"
#include "padic/galois.hpp"

#include <algorithm>
#include <functional>

namespace padic::cli {

using json = nlohmann::ordered_json;

std::string render(const json &report) { return report.dump(2) + "\n"; }

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfBudget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Outcome = std::pair<json, int>;

json rat(const Rational &r) { return {{"num", r.numerator()}, {"den", r.denominator()}}; }

json vec(const Vec &v) {
  json a = json::array();
  for (const auto &x : v)
    a.push_back(x.str());
  return a;
}

json mat(const Mat &m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j).str());
    a.push_back(row);
  }
  return a;
}

json qmat(const QMat &q) { return {{"shift", q.shift}, {"num", mat(q.num)}}; }

json point_json(const ModelPoint &x) {
  json c = json::array();
  for (const auto &v : x.coords)
    c.push_back(v.str());
  return {{"field", x.field()->describe()}, {"coords", c}};
}

std::string word(const GroupPresentation &g, const Word &w) { return word_str(w, g.gens()); }

Rational parse_rational(const std::string &s) {
  try {
    const auto slash = s.find('/');
    size_t used = 0;
    if (slash == std::string::npos) {
      const i64 a = std::stoll(s, &used);
      if (used != s.size())
        throw Usage("");
      return Rational(a);
    }
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    const i64 a = std::stoll(num, &used);
    if (used != num.size())
      throw Usage("");
    const i64 b = std::stoll(den, &used);
    if (used != den.size() || b == 0)
      throw Usage("");
    return Rational(a, b);
  } catch (const std::exception &) {
    throw Usage("expected a rational a/b, got '" + s + "'");
  }
}

struct Opts {
  // global
  std::optional<std::string> spec, json_out;
  std::uint64_t seed = 1;
  bool single_thread = false;
  std::optional<int> precision;
  // numeric parameters
  std::optional<int> e, n, k, p, m, budget, word_cap, samples, count, shift;
  std::optional<std::string> v, kind, ap, L;
  int pairs = 64;
  // spec selectors
  std::optional<std::string> audit, domain, point, ext, family, rep, other, pseudorep;
};

template <class T> T need(const std::optional<T> &o, const char *flag) {
  if (!o)
    throw Usage(std::string("missing ") + flag);
  return *o;
}

// ---- spec-driven state ----

class Session {
public:
  explicit Session(const Opts &o) : o_(o) {
    if (!o.spec)
      throw Usage("this command needs --spec FILE");
    f_ = load_spec(*o.spec, o.precision);
    if (!f_.audits.empty() || o.audit)
      audit_ = f_.audit(o.audit.value_or(""));
  }

  const SpecFile &file() const { return f_; }
  const AuditSpec &audit() const { return audit_; }
  int n() const { return o_.n.value_or(audit_.n); }
  int samples() const { return o_.samples.value_or(audit_.samples); }
  int word_cap() const { return o_.word_cap.value_or(audit_.word_cap); }
  int budget() const { return o_.budget.value_or(audit_.budget); }
  std::uint64_t seed() const { return o_.seed != 1 ? o_.seed : audit_.seed; }

  template <class M>
  const typename M::mapped_type &pick(const M &m, const std::optional<std::string> &flag,
                                      const std::string &fallback, const char *what,
                                      std::string *chosen = nullptr) const {
    std::string name;
    if (flag) {
      name = *flag;
      if (!m.count(name))
        throw SpecError("unresolved-reference", 0, 0, std::string("no ") + what + " named '" + name + "'");
    } else if (!fallback.empty() && m.count(fallback)) {
      name = fallback;
    } else if (m.size() == 1) {
      name = m.begin()->first;
    } else {
      throw Usage(std::string("choose a ") + what + " with --" + what);
    }
    if (chosen)
      *chosen = name;
    return m.at(name);
  }

  const ResidueDomain &domain(std::string *name = nullptr) const {
    return pick(f_.domains, o_.domain, audit_.domain, "domain", name);
  }
  const RepFamily &family(std::string *name = nullptr) const {
    return pick(f_.families, o_.family, audit_.target, "family", name);
  }
  const RepSpec &rep(std::string *name = nullptr) const {
    return pick(f_.reps, o_.rep, audit_.target, "rep", name);
  }
  const RepSpec &other(std::string *name = nullptr) const {
    if (!o_.other && audit_.other.empty())
      throw Usage("choose a second rep with --other");
    return pick(f_.reps, o_.other, audit_.other, "other", name);
  }
  const PseudorepSpec &pseudorep(std::string *name = nullptr) const {
    std::string fallback = audit_.target;
    if (!o_.pseudorep && !f_.pseudoreps.count(fallback))
      for (const auto &[pn, ps] : f_.pseudoreps)
        if (ps.source == audit_.target) {
          fallback = pn; // the trace of the audited rep
          break;
        }
    return pick(f_.pseudoreps, o_.pseudorep, fallback, "pseudorep", name);
  }

  std::vector<CtxPtr> extensions(const ResidueDomain &dom) const {
    std::vector<CtxPtr> out;
    if (o_.ext) {
      out.push_back(pick(f_.contexts, o_.ext, "", "ext"));
      return out;
    }
    for (const auto &x : audit_.extensions)
      out.push_back(f_.contexts.at(x));
    if (out.empty())
      out.push_back(dom.model->base);
    return out;
  }

  std::vector<std::pair<std::string, ModelPoint>> points() const {
    std::vector<std::pair<std::string, ModelPoint>> out;
    if (o_.point) {
      out.emplace_back(*o_.point, pick(f_.points, o_.point, "", "point"));
      return out;
    }
    for (const auto &x : audit_.points)
      out.emplace_back(x, f_.points.at(x));
    return out;
  }

private:
  const Opts &o_;
  SpecFile f_;
  AuditSpec audit_;
};

IntegralRep integral_of(const RepSpec &r) {
  if (r.integral)
    return *r.integral;
  const auto lat = stable_lattice(r.group, r.gens);
  if (!lat.bounded)
    throw OutOfBudget("orbit lattice did not stabilize: " + lat.note);
  return lat.rep;
}

// ---- bounds ----

Outcome bounds(const std::string &sub, const Opts &o) {
  json r;
  if (sub == "gamma") {
    const int e = need(o.e, "--e"), n = need(o.n, "--n");
    const std::string kind = o.kind.value_or("U");
    if (kind != "U" && kind != "V")
      throw Usage("--kind must be U or V");
    if (e < 1 || n < 1)
      throw Usage("--e and --n must be at least 1");
    r["gamma"] = kind == "U" ? gamma_exponent(e, n) : n * e;
    return {r, Pass};
  }
  if (sub == "alpha") {
    const int k = need(o.k, "--k"), p = need(o.p, "--p");
    r["k"] = k;
    r["p"] = p;
    r["alpha"] = alpha(k - 1, p);
    return {r, Pass};
  }
  if (sub == "crys-disc") {
    const int k = need(o.k, "--k"), p = need(o.p, "--p"), n = need(o.n, "--n");
    const Rational v = parse_rational(o.v.value_or("0"));
    const auto d = crystalline_congruence_disc(k, p, v, n);
    r["k"] = k;
    r["p"] = p;
    r["v"] = rat(v);
    r["n"] = n;
    r["alpha"] = alpha(k - 1, p);
    r["disc_radius"] = rat(d.disc_radius);
    r["pointwise_bound"] = rat(d.pointwise_bound);
    r["constancy_radius"] = rat(d.constancy_radius);
    r["uniform_threshold"] = rat(uniform_reduction_threshold(k, p, v, n, o.e.value_or(1)));
    return {r, Pass};
  }
  if (sub == "sst-bound") {
    const int k = need(o.k, "--k"), p = need(o.p, "--p"), n = need(o.n, "--n");
    r["k"] = k;
    r["p"] = p;
    r["n"] = n;
    r["bound"] = rat(semistable_congruence_bound(k, p, n));
    return {r, Pass};
  }
  if (sub == "weight") {
    const int m = need(o.m, "--m"), n = need(o.n, "--n");
    r["m"] = m;
    r["n"] = n;
    r["threshold"] = weight_direction_threshold(m, n);
    return {r, Pass};
  }
  throw Usage("unknown bounds subcommand");
}

// ---- domain ----

json domain_json(const ResidueDomain &d) {
  json r;
  r["kind"] = to_string(d.kind);
  r["n"] = d.n;
  r["model"] = d.model->describe();
  r["center"] = point_json(d.center);
  json g = json::array();
  for (const auto &s : d.gens)
    g.push_back(s.str());
  r["generators"] = g;
  if (d.closed) {
    json cs = json::array();
    for (const auto &c : d.closed->constraints)
      cs.push_back({{"var", d.model->vars[c.var]},
                    {"center", c.center.str()},
                    {"radius_vp", rat(c.radius_vp)},
                    {"strict", c.strict}});
    r["closed_form"] = {{"shape", d.closed->shape}, {"constraints", cs}};
  }
  r["summary"] = d.str();
  return r;
}

Outcome domain(const std::string &sub, const Opts &o) {
  Session s(o);
  std::string name;
  const auto &dom = s.domain(&name);
  json r;
  r["domain"] = name;
  if (sub == "describe") {
    r["description"] = domain_json(dom);
    return {r, Pass};
  }
  if (sub == "member") {
    const auto pts = s.points();
    if (pts.empty())
      throw Usage("domain member needs --point or audit points");
    int code = Pass;
    json a = json::array();
    for (const auto &[pn, pt] : pts) {
      const bool m1 = member(dom, pt), m2 = member_closed_form(dom, pt);
      if (m1 != m2)
        code = Fail; // the two membership paths disagree
      a.push_back({{"point", pn}, {"member", m1}, {"member_closed_form", m2}});
    }
    r["points"] = a;
    return {r, code};
  }
  if (sub == "sample") {
    json per = json::array();
    int code = Pass;
    for (const auto &E : s.extensions(dom)) {
      const auto res = sample(dom, E, o.count.value_or(s.samples()), s.seed());
      json pts = json::array();
      for (const auto &pt : res.points)
        pts.push_back(point_json(pt));
      if (res.exhausted)
        code = Inconclusive;
      per.push_back({{"field", E->describe()},
                     {"attempts", res.attempts},
                     {"no_root", res.no_root},
                     {"rejected", res.rejected},
                     {"exhausted", res.exhausted},
                     {"diagnostics", res.diagnostics},
                     {"points", pts}});
    }
    r["samples"] = per;
    return {r, code};
  }
  if (sub == "cover-compare") {
    const auto rep = cover_compare(dom.model, dom.center, s.budget(), s.extensions(dom),
                                   s.samples(), s.seed());
    r["single_fiber"] = rep.single_fiber;
    r["budget"] = rep.budget;
    json lv = json::array();
    for (const auto &l : rep.levels)
      lv.push_back({{"n", l.n},
                    {"samples", l.samples},
                    {"contain_u", l.contain_u},
                    {"contain_v", l.contain_v},
                    {"literal_u", l.literal_u},
                    {"literal_v", l.literal_v},
                    {"matched_u", l.matched_u},
                    {"matched_v", l.matched_v},
                    {"witnesses", l.witnesses}});
    r["levels"] = lv;
    r["n0_literal"] = rep.n0_literal ? json(*rep.n0_literal) : json(nullptr);
    r["n0_matched"] = rep.n0_matched ? json(*rep.n0_matched) : json(nullptr);
    r["certificate"] = rep.certificate ? json(*rep.certificate) : json(nullptr);
    r["containments_hold"] = rep.containments_hold();
    return {r, rep.containments_hold() ? Pass : Fail};
  }
  throw Usage("unknown domain subcommand");
}

// ---- family ----

json per_ext_json(const std::vector<FamilyExtensionAudit> &v) {
  json a = json::array();
  for (const auto &x : v)
    a.push_back({{"field", x.ext->describe()},
                 {"gamma", x.gamma},
                 {"sampled", x.sampled},
                 {"failures", x.failures},
                 {"undecided", x.undecided},
                 {"inconclusive", x.inconclusive},
                 {"diagnostics", x.diagnostics}});
  return a;
}

Outcome family(const std::string &sub, const Opts &o) {
  Session s(o);
  std::string name;
  const auto &fam = s.family(&name);
  json r;
  r["family"] = name;
  if (sub == "trace") {
    json t = json::object();
    for (const auto &w : check_words(fam.group, s.word_cap()))
      t[word(fam.group, w)] = fam.trace_of_word(w).str();
    r["word_cap"] = s.word_cap();
    r["traces"] = t;
    return {r, Pass};
  }
  if (sub == "trace-algebra") {
    const auto rep = trace_algebra_full(fam, s.n(), s.budget());
    r["n"] = rep.n;
    r["degree_budget"] = rep.degree_budget;
    r["verdict"] = to_string(rep.verdict);
    r["length"] = rep.length;
    r["max_length"] = rep.max_length;
    r["rounds"] = rep.rounds;
    const int code = rep.verdict == TraceAlgebraVerdict::Full     ? Pass
                     : rep.verdict == TraceAlgebraVerdict::Proper ? Fail
                                                                  : Inconclusive;
    return {r, code};
  }
  std::string dname;
  const auto &dom = s.domain(&dname);
  r["domain"] = dname;
  r["n"] = s.n();
  if (sub == "check-strict") {
    const auto ch = chart(dom);
    const auto v = strict_constancy_check(fam, ch, s.n());
    r["constant"] = v.constant;
    if (v.witness)
      r["witness"] = {{"generator", fam.group.gens()[v.witness->generator]},
                      {"row", v.witness->row},
                      {"col", v.witness->col},
                      {"monomial", monomial_str(*ch.target, v.witness->monomial)}};
    else {
      json cm = json::array();
      for (const auto &m : v.constant_model)
        cm.push_back(mat(m));
      r["constant_model"] = cm;
    }
    return {r, v.constant ? Pass : Fail};
  }
  if (sub == "audit") {
    const auto pts = s.points();
    FamilyAudit a;
    if (!pts.empty()) {
      std::vector<ModelPoint> ys;
      json names = json::array();
      for (const auto &[pn, pt] : pts) {
        ys.push_back(pt);
        names.push_back(pn);
      }
      r["mode"] = "points";
      r["points"] = names;
      a = family_constancy_audit(fam, dom.center, ys, s.n(), s.word_cap(), s.seed());
    } else {
      r["mode"] = "sampled";
      r["samples"] = s.samples();
      a = family_constancy_audit(fam, dom, s.n(), s.extensions(dom), s.samples(), s.word_cap(),
                                 s.seed());
    }
    r["word_cap"] = a.word_cap;
    r["per_extension"] = per_ext_json(a.per_ext);
    if (a.witness) {
      json w = {{"a", point_json(a.witness->a)},
                {"b", point_json(a.witness->b)},
                {"gamma", a.witness->gamma}};
      if (a.witness->trace_word)
        w["trace_word"] = word(fam.group, *a.witness->trace_word);
      w["iso"] = to_string(a.witness->iso.status);
      w["summary"] = a.witness->str(fam.group);
      r["witness"] = w;
    }
    const int code = !a.pass ? Fail : a.inconclusive ? Inconclusive : Pass;
    r["verdict"] = code == Pass ? "pass" : code == Fail ? "fail" : "inconclusive";
    return {r, code};
  }
  throw Usage("unknown family subcommand");
}

// ---- lattice ----

json factor_json(const FFactor &f) {
  json t = json::array();
  for (auto x : f.traces)
    t.push_back(static_cast<int>(x));
  return {{"dim", f.dim}, {"absolutely_irreducible", f.absolutely_irreducible}, {"traces", t}};
}

json iso_json(const IsoResult &iso) {
  json r = {{"status", to_string(iso.status)},
            {"module_generators", iso.module_generators},
            {"residue_rank", iso.residue_rank},
            {"candidates", iso.candidates},
            {"exhaustive", iso.exhaustive},
            {"certificate", iso.certificate}};
  if (iso.intertwiner)
    r["intertwiner"] = mat(*iso.intertwiner);
  return r;
}

int iso_code(IsoStatus s) {
  return s == IsoStatus::Isomorphic ? Pass : s == IsoStatus::NotIsomorphic ? Fail : Inconclusive;
}

Outcome lattice(const std::string &sub, const Opts &o) {
  Session s(o);
  std::string name;
  const auto &rs = s.rep(&name);
  json r;
  r["rep"] = name;
  if (sub == "stabilize") {
    const auto lat = stable_lattice(rs.group, rs.gens, o.budget.value_or(64));
    r["bounded"] = lat.bounded;
    r["iterations"] = lat.iterations;
    r["note"] = lat.note;
    if (lat.bounded) {
      r["certificate"] = qmat(lat.certificate);
      json g = json::object();
      for (int i = 0; i < lat.rep.group.ngens(); ++i)
        g[lat.rep.group.gens()[i]] = mat(lat.rep.gens[i]);
      r["generators"] = g;
    }
    return {r, lat.bounded ? Pass : Inconclusive};
  }
  const IntegralRep a = integral_of(rs);
  if (sub == "reduce") {
    const int m = o.m.value_or(s.n());
    const auto red = reduce_rep_mod(a, m);
    r["m"] = m;
    json g = json::object();
    for (int i = 0; i < red.group.ngens(); ++i)
      g[red.group.gens()[i]] = mat(red.gens[i]);
    r["generators"] = g;
    return {r, Pass};
  }
  if (sub == "semisimplify") {
    const auto ss = semisimplify_mod_p(reduce_rep_mod(a, 1), s.word_cap(), s.seed());
    json w = json::array(), fs = json::array();
    for (const auto &x : ss.signature_words)
      w.push_back(word(a.group, x));
    for (const auto &f : ss.factors)
      fs.push_back(factor_json(f));
    r["complete"] = ss.complete;
    r["signature_words"] = w;
    r["factors"] = fs;
    r["diagnostics"] = ss.diagnostics;
    return {r, ss.complete ? Pass : Inconclusive};
  }
  std::string bname;
  const IntegralRep b = integral_of(s.other(&bname));
  r["other"] = bname;
  r["n"] = s.n();
  if (sub == "iso") {
    const auto iso = iso_mod(reduce_rep_mod(a, s.n()), reduce_rep_mod(b, s.n()), s.seed());
    r["iso"] = iso_json(iso);
    return {r, iso_code(iso.status)};
  }
  if (sub == "carayol") {
    const auto c = carayol_audit(a, b, s.n(), s.word_cap(), s.seed());
    r["word_cap"] = c.word_cap;
    r["verdict"] = to_string(c.verdict);
    r["reason"] = c.reason;
    if (c.trace_witness)
      r["trace_witness"] = word(a.group, *c.trace_witness);
    r["iso"] = iso_json(c.iso);
    const int code = c.verdict == CarayolVerdict::Pass               ? Pass
                     : c.verdict == CarayolVerdict::TheoremViolation ? Fail
                                                                     : Inconclusive;
    return {r, code};
  }
  throw Usage("unknown lattice subcommand");
}

// ---- pseudorep ----

template <class V> json axioms_json(const PseudoRep2<V> &T, const AxiomReport &a) {
  json v = json::array();
  for (const auto &x : a.violations)
    v.push_back({{"kind", x.kind},
                 {"g", word(T.group, x.g)},
                 {"h", word(T.group, x.h)},
                 {"detail", x.detail}});
  return {{"pass", a.pass}, {"pairs_checked", a.pairs_checked}, {"violations", v}};
}

Outcome pseudorep(const std::string &sub, const Opts &o) {
  Session s(o);
  std::string name;
  const auto &ps = s.pseudorep(&name);
  json r;
  r["pseudorep"] = name;
  r["source"] = ps.source;
  r["word_cap"] = ps.word_cap;
  if (sub == "check") {
    const AxiomReport a = ps.over_ring ? axiom_check(*ps.over_ring, o.pairs, s.seed())
                                       : axiom_check(*ps.over_model, o.pairs, s.seed());
    r["axioms"] = ps.over_ring ? axioms_json(*ps.over_ring, a) : axioms_json(*ps.over_model, a);
    return {r, a.pass ? Pass : Fail};
  }
  if (sub == "kernel" || sub == "mf") {
    if (!ps.over_ring)
      throw Usage("pseudorep " + sub + " needs a pseudorep built from a rep");
    const auto &T = *ps.over_ring;
    if (!T.group.finite())
      throw Usage("pseudorep " + sub + " needs a finite group");
    if (sub == "mf") {
      const auto mf = residually_multiplicity_free(T, s.seed());
      json d = json::array();
      for (const auto &f : mf.decomposition)
        d.push_back(factor_json(f));
      r["verdict"] = to_string(mf.verdict);
      r["decomposition"] = d;
      r["repeated"] = mf.repeated ? factor_json(*mf.repeated) : json(nullptr);
      r["distinct_factors"] = mf.distinct_factors;
      r["note"] = mf.note;
      const int code = mf.verdict == MFVerdict::MultiplicityFree      ? Pass
                       : mf.verdict == MFVerdict::NotMultiplicityFree ? Fail
                                                                      : Inconclusive;
      return {r, code};
    }
    const int m = o.m.value_or(s.n());
    r["m"] = m;
    r["kernel_length"] = kernel_length(T, m);
    json gens = json::array();
    for (const auto &v : pseudorep_kernel(T, m))
      gens.push_back(vec(v));
    r["kernel_generators"] = gens;
    json gk = json::array();
    for (int h : group_kernel(T))
      gk.push_back(word(T.group, T.group.word_of(h)));
    r["group_kernel"] = gk;
    return {r, Pass};
  }
  if (sub == "audit" || sub == "strict") {
    if (!ps.over_model)
      throw Usage("pseudorep " + sub + " needs a pseudorep built from a family");
    std::string dname;
    const auto &dom = s.domain(&dname);
    r["domain"] = dname;
    r["n"] = s.n();
    if (sub == "strict") {
      const auto st = pseudorep_strict_constancy(*ps.over_model, chart(dom), s.n());
      r["constant"] = st.constant;
      if (st.witness)
        r["witness"] = word(ps.over_model->group, *st.witness);
      else {
        json vals = json::object();
        for (const auto &[w, x] : st.values)
          vals[word(ps.over_model->group, w)] = x.str();
        r["values"] = vals;
      }
      return {r, st.constant ? Pass : Fail};
    }
    const auto a = pseudorep_constancy_audit(*ps.over_model, dom, s.n(), s.extensions(dom),
                                             s.samples(), s.seed());
    r["words_checked"] = a.words_checked;
    if (a.failing_word)
      r["failing_word"] = word(ps.over_model->group, *a.failing_word);
    if (a.failing_audit && a.failing_audit->witness)
      r["witness"] = a.failing_audit->witness->str();
    const int code = !a.pass ? Fail : a.inconclusive ? Inconclusive : Pass;
    r["verdict"] = code == Pass ? "pass" : code == Fail ? "fail" : "inconclusive";
    return {r, code};
  }
  throw Usage("unknown pseudorep subcommand");
}

// ---- phimod ----

json character_json(const Character &c) {
  const auto reg = regularity(c);
  json r = {{"weight", c.weight},
            {"value_at_p", c.value_at_p.str()},
            {"vp_value_at_p", rat(c.value_at_p.vp())},
            {"regular", reg.regular}};
  if (!reg.regular)
    r["form"] = reg.form;
  return r;
}

json invariants_json(const PhiInvariants &inv) {
  return {{"n_squared_zero", inv.n_squared_zero},
          {"commutation", inv.commutation},
          {"vp_det", rat(inv.vp_det)},
          {"hodge_balanced", inv.hodge_balanced}};
}

Outcome phimod(const std::string &sub, const Opts &o) {
  const int k = need(o.k, "--k"), p = need(o.p, "--p");
  const int prec = o.precision.value_or(20);
  const bool sst = o.L.has_value() || sub == "build-sst";
  json r;
  r["k"] = k;
  r["p"] = p;
  auto crys_ctx = [&] { return Context::qp(p, prec); };
  auto ap = [&](const CtxPtr &ctx) { return parse_element(need(o.ap, "--ap"), ctx); };
  auto sst_module = [&](const CtxPtr &ctx) {
    const std::string L = need(o.L, "--L");
    std::optional<FieldValue> Linv;
    if (L != "inf")
      Linv = FieldValue{parse_element(L, ctx), o.shift.value_or(0)};
    return semistable_module(ctx, k, Linv);
  };
  if (sub == "params") {
    if (sst) {
      const auto ctx = semistable_context(p, prec);
      const auto [d1, d2] = semistable_parameters(ctx, k);
      r["kind"] = "semistable";
      r["field"] = ctx->describe();
      r["delta1"] = character_json(d1);
      r["delta2"] = character_json(d2);
      return {r, Pass};
    }
    const auto ctx = crys_ctx();
    r["kind"] = "crystalline";
    r["a_p"] = ap(ctx).str();
    try {
      const auto t = triangulation_parameters(k, ap(ctx));
      r["field"] = t.field->describe();
      r["phi1"] = t.phi1.str();
      r["phi2"] = t.phi2.str();
      r["delta1"] = character_json(t.delta1);
      r["delta2"] = character_json(t.delta2);
      return {r, Pass};
    } catch (const Unsupported &ex) {
      r["status"] = "needs-extension";
      r["reason"] = ex.what();
      return {r, Inconclusive};
    }
  }
  PhiModule2 M;
  if (sst) {
    M = sst_module(semistable_context(p, prec));
  } else if (sub == "build-crys" || sub == "wadm") {
    M = crystalline_module(k, ap(crys_ctx()));
  } else {
    throw Usage("unknown phimod subcommand");
  }
  r["kind"] = to_string(M.kind);
  r["field"] = M.ctx->describe();
  r["phi"] = mat(M.phi);
  r["N"] = mat(M.N);
  r["fil_line"] = vec(M.fil_line);
  if (sub == "build-crys" || sub == "build-sst") {
    const auto inv = invariants(M);
    r["invariants"] = invariants_json(inv);
    return {r, inv.ok() ? Pass : Fail};
  }
  const auto rep = weak_admissibility(M);
  r["verdict"] = to_string(rep.verdict);
  r["t_N"] = rat(rep.t_N);
  r["t_H"] = rat(rep.t_H);
  r["certificate_field"] = rep.field ? json(rep.field->describe()) : json(nullptr);
  json lines = json::array();
  for (const auto &l : rep.lines)
    lines.push_back({{"v", vec(l.v)},
                     {"eigenvalue", l.eigenvalue.str()},
                     {"slope", rat(l.slope)},
                     {"hodge", l.hodge},
                     {"ok", l.ok}});
  r["lines"] = lines;
  r["reason"] = rep.reason;
  const int code = rep.verdict == Admissibility::Admissible      ? Pass
                   : rep.verdict == Admissibility::NotAdmissible ? Fail
                                                                 : Inconclusive;
  return {r, code};
}

json error_json(const std::string &kind, const std::string &msg, int line = 0, int col = 0) {
  json e = {{"kind", kind}, {"message", msg}};
  if (line > 0) {
    e["line"] = line;
    e["column"] = col;
  }
  return {{"error", e}};
}

} // namespace

RunResult run(const std::vector<std::string> &args) {
  Opts o;
  CLI::App app{"exact p-adic congruence toolkit", "padic"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--spec", o.spec, "spec file");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--json", o.json_out, "also write the report to this file");
  app.add_flag("--single-thread", o.single_thread, "deterministic sequential execution");
  app.add_option("--precision", o.precision, "override context precision");

  struct Group {
    const char *name, *help;
    std::vector<std::string> subs;
    std::function<Outcome(const std::string &, const Opts &)> fn;
  };
  const std::vector<Group> groups = {
      {"bounds", "explicit radii", {"alpha", "crys-disc", "sst-bound", "gamma", "weight"}, bounds},
      {"domain", "residue domains", {"describe", "member", "sample", "cover-compare"}, domain},
      {"family", "matrix families", {"check-strict", "audit", "trace", "trace-algebra"}, family},
      {"lattice", "lattices and reductions",
       {"stabilize", "reduce", "iso", "semisimplify", "carayol"}, lattice},
      {"pseudorep", "pseudorepresentations", {"check", "kernel", "mf", "audit", "strict"},
       pseudorep},
      {"phimod", "filtered (phi, N)-modules", {"build-crys", "build-sst", "wadm", "params"},
       phimod},
  };
  for (const auto &g : groups) {
    auto *sc = app.add_subcommand(g.name, g.help);
    sc->fallthrough();
    sc->require_subcommand(1);
    sc->add_option("--e", o.e, "relative ramification index");
    sc->add_option("--n", o.n, "congruence level");
    sc->add_option("--k", o.k, "weight");
    sc->add_option("--p", o.p, "prime");
    sc->add_option("--m", o.m, "modulus exponent or weight-direction constant");
    sc->add_option("--v", o.v, "v_p(a_p) as a/b");
    sc->add_option("--kind", o.kind, "U or V");
    sc->add_option("--ap", o.ap, "a_p as an expression in p");
    sc->add_option("--L", o.L, "L-invariant as an expression in pi, or inf");
    sc->add_option("--shift", o.shift, "pi-power denominator of --L");
    sc->add_option("--budget", o.budget, "search budget");
    sc->add_option("--word-cap", o.word_cap, "word length cap");
    sc->add_option("--samples", o.samples, "samples per extension");
    sc->add_option("--count", o.count, "points to sample");
    sc->add_option("--pairs", o.pairs, "random pairs for axiom checks");
    sc->add_option("--audit", o.audit, "audit block");
    sc->add_option("--domain", o.domain, "domain block");
    sc->add_option("--point", o.point, "point block");
    sc->add_option("--ext", o.ext, "extension context");
    sc->add_option("--family", o.family, "family block");
    sc->add_option("--rep", o.rep, "rep block");
    sc->add_option("--other", o.other, "second rep block");
    sc->add_option("--pseudorep", o.pseudorep, "pseudorep block");
    for (const auto &leaf : g.subs)
      sc->add_subcommand(leaf)->fallthrough();
  }

  RunResult res;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp &) {
    res.help = app.help();
    return res;
  } catch (const CLI::ParseError &ex) {
    res.report = error_json("usage", ex.what());
    res.exit_code = UsageError;
    return res;
  }
  res.json_out = o.json_out;

  const Group *grp = nullptr;
  std::string leaf;
  for (const auto &g : groups) {
    auto *sc = app.get_subcommand(g.name);
    if (sc->parsed()) {
      grp = &g;
      for (auto *l : sc->get_subcommands())
        if (l->parsed())
          leaf = l->get_name();
    }
  }
  json report;
  report["command"] = std::string(grp->name) + " " + leaf;
  try {
    auto [r, code] = grp->fn(leaf, o);
    for (auto &[key, val] : r.items())
      report[key] = val;
    res.exit_code = code;
  } catch (const SpecError &ex) {
    report.update(error_json(ex.kind, ex.message, ex.line, ex.column));
    res.exit_code = UsageError;
  } catch (const Usage &ex) {
    report.update(error_json("usage", ex.what()));
    res.exit_code = UsageError;
  } catch (const OutOfBudget &ex) {
    report.update(error_json("budget", ex.what()));
    res.exit_code = Inconclusive;
  } catch (const PrecisionError &ex) {
    report.update(error_json("precision", ex.what()));
    res.exit_code = Inconclusive;
  } catch (const std::exception &ex) {
    report.update(error_json("invalid-input", ex.what()));
    res.exit_code = UsageError;
  }
  res.report = report;
  return res;
}

} // namespace padic::cli
