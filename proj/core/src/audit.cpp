#include "padic/audit.hpp"
#include "padic/errors.hpp"

namespace padic {

std::string AuditWitness::str() const {
  return "f" + a.str() + " = " + fa.str() + " but f" + b.str() + " = " + fb.str() +
         " (mod pi^" + std::to_string(gamma) + ")";
}

bool congruent_values(const Element &a, const Element &b, int gamma) {
  const Element d = a - b;
  if (d.precision() < gamma)
    throw PrecisionError("values known to pi^" + std::to_string(d.precision()) +
                         ", comparison needs pi^" + std::to_string(gamma));
  return d.reduce(gamma).is_zero();
}

namespace {

void check_one(const Series &f, const ModelPoint &center, const ModelPoint &y,
               ExtensionAudit &ea, FunctionAudit &rep) {
  const ModelPoint cx = embed_point(center, y.emb);
  ++ea.sampled;
  try {
    const Element fy = evaluate(f, y);
    const Element fx = evaluate(f, cx);
    if (ea.samples.size() < 16)
      ea.samples.push_back({y, fy.with_precision(std::min(fy.precision(), ea.gamma))});
    if (!congruent_values(fy, fx, ea.gamma)) {
      ++ea.failures;
      rep.pass = false;
      if (!rep.witness)
        rep.witness = AuditWitness{cx, y, fx, fy, ea.gamma};
    }
  } catch (const PrecisionError &e) {
    ++ea.undecided;
    rep.inconclusive = true;
    if (ea.diagnostics.size() < 4)
      ea.diagnostics.push_back(e.what());
  }
}

} // namespace

FunctionAudit pointwise_constancy_audit(const Series &f, const ResidueDomain &dom, int n,
                                        const std::vector<CtxPtr> &exts, int samples,
                                        std::uint64_t seed) {
  FunctionAudit rep;
  rep.n = n;
  std::uint64_t s = seed;
  for (const auto &E : exts) {
    const Embedding emb = Embedding::make(dom.model->base, E);
    ExtensionAudit ea;
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
      check_one(f, dom.center, y, ea, rep);
    rep.per_ext.push_back(std::move(ea));
  }
  return rep;
}

FunctionAudit pointwise_constancy_audit(const Series &f, const ModelPoint &center,
                                        const std::vector<ModelPoint> &points, int n) {
  FunctionAudit rep;
  rep.n = n;
  for (const auto &y : points) {
    ExtensionAudit *ea = nullptr;
    for (auto &e : rep.per_ext)
      if (e.ext.get() == y.emb.E.get())
        ea = &e;
    if (!ea) {
      rep.per_ext.push_back({});
      ea = &rep.per_ext.back();
      ea->ext = y.emb.E;
      ea->gamma = y.emb.gamma(n);
    }
    check_one(f, center, y, *ea, rep);
  }
  return rep;
}

} // namespace padic
