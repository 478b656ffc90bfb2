#include "padic/pseudorep.hpp"

#include <algorithm>

namespace padic {

namespace {

std::vector<Word> stored_words(const GroupPresentation &g, int cap) {
  return g.words_up_to(g.finite() ? 0 : 2 * cap);
}

} // namespace

PseudoRep2<Element> from_rep_trace(const IntegralRep &rep, int word_cap) {
  if (rep.dim != 2)
    throw std::invalid_argument("pseudorepresentations are two-dimensional");
  require_odd(rep.ctx->p());
  PseudoRep2<Element> T{rep.group, word_cap, {}};
  for (const auto &w : stored_words(rep.group, word_cap))
    T.values[w] = rep.trace(w);
  return T;
}

PseudoRep2<Series> from_rep_trace(const RepFamily &fam, int word_cap) {
  if (fam.dim != 2)
    throw std::invalid_argument("pseudorepresentations are two-dimensional");
  require_odd(fam.model->base->p());
  PseudoRep2<Series> T{fam.group, word_cap, {}};
  for (const auto &w : stored_words(fam.group, word_cap))
    T.values[w] = fam.trace_of_word(w);
  return T;
}

PseudoRep2<Element> specialize(const PseudoRep2<Series> &T, const ModelPoint &point) {
  PseudoRep2<Element> out{T.group, T.word_cap, {}};
  for (const auto &[w, v] : T.values)
    out.values[w] = evaluate(v, point);
  return out;
}

std::vector<Element> element_values(const PseudoRep2<Element> &T, int m) {
  if (!T.group.finite())
    throw std::invalid_argument("element values need a finite group");
  std::vector<Element> v;
  for (int g = 0; g < T.group.order(); ++g)
    v.push_back(T.T(T.group.word_of(g)).reduce(m));
  return v;
}

namespace {

Mat trace_form(const PseudoRep2<Element> &T, int m) {
  const auto vals = element_values(T, m);
  const int n = T.group.order();
  Mat B(vals[0].context(), n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      B(x, y) = vals[T.group.mul(x, y)];
  return B;
}

} // namespace

std::vector<Vec> pseudorep_kernel(const PseudoRep2<Element> &T, int m) {
  require_odd(T.T({}).context()->p());
  return chain_kernel(trace_form(T, m), m);
}

int kernel_length(const PseudoRep2<Element> &T, int m) {
  return T.group.order() * m - chain_length(trace_form(T, m), m);
}

std::vector<int> group_kernel(const PseudoRep2<Element> &T) {
  const auto &G = T.group;
  std::vector<int> out;
  for (int h = 0; h < G.order(); ++h) {
    bool ok = true;
    for (int g = 0; g < G.order() && ok; ++g)
      ok = T.T(G.word_of(G.mul(g, h))).equals(T.T(G.word_of(g)));
    if (ok)
      out.push_back(h);
  }
  return out;
}

std::string to_string(MFVerdict v) {
  switch (v) {
  case MFVerdict::MultiplicityFree:
    return "multiplicity-free";
  case MFVerdict::NotMultiplicityFree:
    return "not-multiplicity-free";
  default:
    return "inconclusive";
  }
}

MFReport residually_multiplicity_free(const PseudoRep2<Element> &T, std::uint64_t seed) {
  const auto &G = T.group;
  if (!G.finite())
    throw std::invalid_argument("multiplicity-freeness is decided on finite groups");
  if (G.order() > 24)
    throw Unsupported("regular-representation route is limited to |G| <= 24");
  const CtxPtr ctx = T.T({}).context();
  require_odd(ctx->p());
  Fq F(ctx);
  const int n = G.order();
  std::vector<FMat> reg;
  for (int i = 0; i < G.ngens(); ++i) {
    FMat L(n, n);
    for (int h = 0; h < n; ++h)
      L(G.mul(G.gen_elem(i), h), h) = 1;
    reg.push_back(L);
  }
  std::vector<Word> words;
  for (int g = 0; g < n; ++g)
    words.push_back(G.word_of(g));
  auto fs = composition_factors(F, reg, G, words, seed);
  MFReport rep;
  std::vector<FFactor> distinct;
  for (auto &f : fs.factors)
    if (distinct.empty() || distinct.back().dim != f.dim || distinct.back().traces != f.traces)
      distinct.push_back(f);
  rep.distinct_factors = static_cast<int>(distinct.size());
  std::vector<Fq::E> target;
  for (int g = 0; g < n; ++g)
    target.push_back(F.reduce(T.T(words[g])));
  auto sum_matches = [&](const std::vector<const FFactor *> &fac) {
    for (int g = 0; g < n; ++g) {
      Fq::E s = 0;
      for (const auto *f : fac)
        s = F.add(s, f->traces[g]);
      if (s != target[g])
        return false;
    }
    return true;
  };
  std::optional<FFactor> repeated;
  for (size_t i = 0; i < distinct.size(); ++i) {
    const auto &a = distinct[i];
    if (a.dim == 2 && sum_matches({&a}) && a.absolutely_irreducible) {
      rep.verdict = MFVerdict::MultiplicityFree;
      rep.decomposition = {a};
      return rep;
    }
    if (a.dim != 1)
      continue;
    for (size_t j = i; j < distinct.size(); ++j) {
      const auto &b = distinct[j];
      if (b.dim != 1 || !sum_matches({&a, &b}))
        continue;
      if (i == j) {
        repeated = a;
        continue;
      }
      rep.verdict = MFVerdict::MultiplicityFree;
      rep.decomposition = {a, b};
      return rep;
    }
  }
  if (repeated) {
    rep.verdict = MFVerdict::NotMultiplicityFree;
    rep.decomposition = {*repeated, *repeated};
    rep.repeated = repeated;
    rep.note = "the mod-pi trace is twice a single character";
    return rep;
  }
  rep.note = fs.complete ? "no sum of residue-field irreducible traces matches; an extension of "
                           "the residue field may be needed"
                         : "regular representation not fully split within budget";
  return rep;
}

PseudorepAudit pseudorep_constancy_audit(const PseudoRep2<Series> &T, const ResidueDomain &dom,
                                         int n, const std::vector<CtxPtr> &exts, int samples,
                                         std::uint64_t seed) {
  PseudorepAudit rep;
  rep.n = n;
  rep.word_cap = T.word_cap;
  for (const auto &w : T.base_words()) {
    auto fa = pointwise_constancy_audit(T.T(w), dom, n, exts, samples, seed);
    ++rep.words_checked;
    rep.inconclusive = rep.inconclusive || fa.inconclusive;
    if (!fa.pass) {
      rep.pass = false;
      rep.failing_word = w;
      rep.failing_audit = std::move(fa);
      break;
    }
  }
  return rep;
}

PseudorepStrict pseudorep_strict_constancy(const PseudoRep2<Series> &T, const Recentering &chart,
                                           int n) {
  PseudorepStrict out;
  out.n = n;
  for (const auto &w : T.base_words()) {
    const auto v = is_constant_mod(recenter_rescale(T.T(w), chart), n);
    if (!v.constant) {
      out.constant = false;
      out.witness = w;
      out.values.clear();
      return out;
    }
    out.values[w] = v.value;
  }
  return out;
}

} // namespace padic
