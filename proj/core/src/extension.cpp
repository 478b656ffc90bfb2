#include "padic/extension.hpp"
#include "padic/errors.hpp"

#include <random>
#include <stdexcept>

namespace padic {

namespace {

i64 balanced(i64 c, i64 m) { return c > m / 2 ? c - m : c; }

bool eis_matches(const Context &L, const Context &E, int r) {
  const auto &pl = L.eis_poly();
  const auto &pe = E.eis_poly();
  const int fE = E.f();
  for (int t = 0; t <= E.e(); ++t) {
    for (int j = 0; j < fE; ++j) {
      i64 want = 0;
      if (t % r == 0 && j < L.f())
        want = balanced(pl[t / r][j], L.modulus());
      if (balanced(pe[t][j], E.modulus()) != want)
        return false;
    }
  }
  return true;
}

} // namespace

Embedding Embedding::make(const CtxPtr &L, const CtxPtr &E) {
  if (L->p() != E->p())
    throw std::invalid_argument("extension must share the prime");
  if (E->e() % L->e() != 0)
    throw std::invalid_argument("e_L must divide e_E");
  const bool same_unram = L->unram_poly() == E->unram_poly();
  if (L->f() != 1 && !same_unram)
    throw Unsupported("embedding needs f_L = 1 or identical unramified polynomials");
  Embedding emb;
  emb.L = L;
  emb.E = E;
  emb.e_rel = E->e() / L->e();
  if (L->e() > 1 && !eis_matches(*L, *E, emb.e_rel))
    throw Unsupported("embedding needs E's Eisenstein polynomial to be P_L(x^r)");
  return emb;
}

Element Embedding::operator()(const Element &x) const {
  if (x.context().get() == E.get())
    return x;
  const int fL = L->f(), fE = E->f(), eL = L->e();
  std::vector<i64> c(E->degree(), 0);
  for (int i = 0; i < eL; ++i)
    for (int j = 0; j < fL; ++j)
      c[i * e_rel * fE + j] = x.coord(i, j);
  return Element(E, std::move(c), x.precision() * e_rel);
}

CongruenceAudit congruence_equiv_audit(const Embedding &emb, int n, std::int64_t samples,
                                       std::uint64_t seed) {
  CongruenceAudit rep;
  rep.n = n;
  rep.m = emb.gamma(n);
  if (n * emb.e_rel + 1 > emb.E->precision() || n + 1 > emb.L->precision())
    throw PrecisionError("congruence audit needs n*e_rel + 1 <= precision");
  rep.precision = emb.E->precision();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> vdist(0, n + 1);
  for (std::int64_t s = 0; s < samples; ++s) {
    const int v = vdist(rng);
    Element delta = (s % 17 == 0) ? Element::zero(emb.L)
                                  : Element::random_unit(emb.L, rng).mul_pi(v);
    Element beta = Element::random(emb.E, rng);
    Element alpha = beta + emb(delta);
    const Element diff = alpha - beta;
    const auto vE = diff.valuation();
    const bool lhs = vE.pi_units >= rep.m;
    // alpha - beta is the image of delta, so the right side is read in L
    const bool rhs = delta.valuation().pi_units >= n;
    ++rep.samples;
    if (lhs != rhs) {
      rep.pass = false;
      if (rep.failures.size() < 8)
        rep.failures.push_back({alpha, beta, lhs, rhs});
    }
  }
  return rep;
}

std::vector<Element> enumerate_residues(const CtxPtr &ctx, int n) {
  const int e = ctx->e(), f = ctx->f();
  std::vector<i64> radix(ctx->degree());
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j)
      radix[i * f + j] = ctx->p_power(ctx->coord_digits(i, n));
  std::vector<Element> out;
  std::vector<i64> cur(ctx->degree(), 0);
  for (;;) {
    out.emplace_back(ctx, cur, n);
    size_t k = 0;
    while (k < cur.size()) {
      if (++cur[k] < radix[k])
        break;
      cur[k] = 0;
      ++k;
    }
    if (k == cur.size())
      break;
  }
  return out;
}

InjectivityReport gamma_injectivity_check(const Embedding &emb, int n) {
  InjectivityReport rep;
  rep.n = n;
  rep.m = emb.gamma(n);
  rep.smaller_fails = rep.m == 1;
  for (const Element &x : enumerate_residues(emb.L, n)) {
    if (x.is_zero())
      continue;
    ++rep.checked;
    const int v = emb(x).valuation().pi_units;
    if (v >= rep.m && rep.injective) {
      rep.injective = false;
      rep.witness = x;
    }
    if (v >= rep.m - 1)
      rep.smaller_fails = true;
  }
  return rep;
}

} // namespace padic
