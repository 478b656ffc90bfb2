#include "padic/lattice.hpp"

#include "padic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace padic {

namespace {

Element exact_quotient(const Element &a, const Element &b) {
  const int vb = b.valuation().pi_units;
  if (a.is_zero())
    return Element::zero(a.context()).with_precision(std::max(0, a.precision() - vb));
  return a.div_pi(vb) * b.div_pi(vb).inverse();
}

Mat word_product(const CtxPtr &ctx, int d, const Word &w, const std::vector<Mat> &g,
                 const std::vector<Mat> &ginv) {
  Mat r = Mat::identity(ctx, d);
  for (int l : w) {
    const int k = std::abs(l) - 1;
    if (k < 0 || k >= static_cast<int>(g.size()))
      throw std::invalid_argument("letter outside the generators");
    r = r * (l > 0 ? g[k] : ginv[k]);
  }
  return r;
}

} // namespace

IntegralRep IntegralRep::make(GroupPresentation group, std::vector<Mat> gens) {
  if (static_cast<int>(gens.size()) != group.ngens())
    throw std::invalid_argument("one matrix per generator is required");
  IntegralRep r;
  r.group = std::move(group);
  r.dim = gens.at(0).rows();
  r.ctx = gens[0].context();
  for (const auto &g : gens) {
    if (g.rows() != r.dim || g.cols() != r.dim)
      throw std::invalid_argument("generator matrices must be square of equal size");
    if (!g.det().is_unit())
      throw DomainError("generator determinant is not a unit");
    r.inv.push_back(g.inverse());
  }
  r.gens = std::move(gens);
  if (r.group.finite()) {
    // Cayley-graph consistency: rho(word(a)) * rho(s) = rho(word(a s)).
    for (int a = 0; a < r.group.order(); ++a)
      for (int i = 0; i < r.group.ngens(); ++i) {
        const int b = r.group.mul(a, r.group.gen_elem(i));
        if (!(r.image(r.group.word_of(a)) * r.gens[i]).equals(r.image(r.group.word_of(b))))
          throw std::invalid_argument("generator matrices violate the group table");
      }
  }
  return r;
}

Mat IntegralRep::image(const Word &w) const { return word_product(ctx, dim, w, gens, inv); }

Mat ResidueRep::image(const Word &w) const {
  std::vector<Mat> inv;
  for (const auto &g : gens)
    inv.push_back(g.inverse().with_precision(m));
  return word_product(ctx, dim, w, gens, inv).with_precision(m);
}

ResidueRep reduce_rep_mod(const IntegralRep &rep, int m) {
  if (m < 1)
    throw std::invalid_argument("modulus exponent must be positive");
  ResidueRep r{rep.group, rep.dim, m, rep.ctx, {}};
  for (const auto &g : rep.gens)
    r.gens.push_back(g.reduce(m));
  return r;
}

std::vector<Word> check_words(const GroupPresentation &g, int cap) {
  return g.words_up_to(g.finite() ? 0 : cap);
}

namespace {

// Column basis of the O-span of the columns of M (full row rank d).
Mat hermite_columns(Mat M) {
  const int d = M.rows(), k = M.cols();
  for (int i = 0; i < d; ++i) {
    int sel = -1, best = 0;
    for (int j = i; j < k; ++j) {
      if (M(i, j).is_zero())
        continue;
      const int v = M(i, j).valuation().pi_units;
      if (sel < 0 || v < best) {
        sel = j;
        best = v;
      }
    }
    if (sel < 0)
      throw PrecisionError("lattice generators are not of full rank at working precision");
    if (sel != i)
      for (int r = 0; r < d; ++r)
        std::swap(M(r, i), M(r, sel));
    for (int j = i + 1; j < k; ++j) {
      if (M(i, j).is_zero())
        continue;
      const Element f = exact_quotient(M(i, j), M(i, i));
      for (int r = 0; r < d; ++r)
        M(r, j) -= f * M(r, i);
    }
  }
  Mat B(M.context(), d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      B(r, c) = M(r, c);
  return B;
}

int volume(const Mat &B, int shift) {
  const Element d = B.det();
  if (d.is_zero())
    throw PrecisionError("lattice basis is singular at working precision");
  return d.valuation().pi_units - B.rows() * shift;
}

} // namespace

StableLattice stable_lattice(const GroupPresentation &group, const std::vector<QMat> &rho,
                             int budget) {
  if (rho.empty() || static_cast<int>(rho.size()) != group.ngens())
    throw std::invalid_argument("one matrix per generator is required");
  const CtxPtr ctx = rho[0].num.context();
  const int d = rho[0].rows();
  std::vector<QMat> ops;
  for (const auto &r : rho)
    ops.push_back(r.normalized());
  if (!group.finite())
    for (const auto &r : rho)
      ops.push_back(r.inverse());
  int max_shift = 0;
  for (const auto &o : ops)
    max_shift = std::max(max_shift, o.shift);

  StableLattice out;
  Mat B = Mat::identity(ctx, d);
  int T = 0;
  int vol = 0;
  for (int it = 1; it <= budget; ++it) {
    const int T2 = T + max_shift;
    Mat gens(ctx, d, d * (1 + static_cast<int>(ops.size())));
    auto put = [&](const Mat &blk, int slot) {
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          gens(r, slot * d + c) = blk(r, c);
    };
    put(B.mul_pi(T2 - T), 0);
    for (size_t i = 0; i < ops.size(); ++i)
      put((ops[i].num * B).mul_pi(T2 - T - ops[i].shift), static_cast<int>(i) + 1);
    Mat B2 = hermite_columns(gens);
    int T3 = T2;
    while (T3 > 0 && B2.min_valuation() >= 1) {
      B2 = B2.div_pi(1);
      --T3;
    }
    const int vol2 = volume(B2, T3);
    B = B2;
    T = T3;
    out.iterations = it;
    if (vol2 == vol) {
      out.bounded = true;
      break;
    }
    vol = vol2;
  }
  if (!out.bounded) {
    out.note = "orbit lattice did not stabilize within " + std::to_string(budget) +
               " rounds; unbounded at working precision";
    out.certificate = {B, T};
    return out;
  }
  out.certificate = {B, T};
  // C^-1 A C = pi^-(s+k) u^-1 adj(B) num B, det B = pi^k u
  const Element det = B.det();
  const int k = det.valuation().pi_units;
  const Element uinv = det.div_pi(k).inverse();
  const Mat adj = B.adjugate();
  std::vector<Mat> conj;
  for (const auto &r : ops) {
    if (static_cast<int>(conj.size()) == group.ngens())
      break;
    QMat c{(adj * r.num * B).scale(uinv), r.shift + k};
    conj.push_back(c.to_integral());
  }
  out.rep = IntegralRep::make(group, std::move(conj));
  return out;
}

std::string to_string(IsoStatus s) {
  switch (s) {
  case IsoStatus::Isomorphic:
    return "isomorphic";
  case IsoStatus::NotIsomorphic:
    return "not-isomorphic";
  default:
    return "inconclusive";
  }
}

IsoResult iso_mod(const ResidueRep &a, const ResidueRep &b, std::uint64_t seed, long budget) {
  if (a.dim != b.dim || a.m != b.m || a.gens.size() != b.gens.size())
    throw std::invalid_argument("iso_mod needs the same group, dimension and modulus");
  if (!a.ctx->same_field(*b.ctx))
    throw std::invalid_argument("iso_mod needs representations over the same field");
  const int d = a.dim, m = a.m, dd = d * d;
  const int ng = static_cast<int>(a.gens.size());
  const CtxPtr ctx = a.ctx;
  Mat S(ctx, ng * dd, dd);
  for (int g = 0; g < ng; ++g)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const int row = g * dd + i * d + j;
        for (int k = 0; k < d; ++k) {
          S(row, i * d + k) += a.gens[g](k, j);
          S(row, k * d + j) -= b.gens[g](i, k);
        }
      }
  IsoResult res;
  const auto gens = chain_kernel(S.with_precision(m), m);
  res.module_generators = static_cast<int>(gens.size());
  Fq F(ctx);
  FSpan span(F, dd);
  std::vector<Vec> basis;
  for (const auto &g : gens) {
    std::vector<Fq::E> v;
    for (const auto &x : g)
      v.push_back(F.reduce(x));
    if (span.add(v))
      basis.push_back(g);
  }
  const int r = static_cast<int>(basis.size());
  res.residue_rank = r;
  if (r == 0) {
    res.status = IsoStatus::NotIsomorphic;
    res.exhaustive = true;
    res.certificate = "every intertwiner vanishes mod pi";
    return res;
  }
  const auto &red = span.basis();
  const int q = F.q();
  const double space = std::pow(static_cast<double>(q), r);
  res.exhaustive = space <= static_cast<double>(1L << 20) && space <= static_cast<double>(budget) + 1;
  std::mt19937_64 rng(seed);
  std::vector<Fq::E> coeff(r, 0);
  auto try_coeff = [&]() -> bool {
    FMat X(d, d);
    for (int t = 0; t < r; ++t) {
      if (!coeff[t])
        continue;
      for (int e = 0; e < dd; ++e)
        X.a[e] = F.add(X.a[e], F.mul(coeff[t], red[t][e]));
    }
    ++res.candidates;
    return fdet(F, X) != 0;
  };
  bool found = false;
  if (res.exhaustive) {
    const long total = static_cast<long>(space);
    for (long idx = 1; idx < total && !found; ++idx) {
      long x = idx;
      for (int t = 0; t < r; ++t, x /= q)
        coeff[t] = static_cast<Fq::E>(x % q);
      found = try_coeff();
    }
  } else {
    std::uniform_int_distribution<int> dist(0, q - 1);
    for (long it = 0; it < budget && !found; ++it) {
      for (auto &c : coeff)
        c = static_cast<Fq::E>(dist(rng));
      found = try_coeff();
    }
  }
  if (!found) {
    res.status = res.exhaustive ? IsoStatus::NotIsomorphic : IsoStatus::Inconclusive;
    res.certificate = res.exhaustive
                          ? "all " + std::to_string(res.candidates) +
                                " residue combinations of the solution module are singular"
                          : "random search exhausted its budget of " + std::to_string(budget);
    return res;
  }
  Mat X(ctx, d, d);
  for (int t = 0; t < r; ++t) {
    const Element c = F.lift(coeff[t]);
    for (int e = 0; e < dd; ++e)
      X(e / d, e % d) += c * basis[t][e];
  }
  X = X.with_precision(m);
  for (int g = 0; g < ng; ++g)
    if (!(X * a.gens[g]).with_precision(m).equals((b.gens[g] * X).with_precision(m)))
      throw std::logic_error("iso_mod produced a non-intertwining matrix");
  res.status = IsoStatus::Isomorphic;
  res.intertwiner = X;
  res.certificate = "unit-determinant intertwiner";
  return res;
}

// ---- residue-field splitting ----

FMat fimage(const Fq &F, const std::vector<FMat> &gens, const Word &w) {
  const int d = gens.at(0).r;
  FMat r = FMat::identity(d);
  for (int l : w) {
    const auto &g = gens.at(std::abs(l) - 1);
    if (l > 0) {
      r = fmul(F, r, g);
    } else {
      auto gi = finverse(F, g);
      if (!gi)
        throw std::domain_error("singular generator over the residue field");
      r = fmul(F, r, *gi);
    }
  }
  return r;
}

int commutant_dim(const Fq &F, const std::vector<FMat> &gens) {
  const int d = gens.at(0).r, dd = d * d;
  FMat S(static_cast<int>(gens.size()) * dd, dd);
  for (size_t g = 0; g < gens.size(); ++g)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const int row = static_cast<int>(g) * dd + i * d + j;
        for (int k = 0; k < d; ++k) {
          S(row, i * d + k) = F.add(S(row, i * d + k), gens[g](k, j));
          S(row, k * d + j) = F.sub(S(row, k * d + j), gens[g](i, k));
        }
      }
  return dd - frank(F, S);
}

namespace {

std::vector<Fq::E> fapply(const Fq &F, const FMat &g, const std::vector<Fq::E> &v) {
  std::vector<Fq::E> out(g.r, 0);
  for (int i = 0; i < g.r; ++i)
    for (int j = 0; j < g.c; ++j)
      if (v[j])
        out[i] = F.add(out[i], F.mul(g(i, j), v[j]));
  return out;
}

FSpan spin(const Fq &F, const std::vector<FMat> &gens, const std::vector<Fq::E> &v) {
  const int d = gens[0].r;
  FSpan S(F, d);
  S.add(v);
  for (int idx = 0; idx < S.dim() && S.dim() < d; ++idx) {
    const auto w = S.basis()[idx];
    for (const auto &g : gens)
      S.add(fapply(F, g, w));
  }
  return S;
}

enum class SplitOutcome { Found, Irreducible, GaveUp };

// Returns rows spanning a proper nonzero submodule.
SplitOutcome find_submodule(const Fq &F, const std::vector<FMat> &gens, std::mt19937_64 &rng,
                            long &budget, FMat &sub) {
  const int d = gens[0].r, q = F.q();
  if (d == 1)
    return SplitOutcome::Irreducible;
  std::vector<FMat> pool = gens, gensT;
  for (const auto &g : gens)
    gensT.push_back(ftranspose(g));
  std::uniform_int_distribution<int> coef(0, q - 1);
  const int attempts = 48;
  for (int att = 0; att < attempts && budget > 0; ++att) {
    if (pool.size() < 16) {
      std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
      pool.push_back(fmul(F, pool[pick(rng)], pool[pick(rng)]));
    }
    FMat theta(d, d);
    for (const auto &a : pool)
      theta = fadd(F, theta, fscale(F, static_cast<Fq::E>(coef(rng)), a));
    int best_nul = d + 1;
    FMat best;
    for (int lam = 0; lam < q; ++lam) {
      FMat M = theta;
      for (int i = 0; i < d; ++i)
        M(i, i) = F.sub(M(i, i), static_cast<Fq::E>(lam));
      const int nul = d - frank(F, M);
      if (nul >= 1 && nul < best_nul) {
        best_nul = nul;
        best = M;
      }
    }
    if (best_nul > d)
      continue;
    // projective points of the kernel; large kernels wait for a better theta
    const double count = std::pow(static_cast<double>(q), best_nul);
    if (count > 50000 && att + 1 < attempts)
      continue;
    bool complete = true;
    auto scan = [&](const FMat &N, const std::vector<FMat> &G, bool dual) -> bool {
      const int k = N.c;
      const long total = static_cast<long>(std::pow(static_cast<double>(q), k));
      for (long idx = 1; idx < total; ++idx) {
        std::vector<Fq::E> c(k);
        long x = idx;
        int first = -1;
        for (int t = 0; t < k; ++t, x /= q) {
          c[t] = static_cast<Fq::E>(x % q);
          if (first < 0 && c[t])
            first = t;
        }
        if (c[first] != 1)
          continue;
        if (--budget < 0) {
          complete = false;
          return false;
        }
        std::vector<Fq::E> v(d, 0);
        for (int t = 0; t < k; ++t)
          for (int i = 0; i < d; ++i)
            v[i] = F.add(v[i], F.mul(c[t], N(i, t)));
        FSpan W = spin(F, G, v);
        if (W.dim() < d) {
          FMat rows(W.dim(), d);
          for (int r = 0; r < W.dim(); ++r)
            for (int j = 0; j < d; ++j)
              rows(r, j) = W.basis()[r][j];
          if (!dual) {
            sub = rows;
          } else {
            // annihilator of a dual submodule is a submodule
            sub = ftranspose(fnullspace(F, rows));
          }
          return true;
        }
      }
      return false;
    };
    if (scan(fnullspace(F, best), gens, false))
      return SplitOutcome::Found;
    if (!complete)
      continue;
    if (scan(fnullspace(F, ftranspose(best)), gensT, true))
      return SplitOutcome::Found;
    if (complete)
      return SplitOutcome::Irreducible;
  }
  return SplitOutcome::GaveUp;
}

void split(const Fq &F, const std::vector<FMat> &gens, const FMat &sub, std::vector<FMat> &lo,
           std::vector<FMat> &hi) {
  const int d = gens[0].r, k = sub.r;
  FSpan S(F, d);
  FMat B(d, d);
  int col = 0;
  for (int r = 0; r < k; ++r) {
    std::vector<Fq::E> v(sub.a.begin() + r * d, sub.a.begin() + (r + 1) * d);
    S.add(v);
    for (int i = 0; i < d; ++i)
      B(i, col) = v[i];
    ++col;
  }
  for (int j = 0; j < d && col < d; ++j) {
    std::vector<Fq::E> e(d, 0);
    e[j] = 1;
    if (S.add(e)) {
      B(j, col) = 1;
      ++col;
    }
  }
  const auto Binv = finverse(F, B);
  if (!Binv)
    throw std::logic_error("submodule basis extension failed");
  for (const auto &g : gens) {
    const FMat h = fmul(F, fmul(F, *Binv, g), B);
    for (int i = k; i < d; ++i)
      for (int j = 0; j < k; ++j)
        if (h(i, j))
          throw std::logic_error("split found a non-invariant subspace");
    lo.push_back(fsubmatrix(h, 0, 0, k, k));
    hi.push_back(fsubmatrix(h, k, k, d - k, d - k));
  }
}

} // namespace

FactorSearch composition_factors(const Fq &F, const std::vector<FMat> &gens,
                                 const GroupPresentation &, const std::vector<Word> &words,
                                 std::uint64_t seed, long budget) {
  FactorSearch out;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<FMat>> work{gens};
  while (!work.empty()) {
    auto g = std::move(work.back());
    work.pop_back();
    FMat sub;
    const auto outcome = find_submodule(F, g, rng, budget, sub);
    if (outcome == SplitOutcome::Found) {
      std::vector<FMat> lo, hi;
      split(F, g, sub, lo, hi);
      work.push_back(std::move(lo));
      work.push_back(std::move(hi));
      continue;
    }
    FFactor f;
    f.dim = g[0].r;
    if (outcome == SplitOutcome::GaveUp) {
      out.complete = false;
      out.diagnostics.push_back("splitting budget exhausted on a block of dimension " +
                                std::to_string(f.dim));
    }
    f.absolutely_irreducible = outcome == SplitOutcome::Irreducible && commutant_dim(F, g) == 1;
    for (const auto &w : words)
      f.traces.push_back(ftrace(F, fimage(F, g, w)));
    f.gens = std::move(g);
    out.factors.push_back(std::move(f));
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const FFactor &a, const FFactor &b) {
    return std::tie(a.dim, a.traces) < std::tie(b.dim, b.traces);
  });
  return out;
}

std::vector<std::pair<int, std::vector<Fq::E>>> Semisimplification::signature() const {
  std::vector<std::pair<int, std::vector<Fq::E>>> s;
  for (const auto &f : factors)
    s.emplace_back(f.dim, f.traces);
  return s;
}

Semisimplification semisimplify_mod_p(const ResidueRep &r, int word_cap, std::uint64_t seed) {
  Fq F(r.ctx);
  std::vector<FMat> gens;
  for (const auto &g : r.gens)
    gens.push_back(reduce_fq(F, g));
  Semisimplification s;
  s.signature_words = check_words(r.group, word_cap);
  auto fs = composition_factors(F, gens, r.group, s.signature_words, seed);
  s.complete = fs.complete;
  s.factors = std::move(fs.factors);
  s.diagnostics = std::move(fs.diagnostics);
  return s;
}

bool residually_absolutely_irreducible(const IntegralRep &a, int word_cap, std::uint64_t seed) {
  const auto s = semisimplify_mod_p(reduce_rep_mod(a, 1), word_cap, seed);
  return s.complete && s.factors.size() == 1 && s.factors[0].absolutely_irreducible;
}

std::string to_string(CarayolVerdict v) {
  switch (v) {
  case CarayolVerdict::Pass:
    return "pass";
  case CarayolVerdict::PreconditionFailed:
    return "precondition-failed";
  case CarayolVerdict::TheoremViolation:
    return "THEOREM VIOLATION";
  default:
    return "inconclusive";
  }
}

CarayolReport carayol_audit(const IntegralRep &a, const IntegralRep &b, int n, int word_cap,
                            std::uint64_t seed) {
  CarayolReport rep;
  rep.n = n;
  rep.word_cap = word_cap;
  for (const auto &w : check_words(a.group, word_cap)) {
    const Element diff = a.trace(w) - b.trace(w);
    if (diff.precision() < n)
      throw PrecisionError("trace known to fewer than n digits");
    if (!diff.reduce(n).is_zero()) {
      rep.trace_witness = w;
      break;
    }
  }
  rep.iso = iso_mod(reduce_rep_mod(a, n), reduce_rep_mod(b, n), seed);
  const bool irr_a = residually_absolutely_irreducible(a, word_cap, seed);
  const bool irr_b = residually_absolutely_irreducible(b, word_cap, seed);
  if (!irr_a || !irr_b) {
    rep.verdict = CarayolVerdict::PreconditionFailed;
    rep.reason = "not residually absolutely irreducible";
    return rep;
  }
  if (rep.trace_witness) {
    rep.verdict = CarayolVerdict::PreconditionFailed;
    rep.reason = "traces differ mod pi^" + std::to_string(n) + " on " +
                 word_str(*rep.trace_witness, a.group.gens());
    return rep;
  }
  switch (rep.iso.status) {
  case IsoStatus::Isomorphic:
    rep.verdict = CarayolVerdict::Pass;
    rep.reason = "intertwiner found";
    break;
  case IsoStatus::NotIsomorphic:
    rep.verdict = CarayolVerdict::TheoremViolation;
    rep.reason = "trace-congruent residually irreducible pair with no intertwiner: " +
                 rep.iso.certificate;
    break;
  default:
    rep.verdict = CarayolVerdict::Inconclusive;
    rep.reason = rep.iso.certificate;
  }
  return rep;
}

CongruentPair make_congruent_pair(const CtxPtr &ctx, int n, std::mt19937_64 &rng) {
  const auto F2 = GroupPresentation::free({"g", "h"});
  for (;;) {
    std::vector<Mat> ga{Mat::random_unimodular(ctx, 2, rng), Mat::random_unimodular(ctx, 2, rng)};
    auto a = IntegralRep::make(F2, ga);
    if (!residually_absolutely_irreducible(a, 2, rng()))
      continue;
    const int k = static_cast<int>(rng() % 2);
    Mat C = Mat::random_unimodular(ctx, 2, rng) *
            Mat::diag({Element::one(ctx), Element::pi_power(ctx, k)});
    const QMat Cq{C, 0}, Ci = Cq.inverse();
    std::vector<QMat> conj;
    for (const auto &g : ga) {
      const Mat ap = g + Mat::random(ctx, 2, 2, rng).mul_pi(n);
      conj.push_back((Cq * QMat{ap, 0} * Ci).normalized());
    }
    auto L = stable_lattice(F2, conj);
    if (!L.bounded)
      throw std::logic_error("conjugate of an integral representation must have a stable lattice");
    return {std::move(a), std::move(L.rep), Cq};
  }
}

} // namespace padic
