#include <doctest.h>

#include "padic/errors.hpp"
#include "padic/pseudorep.hpp"

#include <random>

using namespace padic;

namespace {

IntegralRep s3_standard(const CtxPtr &ctx) {
  return IntegralRep::make(GroupPresentation::symmetric(3),
                           {Mat::from_ints(ctx, {{-1, 1}, {0, 1}}),
                            Mat::from_ints(ctx, {{0, -1}, {1, -1}})});
}

// T identically 2 on a finite group.
PseudoRep2<Element> doubled_trivial(const GroupPresentation &G, const CtxPtr &ctx) {
  std::map<Word, Element> t;
  for (int g = 0; g < G.order(); ++g)
    t[G.word_of(g)] = Element::from_int(ctx, 2);
  return pseudorep_from_table(G, 0, t);
}

std::vector<GroupPresentation> small_groups() {
  std::vector<GroupPresentation> out;
  for (int n = 1; n <= 12; ++n)
    out.push_back(GroupPresentation::cyclic(n));
  out.push_back(GroupPresentation::symmetric(3));
  out.push_back(GroupPresentation::from_permutations({"a", "b"}, {{1, 0, 3, 2}, {2, 3, 0, 1}}));
  out.push_back(GroupPresentation::from_permutations({"r", "s"}, {{1, 2, 3, 0}, {0, 3, 2, 1}}));
  out.push_back(GroupPresentation::from_permutations({"x", "y"}, {{1, 2, 0, 3}, {0, 2, 3, 1}}));
  out.push_back(GroupPresentation::from_permutations(
      {"r", "s"}, {{1, 2, 3, 4, 5, 0}, {0, 5, 4, 3, 2, 1}}));
  return out;
}

// sum_h T(x h) y_h for every x, reduced mod pi^m
bool annihilated(const PseudoRep2<Element> &T, const Vec &y, int m) {
  const auto vals = element_values(T, m);
  const auto &G = T.group;
  for (int x = 0; x < G.order(); ++x) {
    Element s = Element::zero(vals[0].context()).with_precision(m);
    for (int h = 0; h < G.order(); ++h)
      s = s + vals[G.mul(x, h)] * y[h].reduce(m);
    if (!s.reduce(m).is_zero())
      return false;
  }
  return true;
}

Vec translate(const GroupPresentation &G, const Vec &y, int g, bool left) {
  Vec out(y.size(), Element::zero(y[0].context()));
  for (int h = 0; h < G.order(); ++h)
    out[left ? G.mul(g, h) : G.mul(h, g)] = y[h];
  return out;
}

SMat smat(const ModelPtr &m, std::vector<Series> e) {
  int d = 1;
  while (d * d < static_cast<int>(e.size()))
    ++d;
  return SMat{m, d, std::move(e)};
}

ModelPoint at(const ModelPtr &m, const Element &t) { return {m, Embedding::identity(m->base), {t}}; }

// Frob -> diag(1 + T, 1)
RepFamily one_plus_t_sum_one(const ModelPtr &m) {
  const Series one = Series::constant(m, 1), zero = Series::constant(m, 0);
  return RepFamily::make(GroupPresentation::free({"Frob"}), m,
                         {smat(m, {one + Series::variable(m, 0), zero, zero, one})});
}

} // namespace

TEST_CASE("traces of representations") {
  for (int p : {3, 5, 7}) {
    auto ctx = Context::qp(p, 12);
    auto rep = IntegralRep::make(GroupPresentation::free({"g"}),
                                 {Mat::from_ints(ctx, {{1 + p, 0}, {0, 1 - p}})});
    auto T = from_rep_trace(rep, 3);
    for (int k = -6; k <= 6; ++k) {
      // power sums of 1 + p and 1 - p
      const Element a = Element::from_int(ctx, 1 + p), b = Element::from_int(ctx, 1 - p);
      Element s = Element::zero(ctx);
      Element x = Element::one(ctx), y = Element::one(ctx);
      for (int i = 0; i < std::abs(k); ++i) {
        x = x * (k > 0 ? a : a.inverse());
        y = y * (k > 0 ? b : b.inverse());
      }
      s = x + y;
      CHECK(T.T(Word(std::abs(k), k > 0 ? 1 : -1)).equals(s));
    }
    CHECK(T.D({1}).equals(Element::from_int(ctx, 1 - p * p)));
    CHECK(axiom_check(T, 100).pass);
  }
  auto q2 = Context::qp(2, 10);
  CHECK_THROWS_AS(from_rep_trace(IntegralRep::make(GroupPresentation::free({"g"}),
                                                   {Mat::identity(q2, 2)}),
                                 1),
                  Unsupported);
}

TEST_CASE("axiom check") {
  auto q5 = Context::qp(5, 10);
  std::mt19937_64 rng(3);
  auto F2 = GroupPresentation::free({"g", "h"});
  for (int t = 0; t < 10; ++t) {
    auto rep = IntegralRep::make(F2, {Mat::random_unimodular(q5, 2, rng),
                                      Mat::random_unimodular(q5, 2, rng)});
    auto T = from_rep_trace(rep, 2);
    auto a = axiom_check(T, 200, t);
    CHECK(a.pass);
    CHECK(a.pairs_checked >= 200);
  }
  CHECK(axiom_check(from_rep_trace(s3_standard(q5), 0), 200).pass);

  // constant 3: fails T(1) = 2 and the identity
  auto C3 = GroupPresentation::cyclic(3);
  std::map<Word, Element> bad;
  for (int g = 0; g < 3; ++g)
    bad[C3.word_of(g)] = Element::from_int(q5, 3);
  auto rb = axiom_check(pseudorep_from_table(C3, 0, bad), 10);
  CHECK_FALSE(rb.pass);
  REQUIRE_FALSE(rb.violations.empty());
  CHECK(rb.violations[0].kind == "unit");

  // sum of two characters of C4 with values i^k and (-1)^k; D = product
  const auto roots = dth_roots(Element::from_int(q5, -1), 2);
  REQUIRE(roots.size() == 2);
  const Element i = roots[0];
  auto C4 = GroupPresentation::cyclic(4);
  std::map<Word, Element> chi;
  for (int k = 0; k < 4; ++k) {
    Element a = Element::one(q5), b = Element::one(q5);
    for (int j = 0; j < k; ++j) {
      a = a * i;
      b = b * Element::from_int(q5, -1);
    }
    chi[C4.word_of(k)] = a + b;
  }
  auto Tc = pseudorep_from_table(C4, 0, chi);
  CHECK(axiom_check(Tc, 50).pass);
  CHECK(Tc.D({1}).equals(i * Element::from_int(q5, -1)));

  std::map<Word, Element> partial{{{}, Element::from_int(q5, 2)}};
  auto rm = axiom_check(pseudorep_from_table(C4, 0, partial), 0);
  CHECK_FALSE(rm.pass);
  CHECK(rm.violations[0].kind == "missing");
}

TEST_CASE("kernel of the doubled trivial pseudorepresentation is the augmentation ideal") {
  for (int p : {3, 5}) {
    auto ctx = Context::qp(p, 8);
    for (const auto &G : small_groups()) {
      auto T = doubled_trivial(G, ctx);
      for (int m = 1; m <= 3; ++m) {
        CAPTURE(G.order());
        CAPTURE(m);
        CHECK(kernel_length(T, m) == (G.order() - 1) * m);
        for (const auto &y : pseudorep_kernel(T, m)) {
          Element s = Element::zero(ctx);
          for (const auto &c : y)
            s = s + c;
          CHECK(s.reduce(m).is_zero());
        }
        // g - 1 is in the kernel for every g
        for (int g = 1; g < G.order(); ++g) {
          Vec y(G.order(), Element::zero(ctx));
          y[g] = Element::one(ctx);
          y[0] = Element::from_int(ctx, -1);
          CHECK(annihilated(T, y, m));
        }
      }
      CHECK(group_kernel(T).size() == static_cast<size_t>(G.order()));
    }
  }
}

TEST_CASE("kernel examples") {
  auto q5 = Context::qp(5, 8);
  auto T = from_rep_trace(s3_standard(q5), 0);
  // group algebra = 1 + sign + M_2: the trace of the standard rep kills the first two
  for (int m = 1; m <= 3; ++m)
    CHECK(kernel_length(T, m) == 2 * m);
  CHECK(group_kernel(T) == std::vector<int>{0});

  auto triv = doubled_trivial(GroupPresentation::cyclic(1), q5);
  CHECK(kernel_length(triv, 4) == 0);
  CHECK(pseudorep_kernel(triv, 4).empty());

  auto q2 = Context::qp(2, 8);
  std::map<Word, Element> t2{{{}, Element::from_int(q2, 2)}};
  PseudoRep2<Element> T2{GroupPresentation::cyclic(1), 0, t2};
  CHECK_THROWS_AS(pseudorep_kernel(T2, 1), Unsupported);
}

TEST_CASE("kernel is a two-sided ideal and compatible with reduction") {
  std::mt19937_64 rng(5);
  for (int p : {3, 5}) {
    auto ctx = Context::qp(p, 8);
    std::vector<PseudoRep2<Element>> Ts{from_rep_trace(s3_standard(ctx), 0)};
    auto D4 = GroupPresentation::from_permutations({"r", "s"}, {{1, 2, 3, 0}, {0, 3, 2, 1}});
    Ts.push_back(from_rep_trace(
        IntegralRep::make(D4, {Mat::from_ints(ctx, {{0, -1}, {1, 0}}),
                               Mat::from_ints(ctx, {{1, 0}, {0, -1}})}),
        0));
    Ts.push_back(doubled_trivial(GroupPresentation::cyclic(6), ctx));
    for (const auto &T : Ts) {
      const auto &G = T.group;
      for (int m = 1; m <= 3; ++m) {
        const auto K = pseudorep_kernel(T, m);
        for (const auto &y : K)
          for (int g = 0; g < G.order(); ++g) {
            CHECK(annihilated(T, y, m));
            CHECK(annihilated(T, translate(G, y, g, true), m));
            CHECK(annihilated(T, translate(G, y, g, false), m));
            if (m > 1)
              CHECK(annihilated(T, y, m - 1));
          }
        // random combinations stay in the kernel
        for (int t = 0; t < 5 && !K.empty(); ++t) {
          Vec z(G.order(), Element::zero(ctx));
          for (const auto &y : K) {
            const Element c = Element::random(ctx, rng, m);
            for (int h = 0; h < G.order(); ++h)
              z[h] = z[h] + c * y[h];
          }
          CHECK(annihilated(T, z, m));
        }
      }
    }
  }
}

TEST_CASE("kernel length scales with ramification under base change") {
  for (int p : {3, 5}) {
    auto L = Context::qp(p, 8);
    for (int e : {2, 3}) {
      auto E = Context::ramified_over(L, e, 8 * e);
      const auto emb = Embedding::make(L, E);
      std::vector<PseudoRep2<Element>> Ts{from_rep_trace(s3_standard(L), 0),
                                          doubled_trivial(GroupPresentation::cyclic(4), L)};
      for (const auto &T : Ts) {
        PseudoRep2<Element> TE{T.group, T.word_cap, {}};
        for (const auto &[w, v] : T.values)
          TE.values[w] = emb(v);
        for (int m = 1; m <= 2; ++m)
          CHECK(kernel_length(TE, e * m) == e * kernel_length(T, m));
      }
    }
  }
}

TEST_CASE("residual multiplicity freeness") {
  auto q5 = Context::qp(5, 8);
  auto s3 = residually_multiplicity_free(from_rep_trace(s3_standard(q5), 0));
  CHECK(s3.verdict == MFVerdict::MultiplicityFree);
  REQUIRE(s3.decomposition.size() == 1);
  CHECK(s3.decomposition[0].dim == 2);

  // mod 3 the standard rep of S3 has composition factors 1 and sign
  auto q3 = Context::qp(3, 8);
  auto s3m3 = residually_multiplicity_free(from_rep_trace(s3_standard(q3), 0));
  CHECK(s3m3.verdict == MFVerdict::MultiplicityFree);
  CHECK(s3m3.decomposition.size() == 2);

  auto dbl = residually_multiplicity_free(doubled_trivial(GroupPresentation::symmetric(3), q5));
  CHECK(dbl.verdict == MFVerdict::NotMultiplicityFree);
  REQUIRE(dbl.repeated);
  CHECK(dbl.repeated->dim == 1);

  // C4 over F_5: i + (-i) is multiplicity free, 2i is not
  const Element i = dth_roots(Element::from_int(q5, -1), 2)[0];
  auto C4 = GroupPresentation::cyclic(4);
  auto split = IntegralRep::make(C4, {Mat::diag({i, i * Element::from_int(q5, -1)})});
  CHECK(residually_multiplicity_free(from_rep_trace(split, 0)).verdict ==
        MFVerdict::MultiplicityFree);
  auto twice = IntegralRep::make(C4, {Mat::diag({i, i})});
  CHECK(residually_multiplicity_free(from_rep_trace(twice, 0)).verdict ==
        MFVerdict::NotMultiplicityFree);

  // over F_3 the rotation of order 4 is irreducible but not split
  auto q3c = Context::qp(3, 8);
  auto rot = IntegralRep::make(C4, {Mat::from_ints(q3c, {{0, -1}, {1, 0}})});
  auto r = residually_multiplicity_free(from_rep_trace(rot, 0));
  CHECK(r.verdict == MFVerdict::Inconclusive);
  CHECK_FALSE(r.note.empty());
}

TEST_CASE("specialization commutes with taking traces") {
  auto q5 = Context::qp(5, 10);
  auto disc = AlgebraModel::disc(q5, {}, {"T"}, 8);
  std::mt19937_64 rng(9);
  auto F2 = GroupPresentation::free({"g", "h"});
  const Series T = Series::variable(disc, 0);
  for (int t = 0; t < 5; ++t) {
    std::vector<SMat> gens;
    for (int k = 0; k < 2; ++k) {
      Mat A = Mat::random_unimodular(q5, 2, rng);
      std::vector<Series> e;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          e.push_back(Series::constant(disc, A(i, j)) + T * random_series(disc, rng, 2, 2));
      gens.push_back(smat(disc, e));
    }
    auto fam = RepFamily::make(F2, disc, gens);
    auto Tf = from_rep_trace(fam, 1);
    CHECK(axiom_check(Tf, 20).pass);
    const ModelPoint pt = at(disc, Element::random(q5, rng, 6).mul_pi(1));
    auto a = specialize(Tf, pt);
    auto b = from_rep_trace(specialize(fam, pt), 1);
    for (const auto &w : F2.words_up_to(2))
      CHECK(a.T(w).equals(b.T(w)));
  }
}

TEST_CASE("pseudorepresentation constancy on residue domains") {
  for (int p : {3, 5}) {
    auto L = Context::qp(p, 14);
    auto E2 = Context::ramified_over(L, 2, 28);
    auto disc = AlgebraModel::disc(L, {}, {"T"}, 12);
    auto T = from_rep_trace(one_plus_t_sum_one(disc), 2);
    CHECK(axiom_check(T, 30).pass);
    const Element t0 = Element::from_int(L, p);
    for (int n = 1; n <= 3; ++n) {
      auto U = describe(disc, at(disc, t0), n, DomainKind::WideOpenU);
      auto au = pseudorep_constancy_audit(T, U, n, {L, E2}, 8, 3 + n);
      CHECK(au.pass);
      CHECK(au.words_checked > 0);
      auto su = pseudorep_strict_constancy(T, chart(U), n);
      CHECK_FALSE(su.constant);
      REQUIRE(su.witness);

      auto V = describe(disc, at(disc, t0), n, DomainKind::AffinoidV);
      auto sv = pseudorep_strict_constancy(T, chart(V), n);
      CHECK(sv.constant);
      // T(Frob) = 2 + t0 mod pi^n
      CHECK(sv.values.at(Word{1}).equals(Element::from_int(L, 2 + p).reduce(n)));
    }
  }
}

TEST_CASE("residual constancy: mod-pi traces agree across a residue disc") {
  auto q5 = Context::qp(5, 12);
  auto disc = AlgebraModel::disc(q5, {}, {"T"}, 10);
  auto T = from_rep_trace(one_plus_t_sum_one(disc), 2);
  std::mt19937_64 rng(2);
  const Element t0 = Element::from_int(q5, 5);
  auto base = specialize(T, at(disc, t0));
  for (int k = 0; k < 20; ++k) {
    auto s = specialize(T, at(disc, t0 + Element::random(q5, rng, 8).mul_pi(1)));
    for (const auto &w : T.base_words())
      CHECK(s.T(w).reduce(1).equals(base.T(w).reduce(1)));
  }
}
