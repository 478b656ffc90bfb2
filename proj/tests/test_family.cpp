#include <doctest.h>

#include "padic/audit.hpp"
#include "padic/errors.hpp"
#include "padic/family.hpp"

#include <random>

using namespace padic;

namespace {

SMat smat(const ModelPtr &m, std::vector<Series> entries) {
  int d = 1;
  while (d * d < static_cast<int>(entries.size()))
    ++d;
  return SMat{m, d, std::move(entries)};
}

// Frob -> 1 + c*T on the given disc model.
RepFamily one_plus(const ModelPtr &m, i64 c) {
  const Series T = Series::variable(m, 0);
  return RepFamily::make(GroupPresentation::free({"Frob"}), m,
                         {smat(m, {Series::constant(m, 1) + T.scale(Element::from_int(m->base, c))})});
}

ModelPoint at(const ModelPtr &m, const Element &t) { return {m, Embedding::identity(m->base), {t}}; }

// A + T*(random) with A unimodular: unit determinant on the open disc.
SMat random_family_matrix(const ModelPtr &m, std::mt19937_64 &rng) {
  Mat A = Mat::random_unimodular(m->base, 2, rng);
  const Series T = Series::variable(m, 0);
  std::vector<Series> e;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      e.push_back(Series::constant(m, A(i, j)) + T * random_series(m, rng, 3, 2));
  return smat(m, e);
}

} // namespace

TEST_CASE("inverse_unit") {
  auto q5 = Context::qp(5, 10);
  auto disc = AlgebraModel::disc(q5, {"z"}, {"T"}, 8);
  const Series T = Series::variable(disc, "T"), z = Series::variable(disc, "z");
  const Series f = Series::constant(disc, 2) + T + z.scale(Element::from_int(q5, 5));
  CHECK((f * inverse_unit(f)).equals(Series::constant(disc, 1)));
  CHECK_THROWS_AS(inverse_unit(Series::constant(disc, 1) + z), DomainError);
  CHECK_THROWS_AS(inverse_unit(T), DomainError);
}

TEST_CASE("specialize examples") {
  auto q5 = Context::qp(5, 10);
  auto disc = AlgebraModel::disc(q5, {}, {"T"}, 8);
  auto fam = one_plus(disc, 1);
  auto r = specialize(fam, at(disc, Element::from_int(q5, 5)));
  CHECK(r.gens[0](0, 0).equals(Element::from_int(q5, 6)));

  const Series T = Series::variable(disc, 0);
  auto uni = RepFamily::make(GroupPresentation::free({"g"}), disc,
                             {smat(disc, {Series::constant(disc, 1), T, Series::constant(disc, 0),
                                          Series::constant(disc, 1)})});
  auto u = specialize(uni, at(disc, Element::from_int(q5, 25)));
  CHECK(u.gens[0].equals(Mat::from_ints(q5, {{1, 25}, {0, 1}})));

  auto cst = RepFamily::make(GroupPresentation::free({"g"}), disc,
                             {smat(disc, {Series::constant(disc, 2), Series::constant(disc, 1),
                                          Series::constant(disc, 1), Series::constant(disc, 1)})});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t)
    CHECK(specialize(cst, at(disc, Element::random(q5, rng, 1))).gens[0].equals(
        Mat::from_ints(q5, {{2, 1}, {1, 1}})));

  // unit determinant is a hard requirement at each point
  auto closed = AlgebraModel::disc(q5, {"T"}, {}, 8);
  auto bad = one_plus(closed, 1);
  CHECK(bad.inv.empty());
  CHECK_NOTHROW(specialize(bad, at(closed, Element::one(q5))));
  CHECK_THROWS_AS(specialize(bad, at(closed, Element::from_int(q5, -1))), DomainError);
}

TEST_CASE("trace_of_word") {
  auto q5 = Context::qp(5, 10);
  auto disc = AlgebraModel::disc(q5, {}, {"T"}, 8);
  auto fam = one_plus(disc, 1);
  const Series T = Series::variable(disc, 0);
  CHECK(fam.trace_of_word({}).equals(Series::constant(disc, 1)));
  CHECK(fam.trace_of_word({1}).equals(Series::constant(disc, 1) + T));
  CHECK(fam.trace_of_word({1, 1}).equals(Series::constant(disc, 1) + T.scale(Element::from_int(q5, 2)) + T * T));

  std::mt19937_64 rng(4);
  auto F2 = GroupPresentation::free({"g", "h"});
  for (int t = 0; t < 10; ++t) {
    auto f2 = RepFamily::make(F2, disc, {random_family_matrix(disc, rng), random_family_matrix(disc, rng)});
    CHECK(f2.trace_of_word({}).equals(Series::constant(disc, 2)));
    const Word w{1, 2, 2, -1, 2};
    for (int g : {1, 2, -1, -2})
      CHECK(f2.trace_of_word(F2.concat(F2.concat({g}, w), {-g})).equals(f2.trace_of_word(w)));
  }
}

TEST_CASE("strict constancy examples") {
  auto q3 = Context::qp(3, 12);
  auto disc = AlgebraModel::disc(q3, {}, {"T"}, 10);
  auto fam = one_plus(disc, 1);
  const Element t0 = Element::from_int(q3, 3);
  for (int n = 1; n <= 3; ++n) {
    auto V = chart(describe(disc, at(disc, t0), n, DomainKind::AffinoidV));
    auto sv = strict_constancy_check(fam, V, n);
    CHECK(sv.constant);
    REQUIRE(sv.constant_model.size() == 1);
    CHECK(sv.constant_model[0](0, 0).equals(Element::from_int(q3, 4).reduce(n)));
    auto U = chart(describe(disc, at(disc, t0), n, DomainKind::WideOpenU));
    auto su = strict_constancy_check(fam, U, n);
    CHECK_FALSE(su.constant);
    REQUIRE(su.witness);
    CHECK(su.witness->monomial == Monomial{1});
  }
  auto cst = RepFamily::make(GroupPresentation::free({"g"}), disc,
                             {smat(disc, {Series::constant(disc, 5)})});
  for (int n = 1; n <= 10; ++n)
    CHECK(strict_constancy_check(cst, chart(describe(disc, at(disc, t0), std::max(n, 1),
                                                     DomainKind::WideOpenU)),
                                 n)
              .constant);
}

TEST_CASE("family audit on U^(n) and just outside") {
  for (int p : {3, 5}) {
    auto L = Context::qp(p, 14);
    auto E2 = Context::ramified_over(L, 2, 28);
    auto disc = AlgebraModel::disc(L, {}, {"T"}, 12);
    auto fam = one_plus(disc, 1);
    const Element t0 = Element::from_int(L, p);
    for (int n = 1; n <= 3; ++n) {
      auto dom = describe(disc, at(disc, t0), n, DomainKind::WideOpenU);
      auto rep = family_constancy_audit(fam, dom, n, {L, E2}, 12, 1, 7 + n);
      CHECK(rep.pass);
      CHECK_FALSE(rep.inconclusive);
      for (const auto &e : rep.per_ext)
        CHECK(e.sampled > 0);
      if (n >= 2) {
        // v(y - x) = n - 1 exactly
        const ModelPoint y = at(disc, t0 + Element::pi_power(L, n - 1));
        auto out = family_constancy_audit(fam, at(disc, t0), {y}, n, 1);
        CHECK_FALSE(out.pass);
        REQUIRE(out.witness);
        CHECK(out.witness->trace_word);
      }
    }
    // n = 1 on the closed unit disc: T = 0 and T = 1 have residues 1 and 2
    auto closed = AlgebraModel::disc(L, {"T"}, {}, 8);
    auto cf = one_plus(closed, 1);
    auto out = family_constancy_audit(cf, at(closed, Element::zero(L)),
                                      {at(closed, Element::one(L))}, 1, 1);
    CHECK_FALSE(out.pass);
  }
}

TEST_CASE("one-dimensional families reduce to the function audit") {
  auto q3 = Context::qp(3, 14);
  auto disc = AlgebraModel::disc(q3, {}, {"T"}, 10);
  std::mt19937_64 rng(12);
  const Element t0 = Element::from_int(q3, 3);
  for (int t = 0; t < 20; ++t) {
    const Series f = Series::constant(disc, 1 + static_cast<i64>(rng() % 2)) +
                     Series::variable(disc, 0) * random_series(disc, rng, 3, 2);
    auto fam = RepFamily::make(GroupPresentation::free({"g"}), disc, {smat(disc, {f})});
    std::vector<ModelPoint> pts;
    for (int k = 0; k < 6; ++k)
      pts.push_back(at(disc, t0 + Element::random_unit(q3, rng).mul_pi(1 + k % 3)));
    for (int n = 1; n <= 3; ++n) {
      auto fa = pointwise_constancy_audit(f, at(disc, t0), pts, n);
      auto ra = family_constancy_audit(fam, at(disc, t0), pts, n, 1);
      CHECK(fa.pass == ra.pass);
    }
  }
}

TEST_CASE("strict constancy and the pointwise audit") {
  // strict at level n => audit passes on V^(n); audit passing at n+1 on
  // U^(n+1) => strict at level n on V^(n).
  auto q3 = Context::qp(3, 16);
  auto disc = AlgebraModel::disc(q3, {}, {"T"}, 10);
  auto F2 = GroupPresentation::free({"g", "h"});
  std::mt19937_64 rng(31);
  int strict_count = 0, audit_count = 0;
  for (int t = 0; t < 24; ++t) {
    auto fam = RepFamily::make(F2, disc, {random_family_matrix(disc, rng), random_family_matrix(disc, rng)});
    const ModelPoint x = at(disc, Element::random(q3, rng, 1));
    for (int n = 1; n <= 2; ++n) {
      auto V = describe(disc, x, n, DomainKind::AffinoidV);
      auto sv = strict_constancy_check(fam, chart(V), n);
      if (sv.constant) {
        ++strict_count;
        CHECK(family_constancy_audit(fam, V, n, {q3}, 8, 2, t).pass);
      }
      auto U1 = describe(disc, x, n + 1, DomainKind::WideOpenU);
      auto au = family_constancy_audit(fam, U1, n + 1, {q3}, 8, 2, t);
      if (au.pass) {
        ++audit_count;
        CHECK(sv.constant);
      }
    }
  }
  CHECK(strict_count > 0);
  CHECK(audit_count > 0);
}

TEST_CASE("conjugation stability") {
  auto q3 = Context::qp(3, 14);
  auto disc = AlgebraModel::disc(q3, {}, {"T"}, 10);
  auto F1 = GroupPresentation::free({"g"});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 15; ++t) {
    auto fam = RepFamily::make(F1, disc, {random_family_matrix(disc, rng)});
    Mat C = Mat::random_unimodular(q3, 2, rng), Ci = C.inverse();
    std::vector<Series> ce, ci;
    for (int i = 0; i < 4; ++i) {
      ce.push_back(Series::constant(disc, C(i / 2, i % 2)));
      ci.push_back(Series::constant(disc, Ci(i / 2, i % 2)));
    }
    auto conj = RepFamily::make(F1, disc, {smat(disc, ce) * fam.gens[0] * smat(disc, ci)});
    const ModelPoint x = at(disc, Element::random(q3, rng, 1));
    for (int n = 1; n <= 3; ++n) {
      auto ch = chart(describe(disc, x, n, DomainKind::AffinoidV));
      CHECK(strict_constancy_check(fam, ch, n).constant == strict_constancy_check(conj, ch, n).constant);
    }
  }
}

TEST_CASE("trace algebra") {
  auto q5 = Context::qp(5, 10);
  auto disc = AlgebraModel::disc(q5, {}, {"T"}, 8);
  for (int n = 1; n <= 3; ++n) {
    CHECK(trace_algebra_full(one_plus(disc, 1), n, 4).verdict == TraceAlgebraVerdict::Full);
    CHECK(trace_algebra_full(one_plus(disc, 5), n, 4).verdict == TraceAlgebraVerdict::Proper);
  }
  auto cst = RepFamily::make(GroupPresentation::free({"g"}), disc,
                             {smat(disc, {Series::constant(disc, 3)})});
  auto r = trace_algebra_full(cst, 2, 3);
  CHECK(r.verdict == TraceAlgebraVerdict::Proper);
  CHECK(r.length == 2);
}
