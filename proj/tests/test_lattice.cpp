#include <doctest.h>

#include "padic/errors.hpp"
#include "padic/lattice.hpp"

#include <random>

using namespace padic;

namespace {

// Standard 2-dim rep of S_3 on (e0 - e1, e1 - e2), generators (0 1) and (0 1 2).
IntegralRep s3_standard(const CtxPtr &ctx) {
  return IntegralRep::make(GroupPresentation::symmetric(3),
                           {Mat::from_ints(ctx, {{-1, 1}, {0, 1}}),
                            Mat::from_ints(ctx, {{0, -1}, {1, -1}})});
}

IntegralRep conjugate(const IntegralRep &a, const Mat &C) {
  std::vector<Mat> g;
  const Mat Ci = C.inverse();
  for (const auto &x : a.gens)
    g.push_back(C * x * Ci);
  return IntegralRep::make(a.group, g);
}

IntegralRep diag_pm(const CtxPtr &ctx) {
  const i64 p = ctx->p();
  return IntegralRep::make(GroupPresentation::free({"Frob"}),
                           {Mat::from_ints(ctx, {{1 + p, 0}, {0, 1 - p}})});
}

IntegralRep identity_rep(const CtxPtr &ctx, int d) {
  return IntegralRep::make(GroupPresentation::free({"Frob"}), {Mat::identity(ctx, d)});
}

} // namespace

TEST_CASE("integral reps validate their inputs") {
  auto q5 = Context::qp(5, 10);
  CHECK_NOTHROW(s3_standard(q5));
  CHECK_THROWS_AS(IntegralRep::make(GroupPresentation::free({"g"}), {Mat::from_ints(q5, {{5}})}),
                  DomainError);
  // order-3 matrix sent to the transposition violates the table
  CHECK_THROWS(IntegralRep::make(GroupPresentation::symmetric(3),
                                 {Mat::from_ints(q5, {{0, -1}, {1, -1}}),
                                  Mat::from_ints(q5, {{0, -1}, {1, -1}})}));
}

TEST_CASE("stable lattices") {
  auto q5 = Context::qp(5, 16);
  const auto F1 = GroupPresentation::free({"Frob"});
  SUBCASE("integral input keeps the standard lattice") {
    auto r = stable_lattice(F1, {QMat::integral(Mat::from_ints(q5, {{1, 2}, {3, 4}}))});
    REQUIRE(r.bounded);
    CHECK(r.certificate.shift == 0);
    CHECK(r.certificate.num.det().is_unit());
  }
  SUBCASE("antidiagonal p, 1/p") {
    QMat rho{Mat::from_ints(q5, {{0, 25}, {1, 0}}), 1};
    auto r = stable_lattice(F1, {rho});
    REQUIRE(r.bounded);
    // lattice = O e1 + O p^-1 e2 (column vectors)
    QMat D{Mat::from_ints(q5, {{5, 0}, {0, 1}}), 1};
    CHECK((D.inverse() * r.certificate).normalized().to_integral().det().is_unit());
    const Mat g = r.rep.gens[0];
    CHECK(g(0, 0).is_zero());
    CHECK(g(1, 1).is_zero());
    CHECK((g * g).is_identity());
    CHECK((r.certificate.inverse() * rho * r.certificate).to_integral().equals(g));
  }
  SUBCASE("diag(p, 1/p)-conjugates of S3 recover integrality") {
    const auto a = s3_standard(q5);
    QMat D{Mat::from_ints(q5, {{25, 0}, {0, 1}}), 1}; // diag(p, 1/p)
    std::vector<QMat> rho;
    for (const auto &g : a.gens)
      rho.push_back(D * QMat::integral(g) * D.inverse());
    CHECK_FALSE(rho[1].normalized().is_integral());
    auto r = stable_lattice(a.group, rho);
    REQUIRE(r.bounded);
    for (int i = 0; i < 2; ++i) {
      CHECK((r.certificate.inverse() * rho[i] * r.certificate).to_integral().equals(r.rep.gens[i]));
      CHECK(r.rep.gens[i].trace().equals(a.gens[i].trace()));
    }
  }
  SUBCASE("unbounded orbit") {
    // diag(p, 1) generates an unbounded group
    auto r = stable_lattice(F1, {QMat::integral(Mat::from_ints(q5, {{5, 0}, {0, 1}}))}, 8);
    CHECK_FALSE(r.bounded);
  }
}

TEST_CASE("reduce_rep_mod examples") {
  auto q5 = Context::qp(5, 10);
  const auto r = diag_pm(q5);
  CHECK(reduce_rep_mod(r, 1).gens[0].is_identity());
  CHECK_FALSE(reduce_rep_mod(r, 2).gens[0].is_identity());
  // functoriality on words
  std::mt19937_64 rng(2);
  const auto a = s3_standard(q5);
  const auto ra = reduce_rep_mod(a, 3);
  for (const auto &w : check_words(a.group, 0))
    CHECK(ra.image(w).equals(a.image(w).reduce(3)));
}

TEST_CASE("iso_mod") {
  std::mt19937_64 rng(11);
  for (int p : {3, 5}) {
    auto ctx = Context::qp(p, 12);
    const auto F2 = GroupPresentation::free({"g", "h"});
    for (int t = 0; t < 10; ++t) {
      auto a = IntegralRep::make(F2, {Mat::random_unimodular(ctx, 2, rng),
                                      Mat::random_unimodular(ctx, 2, rng)});
      auto b = conjugate(a, Mat::random_unimodular(ctx, 2, rng));
      auto c = conjugate(b, Mat::random_unimodular(ctx, 2, rng));
      const int m = 1 + t % 3;
      const auto ra = reduce_rep_mod(a, m), rb = reduce_rep_mod(b, m), rc = reduce_rep_mod(c, m);
      auto ab = iso_mod(ra, rb), ba = iso_mod(rb, ra), ac = iso_mod(ra, rc), aa = iso_mod(ra, ra);
      CHECK(ab.status == IsoStatus::Isomorphic);
      CHECK(ba.status == IsoStatus::Isomorphic);
      CHECK(ac.status == IsoStatus::Isomorphic);
      CHECK(aa.status == IsoStatus::Isomorphic);
      REQUIRE(ab.intertwiner);
      for (int g = 0; g < 2; ++g)
        CHECK((*ab.intertwiner * ra.gens[g]).with_precision(m).equals(
            (rb.gens[g] * *ab.intertwiner).with_precision(m)));
      // isomorphic mod pi^m implies isomorphic mod every smaller power
      for (int m2 = 1; m2 < m; ++m2)
        CHECK(iso_mod(reduce_rep_mod(a, m2), reduce_rep_mod(b, m2)).status ==
              IsoStatus::Isomorphic);
    }
  }
  auto q5 = Context::qp(5, 10);
  auto res = iso_mod(reduce_rep_mod(identity_rep(q5, 2), 2), reduce_rep_mod(diag_pm(q5), 2));
  CHECK(res.status == IsoStatus::NotIsomorphic);
  CHECK(res.exhaustive);
  CHECK(iso_mod(reduce_rep_mod(identity_rep(q5, 2), 1), reduce_rep_mod(diag_pm(q5), 1)).status ==
        IsoStatus::Isomorphic);
}

TEST_CASE("semisimplification mod p") {
  auto q5 = Context::qp(5, 8);
  auto triv = semisimplify_mod_p(reduce_rep_mod(identity_rep(q5, 3), 1));
  REQUIRE(triv.factors.size() == 3);
  for (const auto &f : triv.factors) {
    CHECK(f.dim == 1);
    CHECK(f.absolutely_irreducible);
  }
  auto unip = semisimplify_mod_p(reduce_rep_mod(
      IntegralRep::make(GroupPresentation::free({"g"}), {Mat::from_ints(q5, {{1, 1}, {0, 1}})}), 1));
  REQUIRE(unip.factors.size() == 2);
  CHECK(unip.signature()[0] == unip.signature()[1]);

  const auto s3 = s3_standard(q5);
  auto irr = semisimplify_mod_p(reduce_rep_mod(s3, 1));
  REQUIRE(irr.factors.size() == 1);
  CHECK(irr.factors[0].dim == 2);
  CHECK(irr.factors[0].absolutely_irreducible);

  // exhaustive check: no line of F_5^2 is stable under both generators
  Fq F(q5);
  const FMat s = reduce_fq(F, s3.gens[0]), c = reduce_fq(F, s3.gens[1]);
  int stable_lines = 0;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) {
      if (!(x == 1 || (x == 0 && y == 1)))
        continue;
      bool ok = true;
      for (const auto &g : {s, c}) {
        const int gx = (g(0, 0) * x + g(0, 1) * y) % 5, gy = (g(1, 0) * x + g(1, 1) * y) % 5;
        ok = ok && (gx * y - gy * x) % 5 == 0;
      }
      stable_lines += ok;
    }
  CHECK(stable_lines == 0);

  // mod 3 the standard rep has trivial and sign factors
  auto q3 = Context::qp(3, 8);
  auto red3 = semisimplify_mod_p(reduce_rep_mod(s3_standard(q3), 1));
  REQUIRE(red3.factors.size() == 2);
  CHECK(red3.factors[0].dim == 1);
  CHECK(red3.signature()[0] != red3.signature()[1]);

  // basis independence
  std::mt19937_64 rng(8);
  const auto F2 = GroupPresentation::free({"g", "h"});
  for (int t = 0; t < 20; ++t) {
    auto up = IntegralRep::make(
        F2, {Mat::from_ints(q5, {{1, static_cast<i64>(rng() % 5), 3}, {0, 2, 1}, {0, 0, 3}}),
             Mat::from_ints(q5, {{4, 1, 0}, {0, 1, 2}, {0, 3, 2}})});
    auto conj = conjugate(up, Mat::random_unimodular(q5, 3, rng));
    auto s1 = semisimplify_mod_p(reduce_rep_mod(up, 1), 2, t);
    auto s2 = semisimplify_mod_p(reduce_rep_mod(conj, 1), 2, t + 100);
    CHECK(s1.complete);
    CHECK(s1.signature() == s2.signature());
  }
}

TEST_CASE("Carayol harness") {
  std::mt19937_64 rng(21);
  auto q5 = Context::qp(5, 20);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 4; ++t) {
      auto pair = make_congruent_pair(q5, n, rng);
      CHECK(carayol_audit(pair.a, pair.a, n, 3).verdict == CarayolVerdict::Pass);
      auto rep = carayol_audit(pair.a, pair.b, n, 3);
      CHECK(rep.verdict == CarayolVerdict::Pass);
    }
  // the residually reducible counterexample: traces agree mod p^2, no isomorphism
  auto rep = carayol_audit(identity_rep(q5, 2), diag_pm(q5), 2, 6);
  CHECK(rep.verdict == CarayolVerdict::PreconditionFailed);
  CHECK_FALSE(rep.trace_witness);
  CHECK(rep.iso.status == IsoStatus::NotIsomorphic);
}
