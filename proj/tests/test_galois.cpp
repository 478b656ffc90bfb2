#include <doctest.h>

#include "padic/errors.hpp"
#include "padic/galois.hpp"

#include <random>
#include <set>

using namespace padic;

namespace {

Element ip(const CtxPtr &ctx, i64 v) { return Element::from_int(ctx, v); }

// v_p of an integer, by repeated division
i64 int_vp(i64 m, int p) {
  i64 v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

// Slopes of the lower convex hull of (0, v(d)), (1, v(t)), (2, 0).
std::vector<Rational> hull_slopes(Rational vt, bool t_zero, Rational vd) {
  if (!t_zero && vt < vd / 2)
    return {vt, vd - vt};
  return {vd / 2, vd / 2};
}

} // namespace

TEST_CASE("crystalline modules") {
  for (int p : {2, 3, 5}) {
    auto ctx = Context::qp(p, 20);
    auto M = crystalline_module(2, ip(ctx, p));
    CHECK(M.phi.equals(Mat::from_ints(ctx, {{0, -1}, {p, p}})));
    CHECK(M.phi.det().equals(ip(ctx, p)));
    CHECK(M.N.is_zero());
    CHECK(M.kind == PhiKind::Crystalline);
    CHECK_THROWS_AS(crystalline_module(2, ip(ctx, 1)), DomainError);
    CHECK_THROWS_AS(crystalline_module(1, ip(ctx, p)), std::invalid_argument);
  }
  auto q5 = Context::qp(5, 24);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    const int k = 2 + static_cast<int>(rng() % 10);
    const Element ap = Element::random(q5, rng, 1 + static_cast<int>(rng() % 4));
    auto M = crystalline_module(k, ap);
    CHECK(M.phi.trace().equals(ap));
    // Cayley-Hamilton for T^2 - a_p T + p^(k-1)
    const Mat ch = M.phi * M.phi - M.phi.scale(ap) +
                   Mat::identity(q5, 2).scale(ip(q5, 5).pow(k - 1));
    CHECK(ch.is_zero());
    CHECK(invariants(M).ok());
  }
}

TEST_CASE("semistable modules") {
  for (int p : {3, 5, 7}) {
    auto E = semistable_context(p, 24);
    const Element w = Element::pi(E);
    CHECK((w * w).equals(ip(E, p)));
    for (int k = 2; k <= 8; ++k) {
      auto inf = semistable_module(E, k, std::nullopt);
      CHECK(inf.N.is_zero());
      CHECK(inf.L_infinite);
      CHECK(inf.fil_line[0].equals(Element::one(E)));
      CHECK(inf.fil_line[1].equals(Element::one(E)));
      CHECK(inf.phi.equals(Mat::diag({w.pow(k), w.pow(k - 2)})));

      const FieldValue L{ip(E, 1 + p), 3}; // v_p(L) = -3/2
      auto fin = semistable_module(E, k, L);
      CHECK(fin.N.apply({Element::one(E), Element::zero(E)})[1].equals(Element::one(E)));
      CHECK(fin.N.apply({Element::zero(E), Element::one(E)})[1].is_zero());
      CHECK_FALSE(fin.N.is_zero());
      CHECK((fin.N * fin.phi - (fin.phi * fin.N).scale(ip(E, p))).is_zero());
      // line through e1 + L e2
      CHECK((fin.fil_line[0] * L.num - fin.fil_line[1] * Element::pi_power(E, 3)).is_zero());
      const auto inv = invariants(fin);
      CHECK(inv.ok());
      CHECK(inv.vp_det == Rational(k - 1));
    }
  }
  CHECK_THROWS_AS(semistable_module(semistable_context(2, 10), 3, std::nullopt), Unsupported);
  CHECK_THROWS_AS(semistable_module(Context::qp(3, 10), 3, std::nullopt), std::invalid_argument);
}

TEST_CASE("custom modules enforce the invariants") {
  auto q3 = Context::qp(3, 12);
  const Vec e1{Element::one(q3), Element::zero(q3)};
  CHECK_THROWS_AS(PhiModule2::custom(q3, Mat::identity(q3, 2),
                                     Mat::from_ints(q3, {{0, 0}, {1, 0}}), 2, e1),
                  std::invalid_argument);
  CHECK_THROWS_AS(PhiModule2::custom(q3, Mat::identity(q3, 2),
                                     Mat::from_ints(q3, {{1, 0}, {0, 0}}), 2, e1),
                  std::invalid_argument);
  CHECK_THROWS_AS(PhiModule2::custom(q3, Mat::from_ints(q3, {{1, 1}, {1, 1}}), Mat(q3, 2, 2), 2, e1),
                  std::invalid_argument);
  CHECK_NOTHROW(PhiModule2::custom(q3, Mat::from_ints(q3, {{3, 0}, {0, 1}}),
                                   Mat::from_ints(q3, {{0, 0}, {1, 0}}), 2, e1));
}

TEST_CASE("weak admissibility") {
  std::mt19937_64 rng(17);
  for (int p : {3, 5, 7}) {
    auto ctx = Context::qp(p, p == 3 ? 30 : 20);
    for (int t = 0; t < 25; ++t) {
      const int k = 2 + static_cast<int>(rng() % 9);
      Element ap = Element::random(ctx, rng, 1 + static_cast<int>(rng() % 5));
      if (t == 0)
        ap = Element::zero(ctx);
      auto M = crystalline_module(k, ap);
      auto rep = weak_admissibility(M);
      CAPTURE(k);
      CAPTURE(ap.str());
      REQUIRE(rep.verdict == Admissibility::Admissible);
      // Newton over Hodge: slopes in [0, k-1], and they match the hull
      const auto hull = hull_slopes(ap.is_zero() ? Rational(0) : ap.valuation().vp(), ap.is_zero(),
                                    Rational(k - 1));
      std::multiset<Rational> got;
      for (const auto &l : rep.lines) {
        CHECK(l.slope >= Rational(0));
        CHECK(l.slope <= Rational(k - 1));
        CHECK(l.hodge == 0);
        got.insert(l.slope);
      }
      if (rep.lines.size() == 2)
        CHECK(got == std::multiset<Rational>(hull.begin(), hull.end()));
      else
        CHECK(*got.begin() == hull[0]);
    }
  }
  for (int p : {3, 5}) {
    auto E = semistable_context(p, 24);
    for (int k = 2; k <= 10; ++k) {
      for (const auto &L : {std::optional<FieldValue>{}, std::optional<FieldValue>{FieldValue{ip(E, 2), 0}},
                            std::optional<FieldValue>{FieldValue{ip(E, 1), 5}}}) {
        auto rep = weak_admissibility(semistable_module(E, k, L));
        CHECK(rep.verdict == Admissibility::Admissible);
        CHECK(rep.t_N == rep.t_H);
        // slopes are (k - 2)/2 on ker N, plus k/2 at infinity
        for (const auto &l : rep.lines)
          CHECK((l.slope == Rational(k - 2, 2) || l.slope == Rational(k, 2)));
        CHECK(rep.lines.size() == (L ? 1u : 2u));
      }
    }
  }
  auto q3 = Context::qp(3, 12);
  const Vec e1{Element::one(q3), Element::zero(q3)}, e12{Element::one(q3), Element::one(q3)};
  // identity with a positive jump: t_N = 0 != k - 1
  auto id = PhiModule2::custom(q3, Mat::identity(q3, 2), Mat(q3, 2, 2), 3, e1);
  auto r0 = weak_admissibility(id);
  CHECK(r0.verdict == Admissibility::NotAdmissible);
  CHECK(r0.t_N == Rational(0));
  // scalar p I with k = 3 balances t_N but Fil^1 is stable of slope 1 < 2
  auto sc = weak_admissibility(PhiModule2::custom(q3, Mat::identity(q3, 2).scale(ip(q3, 3)),
                                                  Mat(q3, 2, 2), 3, e1));
  CHECK(sc.verdict == Admissibility::NotAdmissible);
  CHECK(sc.t_N == sc.t_H);
  // ordinary diag(1, p^(k-1)): Fil^1 must avoid the unit eigenline
  const Mat ord = Mat::from_ints(q3, {{1, 0}, {0, 9}});
  CHECK(weak_admissibility(PhiModule2::custom(q3, ord, Mat(q3, 2, 2), 3, e1)).verdict ==
        Admissibility::NotAdmissible);
  CHECK(weak_admissibility(PhiModule2::custom(q3, ord, Mat(q3, 2, 2), 3, e12)).verdict ==
        Admissibility::Admissible);
}

TEST_CASE("quadratic roots") {
  std::mt19937_64 rng(2);
  for (int p : {3, 5}) {
    auto ctx = Context::qp(p, 24);
    for (int t = 0; t < 30; ++t) {
      const Element tr = Element::random(ctx, rng, static_cast<int>(rng() % 3));
      const Element d = Element::random_unit(ctx, rng).mul_pi(static_cast<int>(rng() % 5));
      auto qr = quadratic_roots(tr, d);
      REQUIRE(qr.status == RootStatus::Ok);
      REQUIRE(qr.roots.size() == 2);
      const auto &emb = *qr.emb;
      for (const auto &r : qr.roots)
        CHECK((r * r - emb(tr) * r + emb(d)).is_zero());
      CHECK((qr.roots[0] + qr.roots[1]).equals(emb(tr)));
      CHECK(qr.roots[0].valuation().vp() <= qr.roots[1].valuation().vp());
      const auto s = newton_slopes(tr, d);
      CHECK(qr.roots[0].valuation().vp() == s[0]);
      CHECK(qr.roots[1].valuation().vp() == s[1]);
    }
  }
  // distinct slopes work for p = 2 as well
  auto q2 = Context::qp(2, 20);
  auto r2 = quadratic_roots(ip(q2, 2), ip(q2, 8));
  REQUIRE(r2.status == RootStatus::Ok);
  CHECK(r2.roots[0].valuation().pi_units == 1);
  CHECK(r2.roots[1].valuation().pi_units == 2);
  CHECK_THROWS_AS(quadratic_roots(ip(q2, 2), ip(q2, 4)), Unsupported);
  // no extension when refused
  auto q5 = Context::qp(5, 12);
  CHECK(quadratic_roots(ip(q5, 5), ip(q5, 25), false).status == RootStatus::NeedsExtension);
}

TEST_CASE("triangulation parameters") {
  auto q5 = Context::qp(5, 24);
  auto T = triangulation_parameters(3, ip(q5, 5));
  CHECK(T.field->f() == 2); // T^2 - 5T + 25 has discriminant -75
  CHECK(T.phi1.valuation().vp() == Rational(1));
  CHECK(T.phi2.valuation().vp() == Rational(1));
  CHECK(T.delta1.value_at_p.vp() == Rational(1));
  CHECK(T.delta1.weight == 0);
  CHECK(T.delta2.weight == -2);

  // ramified: T^2 - 3T + 3 over Q_3 has discriminant -3
  auto q3 = Context::qp(3, 16);
  auto R = triangulation_parameters(2, ip(q3, 3));
  CHECK(R.field->e() == 2);
  CHECK(R.phi1.valuation().vp() == Rational(1, 2));

  std::mt19937_64 rng(6);
  for (int p : {3, 5, 7}) {
    auto ctx = Context::qp(p, p == 3 ? 30 : 20);
    for (int t = 0; t < 20; ++t) {
      const int k = 2 + static_cast<int>(rng() % 9);
      const Element ap = Element::random_unit(ctx, rng).mul_pi(1 + static_cast<int>(rng() % 4));
      auto tp = triangulation_parameters(k, ap);
      CHECK(tp.phi1.valuation().vp() + tp.phi2.valuation().vp() == Rational(k - 1));
      CHECK(tp.phi1.valuation().vp() <= tp.phi2.valuation().vp());
      // delta_i(p) p^(k_i) = phi_i
      CHECK(tp.delta1.value_at_p.equals(FieldValue::of(tp.phi1)));
      CHECK((tp.delta2.value_at_p * FieldValue::p_power(tp.field, k - 1))
                .equals(FieldValue::of(tp.phi2)));
    }
  }
}

TEST_CASE("character regularity matches the enumeration") {
  for (int p : {3, 5}) {
    auto ctx = Context::qp(p, p == 3 ? 30 : 20);
    std::set<std::pair<int, int>> irregular; // (weight, exponent of p at p)
    for (int i = 0; i <= 10; ++i) {
      irregular.insert({i, i});
      irregular.insert({1 - i, -i});
    }
    for (int w = -9; w <= 10; ++w)
      for (int j = -12; j <= 12; ++j) {
        const Character d{w, FieldValue::p_power(ctx, j)};
        const auto r = regularity(d);
        CHECK(r.regular == !irregular.count({w, j}));
        // a unit twist of the value is always regular
        const Character twisted{w, FieldValue::p_power(ctx, j) * FieldValue::of(ip(ctx, 1 + p))};
        CHECK(regularity(twisted).regular);
      }
    CHECK(regularity(character_x(ctx).pow(4)).form == "x^i");
    auto r = regularity(character_chi(ctx) * character_x(ctx).pow(-3));
    CHECK(r.form == "chi x^-i");
    CHECK(r.i == 3);
  }
}

TEST_CASE("characters are multiplicative") {
  std::mt19937_64 rng(1);
  auto q5 = Context::qp(5, 20);
  auto E = semistable_context(5, 40);
  const std::vector<Character> chars{
      {3, FieldValue::of(ip(q5, 7))}, character_abs(q5), character_chi(q5),
      {-2, FieldValue::pi_power(E, 3)}};
  for (const auto &d : chars)
    for (int t = 0; t < 20; ++t) {
      const FieldValue a{Element::random_unit(q5, rng).mul_pi(static_cast<int>(rng() % 3)),
                         static_cast<int>(rng() % 3)};
      const FieldValue b{Element::random_unit(q5, rng), static_cast<int>(rng() % 2)};
      CHECK(evaluate(d, a * b).equals(evaluate(d, a) * evaluate(d, b)));
    }
  CHECK(evaluate(character_chi(q5), FieldValue::of(ip(q5, 5))).equals(FieldValue::of(ip(q5, 1))));
}

TEST_CASE("semistable triangulation parameters") {
  for (int p : {3, 5}) {
    auto E = semistable_context(p, 40);
    auto Qp = Context::qp(p, 20);
    const FieldValue w = FieldValue::of(Element::pi(E));
    std::mt19937_64 rng(p);
    for (int k = 2; k <= 6; ++k) {
      auto [d1, d2] = semistable_parameters(E, k);
      CHECK(d1.value_at_p.equals(w));
      CHECK(d2.value_at_p.equals(w * FieldValue::p_power(E, 1 - k)));
      CHECK(d1.weight == 0);
      CHECK(d2.weight == -k);
      // alpha(y) = w^v |y|^-1 = w^v p^v for y = p^v u
      for (int t = 0; t < 10; ++t) {
        const int v = static_cast<int>(rng() % 5) - 2;
        const Element u = Element::random_unit(Qp, rng);
        const FieldValue y = FieldValue::of(u) * FieldValue::p_power(Qp, v);
        const auto emb = Embedding::make(Qp, E);
        const FieldValue al = w.pow(v) * FieldValue::p_power(E, v);
        const FieldValue absy = FieldValue::p_power(E, -v);
        const FieldValue yE = FieldValue::of(emb(u)) * FieldValue::p_power(E, v);
        CHECK(evaluate(d1, y).equals(absy * al));
        CHECK(evaluate(d2, y).equals(yE.pow(-k) * al));
      }
    }
  }
}

TEST_CASE("alpha") {
  CHECK(alpha(1, 3) == 0);
  CHECK(alpha(9, 3) == 5);
  for (int p : {2, 3, 5, 7}) {
    i64 prev = 0;
    for (i64 km1 = 0; km1 <= 200; ++km1) {
      // independent: floor sums over n with an explicit power
      i64 oracle = 0;
      for (int n = 1; n < 40; ++n) {
        i64 pw = 1;
        bool big = false;
        for (int j = 0; j < n - 1 && !big; ++j) {
          pw *= p;
          big = pw > km1;
        }
        if (big || pw * (p - 1) > km1)
          break;
        oracle += km1 / (pw * (p - 1));
      }
      CHECK(alpha(km1, p) == oracle);
      if (km1 < p - 1)
        CHECK(alpha(km1, p) == 0);
      CHECK(alpha(km1, p) >= prev);
      CHECK(Rational(alpha(km1, p)) <= Rational(km1 * p, (p - 1) * (p - 1)));
      prev = alpha(km1, p);
    }
  }
}

TEST_CASE("congruence radii") {
  const auto c = crystalline_congruence_disc(2, 5, Rational(1), 1);
  CHECK(c.pointwise_bound == Rational(2));
  CHECK(c.constancy_radius == Rational(3));
  for (int p : {2, 3, 5, 7})
    for (int k = 2; k <= 30; ++k)
      for (Rational v : {Rational(1), Rational(1, 2), Rational(7, 3)})
        for (int n = 1; n <= 4; ++n) {
          const auto a = crystalline_congruence_disc(k, p, v, n);
          const auto b = crystalline_congruence_disc(k, p, v, n + 1);
          CHECK(b.pointwise_bound - a.pointwise_bound == Rational(1));
          CHECK(b.constancy_radius - a.constancy_radius == Rational(1));
          CHECK(uniform_reduction_threshold(k, p, v, n, 1) >= a.pointwise_bound);
          CHECK(a.pointwise_bound == 2 * v + alpha(k - 1, p) + n - 1);
        }
  CHECK_THROWS(crystalline_congruence_disc(2, 5, Rational(0), 1));

  CHECK(semistable_congruence_bound(4, 3, 1) == Rational(0));
  CHECK(semistable_congruence_bound(6, 5, 2) == Rational(-2));
  for (int p : {3, 5, 7})
    for (int k = 4; k <= 30; ++k) {
      i64 vf = 0;
      for (i64 j = 2; j <= k - 2; ++j)
        vf += int_vp(j, p);
      CHECK(vp_factorial(k - 2, p) == vf);
      for (int n = 1; n <= 4; ++n) {
        CHECK(semistable_congruence_bound(k, p, n) == Rational(3 - n) - Rational(k, 2) - vf);
        CHECK(semistable_congruence_bound(k, p, n + 1) == semistable_congruence_bound(k, p, n) - 1);
      }
    }
  CHECK_THROWS(semistable_congruence_bound(3, 3, 1));
  CHECK_THROWS_AS(semistable_congruence_bound(6, 2, 1), Unsupported);
  CHECK(weight_direction_threshold(4, 2) == 5);
  CHECK_THROWS(weight_direction_threshold(0, 2));
}
