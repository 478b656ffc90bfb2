#pragma once

#include "padic/extension.hpp"
#include "padic/matrix.hpp"
#include "padic/rational.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace padic {

// Element of E written as pi^(-shift) * num.
struct FieldValue {
  Element num;
  int shift = 0;

  static FieldValue of(const Element &x) { return {x, 0}; }
  static FieldValue pi_power(const CtxPtr &ctx, int k); // k of either sign
  static FieldValue p_power(const CtxPtr &ctx, int k);

  const CtxPtr &context() const { return num.context(); }
  bool is_zero() const { return num.is_zero(); }
  int vpi() const;     // pi-adic valuation
  Rational vp() const; // normalized so that v_p(p) = 1
  FieldValue operator*(const FieldValue &o) const;
  FieldValue inverse() const;
  FieldValue pow(int k) const;
  FieldValue normalized() const; // shift lowered as far as exact division allows
  bool equals(const FieldValue &o) const;
  std::optional<Element> integral() const;
  std::string str() const;
};

// ---- characters of Q_p^x ----

// Locally algebraic with trivial finite-order part: u -> u^weight on Z_p^x,
// p -> value_at_p.
struct Character {
  int weight = 0;
  FieldValue value_at_p;

  Character operator*(const Character &o) const;
  Character pow(int k) const;
};

Character character_x(const CtxPtr &ctx);   // the identity character x
Character character_abs(const CtxPtr &ctx); // |x|
Character character_chi(const CtxPtr &ctx); // x|x|: identity on units, 1 at p

// y lives in a field with e = 1 (its p-adic valuation is an integer).
FieldValue evaluate(const Character &delta, const FieldValue &y);

struct Regularity {
  bool regular = true;
  std::string form; // "x^i" or "chi x^-i" when not regular
  int i = -1;
};
// Not regular exactly when delta = x^i or chi x^(-i) for some i >= 0.
Regularity regularity(const Character &delta);

// ---- quadratic polynomials T^2 - t T + d ----

std::array<Rational, 2> newton_slopes(const Element &t, const Element &d);

enum class RootStatus { Ok, NeedsExtension };

struct QuadraticRoots {
  RootStatus status = RootStatus::Ok;
  CtxPtr field;                 // where the roots live
  std::optional<Embedding> emb; // base -> field
  std::vector<Element> roots;   // ascending valuation; a double root appears twice
  std::string note;
};

// Newton polygon split + fixed-point lifting for distinct slopes, the
// quadratic formula otherwise (p odd). A quadratic extension is built when the
// base is Q_p and the discriminant is not a square there.
QuadraticRoots quadratic_roots(const Element &t, const Element &d, bool allow_extension = true);

// ---- filtered (phi, N)-modules of rank 2 ----

enum class PhiKind { Crystalline, Semistable, Custom };
std::string to_string(PhiKind k);

struct PhiModule2 {
  CtxPtr ctx;
  Mat phi, N;
  int k = 2;    // Hodge jumps 0 and k-1
  Vec fil_line; // primitive generator of Fil^1
  PhiKind kind = PhiKind::Custom;
  std::optional<Element> a_p;         // crystalline
  std::optional<FieldValue> L_inv;    // semistable, nullopt with L_infinite
  bool L_infinite = false;

  // Validates N^2 = 0, N phi = p phi N, det phi != 0 and a nonzero line.
  static PhiModule2 custom(const CtxPtr &ctx, Mat phi, Mat N, int k, Vec fil_line);
  std::string str() const;
};

struct PhiInvariants {
  bool n_squared_zero = false;
  bool commutation = false; // N phi = p phi N
  Rational vp_det;
  bool hodge_balanced = false; // v_p(det phi) = k - 1
  bool ok() const { return n_squared_zero && commutation && hodge_balanced; }
};
PhiInvariants invariants(const PhiModule2 &M);

// phi = [[0, -1], [p^(k-1), a_p]], Fil^1 = E e1.
PhiModule2 crystalline_module(int k, const Element &a_p);

// Q_p(w) with w^2 = p.
CtxPtr semistable_context(int p, int precision);
// phi = diag(w^k, w^(k-2)), N = [[0, 0], [1, 0]] (zero at infinity),
// Fil^1 = E (e1 + L e2) (E (e1 + e2) at infinity).
PhiModule2 semistable_module(const CtxPtr &ctx, int k, const std::optional<FieldValue> &L_inv);

enum class Admissibility { Admissible, NotAdmissible, NeedsExtension };
std::string to_string(Admissibility a);

struct StableLine {
  Vec v;          // over the report's field
  Element eigenvalue;
  Rational slope; // v_p(eigenvalue)
  int hodge = 0;  // k - 1 on the filtration line, else 0
  bool ok = false;
};

struct AdmissibilityReport {
  Admissibility verdict = Admissibility::NeedsExtension;
  Rational t_N, t_H;
  CtxPtr field;
  std::vector<StableLine> lines; // the certificate
  std::string reason;
};

AdmissibilityReport weak_admissibility(const PhiModule2 &M);

struct Triangulation {
  CtxPtr field;
  Element phi1, phi2; // v(phi1) <= v(phi2)
  Character delta1, delta2;
};

// delta_1 = (0, phi1), delta_2 = (-(k-1), phi2 p^(1-k)). Throws Unsupported
// when the roots need an extension that cannot be built.
Triangulation triangulation_parameters(int k, const Element &a_p);
// |x| alpha and x^-k alpha, alpha = w^(v_p(x)) |x|^(-1).
std::pair<Character, Character> semistable_parameters(const CtxPtr &ctx, int k);

// ---- explicit radii ----

// sum_{n >= 1} floor(km1 / (p^(n-1) (p-1)))
i64 alpha(i64 km1, int p);
// v_p(m!) by Legendre's formula
i64 vp_factorial(i64 m, int p);

struct CrystallineDisc {
  Rational disc_radius;      // 2 v + alpha(k-1)
  Rational pointwise_bound;  // strict: v_p(a_p - a_p0) > this
  Rational constancy_radius; // weak: v_p(a_p - a_p0) >= this
};
CrystallineDisc crystalline_congruence_disc(int k, int p, Rational v_ap0, int n);
// 2 v + alpha(k-1) + e n, the older uniform threshold.
Rational uniform_reduction_threshold(int k, int p, Rational v_ap0, int n, int e);
// 2 - k/2 - v_p((k-2)!) + 1 - n; needs k >= 4, p != 2.
Rational semistable_congruence_bound(int k, int p, int n);
// Weight direction: v_p(k - k0) > m + n - 1 with m supplied by the caller.
i64 weight_direction_threshold(i64 m, int n);

} // namespace padic
