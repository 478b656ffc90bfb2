#pragma once

#include "padic/context.hpp"
#include "padic/rational.hpp"

#include <random>
#include <string>
#include <vector>

namespace padic {

// pi-adic valuation, or a lower bound when the element cannot be told
// apart from zero at its precision.
struct Valuation {
  int pi_units = 0;
  bool lower_bound = false;
  int e = 1;

  Rational vp() const { return Rational(pi_units, e); }
  std::string str() const;
};

class Element {
public:
  Element() = default;
  Element(CtxPtr ctx, std::vector<i64> coords, int prec);

  static Element zero(const CtxPtr &ctx);
  static Element one(const CtxPtr &ctx);
  static Element from_int(const CtxPtr &ctx, i64 v);
  static Element pi(const CtxPtr &ctx);
  static Element omega(const CtxPtr &ctx);
  static Element pi_power(const CtxPtr &ctx, int k);
  // Uniform coordinates, then multiplied by pi^val.
  static Element random(const CtxPtr &ctx, std::mt19937_64 &rng, int val = 0);
  static Element random_unit(const CtxPtr &ctx, std::mt19937_64 &rng);

  const CtxPtr &context() const { return ctx_; }
  const std::vector<i64> &coords() const { return c_; }
  i64 coord(int i, int j) const { return c_[i * ctx_->f() + j]; }
  int precision() const { return prec_; }
  bool valid() const { return static_cast<bool>(ctx_); }

  Valuation valuation() const;
  bool is_zero() const; // indistinguishable from zero
  bool is_unit() const;

  Element operator+(const Element &o) const;
  Element operator-(const Element &o) const;
  Element operator-() const;
  Element operator*(const Element &o) const;
  Element &operator+=(const Element &o) { return *this = *this + o; }
  Element &operator-=(const Element &o) { return *this = *this - o; }
  Element &operator*=(const Element &o) { return *this = *this * o; }
  Element pow(i64 k) const;
  Element inverse() const;          // requires a unit
  Element div_pi(int k) const;      // exact division, requires v >= k
  Element mul_pi(int k) const;
  // Residue mod pi^m; throws PrecisionError when m exceeds precision.
  Element reduce(int m) const;
  // Reinterpret the stored representative with a different precision.
  Element with_precision(int P) const;

  // Agreement up to the smaller precision.
  bool equals(const Element &o) const;
  // Exact representative equality (coords and precision).
  bool identical(const Element &o) const { return prec_ == o.prec_ && c_ == o.c_; }
  // True when the element is an integer 0 <= v < p^K (only the (0,0) coordinate).
  bool is_rational_integer() const;
  // Symmetric representative when the element is a rational integer.
  i64 balanced_integer() const;

  std::string str() const;

private:
  void canonicalize();
  CtxPtr ctx_;
  std::vector<i64> c_;
  int prec_ = 0;
};

Valuation valuation(const Element &x);
Element reduce_mod(const Element &x, int m);

// Smallest m with O_L/pi_L^n -> O_E/pi_E^m injective.
int gamma_exponent(int e_rel, int n);

} // namespace padic
