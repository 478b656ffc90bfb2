#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace padic {

using i64 = std::int64_t;

class Context;
using CtxPtr = std::shared_ptr<const Context>;

// Valuation ring of E = K(pi), K/Q_p unramified of degree f cut out by
// unram_poly, pi a root of a degree-e Eisenstein polynomial over O_K.
// Elements are stored modulo pi^N.
class Context {
public:
  // unram: monic, low-to-high integer coefficients, degree f.
  // eis: monic, low-to-high, degree e; each coefficient is a vector of f
  // coordinates in the omega basis.
  static CtxPtr make(int p, std::vector<i64> unram,
                     std::vector<std::vector<i64>> eis, int precision);

  static CtxPtr qp(int p, int precision);
  static CtxPtr unramified(int p, int f, int precision);
  // Totally ramified over Q_p, integer Eisenstein coefficients.
  static CtxPtr eisenstein(int p, const std::vector<i64> &eis, int precision);
  // E = L(pi_L^(1/r)): Eisenstein polynomial P_L(x^r).
  static CtxPtr ramified_over(const CtxPtr &L, int r, int precision);

  int p() const { return p_; }
  int f() const { return f_; }
  int e() const { return e_; }
  int precision() const { return N_; }
  int digits() const { return K_; } // p-adic digits stored, ceil(N/e)
  int degree() const { return e_ * f_; }
  i64 modulus() const { return pk_[K_]; }
  i64 p_power(int k) const { return pk_.at(k); }
  i64 residue_size() const; // p^f

  const std::vector<i64> &unram_poly() const { return unram_; }
  const std::vector<std::vector<i64>> &eis_poly() const { return eis_; }

  // Digits known for basis coordinate pi^i omega^j at absolute precision P.
  int coord_digits(int i, int P) const;

  // Same defining data (pointer identity not required).
  bool same_field(const Context &o) const;
  std::string describe() const;

  // Arithmetic helpers on O_K coordinate vectors (length f), modulo p^K.
  i64 add(i64 a, i64 b) const;
  i64 sub(i64 a, i64 b) const;
  i64 mul(i64 a, i64 b) const;
  i64 norm(i64 a) const;
  void mulK(const i64 *x, const i64 *y, i64 *out) const;

  // -(a_0/p)^{-1}: used when dividing by pi.
  const std::vector<i64> &u0_inverse() const { return u0_inv_; }

private:
  Context() = default;
  void validate() const;
  void init_tables();

  int p_ = 0, f_ = 1, e_ = 1, N_ = 0, K_ = 0;
  std::vector<i64> pk_;
  std::vector<i64> unram_;
  std::vector<std::vector<i64>> eis_;
  std::vector<std::vector<i64>> omega_red_; // omega^(f+s) in the omega basis
  std::vector<i64> u0_inv_;
};

// Smallest monic irreducible polynomial of degree f over F_p, lexicographic.
std::vector<i64> find_irreducible(int p, int f);
bool irreducible_mod_p(const std::vector<i64> &poly, int p);
bool is_prime(i64 n);

// Valuation of an integer, large value for 0.
int vp_int(i64 x, int p);

} // namespace padic
