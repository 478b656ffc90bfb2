#pragma once

#include "padic/element.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace padic {

// Residue field O_E/pi_E with table arithmetic. Elements are indices
// sum_j c_j p^j for the residue class of sum_j c_j omega^j.
class Fq {
public:
  explicit Fq(const CtxPtr &ctx); // q <= 1024
  using E = std::uint16_t;

  int p() const { return p_; }
  int q() const { return q_; }
  const CtxPtr &context() const { return ctx_; }

  E add(E a, E b) const { return add_[a * q_ + b]; }
  E sub(E a, E b) const { return add_[a * q_ + neg_[b]]; }
  E mul(E a, E b) const { return mul_[a * q_ + b]; }
  E neg(E a) const { return neg_[a]; }
  E inv(E a) const; // a != 0
  E from_int(std::int64_t v) const;

  E reduce(const Element &x) const; // needs precision >= 1
  Element lift(E a) const;          // representative in O_E at full precision

private:
  CtxPtr ctx_;
  int p_ = 0, f_ = 0, q_ = 0;
  std::vector<E> add_, mul_, neg_, inv_;
};

struct FMat {
  int r = 0, c = 0;
  std::vector<Fq::E> a;

  FMat() = default;
  FMat(int rows, int cols) : r(rows), c(cols), a(static_cast<size_t>(rows) * cols, 0) {}
  static FMat identity(int d);
  Fq::E &operator()(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
  Fq::E operator()(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }
  bool operator==(const FMat &o) const { return r == o.r && c == o.c && a == o.a; }
  bool is_zero() const;
};

FMat fmul(const Fq &F, const FMat &x, const FMat &y);
FMat fadd(const Fq &F, const FMat &x, const FMat &y);
FMat fscale(const Fq &F, Fq::E s, const FMat &x);
FMat ftranspose(const FMat &x);
Fq::E ftrace(const Fq &F, const FMat &x);
Fq::E fdet(const Fq &F, FMat x);
std::optional<FMat> finverse(const Fq &F, const FMat &x);
int frank(const Fq &F, FMat x);
// Basis of {v : x v = 0}, as columns of the returned matrix (cols x k).
FMat fnullspace(const Fq &F, const FMat &x);
// Row echelon basis of the row span.
FMat frow_basis(const Fq &F, const FMat &rows);
FMat fsubmatrix(const FMat &x, int r0, int c0, int nr, int nc);
FMat frandom(const Fq &F, int r, int c, std::mt19937_64 &rng);
std::string fstr(const FMat &x);

// Incremental row-echelon basis of a subspace of F_q^n.
class FSpan {
public:
  FSpan(const Fq &F, int n) : F_(&F), n_(n) {}
  // Adds v when independent; returns true if the span grew.
  bool add(std::vector<Fq::E> v);
  bool contains(std::vector<Fq::E> v) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<Fq::E>> &basis() const { return orig_; } // vectors as added

private:
  void sift(std::vector<Fq::E> &v) const;
  const Fq *F_;
  int n_;
  std::vector<std::vector<Fq::E>> rows_; // reduced, pivot at pivots_[i] equal to 1
  std::vector<int> pivots_;
  std::vector<std::vector<Fq::E>> orig_;
};

} // namespace padic
