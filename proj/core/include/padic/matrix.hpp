#pragma once

#include "padic/element.hpp"
#include "padic/extension.hpp"
#include "padic/fq.hpp"

#include <random>
#include <string>
#include <vector>

namespace padic {

using Vec = std::vector<Element>;

// Dense matrix over O_E (entries carry their own precision).
class Mat {
public:
  Mat() = default;
  Mat(CtxPtr ctx, int rows, int cols); // zeros at full precision

  static Mat identity(const CtxPtr &ctx, int d);
  static Mat from_ints(const CtxPtr &ctx, const std::vector<std::vector<i64>> &rows);
  static Mat diag(const Vec &d);
  static Mat random(const CtxPtr &ctx, int r, int c, std::mt19937_64 &rng);
  // Random matrix with unit determinant.
  static Mat random_unimodular(const CtxPtr &ctx, int d, std::mt19937_64 &rng);

  int rows() const { return r_; }
  int cols() const { return c_; }
  const CtxPtr &context() const { return ctx_; }
  Element &operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const Element &operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  Mat operator*(const Mat &o) const;
  Mat operator+(const Mat &o) const;
  Mat operator-(const Mat &o) const;
  Mat scale(const Element &s) const;
  Mat mul_pi(int k) const;
  Mat div_pi(int k) const; // exact, needs min_valuation >= k
  Vec apply(const Vec &v) const;
  Vec column(int j) const;
  Mat transpose() const;
  Mat pow(int k) const; // k >= 0

  Element trace() const;
  // Elimination on minimal-valuation pivots; exact over O_E up to precision.
  Element det() const;
  Mat adjugate() const; // cofactor matrix transpose
  Mat inverse() const;  // needs a unit determinant

  Mat reduce(int m) const;
  Mat with_precision(int m) const;
  int precision() const;     // minimum entry precision
  int min_valuation() const; // entries indistinguishable from zero count as their precision

  bool equals(const Mat &o) const; // entrywise at min precision
  bool is_identity() const;
  bool is_zero() const;
  std::string str() const;

private:
  CtxPtr ctx_;
  int r_ = 0, c_ = 0;
  Vec a_;
};

Mat apply(const Embedding &emb, const Mat &m);
FMat reduce_fq(const Fq &F, const Mat &m);
Mat lift_fq(const Fq &F, const FMat &m);

// Matrix over E written as pi^(-shift) * num with num integral.
struct QMat {
  Mat num;
  int shift = 0;

  static QMat integral(const Mat &m) { return {m, 0}; }
  int rows() const { return num.rows(); }
  QMat operator*(const QMat &o) const { return {num * o.num, shift + o.shift}; }
  QMat inverse() const; // needs a nonzero determinant
  // Integral matrix when every entry has v >= shift; throws DomainError otherwise.
  Mat to_integral() const;
  bool is_integral() const;
  QMat normalized() const; // smallest shift
  std::string str() const;
};

// Linear algebra over the chain ring O_E/pi^m.
struct ChainSmith {
  int m = 0;
  int rank = 0;               // number of pivots of valuation < m
  std::vector<int> invariants; // pivot valuations, ascending order of discovery
  Mat Q;                      // column transform: A*Q = P^-1 * diag
};

ChainSmith chain_smith(const Mat &A, int m);
// Generators of {x in (O/pi^m)^n : A x = 0}.
std::vector<Vec> chain_kernel(const Mat &A, int m);
// Number of elements of O/pi^m-module generated by the columns, as a pi-adic length.
int chain_length(const Mat &A, int m);

} // namespace padic
