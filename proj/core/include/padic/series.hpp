#pragma once

#include "padic/element.hpp"
#include "padic/extension.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace padic {

enum class VarKind { Bounded, Open };

using Monomial = std::vector<int>;
using Terms = std::map<Monomial, Element>;

struct Relation {
  enum class Kind { None, Annulus, Cover };
  Kind kind = Kind::None;
  int m = 0;        // annulus: vars 0 and 1 satisfy zeta1*zeta2 = pi^m
  int d = 0;        // cover: Y^d = g
  int y_index = -1; // cover variable
  Terms g;          // cover right-hand side, free of Y
};

struct AlgebraModel;
using ModelPtr = std::shared_ptr<const AlgebraModel>;

struct AlgebraModel {
  CtxPtr base;
  std::vector<std::string> vars;
  std::vector<VarKind> kinds;
  Relation rel;
  int degree_cap = 8;

  // O_L<bounded>[[open]]
  static ModelPtr disc(CtxPtr base, std::vector<std::string> bounded,
                       std::vector<std::string> open, int degree_cap);
  // O_L<z1, z2>/(z1 z2 - pi^m); degree_cap applies to recentered open charts.
  static ModelPtr annulus(CtxPtr base, int m, int degree_cap = 12, std::string z1 = "z1",
                          std::string z2 = "z2");
  // O_L[[t]][y]/(y^d - g(t)); g given by coefficients g[i] of t^i.
  static ModelPtr cover(CtxPtr base, int d, const std::vector<Element> &g, int degree_cap,
                        std::string t = "T", std::string y = "Y");

  int nvars() const { return static_cast<int>(vars.size()); }
  int index(const std::string &name) const; // -1 when absent
  int open_degree(const Monomial &mono) const;
  bool has_open() const;
  std::string describe() const;
};

class Series {
public:
  Series() = default;
  explicit Series(ModelPtr model);
  Series(ModelPtr model, Terms terms, int prec);

  static Series constant(ModelPtr model, const Element &c);
  static Series constant(ModelPtr model, i64 c);
  static Series variable(ModelPtr model, int index);
  static Series variable(ModelPtr model, const std::string &name);

  const ModelPtr &model() const { return model_; }
  const Terms &terms() const { return terms_; }
  int precision() const { return prec_; }
  Element constant_term() const;
  Element coefficient(const Monomial &mono) const;
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  Series operator+(const Series &o) const;
  Series operator-(const Series &o) const;
  Series operator-() const;
  Series operator*(const Series &o) const;
  Series scale(const Element &c) const;
  Series pow(int k) const;
  Series with_precision(int P) const;

  // Same model (by pointer) and identical coefficients at equal precision.
  bool identical(const Series &o) const;
  bool equals(const Series &o) const; // difference vanishes at min precision

  std::string str() const;

private:
  void normalize();
  ModelPtr model_;
  Terms terms_;
  int prec_ = 0;
};

// Values at a point over an extension E of the base field.
struct ModelPoint {
  ModelPtr model;
  Embedding emb;
  std::vector<Element> coords;

  const CtxPtr &field() const { return emb.E; }
  std::string str() const;
};

// Checks valuation constraints and the relation; throws DomainError /
// RelationError.
void validate_point(const ModelPoint &pt);

// f(point) with precision min(arithmetic precision, (D+1) * min open v_pi).
Element evaluate(const Series &f, const ModelPoint &point);

// Same, for series known to be exact polynomials (no truncated tail).
Element evaluate_polynomial(const Series &f, const ModelPoint &point);

// Substitutes images (series over target) for each variable of f.
// tail_cap bounds the precision of the output (truncation of f's tail).
Series substitute(const Series &f, const ModelPtr &target, const std::vector<Series> &images,
                  int tail_cap);

// Chart realizing var -> center + pi^k * new_var.
struct Recentering {
  ModelPtr source, target;
  std::vector<Series> images; // one per source variable
  int tail_cap = 0;
  int pivot = -1;             // relation presets: source variable kept as coordinate
  std::vector<Element> center;
  std::vector<int> scales;
  VarKind new_kind = VarKind::Bounded;

  // Source-model coordinates of the target point u (over the same field).
  ModelPoint pull_back(const ModelPoint &u) const;
  // Target coordinates of a source point in the chart (inverse map).
  ModelPoint push_forward(const ModelPoint &y) const;
};

// scales are pi_L exponents, one per variable (relation presets read the
// pivot's entry). Throws Unsupported with a reason when the relation has no
// closed-form substitution.
Recentering make_recentering(const ModelPtr &model, const std::vector<Element> &center,
                             const std::vector<int> &scales, VarKind new_kind);
Series recenter_rescale(const Series &f, const Recentering &chart);

struct ConstancyVerdict {
  bool constant = false;
  int precision = 0;        // verdict is rigorous at this pi-adic precision
  std::optional<Monomial> witness;
  Element value;            // constant term mod pi^n
};

// Every non-constant coefficient has v_pi >= n.
ConstancyVerdict is_constant_mod(const Series &f, int n);

// Random integral series in normal form.
Series random_series(const ModelPtr &model, std::mt19937_64 &rng, int max_terms, int max_degree);

std::string monomial_str(const AlgebraModel &model, const Monomial &mono);

} // namespace padic
