#pragma once

#include "padic/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padic {

enum class DomainKind { WideOpenU, AffinoidV };

std::string to_string(DomainKind k);

// v_p(y[var] - center) > radius_vp (strict) or >= radius_vp.
struct DiscConstraint {
  int var = 0;
  Element center;
  Rational radius_vp;
  bool strict = false;
};

struct ClosedForm {
  std::string shape; // "disc", "polydisc" or "annulus"
  std::vector<DiscConstraint> constraints;
};

struct ResidueDomain {
  ModelPtr model;
  ModelPoint center;
  int n = 1;
  DomainKind kind = DomainKind::WideOpenU;
  std::vector<Series> gens;
  std::optional<ClosedForm> closed;

  // Least admissible pi_E-valuation of a generator value, E/L of index e_rel:
  // (n-1)e_rel + 1 for U, n e_rel for V.
  int threshold(int e_rel) const;
  std::string str() const;
};

// Generators var - x_var of I_x; x must be a point over the base field.
std::vector<Series> ideal_generators(const ModelPtr &model, const ModelPoint &x);

// n = 0 is allowed and gives the whole model.
ResidueDomain describe(const ModelPtr &model, const ModelPoint &x, int n, DomainKind kind);

// Generator-valuation predicate; U-kind verdicts are cross-checked against
// agreement of coordinates mod pi_E^gamma. Throws PrecisionError when undecidable.
bool member(const ResidueDomain &dom, const ModelPoint &y);
// Independent path through the closed-form disc data (rational v_p comparisons).
bool member_closed_form(const ResidueDomain &dom, const ModelPoint &y);

struct SampleResult {
  std::vector<ModelPoint> points;
  int attempts = 0;
  int no_root = 0;   // cover: g(t) has no d-th root in the extension
  int rejected = 0;  // candidate built but outside the domain
  bool exhausted = false;
  std::vector<std::string> diagnostics;
};

SampleResult sample(const ResidueDomain &dom, const CtxPtr &ext, int count, std::uint64_t seed);

// All d-th roots of c in its field (p must not divide d unless d = 1).
std::vector<Element> dth_roots(const Element &c, int d);

// Recentering onto the domain: scale pi^n with a bounded variable for V,
// pi^(n-1) with an open variable for U.
Recentering chart(const ResidueDomain &dom);

// Points of the same model over a field E, embedded from L.
ModelPoint embed_point(const ModelPoint &x, const Embedding &emb);

// The preset cover O_L[[T]][Y]/(Y^d - g(T)) over the disc O_L[[T]].
struct CoverLevel {
  int n = 0;
  int samples = 0;
  bool contain_u = true; // pi(U^(n)_x) inside U^(n)_y
  bool contain_v = true; // pi(V^(n)_x) inside V^(n)_y
  bool literal_u = true; // U^(n)_x = pi^-1 U^(n)_y on sampled lifts
  bool literal_v = true;
  bool matched_u = true; // U^(n)_x = pi^-1 U^(d(n-1)+1)_y on sampled lifts
  bool matched_v = true; // V^(n)_x = pi^-1 V^(dn)_y
  std::vector<std::string> witnesses;
};

struct CoverReport {
  bool single_fiber = false;
  int budget = 0;
  std::vector<CoverLevel> levels;
  // empirical thresholds: smallest n0 <= budget with equality for n0..budget
  std::optional<int> n0_literal, n0_matched;
  // exact argument, when the valuation identity v(T - t0) = d v(Y) applies
  std::optional<std::string> certificate;
  bool containments_hold() const;
};

CoverReport cover_compare(const ModelPtr &cover, const ModelPoint &x, int budget,
                          const std::vector<CtxPtr> &exts, int samples, std::uint64_t seed);

// The base disc model and projection of a cover point.
ModelPtr cover_base(const ModelPtr &cover);
ModelPoint project(const ModelPtr &base, const ModelPoint &upstairs);

} // namespace padic
