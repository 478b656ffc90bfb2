#pragma once

#include "padic/domain.hpp"
#include "padic/lattice.hpp"
#include "padic/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padic {

// Square matrix of series over one model.
struct SMat {
  ModelPtr model;
  int d = 0;
  std::vector<Series> a;

  static SMat identity(const ModelPtr &model, int d);
  Series &operator()(int i, int j) { return a[static_cast<size_t>(i) * d + j]; }
  const Series &operator()(int i, int j) const { return a[static_cast<size_t>(i) * d + j]; }
  SMat operator*(const SMat &o) const;
  SMat scale(const Series &s) const;
  Series trace() const;
  Series det() const;
  SMat adjugate() const;
  bool equals(const SMat &o) const;
  std::string str() const;
};

// 1/f for f = unit constant + topologically nilpotent part; throws DomainError
// when a non-constant monomial free of open variables has a unit coefficient.
Series inverse_unit(const Series &f);

struct RepFamily {
  GroupPresentation group;
  int dim = 0;
  ModelPtr model;
  std::vector<SMat> gens;
  std::vector<SMat> inv; // empty when some determinant is not a unit series

  // Builds inverses from the adjugate; checks finite-group relations as series identities.
  static RepFamily make(GroupPresentation group, ModelPtr model, std::vector<SMat> gens);
  SMat image(const Word &w) const;
  Series trace_of_word(const Word &w) const { return image(w).trace(); }
};

IntegralRep specialize(const RepFamily &fam, const ModelPoint &point);

struct EntryWitness {
  int generator = 0, row = 0, col = 0;
  Monomial monomial;
};

struct StrictVerdict {
  bool constant = false;
  int n = 0;
  std::optional<EntryWitness> witness;
  std::vector<Mat> constant_model; // generator images over O_L/pi^n when constant
};

// Every entry of every generator is constant mod pi^n after recentering.
StrictVerdict strict_constancy_check(const RepFamily &fam, const Recentering &chart, int n);

struct FamilyWitness {
  ModelPoint a, b;
  int gamma = 0;
  std::optional<Word> trace_word; // traces already differ on this word
  IsoResult iso;
  std::string str(const GroupPresentation &g) const;
};

struct FamilyExtensionAudit {
  CtxPtr ext;
  int gamma = 0;
  int sampled = 0;
  int failures = 0;
  int undecided = 0;
  int inconclusive = 0;
  std::vector<std::string> diagnostics;
};

struct FamilyAudit {
  bool pass = true;
  bool inconclusive = false;
  int n = 0;
  int word_cap = 0;
  std::vector<FamilyExtensionAudit> per_ext;
  std::optional<FamilyWitness> witness;
};

// Compares the specialization at each sampled point with the center's, as
// O_E/pi_E^gamma[G]-modules: traces on words up to word_cap, then iso_mod.
FamilyAudit family_constancy_audit(const RepFamily &fam, const ResidueDomain &dom, int n,
                                   const std::vector<CtxPtr> &exts, int samples, int word_cap,
                                   std::uint64_t seed);
FamilyAudit family_constancy_audit(const RepFamily &fam, const ModelPoint &center,
                                   const std::vector<ModelPoint> &points, int n, int word_cap,
                                   std::uint64_t seed = 1);

enum class TraceAlgebraVerdict { Full, Proper, Inconclusive };
std::string to_string(TraceAlgebraVerdict v);

struct TraceAlgebraReport {
  TraceAlgebraVerdict verdict = TraceAlgebraVerdict::Inconclusive;
  int n = 0;
  int degree_budget = 0;
  int length = 0;     // pi-adic length of the generated span
  int max_length = 0; // n * number of monomials of degree <= budget
  int rounds = 0;
};

// O_L-subalgebra generated by the generator entries (and their inverses'),
// inside O_L/pi^n [vars] truncated above total degree degree_budget.
TraceAlgebraReport trace_algebra_full(const RepFamily &fam, int n, int degree_budget,
                                      int round_budget = 16);

} // namespace padic
