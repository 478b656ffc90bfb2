#pragma once

#include "padic/group.hpp"
#include "padic/matrix.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace padic {

// Generator images over O_E with unit determinants.
struct IntegralRep {
  GroupPresentation group;
  int dim = 0;
  CtxPtr ctx;
  std::vector<Mat> gens;
  std::vector<Mat> inv; // inverses of gens

  // Validates unit determinants and, for finite groups, the table relations.
  static IntegralRep make(GroupPresentation group, std::vector<Mat> gens);
  Mat image(const Word &w) const;
  Element trace(const Word &w) const { return image(w).trace(); }
};

// Generator images over O_E/pi^m (entries carry precision m).
struct ResidueRep {
  GroupPresentation group;
  int dim = 0;
  int m = 0;
  CtxPtr ctx;
  std::vector<Mat> gens;

  Mat image(const Word &w) const;
};

ResidueRep reduce_rep_mod(const IntegralRep &rep, int m);

// Words on which trace and relation checks are run: every element for finite
// groups, reduced words up to cap for free groups.
std::vector<Word> check_words(const GroupPresentation &g, int cap);

struct StableLattice {
  bool bounded = false;
  int iterations = 0;
  QMat certificate; // columns: basis of the lattice; C^-1 rho C integral
  IntegralRep rep;
  std::string note;
};

// Orbit lattice of the standard lattice. Free groups also apply inverses and
// report bounded = false when the orbit does not stabilize within budget.
StableLattice stable_lattice(const GroupPresentation &group, const std::vector<QMat> &rho,
                             int budget = 64);

enum class IsoStatus { Isomorphic, NotIsomorphic, Inconclusive };
std::string to_string(IsoStatus s);

struct IsoResult {
  IsoStatus status = IsoStatus::Inconclusive;
  std::optional<Mat> intertwiner; // X a(g) = b(g) X
  int module_generators = 0;      // generators of the solution module
  int residue_rank = 0;           // F_q-dimension of its reduction mod pi
  long candidates = 0;
  bool exhaustive = false;
  std::string certificate;
};

// Solves X a(g) = b(g) X over O/pi^m and searches the solutions for a unit
// determinant: exhaustively when q^rank <= 2^20, randomly otherwise.
IsoResult iso_mod(const ResidueRep &a, const ResidueRep &b, std::uint64_t seed = 1,
                  long budget = 1L << 20);

// Composition factors over the residue field.
struct FFactor {
  int dim = 0;
  std::vector<FMat> gens;
  bool absolutely_irreducible = false;
  std::vector<Fq::E> traces; // on the signature words
};

struct FactorSearch {
  bool complete = true;
  std::vector<FFactor> factors;
  std::vector<std::string> diagnostics;
};

// Meataxe-style splitting: submodules from kernels of random algebra
// elements, Norton's dual test for irreducibility.
FactorSearch composition_factors(const Fq &F, const std::vector<FMat> &gens,
                                 const GroupPresentation &group,
                                 const std::vector<Word> &signature_words, std::uint64_t seed,
                                 long budget = 200000);
// F_q-dimension of the commutant {X : X g = g X}.
int commutant_dim(const Fq &F, const std::vector<FMat> &gens);
FMat fimage(const Fq &F, const std::vector<FMat> &gens, const Word &w);

struct Semisimplification {
  bool complete = true;
  std::vector<Word> signature_words;
  std::vector<FFactor> factors; // sorted by (dim, traces)
  std::vector<std::string> diagnostics;

  // Multiset summary: dims and signature traces, basis independent.
  std::vector<std::pair<int, std::vector<Fq::E>>> signature() const;
};

Semisimplification semisimplify_mod_p(const ResidueRep &r, int word_cap = 3,
                                      std::uint64_t seed = 1);

enum class CarayolVerdict { Pass, PreconditionFailed, TheoremViolation, Inconclusive };
std::string to_string(CarayolVerdict v);

struct CarayolReport {
  CarayolVerdict verdict = CarayolVerdict::Inconclusive;
  int n = 0;
  int word_cap = 0;
  std::string reason;
  std::optional<Word> trace_witness;
  IsoResult iso;
};

// Checks residual absolute irreducibility and trace congruence mod pi^n on
// words up to word_cap, then asks iso_mod for an intertwiner mod pi^n.
CarayolReport carayol_audit(const IntegralRep &a, const IntegralRep &b, int n, int word_cap,
                            std::uint64_t seed = 1);

bool residually_absolutely_irreducible(const IntegralRep &a, int word_cap,
                                       std::uint64_t seed = 1);

// a random residually absolutely irreducible rep of the free group on two
// letters; b = stable lattice of C a' C^-1 with a' = a mod pi^n and
// v(det C) in {0, 1}.
struct CongruentPair {
  IntegralRep a, b;
  QMat conjugator;
};
CongruentPair make_congruent_pair(const CtxPtr &ctx, int n, std::mt19937_64 &rng);

} // namespace padic
