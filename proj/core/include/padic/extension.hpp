#pragma once

#include "padic/element.hpp"

#include <cstdint>
#include <vector>

namespace padic {

// Inclusion O_L -> O_E for the tower shapes built by Context:
// e_L = 1 (pi_L = p), or E cut out by P_L(x^r) with pi_L -> pi_E^r.
// The unramified parts must agree, or L must have f = 1.
struct Embedding {
  CtxPtr L, E;
  int e_rel = 1;

  static Embedding make(const CtxPtr &L, const CtxPtr &E);
  static Embedding identity(const CtxPtr &L) { return make(L, L); }

  Element operator()(const Element &x) const;
  int gamma(int n) const { return gamma_exponent(e_rel, n); }
};

struct CongruenceWitness {
  Element alpha, beta;
  bool in_pi_E_m = false; // alpha - beta in pi_E^m O_E
  bool in_pi_L_n = false; // alpha - beta in pi_L^n O_L
};

struct CongruenceAudit {
  bool pass = true;
  int n = 0, m = 0, precision = 0;
  std::int64_t samples = 0;
  std::vector<CongruenceWitness> failures;
};

// Random pairs alpha, beta in O_E with alpha - beta in O_L; checks
// alpha - beta in pi_E^gamma O_E <=> alpha - beta in pi_L^n O_L.
CongruenceAudit congruence_equiv_audit(const Embedding &emb, int n, std::int64_t samples,
                                       std::uint64_t seed);

struct InjectivityReport {
  int n = 0, m = 0;
  std::int64_t checked = 0;
  bool injective = true;       // O_L/pi_L^n -> O_E/pi_E^m has trivial kernel
  bool smaller_fails = true;   // m - 1 is not enough (or m = 1)
  Element witness;             // nonzero kernel element, when not injective
};

// Exhaustive over O_L/pi_L^n at m = gamma(n).
InjectivityReport gamma_injectivity_check(const Embedding &emb, int n);

// Enumerates O/pi^n as representatives with precision n.
std::vector<Element> enumerate_residues(const CtxPtr &ctx, int n);

} // namespace padic
