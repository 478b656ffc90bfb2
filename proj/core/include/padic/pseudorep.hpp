#pragma once

#include "padic/audit.hpp"
#include "padic/errors.hpp"
#include "padic/family.hpp"
#include "padic/lattice.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

// Arithmetic used by the two value types: O_E (or O_E/pi^m via precision) and series.
template <class V> struct PseudoOps;

template <> struct PseudoOps<Element> {
  static Element from_int(const Element &like, i64 v) { return Element::from_int(like.context(), v); }
  static Element half(const Element &x) { return x * Element::from_int(x.context(), 2).inverse(); }
  static bool equal(const Element &a, const Element &b) { return a.equals(b); }
  static int prime(const Element &x) { return x.context()->p(); }
  static std::string str(const Element &x) { return x.str(); }
};

template <> struct PseudoOps<Series> {
  static Series from_int(const Series &like, i64 v) { return Series::constant(like.model(), v); }
  static Series half(const Series &x) {
    return x.scale(Element::from_int(x.model()->base, 2).inverse());
  }
  static bool equal(const Series &a, const Series &b) { return a.equals(b); }
  static int prime(const Series &x) { return x.model()->base->p(); }
  static std::string str(const Series &x) { return x.str(); }
};

// Two-dimensional pseudorepresentation: values on canonical words (every
// element of a finite group, reduced words up to 2*cap for free groups).
template <class V> struct PseudoRep2 {
  GroupPresentation group;
  int word_cap = 0;
  std::map<Word, V> values;

  const V &T(const Word &w) const {
    auto it = values.find(group.canonical(w));
    if (it == values.end())
      throw std::out_of_range("no value for word " + word_str(group.canonical(w), group.gens()));
    return it->second;
  }
  // D(g) = (T(g)^2 - T(g^2)) / 2
  V D(const Word &g) const {
    const V t = T(g);
    return PseudoOps<V>::half(t * t - T(group.concat(g, g)));
  }
  // Words on which the axioms can be checked (values exist for all products).
  std::vector<Word> base_words() const { return check_words(group, word_cap); }
};

inline void require_odd(int p) {
  if (p == 2)
    throw Unsupported("pseudorepresentations need 2 invertible; p = 2 is refused");
}

template <class V>
PseudoRep2<V> pseudorep_from_table(GroupPresentation group, int word_cap,
                                   const std::map<Word, V> &table) {
  PseudoRep2<V> T{std::move(group), word_cap, {}};
  for (const auto &[w, v] : table) {
    require_odd(PseudoOps<V>::prime(v));
    T.values[T.group.canonical(w)] = v;
  }
  return T;
}

PseudoRep2<Element> from_rep_trace(const IntegralRep &rep, int word_cap);
PseudoRep2<Series> from_rep_trace(const RepFamily &fam, int word_cap);
// Evaluates every value at the point.
PseudoRep2<Element> specialize(const PseudoRep2<Series> &T, const ModelPoint &point);

struct AxiomViolation {
  std::string kind; // "unit", "symmetry", "identity", "missing"
  Word g, h;
  std::string detail;
};

struct AxiomReport {
  bool pass = true;
  int pairs_checked = 0;
  std::vector<AxiomViolation> violations;
};

// T(1) = 2, T(gh) = T(hg) and T(g)T(h) = T(gh) + D(g) T(g^-1 h) on all pairs of
// generators (and inverses) plus pair_budget random pairs of base words.
template <class V>
AxiomReport axiom_check(const PseudoRep2<V> &T, int pair_budget, std::uint64_t seed = 1) {
  AxiomReport rep;
  using Ops = PseudoOps<V>;
  const auto &G = T.group;
  auto fail = [&](std::string kind, Word g, Word h, std::string detail) {
    rep.pass = false;
    if (rep.violations.size() < 16)
      rep.violations.push_back({std::move(kind), std::move(g), std::move(h), std::move(detail)});
  };
  try {
    const V &one = T.T({});
    require_odd(Ops::prime(one));
    if (!Ops::equal(one, Ops::from_int(one, 2)))
      fail("unit", {}, {}, "T(1) = " + Ops::str(one) + ", expected 2");
  } catch (const std::out_of_range &e) {
    fail("missing", {}, {}, e.what());
    return rep;
  }
  const auto words = T.base_words();
  std::vector<std::pair<Word, Word>> pairs;
  std::vector<Word> letters;
  for (int g = 1; g <= G.ngens(); ++g) {
    letters.push_back({g});
    letters.push_back({-g});
  }
  for (const auto &a : letters)
    for (const auto &b : letters)
      pairs.emplace_back(G.canonical(a), G.canonical(b));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
  for (int i = 0; i < pair_budget; ++i)
    pairs.emplace_back(words[pick(rng)], words[pick(rng)]);
  for (const auto &[g, h] : pairs) {
    try {
      const V gh = T.T(G.concat(g, h)), hg = T.T(G.concat(h, g));
      if (!Ops::equal(gh, hg))
        fail("symmetry", g, h, "T(gh) = " + Ops::str(gh) + " but T(hg) = " + Ops::str(hg));
      const V lhs = T.T(g) * T.T(h);
      const V rhs = gh + T.D(g) * T.T(G.concat(G.inverse(g), h));
      if (!Ops::equal(lhs, rhs))
        fail("identity", g, h, "T(g)T(h) = " + Ops::str(lhs) + " but T(gh) + D(g)T(g^-1 h) = " +
                                   Ops::str(rhs));
      ++rep.pairs_checked;
    } catch (const std::out_of_range &e) {
      fail("missing", g, h, e.what());
    }
  }
  return rep;
}

// ---- finite groups ----

// Values by element index, reduced mod pi^m.
std::vector<Element> element_values(const PseudoRep2<Element> &T, int m);

// Generators (coefficient vectors indexed by group elements) of
// {y in (O/pi^m)[G] : T(x y) = 0 for all x}.
std::vector<Vec> pseudorep_kernel(const PseudoRep2<Element> &T, int m);
// Pi-adic length of the kernel module (sum of m - invariant over the trace form).
int kernel_length(const PseudoRep2<Element> &T, int m);
// {h in G : T(g h) = T(g) for all g}, as element indices.
std::vector<int> group_kernel(const PseudoRep2<Element> &T);

enum class MFVerdict { MultiplicityFree, NotMultiplicityFree, Inconclusive };
std::string to_string(MFVerdict v);

struct MFReport {
  MFVerdict verdict = MFVerdict::Inconclusive;
  std::vector<FFactor> decomposition; // chosen factors, with multiplicity
  std::optional<FFactor> repeated;
  int distinct_factors = 0; // irreducibles found in the regular representation
  std::string note;
};

// Writes T mod pi as a sum of traces of composition factors of the regular
// representation over the residue field.
MFReport residually_multiplicity_free(const PseudoRep2<Element> &T, std::uint64_t seed = 1);

struct PseudorepAudit {
  bool pass = true;
  bool inconclusive = false;
  int n = 0;
  int word_cap = 0;
  int words_checked = 0;
  std::optional<Word> failing_word;
  std::optional<FunctionAudit> failing_audit;
};

// Function-level audits of T(w) for all w up to the word cap.
PseudorepAudit pseudorep_constancy_audit(const PseudoRep2<Series> &T, const ResidueDomain &dom,
                                         int n, const std::vector<CtxPtr> &exts, int samples,
                                         std::uint64_t seed);

struct PseudorepStrict {
  bool constant = true;
  int n = 0;
  std::optional<Word> witness;
  std::map<Word, Element> values; // T(w) mod pi^n when constant
};

// is_constant_mod of every recentered T(w), w up to the word cap.
PseudorepStrict pseudorep_strict_constancy(const PseudoRep2<Series> &T, const Recentering &chart,
                                           int n);

} // namespace padic
