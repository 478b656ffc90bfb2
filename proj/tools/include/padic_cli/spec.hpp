#pragma once

#include "padic/domain.hpp"
#include "padic/family.hpp"
#include "padic/lattice.hpp"
#include "padic/pseudorep.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic::cli {

// kind: "syntax", "unresolved-reference" or "invariant"
struct SpecError : std::runtime_error {
  std::string kind;
  int line = 0, column = 0;
  std::string message; // without the location prefix
  SpecError(std::string kind, int line, int column, const std::string &msg);
};

// ---- syntax tree ----
//
//   # comment
//   kind name {
//     key = value
//   }
//
// A value runs to the end of its line, or further while brackets are open.
// Whitespace inside values is normalized to single spaces.

struct Entry {
  std::string key, value;
  int line = 0, column = 0; // of the value
  bool operator==(const Entry &o) const { return key == o.key && value == o.value; }
};

struct Block {
  std::string kind, name;
  int line = 0, column = 0;
  std::vector<Entry> entries;
  const Entry *find(const std::string &key) const;
  bool operator==(const Block &o) const {
    return kind == o.kind && name == o.name && entries == o.entries;
  }
};

struct SpecTree {
  std::vector<Block> blocks;
  bool operator==(const SpecTree &o) const { return blocks == o.blocks; }
};

SpecTree parse_tree(const std::string &text);
std::string print_tree(const SpecTree &tree);

// ---- validated objects ----

struct RepSpec {
  GroupPresentation group;
  CtxPtr ctx;
  std::vector<QMat> gens;           // pi^-shift * matrix
  std::optional<IntegralRep> integral; // when shift = 0
};

struct PseudorepSpec {
  std::string source;
  int word_cap = 1;
  std::optional<PseudoRep2<Element>> over_ring;  // from a rep
  std::optional<PseudoRep2<Series>> over_model;  // from a family
  std::optional<ModelPtr> model;
};

struct AuditSpec {
  std::string name;
  int n = 1;
  std::vector<std::string> extensions;
  int samples = 12;
  int word_cap = 1;
  std::uint64_t seed = 1;
  int budget = 4;
  std::string domain, target, other;
  std::vector<std::string> points;
  int line = 0;
};

struct SpecFile {
  SpecTree tree;
  std::map<std::string, CtxPtr> contexts;
  std::map<std::string, ModelPtr> models;
  std::map<std::string, ModelPoint> points;
  std::map<std::string, ResidueDomain> domains;
  std::map<std::string, RepSpec> reps;
  std::map<std::string, RepFamily> families;
  std::map<std::string, PseudorepSpec> pseudoreps;
  std::vector<AuditSpec> audits;

  const AuditSpec &audit(const std::string &name) const; // "" picks the first
};

// precision_override replaces every context's precision when given.
SpecFile parse_spec(const std::string &text, std::optional<int> precision_override = {});
SpecFile load_spec(const std::string &path, std::optional<int> precision_override = {});

// Integer polynomial expressions (+ - * ^, parentheses) in the given names.
Element parse_element(const std::string &text, const CtxPtr &ctx);
GroupPresentation parse_group(const std::string &text);

} // namespace padic::cli
