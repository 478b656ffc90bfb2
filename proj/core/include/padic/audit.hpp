#pragma once

#include "padic/domain.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padic {

struct AuditSample {
  ModelPoint point;
  Element residue; // f(point) mod pi_E^gamma
};

struct AuditWitness {
  ModelPoint a, b;
  Element fa, fb;
  int gamma = 0;
  std::string str() const;
};

struct ExtensionAudit {
  CtxPtr ext;
  int gamma = 0;
  int sampled = 0;
  int failures = 0;
  int undecided = 0; // evaluation precision below gamma
  std::vector<AuditSample> samples;
  std::vector<std::string> diagnostics; // sampling trouble, reported per field
};

struct FunctionAudit {
  bool pass = true;
  bool inconclusive = false;
  int n = 0;
  std::vector<ExtensionAudit> per_ext;
  std::optional<AuditWitness> witness;
};

// Samples dom over each extension, evaluates f, and compares f(y) with f(center)
// mod pi_E^gamma(n). Throws PrecisionError when gamma exceeds a field's precision.
FunctionAudit pointwise_constancy_audit(const Series &f, const ResidueDomain &dom, int n,
                                        const std::vector<CtxPtr> &exts, int samples,
                                        std::uint64_t seed);

// Same comparison on explicit points (all over fields extending the base).
FunctionAudit pointwise_constancy_audit(const Series &f, const ModelPoint &center,
                                        const std::vector<ModelPoint> &points, int n);

// a = b mod pi^gamma, for values over the same field.
bool congruent_values(const Element &a, const Element &b, int gamma);

} // namespace padic
