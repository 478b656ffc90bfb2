#pragma once

#include <stdexcept>
#include <string>

namespace padic {

// Requested digits exceed what is known about an element.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A coordinate violates its valuation constraint.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A point does not satisfy the relation of its model.
struct RelationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace padic
