#pragma once

#include <stdexcept>

#include "lplus/source.hpp"
#include "lplus/term.hpp"

namespace lplus {

/// Thrown when a term outside the pure fragment is uncanonicalized.
class UnsupportedConstruct : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

Type canonicalize_type(const SourceType& r);
/// Conjunctions associate to the left and follow the canonical arrow order.
SourceType uncanonicalize_type(const Type& c);

/// Nested `+` chains flatten into one Sum.
Term canonicalize_term(const SourceTerm& r);
/// Sums become left-associated `+` chains in their stored order.
SourceTerm uncanonicalize_term(const Term& t);

bool types_isomorphic(const SourceType& r, const SourceType& s);

}  // namespace lplus
