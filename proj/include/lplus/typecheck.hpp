#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "lplus/term.hpp"

namespace lplus {

enum class TypeErrorKind {
  UnboundVariable,
  DuplicateBinding,
  ApplicationMismatch,
  ProjectionMismatch,
  BranchMismatch,
  ScrutineeNotNat,
  FixBodyMismatch,
  EmptyType,
};

std::string_view to_string(TypeErrorKind k);

class TypeError : public std::runtime_error {
public:
  TypeError(TypeErrorKind kind, FocusPath path, const std::string& detail);
  TypeErrorKind kind() const { return kind_; }
  /// Path of the offending subterm.
  const FocusPath& path() const { return path_; }

private:
  TypeErrorKind kind_;
  FocusPath path_;
};

/// Canonical type of `t` under `ctx`. Free variables must be bound in
/// `ctx` with the annotated type; binders shadow.
Type infer(const TypingContext& ctx, const Term& t);
/// Non-throwing variant.
std::optional<Type> try_infer(const TypingContext& ctx, const Term& t);

/// True iff both sides typecheck to the same canonical type.
bool check_preserves(const TypingContext& ctx, const Term& before, const Term& after);

}  // namespace lplus
