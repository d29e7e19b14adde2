#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lplus/type.hpp"

namespace lplus {

enum class Kind : std::uint8_t { Var, Abs, App, Sum, Proj, Zero, Succ, Pred, IfZ, IfEq, Fix };

struct TypedName {
  std::string name;
  Type type;

  friend bool operator==(const TypedName&, const TypedName&) = default;
  friend bool operator<(const TypedName& a, const TypedName& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.type < b.type;
  }
};

/// Substituting a term whose type differs from the variable's annotation.
class TypeMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Immutable, shareable term with canonical type annotations.
///
/// Every node caches its synthesized type (from the Church-style annotations
/// alone, `std::nullopt` when the node is ill-typed), its typed free
/// variables and its size. Sums are flattened and sorted on construction
/// and always have at least two elements.
class Term {
public:
  static Term var(std::string name, Type type);
  static Term abs(std::string binder, Type binder_type, Term body);
  static Term app(Term fun, Term arg);
  /// Flattens nested sums; a single element is returned as is.
  static Term sum(std::vector<Term> elements);
  static Term proj(Type type, Term body);
  static Term zero();
  static Term succ(Term body);
  static Term pred(Term body);
  static Term ifz(Term scrutinee, Term then_branch, Term else_branch);
  static Term ifeq(Term left, Term right, Term then_branch, Term else_branch);
  static Term fix(std::string binder, Type binder_type, Term body);

  /// Folds `fun a1 ... an` left-associatively.
  static Term apply(Term fun, std::span<const Term> args);

  Kind kind() const { return node_->kind; }
  /// Variable or binder name; empty for other kinds.
  const std::string& name() const { return node_->name; }
  /// Annotation of variables, binders and projections.
  const Type& annotation() const;
  std::span<const Term> kids() const { return node_->kids; }
  const Term& kid(std::size_t i) const { return node_->kids.at(i); }

  const std::optional<Type>& type() const { return node_->type; }
  bool well_typed() const { return node_->type.has_value(); }
  const std::vector<TypedName>& free_vars() const { return node_->free; }
  bool has_free(const std::string& name) const;
  std::size_t size() const { return node_->size; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  /// Rebuilds this node with new children (same kind, name, annotation).
  Term with_kids(std::vector<Term> kids) const;

private:
  struct Node {
    Kind kind;
    std::string name;
    std::optional<Type> annotation;
    std::vector<Term> kids;
    std::optional<Type> type;
    std::vector<TypedName> free;
    std::size_t size;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Kind kind, std::string name, std::optional<Type> annotation, std::vector<Term> kids);

  std::shared_ptr<const Node> node_;
};

/// Total structural order (names significant); used to sort sum elements.
int compare_structural(const Term& a, const Term& b);
bool structurally_equal(const Term& a, const Term& b);

bool is_binder(Kind k);

std::set<TypedName> free_vars(const Term& t);

/// Capture-avoiding `t{s/x}`. Throws TypeMismatch when `s` is typed and an
/// occurrence of `x` carries a different annotation.
Term substitute(const Term& t, const std::string& x, const Term& s);

/// Alpha-equivalence, also up to the order of sum elements.
bool alpha_eq(const Term& a, const Term& b);
/// Hash invariant under alpha_eq.
std::size_t alpha_hash(const Term& t);

/// Returns `hint` when it is not in `avoid`, otherwise the hint's stem with
/// the smallest numeric suffix that is free.
std::string fresh_name(const std::set<std::string>& avoid, const std::string& hint);
std::set<std::string> free_names(const Term& t);
/// All names used anywhere in `t`, bound or free.
void collect_names(const Term& t, std::set<std::string>& out);

/// Finite map name -> type; one type per name.
class TypingContext {
public:
  TypingContext() = default;
  /// Returns a copy with `name` bound (shadowing any previous binding).
  TypingContext extended(const std::string& name, const Type& type) const;
  const Type* lookup(const std::string& name) const;
  /// Throws std::invalid_argument if `name` is already bound to another type.
  void bind(const std::string& name, const Type& type);
  const std::map<std::string, Type>& bindings() const { return bindings_; }
  static TypingContext of_free_vars(const Term& t);

private:
  std::map<std::string, Type> bindings_;
};

/// Child indices from the root. Sum indices address the stored
/// (canonically ordered) element list.
using FocusPath = std::vector<std::size_t>;

const Term& subterm_at(const Term& t, std::span<const std::size_t> path);
Term replace_at(const Term& t, std::span<const std::size_t> path, const Term& replacement);
std::string path_to_string(const FocusPath& path);

}  // namespace lplus
