#pragma once

#include <memory>
#include <string>

namespace lplus {

/// Types of the original calculus: atoms, binary `=>` and binary `/\`.
class SourceType {
public:
  enum class Kind { Atom, Arrow, And };

  static SourceType atom(std::string name);
  static SourceType arrow(SourceType from, SourceType to);
  static SourceType conj(SourceType left, SourceType right);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const SourceType& left() const { return *node_->left; }
  const SourceType& right() const { return *node_->right; }

  friend bool operator==(const SourceType& a, const SourceType& b);

private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const SourceType> left, right;
  };
  explicit SourceType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Terms of the original calculus with binary `+` and type-indexed projection.
class SourceTerm {
public:
  enum class Kind { Var, Abs, App, Plus, Proj };

  static SourceTerm var(std::string name, SourceType type);
  static SourceTerm abs(std::string binder, SourceType type, SourceTerm body);
  static SourceTerm app(SourceTerm fun, SourceTerm arg);
  static SourceTerm plus(SourceTerm left, SourceTerm right);
  static SourceTerm proj(SourceType type, SourceTerm body);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  /// Annotation of variables, binders and projections.
  const SourceType& type() const { return *node_->type; }
  const SourceTerm& left() const { return *node_->left; }
  const SourceTerm& right() const { return *node_->right; }
  /// Body of abstractions and projections.
  const SourceTerm& body() const { return *node_->left; }
  std::size_t size() const { return node_->size; }

  bool same_node(const SourceTerm& o) const { return node_ == o.node_; }

private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const SourceType> type;
    std::shared_ptr<const SourceTerm> left, right;
    std::size_t size;
  };
  explicit SourceTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Fully parenthesized rendering, e.g. `((a -> b) /\ c)`.
std::string to_string(const SourceType& t);
std::string to_string(const SourceTerm& t);

}  // namespace lplus
