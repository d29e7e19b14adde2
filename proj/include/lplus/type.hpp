#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lplus {

/// Reserved atom used by the n-tuple encodings.
inline constexpr std::string_view kIota = "iota";
/// Reserved atom of the natural numbers.
inline constexpr std::string_view kNat = "Nat";

bool is_reserved_atom(std::string_view name);

class Arrow;

/// Sorted multiset of arrows. The empty multiset is allowed here (arrow
/// premises), but never as a type.
using ArrowBag = std::vector<Arrow>;

/// One component `[C1, ..., Cn] => tau` of a canonical type. With no
/// premises it stands for the atom `tau` itself.
class Arrow {
public:
  Arrow(ArrowBag premises, std::string head);
  static Arrow atom(std::string head) { return Arrow({}, std::move(head)); }

  const ArrowBag& premises() const { return node_->premises; }
  const std::string& head() const { return node_->head; }
  bool is_atom() const { return node_->premises.empty(); }
  std::size_t hash() const { return node_->hash; }

  friend int compare(const Arrow& a, const Arrow& b);
  friend bool operator==(const Arrow& a, const Arrow& b) { return compare(a, b) == 0; }
  friend bool operator<(const Arrow& a, const Arrow& b) { return compare(a, b) < 0; }

private:
  struct Node {
    ArrowBag premises;
    std::string head;
    std::size_t hash;
  };
  std::shared_ptr<const Node> node_;
};

int compare(const ArrowBag& a, const ArrowBag& b);

/// Multiplicity-aware operations over sorted arrow multisets.
namespace bag {
ArrowBag sorted(ArrowBag arrows);
ArrowBag unite(std::span<const Arrow> a, std::span<const Arrow> b);
/// `a` minus `b`, one occurrence removed per occurrence in `b`.
ArrowBag difference(std::span<const Arrow> a, std::span<const Arrow> b);
ArrowBag intersect(std::span<const Arrow> a, std::span<const Arrow> b);
bool is_subset(std::span<const Arrow> a, std::span<const Arrow> b);
bool disjoint(std::span<const Arrow> a, std::span<const Arrow> b);
}  // namespace bag

/// The unique representative of a type isomorphism class: a non-empty
/// multiset of arrows kept in canonical order, so that `==` is multiset
/// equality.
class Type {
public:
  /// Throws std::invalid_argument on an empty multiset.
  explicit Type(ArrowBag arrows);
  Type(const Arrow& arrow) : Type(ArrowBag{arrow}) {}  // NOLINT(implicit)

  static Type atom(std::string name) { return Type(Arrow::atom(std::move(name))); }
  static Type nat() { return atom(std::string(kNat)); }
  static Type iota() { return atom(std::string(kIota)); }

  const ArrowBag& arrows() const { return arrows_; }
  std::size_t size() const { return arrows_.size(); }
  bool is_single() const { return arrows_.size() == 1; }
  std::size_t hash() const;

  friend int compare(const Type& a, const Type& b) { return compare(a.arrows_, b.arrows_); }
  friend bool operator==(const Type& a, const Type& b) { return compare(a, b) == 0; }
  friend bool operator<(const Type& a, const Type& b) { return compare(a, b) < 0; }

private:
  ArrowBag arrows_;
};

/// `C => D`: every arrow of `to` gains the arrows of `from` as premises.
Type arrow_type(const Type& from, const Type& to);
/// Multiset union of two types.
Type product(const Type& a, const Type& b);

/// `[C1,...] -> tau` for single arrows; multi-arrow types are bracketed.
std::string to_string(const Type& t);
std::string to_string(const Arrow& a);

}  // namespace lplus
