#include "lplus/type.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace lplus {

bool is_reserved_atom(std::string_view name) { return name == kIota || name == kNat; }

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Arrow::Arrow(ArrowBag premises, std::string head) {
  std::sort(premises.begin(), premises.end());
  std::size_t h = std::hash<std::string>{}(head);
  h = mix(h, premises.size());
  for (const Arrow& p : premises) h = mix(h, p.hash());
  node_ = std::make_shared<const Node>(Node{std::move(premises), std::move(head), h});
}

int compare(const Arrow& a, const Arrow& b) {
  if (a.node_ == b.node_) return 0;
  if (int c = a.head().compare(b.head()); c != 0) return c < 0 ? -1 : 1;
  return compare(a.premises(), b.premises());
}

int compare(const ArrowBag& a, const ArrowBag& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare(a[i], b[i]); c != 0) return c;
  }
  return 0;
}

namespace bag {

ArrowBag sorted(ArrowBag arrows) {
  std::sort(arrows.begin(), arrows.end());
  return arrows;
}

ArrowBag unite(std::span<const Arrow> a, std::span<const Arrow> b) {
  ArrowBag out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ArrowBag difference(std::span<const Arrow> a, std::span<const Arrow> b) {
  ArrowBag out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ArrowBag intersect(std::span<const Arrow> a, std::span<const Arrow> b) {
  ArrowBag out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(std::span<const Arrow> a, std::span<const Arrow> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(std::span<const Arrow> a, std::span<const Arrow> b) {
  return intersect(a, b).empty();
}

}  // namespace bag

Type::Type(ArrowBag arrows) : arrows_(bag::sorted(std::move(arrows))) {
  if (arrows_.empty()) throw std::invalid_argument("the empty multiset is not a type");
}

std::size_t Type::hash() const {
  std::size_t h = arrows_.size();
  for (const Arrow& a : arrows_) h = mix(h, a.hash());
  return h;
}

Type arrow_type(const Type& from, const Type& to) {
  ArrowBag out;
  out.reserve(to.size());
  for (const Arrow& a : to.arrows()) out.emplace_back(bag::unite(from.arrows(), a.premises()), a.head());
  return Type(std::move(out));
}

Type product(const Type& a, const Type& b) { return Type(bag::unite(a.arrows(), b.arrows())); }

std::string to_string(const Arrow& a) {
  if (a.is_atom()) return a.head();
  std::string out = "[";
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    if (i) out += ",";
    out += to_string(a.premises()[i]);
  }
  out += "] -> ";
  out += a.head();
  return out;
}

std::string to_string(const Type& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += to_string(t.arrows()[i]);
  }
  out += "]";
  return out;
}

}  // namespace lplus
