#include "lplus/source.hpp"

namespace lplus {

SourceType SourceType::atom(std::string name) {
  return SourceType(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), nullptr, nullptr}));
}

SourceType SourceType::arrow(SourceType from, SourceType to) {
  return SourceType(std::make_shared<const Node>(Node{Kind::Arrow, {}, std::make_shared<const SourceType>(std::move(from)),
                                                      std::make_shared<const SourceType>(std::move(to))}));
}

SourceType SourceType::conj(SourceType left, SourceType right) {
  return SourceType(std::make_shared<const Node>(Node{Kind::And, {}, std::make_shared<const SourceType>(std::move(left)),
                                                      std::make_shared<const SourceType>(std::move(right))}));
}

bool operator==(const SourceType& a, const SourceType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == SourceType::Kind::Atom) return a.name() == b.name();
  return a.left() == b.left() && a.right() == b.right();
}

SourceTerm SourceTerm::var(std::string name, SourceType type) {
  return SourceTerm(std::make_shared<const Node>(
      Node{Kind::Var, std::move(name), std::make_shared<const SourceType>(std::move(type)), nullptr, nullptr, 1}));
}

SourceTerm SourceTerm::abs(std::string binder, SourceType type, SourceTerm body) {
  std::size_t size = body.size() + 1;
  return SourceTerm(std::make_shared<const Node>(Node{Kind::Abs, std::move(binder),
                                                      std::make_shared<const SourceType>(std::move(type)),
                                                      std::make_shared<const SourceTerm>(std::move(body)), nullptr, size}));
}

SourceTerm SourceTerm::app(SourceTerm fun, SourceTerm arg) {
  std::size_t size = fun.size() + arg.size() + 1;
  return SourceTerm(std::make_shared<const Node>(Node{Kind::App, {}, nullptr,
                                                      std::make_shared<const SourceTerm>(std::move(fun)),
                                                      std::make_shared<const SourceTerm>(std::move(arg)), size}));
}

SourceTerm SourceTerm::plus(SourceTerm left, SourceTerm right) {
  std::size_t size = left.size() + right.size() + 1;
  return SourceTerm(std::make_shared<const Node>(Node{Kind::Plus, {}, nullptr,
                                                      std::make_shared<const SourceTerm>(std::move(left)),
                                                      std::make_shared<const SourceTerm>(std::move(right)), size}));
}

SourceTerm SourceTerm::proj(SourceType type, SourceTerm body) {
  std::size_t size = body.size() + 1;
  return SourceTerm(std::make_shared<const Node>(Node{Kind::Proj, {}, std::make_shared<const SourceType>(std::move(type)),
                                                      std::make_shared<const SourceTerm>(std::move(body)), nullptr, size}));
}

std::string to_string(const SourceType& t) {
  switch (t.kind()) {
    case SourceType::Kind::Atom:
      return t.name();
    case SourceType::Kind::Arrow:
      return "(" + to_string(t.left()) + " -> " + to_string(t.right()) + ")";
    case SourceType::Kind::And:
      return "(" + to_string(t.left()) + " /\\ " + to_string(t.right()) + ")";
  }
  return {};
}

std::string to_string(const SourceTerm& t) {
  switch (t.kind()) {
    case SourceTerm::Kind::Var:
      return t.name();
    case SourceTerm::Kind::Abs:
      return "(\\" + t.name() + ":" + to_string(t.type()) + ". " + to_string(t.body()) + ")";
    case SourceTerm::Kind::App:
      return "(" + to_string(t.left()) + " " + to_string(t.right()) + ")";
    case SourceTerm::Kind::Plus:
      return "(" + to_string(t.left()) + " + " + to_string(t.right()) + ")";
    case SourceTerm::Kind::Proj:
      return "proj[" + to_string(t.type()) + "] " + to_string(t.body());
  }
  return {};
}

}  // namespace lplus
