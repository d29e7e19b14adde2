#include "lplus/canon.hpp"

namespace lplus {

Type canonicalize_type(const SourceType& r) {
  switch (r.kind()) {
    case SourceType::Kind::Atom:
      return Type::atom(r.name());
    case SourceType::Kind::And:
      return product(canonicalize_type(r.left()), canonicalize_type(r.right()));
    case SourceType::Kind::Arrow:
      return arrow_type(canonicalize_type(r.left()), canonicalize_type(r.right()));
  }
  throw std::logic_error("unreachable");
}

namespace {

SourceType uncan_arrow(const Arrow& a) {
  if (a.is_atom()) return SourceType::atom(a.head());
  return SourceType::arrow(uncanonicalize_type(Type(a.premises())), SourceType::atom(a.head()));
}

}  // namespace

SourceType uncanonicalize_type(const Type& c) {
  SourceType out = uncan_arrow(c.arrows().front());
  for (std::size_t i = 1; i < c.size(); ++i) out = SourceType::conj(out, uncan_arrow(c.arrows()[i]));
  return out;
}

Term canonicalize_term(const SourceTerm& r) {
  switch (r.kind()) {
    case SourceTerm::Kind::Var:
      return Term::var(r.name(), canonicalize_type(r.type()));
    case SourceTerm::Kind::Abs:
      return Term::abs(r.name(), canonicalize_type(r.type()), canonicalize_term(r.body()));
    case SourceTerm::Kind::App:
      return Term::app(canonicalize_term(r.left()), canonicalize_term(r.right()));
    case SourceTerm::Kind::Plus:
      return Term::sum({canonicalize_term(r.left()), canonicalize_term(r.right())});
    case SourceTerm::Kind::Proj:
      return Term::proj(canonicalize_type(r.type()), canonicalize_term(r.body()));
  }
  throw std::logic_error("unreachable");
}

SourceTerm uncanonicalize_term(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
      return SourceTerm::var(t.name(), uncanonicalize_type(t.annotation()));
    case Kind::Abs:
      return SourceTerm::abs(t.name(), uncanonicalize_type(t.annotation()), uncanonicalize_term(t.kid(0)));
    case Kind::App:
      return SourceTerm::app(uncanonicalize_term(t.kid(0)), uncanonicalize_term(t.kid(1)));
    case Kind::Sum: {
      SourceTerm out = uncanonicalize_term(t.kid(0));
      for (std::size_t i = 1; i < t.kids().size(); ++i) out = SourceTerm::plus(out, uncanonicalize_term(t.kid(i)));
      return out;
    }
    case Kind::Proj:
      return SourceTerm::proj(uncanonicalize_type(t.annotation()), uncanonicalize_term(t.kid(0)));
    default:
      throw UnsupportedConstruct("naturals and fixpoints have no counterpart in the source calculus");
  }
}

bool types_isomorphic(const SourceType& r, const SourceType& s) {
  return canonicalize_type(r) == canonicalize_type(s);
}

}  // namespace lplus
