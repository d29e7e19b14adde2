#include <doctest.h>

#include "gen.hpp"
#include "lplus/canon.hpp"
#include "lplus/typecheck.hpp"

using namespace lplus;

namespace {

SourceType at(const char* n) { return SourceType::atom(n); }
SourceType arr(SourceType a, SourceType b) { return SourceType::arrow(a, b); }
SourceType conj(SourceType a, SourceType b) { return SourceType::conj(a, b); }

// Sortedness and non-emptiness all the way down.
bool well_formed(const Type& t);
bool well_formed(const ArrowBag& b) {
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (b[i] < b[i - 1]) return false;
  }
  for (const Arrow& a : b) {
    if (!well_formed(a.premises())) return false;
  }
  return true;
}
bool well_formed(const Type& t) { return t.size() > 0 && well_formed(t.arrows()); }

}  // namespace

TEST_CASE("canonical forms of types") {
  CHECK(to_string(canonicalize_type(at("t"))) == "[t]");
  CHECK(canonicalize_type(conj(conj(at("t"), at("u")), at("v"))) ==
        canonicalize_type(conj(at("t"), conj(at("u"), at("v")))));
  CHECK(to_string(canonicalize_type(conj(conj(at("t"), at("u")), at("v")))) == "[t,u,v]");
  Type dist = canonicalize_type(arr(at("t"), conj(at("u"), at("v"))));
  CHECK(to_string(dist) == "[[t] -> u,[t] -> v]");
  CHECK(dist == canonicalize_type(conj(arr(at("t"), at("u")), arr(at("t"), at("v")))));
  Type curried = canonicalize_type(arr(at("a"), arr(at("b"), at("c"))));
  CHECK(to_string(curried) == "[[a,b] -> c]");
  CHECK(curried == canonicalize_type(arr(conj(at("a"), at("b")), at("c"))));
  CHECK_FALSE(types_isomorphic(at("t"), arr(at("t"), at("t"))));
}

TEST_CASE("uncanonicalization of types") {
  CHECK(uncanonicalize_type(Type::atom("t")) == at("t"));
  Type dist = canonicalize_type(arr(at("t"), conj(at("u"), at("v"))));
  CHECK(uncanonicalize_type(dist) == conj(arr(at("t"), at("u")), arr(at("t"), at("v"))));
  Type two = canonicalize_type(arr(at("a"), arr(at("b"), at("c"))));
  CHECK(uncanonicalize_type(two) == arr(conj(at("a"), at("b")), at("c")));
}

TEST_CASE("canonicalization of terms") {
  SourceType tt = conj(at("t"), at("u"));
  Term x = canonicalize_term(SourceTerm::var("x", tt));
  CHECK(x.annotation() == Type(ArrowBag{Arrow::atom("t"), Arrow::atom("u")}));
  SourceTerm a = SourceTerm::var("a", at("t")), b = SourceTerm::var("b", at("u")), c = SourceTerm::var("c", at("v"));
  Term s = canonicalize_term(SourceTerm::plus(SourceTerm::plus(a, b), c));
  REQUIRE(s.kind() == Kind::Sum);
  CHECK(s.kids().size() == 3);
  Term p = canonicalize_term(SourceTerm::proj(arr(at("r"), conj(at("s"), at("t"))), SourceTerm::var("f", arr(at("r"), conj(at("s"), at("t"))))));
  CHECK(to_string(p.annotation()) == "[[r] -> s,[r] -> t]");
  SourceTerm back = uncanonicalize_term(s);
  REQUIRE(back.kind() == SourceTerm::Kind::Plus);
  CHECK(back.left().kind() == SourceTerm::Kind::Plus);
  CHECK_THROWS_AS(uncanonicalize_term(Term::zero()), UnsupportedConstruct);
}

TEST_CASE("isomorphisms never change canonical forms") {
  gen::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    SourceType r = gen::random_source_type(rng, 5, 3);
    SourceType m = gen::iso_mutate(rng, r, 8);
    Type c = canonicalize_type(r);
    CHECK(well_formed(c));
    CHECK(canonicalize_type(m) == c);
    CHECK(canonicalize_type(uncanonicalize_type(c)) == c);
  }
}

TEST_CASE("term round trip is exact") {
  gen::Rng rng(11);
  gen::TermGen g(rng);
  for (int i = 0; i < 200; ++i) {
    Term t = g.closed(3, 10);
    REQUIRE(t.well_typed());
    CHECK(structurally_equal(canonicalize_term(uncanonicalize_term(t)), t));
  }
}

TEST_CASE("inference") {
  Type t = Type::atom("t"), u = Type::atom("u");
  TypingContext ctx;
  ctx.bind("x", t);
  CHECK(infer(ctx, Term::var("x", t)) == t);
  Term tf = Term::abs("x", t, Term::abs("y", u, Term::sum({Term::var("x", t), Term::var("y", u)})));
  CHECK(to_string(infer({}, tf)) == "[[t,u] -> t,[t,u] -> u]");
  ctx.bind("y", u);
  CHECK(infer(ctx, Term::proj(t, Term::sum({Term::var("x", t), Term::var("y", u)}))) == t);
  ctx.bind("f", arrow_type(t, u));
  Type w = Type::atom("w");
  ctx.bind("z", w);
  try {
    infer(ctx, Term::app(Term::var("f", arrow_type(t, u)), Term::var("z", w)));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == TypeErrorKind::ApplicationMismatch);
  }
  CHECK_THROWS_AS(infer({}, Term::var("q", t)), TypeError);
  try {
    infer({}, Term::succ(Term::abs("x", t, Term::var("x", t))));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.kind() == TypeErrorKind::ScrutineeNotNat);
    CHECK(e.path() == FocusPath{0});
  }
}

TEST_CASE("inference agrees with construction-time types and ignores unused bindings") {
  gen::Rng rng(3);
  gen::TermGen g(rng);
  for (int i = 0; i < 200; ++i) {
    Term t = g.closed(3, 12);
    Type ty = infer({}, t);
    CHECK(ty == *t.type());
    CHECK(infer(TypingContext().extended("unused", Type::atom("q")), t) == ty);
  }
}
