#include <doctest.h>

#include <algorithm>
#include <set>

#include "gen.hpp"
#include "lplus/canon.hpp"
#include "lplus/encodings.hpp"
#include "lplus/oracle.hpp"
#include "lplus/rewrite.hpp"
#include "lplus/typecheck.hpp"

using namespace lplus;
using namespace lplus::oracle;

namespace {

using ST = SourceType;
using SR = SourceTerm;

ST at(const char* n) { return ST::atom(n); }
ST arr(const ST& a, const ST& b) { return ST::arrow(a, b); }
ST conj(const ST& a, const ST& b) { return ST::conj(a, b); }

const ST R = at("R"), S = at("S"), T = at("T");

SR var(const char* n, const ST& t) { return SR::var(n, t); }
SR lam(const char* n, const ST& t, const SR& b) { return SR::abs(n, t, b); }
SR app(const SR& f, const SR& a) { return SR::app(f, a); }
SR plus(const SR& a, const SR& b) { return SR::plus(a, b); }
SR proj(const ST& t, const SR& b) { return SR::proj(t, b); }

SR tru() { return lam("x", R, lam("y", S, var("x", R))); }
SR fls() { return lam("x", R, lam("y", S, var("y", S))); }
SR tf() { return lam("x", R, lam("y", S, plus(var("x", R), var("y", S)))); }

SourceContext rs_ctx() { return {{"r", R}, {"s", S}}; }

bool contains_key(const std::vector<SR>& ts, const SR& t) {
  std::string k = term_key(t);
  return std::any_of(ts.begin(), ts.end(), [&](const SR& x) { return term_key(x) == k; });
}

std::vector<SR> terms_of(const std::vector<Neighbor>& ns) {
  std::vector<SR> out;
  for (const auto& n : ns) out.push_back(n.term);
  return out;
}

bool same_class(const SR& a, const SR& b, const SourceContext& ctx = {}) {
  return contains_key(equivalence_class(a, 10000, ctx), b);
}

SR random_closed(gen::TermGen& g, std::size_t max_size) {
  while (true) {
    Term t = g.closed(2, 8);
    if (t.size() <= max_size) return uncanonicalize_term(t);
  }
}

}  // namespace

TEST_CASE("isomorphism classes of types") {
  CHECK(iso_equiv(arr(conj(R, S), T), arr(R, arr(S, T))));
  CHECK(iso_equiv(arr(R, conj(S, T)), conj(arr(R, S), arr(R, T))));
  CHECK(iso_equiv(conj(conj(R, S), T), conj(T, conj(S, R))));
  CHECK_FALSE(iso_equiv(arr(R, S), arr(S, R)));
  CHECK_FALSE(iso_equiv(conj(R, R), R));

  gen::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    ST a = gen::random_source_type(rng, 4, 3);
    ST b = gen::iso_mutate(rng, a, 8);
    CHECK(iso_equiv(a, b));
    CHECK(canonicalize_type(iso_normal(a)) == canonicalize_type(a));
    ST c = gen::random_source_type(rng, 4, 3);
    CHECK(iso_equiv(a, c) == (canonicalize_type(a) == canonicalize_type(c)));
  }
}

TEST_CASE("typing in the source calculus") {
  SR id = lam("x", conj(R, S), var("x", conj(R, S)));
  CHECK(iso_equiv(orig_infer({}, id), arr(conj(R, S), conj(R, S))));
  CHECK(iso_equiv(orig_infer({}, id), arr(R, arr(S, conj(R, S)))));
  CHECK(iso_equiv(orig_infer(rs_ctx(), app(id, var("r", R))), arr(S, conj(R, S))));
  CHECK(iso_equiv(orig_infer({}, tf()), conj(arr(R, arr(S, R)), arr(R, arr(S, S)))));
  CHECK_THROWS_AS(orig_infer({}, lam("x", R, var("x", S))), TypeError);
  CHECK_THROWS_AS(orig_infer({}, var("z", R)), TypeError);
  CHECK_THROWS_AS(orig_infer({}, proj(T, tf())), TypeError);
  CHECK_THROWS_AS(orig_infer(rs_ctx(), app(var("r", R), var("s", S))), TypeError);
  SR pr = proj(arr(R, arr(S, R)), tf());
  CHECK(iso_equiv(orig_infer(rs_ctx(), app(app(pr, var("r", R)), var("s", S))), R));
}

TEST_CASE("one-step neighbors") {
  SourceContext ctx{{"r", R}, {"s", S}, {"t", T}, {"f", arr(R, arr(S, T))}};
  SR r = var("r", R), s = var("s", S), t = var("t", T), f = var("f", arr(R, arr(S, T)));
  CHECK(contains_key(terms_of(equiv_neighbors(plus(r, s), ctx)), plus(s, r)));
  CHECK(contains_key(terms_of(equiv_neighbors(app(app(f, r), s), ctx)), app(f, plus(r, s))));

  SR out = proj(arr(S, T), lam("x", S, plus(t, var("x", S))));
  SR in = lam("x", S, proj(T, plus(t, var("x", S))));
  CHECK(contains_key(terms_of(equiv_neighbors(out, ctx)), in));
  CHECK(contains_key(terms_of(equiv_neighbors(in, ctx)), out));
  CHECK(equiv_neighbors(r, ctx).empty());
}

TEST_CASE("neighbors are symmetric and preserve the type") {
  gen::Rng rng(23);
  gen::TermGen g(rng);
  for (int i = 0; i < 60; ++i) {
    SR r = random_closed(g, 12);
    ST ty = orig_infer({}, r);
    for (const Neighbor& n : equiv_neighbors(r)) {
      CAPTURE(to_string(n.rule));
      REQUIRE(orig_typable({}, n.term));
      CHECK(iso_equiv(orig_infer({}, n.term), ty));
      CHECK(contains_key(terms_of(equiv_neighbors(n.term)), r));
    }
  }
}

TEST_CASE("equivalence classes") {
  SourceContext ctx{{"x", R}, {"y", S}};
  CHECK(equivalence_class(plus(var("x", R), var("y", S)), 100, ctx).size() == 2);
  CHECK(equivalence_class(var("x", R), 100, ctx).size() == 1);
  SR k = lam("x", R, lam("y", S, var("x", R)));
  SR r = var("r", R), s = var("s", S);
  CHECK(same_class(app(app(k, r), s), app(k, plus(r, s)), rs_ctx()));
  CHECK_THROWS_AS(equivalence_class(plus(plus(r, s), plus(r, s)), 3, rs_ctx()), BoundExceeded);

  gen::Rng rng(29);
  gen::TermGen g(rng);
  for (int i = 0; i < 30; ++i) {
    SR t = random_closed(g, 12);
    ST ty = orig_infer({}, t);
    std::vector<SR> cls = equivalence_class(t, 10000);
    for (const SR& m : cls) CHECK(iso_equiv(orig_infer({}, m), ty));
  }
}

TEST_CASE("reduction modulo the symmetric relation") {
  SR r = var("r", R), s = var("s", S);
  SR id = lam("x", conj(R, S), var("x", conj(R, S)));
  SR via_id = app(proj(arr(S, R), app(id, r)), s);
  SR mid = proj(R, plus(r, s));
  auto succ = orig_reduce_modulo(via_id, rs_ctx());
  CHECK(std::any_of(succ.begin(), succ.end(), [&](const SR& x) { return same_class(x, mid, rs_ctx()); }));
  auto last = orig_reduce_modulo(mid, rs_ctx());
  CHECK(std::any_of(last.begin(), last.end(), [&](const SR& x) { return term_key(x) == term_key(r); }));
  CHECK(orig_reduce_modulo(r, rs_ctx()).empty());

  ST both = conj(arr(R, arr(S, R)), arr(R, arr(S, S)));
  SR choice = proj(both, plus(plus(tru(), fls()), tf()));
  auto branches = orig_reduce_modulo(choice, {});
  CHECK(std::any_of(branches.begin(), branches.end(), [&](const SR& x) { return same_class(x, plus(tru(), fls())); }));
  CHECK(std::any_of(branches.begin(), branches.end(), [&](const SR& x) { return same_class(x, tf()); }));
}

TEST_CASE("delta needs a term that is not already a sum") {
  SourceContext ctx{{"z", conj(R, S)}, {"r", R}, {"s", S}};
  auto on_var = orig_reduce(var("z", conj(R, S)), ctx);
  REQUIRE(on_var.size() == 1);
  CHECK(on_var[0].rule == RedRule::Delta);
  CHECK(orig_reduce(plus(var("r", R), var("s", S)), ctx).empty());
  // nor under a projection
  CHECK(orig_reduce(proj(R, var("z", conj(R, S))), ctx).empty());
}

TEST_CASE("joinability in the directed system") {
  Type a = Type::atom("a"), b = Type::atom("b");
  TypingContext ctx;
  ctx.bind("u", a);
  ctx.bind("v", b);
  ctx.bind("w", a);
  Term u = Term::var("u", a), v = Term::var("v", b), w = Term::var("w", a);
  Term joined = Term::abs("x", a, Term::sum({u, v}));
  Term split = Term::sum({Term::abs("x", a, u), Term::abs("x", a, v)});
  CHECK(joinable(Term::app(joined, w), Term::app(split, w), ctx, 6).joined);
  CHECK(joinable(u, u, ctx, 0).joined);
  auto no = joinable(Term::zero(), mk_nat(1), {}, 6);
  CHECK_FALSE(no.joined);
  CHECK_FALSE(no.depth_exceeded);
}

TEST_CASE("soundness diagrams close") {
  SR id = lam("x", conj(R, S), var("x", conj(R, S)));
  SR via_id = lam("r", R, lam("s", S, app(proj(arr(S, R), app(id, var("r", R))), var("s", S))));
  auto rep_id = check_soundness(via_id, 12);
  CHECK(rep_id.ok());
  CHECK(rep_id.checked > 0);
  CHECK(rep_id.to_string().rfind("OK ", 0) == 0);

  ST rs = conj(R, S);
  SR body = lam("t", T, var("t", T));
  SR unused = app(lam("x", arr(rs, R), lam("y", arr(rs, S), body)), lam("z", rs, var("z", rs)));
  auto rep_unused = check_soundness(unused, 12);
  CHECK(rep_unused.ok());
  CHECK(rep_unused.inconclusive == 0);

  gen::Rng rng(31);
  gen::TermGen g(rng);
  for (int i = 0; i < 40; ++i) {
    SR t = random_closed(g, 12);
    auto rep = check_soundness(t, 12);
    CAPTURE(rep.to_string());
    CHECK(rep.ok());
  }
}

TEST_CASE("observational equivalence probes") {
  SR r = var("r", R), s = var("s", S);
  auto rep = obs_equiv_probe(plus(tru(), fls()), tf(), {{r, s}, {plus(r, s)}}, 10, rs_ctx());
  CHECK(rep.summary() == "supported");
  CHECK(rep.per_probe.size() == 2);

  ST iota = at("iota");
  SR k2 = lam("x", iota, lam("y", iota, var("x", iota)));
  ST two = conj(iota, iota);
  SR estr2 = lam("x", two, proj(iota, var("x", two)));
  SourceContext ic{{"p", iota}, {"q", iota}};
  CHECK(obs_equiv_probe(k2, estr2, {{var("p", iota), var("q", iota)}}, 10, ic).summary() == "supported");

  ST a = at("a");
  SR ka = lam("x", a, lam("y", a, var("x", a)));
  SR kb = lam("x", a, lam("y", a, var("y", a)));
  CHECK(obs_equiv_probe(ka, kb, {}, 10).summary() == "untested");
  SourceContext ac{{"p", a}, {"q", a}};
  CHECK(obs_equiv_probe(ka, kb, {{var("p", a), var("q", a)}}, 10, ac).summary() == "refuted");
  CHECK_THROWS_AS(obs_equiv_probe(ka, kb, {{var("r", R)}}, 10, rs_ctx()), TypeError);
}
