#include "lplus/encodings.hpp"

#include <algorithm>
#include <functional>

#include "lplus/typecheck.hpp"

namespace lplus {

namespace {

const Arrow& iota_arrow() {
  static const Arrow a = Arrow::atom(std::string(kIota));
  return a;
}

Type nat() { return Type::nat(); }

}  // namespace

Type num(int n) {
  if (n < 1) throw std::invalid_argument("encoding indices start at 1");
  return Type(ArrowBag(static_cast<std::size_t>(n), iota_arrow()));
}

Type bnum(int n) { return arrow_type(num(n), Type::iota()); }

std::optional<int> bnum_index(const Type& t) {
  if (!t.is_single()) return std::nullopt;
  const Arrow& a = t.arrows()[0];
  if (a.head() != kIota || a.premises().empty()) return std::nullopt;
  for (const Arrow& p : a.premises()) {
    if (!(p == iota_arrow())) return std::nullopt;
  }
  return static_cast<int>(a.premises().size());
}

Type boxed(const Type& c, int n) { return arrow_type(bnum(n), c); }

Type nat_pair() { return product(boxed(nat(), 1), boxed(nat(), 2)); }

Term mk_nat(unsigned k) {
  Term t = Term::zero();
  for (unsigned i = 0; i < k; ++i) t = Term::succ(t);
  return t;
}

std::optional<unsigned> try_nat_value(const Term& t) {
  unsigned k = 0;
  const Term* cur = &t;
  while (cur->kind() == Kind::Succ) {
    ++k;
    cur = &cur->kid(0);
  }
  if (cur->kind() != Kind::Zero) return std::nullopt;
  return k;
}

unsigned nat_value(const Term& t) {
  auto v = try_nat_value(t);
  if (!v) throw NotANumeral("not a numeral");
  return *v;
}

Term estr(int n) { return Term::abs("x", num(n), Term::proj(Type::iota(), Term::var("x", num(n)))); }

Term encode(const Term& t, int n) { return Term::abs(fresh_name(free_names(t), "w"), bnum(n), t); }

bool is_encoding_abs(const Term& t) {
  return t.kind() == Kind::Abs && bnum_index(t.annotation()) && !t.kid(0).has_free(t.name());
}

namespace {

// Every arrow of `c` takes `bnum(j)` as a premise, i.e. `c` is `bnum(j) => D`.
bool is_boxed_at(const Type& c, int j) {
  const Arrow b = bnum(j).arrows()[0];
  return std::all_of(c.arrows().begin(), c.arrows().end(), [&](const Arrow& a) {
    return std::find(a.premises().begin(), a.premises().end(), b) != a.premises().end();
  });
}

std::optional<std::string> clash(const std::vector<Type>& types, const std::vector<int>& enc) {
  for (std::size_t i = 0; i < enc.size(); ++i) {
    if (enc[i] < 1) return "encoding indices start at 1";
    for (std::size_t j = 0; j < i; ++j) {
      if (enc[i] == enc[j]) return "repeated encoding index " + std::to_string(enc[i]);
    }
  }
  for (std::size_t k = 0; k < types.size(); ++k) {
    for (int j : enc) {
      if (is_boxed_at(types[k], j)) {
        return "element " + std::to_string(k) + " already has the form bnum(" + std::to_string(j) + ") => D";
      }
    }
  }
  std::vector<Type> out;
  for (std::size_t k = 0; k < types.size(); ++k) out.push_back(boxed(types[k], enc[k]));
  for (std::size_t k = 0; k < out.size(); ++k) {
    ArrowBag others;
    for (std::size_t l = 0; l < out.size(); ++l) {
      if (l != k) others = bag::unite(others, out[l].arrows());
    }
    if (bag::is_subset(out[k].arrows(), others)) {
      return "boxed element " + std::to_string(k) + " is covered by the other elements";
    }
  }
  return std::nullopt;
}

std::vector<Type> element_types(const std::vector<Term>& elements, const TypingContext& ctx) {
  std::vector<Type> types;
  TypingContext full = ctx;
  for (const Term& e : elements) {
    for (const TypedName& v : e.free_vars()) {
      if (!full.lookup(v.name)) full.bind(v.name, v.type);
    }
  }
  for (const Term& e : elements) types.push_back(infer(full, e));
  return types;
}

}  // namespace

Term mk_tuple(const std::vector<Term>& elements, const std::vector<int>& encodings, const TypingContext& ctx) {
  if (elements.size() != encodings.size() || elements.size() < 2) {
    throw std::invalid_argument("a tuple needs at least two elements and one index per element");
  }
  if (auto why = clash(element_types(elements, ctx), encodings)) throw EncodingClash(*why);
  std::vector<Term> boxes;
  for (std::size_t i = 0; i < elements.size(); ++i) boxes.push_back(encode(elements[i], encodings[i]));
  return Term::sum(std::move(boxes));
}

std::vector<int> suggest_encodings(const std::vector<Term>& elements, const TypingContext& ctx) {
  std::vector<Type> types = element_types(elements, ctx);
  const std::size_t n = types.size();
  // ascending first, then any assignment, with indices bounded by 2n + 8
  const int limit = static_cast<int>(2 * n + 8);
  std::vector<int> enc(n);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == n) return !clash(types, enc).has_value();
    for (int v = 1; v <= limit; ++v) {
      if (std::find(enc.begin(), enc.begin() + static_cast<std::ptrdiff_t>(i), v) != enc.begin() + static_cast<std::ptrdiff_t>(i)) continue;
      enc[i] = v;
      if (go(i + 1)) return true;
    }
    return false;
  };
  if (!go(0)) throw EncodingClash("no clash-free encoding found");
  return enc;
}

Term tuple_get(int i, const Type& elem_type, const Term& t) {
  return Term::app(Term::proj(boxed(elem_type, i), t), estr(i));
}

namespace corpus {

namespace {

Term fst(const Term& t) { return tuple_get(1, nat(), t); }
Term snd(const Term& t) { return tuple_get(2, nat(), t); }
Term pair(const Term& a, const Term& b) { return Term::sum({encode(a, 1), encode(b, 2)}); }
Term x_pair() { return Term::var("x", nat_pair()); }

}  // namespace

Term succ_fst() { return Term::abs("x", nat_pair(), pair(Term::succ(fst(x_pair())), snd(x_pair()))); }

Term swap() { return Term::abs("x", nat_pair(), pair(snd(x_pair()), fst(x_pair()))); }

Term div_mod_rec(int i, int j) {
  Type ni = boxed(nat(), i), nj = boxed(nat(), j);
  Type xt = arrow_type(product(product(ni, nj), nat()), nat_pair());
  Term x = Term::var("x", xt), n = Term::var("n", ni), m = Term::var("m", nj), k = Term::var("k", nat());
  Term n_val = Term::app(n, estr(i));
  Term prev = encode(Term::pred(n_val), i);
  std::vector<Term> reset{prev, m, Term::zero()};
  std::vector<Term> carry{prev, m, Term::succ(k)};
  Term body = Term::ifz(n_val, pair(Term::zero(), k),
                        Term::ifeq(Term::app(m, estr(j)), Term::succ(k), Term::app(succ_fst(), Term::apply(x, reset)),
                                   Term::apply(x, carry)));
  return Term::fix("x", xt, Term::abs("n", ni, Term::abs("m", nj, Term::abs("k", nat(), body))));
}

Term div_mod(int i, int j) {
  std::vector<Term> args{encode(fst(x_pair()), i), encode(snd(x_pair()), j), Term::zero()};
  return Term::abs("x", nat_pair(), Term::apply(div_mod_rec(i, j), args));
}

Term div() { return tuple_get(1, arrow_type(nat_pair(), nat()), div_mod(3, 4)); }

Term even_odd() {
  Type xt = arrow_type(nat(), nat_pair());
  Term n = Term::var("n", nat());
  Term body = Term::ifz(n, pair(Term::zero(), mk_nat(1)), Term::app(swap(), Term::app(Term::var("x", xt), Term::pred(n))));
  return Term::fix("x", xt, Term::abs("n", nat(), body));
}

Term even() { return tuple_get(1, arrow_type(nat(), nat()), even_odd()); }

}  // namespace corpus

}  // namespace lplus
