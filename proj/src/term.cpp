#include "lplus/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace lplus {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Merges sorted free-variable lists; reports conflicting annotations.
std::vector<TypedName> merge_free(const std::vector<TypedName>& a, const std::vector<TypedName>& b) {
  std::vector<TypedName> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool consistent(const std::vector<TypedName>& free) {
  for (std::size_t i = 1; i < free.size(); ++i) {
    if (free[i].name == free[i - 1].name) return false;
  }
  return true;
}

const Type& nat_type() {
  static const Type nat = Type::nat();
  return nat;
}

bool is_nat(const std::optional<Type>& t) { return t && *t == nat_type(); }

std::optional<Type> apply_type(const Type& fun, const Type& arg) {
  ArrowBag out;
  out.reserve(fun.size());
  for (const Arrow& a : fun.arrows()) {
    if (!bag::is_subset(arg.arrows(), a.premises())) return std::nullopt;
    out.emplace_back(bag::difference(a.premises(), arg.arrows()), a.head());
  }
  return Type(std::move(out));
}

bool binder_consistent(const std::vector<TypedName>& free, const std::string& x, const Type& t) {
  for (const TypedName& v : free) {
    if (v.name == x && v.type != t) return false;
  }
  return true;
}

}  // namespace

bool is_binder(Kind k) { return k == Kind::Abs || k == Kind::Fix; }

const Type& Term::annotation() const {
  if (!node_->annotation) throw std::logic_error("term kind carries no annotation");
  return *node_->annotation;
}

bool Term::has_free(const std::string& name) const {
  const auto& f = node_->free;
  auto it = std::lower_bound(f.begin(), f.end(), name,
                             [](const TypedName& v, const std::string& n) { return v.name < n; });
  return it != f.end() && it->name == name;
}

Term Term::make(Kind kind, std::string name, std::optional<Type> annotation, std::vector<Term> kids) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->annotation = std::move(annotation);
  n->kids = std::move(kids);
  n->size = 1;
  for (const Term& k : n->kids) n->size += k.size();

  bool kids_ok = true;
  for (const Term& k : n->kids) {
    n->free = merge_free(n->free, k.free_vars());
    kids_ok = kids_ok && k.well_typed();
  }
  if (is_binder(kind)) {
    bool ok = binder_consistent(n->free, n->name, *n->annotation);
    std::erase_if(n->free, [&](const TypedName& v) { return v.name == n->name; });
    kids_ok = kids_ok && ok;
  }
  kids_ok = kids_ok && consistent(n->free);

  const auto& ks = n->kids;
  if (kids_ok || kind == Kind::Var || kind == Kind::Zero) {
    switch (kind) {
      case Kind::Var:
        n->free = {TypedName{n->name, *n->annotation}};
        n->type = n->annotation;
        break;
      case Kind::Abs:
        n->type = arrow_type(*n->annotation, *ks[0].type());
        break;
      case Kind::App:
        n->type = apply_type(*ks[0].type(), *ks[1].type());
        break;
      case Kind::Sum: {
        ArrowBag all;
        for (const Term& k : ks) all = bag::unite(all, k.type()->arrows());
        n->type = Type(std::move(all));
        break;
      }
      case Kind::Proj:
        if (bag::is_subset(n->annotation->arrows(), ks[0].type()->arrows())) n->type = n->annotation;
        break;
      case Kind::Zero:
        n->type = nat_type();
        break;
      case Kind::Succ:
      case Kind::Pred:
        if (is_nat(ks[0].type())) n->type = nat_type();
        break;
      case Kind::IfZ:
        if (is_nat(ks[0].type()) && *ks[1].type() == *ks[2].type()) n->type = ks[1].type();
        break;
      case Kind::IfEq:
        if (is_nat(ks[0].type()) && is_nat(ks[1].type()) && *ks[2].type() == *ks[3].type()) n->type = ks[2].type();
        break;
      case Kind::Fix:
        if (*ks[0].type() == *n->annotation) n->type = n->annotation;
        break;
    }
  }
  return Term(std::move(n));
}

Term Term::var(std::string name, Type type) { return make(Kind::Var, std::move(name), std::move(type), {}); }
Term Term::abs(std::string binder, Type binder_type, Term body) {
  return make(Kind::Abs, std::move(binder), std::move(binder_type), {std::move(body)});
}
Term Term::app(Term fun, Term arg) { return make(Kind::App, {}, std::nullopt, {std::move(fun), std::move(arg)}); }
Term Term::proj(Type type, Term body) { return make(Kind::Proj, {}, std::move(type), {std::move(body)}); }
Term Term::zero() { return make(Kind::Zero, {}, std::nullopt, {}); }
Term Term::succ(Term body) { return make(Kind::Succ, {}, std::nullopt, {std::move(body)}); }
Term Term::pred(Term body) { return make(Kind::Pred, {}, std::nullopt, {std::move(body)}); }
Term Term::ifz(Term n, Term a, Term b) {
  return make(Kind::IfZ, {}, std::nullopt, {std::move(n), std::move(a), std::move(b)});
}
Term Term::ifeq(Term n, Term m, Term a, Term b) {
  return make(Kind::IfEq, {}, std::nullopt, {std::move(n), std::move(m), std::move(a), std::move(b)});
}
Term Term::fix(std::string binder, Type binder_type, Term body) {
  return make(Kind::Fix, std::move(binder), std::move(binder_type), {std::move(body)});
}

Term Term::sum(std::vector<Term> elements) {
  std::vector<Term> flat;
  for (Term& e : elements) {
    if (e.kind() == Kind::Sum) {
      flat.insert(flat.end(), e.kids().begin(), e.kids().end());
    } else {
      flat.push_back(std::move(e));
    }
  }
  if (flat.empty()) throw std::invalid_argument("empty sum");
  if (flat.size() == 1) return flat.front();
  std::sort(flat.begin(), flat.end(), [](const Term& a, const Term& b) {
    const auto& ta = a.type();
    const auto& tb = b.type();
    if (ta.has_value() != tb.has_value()) return !ta.has_value();
    if (ta && *ta != *tb) return *ta < *tb;
    return compare_structural(a, b) < 0;
  });
  return make(Kind::Sum, {}, std::nullopt, std::move(flat));
}

Term Term::apply(Term fun, std::span<const Term> args) {
  for (const Term& a : args) fun = app(std::move(fun), a);
  return fun;
}

Term Term::with_kids(std::vector<Term> kids) const {
  if (kind() == Kind::Sum) return sum(std::move(kids));
  return make(kind(), node_->name, node_->annotation, std::move(kids));
}

int compare_structural(const Term& a, const Term& b) {
  if (a.same_node(b)) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  if (a.kind() == Kind::Var || a.kind() == Kind::Abs || a.kind() == Kind::Proj || a.kind() == Kind::Fix) {
    if (int c = compare(a.annotation(), b.annotation()); c != 0) return c;
  }
  if (a.kids().size() != b.kids().size()) return a.kids().size() < b.kids().size() ? -1 : 1;
  for (std::size_t i = 0; i < a.kids().size(); ++i) {
    if (int c = compare_structural(a.kid(i), b.kid(i)); c != 0) return c;
  }
  return 0;
}

bool structurally_equal(const Term& a, const Term& b) { return compare_structural(a, b) == 0; }

std::set<TypedName> free_vars(const Term& t) { return {t.free_vars().begin(), t.free_vars().end()}; }

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  for (const TypedName& v : t.free_vars()) out.insert(v.name);
  return out;
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (!t.name().empty()) out.insert(t.name());
  for (const Term& k : t.kids()) collect_names(k, out);
}

std::string fresh_name(const std::set<std::string>& avoid, const std::string& hint) {
  if (!avoid.contains(hint)) return hint;
  std::string stem = hint;
  while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  for (std::size_t i = 0;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

Term substitute(const Term& t, const std::string& x, const Term& s) {
  if (!t.has_free(x)) return t;
  switch (t.kind()) {
    case Kind::Var:
      if (s.type() && *s.type() != t.annotation()) {
        throw TypeMismatch("substituting " + x + ": expected " + to_string(t.annotation()) + ", got " +
                           to_string(*s.type()));
      }
      return s;
    case Kind::Abs:
    case Kind::Fix: {
      Term body = t.kid(0);
      std::string binder = t.name();
      if (s.has_free(binder)) {
        std::set<std::string> avoid = free_names(s);
        for (const TypedName& v : body.free_vars()) avoid.insert(v.name);
        avoid.insert(x);
        std::string renamed = fresh_name(avoid, binder);
        body = substitute(body, binder, Term::var(renamed, t.annotation()));
        binder = std::move(renamed);
      }
      body = substitute(body, x, s);
      return t.kind() == Kind::Abs ? Term::abs(binder, t.annotation(), std::move(body))
                                   : Term::fix(binder, t.annotation(), std::move(body));
    }
    default: {
      std::vector<Term> kids;
      kids.reserve(t.kids().size());
      for (const Term& k : t.kids()) kids.push_back(substitute(k, x, s));
      return t.with_kids(std::move(kids));
    }
  }
}

namespace {

using Env = std::vector<std::string>;

// Index of the innermost binding of `name`, counted from the innermost binder.
std::optional<std::size_t> lookup(const Env& env, const std::string& name) {
  for (std::size_t i = env.size(); i-- > 0;) {
    if (env[i] == name) return env.size() - 1 - i;
  }
  return std::nullopt;
}

bool alpha_rec(const Term& a, const Term& b, Env& ea, Env& eb);

bool match_sums(std::span<const Term> as, std::span<const Term> bs, std::vector<bool>& used, std::size_t i,
                Env& ea, Env& eb) {
  if (i == as.size()) return true;
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (used[j]) continue;
    const auto& ta = as[i].type();
    const auto& tb = bs[j].type();
    if (ta.has_value() != tb.has_value() || (ta && *ta != *tb)) continue;
    if (!alpha_rec(as[i], bs[j], ea, eb)) continue;
    used[j] = true;
    if (match_sums(as, bs, used, i + 1, ea, eb)) return true;
    used[j] = false;
  }
  return false;
}

bool alpha_rec(const Term& a, const Term& b, Env& ea, Env& eb) {
  if (a.kind() != b.kind()) return false;
  if (a.size() != b.size()) return false;
  switch (a.kind()) {
    case Kind::Var: {
      if (a.annotation() != b.annotation()) return false;
      auto ia = lookup(ea, a.name());
      auto ib = lookup(eb, b.name());
      if (ia.has_value() != ib.has_value()) return false;
      return ia ? *ia == *ib : a.name() == b.name();
    }
    case Kind::Abs:
    case Kind::Fix: {
      if (a.annotation() != b.annotation()) return false;
      ea.push_back(a.name());
      eb.push_back(b.name());
      bool ok = alpha_rec(a.kid(0), b.kid(0), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
    case Kind::Sum: {
      if (a.kids().size() != b.kids().size()) return false;
      std::vector<bool> used(b.kids().size(), false);
      return match_sums(a.kids(), b.kids(), used, 0, ea, eb);
    }
    case Kind::Proj:
      if (a.annotation() != b.annotation()) return false;
      [[fallthrough]];
    default:
      for (std::size_t i = 0; i < a.kids().size(); ++i) {
        if (!alpha_rec(a.kid(i), b.kid(i), ea, eb)) return false;
      }
      return true;
  }
}

std::size_t hash_rec(const Term& t, Env& env) {
  std::size_t h = static_cast<std::size_t>(t.kind()) * 1315423911u;
  switch (t.kind()) {
    case Kind::Var: {
      h = mix(h, t.annotation().hash());
      auto idx = lookup(env, t.name());
      return idx ? mix(h, *idx + 1) : mix(h, std::hash<std::string>{}(t.name()));
    }
    case Kind::Abs:
    case Kind::Fix: {
      h = mix(h, t.annotation().hash());
      env.push_back(t.name());
      h = mix(h, hash_rec(t.kid(0), env));
      env.pop_back();
      return h;
    }
    case Kind::Sum: {
      std::vector<std::size_t> hs;
      for (const Term& k : t.kids()) hs.push_back(hash_rec(k, env));
      std::sort(hs.begin(), hs.end());
      for (std::size_t v : hs) h = mix(h, v);
      return h;
    }
    case Kind::Proj:
      h = mix(h, t.annotation().hash());
      [[fallthrough]];
    default:
      for (const Term& k : t.kids()) h = mix(h, hash_rec(k, env));
      return h;
  }
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  Env ea, eb;
  return alpha_rec(a, b, ea, eb);
}

std::size_t alpha_hash(const Term& t) {
  Env env;
  return hash_rec(t, env);
}

TypingContext TypingContext::extended(const std::string& name, const Type& type) const {
  TypingContext out = *this;
  out.bindings_.insert_or_assign(name, type);
  return out;
}

const Type* TypingContext::lookup(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

void TypingContext::bind(const std::string& name, const Type& type) {
  auto [it, inserted] = bindings_.emplace(name, type);
  if (!inserted && it->second != type) {
    throw std::invalid_argument("variable " + name + " bound twice with different types");
  }
}

TypingContext TypingContext::of_free_vars(const Term& t) {
  TypingContext ctx;
  for (const TypedName& v : t.free_vars()) ctx.bind(v.name, v.type);
  return ctx;
}

const Term& subterm_at(const Term& t, std::span<const std::size_t> path) {
  const Term* cur = &t;
  for (std::size_t i : path) cur = &cur->kid(i);
  return *cur;
}

Term replace_at(const Term& t, std::span<const std::size_t> path, const Term& replacement) {
  if (path.empty()) return replacement;
  std::vector<Term> kids(t.kids().begin(), t.kids().end());
  kids.at(path[0]) = replace_at(kids[path[0]], path.subspan(1), replacement);
  return t.with_kids(std::move(kids));
}

std::string path_to_string(const FocusPath& path) {
  if (path.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(path[i]);
  }
  return out;
}

}  // namespace lplus
