#include "lplus/oracle.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lplus/canon.hpp"
#include "lplus/rewrite.hpp"
#include "lplus/syntax.hpp"
#include "lplus/typecheck.hpp"

namespace lplus::oracle {

namespace {

// ------------------------------------------------------------ type classes

// A type as a sorted list of arrows `premises => head`, with string keys.
struct NArrow {
  std::vector<NArrow> prem;
  std::string head;
  std::string key;
};
using NType = std::vector<NArrow>;

bool key_less(const NArrow& a, const NArrow& b) { return a.key < b.key; }

NArrow make_arrow(std::vector<NArrow> prem, std::string head) {
  std::sort(prem.begin(), prem.end(), key_less);
  std::string key;
  if (!prem.empty()) {
    key = "(";
    for (std::size_t i = 0; i < prem.size(); ++i) key += (i ? "," : "") + prem[i].key;
    key += ")>";
  }
  key += head;
  return {std::move(prem), std::move(head), std::move(key)};
}

NType join(const NType& a, const NType& b) {
  NType out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), key_less);
  return out;
}

bool submultiset(const NType& small, const NType& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end(), key_less);
}

NType minus(const NType& big, const NType& small) {
  NType out;
  std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(out), key_less);
  return out;
}

std::string type_key(const NType& t) {
  std::string out = "{";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "&" : "") + t[i].key;
  return out + "}";
}

bool same(const NType& a, const NType& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(),
                                             [](const NArrow& x, const NArrow& y) { return x.key == y.key; });
}

// A => B: every arrow of B gains the arrows of A as premises.
NType arrow_of(const NType& from, const NType& to) {
  NType out;
  for (const NArrow& a : to) out.push_back(make_arrow(join(from, a.prem), a.head));
  std::sort(out.begin(), out.end(), key_less);
  return out;
}

NType norm(const SourceType& t) {
  switch (t.kind()) {
    case SourceType::Kind::Atom: return {make_arrow({}, t.name())};
    case SourceType::Kind::And: return join(norm(t.left()), norm(t.right()));
    case SourceType::Kind::Arrow: return arrow_of(norm(t.left()), norm(t.right()));
  }
  throw std::logic_error("unreachable");
}

// The B with f = a => B, if any.
std::optional<NType> residual(const NType& f, const NType& a) {
  NType out;
  for (const NArrow& x : f) {
    if (!submultiset(a, x.prem)) return std::nullopt;
    out.push_back(make_arrow(minus(x.prem, a), x.head));
  }
  std::sort(out.begin(), out.end(), key_less);
  return out;
}

SourceType to_source(const NType& t);

SourceType to_source(const NArrow& a) {
  if (a.prem.empty()) return SourceType::atom(a.head);
  return SourceType::arrow(to_source(a.prem), SourceType::atom(a.head));
}

SourceType to_source(const NType& t) {
  SourceType out = to_source(t.front());
  for (std::size_t i = 1; i < t.size(); ++i) out = SourceType::conj(out, to_source(t[i]));
  return out;
}

// Distinct ways of writing `t` as X /\ Y with both sides non-empty, each
// unordered pair once.
std::vector<std::pair<NType, NType>> splits(const NType& t) {
  std::vector<std::pair<NType, NType>> out;
  std::set<std::pair<std::string, std::string>> seen;
  const std::size_t n = t.size();
  if (n < 2 || n > 16) return out;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    NType x, y;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? x : y).push_back(t[i]);
    std::string kx = type_key(x), ky = type_key(y);
    if (kx > ky) continue;
    if (seen.insert({kx, ky}).second) out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

// Ordered variant: X takes part of `t`, Y the rest.
std::vector<std::pair<NType, NType>> ordered_splits(const NType& t) {
  std::vector<std::pair<NType, NType>> out;
  std::set<std::string> seen;
  const std::size_t n = t.size();
  if (n < 2 || n > 16) return out;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    NType x, y;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? x : y).push_back(t[i]);
    if (seen.insert(type_key(x)).second) out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

// ------------------------------------------------------------------ typing

using Scope = std::map<std::string, NType>;

Scope scope_of(const SourceContext& ctx) {
  Scope s;
  for (const auto& [n, t] : ctx) s.emplace(n, norm(t));
  return s;
}

using K = SourceTerm::Kind;

NType infer_at(const Scope& sc, const SourceTerm& r, FocusPath& path) {
  auto child = [&](std::size_t i, const Scope& s, const SourceTerm& k) {
    path.push_back(i);
    NType t = infer_at(s, k, path);
    path.pop_back();
    return t;
  };
  switch (r.kind()) {
    case K::Var: {
      auto it = sc.find(r.name());
      if (it == sc.end()) throw TypeError(TypeErrorKind::UnboundVariable, path, r.name());
      NType t = norm(r.type());
      if (!same(t, it->second)) {
        throw TypeError(TypeErrorKind::DuplicateBinding, path, r.name() + " is used at two non-isomorphic types");
      }
      return t;
    }
    case K::Abs: {
      Scope inner = sc;
      NType from = norm(r.type());
      inner[r.name()] = from;
      return arrow_of(from, child(0, inner, r.body()));
    }
    case K::App: {
      NType f = child(0, sc, r.left());
      NType a = child(1, sc, r.right());
      if (auto res = residual(f, a)) return *res;
      throw TypeError(TypeErrorKind::ApplicationMismatch, path, "the function does not take " + type_key(a));
    }
    case K::Plus: return join(child(0, sc, r.left()), child(1, sc, r.right()));
    case K::Proj: {
      NType body = child(0, sc, r.body());
      NType p = norm(r.type());
      if (!submultiset(p, body)) {
        throw TypeError(TypeErrorKind::ProjectionMismatch, path, type_key(p) + " is not part of " + type_key(body));
      }
      return p;
    }
  }
  throw std::logic_error("unreachable");
}

NType infer_n(const Scope& sc, const SourceTerm& r) {
  FocusPath path;
  return infer_at(sc, r, path);
}

std::optional<NType> try_infer_n(const Scope& sc, const SourceTerm& r) {
  try {
    return infer_n(sc, r);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

// ------------------------------------------------------------ term helpers

void key_into(const SourceTerm& r, std::vector<std::string>& bound, std::string& out) {
  switch (r.kind()) {
    case K::Var: {
      for (std::size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == r.name()) {
          out += "#" + std::to_string(bound.size() - 1 - i);
          return;
        }
      }
      out += "$" + r.name() + ":" + type_key(norm(r.type()));
      return;
    }
    case K::Abs:
      out += "\\" + type_key(norm(r.type())) + ".";
      bound.push_back(r.name());
      key_into(r.body(), bound, out);
      bound.pop_back();
      return;
    case K::App:
      out += "(";
      key_into(r.left(), bound, out);
      out += " ";
      key_into(r.right(), bound, out);
      out += ")";
      return;
    case K::Plus:
      out += "{";
      key_into(r.left(), bound, out);
      out += "+";
      key_into(r.right(), bound, out);
      out += "}";
      return;
    case K::Proj:
      out += "p" + type_key(norm(r.type())) + "[";
      key_into(r.body(), bound, out);
      out += "]";
      return;
  }
}

void free_names_into(const SourceTerm& r, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (r.kind()) {
    case K::Var:
      if (!bound.count(r.name())) out.insert(r.name());
      return;
    case K::Abs: {
      bool fresh = bound.insert(r.name()).second;
      free_names_into(r.body(), bound, out);
      if (fresh) bound.erase(r.name());
      return;
    }
    case K::Proj: free_names_into(r.body(), bound, out); return;
    case K::App:
    case K::Plus:
      free_names_into(r.left(), bound, out);
      free_names_into(r.right(), bound, out);
      return;
  }
}

std::set<std::string> free_names(const SourceTerm& r) {
  std::set<std::string> bound, out;
  free_names_into(r, bound, out);
  return out;
}

void all_names(const SourceTerm& r, std::set<std::string>& out) {
  if (r.kind() == K::Var || r.kind() == K::Abs) out.insert(r.name());
  switch (r.kind()) {
    case K::Var: return;
    case K::Abs:
    case K::Proj: all_names(r.body(), out); return;
    case K::App:
    case K::Plus:
      all_names(r.left(), out);
      all_names(r.right(), out);
      return;
  }
}

// Capture-avoiding `r{s/x}`; every free `x` is replaced whatever its label.
SourceTerm subst(const SourceTerm& r, const std::string& x, const SourceTerm& s, const std::set<std::string>& fv_s) {
  switch (r.kind()) {
    case K::Var: return r.name() == x ? s : r;
    case K::Abs: {
      if (r.name() == x) return r;
      if (!fv_s.count(r.name())) return SourceTerm::abs(r.name(), r.type(), subst(r.body(), x, s, fv_s));
      std::set<std::string> avoid = fv_s;
      all_names(r.body(), avoid);
      avoid.insert(x);
      std::string z = fresh_name(avoid, r.name());
      std::set<std::string> fz{z};
      SourceTerm body = subst(r.body(), r.name(), SourceTerm::var(z, r.type()), fz);
      return SourceTerm::abs(z, r.type(), subst(body, x, s, fv_s));
    }
    case K::App: return SourceTerm::app(subst(r.left(), x, s, fv_s), subst(r.right(), x, s, fv_s));
    case K::Plus: return SourceTerm::plus(subst(r.left(), x, s, fv_s), subst(r.right(), x, s, fv_s));
    case K::Proj: return SourceTerm::proj(r.type(), subst(r.body(), x, s, fv_s));
  }
  throw std::logic_error("unreachable");
}

SourceTerm subst(const SourceTerm& r, const std::string& x, const SourceTerm& s) {
  return subst(r, x, s, free_names(s));
}

SourceTerm with_kid(const SourceTerm& r, std::size_t i, const SourceTerm& k) {
  switch (r.kind()) {
    case K::Abs: return SourceTerm::abs(r.name(), r.type(), k);
    case K::Proj: return SourceTerm::proj(r.type(), k);
    case K::App: return i == 0 ? SourceTerm::app(k, r.right()) : SourceTerm::app(r.left(), k);
    case K::Plus: return i == 0 ? SourceTerm::plus(k, r.right()) : SourceTerm::plus(r.left(), k);
    case K::Var: break;
  }
  throw std::logic_error("variables have no children");
}

std::vector<SourceTerm> kids_of(const SourceTerm& r) {
  switch (r.kind()) {
    case K::Var: return {};
    case K::Abs:
    case K::Proj: return {r.body()};
    case K::App:
    case K::Plus: return {r.left(), r.right()};
  }
  return {};
}

Scope child_scope(const SourceTerm& r, const Scope& sc) {
  if (r.kind() != K::Abs) return sc;
  Scope inner = sc;
  inner[r.name()] = norm(r.type());
  return inner;
}

// ------------------------------------------------------- symmetric relation

void root_neighbors(const SourceTerm& r, const Scope& sc, std::vector<Neighbor>& out) {
  auto type_of = [&](const SourceTerm& t, const Scope& s) { return infer_n(s, t); };
  switch (r.kind()) {
    case K::Plus: {
      const SourceTerm &a = r.left(), &b = r.right();
      out.push_back({EqRule::Comm, SourceTerm::plus(b, a)});
      if (a.kind() == K::Plus) out.push_back({EqRule::Asso, SourceTerm::plus(a.left(), SourceTerm::plus(a.right(), b))});
      if (b.kind() == K::Plus) out.push_back({EqRule::Asso, SourceTerm::plus(SourceTerm::plus(a, b.left()), b.right())});
      // \x.p + \y.q  ->  \x.(p + q)
      if (a.kind() == K::Abs && b.kind() == K::Abs && iso_equiv(a.type(), b.type())) {
        std::string z = a.name();
        SourceTerm p = a.body(), q = b.body();
        if (b.name() != z) {
          std::set<std::string> fq = free_names(q);
          if (fq.count(z)) {
            std::set<std::string> avoid = fq;
            all_names(p, avoid);
            all_names(q, avoid);
            z = fresh_name(avoid, z);
            p = subst(p, a.name(), SourceTerm::var(z, a.type()));
          }
          q = subst(q, b.name(), SourceTerm::var(z, b.type()));
        }
        out.push_back({EqRule::DistII, SourceTerm::abs(z, a.type(), SourceTerm::plus(p, q))});
      }
      // r t + s t  ->  (r + s) t
      if (a.kind() == K::App && b.kind() == K::App && term_key(a.right()) == term_key(b.right())) {
        out.push_back({EqRule::DistIE, SourceTerm::app(SourceTerm::plus(a.left(), b.left()), a.right())});
      }
      // pi_X(r) + pi_Y(s)  ->  pi_{X /\ Y}(r + s)
      if (a.kind() == K::Proj && b.kind() == K::Proj) {
        out.push_back({EqRule::Split, SourceTerm::proj(SourceType::conj(a.type(), b.type()),
                                                       SourceTerm::plus(a.body(), b.body()))});
      }
      break;
    }
    case K::Abs: {
      const SourceTerm& body = r.body();
      if (body.kind() == K::Plus) {
        out.push_back({EqRule::DistII, SourceTerm::plus(SourceTerm::abs(r.name(), r.type(), body.left()),
                                                        SourceTerm::abs(r.name(), r.type(), body.right()))});
      }
      // \x:R. pi_S(b)  ->  pi_{R => S}(\x:R. b)
      if (body.kind() == K::Proj) {
        out.push_back({EqRule::DistEI, SourceTerm::proj(SourceType::arrow(r.type(), body.type()),
                                                        SourceTerm::abs(r.name(), r.type(), body.body()))});
      }
      break;
    }
    case K::App: {
      const SourceTerm &f = r.left(), &s = r.right();
      if (f.kind() == K::Plus) {
        out.push_back({EqRule::DistIE, SourceTerm::plus(SourceTerm::app(f.left(), s), SourceTerm::app(f.right(), s))});
      }
      // pi_{R => S}(g) s  ->  pi_S(g s), when g : R => (S /\ T)
      if (f.kind() == K::Proj) {
        NType rt = type_of(s, sc);
        NType g = type_of(f.body(), sc);
        auto sres = residual(norm(f.type()), rt);
        auto gres = residual(g, rt);
        if (sres && gres && gres->size() > sres->size()) {
          out.push_back({EqRule::DistEE, SourceTerm::proj(to_source(*sres), SourceTerm::app(f.body(), s))});
        }
      }
      if (f.kind() == K::App) out.push_back({EqRule::Curry, SourceTerm::app(f.left(), SourceTerm::plus(f.right(), s))});
      if (s.kind() == K::Plus) out.push_back({EqRule::Curry, SourceTerm::app(SourceTerm::app(f, s.left()), s.right())});
      break;
    }
    case K::Proj: {
      const SourceTerm& body = r.body();
      NType p = norm(r.type());
      // pi_{R => S}(\x:R. b)  ->  \x:R. pi_S(b)
      if (body.kind() == K::Abs) {
        if (auto s = residual(p, norm(body.type()))) {
          out.push_back({EqRule::DistEI, SourceTerm::abs(body.name(), body.type(), SourceTerm::proj(to_source(*s), body.body()))});
        }
      }
      // pi_S(g s)  ->  pi_{R => S}(g) s, when g : R => (S /\ T)
      if (body.kind() == K::App) {
        NType rt = type_of(body.right(), sc);
        auto gres = residual(type_of(body.left(), sc), rt);
        if (gres && gres->size() > p.size()) {
          out.push_back({EqRule::DistEE, SourceTerm::app(SourceTerm::proj(SourceType::arrow(to_source(rt), r.type()),
                                                                          body.left()),
                                                         body.right())});
        }
      }
      // pi_{X /\ Y}(a + b)  ->  pi_X(a) + pi_Y(b)
      if (body.kind() == K::Plus) {
        NType ta = type_of(body.left(), sc), tb = type_of(body.right(), sc);
        for (const auto& [x, y] : ordered_splits(p)) {
          if (submultiset(x, ta) && submultiset(y, tb)) {
            out.push_back({EqRule::Split, SourceTerm::plus(SourceTerm::proj(to_source(x), body.left()),
                                                           SourceTerm::proj(to_source(y), body.right()))});
          }
        }
      }
      break;
    }
    case K::Var: break;
  }
}

void neighbors_rec(const SourceTerm& r, const Scope& sc, std::vector<Neighbor>& out) {
  root_neighbors(r, sc, out);
  Scope inner = child_scope(r, sc);
  auto kids = kids_of(r);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::vector<Neighbor> sub;
    neighbors_rec(kids[i], inner, sub);
    for (Neighbor& n : sub) out.push_back({n.rule, with_kid(r, i, n.term)});
  }
}

std::vector<Neighbor> neighbors_n(const SourceTerm& r, const Scope& sc) {
  infer_n(sc, r);
  std::vector<Neighbor> out;
  neighbors_rec(r, sc, out);
  return out;
}

std::vector<SourceTerm> class_n(const SourceTerm& r, const Scope& sc, std::size_t bound) {
  std::vector<SourceTerm> members{r};
  std::unordered_set<std::string> seen{term_key(r)};
  for (std::size_t i = 0; i < members.size(); ++i) {
    std::vector<Neighbor> ns = neighbors_n(members[i], sc);
    for (Neighbor& n : ns) {
      if (!seen.insert(term_key(n.term)).second) continue;
      if (members.size() >= bound) throw BoundExceeded("equivalence class exceeds " + std::to_string(bound), members.size());
      members.push_back(std::move(n.term));
    }
  }
  return members;
}

// ------------------------------------------------------- labelled reduction

// A hole below a projection, or in an argument position that a projection
// can be moved over, is a projection context.
bool head_is_proj(const SourceTerm& r) {
  const SourceTerm* cur = &r;
  while (cur->kind() == K::App) cur = &cur->left();
  return cur->kind() == K::Proj;
}

struct Reducer {
  const Scope& sc;
  std::size_t bound;
  /// Delta sites whose class did not close within the bound.
  std::size_t undecided = 0;
  std::unordered_map<std::string, std::shared_ptr<const std::vector<std::pair<NType, NType>>>> sum_splits;

  // Types of the sums s + t that `r` is equivalent to.
  const std::vector<std::pair<NType, NType>>* sums_of(const SourceTerm& r, const Scope& s) {
    std::string k = term_key(r);
    if (auto it = sum_splits.find(k); it != sum_splits.end()) return it->second.get();
    auto found = std::make_shared<std::vector<std::pair<NType, NType>>>();
    std::vector<SourceTerm> cls;
    try {
      cls = class_n(r, s, bound);
    } catch (const BoundExceeded&) {
      ++undecided;
      return nullptr;
    }
    for (const SourceTerm& m : cls) {
      if (m.kind() == K::Plus) found->emplace_back(infer_n(s, m.left()), infer_n(s, m.right()));
    }
    // the whole class shares the answer
    for (const SourceTerm& m : cls) sum_splits.emplace(term_key(m), found);
    return found.get();
  }

  void delta(const SourceTerm& r, const Scope& s, std::vector<Successor>& out) {
    NType t = infer_n(s, r);
    if (t.size() < 2) return;
    auto parts = splits(t);
    const auto* sums = sums_of(r, s);
    if (!sums) return;
    for (const auto& [x, y] : parts) {
      bool is_sum = std::any_of(sums->begin(), sums->end(), [&](const auto& ab) {
        return (same(ab.first, x) && same(ab.second, y)) || (same(ab.first, y) && same(ab.second, x));
      });
      if (!is_sum) {
        out.push_back({RedRule::Delta, SourceTerm::plus(SourceTerm::proj(to_source(x), r), SourceTerm::proj(to_source(y), r))});
      }
    }
  }

  void rec(const SourceTerm& r, const Scope& s, bool proj_ctx, std::vector<Successor>& out) {
    switch (r.kind()) {
      case K::App:
        if (r.left().kind() == K::Abs && same(infer_n(s, r.right()), norm(r.left().type()))) {
          out.push_back({RedRule::Beta, subst(r.left().body(), r.left().name(), r.right())});
        }
        break;
      case K::Proj: {
        NType p = norm(r.type());
        const SourceTerm& body = r.body();
        if (body.kind() == K::Plus) {
          if (same(infer_n(s, body.left()), p)) out.push_back({RedRule::ProjN, body.left()});
          if (same(infer_n(s, body.right()), p)) out.push_back({RedRule::ProjN, body.right()});
        }
        if (same(infer_n(s, body), p)) out.push_back({RedRule::Proj1, body});
        break;
      }
      default: break;
    }
    if (!proj_ctx) delta(r, s, out);
    Scope inner = child_scope(r, s);
    auto kids = kids_of(r);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      bool pc = proj_ctx || r.kind() == K::Proj || (r.kind() == K::App && i == 1 && head_is_proj(r.left()));
      std::vector<Successor> sub;
      rec(kids[i], inner, pc, sub);
      for (Successor& x : sub) out.push_back({x.rule, with_kid(r, i, x.term)});
    }
  }
};

std::vector<Successor> reduce_n(const SourceTerm& r, const Scope& sc, std::size_t bound, std::size_t* undecided = nullptr) {
  infer_n(sc, r);
  Reducer red{sc, bound, 0, {}};
  std::vector<Successor> out;
  red.rec(r, sc, false, out);
  if (undecided) *undecided += red.undecided;
  return out;
}

TypingContext typing_context(const Scope& sc) {
  TypingContext ctx;
  for (const auto& [n, t] : sc) ctx.bind(n, canonicalize_type(to_source(t)));
  return ctx;
}

// Breadth-first search for a path of at least one step from `from` to `to`.
JoinResult reaches(const Term& from, const Term& to, std::size_t depth, std::size_t node_cap) {
  std::vector<Term> seen{from};
  std::unordered_map<std::size_t, std::vector<std::size_t>> index{{alpha_hash(from), {0}}};
  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, 0}};
  bool cut = false;
  while (!queue.empty()) {
    auto [i, d] = queue.front();
    queue.pop_front();
    std::vector<Redex> rs = enumerate_redexes(seen[i], {});
    if (rs.empty()) continue;
    if (d >= depth || seen.size() >= node_cap) {
      cut = true;
      continue;
    }
    for (const Redex& r : rs) {
      if (alpha_eq(r.result, to)) return {true, false};
      auto& bucket = index[alpha_hash(r.result)];
      if (std::any_of(bucket.begin(), bucket.end(), [&](std::size_t j) { return alpha_eq(seen[j], r.result); })) continue;
      bucket.push_back(seen.size());
      seen.push_back(r.result);
      queue.emplace_back(seen.size() - 1, d + 1);
    }
  }
  return {false, cut};
}

std::string show(const SourceTerm& r) { return pretty(canonicalize_term(r)); }

}  // namespace

// ------------------------------------------------------------------ public

SourceType iso_normal(const SourceType& t) { return to_source(norm(t)); }

bool iso_equiv(const SourceType& a, const SourceType& b) { return same(norm(a), norm(b)); }

SourceType orig_infer(const SourceContext& ctx, const SourceTerm& r) { return to_source(infer_n(scope_of(ctx), r)); }

bool orig_typable(const SourceContext& ctx, const SourceTerm& r) { return try_infer_n(scope_of(ctx), r).has_value(); }

std::string term_key(const SourceTerm& r) {
  std::vector<std::string> bound;
  std::string out;
  key_into(r, bound, out);
  return out;
}

std::string_view to_string(EqRule r) {
  switch (r) {
    case EqRule::Comm: return "comm";
    case EqRule::Asso: return "asso";
    case EqRule::DistII: return "dist_ii";
    case EqRule::DistIE: return "dist_ie";
    case EqRule::DistEI: return "dist_ei";
    case EqRule::DistEE: return "dist_ee";
    case EqRule::Curry: return "curry";
    case EqRule::Split: return "split";
  }
  return "?";
}

std::string_view to_string(RedRule r) {
  switch (r) {
    case RedRule::Beta: return "beta";
    case RedRule::ProjN: return "pi_n";
    case RedRule::Proj1: return "pi_1";
    case RedRule::Delta: return "delta";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "agree";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<Neighbor> equiv_neighbors(const SourceTerm& r, const SourceContext& ctx) {
  return neighbors_n(r, scope_of(ctx));
}

std::vector<SourceTerm> equivalence_class(const SourceTerm& r, std::size_t bound, const SourceContext& ctx) {
  return class_n(r, scope_of(ctx), bound);
}

std::vector<Successor> orig_reduce(const SourceTerm& r, const SourceContext& ctx, std::size_t class_bound) {
  return reduce_n(r, scope_of(ctx), class_bound);
}

std::vector<SourceTerm> orig_reduce_modulo(const SourceTerm& r, const SourceContext& ctx, std::size_t class_bound) {
  Scope sc = scope_of(ctx);
  infer_n(sc, r);
  Reducer red{sc, class_bound, 0, {}};
  std::vector<SourceTerm> out;
  // every key of every successor class computed so far
  std::unordered_set<std::string> covered;
  for (const SourceTerm& m : class_n(r, sc, class_bound)) {
    std::vector<Successor> succ;
    red.rec(m, sc, false, succ);
    for (Successor& s : succ) {
      if (covered.count(term_key(s.term))) continue;
      std::vector<SourceTerm> cls = class_n(s.term, sc, class_bound);
      std::vector<std::string> keys;
      for (const SourceTerm& c : cls) keys.push_back(term_key(c));
      std::size_t best = std::min_element(keys.begin(), keys.end()) - keys.begin();
      out.push_back(cls[best]);
      covered.insert(keys.begin(), keys.end());
    }
  }
  return out;
}

JoinResult joinable(const Term& a, const Term& b, const TypingContext& ctx, std::size_t depth, std::size_t node_cap) {
  if (alpha_eq(a, b)) return {true, false};
  // a common deterministic normal form is a witness on its own
  StrategyConfig cfg;
  cfg.max_steps = 2000;
  ReductionTrace ta = normalize(a, ctx, cfg), tb = normalize(b, ctx, cfg);
  if (ta.status == TraceStatus::NormalForm && tb.status == TraceStatus::NormalForm && alpha_eq(ta.terminal, tb.terminal)) {
    return {true, false};
  }
  // breadth-first from both sides, one level at a time, until they meet
  struct Side {
    std::vector<Term> seen;
    std::unordered_map<std::size_t, std::vector<std::size_t>> index;
    std::vector<std::size_t> frontier;
    bool cut = false;

    explicit Side(const Term& t) : seen{t}, index{{alpha_hash(t), {0}}}, frontier{0} {}
    bool has(const Term& t) const {
      auto it = index.find(alpha_hash(t));
      if (it == index.end()) return false;
      return std::any_of(it->second.begin(), it->second.end(), [&](std::size_t j) { return alpha_eq(seen[j], t); });
    }
    void expand(const TypingContext& ctx, std::size_t cap) {
      std::vector<std::size_t> next;
      for (std::size_t i : frontier) {
        std::vector<Redex> rs = enumerate_redexes(seen[i], ctx);
        for (Redex& r : rs) {
          if (has(r.result)) continue;
          if (seen.size() >= cap) {
            cut = true;
            break;
          }
          index[alpha_hash(r.result)].push_back(seen.size());
          next.push_back(seen.size());
          seen.push_back(std::move(r.result));
        }
      }
      frontier = std::move(next);
    }
  };
  Side sa(a), sb(b);
  for (std::size_t d = 0; d < depth && (!sa.frontier.empty() || !sb.frontier.empty()); ++d) {
    for (Side* side : {&sa, &sb}) {
      Side& other = side == &sa ? sb : sa;
      std::size_t before = side->seen.size();
      side->expand(ctx, node_cap);
      for (std::size_t i = before; i < side->seen.size(); ++i) {
        if (other.has(side->seen[i])) return {true, false};
      }
    }
  }
  return {false, sa.cut || sb.cut || !sa.frontier.empty() || !sb.frontier.empty()};
}

std::string SoundnessReport::to_string() const {
  std::string out;
  for (const Violation& v : violations) out += "VIOLATION " + v.rule + " " + show(v.a) + " " + show(v.b) + "\n";
  if (violations.empty()) out += "OK " + std::to_string(checked) + "\n";
  for (const std::string& n : notes) out += "INCONCLUSIVE " + n + "\n";
  return out;
}

SoundnessReport check_soundness(const SourceTerm& r, std::size_t depth) {
  SoundnessReport rep;
  const Scope none;
  const NType ty = infer_n(none, r);
  const Term c = canonicalize_term(r);

  // an argument shared by both sides of a diagram at function type
  std::optional<NType> common;
  for (const NArrow& a : ty) {
    NType p = a.prem;
    if (!common) {
      common = p;
    } else {
      NType both;
      std::set_intersection(common->begin(), common->end(), p.begin(), p.end(), std::back_inserter(both), key_less);
      common = both;
    }
  }
  TypingContext ctx;
  std::optional<Term> arg;
  if (common && !common->empty()) {
    std::set<std::string> avoid;
    all_names(r, avoid);
    std::vector<Term> parts;
    for (const NArrow& a : *common) {
      std::string name = fresh_name(avoid, "arg");
      avoid.insert(name);
      Type at = canonicalize_type(to_source(a));
      ctx.bind(name, at);
      parts.push_back(Term::var(name, at));
    }
    arg = Term::sum(std::move(parts));
  }

  auto outcome = [&](const std::string& rule, const SourceTerm& other, const JoinResult& j) {
    if (j.joined) {
      ++rep.checked;
    } else if (j.depth_exceeded) {
      ++rep.inconclusive;
      rep.notes.push_back(rule + " " + show(other));
    } else {
      rep.violations.push_back({rule, r, other});
    }
  };

  for (const Neighbor& n : neighbors_n(r, none)) {
    if (n.rule == EqRule::Comm || n.rule == EqRule::Asso) continue;
    Term d = canonicalize_term(n.term);
    JoinResult j = arg ? joinable(Term::app(c, *arg), Term::app(d, *arg), ctx, depth)
                       : joinable(c, d, {}, depth);
    outcome(std::string(to_string(n.rule)), n.term, j);
  }

  std::size_t undecided = 0;
  std::vector<Successor> succ = reduce_n(r, none, 2000, &undecided);
  if (undecided) {
    rep.inconclusive += undecided;
    rep.notes.push_back("delta side condition undecided at " + std::to_string(undecided) + " site(s)");
  }
  for (const Successor& s : succ) {
    outcome(std::string(to_string(s.rule)), s.term, reaches(c, canonicalize_term(s.term), depth, 4000));
  }
  return rep;
}

std::string ProbeReport::summary() const {
  if (per_probe.empty()) return "untested";
  if (std::find(per_probe.begin(), per_probe.end(), Verdict::Refuted) != per_probe.end()) return "refuted";
  if (std::all_of(per_probe.begin(), per_probe.end(), [](Verdict v) { return v == Verdict::Agree; })) return "supported";
  return "inconclusive";
}

ProbeReport obs_equiv_probe(const SourceTerm& a, const SourceTerm& b, const std::vector<std::vector<SourceTerm>>& probes,
                            std::size_t depth, const SourceContext& ctx) {
  Scope sc = scope_of(ctx);
  if (!same(infer_n(sc, a), infer_n(sc, b))) {
    throw TypeError(TypeErrorKind::ApplicationMismatch, {}, "the two terms have non-isomorphic types");
  }
  TypingContext tctx = typing_context(sc);
  ProbeReport rep;
  for (const auto& args : probes) {
    SourceTerm pa = a, pb = b;
    for (const SourceTerm& t : args) {
      pa = SourceTerm::app(pa, t);
      pb = SourceTerm::app(pb, t);
    }
    infer_n(sc, pa);
    infer_n(sc, pb);
    JoinResult j = joinable(canonicalize_term(pa), canonicalize_term(pb), tctx, depth);
    rep.per_probe.push_back(j.joined ? Verdict::Agree : j.depth_exceeded ? Verdict::Inconclusive : Verdict::Refuted);
  }
  return rep;
}

}  // namespace lplus::oracle
