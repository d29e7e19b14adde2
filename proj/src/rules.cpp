#include <algorithm>
#include <functional>
#include <map>

#include "lplus/encodings.hpp"
#include "lplus/rewrite.hpp"
#include "lplus/typecheck.hpp"

namespace lplus {

namespace {

struct TagName {
  RuleTag tag;
  std::string_view name;
  RuleClass cls;
};

constexpr TagName kNames[] = {
    {RuleTag::Beta, "beta", RuleClass::Plain},        {RuleTag::PBeta, "pbeta", RuleClass::Plain},
    {RuleTag::DBeta, "dbeta", RuleClass::Plain},      {RuleTag::Curry, "curry", RuleClass::Plain},
    {RuleTag::DistI, "dist_i", RuleClass::Plain},     {RuleTag::CommEI, "comm_ei", RuleClass::Plain},
    {RuleTag::CommEE, "comm_ee", RuleClass::Plain},   {RuleTag::Proj, "proj", RuleClass::Plain},
    {RuleTag::Simp, "simp", RuleClass::Plain},        {RuleTag::DistE, "dist_e", RuleClass::Plain},
    {RuleTag::Delta, "delta", RuleClass::Delta},      {RuleTag::Pred, "pred", RuleClass::Plain},
    {RuleTag::IfZ0, "ifz_0", RuleClass::Plain},       {RuleTag::IfZN, "ifz_n", RuleClass::Plain},
    {RuleTag::IfEq0, "ifeq_0", RuleClass::Plain},     {RuleTag::IfEqN, "ifeq_n", RuleClass::Plain},
    {RuleTag::Mu, "mu", RuleClass::Mu},               {RuleTag::CommIfZ, "comm_ifz", RuleClass::Plain},
    {RuleTag::CommIfEq, "comm_ifeq", RuleClass::Plain}, {RuleTag::CommMu, "comm_mu", RuleClass::Plain},
    {RuleTag::TMu, "tmu", RuleClass::Plain},
};

const TagName& entry(RuleTag r) { return kNames[static_cast<std::size_t>(r)]; }

const Type& type_of(const Term& t) {
  if (!t.type()) throw IllTyped("subterm does not typecheck");
  return *t.type();
}

std::set<std::string> names_of(std::initializer_list<const Term*> ts) {
  std::set<std::string> out;
  for (const Term* t : ts) collect_names(*t, out);
  return out;
}

std::string mask_string(std::uint64_t mask, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1U) {
      if (!out.empty()) out += ",";
      out += std::to_string(i);
    }
  }
  return out;
}

ArrowBag type_of_elements(const Term& sum, std::uint64_t mask) {
  ArrowBag out;
  for (std::size_t i = 0; i < sum.kids().size(); ++i) {
    if (mask >> i & 1U) out = bag::unite(out, type_of(sum.kid(i)).arrows());
  }
  return out;
}

Term elements(const Term& sum, std::uint64_t mask) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < sum.kids().size(); ++i) {
    if (mask >> i & 1U) out.push_back(sum.kid(i));
  }
  return Term::sum(std::move(out));
}

// Distinct sub-multisets of a sorted bag.
std::vector<ArrowBag> sub_bags(const ArrowBag& b) {
  std::vector<std::pair<Arrow, std::size_t>> groups;
  for (const Arrow& a : b) {
    if (!groups.empty() && groups.back().first == a) {
      ++groups.back().second;
    } else {
      groups.emplace_back(a, 1);
    }
  }
  std::vector<ArrowBag> out{{}};
  for (const auto& [a, count] : groups) {
    std::vector<ArrowBag> next;
    for (const ArrowBag& prefix : out) {
      for (std::size_t c = 0; c <= count; ++c) {
        ArrowBag x = prefix;
        x.insert(x.end(), c, a);
        next.push_back(std::move(x));
      }
    }
    out = std::move(next);
  }
  return out;
}

constexpr std::size_t kMaxSubsetElements = 12;

void beta_family(RuleTag rule, const Term& t, std::vector<Rewrite>& out) {
  if (t.kind() != Kind::App || t.kid(0).kind() != Kind::Abs) return;
  const Term& lam = t.kid(0);
  const Term& s = t.kid(1);
  const std::string& x = lam.name();
  const Type& c = lam.annotation();
  const Term& r = lam.kid(0);
  const Type& d = type_of(s);
  switch (rule) {
    case RuleTag::Beta:
      if (d == c) out.push_back({rule, substitute(r, x, s), {}});
      break;
    case RuleTag::PBeta:
      if (d != c && bag::is_subset(d.arrows(), c.arrows())) {
        std::set<std::string> avoid = names_of({&r, &s});
        avoid.insert(x);
        std::string y = fresh_name(avoid, "y");
        Type rest(bag::difference(c.arrows(), d.arrows()));
        Term yv = Term::var(y, rest);
        out.push_back({rule, Term::abs(y, rest, substitute(r, x, Term::sum({s, yv}))), {}});
      }
      break;
    case RuleTag::DBeta:
      if (bag::disjoint(d.arrows(), c.arrows())) {
        if (s.has_free(x)) {
          std::string x2 = fresh_name(names_of({&r, &s}), x);
          out.push_back({rule, Term::abs(x2, c, Term::app(substitute(r, x, Term::var(x2, c)), s)), {}});
        } else {
          out.push_back({rule, Term::abs(x, c, Term::app(r, s)), {}});
        }
      }
      break;
    default:
      break;
  }
}

void simp(const Term& t, std::vector<Rewrite>& out) {
  if (t.kind() != Kind::Proj || t.kid(0).kind() != Kind::Sum) return;
  const Term& sum = t.kid(0);
  const ArrowBag& want = t.annotation().arrows();
  const std::size_t n = sum.kids().size();
  if (n > kMaxSubsetElements) {
    // greedy: drop elements while the rest still covers
    std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t m = mask & ~(std::uint64_t{1} << i);
      if (m && bag::is_subset(want, type_of_elements(sum, m))) mask = m;
    }
    if (mask != (std::uint64_t{1} << n) - 1) {
      out.push_back({RuleTag::Simp, Term::proj(t.annotation(), elements(sum, mask)), "keep " + mask_string(mask, n)});
    }
    return;
  }
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 1; m < full; ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint64_t a, std::uint64_t b) { return __builtin_popcountll(a) < __builtin_popcountll(b); });
  std::vector<std::uint64_t> minimal;
  for (std::uint64_t m : masks) {
    bool dominated = std::any_of(minimal.begin(), minimal.end(), [&](std::uint64_t k) { return (k & m) == k; });
    if (dominated) continue;
    if (bag::is_subset(want, type_of_elements(sum, m))) minimal.push_back(m);
  }
  for (std::uint64_t m : minimal) {
    out.push_back({RuleTag::Simp, Term::proj(t.annotation(), elements(sum, m)), "keep " + mask_string(m, n)});
  }
}

void dist_e(const Term& t, std::vector<Rewrite>& out) {
  if (t.kind() != Kind::Proj || t.kid(0).kind() != Kind::Sum) return;
  const Term& sum = t.kid(0);
  const std::size_t n = sum.kids().size();
  if (n > kMaxSubsetElements) return;
  const ArrowBag& want = t.annotation().arrows();
  std::vector<ArrowBag> splits = sub_bags(want);
  std::vector<Term> seen;
  // element 0 always goes left, so each unordered partition is visited once
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t left = 1; left < full; left += 2) {
    ArrowBag lt = type_of_elements(sum, left), rt = type_of_elements(sum, full & ~left);
    for (const ArrowBag& c : splits) {
      if (c.empty() || c.size() == want.size()) continue;
      ArrowBag d = bag::difference(want, c);
      if (!bag::is_subset(c, lt) || !bag::is_subset(d, rt)) continue;
      Term result = Term::sum({Term::proj(Type(c), elements(sum, left)), Term::proj(Type(d), elements(sum, full & ~left))});
      if (std::any_of(seen.begin(), seen.end(), [&](const Term& s) { return structurally_equal(s, result); })) continue;
      seen.push_back(result);
      out.push_back({RuleTag::DistE, result, "split " + mask_string(left, n) + " | " + to_string(Type(c))});
    }
  }
}

// A Sum whose elements can be grouped so that each group has exactly one
// block's type.
bool sum_matches(const Term& t, const std::vector<Type>& blocks) {
  if (t.kind() != Kind::Sum) return false;
  const std::size_t n = t.kids().size();
  if (n < blocks.size()) return false;
  std::vector<ArrowBag> left;
  for (const Type& b : blocks) left.push_back(b.arrows());
  std::vector<bool> used(blocks.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == n) {
      return std::all_of(left.begin(), left.end(), [](const ArrowBag& b) { return b.empty(); }) &&
             std::all_of(used.begin(), used.end(), [](bool u) { return u; });
    }
    const ArrowBag& ty = type_of(t.kid(i)).arrows();
    for (std::size_t b = 0; b < left.size(); ++b) {
      if (!bag::is_subset(ty, left[b])) continue;
      ArrowBag saved = left[b];
      bool was = used[b];
      left[b] = bag::difference(left[b], ty);
      used[b] = true;
      if (go(i + 1)) return true;
      left[b] = std::move(saved);
      used[b] = was;
    }
    return false;
  };
  return go(0);
}

// Set partitions of the arrows into at least two blocks, as sorted block lists.
std::vector<std::vector<Type>> partitions(const Type& ty, bool all) {
  const ArrowBag& arrows = ty.arrows();
  const std::size_t n = arrows.size();
  std::vector<std::vector<Type>> out;
  if (!all || n > 6) {
    std::vector<Type> finest;
    for (const Arrow& a : arrows) finest.emplace_back(a);
    out.push_back(std::move(finest));
    return out;
  }
  std::vector<std::size_t> block(n, 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      if (used < 2) return;
      std::vector<ArrowBag> bs(used);
      for (std::size_t k = 0; k < n; ++k) bs[block[k]].push_back(arrows[k]);
      std::vector<Type> types;
      for (ArrowBag& b : bs) types.emplace_back(std::move(b));
      std::sort(types.begin(), types.end());
      if (std::find(out.begin(), out.end(), types) == out.end()) out.push_back(std::move(types));
      return;
    }
    for (std::size_t b = 0; b <= used; ++b) {
      block[i] = b;
      go(i + 1, std::max(used, b + 1));
    }
  };
  go(0, 0);
  // finest first
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

void delta(const Term& t, bool all, std::vector<Rewrite>& out) {
  const Type& ty = type_of(t);
  if (ty.size() < 2) return;
  for (const std::vector<Type>& blocks : partitions(ty, all)) {
    if (sum_matches(t, blocks)) continue;
    std::vector<Term> parts;
    std::string choice;
    for (const Type& b : blocks) {
      parts.push_back(Term::proj(b, t));
      if (!choice.empty()) choice += " | ";
      choice += to_string(b);
    }
    out.push_back({RuleTag::Delta, Term::sum(std::move(parts)), blocks.size() == ty.size() ? std::string() : choice});
  }
}

void comm_mu(const Term& t, std::vector<Rewrite>& out) {
  if (t.kind() != Kind::Proj || t.kid(0).kind() != Kind::Fix) return;
  const Term& fix = t.kid(0);
  const Type& c1 = t.annotation();
  const Type& c = fix.annotation();
  if (c1 == c || !bag::is_subset(c1.arrows(), c.arrows())) return;
  Type c2(bag::difference(c.arrows(), c1.arrows()));
  const std::string& x = fix.name();
  const Term& r = fix.kid(0);
  std::set<std::string> avoid = names_of({&r});
  avoid.insert(x);
  std::string stem = x;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  std::string x1 = fresh_name(avoid, stem + "1");
  avoid.insert(x1);
  std::string x2 = fresh_name(avoid, stem + "2");
  Term x1v = Term::var(x1, c1), x2v = Term::var(x2, c2);
  Term inner = Term::fix(x2, c2, Term::proj(c2, substitute(r, x, Term::sum({x1v, x2v}))));
  Term outer = Term::fix(x1, c1, Term::proj(c1, substitute(r, x, Term::sum({x1v, inner}))));
  out.push_back({RuleTag::CommMu, outer, {}});
}

}  // namespace

RuleClass rule_class(RuleTag r) { return entry(r).cls; }
std::string_view to_string(RuleTag r) { return entry(r).name; }

std::optional<RuleTag> parse_rule_tag(std::string_view s) {
  for (const TagName& n : kNames) {
    if (n.name == s) return n.tag;
  }
  return std::nullopt;
}

std::vector<Rewrite> rewrites_at(RuleTag rule, const Term& t, const RuleOptions& opts) {
  std::vector<Rewrite> out;
  const auto& ks = t.kids();
  switch (rule) {
    case RuleTag::Beta:
    case RuleTag::PBeta:
    case RuleTag::DBeta:
      beta_family(rule, t, out);
      break;
    case RuleTag::Curry:
      if (t.kind() == Kind::App && ks[1].kind() == Kind::Sum) {
        std::vector<Term> args(ks[1].kids().begin(), ks[1].kids().end());
        if (!opts.all_choices) {
          out.push_back({rule, Term::apply(ks[0], args), {}});
          break;
        }
        std::vector<std::size_t> order(args.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<Term> seen;
        do {
          std::vector<Term> spine;
          std::string choice;
          for (std::size_t i : order) {
            spine.push_back(args[i]);
            choice += (choice.empty() ? "" : ",") + std::to_string(i);
          }
          Term r = Term::apply(ks[0], spine);
          if (std::none_of(seen.begin(), seen.end(), [&](const Term& s) { return alpha_eq(s, r); })) {
            seen.push_back(r);
            out.push_back({rule, r, "order " + choice});
          }
        } while (std::next_permutation(order.begin(), order.end()) && seen.size() < 120);
      }
      break;
    case RuleTag::DistI:
      if (t.kind() == Kind::App && ks[0].kind() == Kind::Sum) {
        std::vector<Term> apps;
        for (const Term& r : ks[0].kids()) apps.push_back(Term::app(r, ks[1]));
        out.push_back({rule, Term::sum(std::move(apps)), {}});
      }
      break;
    case RuleTag::CommEI:
      if (t.kind() == Kind::Proj && ks[0].kind() == Kind::Abs) {
        const ArrowBag& d = ks[0].annotation().arrows();
        ArrowBag inner;
        bool ok = true;
        for (const Arrow& a : t.annotation().arrows()) {
          if (!bag::is_subset(d, a.premises())) {
            ok = false;
            break;
          }
          inner.emplace_back(bag::difference(a.premises(), d), a.head());
        }
        if (ok) {
          out.push_back({rule, Term::abs(ks[0].name(), ks[0].annotation(), Term::proj(Type(inner), ks[0].kid(0))), {}});
        }
      }
      break;
    case RuleTag::CommEE:
      if (t.kind() == Kind::Proj && ks[0].kind() == Kind::App) {
        const Type& d = type_of(ks[0].kid(1));
        Type outer = arrow_type(d, t.annotation());
        out.push_back({rule, Term::app(Term::proj(outer, ks[0].kid(0)), ks[0].kid(1)), {}});
      }
      break;
    case RuleTag::Proj:
      if (t.kind() == Kind::Proj && type_of(ks[0]) == t.annotation()) out.push_back({rule, ks[0], {}});
      break;
    case RuleTag::Simp:
      simp(t, out);
      break;
    case RuleTag::DistE:
      dist_e(t, out);
      break;
    case RuleTag::Delta:
      delta(t, opts.all_choices, out);
      break;
    case RuleTag::Pred:
      if (t.kind() == Kind::Pred && ks[0].kind() == Kind::Succ) out.push_back({rule, ks[0].kid(0), {}});
      break;
    case RuleTag::IfZ0:
      if (t.kind() == Kind::IfZ && ks[0].kind() == Kind::Zero) out.push_back({rule, ks[1], {}});
      break;
    case RuleTag::IfZN:
      if (t.kind() == Kind::IfZ && ks[0].kind() == Kind::Succ) out.push_back({rule, ks[2], {}});
      break;
    case RuleTag::IfEq0:
      if (t.kind() == Kind::IfEq && ks[0].kind() == Kind::Zero) out.push_back({rule, Term::ifz(ks[1], ks[2], ks[3]), {}});
      break;
    case RuleTag::IfEqN:
      if (t.kind() == Kind::IfEq && ks[0].kind() == Kind::Succ) {
        Term rec = Term::ifeq(ks[0].kid(0), Term::pred(ks[1]), ks[2], ks[3]);
        out.push_back({rule, Term::ifz(ks[1], ks[3], rec), {}});
      }
      break;
    case RuleTag::Mu:
      if (t.kind() == Kind::Fix) out.push_back({rule, substitute(ks[0], t.name(), t), {}});
      break;
    case RuleTag::CommIfZ:
      if (t.kind() == Kind::Proj && ks[0].kind() == Kind::IfZ) {
        const Term& c = ks[0];
        const Type& p = t.annotation();
        out.push_back({rule, Term::ifz(c.kid(0), Term::proj(p, c.kid(1)), Term::proj(p, c.kid(2))), {}});
      }
      break;
    case RuleTag::CommIfEq:
      if (t.kind() == Kind::Proj && ks[0].kind() == Kind::IfEq) {
        const Term& c = ks[0];
        const Type& p = t.annotation();
        out.push_back({rule, Term::ifeq(c.kid(0), c.kid(1), Term::proj(p, c.kid(2)), Term::proj(p, c.kid(3))), {}});
      }
      break;
    case RuleTag::CommMu:
      comm_mu(t, out);
      break;
    case RuleTag::TMu:
      if (opts.enable_tmu && t.kind() == Kind::Fix && !ks[0].has_free(t.name())) out.push_back({rule, ks[0], {}});
      break;
  }
  return out;
}

Term apply_rule(RuleTag rule, const Term& t, const TypingContext& ctx, std::uint64_t seed, const RuleOptions& opts) {
  try {
    infer(ctx, t);
  } catch (const TypeError& e) {
    throw IllTyped(e.what());
  }
  std::vector<Rewrite> rs = rewrites_at(rule, t, opts);
  if (rs.empty()) throw NotApplicable(std::string(to_string(rule)) + " does not apply");
  return rs[seed % rs.size()].result;
}

}  // namespace lplus
