#include "lplus/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "lplus/encodings.hpp"
#include "lplus/typecheck.hpp"

namespace lplus {

namespace {

struct Guards {
  bool under_proj = false;
  bool under_lambda = false;
};

bool allowed(RuleTag r, const Guards& g) {
  switch (rule_class(r)) {
    case RuleClass::Delta: return !g.under_proj;
    case RuleClass::Mu: return !g.under_lambda;
    case RuleClass::Plain: return true;
  }
  return true;
}

Guards child_guards(const Term& t, Guards g) {
  if (t.kind() == Kind::Proj) g.under_proj = true;
  if (t.kind() == Kind::Abs && !is_encoding_abs(t)) g.under_lambda = true;
  return g;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t pick(std::uint64_t seed, const Term& t, std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::size_t>(mix64(seed ^ mix64(alpha_hash(t))) % n);
}

void validate(const TypingContext& ctx, const Term& t) {
  try {
    infer(ctx, t);
  } catch (const TypeError& e) {
    throw IllTyped(e.what());
  }
}

void collect(const Term& t, const Guards& g, FocusPath& path, const RuleOptions& opts, const Term& root,
             std::vector<Redex>& out) {
  for (RuleTag r : kAllRules) {
    if (!allowed(r, g)) continue;
    for (Rewrite& rw : rewrites_at(r, t, opts)) {
      Term full = replace_at(root, path, rw.result);
      out.push_back({r, path, std::move(rw.result), std::move(full), std::move(rw.choice)});
    }
  }
  Guards cg = child_guards(t, g);
  for (std::size_t i = 0; i < t.kids().size(); ++i) {
    path.push_back(i);
    collect(t.kid(i), cg, path, opts, root, out);
    path.pop_back();
  }
}

struct Found {
  RuleTag rule;
  FocusPath path;
  Rewrite rewrite;
};

// The body `proj[iota] x` of an encoding destructor.
bool trivial_proj(RuleTag r, const Term& t) {
  return r == RuleTag::Proj && t.kind() == Kind::Proj && t.kid(0).kind() == Kind::Var &&
         t.annotation() == Type::iota();
}

enum class Trivial : std::uint8_t { Skip, Only, Any };

// Leftmost-outermost redex among `group`.
std::optional<Found> first_in_group(const Term& t, const Guards& g, FocusPath& path, const std::vector<RuleTag>& group,
                                    const RuleOptions& opts, std::uint64_t seed, Trivial trivial) {
  for (RuleTag r : group) {
    if (!allowed(r, g)) continue;
    if (trivial != Trivial::Any && trivial_proj(r, t) != (trivial == Trivial::Only)) continue;
    std::vector<Rewrite> rs = rewrites_at(r, t, opts);
    if (!rs.empty()) {
      std::size_t k = pick(seed, t, rs.size());
      return Found{r, path, std::move(rs[k])};
    }
  }
  Guards cg = child_guards(t, g);
  for (std::size_t i = 0; i < t.kids().size(); ++i) {
    path.push_back(i);
    auto f = first_in_group(t.kid(i), cg, path, group, opts, seed, trivial);
    path.pop_back();
    if (f) return f;
  }
  return std::nullopt;
}

std::optional<Step> step_unchecked(const Term& t, const StrategyConfig& cfg) {
  RuleOptions opts{cfg.enable_tmu, false};
  if (cfg.mode == Mode::EnumerateAll) {
    opts.all_choices = true;
    std::vector<Redex> all;
    FocusPath path;
    collect(t, {}, path, opts, t, all);
    if (all.empty()) return std::nullopt;
    Redex& r = all[pick(cfg.seed, t, all.size())];
    return Step{r.rule, r.path, r.result, r.choice};
  }
  auto found = [&](Found f) {
    return Step{f.rule, f.path, replace_at(t, f.path, f.rewrite.result), std::move(f.rewrite.choice)};
  };
  const Trivial mode = cfg.defer_trivial_proj ? Trivial::Skip : Trivial::Any;
  bool deferred_done = !cfg.defer_trivial_proj;
  auto deferred = [&]() -> std::optional<Step> {
    deferred_done = true;
    FocusPath path;
    if (auto f = first_in_group(t, {}, path, {RuleTag::Proj}, opts, cfg.seed, Trivial::Only)) return found(std::move(*f));
    return std::nullopt;
  };
  for (const auto& group : cfg.priority) {
    if (!deferred_done && std::find(group.begin(), group.end(), RuleTag::Delta) != group.end()) {
      if (auto s = deferred()) return s;
    }
    FocusPath path;
    if (auto f = first_in_group(t, {}, path, group, opts, cfg.seed, mode)) return found(std::move(*f));
  }
  if (!deferred_done) return deferred();
  return std::nullopt;
}

}  // namespace

Priority default_priority() {
  using R = RuleTag;
  return {
      {R::Proj, R::Simp, R::DistE, R::DistI, R::CommEI, R::CommEE, R::CommIfZ, R::CommIfEq, R::CommMu, R::TMu},
      {R::Beta, R::PBeta},
      {R::Pred, R::IfZ0, R::IfZN, R::IfEq0, R::IfEqN},
      {R::DBeta},
      {R::Curry},
      {R::Mu},
      {R::Delta},
  };
}

std::vector<Redex> enumerate_redexes(const Term& t, const TypingContext& ctx, const RuleOptions& opts) {
  validate(ctx, t);
  std::vector<Redex> out;
  FocusPath path;
  collect(t, {}, path, opts, t, out);
  return out;
}

std::optional<Step> step(const Term& t, const TypingContext& ctx, const StrategyConfig& cfg) {
  validate(ctx, t);
  return step_unchecked(t, cfg);
}

ReductionTrace normalize(const Term& t, const TypingContext& ctx, const StrategyConfig& cfg) {
  validate(ctx, t);
  const Type ty = *t.type();
  ReductionTrace trace{t, {}, t, TraceStatus::NormalForm};
  Term cur = t;
  while (true) {
    if (trace.steps.size() >= cfg.max_steps) {
      trace.status = TraceStatus::StepLimit;
      break;
    }
    auto s = step_unchecked(cur, cfg);
    if (!s) break;
    if (!s->term.type() || *s->term.type() != ty) {
      throw InvariantViolation("rule " + std::string(to_string(s->rule)) + " at " + path_to_string(s->path) +
                               " changed the type");
    }
    cur = s->term;
    trace.steps.push_back(std::move(*s));
  }
  trace.terminal = cur;
  return trace;
}

std::optional<std::size_t> ReductionGraph::find(const Term& t) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (alpha_eq(nodes[i], t)) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> ReductionGraph::terminals() const {
  std::vector<bool> has_out(nodes.size(), false);
  for (const GraphEdge& e : edges) has_out[e.from] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (expanded[i] && !has_out[i]) out.push_back(i);
  }
  return out;
}

ReductionGraph reduction_graph(const Term& t, const TypingContext& ctx, std::size_t depth_bound,
                               const RuleOptions& opts, std::size_t node_cap) {
  validate(ctx, t);
  ReductionGraph g;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index;
  auto intern = [&](const Term& n, std::size_t depth) -> std::pair<std::size_t, bool> {
    auto& bucket = index[alpha_hash(n)];
    for (std::size_t i : bucket) {
      if (alpha_eq(g.nodes[i], n)) return {i, false};
    }
    g.nodes.push_back(n);
    g.depth.push_back(depth);
    g.expanded.push_back(false);
    bucket.push_back(g.nodes.size() - 1);
    return {g.nodes.size() - 1, true};
  };
  std::deque<std::size_t> queue{intern(t, 0).first};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    std::vector<Redex> rs;
    FocusPath path;
    collect(g.nodes[i], {}, path, opts, g.nodes[i], rs);
    if (!rs.empty() && (g.depth[i] >= depth_bound || g.nodes.size() >= node_cap)) {
      g.depth_exceeded = true;
      continue;
    }
    g.expanded[i] = true;
    for (Redex& r : rs) {
      auto [j, fresh] = intern(r.result, g.depth[i] + 1);
      g.edges.push_back({i, j, r.rule, std::move(r.path), std::move(r.choice)});
      if (fresh) queue.push_back(j);
    }
  }
  return g;
}

}  // namespace lplus
