#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lplus/term.hpp"

namespace lplus {

enum class RuleTag : std::uint8_t {
  Beta,
  PBeta,
  DBeta,
  Curry,
  DistI,
  CommEI,
  CommEE,
  Proj,
  Simp,
  DistE,
  Delta,
  Pred,
  IfZ0,
  IfZN,
  IfEq0,
  IfEqN,
  Mu,
  CommIfZ,
  CommIfEq,
  CommMu,
  TMu,
};

inline constexpr RuleTag kAllRules[] = {
    RuleTag::Beta,  RuleTag::PBeta, RuleTag::DBeta,   RuleTag::Curry,    RuleTag::DistI,  RuleTag::CommEI, RuleTag::CommEE,
    RuleTag::Proj,  RuleTag::Simp,  RuleTag::DistE,   RuleTag::Delta,    RuleTag::Pred,   RuleTag::IfZ0,   RuleTag::IfZN,
    RuleTag::IfEq0, RuleTag::IfEqN, RuleTag::Mu,      RuleTag::CommIfZ,  RuleTag::CommIfEq, RuleTag::CommMu, RuleTag::TMu,
};

/// Labels of the three reduction relations: plain, delta and mu steps.
enum class RuleClass : std::uint8_t { Plain, Delta, Mu };

RuleClass rule_class(RuleTag r);
std::string_view to_string(RuleTag r);
std::optional<RuleTag> parse_rule_tag(std::string_view s);

class NotApplicable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IllTyped : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A step changed the type of the term.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct RuleOptions {
  bool enable_tmu = false;
  /// Emit every coarse split for delta and every argument order for curry,
  /// not only the finest split and the stored order.
  bool all_choices = false;
};

/// One way of firing a rule at the root of a term.
struct Rewrite {
  RuleTag rule;
  Term result;
  /// Human-readable description of a non-deterministic selection; empty otherwise.
  std::string choice;
};

/// Every result of `rule` at the root of `focus`, one per choice. Contextual
/// restrictions are not checked here.
std::vector<Rewrite> rewrites_at(RuleTag rule, const Term& focus, const RuleOptions& opts = {});

/// Fires `rule` at the root of `t`; `seed` selects among alternatives.
/// Throws NotApplicable or IllTyped.
Term apply_rule(RuleTag rule, const Term& t, const TypingContext& ctx, std::uint64_t seed = 0,
                const RuleOptions& opts = {true, false});

struct Redex {
  RuleTag rule;
  FocusPath path;
  /// New subterm at `path`.
  Term replacement;
  /// Whole term after the step.
  Term result;
  std::string choice;
};

/// All legal redexes of `t`: delta never under a projection, mu never under
/// an abstraction other than an encoding box.
std::vector<Redex> enumerate_redexes(const Term& t, const TypingContext& ctx,
                                     const RuleOptions& opts = {false, true});

enum class Mode : std::uint8_t { Deterministic, EnumerateAll };

/// Rule groups from highest to lowest priority.
using Priority = std::vector<std::vector<RuleTag>>;
Priority default_priority();

struct StrategyConfig {
  std::size_t max_steps = 100000;
  std::uint64_t seed = 0;
  bool enable_tmu = false;
  /// EnumerateAll ignores priorities and picks any legal redex by seed.
  Mode mode = Mode::Deterministic;
  Priority priority = default_priority();
  /// `proj[iota] x` with x of type iota fires only once nothing but delta
  /// applies, so `estr 1` stays intact until the end.
  bool defer_trivial_proj = true;
};

struct Step {
  RuleTag rule;
  FocusPath path;
  Term term;
  std::string choice;
};

/// Highest-priority group first, leftmost-outermost within a group.
/// Returns nullopt on a normal form.
std::optional<Step> step(const Term& t, const TypingContext& ctx, const StrategyConfig& cfg = {});

enum class TraceStatus : std::uint8_t { NormalForm, StepLimit };

struct ReductionTrace {
  Term initial;
  std::vector<Step> steps;
  Term terminal;
  TraceStatus status;
};

/// Throws IllTyped if `t` does not typecheck, InvariantViolation if a step
/// changes the type.
ReductionTrace normalize(const Term& t, const TypingContext& ctx, const StrategyConfig& cfg = {});

struct GraphEdge {
  std::size_t from, to;
  RuleTag rule;
  FocusPath path;
  std::string choice;
};

struct ReductionGraph {
  std::vector<Term> nodes;
  std::vector<std::size_t> depth;
  /// Whether the node's successors were computed.
  std::vector<bool> expanded;
  std::vector<GraphEdge> edges;
  /// Some node was left unexpanded by the depth bound or the node cap.
  bool depth_exceeded = false;

  std::optional<std::size_t> find(const Term& t) const;
  /// Expanded nodes without successors.
  std::vector<std::size_t> terminals() const;
};

/// Breadth-first exploration of every redex, nodes deduplicated modulo
/// alpha-equivalence.
ReductionGraph reduction_graph(const Term& t, const TypingContext& ctx, std::size_t depth_bound,
                               const RuleOptions& opts = {false, true}, std::size_t node_cap = 20000);

}  // namespace lplus
