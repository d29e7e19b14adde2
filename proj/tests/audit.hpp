#pragma once

// Scans recorded traces and graphs for type changes and guard breaches.

#include <cstddef>
#include <string>
#include <vector>

#include "lplus/encodings.hpp"
#include "lplus/rewrite.hpp"
#include "lplus/typecheck.hpp"

namespace audit {

using lplus::FocusPath;
using lplus::Kind;
using lplus::Term;

// Whether some proper ancestor of the focus satisfies `pred`.
template <class Pred>
bool ancestor_matches(const Term& root, const FocusPath& path, Pred pred) {
  const Term* cur = &root;
  for (std::size_t i : path) {
    if (pred(*cur)) return true;
    cur = &cur->kid(i);
  }
  return false;
}

inline bool under_proj(const Term& root, const FocusPath& path) {
  return ancestor_matches(root, path, [](const Term& t) { return t.kind() == Kind::Proj; });
}

inline bool under_plain_abs(const Term& root, const FocusPath& path) {
  return ancestor_matches(root, path,
                          [](const Term& t) { return t.kind() == Kind::Abs && !lplus::is_encoding_abs(t); });
}

struct Audit {
  std::size_t steps = 0;
  std::size_t type_changes = 0;
  std::size_t delta_under_proj = 0;
  std::size_t mu_under_abs = 0;
  std::vector<std::string> notes;

  void step(const Term& before, lplus::RuleTag rule, const FocusPath& path, const Term& after,
            const lplus::TypingContext& ctx, const lplus::Type& expected) {
    ++steps;
    auto ty = lplus::try_infer(ctx, after);
    if (!ty || *ty != expected) {
      ++type_changes;
      notes.push_back(std::string("type changed by ") + std::string(lplus::to_string(rule)) + " at " +
                      lplus::path_to_string(path));
    }
    switch (lplus::rule_class(rule)) {
      case lplus::RuleClass::Delta:
        if (under_proj(before, path)) ++delta_under_proj;
        break;
      case lplus::RuleClass::Mu:
        if (under_plain_abs(before, path)) ++mu_under_abs;
        break;
      case lplus::RuleClass::Plain: break;
    }
  }

  void trace(const lplus::ReductionTrace& tr, const lplus::TypingContext& ctx = {}) {
    const lplus::Type expected = lplus::infer(ctx, tr.initial);
    Term prev = tr.initial;
    for (const auto& s : tr.steps) {
      step(prev, s.rule, s.path, s.term, ctx, expected);
      prev = s.term;
    }
  }

  void graph(const lplus::ReductionGraph& g, const lplus::TypingContext& ctx = {}) {
    if (g.nodes.empty()) return;
    const lplus::Type expected = lplus::infer(ctx, g.nodes.front());
    for (const auto& e : g.edges) step(g.nodes[e.from], e.rule, e.path, g.nodes[e.to], ctx, expected);
  }

  bool clean() const { return type_changes == 0 && delta_under_proj == 0 && mu_under_abs == 0; }
};

}  // namespace audit
