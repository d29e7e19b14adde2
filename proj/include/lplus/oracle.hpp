#pragma once

// The original calculus on source terms: the symmetric relation, the
// labelled reduction and bounded searches over both, used as a
// differential reference for the directed implementation.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lplus/source.hpp"
#include "lplus/term.hpp"

namespace lplus::oracle {

/// Typing context of the source calculus.
using SourceContext = std::map<std::string, SourceType>;

/// An equivalence class did not close within the bound.
class BoundExceeded : public std::runtime_error {
public:
  BoundExceeded(const std::string& what, std::size_t explored) : std::runtime_error(what), explored_(explored) {}
  std::size_t explored() const { return explored_; }

private:
  std::size_t explored_;
};

/// Representative of the isomorphism class of `t`, computed by orienting
/// the four isomorphisms; independent of the canonicalizer.
SourceType iso_normal(const SourceType& t);
bool iso_equiv(const SourceType& a, const SourceType& b);

/// Type of `r` up to isomorphism, as its representative. Throws TypeError.
SourceType orig_infer(const SourceContext& ctx, const SourceTerm& r);
bool orig_typable(const SourceContext& ctx, const SourceTerm& r);

/// Key equal for terms equal up to bound names and isomorphic annotations.
/// Annotation changes by isomorphic types are thus identities.
std::string term_key(const SourceTerm& r);

enum class EqRule { Comm, Asso, DistII, DistIE, DistEI, DistEE, Curry, Split };
std::string_view to_string(EqRule r);

struct Neighbor {
  EqRule rule;
  SourceTerm term;
};

/// One-step neighbors under the symmetric relation, in both directions and
/// under every context. Throws TypeError when `r` does not typecheck.
std::vector<Neighbor> equiv_neighbors(const SourceTerm& r, const SourceContext& ctx = {});

/// Closure of equiv_neighbors, one member per term_key. Throws BoundExceeded.
std::vector<SourceTerm> equivalence_class(const SourceTerm& r, std::size_t bound, const SourceContext& ctx = {});

enum class RedRule { Beta, ProjN, Proj1, Delta };
std::string_view to_string(RedRule r);

struct Successor {
  RedRule rule;
  SourceTerm term;
};

/// One-step labelled reductions of `r` itself under every context. The
/// delta side condition scans equivalence classes bounded by `class_bound`.
std::vector<Successor> orig_reduce(const SourceTerm& r, const SourceContext& ctx = {}, std::size_t class_bound = 10000);

/// Successors of `r` modulo the symmetric relation, one representative per
/// class (the member with the smallest key).
std::vector<SourceTerm> orig_reduce_modulo(const SourceTerm& r, const SourceContext& ctx = {},
                                           std::size_t class_bound = 10000);

struct JoinResult {
  bool joined = false;
  /// Some exploration stopped at the depth bound or node cap.
  bool depth_exceeded = false;
};

/// Whether the directed reduction graphs of `a` and `b`, each explored to
/// `depth`, share a node up to alpha-equivalence.
JoinResult joinable(const Term& a, const Term& b, const TypingContext& ctx, std::size_t depth,
                    std::size_t node_cap = 4000);

struct Violation {
  std::string rule;
  SourceTerm a, b;
};

struct SoundnessReport {
  std::size_t checked = 0;
  /// Diagrams neither closed nor refuted within the bounds.
  std::size_t inconclusive = 0;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
  /// `VIOLATION <rule> <a> <b>` lines, then `OK <checked>` when clean.
  std::string to_string() const;
};

/// Checks every non-AC symmetric step and every labelled reduction of the
/// closed term `r` against the directed system on canonical forms.
SoundnessReport check_soundness(const SourceTerm& r, std::size_t depth);

enum class Verdict { Agree, Refuted, Inconclusive };
std::string_view to_string(Verdict v);

struct ProbeReport {
  std::vector<Verdict> per_probe;
  /// `untested`, `refuted` or `supported`; passing probes only support
  /// observational equivalence.
  std::string summary() const;
};

/// Applies `a` and `b` to each probe's arguments and tests joinability.
/// Throws TypeError for an ill-typed probe.
ProbeReport obs_equiv_probe(const SourceTerm& a, const SourceTerm& b, const std::vector<std::vector<SourceTerm>>& probes,
                            std::size_t depth, const SourceContext& ctx = {});

}  // namespace lplus::oracle
