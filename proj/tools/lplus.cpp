// Command-line driver: check, eval, trace, canon, graph, oracle.
//
// Exit codes: 0 success, 1 type or parse error, 2 step or depth limit,
// 3 internal invariant violation.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lplus/canon.hpp"
#include "lplus/encodings.hpp"
#include "lplus/oracle.hpp"
#include "lplus/rewrite.hpp"
#include "lplus/syntax.hpp"
#include "lplus/typecheck.hpp"

using namespace lplus;

namespace {

constexpr int kOk = 0, kInputError = 1, kLimit = 2, kInvariant = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load(const std::string& path) { return parse_program(slurp(path)); }

const Term& main_of(const Program& p, const std::string& path) {
  if (!p.main) throw InputError(path + ": no main expression");
  return *p.main;
}

struct RunFlags {
  std::size_t max_steps = 100000;
  std::uint64_t seed = 0;
  bool enable_tmu = false;
  bool random = false;
};

StrategyConfig config_of(const RunFlags& f) {
  StrategyConfig cfg;
  cfg.max_steps = f.max_steps;
  cfg.seed = f.seed;
  cfg.enable_tmu = f.enable_tmu;
  if (f.random) cfg.mode = Mode::EnumerateAll;
  return cfg;
}

int cmd_check(const std::string& path) {
  Program p = load(path);
  for (const Declaration& d : p.declarations) std::cout << d.name << " : " << pretty(infer({}, d.term)) << "\n";
  if (p.main) std::cout << "main : " << pretty(infer({}, *p.main)) << "\n";
  return kOk;
}

int cmd_eval(const std::string& path, const RunFlags& f, bool show_trace) {
  Program p = load(path);
  ReductionTrace tr = normalize(main_of(p, path), {}, config_of(f));
  if (show_trace) {
    std::cout << format_trace(tr);
  } else {
    std::cout << pretty(tr.terminal) << "\n";
  }
  if (tr.status == TraceStatus::StepLimit) {
    std::cerr << "step limit of " << f.max_steps << " reached\n";
    return kLimit;
  }
  return kOk;
}

int cmd_canon(const std::string& type) {
  std::cout << to_string(canonicalize_type(parse_type(type))) << "\n";
  return kOk;
}

int cmd_graph(const std::string& path, std::size_t depth, const RunFlags& f) {
  Program p = load(path);
  RuleOptions opts{f.enable_tmu, true};
  ReductionGraph g = reduction_graph(main_of(p, path), {}, depth, opts);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    std::cout << "node " << i << " " << g.depth[i] << " " << pretty(g.nodes[i]) << "\n";
  }
  for (const GraphEdge& e : g.edges) {
    std::cout << "edge " << e.from << " " << e.to << " " << to_string(e.rule) << " " << path_to_string(e.path);
    if (!e.choice.empty()) std::cout << " " << e.choice;
    std::cout << "\n";
  }
  for (std::size_t t : g.terminals()) std::cout << "terminal " << t << "\n";
  if (g.depth_exceeded) {
    std::cerr << "exploration stopped at depth " << depth << "\n";
    return kLimit;
  }
  return kOk;
}

int cmd_oracle(const std::string& path, std::size_t depth) {
  Program p = load(path);
  std::vector<Declaration> items = p.declarations;
  if (p.main) items.push_back({"main", *p.main});
  bool violated = false, inconclusive = false;
  for (const Declaration& d : items) {
    std::optional<SourceTerm> src;
    try {
      src = uncanonicalize_term(d.term);
    } catch (const UnsupportedConstruct&) {
      std::cout << d.name << ": skipped, outside the pure fragment\n";
      continue;
    }
    oracle::SoundnessReport rep = oracle::check_soundness(*src, depth);
    std::cout << d.name << ":\n" << rep.to_string();
    violated = violated || !rep.ok();
    inconclusive = inconclusive || rep.inconclusive > 0;
  }
  if (violated) return kInvariant;
  return inconclusive ? kLimit : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lplus: a lambda calculus with isomorphic types identified"};
  app.require_subcommand(1);

  RunFlags flags;
  std::string file, type_text;
  std::size_t depth = 8;

  auto add_run_flags = [&](CLI::App* c) {
    c->add_option("--max-steps", flags.max_steps, "step limit");
    c->add_option("--seed", flags.seed, "seed for non-deterministic choices");
    c->add_flag("--enable-tmu", flags.enable_tmu, "allow the tmu split");
    c->add_flag("--random", flags.random, "pick any legal redex by seed instead of by priority");
  };

  CLI::App* check = app.add_subcommand("check", "print each declaration's canonical type");
  check->add_option("FILE", file)->required();
  CLI::App* eval = app.add_subcommand("eval", "normalize main and print the normal form");
  eval->add_option("FILE", file)->required();
  add_run_flags(eval);
  CLI::App* trace = app.add_subcommand("trace", "print the reduction trace of main");
  trace->add_option("FILE", file)->required();
  add_run_flags(trace);
  CLI::App* canon = app.add_subcommand("canon", "print the canonical form of a type");
  canon->add_option("--type", type_text)->required();
  CLI::App* graph = app.add_subcommand("graph", "print the reduction graph of main");
  graph->add_option("FILE", file)->required();
  graph->add_option("--depth", depth, "exploration depth");
  graph->add_flag("--enable-tmu", flags.enable_tmu, "allow the tmu split");
  CLI::App* orc = app.add_subcommand("oracle", "check every declaration against the original calculus");
  orc->add_option("FILE", file)->required();
  orc->add_option("--depth", depth, "joinability depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return cmd_check(file);
    if (*eval) return cmd_eval(file, flags, false);
    if (*trace) return cmd_eval(file, flags, true);
    if (*canon) return cmd_canon(type_text);
    if (*graph) return cmd_graph(file, depth, flags);
    if (*orc) return cmd_oracle(file, depth);
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kInputError;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kInputError;
  } catch (const IllTyped& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kInputError;
  } catch (const EncodingClash& e) {
    std::cerr << "encoding clash: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kOk;
}
