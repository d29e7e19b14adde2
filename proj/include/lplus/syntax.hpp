#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lplus/rewrite.hpp"
#include "lplus/source.hpp"
#include "lplus/term.hpp"

namespace lplus {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_, column_;
};

/// Surface form of a canonical type; `bnum(n)` abbreviates `[iota x n] -> iota`.
std::string pretty(const Type& t);
/// Parseable rendering; numerals print as digits, sums in stored order.
std::string pretty(const Term& t);

/// One line per step: `<index> <rule> <path> <term>`, indices from 1.
std::string format_trace(const ReductionTrace& trace);

struct Declaration {
  std::string name;
  Term term;
};

struct Program {
  std::vector<Declaration> declarations;
  std::optional<Term> main;
};

SourceType parse_type(std::string_view text);
/// `free` types the free variables the text may mention.
Term parse_term(std::string_view text, const TypingContext& free = {});
/// `let NAME = TERM;` declarations and an optional `main TERM;`. Later
/// declarations and main may refer to earlier names.
Program parse_program(std::string_view text);

}  // namespace lplus
