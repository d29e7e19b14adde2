#include "lplus/syntax.hpp"

#include <cctype>
#include <map>

#include "lplus/canon.hpp"
#include "lplus/encodings.hpp"
#include "lplus/typecheck.hpp"

namespace lplus {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}

// ---------------------------------------------------------------- printing

namespace {

std::string pretty_arrow(const Arrow& a) {
  if (a.is_atom()) return a.head();
  if (auto n = bnum_index(Type(a))) return "bnum(" + std::to_string(*n) + ")";
  const ArrowBag& ps = a.premises();
  if (ps.size() == 1 && (ps[0].is_atom() || bnum_index(Type(ps[0])))) return pretty_arrow(ps[0]) + " -> " + a.head();
  std::string out = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += pretty_arrow(ps[i]);
  }
  return out + "] -> " + a.head();
}

enum Prec { kTop = 0, kHead = 1, kArg = 2 };

bool is_atomic(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Zero:
    case Kind::Sum:
      return true;
    case Kind::Succ:
      return try_nat_value(t).has_value();
    default:
      return false;
  }
}

void print(const Term& t, int prec, std::string& out);

void arg(const Term& t, std::string& out) {
  out += ' ';
  print(t, kArg, out);
}

void print(const Term& t, int prec, std::string& out) {
  if (auto v = try_nat_value(t)) {
    out += std::to_string(*v);
    return;
  }
  bool binder = t.kind() == Kind::Abs || t.kind() == Kind::Fix;
  bool paren = (binder && prec > kTop) || (!binder && !is_atomic(t) && prec >= kArg);
  if (paren) out += '(';
  switch (t.kind()) {
    case Kind::Var:
      out += t.name();
      break;
    case Kind::Abs:
    case Kind::Fix:
      out += t.kind() == Kind::Abs ? "\\" : "fix ";
      out += t.name() + ":" + pretty(t.annotation()) + ". ";
      print(t.kid(0), kTop, out);
      break;
    case Kind::App:
      print(t.kid(0), kHead, out);
      arg(t.kid(1), out);
      break;
    case Kind::Sum:
      out += '{';
      for (std::size_t i = 0; i < t.kids().size(); ++i) {
        if (i) out += ", ";
        print(t.kid(i), kTop, out);
      }
      out += '}';
      break;
    case Kind::Proj:
      out += "proj[" + pretty(t.annotation()) + "]";
      arg(t.kid(0), out);
      break;
    case Kind::Zero:
      out += '0';
      break;
    case Kind::Succ:
    case Kind::Pred:
      out += t.kind() == Kind::Succ ? "succ" : "pred";
      arg(t.kid(0), out);
      break;
    case Kind::IfZ:
    case Kind::IfEq:
      out += t.kind() == Kind::IfZ ? "ifz" : "ifeq";
      for (const Term& k : t.kids()) arg(k, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string pretty(const Type& t) {
  if (t.is_single()) return pretty_arrow(t.arrows()[0]);
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += pretty_arrow(t.arrows()[i]);
  }
  return out + "]";
}

std::string pretty(const Term& t) {
  std::string out;
  print(t, kTop, out);
  return out;
}

std::string format_trace(const ReductionTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const Step& s = trace.steps[i];
    out += std::to_string(i + 1) + " " + std::string(to_string(s.rule)) + " " + path_to_string(s.path) + " " +
           pretty(s.term) + "\n";
  }
  return out;
}

// ----------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, k = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (src.substr(i, 2) == "->" || src.substr(i, 2) == "/\\") {
      out.push_back({Tok::Sym, std::string(src.substr(i, 2)), l, k});
      advance(2);
      continue;
    }
    static const std::string_view singles = "\\:.(){}[],@;=";
    if (singles.find(c) == std::string_view::npos) throw ParseError(std::string("unexpected character '") + c + "'", l, k);
    out.push_back({Tok::Sym, std::string(1, c), l, k});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"succ", "pred", "ifz", "ifeq", "fix", "proj", "fst", "snd", "let", "main", "bnum"};
  return k;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  bool at_end() const { return peek().kind == Tok::End; }

  SourceType type() {
    SourceType l = conj();
    if (accept("->")) return SourceType::arrow(l, type());
    return l;
  }

  Term term() {
    if (accept("\\")) return binder(Kind::Abs);
    if (accept_ident("fix")) return binder(Kind::Fix);
    Term head = head_form();
    while (starts_atom()) head = app(head, atom());
    return head;
  }

  Program program() {
    Program prog;
    while (!at_end()) {
      if (accept_ident("let")) {
        const Token& nt = expect_ident();
        if (defs_.count(nt.text)) fail("duplicate declaration '" + nt.text + "'", nt);
        expect("=");
        Term t = checked(term(), nt);
        expect(";");
        defs_.emplace(nt.text, t);
        prog.declarations.push_back({nt.text, t});
      } else if (peek().kind == Tok::Ident && peek().text == "main") {
        const Token& mt = toks_[pos_++];
        accept("=");
        Term t = checked(term(), mt);
        expect(";");
        prog.main = t;
      } else {
        fail("expected 'let' or 'main'", peek());
      }
    }
    return prog;
  }

  void bind_free(const TypingContext& ctx) {
    for (const auto& [n, ty] : ctx.bindings()) scope_.push_back({n, ty});
  }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'", peek());
  }

private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.col); }

  bool accept(std::string_view sym) {
    if (peek().kind == Tok::Sym && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_ident(std::string_view word) {
    if (peek().kind == Tok::Ident && peek().text == word) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view sym) {
    if (!accept(sym)) fail("expected '" + std::string(sym) + "'", peek());
  }

  const Token& expect_ident() {
    if (peek().kind != Tok::Ident || keywords().count(peek().text)) fail("expected an identifier", peek());
    return toks_[pos_++];
  }

  int expect_number() {
    if (peek().kind != Tok::Number) fail("expected a number", peek());
    return std::stoi(toks_[pos_++].text);
  }

  Type ctype() { return canonicalize_type(type()); }

  SourceType conj() {
    SourceType l = type_atom();
    while (accept("/\\")) l = SourceType::conj(l, type_atom());
    return l;
  }

  SourceType type_atom() {
    const Token& t = peek();
    if (accept("(")) {
      SourceType inner = type();
      expect(")");
      return inner;
    }
    if (accept("[")) {
      if (accept("]")) throw TypeError(TypeErrorKind::EmptyType, {}, "the empty multiset is not a type");
      SourceType acc = type();
      while (accept(",")) acc = SourceType::conj(acc, type());
      expect("]");
      return acc;
    }
    if (accept_ident("bnum")) {
      expect("(");
      int n = expect_number();
      expect(")");
      if (n < 1) fail("encoding indices start at 1", t);
      return uncanonicalize_type(bnum(n));
    }
    if (t.kind == Tok::Ident && !keywords().count(t.text)) {
      ++pos_;
      return SourceType::atom(t.text);
    }
    fail("expected a type", t);
  }

  Term binder(Kind kind) {
    const Token& nt = expect_ident();
    expect(":");
    Type ty = ctype();
    expect(".");
    scope_.push_back({nt.text, ty});
    Term body = term();
    scope_.pop_back();
    return kind == Kind::Abs ? Term::abs(nt.text, ty, body) : Term::fix(nt.text, ty, body);
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) return !keywords().count(t.text);
    return t.kind == Tok::Sym && (t.text == "(" || t.text == "{");
  }

  Term app(const Term& f, const Term& a) {
    Term r = Term::app(f, a);
    return r;
  }

  Term head_form() {
    const Token& t = peek();
    if (accept_ident("succ")) return Term::succ(atom());
    if (accept_ident("pred")) return Term::pred(atom());
    if (accept_ident("ifz")) {
      Term a = atom(), b = atom(), c = atom();
      return Term::ifz(a, b, c);
    }
    if (accept_ident("ifeq")) {
      Term a = atom(), b = atom(), c = atom(), d = atom();
      return Term::ifeq(a, b, c, d);
    }
    for (const char* kw : {"proj", "fst", "snd"}) {
      if (accept_ident(kw)) {
        expect("[");
        Type ty = ctype();
        expect("]");
        Term body = atom();
        if (kw[0] == 'p') return Term::proj(ty, body);
        return tuple_get(kw[0] == 'f' ? 1 : 2, ty, body);
      }
    }
    if (!starts_atom()) fail("expected a term", t);
    return atom();
  }

  Term atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++pos_;
      return mk_nat(static_cast<unsigned>(std::stoul(t.text)));
    }
    if (t.kind == Tok::Ident && !keywords().count(t.text)) {
      ++pos_;
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
        if (it->name == t.text) return Term::var(it->name, it->type);
      }
      if (auto d = defs_.find(t.text); d != defs_.end()) return d->second;
      throw TypeError(TypeErrorKind::UnboundVariable, {}, "'" + t.text + "' at " + std::to_string(t.line) + ":" +
                                                              std::to_string(t.col));
    }
    if (accept("{")) {
      std::vector<Term> elems{term()};
      while (accept(",")) elems.push_back(term());
      expect("}");
      return Term::sum(std::move(elems));
    }
    if (accept("(")) {
      std::vector<Term> elems{term()};
      while (accept(",")) elems.push_back(term());
      expect(")");
      if (elems.size() == 1) return elems[0];
      TypingContext ctx;
      for (const TypedName& v : scope_) ctx = ctx.extended(v.name, v.type);
      std::vector<int> enc;
      if (accept("@")) {
        const Token& e = peek();
        if (!accept_ident("enc")) fail("expected 'enc'", e);
        expect("(");
        enc.push_back(expect_number());
        while (accept(",")) enc.push_back(expect_number());
        expect(")");
        if (enc.size() != elems.size()) fail("one encoding index per tuple element", e);
      } else {
        enc = suggest_encodings(elems, ctx);
      }
      return mk_tuple(elems, enc, ctx);
    }
    fail("expected a term", t);
  }

  Term checked(Term t, const Token& at) {
    try {
      infer({}, t);
    } catch (const TypeError& e) {
      throw TypeError(e.kind(), e.path(), "in '" + at.text + "': " + e.what());
    }
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<TypedName> scope_;
  std::map<std::string, Term> defs_;
};

}  // namespace

SourceType parse_type(std::string_view text) {
  Parser p(text);
  SourceType t = p.type();
  p.expect_end();
  return t;
}

Term parse_term(std::string_view text, const TypingContext& free) {
  Parser p(text);
  p.bind_free(free);
  Term t = p.term();
  p.expect_end();
  return t;
}

Program parse_program(std::string_view text) { return Parser(text).program(); }

}  // namespace lplus
