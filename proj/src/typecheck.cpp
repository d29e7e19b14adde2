#include "lplus/typecheck.hpp"

namespace lplus {

std::string_view to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::DuplicateBinding: return "DuplicateBinding";
    case TypeErrorKind::ApplicationMismatch: return "ApplicationMismatch";
    case TypeErrorKind::ProjectionMismatch: return "ProjectionMismatch";
    case TypeErrorKind::BranchMismatch: return "BranchMismatch";
    case TypeErrorKind::ScrutineeNotNat: return "ScrutineeNotNat";
    case TypeErrorKind::FixBodyMismatch: return "FixBodyMismatch";
    case TypeErrorKind::EmptyType: return "EmptyType";
  }
  return "?";
}

TypeError::TypeError(TypeErrorKind kind, FocusPath path, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at " + path_to_string(path) + ": " + detail),
      kind_(kind),
      path_(std::move(path)) {}

namespace {

class Checker {
public:
  Type run(const TypingContext& ctx, const Term& t) {
    switch (t.kind()) {
      case Kind::Var: {
        const Type* bound = ctx.lookup(t.name());
        if (!bound) fail(TypeErrorKind::UnboundVariable, t.name());
        if (*bound != t.annotation()) {
          fail(TypeErrorKind::DuplicateBinding,
               t.name() + " used at " + to_string(t.annotation()) + " but bound at " + to_string(*bound));
        }
        return t.annotation();
      }
      case Kind::Abs: {
        Type body = child(ctx.extended(t.name(), t.annotation()), t, 0);
        return arrow_type(t.annotation(), body);
      }
      case Kind::App: {
        Type fun = child(ctx, t, 0);
        Type arg = child(ctx, t, 1);
        ArrowBag out;
        for (const Arrow& a : fun.arrows()) {
          if (!bag::is_subset(arg.arrows(), a.premises())) {
            fail(TypeErrorKind::ApplicationMismatch, to_string(arg) + " is not contained in the premises of " + to_string(a));
          }
          out.emplace_back(bag::difference(a.premises(), arg.arrows()), a.head());
        }
        return Type(std::move(out));
      }
      case Kind::Sum: {
        ArrowBag all;
        for (std::size_t i = 0; i < t.kids().size(); ++i) all = bag::unite(all, child(ctx, t, i).arrows());
        return Type(std::move(all));
      }
      case Kind::Proj: {
        Type body = child(ctx, t, 0);
        if (!bag::is_subset(t.annotation().arrows(), body.arrows())) {
          fail(TypeErrorKind::ProjectionMismatch, to_string(t.annotation()) + " is not contained in " + to_string(body));
        }
        return t.annotation();
      }
      case Kind::Zero:
        return Type::nat();
      case Kind::Succ:
      case Kind::Pred:
        nat_child(ctx, t, 0);
        return Type::nat();
      case Kind::IfZ: {
        nat_child(ctx, t, 0);
        Type a = child(ctx, t, 1);
        Type b = child(ctx, t, 2);
        if (a != b) fail(TypeErrorKind::BranchMismatch, to_string(a) + " vs " + to_string(b));
        return a;
      }
      case Kind::IfEq: {
        nat_child(ctx, t, 0);
        nat_child(ctx, t, 1);
        Type a = child(ctx, t, 2);
        Type b = child(ctx, t, 3);
        if (a != b) fail(TypeErrorKind::BranchMismatch, to_string(a) + " vs " + to_string(b));
        return a;
      }
      case Kind::Fix: {
        Type body = child(ctx.extended(t.name(), t.annotation()), t, 0);
        if (body != t.annotation()) {
          fail(TypeErrorKind::FixBodyMismatch, to_string(body) + " vs " + to_string(t.annotation()));
        }
        return body;
      }
    }
    throw std::logic_error("unreachable");
  }

private:
  Type child(const TypingContext& ctx, const Term& t, std::size_t i) {
    path_.push_back(i);
    Type out = run(ctx, t.kid(i));
    path_.pop_back();
    return out;
  }

  void nat_child(const TypingContext& ctx, const Term& t, std::size_t i) {
    Type k = child(ctx, t, i);
    if (k != Type::nat()) {
      path_.push_back(i);
      fail(TypeErrorKind::ScrutineeNotNat, to_string(k));
    }
  }

  [[noreturn]] void fail(TypeErrorKind kind, const std::string& detail) { throw TypeError(kind, path_, detail); }

  FocusPath path_;
};

}  // namespace

Type infer(const TypingContext& ctx, const Term& t) { return Checker().run(ctx, t); }

std::optional<Type> try_infer(const TypingContext& ctx, const Term& t) {
  try {
    return infer(ctx, t);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

bool check_preserves(const TypingContext& ctx, const Term& before, const Term& after) {
  auto a = try_infer(ctx, before);
  auto b = try_infer(ctx, after);
  return a && b && *a == *b;
}

}  // namespace lplus
