#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "lplus/term.hpp"

namespace lplus {

class NotANumeral : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The boxed elements of a tuple would not be told apart by projection.
class EncodingClash : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// `[iota x n]`.
Type num(int n);
/// `[iota x n] => iota` as a single arrow.
Type bnum(int n);
/// `n` when `t` is `bnum(n)`.
std::optional<int> bnum_index(const Type& t);
/// `bnum(n) => c`.
Type boxed(const Type& c, int n);
/// `[boxed(Nat,1), boxed(Nat,2)]`.
Type nat_pair();

Term mk_nat(unsigned k);
unsigned nat_value(const Term& t);
std::optional<unsigned> try_nat_value(const Term& t);

/// `\x:num(n). proj[iota] x`.
Term estr(int n);
/// `\w:bnum(n). t` with `w` not free in `t`.
Term encode(const Term& t, int n);
/// An abstraction over some `bnum(n)` whose binder is unused.
bool is_encoding_abs(const Term& t);

Term mk_tuple(const std::vector<Term>& elements, const std::vector<int>& encodings, const TypingContext& ctx = {});
/// Smallest distinct indices accepted by mk_tuple, tried in lexicographic order.
std::vector<int> suggest_encodings(const std::vector<Term>& elements, const TypingContext& ctx = {});
/// `(proj[boxed(elem_type, i)] t) estr(i)`.
Term tuple_get(int i, const Type& elem_type, const Term& t);

namespace corpus {
Term succ_fst();
Term swap();
Term div_mod_rec(int i, int j);
Term div_mod(int i, int j);
/// First component of `div_mod(3, 4)`.
Term div();
Term even_odd();
Term even();
}  // namespace corpus

}  // namespace lplus
