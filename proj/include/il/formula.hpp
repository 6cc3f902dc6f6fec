#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "il/errors.hpp"

namespace il {

enum class Kind : unsigned char { Atom, Bot, Top, Not, And, Or, Imp, Iff, Box, Dia, Rhd };

// Immutable formula tree with structural equality. Cheap to copy (shared
// nodes). A default-constructed Formula is empty and must not be queried.
class Formula {
 public:
  Formula() = default;

  Kind kind() const;
  const std::string& atom_name() const;  // Atom nodes only
  Formula lhs() const;                   // unary: the child; binary: left
  Formula rhs() const;                   // binary only

  bool is_binary() const;
  bool is_unary() const;

  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  // Total order usable as a map key.
  friend int compare(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

  friend Formula atom(std::string name);
  friend Formula bot();
  friend Formula top();
  friend Formula neg(Formula f);
  friend Formula conj(Formula l, Formula r);
  friend Formula disj(Formula l, Formula r);
  friend Formula imp(Formula l, Formula r);
  friend Formula iff(Formula l, Formula r);
  friend Formula box(Formula f);
  friend Formula dia(Formula f);
  friend Formula rhd(Formula l, Formula r);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind k, std::string name, Formula l, Formula r);
  std::shared_ptr<const Node> node_;
};

Formula atom(std::string name);  // UsageError if the name is not a valid atom token
Formula bot();
Formula top();
Formula neg(Formula f);
Formula conj(Formula l, Formula r);
Formula disj(Formula l, Formula r);
Formula imp(Formula l, Formula r);
Formula iff(Formula l, Formula r);
Formula box(Formula f);
Formula dia(Formula f);
Formula rhd(Formula l, Formula r);

// Atom tokens are [A-Za-z][A-Za-z0-9_]*.
bool is_valid_atom_name(std::string_view name);

// Parses the concrete syntax. Unicode connectives and their ASCII aliases
// are both accepted: ~ ! ¬, & ∧, | ∨, -> →, <-> ↔, [] □, <> ◇ ⋄, |> ▷,
// #f ⊥, #t ⊤. Precedence, tightest first: unary > & > | > |> > -> > <->.
// & and | associate left, -> and <-> right; |> is non-associative, so
// chained |> without parentheses is a syntax error.
Formula parse(std::string_view text);

// ASCII rendering; parse(render(f)) == f. Operands of |> are parenthesized
// whenever they are themselves binary, matching the usual way the
// literature writes A |> (B & ...).
std::string render(const Formula& f);

using Substitution = std::map<std::string, Formula>;

// Simultaneous replacement of atoms by formulas. Atoms absent from s are
// left untouched.
Formula substitute(const Formula& f, const Substitution& s);

// Distinct atom names, sorted.
std::vector<std::string> atoms_of(const Formula& f);

}  // namespace il
