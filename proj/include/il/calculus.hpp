#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "il/formula.hpp"

namespace il {

// Axiom schemas over the letters A, B, C. L1 (necessitation) is a rule, not
// a schema.
enum class Schema {
  L2,  // [](A -> B) -> ([]A -> []B)
  L3,  // []A -> [][]A
  L4,  // []([]A -> A) -> []A
  J1,  // [](A -> B) -> (A |> B)
  J2,  // (A |> B) & (B |> C) -> (A |> C)
  J3,  // (A |> C) & (B |> C) -> (A | B) |> C
  J4,  // (A |> B) -> (<>A -> <>B)
  J5,  // <>A |> A
  M,   // A |> B -> (A & []C) |> (B & []C)
  W,   // A |> B -> A |> (B & []~A)
  M0,  // A |> B -> (<>A & []C) |> (B & []C)
  Wstar,  // A |> B -> (B & []C) |> (B & []C & []~A)
  P,   // A |> B -> [](A |> B)
  P0,  // A |> <>B -> [](A |> B)
  M1,  // A |> B -> (<>A & [][]C) |> (B & []C)
};

inline constexpr Schema kAllSchemas[] = {Schema::L2, Schema::L3, Schema::L4, Schema::J1,
                                         Schema::J2, Schema::J3, Schema::J4, Schema::J5,
                                         Schema::M,  Schema::W,  Schema::M0, Schema::Wstar,
                                         Schema::P,  Schema::P0, Schema::M1};

// The schemas beyond IL that a proof header may enable.
inline constexpr Schema kExtensionSchemas[] = {Schema::M,  Schema::W,  Schema::M0,
                                               Schema::Wstar, Schema::P, Schema::P0, Schema::M1};

std::string_view schema_name(Schema s);
std::optional<Schema> schema_from_name(std::string_view name);  // accepts "W*" for Wstar
const Formula& schema_template(Schema s);
bool is_core_schema(Schema s);  // L2..L4, J1..J5: always enabled

// Propositional tautology over the modal language: diamonds are read as the
// abbreviation ~[]~, then every maximal [] / |> subformula is abstracted to
// a fresh atom (syntactically equal subformulas share one atom), and the
// abstraction is truth-tabled. Throws ResourceError beyond 16 atoms.
bool check_tautology(const Formula& f);

struct ProofLine {
  enum class Just { Taut, Ax, Mp, Nec };
  int index = 0;
  Just just = Just::Taut;
  Schema schema = Schema::L2;  // Ax
  Substitution subst;          // Ax
  int ref1 = 0, ref2 = 0;      // Mp(ref1, ref2) with ref1 the implication; Nec(ref1)
  Formula stated;
};

struct Proof {
  std::set<Schema> logic;  // enabled extension schemas
  std::vector<ProofLine> lines;
  std::optional<Formula> qed;  // must equal the last line when present
};

struct ProofVerdict {
  bool accepted = false;
  Formula conclusion;     // when accepted
  int failing_line = 0;   // when rejected; 0 when the failure is not tied to a line
  std::string reason;     // when rejected
};

ProofVerdict check_proof(const Proof& p);

// Proof file format:
//   proof il [+M] [+W] [+M0] [+Wstar] [+P] [+P0] [+M1]
//   <idx> taut : <formula>
//   <idx> ax <NAME> <L>=(<formula>) ... : <formula>
//   <idx> mp <i> <j> : <formula>
//   <idx> nec <i> : <formula>
//   qed <formula>
// '#' starts a comment.
Proof parse_proof(std::istream& in);
Proof load_proof(const std::string& path);

}  // namespace il
