#include "il/calculus.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "textio.hpp"

namespace il {

std::string_view schema_name(Schema s) {
  switch (s) {
    case Schema::L2: return "L2";
    case Schema::L3: return "L3";
    case Schema::L4: return "L4";
    case Schema::J1: return "J1";
    case Schema::J2: return "J2";
    case Schema::J3: return "J3";
    case Schema::J4: return "J4";
    case Schema::J5: return "J5";
    case Schema::M: return "M";
    case Schema::W: return "W";
    case Schema::M0: return "M0";
    case Schema::Wstar: return "Wstar";
    case Schema::P: return "P";
    case Schema::P0: return "P0";
    case Schema::M1: return "M1";
  }
  return "?";
}

std::optional<Schema> schema_from_name(std::string_view name) {
  for (Schema s : kAllSchemas)
    if (schema_name(s) == name) return s;
  if (name == "W*") return Schema::Wstar;
  return std::nullopt;
}

bool is_core_schema(Schema s) {
  switch (s) {
    case Schema::L2:
    case Schema::L3:
    case Schema::L4:
    case Schema::J1:
    case Schema::J2:
    case Schema::J3:
    case Schema::J4:
    case Schema::J5:
      return true;
    default:
      return false;
  }
}

const Formula& schema_template(Schema s) {
  static const std::map<Schema, Formula> templates = [] {
    std::map<Schema, Formula> t;
    t[Schema::L2] = parse("[](A -> B) -> ([]A -> []B)");
    t[Schema::L3] = parse("[]A -> [][]A");
    t[Schema::L4] = parse("[]([]A -> A) -> []A");
    t[Schema::J1] = parse("[](A -> B) -> (A |> B)");
    t[Schema::J2] = parse("(A |> B) & (B |> C) -> (A |> C)");
    t[Schema::J3] = parse("(A |> C) & (B |> C) -> (A | B) |> C");
    t[Schema::J4] = parse("(A |> B) -> (<>A -> <>B)");
    t[Schema::J5] = parse("<>A |> A");
    t[Schema::M] = parse("A |> B -> (A & []C) |> (B & []C)");
    t[Schema::W] = parse("A |> B -> A |> (B & []~A)");
    t[Schema::M0] = parse("A |> B -> (<>A & []C) |> (B & []C)");
    t[Schema::Wstar] = parse("A |> B -> (B & []C) |> (B & []C & []~A)");
    t[Schema::P] = parse("A |> B -> [](A |> B)");
    t[Schema::P0] = parse("A |> <>B -> [](A |> B)");
    t[Schema::M1] = parse("A |> B -> (<>A & [][]C) |> (B & []C)");
    return t;
  }();
  return templates.at(s);
}

// ---------------------------------------------------------------------------
// Tautology checking

namespace {

Formula expand_dia(const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::Bot:
    case Kind::Top:
      return f;
    case Kind::Not: return neg(expand_dia(f.lhs()));
    case Kind::Box: return box(expand_dia(f.lhs()));
    case Kind::Dia: return neg(box(neg(expand_dia(f.lhs()))));
    case Kind::And: return conj(expand_dia(f.lhs()), expand_dia(f.rhs()));
    case Kind::Or: return disj(expand_dia(f.lhs()), expand_dia(f.rhs()));
    case Kind::Imp: return imp(expand_dia(f.lhs()), expand_dia(f.rhs()));
    case Kind::Iff: return iff(expand_dia(f.lhs()), expand_dia(f.rhs()));
    case Kind::Rhd: return rhd(expand_dia(f.lhs()), expand_dia(f.rhs()));
  }
  return f;  // unreachable
}

struct Abstraction {
  std::map<Formula, int> modal_ids;  // maximal [] / |> subformulas
  std::map<std::string, int> atom_ids;

  int id_of_modal(const Formula& f) {
    auto [it, inserted] = modal_ids.try_emplace(f, next);
    if (inserted) ++next;
    return it->second;
  }
  int id_of_atom(const std::string& name) {
    auto [it, inserted] = atom_ids.try_emplace(name, next);
    if (inserted) ++next;
    return it->second;
  }
  int next = 0;
};

bool eval_abstracted(const Formula& f, Abstraction& abs, std::uint32_t assignment) {
  switch (f.kind()) {
    case Kind::Atom:
      return (assignment >> abs.id_of_atom(f.atom_name())) & 1;
    case Kind::Bot:
      return false;
    case Kind::Top:
      return true;
    case Kind::Not:
      return !eval_abstracted(f.lhs(), abs, assignment);
    case Kind::And:
      return eval_abstracted(f.lhs(), abs, assignment) && eval_abstracted(f.rhs(), abs, assignment);
    case Kind::Or:
      return eval_abstracted(f.lhs(), abs, assignment) || eval_abstracted(f.rhs(), abs, assignment);
    case Kind::Imp:
      return !eval_abstracted(f.lhs(), abs, assignment) || eval_abstracted(f.rhs(), abs, assignment);
    case Kind::Iff:
      return eval_abstracted(f.lhs(), abs, assignment) == eval_abstracted(f.rhs(), abs, assignment);
    case Kind::Box:
    case Kind::Rhd:
    case Kind::Dia:
      return (assignment >> abs.id_of_modal(f)) & 1;
  }
  return false;  // unreachable
}

// Counts the distinct abstraction atoms without evaluating.
void collect_vars(const Formula& f, Abstraction& abs) {
  switch (f.kind()) {
    case Kind::Atom:
      abs.id_of_atom(f.atom_name());
      return;
    case Kind::Bot:
    case Kind::Top:
      return;
    case Kind::Box:
    case Kind::Rhd:
    case Kind::Dia:
      abs.id_of_modal(f);
      return;
    case Kind::Not:
      collect_vars(f.lhs(), abs);
      return;
    default:
      collect_vars(f.lhs(), abs);
      collect_vars(f.rhs(), abs);
      return;
  }
}

}  // namespace

bool check_tautology(const Formula& f) {
  Formula g = expand_dia(f);
  Abstraction abs;
  collect_vars(g, abs);
  int k = abs.next;
  if (k > 16)
    throw ResourceError("tautology check needs " + std::to_string(k) +
                        " abstraction atoms; at most 16 are supported");
  std::uint32_t total = std::uint32_t{1} << k;
  for (std::uint32_t a = 0; a < total; ++a)
    if (!eval_abstracted(g, abs, a)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Proof checking

ProofVerdict check_proof(const Proof& p) {
  auto reject = [](int line, std::string reason) {
    return ProofVerdict{false, {}, line, std::move(reason)};
  };

  if (p.lines.empty()) return reject(0, "empty proof");

  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const ProofLine& line = p.lines[i];
    int expected = static_cast<int>(i) + 1;
    if (line.index != expected)
      return reject(line.index, "line indices must run 1.." + std::to_string(p.lines.size()) +
                                    " in order");
    if (!line.stated)
      return reject(line.index, "missing stated formula");

    auto earlier = [&](int ref) -> const Formula* {
      if (ref < 1 || ref >= line.index) return nullptr;
      return &p.lines[static_cast<std::size_t>(ref - 1)].stated;
    };

    switch (line.just) {
      case ProofLine::Just::Taut:
        if (!check_tautology(line.stated))
          return reject(line.index, "not a propositional tautology");
        break;
      case ProofLine::Just::Ax: {
        if (!is_core_schema(line.schema) && !p.logic.contains(line.schema))
          return reject(line.index, "schema " + std::string(schema_name(line.schema)) +
                                        " is not enabled by the proof header");
        Formula instance = substitute(schema_template(line.schema), line.subst);
        if (instance != line.stated)
          return reject(line.index, "stated formula is not that instance of " +
                                        std::string(schema_name(line.schema)) + "; expected " +
                                        render(instance));
        break;
      }
      case ProofLine::Just::Mp: {
        const Formula* maj = earlier(line.ref1);
        const Formula* min = earlier(line.ref2);
        if (!maj || !min)
          return reject(line.index, "mp must reference strictly earlier lines");
        if (maj->kind() != Kind::Imp)
          return reject(line.index, "line " + std::to_string(line.ref1) + " is not an implication");
        if (maj->lhs() != *min)
          return reject(line.index, "line " + std::to_string(line.ref2) +
                                        " does not match the antecedent of line " +
                                        std::to_string(line.ref1));
        if (maj->rhs() != line.stated)
          return reject(line.index, "stated formula does not match the consequent of line " +
                                        std::to_string(line.ref1));
        break;
      }
      case ProofLine::Just::Nec: {
        const Formula* prem = earlier(line.ref1);
        if (!prem) return reject(line.index, "nec must reference a strictly earlier line");
        if (line.stated != box(*prem))
          return reject(line.index, "stated formula is not []'d line " + std::to_string(line.ref1));
        break;
      }
    }
  }

  const Formula& conclusion = p.lines.back().stated;
  if (p.qed && *p.qed != conclusion)
    return reject(p.lines.back().index, "qed formula does not match the last line");
  return ProofVerdict{true, conclusion, 0, {}};
}

// ---------------------------------------------------------------------------
// Proof file format

namespace {

[[noreturn]] void fail_at(int line_number, const std::string& what) {
  throw UsageError("line " + std::to_string(line_number) + ": " + what);
}

std::optional<int> parse_int(const std::string& s) {
  if (s.empty() || s.size() > 8) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

Formula parse_formula_at(int line_number, const std::string& text) {
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    fail_at(line_number, std::string("in formula: ") + e.what());
  }
}

// Splits an ax body "NAME L=(...) L=(...)" into schema and substitution.
void parse_ax_body(int line_number, const std::string& body, ProofLine& out) {
  std::istringstream ss(body);
  std::string name;
  if (!(ss >> name)) fail_at(line_number, "ax needs a schema name");
  auto schema = schema_from_name(name);
  if (!schema) fail_at(line_number, "unknown schema '" + name + "'");
  out.schema = *schema;

  std::string entry;
  while (ss >> entry) {
    auto eq = entry.find('=');
    if (eq == std::string::npos || eq + 1 >= entry.size() || entry[eq + 1] != '(')
      fail_at(line_number, "malformed substitution entry '" + entry + "'; expected L=(formula)");
    std::string letter = entry.substr(0, eq);
    if (!is_valid_atom_name(letter)) fail_at(line_number, "bad schema letter '" + letter + "'");
    // The formula may contain spaces; pull from the stream until parens balance.
    std::string text = entry.substr(eq + 1);
    auto balance = [](const std::string& s) {
      int d = 0;
      for (char c : s) {
        if (c == '(') ++d;
        if (c == ')') --d;
      }
      return d;
    };
    while (balance(text) > 0) {
      std::string more;
      if (!(ss >> more)) fail_at(line_number, "unbalanced parentheses in substitution entry");
      text += ' ';
      text += more;
    }
    if (balance(text) != 0 || text.front() != '(' || text.back() != ')')
      fail_at(line_number, "malformed substitution entry for '" + letter + "'");
    Formula image = parse_formula_at(line_number, text.substr(1, text.size() - 2));
    if (out.subst.contains(letter)) fail_at(line_number, "duplicate letter '" + letter + "'");
    out.subst[letter] = std::move(image);
  }
}

}  // namespace

Proof parse_proof(std::istream& in) {
  Proof proof;
  std::string raw;
  int line_number = 0;
  bool saw_header = false;
  bool saw_qed = false;

  while (std::getline(in, raw)) {
    ++line_number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream probe(raw);
    std::string first;
    if (!(probe >> first)) continue;

    if (!saw_header) {
      if (first != "proof") fail_at(line_number, "expected 'proof il [+SCHEMA ...]' header");
      std::string lang;
      if (!(probe >> lang) || lang != "il") fail_at(line_number, "expected 'proof il'");
      std::string ext;
      while (probe >> ext) {
        if (ext.size() < 2 || ext[0] != '+') fail_at(line_number, "expected '+SCHEMA', got '" + ext + "'");
        auto schema = schema_from_name(ext.substr(1));
        if (!schema || is_core_schema(*schema))
          fail_at(line_number, "unknown extension schema '" + ext.substr(1) + "'");
        proof.logic.insert(*schema);
      }
      saw_header = true;
      continue;
    }

    if (saw_qed) fail_at(line_number, "content after 'qed'");

    if (first == "qed") {
      std::string rest;
      std::getline(probe, rest);
      proof.qed = parse_formula_at(line_number, rest);
      saw_qed = true;
      continue;
    }

    ProofLine line;
    if (auto idx = parse_int(first))
      line.index = *idx;
    else
      fail_at(line_number, "expected a line index or 'qed', got '" + first + "'");

    std::string rest;
    std::getline(probe, rest);
    auto colon = rest.find(':');
    if (colon == std::string::npos) fail_at(line_number, "missing ':' before the stated formula");
    std::string justification = rest.substr(0, colon);
    line.stated = parse_formula_at(line_number, rest.substr(colon + 1));

    std::istringstream js(justification);
    std::string kind;
    if (!(js >> kind)) fail_at(line_number, "missing justification");
    if (kind == "taut") {
      line.just = ProofLine::Just::Taut;
      std::string extra;
      if (js >> extra) fail_at(line_number, "unexpected '" + extra + "' after 'taut'");
    } else if (kind == "ax") {
      line.just = ProofLine::Just::Ax;
      std::string body;
      std::getline(js, body);
      parse_ax_body(line_number, body, line);
    } else if (kind == "mp") {
      line.just = ProofLine::Just::Mp;
      if (!(js >> line.ref1 >> line.ref2)) fail_at(line_number, "mp needs two line references");
      std::string extra;
      if (js >> extra) fail_at(line_number, "unexpected '" + extra + "' after mp references");
    } else if (kind == "nec") {
      line.just = ProofLine::Just::Nec;
      if (!(js >> line.ref1)) fail_at(line_number, "nec needs a line reference");
      std::string extra;
      if (js >> extra) fail_at(line_number, "unexpected '" + extra + "' after nec reference");
    } else {
      fail_at(line_number, "unknown justification '" + kind + "'");
    }
    proof.lines.push_back(std::move(line));
  }

  if (!saw_header) throw UsageError("missing 'proof il' header");
  return proof;
}

Proof load_proof(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return parse_proof(in);
}

}  // namespace il
