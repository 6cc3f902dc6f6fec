#include "il/formula.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace il {

struct Formula::Node {
  Kind kind;
  std::string name;  // Atom only
  Formula lhs, rhs;
};

Formula Formula::make(Kind k, std::string name, Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(Node{k, std::move(name), std::move(l), std::move(r)}));
}

Kind Formula::kind() const {
  assert(node_);
  return node_->kind;
}

const std::string& Formula::atom_name() const {
  assert(node_ && node_->kind == Kind::Atom);
  return node_->name;
}

Formula Formula::lhs() const {
  assert(node_);
  return node_->lhs;
}

Formula Formula::rhs() const {
  assert(node_);
  return node_->rhs;
}

bool Formula::is_binary() const {
  switch (kind()) {
    case Kind::And:
    case Kind::Or:
    case Kind::Imp:
    case Kind::Iff:
    case Kind::Rhd:
      return true;
    default:
      return false;
  }
}

bool Formula::is_unary() const {
  switch (kind()) {
    case Kind::Not:
    case Kind::Box:
    case Kind::Dia:
      return true;
    default:
      return false;
  }
}

bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (!a.node_) return -1;
  if (!b.node_) return 1;
  if (a.node_->kind != b.node_->kind)
    return a.node_->kind < b.node_->kind ? -1 : 1;
  switch (a.node_->kind) {
    case Kind::Atom:
      return a.node_->name.compare(b.node_->name) < 0   ? -1
             : a.node_->name.compare(b.node_->name) > 0 ? 1
                                                        : 0;
    case Kind::Bot:
    case Kind::Top:
      return 0;
    case Kind::Not:
    case Kind::Box:
    case Kind::Dia:
      return compare(a.node_->lhs, b.node_->lhs);
    default: {
      int c = compare(a.node_->lhs, b.node_->lhs);
      return c != 0 ? c : compare(a.node_->rhs, b.node_->rhs);
    }
  }
}

bool is_valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9') || c == '_'; };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(), alnum);
}

Formula atom(std::string name) {
  if (!is_valid_atom_name(name))
    throw UsageError("invalid atom name: '" + name + "'");
  return Formula::make(Kind::Atom, std::move(name), {}, {});
}

Formula bot() { return Formula::make(Kind::Bot, {}, {}, {}); }
Formula top() { return Formula::make(Kind::Top, {}, {}, {}); }
Formula neg(Formula f) { return Formula::make(Kind::Not, {}, std::move(f), {}); }
Formula conj(Formula l, Formula r) { return Formula::make(Kind::And, {}, std::move(l), std::move(r)); }
Formula disj(Formula l, Formula r) { return Formula::make(Kind::Or, {}, std::move(l), std::move(r)); }
Formula imp(Formula l, Formula r) { return Formula::make(Kind::Imp, {}, std::move(l), std::move(r)); }
Formula iff(Formula l, Formula r) { return Formula::make(Kind::Iff, {}, std::move(l), std::move(r)); }
Formula box(Formula f) { return Formula::make(Kind::Box, {}, std::move(f), {}); }
Formula dia(Formula f) { return Formula::make(Kind::Dia, {}, std::move(f), {}); }
Formula rhd(Formula l, Formula r) { return Formula::make(Kind::Rhd, {}, std::move(l), std::move(r)); }

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Atom,
  Bot,
  Top,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Box,
  Dia,
  Rhd,
  LParen,
  RParen,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Atom: return "atom";
    case Tok::Bot: return "'#f'";
    case Tok::Top: return "'#t'";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Box: return "'[]'";
    case Tok::Dia: return "'<>'";
    case Tok::Rhd: return "'|>'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;  // Atom only
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "syntax error at " << line_ << ":" << col_ << ": " << what;
    throw SyntaxError(os.str(), line_, col_, "");
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void consume(std::size_t bytes, int columns = 1) {
    pos_ += bytes;
    col_ += columns;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        consume(1);
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space();
    int line = line_, col = col_;
    auto emit = [&](Tok k, std::string text = {}) {
      current_ = Token{k, std::move(text), line, col};
    };
    if (pos_ >= text_.size()) {
      emit(Tok::End);
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': consume(1); emit(Tok::LParen); return;
      case ')': consume(1); emit(Tok::RParen); return;
      case '~':
      case '!': consume(1); emit(Tok::Not); return;
      case '&': consume(1); emit(Tok::And); return;
      case '|':
        if (starts_with("|>")) { consume(2, 2); emit(Tok::Rhd); return; }
        consume(1);
        emit(Tok::Or);
        return;
      case '-':
        if (starts_with("->")) { consume(2, 2); emit(Tok::Imp); return; }
        fail("unexpected '-'; expected '->'");
      case '<':
        if (starts_with("<->")) { consume(3, 3); emit(Tok::Iff); return; }
        if (starts_with("<>")) { consume(2, 2); emit(Tok::Dia); return; }
        fail("unexpected '<'; expected '<>' or '<->'");
      case '[':
        if (starts_with("[]")) { consume(2, 2); emit(Tok::Box); return; }
        fail("unexpected '['; expected '[]'");
      case '#':
        if (starts_with("#f")) { consume(2, 2); emit(Tok::Bot); return; }
        if (starts_with("#t")) { consume(2, 2); emit(Tok::Top); return; }
        fail("unexpected '#'; expected '#f' or '#t'");
      default:
        break;
    }
    // Unicode connectives (UTF-8 byte sequences).
    struct Uni { std::string_view bytes; Tok tok; };
    static constexpr Uni kUnicode[] = {
        {"¬", Tok::Not},   // ¬
        {"∧", Tok::And},   // ∧
        {"∨", Tok::Or},    // ∨
        {"→", Tok::Imp},   // →
        {"↔", Tok::Iff},   // ↔
        {"□", Tok::Box},   // □
        {"◇", Tok::Dia},   // ◇
        {"⋄", Tok::Dia},   // ⋄
        {"▷", Tok::Rhd},   // ▷
        {"⊥", Tok::Bot},   // ⊥
        {"⊤", Tok::Top},   // ⊤
    };
    for (const auto& u : kUnicode) {
      if (starts_with(u.bytes)) {
        consume(u.bytes.size(), 1);
        emit(u.tok);
        return;
      }
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_valid_atom_name(text_.substr(start, pos_ - start + 1))) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      col_ += static_cast<int>(name.size());
      emit(Tok::Atom, std::move(name));
      return;
    }
    fail("unexpected character");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_{Tok::End, {}, 1, 1};
};

// ---------------------------------------------------------------------------
// Parser. One layer per precedence level.

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Formula run() {
    Formula f = parse_iff();
    expect_end();
    return f;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& expected) {
    std::ostringstream os;
    os << "syntax error at " << t.line << ":" << t.column << ": unexpected " << tok_name(t.kind)
       << "; expected " << expected;
    throw SyntaxError(os.str(), t.line, t.column, expected);
  }

  void expect_end() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) fail(t, "end of input or a binary connective");
  }

  Formula parse_iff() {
    Formula l = parse_imp();
    if (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      return iff(std::move(l), parse_iff());
    }
    return l;
  }

  Formula parse_imp() {
    Formula l = parse_rhd();
    if (lex_.peek().kind == Tok::Imp) {
      lex_.take();
      return imp(std::move(l), parse_imp());
    }
    return l;
  }

  Formula parse_rhd() {
    Formula l = parse_or();
    if (lex_.peek().kind == Tok::Rhd) {
      lex_.take();
      Formula r = parse_or();
      const Token& t = lex_.peek();
      if (t.kind == Tok::Rhd)
        fail(t, "parentheses ('|>' is non-associative)");
      return rhd(std::move(l), std::move(r));
    }
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      l = disj(std::move(l), parse_and());
    }
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      l = conj(std::move(l), parse_unary());
    }
    return l;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Not: lex_.take(); return neg(parse_unary());
      case Tok::Box: lex_.take(); return box(parse_unary());
      case Tok::Dia: lex_.take(); return dia(parse_unary());
      default: return parse_primary();
    }
  }

  Formula parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::Atom: return atom(std::move(t.text));
      case Tok::Bot: return bot();
      case Tok::Top: return top();
      case Tok::LParen: {
        Formula f = parse_iff();
        const Token& close = lex_.peek();
        if (close.kind != Tok::RParen) fail(close, "')'");
        lex_.take();
        return f;
      }
      default:
        fail(t, "a formula (atom, '#f', '#t', '~', '[]', '<>' or '(')");
    }
  }

  Lexer lex_;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Renderer

namespace {

// Binding strength; atoms and unary prefixes never need parentheses.
int prec(const Formula& f) {
  switch (f.kind()) {
    case Kind::Iff: return 1;
    case Kind::Imp: return 2;
    case Kind::Rhd: return 3;
    case Kind::Or: return 4;
    case Kind::And: return 5;
    default: return 6;
  }
}

void render_into(const Formula& f, std::string& out);

void child(const Formula& f, bool parens, std::string& out) {
  if (parens) {
    out += '(';
    render_into(f, out);
    out += ')';
  } else {
    render_into(f, out);
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Atom: out += f.atom_name(); return;
    case Kind::Bot: out += "#f"; return;
    case Kind::Top: out += "#t"; return;
    case Kind::Not:
      out += '~';
      child(f.lhs(), prec(f.lhs()) < 6, out);
      return;
    case Kind::Box:
      out += "[]";
      child(f.lhs(), prec(f.lhs()) < 6, out);
      return;
    case Kind::Dia:
      out += "<>";
      child(f.lhs(), prec(f.lhs()) < 6, out);
      return;
    case Kind::And:
      child(f.lhs(), prec(f.lhs()) < 5, out);
      out += " & ";
      child(f.rhs(), prec(f.rhs()) <= 5, out);
      return;
    case Kind::Or:
      child(f.lhs(), prec(f.lhs()) < 4, out);
      out += " | ";
      child(f.rhs(), prec(f.rhs()) <= 4, out);
      return;
    case Kind::Rhd:
      // Binary operands always get parentheses here, as in A |> (B & []~A).
      child(f.lhs(), f.lhs().is_binary(), out);
      out += " |> ";
      child(f.rhs(), f.rhs().is_binary(), out);
      return;
    case Kind::Imp:
      child(f.lhs(), prec(f.lhs()) <= 2, out);
      out += " -> ";
      child(f.rhs(), prec(f.rhs()) < 2, out);
      return;
    case Kind::Iff:
      child(f.lhs(), prec(f.lhs()) <= 1, out);
      out += " <-> ";
      child(f.rhs(), prec(f.rhs()) < 1, out);
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.kind()) {
    case Kind::Atom: {
      auto it = s.find(f.atom_name());
      return it != s.end() ? it->second : f;
    }
    case Kind::Bot:
    case Kind::Top:
      return f;
    case Kind::Not: return neg(substitute(f.lhs(), s));
    case Kind::Box: return box(substitute(f.lhs(), s));
    case Kind::Dia: return dia(substitute(f.lhs(), s));
    case Kind::And: return conj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Kind::Or: return disj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Kind::Imp: return imp(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Kind::Iff: return iff(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Kind::Rhd: return rhd(substitute(f.lhs(), s), substitute(f.rhs(), s));
  }
  return f;  // unreachable
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Atom: out.insert(f.atom_name()); return;
    case Kind::Bot:
    case Kind::Top:
      return;
    case Kind::Not:
    case Kind::Box:
    case Kind::Dia:
      collect_atoms(f.lhs(), out);
      return;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
      return;
  }
}

}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

}  // namespace il
