#include "il/semantics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <fstream>
#include <set>
#include <sstream>

#include "textio.hpp"

namespace il {

namespace {

WorldMask bit(int i) { return WorldMask{1} << i; }

// Iterates the set bits of m.
template <class Fn>
void for_bits(WorldMask m, Fn&& fn) {
  while (m != 0) {
    int i = std::countr_zero(m);
    m &= m - 1;
    fn(i);
  }
}

}  // namespace

Frame::Frame(std::vector<std::string> world_names) : names_(std::move(world_names)) {
  if (size() > kMaxWorlds)
    throw UsageError("too many worlds (" + std::to_string(size()) + "); at most " +
                     std::to_string(kMaxWorlds) + " are supported");
  std::set<std::string_view> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw UsageError("duplicate world name '" + n + "'");
  r_.assign(names_.size(), 0);
  s_.assign(names_.size(), std::vector<WorldMask>(names_.size(), 0));
}

int Frame::world_index(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

int Frame::require_world(std::string_view name) const {
  int i = world_index(name);
  if (i < 0) throw UsageError("unknown world '" + std::string(name) + "'");
  return i;
}

void Frame::add_r(int a, int b) {
  assert(a >= 0 && a < size() && b >= 0 && b < size());
  r_[static_cast<std::size_t>(a)] |= bit(b);
}

void Frame::add_s(int w, int a, int b) {
  assert(w >= 0 && w < size() && a >= 0 && a < size() && b >= 0 && b < size());
  s_[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)] |= bit(b);
}

bool Frame::has_r(int a, int b) const { return (successors(a) & bit(b)) != 0; }

bool Frame::has_s(int w, int a, int b) const { return (s_successors(w, a) & bit(b)) != 0; }

WorldMask Frame::all_worlds() const {
  return size() == 64 ? ~WorldMask{0} : (WorldMask{1} << size()) - 1;
}

bool operator==(const Frame& a, const Frame& b) {
  return a.names_ == b.names_ && a.r_ == b.r_ && a.s_ == b.s_;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view law_name(Law law) {
  switch (law) {
    case Law::RTransitive: return "r-transitive";
    case Law::RAcyclic: return "r-acyclic";
    case Law::SWithinSuccessors: return "s-within-successors";
    case Law::SContainsR: return "s-contains-r";
    case Law::SReflexive: return "s-reflexive";
    case Law::STransitive: return "s-transitive";
    case Law::ValuationRange: return "valuation-range";
  }
  return "?";
}

std::string to_string(const Violation& v, const Frame& fr) {
  std::ostringstream os;
  os << law_name(v.law);
  auto name = [&](int i) { return fr.world_name(i); };
  switch (v.law) {
    case Law::RTransitive:
      os << ": " << name(v.worlds[0]) << " R " << name(v.worlds[1]) << " R " << name(v.worlds[2])
         << " but not " << name(v.worlds[0]) << " R " << name(v.worlds[2]);
      break;
    case Law::RAcyclic: {
      os << ": R-cycle";
      for (int w : v.worlds) os << " " << name(w);
      os << " " << name(v.worlds[0]);
      break;
    }
    case Law::SWithinSuccessors:
      os << ": " << name(v.worlds[1]) << " S_" << name(v.worlds[0]) << " " << name(v.worlds[2])
         << " outside " << name(v.worlds[0]) << "^ x " << name(v.worlds[0]) << "^";
      break;
    case Law::SContainsR:
      os << ": " << name(v.worlds[1]) << " R " << name(v.worlds[2]) << " inside "
         << name(v.worlds[0]) << "^ but not " << name(v.worlds[1]) << " S_" << name(v.worlds[0])
         << " " << name(v.worlds[2]);
      break;
    case Law::SReflexive:
      os << ": " << name(v.worlds[1]) << " in " << name(v.worlds[0]) << "^ lacks "
         << name(v.worlds[1]) << " S_" << name(v.worlds[0]) << " " << name(v.worlds[1]);
      break;
    case Law::STransitive:
      os << ": " << name(v.worlds[1]) << " S_" << name(v.worlds[0]) << " " << name(v.worlds[2])
         << " S_" << name(v.worlds[0]) << " " << name(v.worlds[3]) << " but not "
         << name(v.worlds[1]) << " S_" << name(v.worlds[0]) << " " << name(v.worlds[3]);
      break;
    case Law::ValuationRange:
      os << ": atom '" << v.atom << "' is true at a world outside the frame";
      break;
  }
  return os.str();
}

namespace {

// Finds a cycle in the digraph given by rows, if any. Returns the cycle as
// a node sequence c0 .. ck with edges c0->c1->..->ck->c0.
std::optional<std::vector<int>> find_cycle(const Frame& fr) {
  int n = fr.size();
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> stack;
  std::optional<std::vector<int>> cycle;

  auto dfs = [&](auto&& self, int v) -> bool {
    state[static_cast<std::size_t>(v)] = 1;
    stack.push_back(v);
    bool found = false;
    for_bits(fr.successors(v), [&](int u) {
      if (found) return;
      if (state[static_cast<std::size_t>(u)] == 1) {
        auto it = std::find(stack.begin(), stack.end(), u);
        cycle = std::vector<int>(it, stack.end());
        found = true;
      } else if (state[static_cast<std::size_t>(u)] == 0 && self(self, u)) {
        found = true;
      }
    });
    stack.pop_back();
    state[static_cast<std::size_t>(v)] = 2;
    return found;
  };

  for (int v = 0; v < n && !cycle; ++v)
    if (state[static_cast<std::size_t>(v)] == 0) dfs(dfs, v);
  return cycle;
}

}  // namespace

std::vector<Violation> validate(const Frame& fr) {
  std::vector<Violation> out;
  int n = fr.size();

  // Law 1a: R transitive.
  [&] {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (fr.has_r(a, b)) {
          WorldMask missing = fr.successors(b) & ~fr.successors(a);
          if (missing != 0) {
            out.push_back({Law::RTransitive, {a, b, std::countr_zero(missing)}, {}});
            return;
          }
        }
  }();

  // Law 1b: R conversely well-founded; on finite frames, acyclic.
  if (auto cycle = find_cycle(fr))
    out.push_back({Law::RAcyclic, std::move(*cycle), {}});

  // Law 2: S_w within w^ x w^.
  [&] {
    for (int w = 0; w < n; ++w) {
      WorldMask up = fr.successors(w);
      for (int a = 0; a < n; ++a) {
        WorldMask row = fr.s_successors(w, a);
        if (row == 0) continue;
        if ((up & bit(a)) == 0 || (row & ~up) != 0) {
          int b = (up & bit(a)) == 0 ? std::countr_zero(row) : std::countr_zero(row & ~up);
          out.push_back({Law::SWithinSuccessors, {w, a, b}, {}});
          return;
        }
      }
    }
  }();

  // Law 3: R restricted to w^ within S_w.
  [&] {
    for (int w = 0; w < n; ++w) {
      WorldMask up = fr.successors(w);
      for (int a = 0; a < n; ++a) {
        if ((up & bit(a)) == 0) continue;
        WorldMask missing = (fr.successors(a) & up) & ~fr.s_successors(w, a);
        if (missing != 0) {
          out.push_back({Law::SContainsR, {w, a, std::countr_zero(missing)}, {}});
          return;
        }
      }
    }
  }();

  // Law 4: S_w reflexive on w^.
  [&] {
    for (int w = 0; w < n; ++w)
      for (int a = 0; a < n; ++a)
        if (fr.has_r(w, a) && !fr.has_s(w, a, a)) {
          out.push_back({Law::SReflexive, {w, a}, {}});
          return;
        }
  }();

  // Law 5: S_w transitive.
  [&] {
    for (int w = 0; w < n; ++w)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (fr.has_s(w, a, b)) {
            WorldMask missing = fr.s_successors(w, b) & ~fr.s_successors(w, a);
            if (missing != 0) {
              out.push_back({Law::STransitive, {w, a, b, std::countr_zero(missing)}, {}});
              return;
            }
          }
  }();

  return out;
}

std::vector<Violation> validate(const Model& m) {
  std::vector<Violation> out = validate(m.frame);
  for (const auto& [name, mask] : m.valuation)
    if ((mask & ~m.frame.all_worlds()) != 0) {
      out.push_back({Law::ValuationRange, {}, name});
      break;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Forcing

namespace {

// Truth set of f as a mask, with atom truth sets supplied by a callable.
template <class AtomFn>
WorldMask truth_set(const Frame& fr, const Formula& f, const AtomFn& atom_mask) {
  WorldMask all = fr.all_worlds();
  switch (f.kind()) {
    case Kind::Atom:
      return atom_mask(f.atom_name()) & all;
    case Kind::Bot:
      return 0;
    case Kind::Top:
      return all;
    case Kind::Not:
      return ~truth_set(fr, f.lhs(), atom_mask) & all;
    case Kind::And:
      return truth_set(fr, f.lhs(), atom_mask) & truth_set(fr, f.rhs(), atom_mask);
    case Kind::Or:
      return truth_set(fr, f.lhs(), atom_mask) | truth_set(fr, f.rhs(), atom_mask);
    case Kind::Imp:
      return (~truth_set(fr, f.lhs(), atom_mask) | truth_set(fr, f.rhs(), atom_mask)) & all;
    case Kind::Iff:
      return ~(truth_set(fr, f.lhs(), atom_mask) ^ truth_set(fr, f.rhs(), atom_mask)) & all;
    case Kind::Box: {
      WorldMask sub = truth_set(fr, f.lhs(), atom_mask);
      WorldMask out = 0;
      for (int w = 0; w < fr.size(); ++w)
        if ((fr.successors(w) & ~sub) == 0) out |= bit(w);
      return out;
    }
    case Kind::Dia: {
      WorldMask sub = truth_set(fr, f.lhs(), atom_mask);
      WorldMask out = 0;
      for (int w = 0; w < fr.size(); ++w)
        if ((fr.successors(w) & sub) != 0) out |= bit(w);
      return out;
    }
    case Kind::Rhd: {
      // w forces A |> B iff every R-successor of w forcing A has an
      // S_w-successor forcing B.
      WorldMask ta = truth_set(fr, f.lhs(), atom_mask);
      WorldMask tb = truth_set(fr, f.rhs(), atom_mask);
      WorldMask out = 0;
      for (int w = 0; w < fr.size(); ++w) {
        bool ok = true;
        for_bits(fr.successors(w) & ta, [&](int u) {
          if (ok && (fr.s_successors(w, u) & tb) == 0) ok = false;
        });
        if (ok) out |= bit(w);
      }
      return out;
    }
  }
  return 0;  // unreachable
}

void require_valid(const Model& m) {
  auto violations = validate(m);
  if (!violations.empty())
    throw UsageError("invalid structure: " + to_string(violations.front(), m.frame));
}

}  // namespace

bool forces(const Model& m, int world, const Formula& f) {
  require_valid(m);
  if (world < 0 || world >= m.frame.size())
    throw UsageError("world index out of range");
  auto atom_mask = [&](const std::string& name) -> WorldMask {
    auto it = m.valuation.find(name);
    return it == m.valuation.end() ? 0 : it->second;
  };
  return (truth_set(m.frame, f, atom_mask) & bit(world)) != 0;
}

bool forces(const Model& m, std::string_view world, const Formula& f) {
  return forces(m, m.frame.require_world(world), f);
}

FrameValidity frame_valid(const Frame& fr, const Formula& f, std::uint64_t max_valuations) {
  auto violations = validate(fr);
  if (!violations.empty())
    throw UsageError("invalid frame: " + to_string(violations.front(), fr));

  std::vector<std::string> atoms = atoms_of(f);
  int n = fr.size();
  int k = static_cast<int>(atoms.size());
  int bits = k * n;
  if (bits >= 64 || (std::uint64_t{1} << bits) > max_valuations) {
    std::ostringstream os;
    os << "valuation sweep needs 2^" << bits << " valuations, over the budget of "
       << max_valuations << " (raise IL_BUDGET to override)";
    throw ResourceError(os.str());
  }

  WorldMask all = fr.all_worlds();
  std::uint64_t total = std::uint64_t{1} << bits;
  std::vector<WorldMask> vals(atoms.size(), 0);
  auto atom_mask = [&](const std::string& name) -> WorldMask {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == name) return vals[i];
    return 0;
  };

  for (std::uint64_t counter = 0; counter < total; ++counter) {
    // First atom in the most significant block, so counter order is
    // lexicographic order over valuations.
    for (int i = 0; i < k; ++i) {
      int shift = (k - 1 - i) * n;
      vals[static_cast<std::size_t>(i)] = (counter >> shift) & all;
    }
    WorldMask t = truth_set(fr, f, atom_mask);
    if (t != all) {
      Countervaluation witness;
      for (std::size_t i = 0; i < atoms.size(); ++i) witness.valuation[atoms[i]] = vals[i];
      witness.world = std::countr_zero(~t & all);
      return {false, std::move(witness)};
    }
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct ParsedStructure {
  bool is_model = false;
  std::vector<std::string> worlds;
  std::vector<std::pair<std::string, std::string>> r;
  std::vector<std::array<std::string, 3>> s;
  std::vector<std::pair<std::string, std::string>> vals;  // (world, atom)
};

ParsedStructure scan_structure(std::istream& in, const char* expect_header) {
  auto lines = textio::read_lines(in);
  if (lines.empty()) throw UsageError("empty file; expected a 'frame' or 'model' header");

  ParsedStructure ps;
  const auto& head = lines.front().tokens[0];
  if (head == "frame")
    ps.is_model = false;
  else if (head == "model")
    ps.is_model = true;
  else
    textio::fail(lines.front(), "expected 'frame' or 'model' header, got '" + head + "'");
  if (expect_header && head != expect_header)
    textio::fail(lines.front(), std::string("expected a '") + expect_header + "' file");
  textio::expect_arity(lines.front(), 1);

  bool ended = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (ended) textio::fail(line, "content after 'end'");
    const std::string& kw = line.tokens[0];
    if (kw == "world") {
      textio::expect_arity(line, 2);
      ps.worlds.push_back(line.tokens[1]);
    } else if (kw == "r") {
      textio::expect_arity(line, 3);
      ps.r.emplace_back(line.tokens[1], line.tokens[2]);
    } else if (kw == "s") {
      textio::expect_arity(line, 4);
      ps.s.push_back({line.tokens[1], line.tokens[2], line.tokens[3]});
    } else if (kw == "val") {
      if (!ps.is_model) textio::fail(line, "'val' lines are only allowed in model files");
      textio::expect_arity(line, 3);
      ps.vals.emplace_back(line.tokens[1], line.tokens[2]);
    } else if (kw == "end") {
      textio::expect_arity(line, 1);
      ended = true;
    } else {
      textio::fail(line, "unknown keyword '" + kw + "'");
    }
  }
  return ps;
}

Frame build_frame(const ParsedStructure& ps) {
  Frame fr(ps.worlds);
  for (const auto& [a, b] : ps.r) fr.add_r(fr.require_world(a), fr.require_world(b));
  for (const auto& [w, a, b] : ps.s)
    fr.add_s(fr.require_world(w), fr.require_world(a), fr.require_world(b));
  return fr;
}

Model build_model(const ParsedStructure& ps) {
  Model m{build_frame(ps), {}};
  for (const auto& [world, name] : ps.vals) {
    if (!is_valid_atom_name(name)) throw UsageError("invalid atom name '" + name + "'");
    m.valuation[name] |= bit(m.frame.require_world(world));
  }
  return m;
}

}  // namespace

Frame parse_frame(std::istream& in) { return build_frame(scan_structure(in, "frame")); }

Model parse_model(std::istream& in) { return build_model(scan_structure(in, "model")); }

std::variant<Frame, Model> parse_structure(std::istream& in) {
  ParsedStructure ps = scan_structure(in, nullptr);
  if (ps.is_model) return build_model(ps);
  return build_frame(ps);
}

namespace {

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

}  // namespace

Frame load_frame(const std::string& path) {
  auto in = open_file(path);
  return parse_frame(in);
}

Model load_model(const std::string& path) {
  auto in = open_file(path);
  return parse_model(in);
}

std::variant<Frame, Model> load_structure(const std::string& path) {
  auto in = open_file(path);
  return parse_structure(in);
}

namespace {

void frame_body(const Frame& fr, std::ostream& os) {
  for (int i = 0; i < fr.size(); ++i) os << "world " << fr.world_name(i) << "\n";
  for (int a = 0; a < fr.size(); ++a)
    for_bits(fr.successors(a),
             [&](int b) { os << "r " << fr.world_name(a) << " " << fr.world_name(b) << "\n"; });
  for (int w = 0; w < fr.size(); ++w)
    for (int a = 0; a < fr.size(); ++a)
      for_bits(fr.s_successors(w, a), [&](int b) {
        os << "s " << fr.world_name(w) << " " << fr.world_name(a) << " " << fr.world_name(b)
           << "\n";
      });
}

}  // namespace

std::string to_text(const Frame& fr) {
  std::ostringstream os;
  os << "frame\n";
  frame_body(fr, os);
  os << "end\n";
  return os.str();
}

std::string to_text(const Model& m) {
  std::ostringstream os;
  os << "model\n";
  frame_body(m.frame, os);
  for (const auto& [name, mask] : m.valuation)
    for_bits(mask, [&](int w) { os << "val " << m.frame.world_name(w) << " " << name << "\n"; });
  os << "end\n";
  return os.str();
}

namespace {

std::string dot_body(const Frame& fr, const std::map<std::string, WorldMask>* valuation) {
  std::ostringstream os;
  os << "digraph veltman {\n";
  for (int i = 0; i < fr.size(); ++i) {
    os << "  \"" << fr.world_name(i) << "\"";
    if (valuation) {
      std::string atoms;
      for (const auto& [name, mask] : *valuation)
        if ((mask & bit(i)) != 0) atoms += (atoms.empty() ? "" : " ") + name;
      if (!atoms.empty()) os << " [label=\"" << fr.world_name(i) << "\\n" << atoms << "\"]";
    }
    os << ";\n";
  }
  for (int a = 0; a < fr.size(); ++a)
    for_bits(fr.successors(a), [&](int b) {
      os << "  \"" << fr.world_name(a) << "\" -> \"" << fr.world_name(b) << "\";\n";
    });
  for (int w = 0; w < fr.size(); ++w)
    for (int a = 0; a < fr.size(); ++a)
      for_bits(fr.s_successors(w, a), [&](int b) {
        os << "  \"" << fr.world_name(a) << "\" -> \"" << fr.world_name(b)
           << "\" [style=dashed, label=\"" << fr.world_name(w) << "\"];\n";
      });
  os << "}\n";
  return os.str();
}

}  // namespace

std::string to_dot(const Frame& fr) { return dot_body(fr, nullptr); }

std::string to_dot(const Model& m) { return dot_body(m.frame, &m.valuation); }

}  // namespace il
