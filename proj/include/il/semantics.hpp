#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "il/formula.hpp"

namespace il {

// Worlds are indices into a name table; sets of worlds are bitmasks.
using WorldMask = std::uint64_t;
inline constexpr int kMaxWorlds = 64;

// Finite Veltman frame <W, R, {S_w}>. Construction is add-only and literal:
// nothing is derived, so invalid structures can be represented and then
// diagnosed by validate().
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<std::string> world_names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& world_names() const { return names_; }
  const std::string& world_name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  int world_index(std::string_view name) const;      // -1 if unknown
  int require_world(std::string_view name) const;    // UsageError if unknown

  void add_r(int a, int b);
  void add_s(int w, int a, int b);
  bool has_r(int a, int b) const;
  bool has_s(int w, int a, int b) const;

  WorldMask successors(int w) const { return r_[static_cast<std::size_t>(w)]; }
  WorldMask s_successors(int w, int a) const {
    return s_[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)];
  }
  WorldMask all_worlds() const;

  friend bool operator==(const Frame& a, const Frame& b);

 private:
  std::vector<std::string> names_;
  std::vector<WorldMask> r_;                // r_[a] bit b: aRb
  std::vector<std::vector<WorldMask>> s_;   // s_[w][a] bit b: a S_w b
};

struct Model {
  Frame frame;
  std::map<std::string, WorldMask> valuation;  // atom -> set of worlds
};

// The five frame laws (the L-frame law split into its two checkable parts)
// plus the valuation range check for models.
enum class Law {
  RTransitive,
  RAcyclic,
  SWithinSuccessors,  // S_w subset of w^ x w^
  SContainsR,         // R restricted to w^ subset of S_w
  SReflexive,         // on w^
  STransitive,
  ValuationRange,
};

std::string_view law_name(Law law);

struct Violation {
  Law law;
  std::vector<int> worlds;  // witness tuple; for RAcyclic, the cycle
  std::string atom;         // ValuationRange only
};

std::string to_string(const Violation& v, const Frame& fr);

// Empty result iff all laws hold; each violated law is reported with one
// witness.
std::vector<Violation> validate(const Frame& fr);
std::vector<Violation> validate(const Model& m);

// Forcing relation. Requires a valid model and a known world.
bool forces(const Model& m, int world, const Formula& f);
bool forces(const Model& m, std::string_view world, const Formula& f);

struct Countervaluation {
  std::map<std::string, WorldMask> valuation;
  int world;
};

struct FrameValidity {
  bool valid;
  std::optional<Countervaluation> witness;  // set iff !valid
};

inline constexpr std::uint64_t kDefaultValuationBudget = std::uint64_t{1} << 24;

// Frame validity by sweep over all valuations of the atoms of f. The witness
// on failure is deterministic: least valuation (atoms in sorted order, each
// valuation mask read as an integer, first atom most significant), then
// least world. Throws ResourceError when the sweep would exceed the budget.
FrameValidity frame_valid(const Frame& fr, const Formula& f,
                          std::uint64_t max_valuations = kDefaultValuationBudget);

// --------------------------------------------------------------------------
// Text format. Line-oriented; '#' starts a comment; tokens are whitespace
// separated. Header line 'frame' or 'model', then 'world <name>',
// 'r <a> <b>', 's <w> <a> <b>', 'val <world> <atom>' (models only), and an
// optional trailing 'end'. The loader is literal: it adds no pairs.

Frame parse_frame(std::istream& in);
Model parse_model(std::istream& in);
std::variant<Frame, Model> parse_structure(std::istream& in);

Frame load_frame(const std::string& path);
Model load_model(const std::string& path);
std::variant<Frame, Model> load_structure(const std::string& path);

std::string to_text(const Frame& fr);
std::string to_text(const Model& m);

// DOT export: R edges solid, S_w edges dashed with label w.
std::string to_dot(const Frame& fr);
std::string to_dot(const Model& m);

}  // namespace il
