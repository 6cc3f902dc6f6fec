#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "il/semantics.hpp"

namespace il {

// A partial frame: bare facts, no laws imposed yet.
struct Sketch {
  std::vector<std::string> worlds;
  std::vector<std::pair<int, int>> r_facts;          // aRb
  std::vector<std::tuple<int, int, int>> s_facts;    // (base w, a, b): a S_w b
};

// Optional production rules on top of the always-on frame laws.
struct RuleSet {
  bool m_rule = false;  // xRy, yS_xz, zRu => yRu
  bool p_rule = false;  // xRy, yRz, zS_xu => zS_yu
};

// The closed R contains a cycle, so no Veltman frame completes the sketch.
struct CycleError : std::runtime_error {
  std::vector<std::string> cycle;
  explicit CycleError(std::vector<std::string> cycle_);
};

// Least fixpoint of the frame laws read as productions (R-transitivity,
// S-membership repair, S-reflexivity on successors, R-inclusion into S_w,
// S-transitivity) plus the enabled M/P rules. No new worlds are invented.
// Throws CycleError when the fixpoint's R is cyclic; otherwise the result
// passes validate().
Frame close(const Sketch& sk, RuleSet rules);

struct ClosureQuery {
  enum class Kind { R, S, ExistsMid };
  Kind kind = Kind::R;
  std::string base;  // S only
  std::string a, b;
};

// Query forms: "r a b", "s w a b", "exists-mid a b".
ClosureQuery parse_query(std::string_view text);

// Evaluates the query on the closed frame; CycleError propagates.
bool holds_in_closure(const Sketch& sk, RuleSet rules, const ClosureQuery& q);

// Sketch file format: 'sketch' header, then 'world', 'r', 's' lines as in
// frame files, optional 'end'.
Sketch parse_sketch(std::istream& in);
Sketch load_sketch(const std::string& path);

}  // namespace il
