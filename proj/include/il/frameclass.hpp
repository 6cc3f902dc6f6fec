#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "il/calculus.hpp"
#include "il/semantics.hpp"

namespace il {

// Named frame classes with decidable conditions:
//   IL      no condition beyond the frame laws
//   ILW     R;S_x acyclic for every x        (u(R;S_x)v iff uRw and wS_xv)
//   ILM0    xRy, yRz, zS_xu, uRv  =>  yRv
//   ILWstar ILW and ILM0
//   ILM     yS_xz, zRu            =>  yRu
//   ILP     xRy, yRz, zS_xu       =>  zS_yu
//   ILP0    xRy, yRz, zS_xu, uRv  =>  zS_yv
//   ILM1    xRy, yRz, zS_xu, uRv  =>  yRw, wRv for some w
enum class FrameClass { IL, ILW, ILM0, ILWstar, ILM, ILP, ILP0, ILM1 };

inline constexpr FrameClass kAllFrameClasses[] = {
    FrameClass::IL,      FrameClass::ILW, FrameClass::ILM0, FrameClass::ILWstar,
    FrameClass::ILM,     FrameClass::ILP, FrameClass::ILP0, FrameClass::ILM1};

std::string_view frame_class_name(FrameClass c);
std::optional<FrameClass> frame_class_from_name(std::string_view name);  // accepts "ILW*"

// The characteristic schema (over letters A, B, C); nullopt for IL.
std::optional<Formula> class_schema(FrameClass c);

// Concrete counterexample to a class condition. For the first-order
// conditions, bindings name the quantified worlds. For ILW, base is the x
// whose composed relation R;S_x has the cycle, and cycle lists steps
// (via, next): current R via, via S_base next.
struct ConditionFailure {
  FrameClass cls = FrameClass::IL;
  std::vector<std::pair<std::string, int>> bindings;
  int base = -1;
  std::vector<std::pair<int, int>> cycle;

  std::string to_string(const Frame& fr) const;
};

// nullopt iff the condition holds. Deterministic: the least witness in scan
// order. Requires a valid frame.
std::optional<ConditionFailure> check_condition(const Frame& fr, FrameClass c);

inline constexpr int kDefaultEnumerationCap = 4;

// Enumerates every labeled Veltman frame on worlds w1..wn exactly once, in a
// fixed order: R ranges over the transitive acyclic relations (subsets of
// the off-diagonal cells in row-major order, ascending as bitmasks); for
// each R, the per-world S_w candidates (supersets of the diagonal and of
// R restricted to w^, transitive, within w^ x w^) advance odometer-style
// with the last world fastest.
class FrameEnumerator {
 public:
  explicit FrameEnumerator(int n, std::optional<FrameClass> filter = std::nullopt,
                           int cap = kDefaultEnumerationCap);
  std::optional<Frame> next();

 private:
  bool settle_r();       // leaves current R valid, or exhausts
  void prepare_s();      // computes S choices for the current R
  Frame build() const;

  int n_;
  std::optional<FrameClass> filter_;
  std::uint32_t r_bits_ = 0;
  bool exhausted_ = false;
  bool fresh_r_ = true;
  std::vector<std::pair<int, int>> cells_;           // off-diagonal cells
  std::vector<WorldMask> r_rows_;
  std::vector<std::vector<std::vector<WorldMask>>> s_options_;  // [world][choice][row]
  std::vector<std::size_t> odo_;
};

std::uint64_t count_frames(int n, std::optional<FrameClass> filter = std::nullopt,
                           int cap = kDefaultEnumerationCap);

enum class SweepDirection { Both, SoundnessOnly };

struct SweepRecord {
  int size = 0;
  std::uint64_t index = 0;  // enumeration index within that size
  bool condition_holds = false;
  bool schema_valid = false;
};

struct SweepDisagreement {
  SweepRecord record;
  std::optional<ConditionFailure> condition_witness;  // when the condition fails
  std::optional<Countervaluation> validity_witness;   // when the schema fails
  Frame frame;
};

struct SweepReport {
  FrameClass cls = FrameClass::IL;
  int max_worlds = 0;
  SweepDirection direction = SweepDirection::Both;
  std::uint64_t frames_checked = 0;
  std::uint64_t condition_true = 0;
  std::uint64_t schema_valid_count = 0;
  std::vector<SweepDisagreement> disagreements;
  std::vector<SweepRecord> records;  // all frames; only when record_all

  bool passed() const { return disagreements.empty(); }
};

// Compares the class condition against frame validity of the class schema on
// every frame with 1..max_worlds worlds. SoundnessOnly only flags frames
// whose condition holds while the schema fails.
SweepReport correspondence_sweep(int max_worlds, FrameClass c, SweepDirection direction,
                                 std::uint64_t valuation_budget = kDefaultValuationBudget,
                                 bool record_all = false,
                                 int cap = kDefaultEnumerationCap);

// Human-readable table, or one machine line per frame (requires record_all).
std::string format_report(const SweepReport& report, bool machine);

}  // namespace il
