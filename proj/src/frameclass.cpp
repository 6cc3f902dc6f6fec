#include "il/frameclass.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace il {

namespace {

WorldMask bit(int i) { return WorldMask{1} << i; }

template <class Fn>
void for_bits(WorldMask m, Fn&& fn) {
  while (m != 0) {
    int i = std::countr_zero(m);
    m &= m - 1;
    fn(i);
  }
}

}  // namespace

std::string_view frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::IL: return "IL";
    case FrameClass::ILW: return "ILW";
    case FrameClass::ILM0: return "ILM0";
    case FrameClass::ILWstar: return "ILWstar";
    case FrameClass::ILM: return "ILM";
    case FrameClass::ILP: return "ILP";
    case FrameClass::ILP0: return "ILP0";
    case FrameClass::ILM1: return "ILM1";
  }
  return "?";
}

std::optional<FrameClass> frame_class_from_name(std::string_view name) {
  for (FrameClass c : kAllFrameClasses)
    if (frame_class_name(c) == name) return c;
  if (name == "ILW*") return FrameClass::ILWstar;
  return std::nullopt;
}

std::optional<Formula> class_schema(FrameClass c) {
  switch (c) {
    case FrameClass::IL: return std::nullopt;
    case FrameClass::ILW: return schema_template(Schema::W);
    case FrameClass::ILM0: return schema_template(Schema::M0);
    case FrameClass::ILWstar: return schema_template(Schema::Wstar);
    case FrameClass::ILM: return schema_template(Schema::M);
    case FrameClass::ILP: return schema_template(Schema::P);
    case FrameClass::ILP0: return schema_template(Schema::P0);
    case FrameClass::ILM1: return schema_template(Schema::M1);
  }
  return std::nullopt;
}

std::string ConditionFailure::to_string(const Frame& fr) const {
  std::ostringstream os;
  os << frame_class_name(cls) << " condition fails: ";
  if (!cycle.empty()) {
    os << "R;S_" << fr.world_name(base) << " has a cycle:";
    for (const auto& [via, next] : cycle)
      os << " (R " << fr.world_name(via) << " S_" << fr.world_name(base) << " "
         << fr.world_name(next) << ")";
  } else {
    bool first = true;
    for (const auto& [var, world] : bindings) {
      if (!first) os << ", ";
      first = false;
      os << var << "=" << fr.world_name(world);
    }
  }
  return os.str();
}

namespace {

void require_valid_frame(const Frame& fr) {
  auto violations = validate(fr);
  if (!violations.empty())
    throw UsageError("invalid frame: " + to_string(violations.front(), fr));
}

// Cycle in the composed relation R;S_x for some x, as (via, next) steps.
std::optional<ConditionFailure> check_w(const Frame& fr) {
  int n = fr.size();
  std::vector<WorldMask> comp(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    for (int u = 0; u < n; ++u) {
      WorldMask row = 0;
      for_bits(fr.successors(u), [&](int w) { row |= fr.s_successors(x, w); });
      comp[static_cast<std::size_t>(u)] = row;
    }
    // DFS cycle detection on comp.
    std::vector<int> state(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    std::optional<std::vector<int>> cycle;
    auto dfs = [&](auto&& self, int v) -> bool {
      state[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
      bool found = false;
      for_bits(comp[static_cast<std::size_t>(v)], [&](int u) {
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
    if (cycle) {
      ConditionFailure failure;
      failure.cls = FrameClass::ILW;
      failure.base = x;
      const auto& nodes = *cycle;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        int cur = nodes[i];
        int nxt = nodes[(i + 1) % nodes.size()];
        int via = -1;
        for_bits(fr.successors(cur), [&](int w) {
          if (via < 0 && fr.has_s(x, w, nxt)) via = w;
        });
        failure.cycle.emplace_back(via, nxt);
      }
      return failure;
    }
  }
  return std::nullopt;
}

using Names = std::initializer_list<const char*>;

ConditionFailure fo_failure(FrameClass cls, Names names, std::initializer_list<int> worlds) {
  ConditionFailure f;
  f.cls = cls;
  auto n = names.begin();
  auto w = worlds.begin();
  for (; n != names.end() && w != worlds.end(); ++n, ++w) f.bindings.emplace_back(*n, *w);
  return f;
}

// xRy, yRz, zS_xu, uRv quantifier prefix shared by M0, P0, M1.
template <class Fn>
std::optional<ConditionFailure> scan_xyzuv(const Frame& fr, const Fn& check) {
  std::optional<ConditionFailure> out;
  int n = fr.size();
  for (int x = 0; x < n && !out; ++x)
    for_bits(fr.successors(x), [&](int y) {
      if (out) return;
      for_bits(fr.successors(y), [&](int z) {
        if (out) return;
        for_bits(fr.s_successors(x, z), [&](int u) {
          if (out) return;
          for_bits(fr.successors(u), [&](int v) {
            if (out) return;
            out = check(x, y, z, u, v);
          });
        });
      });
    });
  return out;
}

std::optional<ConditionFailure> check_fo(const Frame& fr, FrameClass c) {
  int n = fr.size();
  switch (c) {
    case FrameClass::ILM0:
      return scan_xyzuv(fr, [&](int x, int y, int z, int u, int v) -> std::optional<ConditionFailure> {
        if (!fr.has_r(y, v))
          return fo_failure(FrameClass::ILM0, {"x", "y", "z", "u", "v"}, {x, y, z, u, v});
        return std::nullopt;
      });
    case FrameClass::ILP0:
      return scan_xyzuv(fr, [&](int x, int y, int z, int u, int v) -> std::optional<ConditionFailure> {
        if (!fr.has_s(y, z, v))
          return fo_failure(FrameClass::ILP0, {"x", "y", "z", "u", "v"}, {x, y, z, u, v});
        return std::nullopt;
      });
    case FrameClass::ILM1:
      return scan_xyzuv(fr, [&](int x, int y, int z, int u, int v) -> std::optional<ConditionFailure> {
        bool mid = false;
        for_bits(fr.successors(y), [&](int w) {
          if (!mid && fr.has_r(w, v)) mid = true;
        });
        if (!mid)
          return fo_failure(FrameClass::ILM1, {"x", "y", "z", "u", "v"}, {x, y, z, u, v});
        return std::nullopt;
      });
    case FrameClass::ILM: {
      std::optional<ConditionFailure> out;
      for (int x = 0; x < n && !out; ++x)
        for (int y = 0; y < n && !out; ++y)
          for_bits(fr.s_successors(x, y), [&](int z) {
            if (out) return;
            for_bits(fr.successors(z), [&](int u) {
              if (!out && !fr.has_r(y, u))
                out = fo_failure(FrameClass::ILM, {"x", "y", "z", "u"}, {x, y, z, u});
            });
          });
      return out;
    }
    case FrameClass::ILP: {
      std::optional<ConditionFailure> out;
      for (int x = 0; x < n && !out; ++x)
        for_bits(fr.successors(x), [&](int y) {
          if (out) return;
          for_bits(fr.successors(y), [&](int z) {
            if (out) return;
            for_bits(fr.s_successors(x, z), [&](int u) {
              if (!out && !fr.has_s(y, z, u))
                out = fo_failure(FrameClass::ILP, {"x", "y", "z", "u"}, {x, y, z, u});
            });
          });
        });
      return out;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<ConditionFailure> check_condition(const Frame& fr, FrameClass c) {
  require_valid_frame(fr);
  switch (c) {
    case FrameClass::IL:
      return std::nullopt;
    case FrameClass::ILW:
      return check_w(fr);
    case FrameClass::ILWstar:
      if (auto w = check_w(fr)) return w;
      return check_fo(fr, FrameClass::ILM0);
    default:
      return check_fo(fr, c);
  }
}

// ---------------------------------------------------------------------------
// Enumeration

FrameEnumerator::FrameEnumerator(int n, std::optional<FrameClass> filter, int cap)
    : n_(n), filter_(filter) {
  if (cap < 1) throw UsageError("enumeration cap must be at least 1");
  if (n < 1 || n > cap)
    throw UsageError("world count " + std::to_string(n) + " outside 1.." + std::to_string(cap) +
                     " (raise the cap to go further)");
  if (n * (n - 1) > 30)
    throw UsageError("enumeration beyond 6 worlds is not supported");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) cells_.emplace_back(a, b);
  r_rows_.assign(static_cast<std::size_t>(n), 0);
}

bool FrameEnumerator::settle_r() {
  std::uint32_t total = std::uint32_t{1} << cells_.size();
  while (true) {
    if (!fresh_r_) {
      if (r_bits_ + 1 >= total && cells_.size() > 0) return false;
      if (cells_.empty()) return false;  // single R candidate already served
      ++r_bits_;
    }
    fresh_r_ = false;
    std::fill(r_rows_.begin(), r_rows_.end(), 0);
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if ((r_bits_ >> i) & 1) r_rows_[static_cast<std::size_t>(cells_[i].first)] |= bit(cells_[i].second);
    // Transitive? (Irreflexive by construction, so transitivity gives acyclicity.)
    bool ok = true;
    for (int a = 0; a < n_ && ok; ++a)
      for_bits(r_rows_[static_cast<std::size_t>(a)], [&](int b) {
        if (ok && (r_rows_[static_cast<std::size_t>(b)] & ~r_rows_[static_cast<std::size_t>(a)]) != 0)
          ok = false;
      });
    if (ok) return true;
    if (cells_.empty()) return false;
  }
}

void FrameEnumerator::prepare_s() {
  s_options_.assign(static_cast<std::size_t>(n_), {});
  for (int w = 0; w < n_; ++w) {
    WorldMask up = r_rows_[static_cast<std::size_t>(w)];
    std::vector<int> members;
    for_bits(up, [&](int i) { members.push_back(i); });

    std::vector<WorldMask> base(static_cast<std::size_t>(n_), 0);
    for (int a : members) {
      base[static_cast<std::size_t>(a)] |= bit(a);                       // reflexive on w^
      base[static_cast<std::size_t>(a)] |= r_rows_[static_cast<std::size_t>(a)] & up;  // R restricted to w^
    }
    std::vector<std::pair<int, int>> free_cells;
    for (int a : members)
      for (int b : members)
        if (a != b && (base[static_cast<std::size_t>(a)] & bit(b)) == 0) free_cells.emplace_back(a, b);

    auto& options = s_options_[static_cast<std::size_t>(w)];
    std::uint32_t total = std::uint32_t{1} << free_cells.size();
    for (std::uint32_t sub = 0; sub < total; ++sub) {
      std::vector<WorldMask> cand = base;
      for (std::size_t i = 0; i < free_cells.size(); ++i)
        if ((sub >> i) & 1)
          cand[static_cast<std::size_t>(free_cells[i].first)] |= bit(free_cells[i].second);
      bool transitive = true;
      for (int a : members) {
        for_bits(cand[static_cast<std::size_t>(a)], [&](int b) {
          if (transitive && (cand[static_cast<std::size_t>(b)] & ~cand[static_cast<std::size_t>(a)]) != 0)
            transitive = false;
        });
        if (!transitive) break;
      }
      if (transitive) options.push_back(std::move(cand));
    }
  }
  odo_.assign(static_cast<std::size_t>(n_), 0);
}

Frame FrameEnumerator::build() const {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) names.push_back("w" + std::to_string(i));
  Frame fr(std::move(names));
  for (int a = 0; a < n_; ++a)
    for_bits(r_rows_[static_cast<std::size_t>(a)], [&](int b) { fr.add_r(a, b); });
  for (int w = 0; w < n_; ++w) {
    const auto& rows = s_options_[static_cast<std::size_t>(w)][odo_[static_cast<std::size_t>(w)]];
    for (int a = 0; a < n_; ++a)
      for_bits(rows[static_cast<std::size_t>(a)], [&](int b) { fr.add_s(w, a, b); });
  }
  return fr;
}

std::optional<Frame> FrameEnumerator::next() {
  while (!exhausted_) {
    if (s_options_.empty()) {
      if (!settle_r()) {
        exhausted_ = true;
        break;
      }
      prepare_s();
    }
    Frame fr = build();
    // Advance the odometer, last world fastest.
    int pos = n_ - 1;
    while (pos >= 0) {
      auto p = static_cast<std::size_t>(pos);
      if (++odo_[p] < s_options_[p].size()) break;
      odo_[p] = 0;
      --pos;
    }
    if (pos < 0) s_options_.clear();  // next R on the following call

    if (!filter_ || !check_condition(fr, *filter_)) return fr;
  }
  return std::nullopt;
}

std::uint64_t count_frames(int n, std::optional<FrameClass> filter, int cap) {
  FrameEnumerator e(n, filter, cap);
  std::uint64_t count = 0;
  while (e.next()) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Correspondence sweeps

SweepReport correspondence_sweep(int max_worlds, FrameClass c, SweepDirection direction,
                                 std::uint64_t valuation_budget, bool record_all, int cap) {
  if (c == FrameClass::IL)
    throw UsageError("IL has no extra condition or schema to sweep");
  Formula schema = *class_schema(c);

  SweepReport report;
  report.cls = c;
  report.max_worlds = max_worlds;
  report.direction = direction;

  for (int n = 1; n <= max_worlds; ++n) {
    FrameEnumerator e(n, std::nullopt, cap);
    std::uint64_t index = 0;
    while (auto fr = e.next()) {
      auto condition_witness = check_condition(*fr, c);
      bool condition = !condition_witness.has_value();
      FrameValidity validity = frame_valid(*fr, schema, valuation_budget);

      ++report.frames_checked;
      if (condition) ++report.condition_true;
      if (validity.valid) ++report.schema_valid_count;

      SweepRecord record{n, index, condition, validity.valid};
      if (record_all) report.records.push_back(record);

      bool disagree = direction == SweepDirection::Both ? condition != validity.valid
                                                        : (condition && !validity.valid);
      if (disagree)
        report.disagreements.push_back(SweepDisagreement{
            record, std::move(condition_witness), std::move(validity.witness), std::move(*fr)});
      ++index;
    }
  }
  return report;
}

std::string format_report(const SweepReport& report, bool machine) {
  std::ostringstream os;
  if (machine) {
    for (const auto& r : report.records)
      os << report.max_worlds << " " << frame_class_name(report.cls) << " " << r.size << " "
         << r.index << " condition=" << (r.condition_holds ? 1 : 0)
         << " valid=" << (r.schema_valid ? 1 : 0)
         << " agree=" << (r.condition_holds == r.schema_valid ? 1 : 0) << "\n";
    return os.str();
  }

  os << "correspondence sweep: class " << frame_class_name(report.cls) << ", frames up to "
     << report.max_worlds << " worlds, direction "
     << (report.direction == SweepDirection::Both ? "both" : "soundness-only") << "\n";
  os << "frames checked: " << report.frames_checked << " (condition holds on "
     << report.condition_true << ", schema valid on " << report.schema_valid_count << ")\n";
  if (report.disagreements.empty()) {
    os << "disagreements: none\n";
    return os.str();
  }
  os << "disagreements: " << report.disagreements.size() << "\n";
  for (const auto& d : report.disagreements) {
    os << "  frame " << d.record.size << "/" << d.record.index << ": condition "
       << (d.record.condition_holds ? "holds" : "fails") << ", schema "
       << (d.record.schema_valid ? "valid" : "invalid") << "\n";
    if (d.condition_witness) os << "    " << d.condition_witness->to_string(d.frame) << "\n";
    if (d.validity_witness) {
      os << "    countervaluation at world " << d.frame.world_name(d.validity_witness->world);
      for (const auto& [atom, mask] : d.validity_witness->valuation) {
        os << "; " << atom << " = {";
        bool first = true;
        for_bits(mask, [&](int w) {
          if (!first) os << ",";
          first = false;
          os << d.frame.world_name(w);
        });
        os << "}";
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace il
