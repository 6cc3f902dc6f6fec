#include "il/closure.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

#include "textio.hpp"

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

std::string cycle_message(const std::vector<std::string>& cycle) {
  std::string msg = "sketch closure has an R-cycle:";
  for (const auto& w : cycle) msg += " " + w;
  if (!cycle.empty()) msg += " " + cycle.front();
  return msg;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle_)
    : std::runtime_error(cycle_message(cycle_)), cycle(std::move(cycle_)) {}

Frame close(const Sketch& sk, RuleSet rules) {
  int n = static_cast<int>(sk.worlds.size());
  if (n > kMaxWorlds) throw UsageError("too many worlds in sketch");
  {
    std::set<std::string_view> seen;
    for (const auto& w : sk.worlds)
      if (!seen.insert(w).second) throw UsageError("duplicate world name '" + w + "'");
  }
  auto check = [&](int i) {
    if (i < 0 || i >= n) throw UsageError("sketch fact refers to an undeclared world");
  };

  std::vector<WorldMask> r(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<WorldMask>> s(static_cast<std::size_t>(n),
                                        std::vector<WorldMask>(static_cast<std::size_t>(n), 0));
  for (auto [a, b] : sk.r_facts) {
    check(a);
    check(b);
    r[static_cast<std::size_t>(a)] |= bit(b);
  }
  for (auto [w, a, b] : sk.s_facts) {
    check(w);
    check(a);
    check(b);
    s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)] |= bit(b);
  }

  // Naive iteration to fixpoint; universes are tiny.
  bool changed = true;
  auto add_r = [&](int a, int b) {
    if ((r[static_cast<std::size_t>(a)] & bit(b)) == 0) {
      r[static_cast<std::size_t>(a)] |= bit(b);
      changed = true;
    }
  };
  auto add_s = [&](int w, int a, int b) {
    if ((s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)] & bit(b)) == 0) {
      s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)] |= bit(b);
      changed = true;
    }
  };
  while (changed) {
    changed = false;
    // (i) R-transitivity.
    for (int a = 0; a < n; ++a)
      for_bits(r[static_cast<std::size_t>(a)], [&](int b) {
        for_bits(r[static_cast<std::size_t>(b)] & ~r[static_cast<std::size_t>(a)],
                 [&](int c) { add_r(a, c); });
      });
    // (ii) membership repair: a S_w b => wRa and wRb.
    for (int w = 0; w < n; ++w)
      for (int a = 0; a < n; ++a) {
        WorldMask row = s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)];
        if (row == 0) continue;
        add_r(w, a);
        for_bits(row, [&](int b) { add_r(w, b); });
      }
    // (iii) S-reflexivity on successors.
    for (int w = 0; w < n; ++w)
      for_bits(r[static_cast<std::size_t>(w)], [&](int a) { add_s(w, a, a); });
    // (iv) R-inclusion: wRa, aRb => a S_w b.
    for (int w = 0; w < n; ++w)
      for_bits(r[static_cast<std::size_t>(w)], [&](int a) {
        for_bits(r[static_cast<std::size_t>(a)] & r[static_cast<std::size_t>(w)],
                 [&](int b) { add_s(w, a, b); });
      });
    // (v) S-transitivity.
    for (int w = 0; w < n; ++w)
      for (int a = 0; a < n; ++a)
        for_bits(s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)], [&](int b) {
          for_bits(s[static_cast<std::size_t>(w)][static_cast<std::size_t>(b)] &
                       ~s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)],
                   [&](int c) { add_s(w, a, c); });
        });
    // (vi) M rule: xRy, yS_xz, zRu => yRu.
    if (rules.m_rule)
      for (int x = 0; x < n; ++x)
        for_bits(r[static_cast<std::size_t>(x)], [&](int y) {
          for_bits(s[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)], [&](int z) {
            for_bits(r[static_cast<std::size_t>(z)] & ~r[static_cast<std::size_t>(y)],
                     [&](int u) { add_r(y, u); });
          });
        });
    // (vii) P rule: xRy, yRz, zS_xu => z S_y u.
    if (rules.p_rule)
      for (int x = 0; x < n; ++x)
        for_bits(r[static_cast<std::size_t>(x)], [&](int y) {
          for_bits(r[static_cast<std::size_t>(y)], [&](int z) {
            for_bits(s[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)],
                     [&](int u) { add_s(y, z, u); });
          });
        });
  }

  // Cycle check on the closed R.
  {
    std::vector<int> state(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    std::vector<int> cycle;
    auto dfs = [&](auto&& self, int v) -> bool {
      state[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
      bool found = false;
      for_bits(r[static_cast<std::size_t>(v)], [&](int u) {
        if (found) return;
        if (state[static_cast<std::size_t>(u)] == 1) {
          auto it = std::find(stack.begin(), stack.end(), u);
          cycle.assign(it, stack.end());
          found = true;
        } else if (state[static_cast<std::size_t>(u)] == 0 && self(self, u)) {
          found = true;
        }
      });
      stack.pop_back();
      state[static_cast<std::size_t>(v)] = 2;
      return found;
    };
    for (int v = 0; v < n; ++v)
      if (state[static_cast<std::size_t>(v)] == 0 && dfs(dfs, v)) {
        std::vector<std::string> names;
        for (int w : cycle) names.push_back(sk.worlds[static_cast<std::size_t>(w)]);
        throw CycleError(std::move(names));
      }
  }

  Frame fr(sk.worlds);
  for (int a = 0; a < n; ++a)
    for_bits(r[static_cast<std::size_t>(a)], [&](int b) { fr.add_r(a, b); });
  for (int w = 0; w < n; ++w)
    for (int a = 0; a < n; ++a)
      for_bits(s[static_cast<std::size_t>(w)][static_cast<std::size_t>(a)],
               [&](int b) { fr.add_s(w, a, b); });
  return fr;
}

ClosureQuery parse_query(std::string_view text) {
  std::istringstream ss{std::string(text)};
  std::string kind;
  ClosureQuery q;
  if (!(ss >> kind)) throw UsageError("empty query");
  auto rest = [&](int count) {
    std::vector<std::string> args;
    std::string tok;
    while (ss >> tok) args.push_back(tok);
    if (static_cast<int>(args.size()) != count)
      throw UsageError("query '" + kind + "' takes " + std::to_string(count) + " world name(s)");
    return args;
  };
  if (kind == "r") {
    auto args = rest(2);
    q.kind = ClosureQuery::Kind::R;
    q.a = args[0];
    q.b = args[1];
  } else if (kind == "s") {
    auto args = rest(3);
    q.kind = ClosureQuery::Kind::S;
    q.base = args[0];
    q.a = args[1];
    q.b = args[2];
  } else if (kind == "exists-mid") {
    auto args = rest(2);
    q.kind = ClosureQuery::Kind::ExistsMid;
    q.a = args[0];
    q.b = args[1];
  } else {
    throw UsageError("unknown query '" + kind + "'; expected r, s or exists-mid");
  }
  return q;
}

bool holds_in_closure(const Sketch& sk, RuleSet rules, const ClosureQuery& q) {
  Frame fr = close(sk, rules);
  int a = fr.require_world(q.a);
  int b = fr.require_world(q.b);
  switch (q.kind) {
    case ClosureQuery::Kind::R:
      return fr.has_r(a, b);
    case ClosureQuery::Kind::S:
      return fr.has_s(fr.require_world(q.base), a, b);
    case ClosureQuery::Kind::ExistsMid: {
      bool found = false;
      for_bits(fr.successors(a), [&](int w) {
        if (!found && fr.has_r(w, b)) found = true;
      });
      return found;
    }
  }
  return false;  // unreachable
}

Sketch parse_sketch(std::istream& in) {
  auto lines = textio::read_lines(in);
  if (lines.empty()) throw UsageError("empty file; expected a 'sketch' header");
  if (lines.front().tokens[0] != "sketch")
    textio::fail(lines.front(), "expected 'sketch' header");
  textio::expect_arity(lines.front(), 1);

  Sketch sk;
  auto index = [&](const textio::Line& line, const std::string& name) {
    auto it = std::find(sk.worlds.begin(), sk.worlds.end(), name);
    if (it == sk.worlds.end()) textio::fail(line, "unknown world '" + name + "'");
    return static_cast<int>(it - sk.worlds.begin());
  };

  bool ended = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (ended) textio::fail(line, "content after 'end'");
    const std::string& kw = line.tokens[0];
    if (kw == "world") {
      textio::expect_arity(line, 2);
      sk.worlds.push_back(line.tokens[1]);
    } else if (kw == "r") {
      textio::expect_arity(line, 3);
      sk.r_facts.emplace_back(index(line, line.tokens[1]), index(line, line.tokens[2]));
    } else if (kw == "s") {
      textio::expect_arity(line, 4);
      sk.s_facts.emplace_back(index(line, line.tokens[1]), index(line, line.tokens[2]),
                              index(line, line.tokens[3]));
    } else if (kw == "end") {
      textio::expect_arity(line, 1);
      ended = true;
    } else {
      textio::fail(line, "unknown keyword '" + kw + "'");
    }
  }
  return sk;
}

Sketch load_sketch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return parse_sketch(in);
}

}  // namespace il
