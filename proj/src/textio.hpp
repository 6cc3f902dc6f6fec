#pragma once

// Internal helpers for the line-oriented file formats.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "il/errors.hpp"

namespace il::textio {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

// Splits the stream into token lines, dropping '#' comments and blank lines.
inline std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] inline void fail(const Line& line, const std::string& what) {
  throw UsageError("line " + std::to_string(line.number) + ": " + what);
}

inline void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n)
    fail(line, "expected " + std::to_string(n - 1) + " argument(s) after '" + line.tokens[0] + "'");
}

}  // namespace il::textio
