#pragma once

#include <stdexcept>
#include <string>

namespace il {

// Malformed input: bad CLI arguments, unresolved world names, preconditions
// violated by the caller.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured budget (valuation count, tautology atoms, bignum bits) would
// be exceeded. Never a silent wrong answer.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Positioned formula syntax error. Line and column are 1-based; column
// counts code points, not bytes.
struct SyntaxError : std::runtime_error {
  int line;
  int column;
  std::string expected;

  SyntaxError(const std::string& what, int line_, int column_, std::string expected_)
      : std::runtime_error(what), line(line_), column(column_), expected(std::move(expected_)) {}
};

}  // namespace il
