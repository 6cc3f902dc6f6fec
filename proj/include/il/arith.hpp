#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "il/errors.hpp"

namespace il {

using BigInt = boost::multiprecision::cpp_int;

// Ordered alphabet of distinct single-codepoint symbols.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);
  static Alphabet from_string(std::string_view utf8);  // one symbol per codepoint

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int i) const { return symbols_[static_cast<std::size_t>(i)]; }

  // Splits s into symbol indices; UsageError on a foreign symbol.
  std::vector<int> decode(std::string_view s) const;

 private:
  std::vector<std::string> symbols_;
};

// Goedelnumber of s: its 0-based position in the enumeration of all strings
// ordered by length, then alphabetically. Equals the bijective base-A value
// of s with digit values 1..A; gn("") = 0.
BigInt gn(const Alphabet& alpha, std::string_view s);

// Inverse of gn.
std::string ungn(const Alphabet& alpha, const BigInt& k);

// Binary numeral terms over 0, S and binary multiplication.
class NumeralTerm {
 public:
  enum class Op : unsigned char { Zero, Succ, Mul };

  Op op() const;
  NumeralTerm child() const;  // Succ
  NumeralTerm lhs() const;    // Mul
  NumeralTerm rhs() const;    // Mul

  static NumeralTerm zero();
  static NumeralTerm succ(NumeralTerm t);
  static NumeralTerm mul(NumeralTerm l, NumeralTerm r);

  friend bool operator==(const NumeralTerm& a, const NumeralTerm& b);

 private:
  struct Node;
  explicit NumeralTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// num(0) = 0, num(2n+1) = S(SS0 * num(n)), num(2n+2) = SS0 * num(n+1).
NumeralTerm numeral(const BigInt& n);

BigInt eval(const NumeralTerm& t);

// ASCII rendering over the symbols 0 S * ( ): S's argument is parenthesized
// when it is a product; the right factor of * is parenthesized unless it
// is 0.
std::string render(const NumeralTerm& t);

// The term alphabet used for numeral codes in the growth report.
const Alphabet& term_alphabet();

inline constexpr std::uint64_t kDefaultBitBudget = 1'000'000;

// 2^(floor(log2 x))^2 for x >= 1; omega1(0) = 1. ResourceError when the
// result would exceed the bit budget.
BigInt omega1(const BigInt& x, std::uint64_t bit_budget = kDefaultBitBudget);

struct GrowthRow {
  unsigned exponent = 0;  // j, the row's n is 2^j
  BigInt n;
  std::size_t rendered_len = 0;      // L(n), symbols in the rendered numeral
  std::size_t code_bits = 0;         // B(n), bit length of its goedelnumber
  double len_per_log = 0.0;          // L(n) / log2 n
  double bits_per_log = 0.0;         // B(n) / log2 n
  std::uint64_t unary_len = 0;       // n+1 symbols: SS...S0
  double unary_code_bits = 0.0;      // ~ (n+1) log2 A, the exponential baseline
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  // max over rows of B(n)/log2 n; the empirical exponent k in "n^k".
  double fitted_k = 0.0;
  // Least-squares fit of L against log2 n over the first half of the rows;
  // the bound L(n) <= c1 log2 n + c2 is then checked on every row.
  double c1 = 0.0, c2 = 0.0;
  bool length_bound_holds = false;
  // The B/log ratio does not grow across the range: its max over the second
  // half of the rows is no larger than over the first half.
  bool ratio_bounded = false;
};

// Rows at n = 2, 4, ..., up to n_max (n_max >= 4).
GrowthReport growth_report(const BigInt& n_max);

std::string format_growth(const GrowthReport& report);
std::string growth_csv(const GrowthReport& report);

}  // namespace il
