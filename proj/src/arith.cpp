#include "il/arith.hpp"

#include <cassert>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace il {

namespace {

// Splits UTF-8 into codepoint substrings. Throws on malformed input.
std::vector<std::string> codepoints(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + len > s.size()) throw UsageError("malformed UTF-8 input");
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw UsageError("alphabet must not be empty");
  std::set<std::string_view> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw UsageError("alphabet symbols must not be empty");
    if (!seen.insert(s).second) throw UsageError("duplicate alphabet symbol '" + s + "'");
  }
}

Alphabet Alphabet::from_string(std::string_view utf8) { return Alphabet(codepoints(utf8)); }

std::vector<int> Alphabet::decode(std::string_view s) const {
  std::vector<int> out;
  for (const auto& cp : codepoints(s)) {
    int idx = -1;
    for (int i = 0; i < size(); ++i)
      if (symbols_[static_cast<std::size_t>(i)] == cp) {
        idx = i;
        break;
      }
    if (idx < 0) throw UsageError("symbol '" + cp + "' is not in the alphabet");
    out.push_back(idx);
  }
  return out;
}

BigInt gn(const Alphabet& alpha, std::string_view s) {
  BigInt value = 0;
  const BigInt a = alpha.size();
  for (int digit : alpha.decode(s)) value = value * a + (digit + 1);
  return value;
}

std::string ungn(const Alphabet& alpha, const BigInt& k) {
  if (k < 0) throw UsageError("goedelnumbers are nonnegative");
  const BigInt a = alpha.size();
  BigInt rest = k;
  std::vector<int> digits;
  while (rest > 0) {
    BigInt d = (rest - 1) % a;  // digit value minus one, in 0..A-1
    digits.push_back(static_cast<int>(d));
    rest = (rest - 1) / a;
  }
  std::string out;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) out += alpha.symbol(*it);
  return out;
}

// ---------------------------------------------------------------------------
// Numeral terms

struct NumeralTerm::Node {
  Op op;
  NumeralTerm lhs, rhs;
};

NumeralTerm::Op NumeralTerm::op() const {
  assert(node_);
  return node_->op;
}

NumeralTerm NumeralTerm::child() const {
  assert(node_ && node_->op == Op::Succ);
  return node_->lhs;
}

NumeralTerm NumeralTerm::lhs() const {
  assert(node_ && node_->op == Op::Mul);
  return node_->lhs;
}

NumeralTerm NumeralTerm::rhs() const {
  assert(node_ && node_->op == Op::Mul);
  return node_->rhs;
}

NumeralTerm NumeralTerm::zero() {
  return NumeralTerm(std::make_shared<const Node>(Node{Op::Zero, NumeralTerm{nullptr}, NumeralTerm{nullptr}}));
}

NumeralTerm NumeralTerm::succ(NumeralTerm t) {
  return NumeralTerm(std::make_shared<const Node>(Node{Op::Succ, std::move(t), NumeralTerm{nullptr}}));
}

NumeralTerm NumeralTerm::mul(NumeralTerm l, NumeralTerm r) {
  return NumeralTerm(std::make_shared<const Node>(Node{Op::Mul, std::move(l), std::move(r)}));
}

bool operator==(const NumeralTerm& a, const NumeralTerm& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->op != b.node_->op) return false;
  switch (a.node_->op) {
    case NumeralTerm::Op::Zero: return true;
    case NumeralTerm::Op::Succ: return a.node_->lhs == b.node_->lhs;
    case NumeralTerm::Op::Mul:
      return a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
  }
  return false;
}

NumeralTerm numeral(const BigInt& n) {
  if (n < 0) throw UsageError("numerals are defined for nonnegative numbers");
  if (n == 0) return NumeralTerm::zero();
  NumeralTerm two = NumeralTerm::succ(NumeralTerm::succ(NumeralTerm::zero()));
  if ((n & 1) != 0)  // n = 2m+1
    return NumeralTerm::succ(NumeralTerm::mul(two, numeral((n - 1) / 2)));
  return NumeralTerm::mul(two, numeral(n / 2));  // n = 2m+2, n/2 = m+1
}

BigInt eval(const NumeralTerm& t) {
  switch (t.op()) {
    case NumeralTerm::Op::Zero: return 0;
    case NumeralTerm::Op::Succ: return eval(t.child()) + 1;
    case NumeralTerm::Op::Mul: return eval(t.lhs()) * eval(t.rhs());
  }
  return 0;  // unreachable
}

namespace {

void render_into(const NumeralTerm& t, std::string& out) {
  switch (t.op()) {
    case NumeralTerm::Op::Zero:
      out += '0';
      return;
    case NumeralTerm::Op::Succ: {
      out += 'S';
      NumeralTerm c = t.child();
      if (c.op() == NumeralTerm::Op::Mul) {
        out += '(';
        render_into(c, out);
        out += ')';
      } else {
        render_into(c, out);
      }
      return;
    }
    case NumeralTerm::Op::Mul: {
      NumeralTerm l = t.lhs(), r = t.rhs();
      if (l.op() == NumeralTerm::Op::Mul) {
        out += '(';
        render_into(l, out);
        out += ')';
      } else {
        render_into(l, out);
      }
      out += '*';
      if (r.op() == NumeralTerm::Op::Zero) {
        render_into(r, out);
      } else {
        out += '(';
        render_into(r, out);
        out += ')';
      }
      return;
    }
  }
}

}  // namespace

std::string render(const NumeralTerm& t) {
  std::string out;
  render_into(t, out);
  return out;
}

const Alphabet& term_alphabet() {
  static const Alphabet alpha({"0", "S", "*", "(", ")", ","});
  return alpha;
}

// ---------------------------------------------------------------------------
// omega1 and the growth report

namespace {

std::uint64_t floor_log2(const BigInt& x) {
  assert(x >= 1);
  return static_cast<std::uint64_t>(boost::multiprecision::msb(x));
}

}  // namespace

BigInt omega1(const BigInt& x, std::uint64_t bit_budget) {
  if (x < 0) throw UsageError("omega1 is defined for nonnegative numbers");
  if (x <= 1) return 1;  // omega1(0) = 1 by convention; log2(1) = 0
  std::uint64_t l = floor_log2(x);
  if (l >= (std::uint64_t{1} << 32))
    throw ResourceError("omega1 exponent overflows");
  std::uint64_t exponent = l * l;
  if (exponent + 1 > bit_budget)
    throw ResourceError("omega1 result needs " + std::to_string(exponent + 1) +
                        " bits, over the budget of " + std::to_string(bit_budget));
  return BigInt(1) << exponent;
}

GrowthReport growth_report(const BigInt& n_max) {
  if (n_max < 4) throw UsageError("growth report needs n_max >= 4");
  const Alphabet& alpha = term_alphabet();
  const double log2_a = std::log2(static_cast<double>(alpha.size()));

  GrowthReport report;
  BigInt n = 2;
  unsigned j = 1;
  while (n <= n_max) {
    GrowthRow row;
    row.exponent = j;
    row.n = n;
    std::string rendered = render(numeral(n));
    row.rendered_len = rendered.size();  // term symbols are single bytes
    BigInt code = gn(alpha, rendered);
    row.code_bits = code == 0 ? 0 : static_cast<std::size_t>(floor_log2(code)) + 1;
    row.len_per_log = static_cast<double>(row.rendered_len) / j;
    row.bits_per_log = static_cast<double>(row.code_bits) / j;
    row.unary_len = (std::uint64_t{1} << j) + 1;
    row.unary_code_bits = static_cast<double>(row.unary_len) * log2_a;
    report.rows.push_back(std::move(row));
    n <<= 1;
    ++j;
  }

  for (const auto& row : report.rows) report.fitted_k = std::max(report.fitted_k, row.bits_per_log);

  // Least-squares fit of L against log2 n over the first half, bound checked
  // everywhere: a superlogarithmic L would break the bound on the later rows.
  std::size_t half = std::max<std::size_t>(2, report.rows.size() / 2);
  half = std::min(half, report.rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < half; ++i) {
    double x = report.rows[i].exponent;
    double y = static_cast<double>(report.rows[i].rendered_len);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double m = static_cast<double>(half);
  double denom = m * sxx - sx * sx;
  report.c1 = denom != 0 ? (m * sxy - sx * sy) / denom : 0;
  report.c2 = (sy - report.c1 * sx) / m;

  report.length_bound_holds = true;
  for (const auto& row : report.rows)
    if (static_cast<double>(row.rendered_len) > report.c1 * row.exponent + report.c2 + 1e-6)
      report.length_bound_holds = false;

  double first_max = 0, second_max = 0;
  for (std::size_t i = 0; i < report.rows.size(); ++i)
    (i < half ? first_max : second_max) =
        std::max(i < half ? first_max : second_max, report.rows[i].bits_per_log);
  report.ratio_bounded = report.rows.size() <= half || second_max <= first_max + 1e-9;

  return report;
}

std::string format_growth(const GrowthReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "n = 2^j; L = rendered numeral length; B = bits of its goedelnumber\n";
  os << std::setw(4) << "j" << std::setw(10) << "n" << std::setw(8) << "L" << std::setw(8) << "B"
     << std::setw(12) << "L/log2n" << std::setw(12) << "B/log2n" << std::setw(12) << "unary_L"
     << std::setw(14) << "unary_B(est)" << "\n";
  for (const auto& row : report.rows)
    os << std::setw(4) << row.exponent << std::setw(10) << row.n << std::setw(8)
       << row.rendered_len << std::setw(8) << row.code_bits << std::setw(12) << row.len_per_log
       << std::setw(12) << row.bits_per_log << std::setw(12) << row.unary_len << std::setw(14)
       << row.unary_code_bits << "\n";
  os << "fitted k = max B/log2 n = " << report.fitted_k << "\n";
  os << "length fit: L <= " << report.c1 << " * log2 n + " << report.c2 << " ... "
     << (report.length_bound_holds ? "holds" : "VIOLATED") << "\n";
  os << "B/log2 n bounded across the range: " << (report.ratio_bounded ? "yes" : "NO") << "\n";
  return os.str();
}

std::string growth_csv(const GrowthReport& report) {
  std::ostringstream os;
  os << "j,n,len,bits,len_per_log,bits_per_log,unary_len,unary_bits_est\n";
  os << std::setprecision(6);
  for (const auto& row : report.rows)
    os << row.exponent << "," << row.n << "," << row.rendered_len << "," << row.code_bits << ","
       << row.len_per_log << "," << row.bits_per_log << "," << row.unary_len << ","
       << row.unary_code_bits << "\n";
  return os.str();
}

}  // namespace il
