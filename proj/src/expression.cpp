#include "nlca/expression.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "nlca/error.hpp"

namespace nlca {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  RuleExpression parse() {
    expect_keyword("m");
    expect('=');
    const std::size_t m_pos = pos_;
    const std::uint64_t m = integer();
    if (m < 2 || m > Modulus::kMax) throw ParseError("modulus must lie in [2, 65536]", m_pos);
    expect(';');
    expect_keyword("d");
    expect('=');
    const std::size_t d_pos = pos_;
    const std::uint64_t d = integer();
    if (d > 64) throw ParseError("diameter too large", d_pos);
    expect(';');
    expect_keyword("f");
    expect('=');

    RuleExpression expr{Modulus(static_cast<std::uint32_t>(m)), static_cast<unsigned>(d), {}, std::string(text_)};
    expr.terms.push_back(term(expr.diameter));
    while (peek() == '+') {
      ++pos_;
      expr.terms.push_back(term(expr.diameter));
    }
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return expr;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void expect_keyword(std::string_view kw) {
    skip_space();
    if (text_.substr(pos_, kw.size()) != kw) throw ParseError("expected '" + std::string(kw) + "'", pos_);
    pos_ += kw.size();
  }

  std::uint64_t integer() {
    skip_space();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (std::numeric_limits<std::uint64_t>::max() - 9) / 10) throw ParseError("integer too large", start);
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected integer", start);
    return v;
  }

  ExprFactor factor(unsigned diameter) {
    skip_space();
    const std::size_t start = pos_;
    if (peek() != 'x') throw ParseError("expected variable", pos_);
    ++pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("expected variable index", pos_);
    const std::uint64_t var = integer();
    if (var < 1 || var > diameter + 1)
      throw ParseError("variable x" + std::to_string(var) + " outside x1..x" + std::to_string(diameter + 1), start);
    std::uint64_t exponent = 1;
    if (peek() == '^') {
      ++pos_;
      const std::size_t e_pos = pos_;
      exponent = integer();
      if (exponent > std::numeric_limits<std::uint32_t>::max()) throw ParseError("exponent too large", e_pos);
    }
    return ExprFactor{static_cast<unsigned>(var), static_cast<std::uint32_t>(exponent)};
  }

  ExprTerm term(unsigned diameter) {
    ExprTerm t;
    std::vector<ExprFactor> raw;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      t.coefficient = integer();
      if (peek() != '*') return t;
      ++pos_;
    }
    raw.push_back(factor(diameter));
    while (peek() == '*') {
      ++pos_;
      raw.push_back(factor(diameter));
    }
    // Merge repeated variables: x1*x1^2 is x1^3.
    std::sort(raw.begin(), raw.end(), [](const ExprFactor& a, const ExprFactor& b) { return a.variable < b.variable; });
    for (const ExprFactor& f : raw) {
      if (!t.factors.empty() && t.factors.back().variable == f.variable)
        t.factors.back().exponent += f.exponent;
      else
        t.factors.push_back(f);
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool mentions(const ExprTerm& t, unsigned j) {
  return std::any_of(t.factors.begin(), t.factors.end(), [j](const ExprFactor& f) { return f.variable == j; });
}

}  // namespace

RuleExpression parse_rule_expression(std::string_view source) { return Parser(source).parse(); }

Letter RuleExpression::evaluate(std::span<const Letter> window) const {
  Letter acc = 0;
  for (const ExprTerm& t : terms) {
    Letter v = modulus.reduce(static_cast<std::int64_t>(t.coefficient % modulus.value()));
    for (const ExprFactor& f : t.factors) v = modulus.mul(v, modulus.pow(window[f.variable - 1], f.exponent));
    acc = modulus.add(acc, v);
  }
  return acc;
}

std::optional<std::uint32_t> RuleExpression::raw_exponent_at(unsigned j) const {
  std::optional<std::uint32_t> exponent;
  std::uint64_t coefficient = 0;
  for (const ExprTerm& t : terms) {
    if (!mentions(t, j)) continue;
    if (t.factors.size() != 1 || t.factors.front().exponent == 0) return std::nullopt;
    const std::uint32_t q = t.factors.front().exponent;
    if (exponent && *exponent != q) return std::nullopt;
    exponent = q;
    coefficient = (coefficient + t.coefficient % modulus.value()) % modulus.value();
  }
  if (!exponent || coefficient == 0) return std::nullopt;
  return exponent;
}

std::optional<UniPoly> RuleExpression::raw_component_at(unsigned j) const {
  std::vector<Letter> coeffs;
  for (const ExprTerm& t : terms) {
    if (!mentions(t, j)) continue;
    if (t.factors.size() != 1) return std::nullopt;
    const std::uint32_t e = t.factors.front().exponent;
    if (e == 0) continue;
    if (e > (1u << 20)) return std::nullopt;
    if (coeffs.size() <= e) coeffs.resize(e + 1, 0);
    coeffs[e] = modulus.add(coeffs[e], static_cast<Letter>(t.coefficient % modulus.value()));
  }
  return UniPoly(modulus, std::move(coeffs));
}

RuleTable table_from_expression(const RuleExpression& expr, const Caps& caps) {
  return RuleTable::tabulate(
      expr.modulus, expr.diameter, [&](std::span<const Letter> w) { return expr.evaluate(w); }, caps);
}

RuleTable read_rule_table(std::istream& in, const Caps& caps) {
  std::int64_t m = 0, d = -1;
  if (!(in >> m >> d) || m < 2 || m > Modulus::kMax || d < 0 || d > 64)
    throw ParseError("table file header must be 'm d' with 2 <= m <= 65536", 0);
  const Modulus mod(static_cast<std::uint32_t>(m));
  const std::size_t n = RuleTable::checked_size(mod, static_cast<unsigned>(d), caps);
  std::vector<Letter> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t v = 0;
    if (!(in >> v)) throw ParseError("table file ended after " + std::to_string(i) + " entries", i);
    if (v < 0 || v >= m) throw ParseError("table entry " + std::to_string(v) + " outside Z_m", i);
    values[i] = static_cast<Letter>(v);
  }
  std::string trailing;
  if (in >> trailing) throw ParseError("trailing data after " + std::to_string(n) + " table entries", n);
  return RuleTable(mod, static_cast<unsigned>(d), std::move(values), caps);
}

void write_rule_table(std::ostream& out, const RuleTable& rule) {
  out << rule.modulus().value() << ' ' << rule.diameter() << '\n';
  const std::size_t m = rule.modulus().value();
  for (std::size_t i = 0; i < rule.size(); ++i) out << rule.at(i) << ((i + 1) % m == 0 ? '\n' : ' ');
}

}  // namespace nlca
