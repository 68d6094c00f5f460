#pragma once

// Rule expressions of the form
//   m=INT; d=INT; f=expr
//   expr   := term ("+" term)*
//   term   := INT | [INT "*"] factor ("*" factor)*
//   factor := VAR | VAR "^" INT      VAR := "x" INT   (x1 .. x(d+1))
// Whitespace is ignored between tokens.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nlca/caps.hpp"
#include "nlca/poly.hpp"
#include "nlca/rule.hpp"

namespace nlca {

struct ExprFactor {
  unsigned variable;        // 1-based window position
  std::uint32_t exponent;   // raw, as written
  friend bool operator==(const ExprFactor&, const ExprFactor&) = default;
};

struct ExprTerm {
  std::uint64_t coefficient = 1;
  std::vector<ExprFactor> factors;  // one entry per distinct variable, increasing
  friend bool operator==(const ExprTerm&, const ExprTerm&) = default;
};

struct RuleExpression {
  Modulus modulus;
  unsigned diameter;
  std::vector<ExprTerm> terms;
  std::string source;

  Letter evaluate(std::span<const Letter> window) const;

  // Raw exponent q when every term mentioning x_j is a pure power x_j^q with
  // one common q >= 1 and the summed coefficient is non-zero mod m.
  std::optional<std::uint32_t> raw_exponent_at(unsigned position) const;

  // Univariate polynomial formed by the pure x_j terms, when no term mixes
  // x_j with another variable. Constant terms are excluded.
  std::optional<UniPoly> raw_component_at(unsigned position) const;
};

// Throws ParseError (with byte offset) on malformed input, an out-of-range
// modulus or variables outside x1..x(d+1).
RuleExpression parse_rule_expression(std::string_view source);

RuleTable table_from_expression(const RuleExpression& expr, const Caps& caps = {});

// Table file: first line "m d", then m^(d+1) whitespace-separated letters in
// window order.
RuleTable read_rule_table(std::istream& in, const Caps& caps = {});
void write_rule_table(std::ostream& out, const RuleTable& rule);

}  // namespace nlca
