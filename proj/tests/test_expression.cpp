#include <sstream>

#include "doctest.h"
#include "nlca/error.hpp"
#include "nlca/expression.hpp"

using namespace nlca;

TEST_CASE("parser accepts the documented grammar") {
  const RuleExpression e = parse_rule_expression("  m = 7 ;d=2;  f = x1 ^ 4 + 3 * x2  ");
  CHECK(e.modulus.value() == 7);
  CHECK(e.diameter == 2);
  REQUIRE(e.terms.size() == 2);
  CHECK(e.terms[0].coefficient == 1);
  CHECK(e.terms[0].factors == std::vector<ExprFactor>{{1, 4}});
  CHECK(e.terms[1].coefficient == 3);
  CHECK(e.terms[1].factors == std::vector<ExprFactor>{{2, 1}});
}

TEST_CASE("constants and products") {
  const RuleExpression e = parse_rule_expression("m=5; d=2; f=4 + 2*x1*x3^2 + x3*x1");
  REQUIRE(e.terms.size() == 3);
  CHECK(e.terms[0].factors.empty());
  CHECK(e.terms[0].coefficient == 4);
  CHECK(e.terms[2].factors == std::vector<ExprFactor>{{1, 1}, {3, 1}});
  const Word w{2, 0, 3};
  // 4 + 2*2*9 + 3*2 = 46 = 1 mod 5
  CHECK(e.evaluate(w) == 1);
  // Repeated variables merge.
  const RuleExpression r = parse_rule_expression("m=7; d=0; f=x1*x1^2");
  CHECK(r.terms[0].factors == std::vector<ExprFactor>{{1, 3}});
}

TEST_CASE("zero exponent evaluates with 0^0 = 1") {
  const RuleTable t = table_from_expression(parse_rule_expression("m=3; d=0; f=x1^0"));
  CHECK(std::vector<Letter>(t.values().begin(), t.values().end()) == std::vector<Letter>{1, 1, 1});
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const char* text) -> std::size_t {
    try {
      parse_rule_expression(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return static_cast<std::size_t>(-1);
  };
  CHECK(position_of("m=3; d=1; f=x3") == 12);
  CHECK(position_of("m=3; d=1; f=x0") == 12);
  CHECK(position_of("m=3; d=1; f=x1+") == 15);
  CHECK(position_of("m=3; d=1; f=x1 x2") == 15);
  CHECK(position_of("d=1; m=3; f=x1") == 0);
  CHECK(position_of("m=3; d=1") == 8);
  CHECK(position_of("m=1; d=1; f=x1") == 2);
  CHECK_THROWS_AS(parse_rule_expression("m=3; d=1; f=y1"), ParseError);
  CHECK_THROWS_AS(parse_rule_expression("m=3; d=1; f=x1^"), ParseError);
  CHECK_THROWS_AS(parse_rule_expression("m=3; d=99999999999999999999; f=x1"), ParseError);
}

TEST_CASE("raw exponents") {
  const RuleExpression e = parse_rule_expression("m=4; d=2; f=x1^3 + 2*x1^3 + x2*x3 + 3");
  CHECK(e.raw_exponent_at(1) == std::uint32_t{3});
  CHECK_FALSE(e.raw_exponent_at(2).has_value());
  CHECK_FALSE(e.raw_exponent_at(3).has_value());
  // Cancelling coefficients: 2 + 2 = 0 mod 4.
  CHECK_FALSE(parse_rule_expression("m=4; d=0; f=2*x1+2*x1").raw_exponent_at(1).has_value());
  // Mixed exponents at one position.
  CHECK_FALSE(parse_rule_expression("m=5; d=0; f=x1+x1^2").raw_exponent_at(1).has_value());
  CHECK(parse_rule_expression("m=5; d=0; f=x1^9").raw_exponent_at(1) == std::uint32_t{9});
}

TEST_CASE("raw components") {
  const RuleExpression e = parse_rule_expression("m=5; d=1; f=x1^3+2*x1+x1^2+4+x2");
  CHECK(e.raw_component_at(1) == UniPoly(Modulus(5), {0, 2, 1, 1}));
  CHECK(e.raw_component_at(2) == UniPoly(Modulus(5), {0, 1}));
  CHECK_FALSE(parse_rule_expression("m=5; d=1; f=x1*x2").raw_component_at(1).has_value());
  CHECK(parse_rule_expression("m=5; d=1; f=x1").raw_component_at(2) == UniPoly::zero(Modulus(5)));
}

TEST_CASE("table files round-trip") {
  const RuleTable t = table_from_expression(parse_rule_expression("m=3; d=1; f=x1^2+2*x2"));
  std::ostringstream out;
  write_rule_table(out, t);
  std::istringstream in(out.str());
  CHECK(read_rule_table(in) == t);
}

TEST_CASE("table file errors") {
  std::istringstream short_file("3 1\n0 1 2\n");
  CHECK_THROWS_AS(read_rule_table(short_file), ParseError);
  std::istringstream trailing("2 0\n0 1 1\n");
  CHECK_THROWS_AS(read_rule_table(trailing), ParseError);
  std::istringstream junk("2 0\n0 x\n");
  CHECK_THROWS_AS(read_rule_table(junk), ParseError);
  std::istringstream range("2 0\n0 2\n");
  CHECK_THROWS(read_rule_table(range));
  std::istringstream header("two 0\n0 1\n");
  CHECK_THROWS_AS(read_rule_table(header), ParseError);
}
