#include <numeric>
#include <random>

#include "doctest.h"
#include "nlca/criteria.hpp"
#include "nlca/expression.hpp"
#include "oracles.hpp"

using namespace nlca;

namespace {
AnalysisReport run(const std::string& text) {
  const RuleExpression e = parse_rule_expression(text);
  const RawForm raw = RawForm::from_expression(e);
  return analyze(table_from_expression(e), &raw, text);
}

const CriterionVerdict& verdict(const AnalysisReport& r, const std::string& id, unsigned position = 0) {
  for (const auto& v : r.audit.criteria)
    if (v.id == id && v.position == position) return v;
  FAIL("missing criterion " << id);
  throw 0;
}

bool flagged(const AnalysisReport& r, const std::string& id, unsigned position, const std::string& variant) {
  for (const auto& d : r.audit.discrepancies)
    if (d.criterion == id && d.position == position && d.variant == variant) return true;
  return false;
}

bool flagged(const AnalysisReport& r, const std::string& id) {
  for (const auto& d : r.audit.discrepancies)
    if (d.criterion == id) return true;
  return false;
}
}  // namespace

TEST_CASE("verdict and property names round-trip") {
  for (Verdict v : {Verdict::Holds, Verdict::Fails, Verdict::NotApplicable})
    CHECK(verdict_from_string(to_string(v)) == v);
  for (Property p : {Property::Permutive, Property::Surjective, Property::Injective})
    CHECK(property_from_string(to_string(p)) == p);
  CHECK_THROWS(verdict_from_string("maybe"));
}

TEST_CASE("totient permutivity") {
  const AnalysisReport a = run("m=7; d=2; f=x1^4+3*x2");
  CHECK(verdict(a, "totient_permutivity", 2).value == Verdict::Holds);
  CHECK(a.audit.deciders.permutive[1]);
  CHECK_FALSE(flagged(a, "totient_permutivity", 2, "raw"));
  CHECK(verdict(a, "totient_permutivity", 3).value == Verdict::NotApplicable);
  CHECK_FALSE(verdict(a, "totient_permutivity", 3).note.empty());

  const AnalysisReport b = run("m=4; d=0; f=x1^3");
  CHECK(verdict(b, "totient_permutivity", 1).value == Verdict::Holds);
  CHECK_FALSE(b.audit.deciders.permutive[0]);
  CHECK(flagged(b, "totient_permutivity", 1, "raw"));
  CHECK(flagged(b, "totient_permutivity", 1, "canonical"));

  // Non-unit coefficient.
  const AnalysisReport c = run("m=4; d=0; f=2*x1");
  CHECK(verdict(c, "totient_permutivity", 1).value == Verdict::NotApplicable);
}

TEST_CASE("hermite permutivity") {
  const AnalysisReport a = run("m=5; d=1; f=x1+x2^2");
  CHECK(verdict(a, "hermite_permutivity", 1).value == Verdict::Holds);
  CHECK(verdict(a, "hermite_permutivity", 2).value == Verdict::Fails);
  CHECK(a.audit.discrepancies.empty());

  const AnalysisReport b = run("m=5; d=0; f=x1^3");
  CHECK(verdict(b, "hermite_permutivity", 1).value == Verdict::Fails);
  CHECK(b.audit.deciders.permutive[0]);
  CHECK(flagged(b, "hermite_permutivity", 1, "raw"));
  CHECK(flagged(b, "hermite_permutivity", 1, "canonical"));

  CHECK(verdict(run("m=4; d=0; f=x1"), "hermite_permutivity", 1).value == Verdict::NotApplicable);

  // Raw x^5 has degree >= p; the interpolated component is x.
  const AnalysisReport c = run("m=5; d=0; f=x1^5");
  const CriterionVerdict& h = verdict(c, "hermite_permutivity", 1);
  CHECK(h.value == Verdict::Fails);
  CHECK(h.canonical == Verdict::Holds);
  CHECK(flagged(c, "hermite_permutivity", 1, "raw"));
  CHECK_FALSE(flagged(c, "hermite_permutivity", 1, "canonical"));

  // Non-monomial separable component.
  const AnalysisReport d = run("m=7; d=1; f=x1^4+3*x1+x2");
  CHECK(verdict(d, "hermite_permutivity", 1).value != Verdict::NotApplicable);
  CHECK(verdict(d, "totient_permutivity", 1).value == Verdict::NotApplicable);
  // Not separable at all.
  CHECK(verdict(run("m=7; d=1; f=x1*x2"), "hermite_permutivity", 1).value == Verdict::NotApplicable);
}

TEST_CASE("surjectivity sufficient condition") {
  const AnalysisReport a = run("m=7; d=2; f=x1^4+3*x2");
  CHECK(verdict(a, "surjectivity_sufficient").value == Verdict::Holds);
  CHECK(a.audit.deciders.surjective);

  const AnalysisReport b = run("m=4; d=2; f=x1^2+x2+x3^2");
  CHECK(verdict(b, "surjectivity_sufficient").value == Verdict::Fails);
  CHECK(b.audit.deciders.surjective);
  CHECK_FALSE(flagged(b, "surjectivity_sufficient"));

  const AnalysisReport c = run("m=4; d=1; f=x1^3+x2^3");
  CHECK(verdict(c, "surjectivity_sufficient").value == Verdict::Holds);
  CHECK_FALSE(c.audit.deciders.surjective);
  CHECK(flagged(c, "surjectivity_sufficient", 0, "raw"));

  CHECK(verdict(run("m=3; d=2; f=x1*x3+x2"), "surjectivity_sufficient").value == Verdict::NotApplicable);
  CHECK(verdict(run("m=2; d=1; f=x1+x2"), "surjectivity_sufficient").value == Verdict::NotApplicable);
}

TEST_CASE("non-permutation characterization") {
  const AnalysisReport a = run("m=3; d=1; f=x1^2+x2^2");
  CHECK(verdict(a, "pp_characterization.clause2").value == Verdict::Fails);
  CHECK_FALSE(a.audit.deciders.surjective);
  CHECK_FALSE(flagged(a, "pp_characterization.clause2"));

  const AnalysisReport b = run("m=7; d=2; f=x1^4+3*x2");
  CHECK(verdict(b, "pp_characterization.clause1").value == Verdict::NotApplicable);

  const AnalysisReport c = run("m=5; d=1; f=x1^3+x2");
  CHECK(verdict(c, "pp_characterization.clause2").value == Verdict::Holds);
  CHECK(c.audit.deciders.surjective);

  // Interior x2^2 is not a permutation of Z_5: clause 1 applies.
  const AnalysisReport d = run("m=5; d=2; f=x1^2+x2^2+x3^2");
  CHECK(verdict(d, "pp_characterization.clause1").value == Verdict::Fails);
  CHECK_FALSE(d.audit.deciders.surjective);
  CHECK_FALSE(flagged(d, "pp_characterization.clause1"));
  // Interior 2*x2 is a permutation: clause 1 does not apply.
  CHECK(verdict(run("m=5; d=2; f=x1^2+2*x2+x3^2"), "pp_characterization.clause1").value == Verdict::NotApplicable);
  CHECK(verdict(run("m=4; d=2; f=x1+x2^2+x3"), "pp_characterization.clause1").value == Verdict::NotApplicable);
}

TEST_CASE("permutation maps by solution counting") {
  const Modulus m(3);
  CHECK(is_permutation_map(ResidualMap{m, {2}, {1, 2, 0}}));
  CHECK_FALSE(is_permutation_map(ResidualMap{m, {2}, {0, 1, 1}}));
  // x + y over Z_3: every value has 3 solutions.
  CHECK(is_permutation_map(ResidualMap{m, {2, 3}, {0, 1, 2, 1, 2, 0, 2, 0, 1}}));
  CHECK_FALSE(is_permutation_map(ResidualMap{m, {2, 3}, {0, 0, 0, 0, 1, 2, 0, 2, 1}}));
  CHECK_FALSE(is_permutation_map(ResidualMap{m, {}, {0}}));
}

TEST_CASE("injectivity criteria") {
  for (std::uint32_t m : {3u, 4u, 6u, 7u}) {
    const AnalysisReport a = run("m=" + std::to_string(m) + "; d=2; f=x2");
    CHECK(verdict(a, "injectivity").value == Verdict::Holds);
    CHECK(a.audit.deciders.injective);
  }
  // The LR-separated criteria assume m >= 3.
  CHECK(verdict(run("m=2; d=2; f=x2"), "injectivity").value == Verdict::NotApplicable);
  const AnalysisReport b = run("m=7; d=2; f=x1^4+3*x2");
  CHECK(verdict(b, "injectivity").value == Verdict::Fails);
  CHECK_FALSE(b.audit.deciders.injective);

  const AnalysisReport c = run("m=4; d=0; f=x1^3");
  CHECK(verdict(c, "injectivity").value == Verdict::Holds);
  CHECK_FALSE(c.audit.deciders.injective);
  CHECK(flagged(c, "injectivity", 0, "raw"));

  const CriterionVerdict& corollary = verdict(b, "bijectivity_corollary");
  CHECK(corollary.value == verdict(b, "injectivity").value);
  CHECK(corollary.note.find("as-printed ambiguous") != std::string::npos);
}

TEST_CASE("even exponents") {
  const AnalysisReport a = run("m=3; d=1; f=x1^2+x2^2");
  CHECK(verdict(a, "even_exponents").value == Verdict::Holds);
  CHECK(verdict(a, "even_exponents.injectivity").value == Verdict::Holds);
  CHECK_FALSE(a.audit.deciders.surjective);

  const AnalysisReport b = run("m=5; d=2; f=x1^2+x2^4+x3^2");
  CHECK(verdict(b, "even_exponents").value == Verdict::Holds);
  CHECK_FALSE(b.audit.deciders.surjective);
  CHECK_FALSE(b.audit.deciders.injective);

  CHECK(verdict(run("m=5; d=1; f=x1^2+x2^3"), "even_exponents").value == Verdict::Fails);
  CHECK(verdict(run("m=4; d=1; f=x1^2+x2^2"), "even_exponents").value == Verdict::NotApplicable);
  CHECK(verdict(run("m=5; d=2; f=x1^2+x2*x3"), "even_exponents").value == Verdict::NotApplicable);
}

TEST_CASE("not-applicable verdicts carry notes and predict nothing") {
  for (const char* text : {"m=4; d=2; f=x1^2+x2+x3^2", "m=3; d=2; f=x1*x3+x2", "m=6; d=1; f=x1*x2+3",
                           "m=2; d=0; f=1", "m=7; d=2; f=x1^3+x2*x3+5*x3^2"}) {
    for (const auto& v : run(text).audit.criteria) {
      if (v.value == Verdict::NotApplicable || v.canonical == Verdict::NotApplicable) {
        CHECK_FALSE(v.note.empty());
        CHECK_FALSE(v.prediction(Verdict::NotApplicable).has_value());
      }
    }
  }
}

TEST_CASE("tables without an expression evaluate raw as canonical") {
  const RuleTable f = table_from_expression(parse_rule_expression("m=5; d=0; f=x1^5"));
  const AnalysisReport r = analyze(f, nullptr, "table");
  for (const auto& v : r.audit.criteria) CHECK(v.value == v.canonical);
}

TEST_CASE("discrepancies are exactly the applicable disagreements") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint32_t m = 2 + trial % 6;
    const unsigned d = trial % 3;
    std::string text = "m=" + std::to_string(m) + "; d=" + std::to_string(d) + "; f=";
    for (unsigned j = 1; j <= d + 1; ++j) {
      if (rng() % 4 == 0) continue;
      text += std::to_string(1 + rng() % (m - 1)) + "*x" + std::to_string(j) + "^" + std::to_string(1 + rng() % 6) + "+";
    }
    text += std::to_string(rng() % m);
    const AnalysisReport r = run(text);
    std::size_t expected = 0;
    for (const auto& v : r.audit.criteria) {
      bool truth = v.property == Property::Surjective  ? r.audit.deciders.surjective
                   : v.property == Property::Injective ? r.audit.deciders.injective
                                                       : r.audit.deciders.permutive[v.position - 1];
      for (Verdict x : {v.value, v.canonical}) {
        const auto p = v.prediction(x);
        expected += p && *p != truth;
      }
    }
    CHECK(r.audit.discrepancies.size() == expected);
  }
}

TEST_CASE("soundness ladder on random tables") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t m = 2 + trial % 3;
    const unsigned d = trial % 3;
    std::vector<Letter> v(oracle::ipow(m, d + 1));
    for (auto& x : v) x = static_cast<Letter>(rng() % m);
    const RuleTable f(Modulus(m), d, v);
    const AnalysisReport r = analyze(f, nullptr, "random");
    const DeciderVerdicts& dv = r.audit.deciders;
    for (bool p : dv.permutive)
      if (p) CHECK(dv.surjective);
    if (dv.injective) CHECK(dv.surjective);
    const SeparationClass& c = r.classification;
    if (dv.injective && c.lr_separated && c.leftmost < c.rightmost) {
      const bool ends = dv.permutive[c.leftmost - 1] && dv.permutive[c.rightmost - 1];
      CHECK_FALSE(ends);
    }
  }
}

TEST_CASE("prime fields: totient criterion equals brute force") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (Letter a = 1; a < p; ++a) {
      for (std::uint32_t q = 1; q <= 12; ++q) {
        const AnalysisReport r =
            run("m=" + std::to_string(p) + "; d=1; f=" + std::to_string(a) + "*x2^" + std::to_string(q) + "+0*x1");
        const CriterionVerdict& v = verdict(r, "totient_permutivity", 2);
        CHECK((v.canonical == Verdict::Holds) == r.audit.deciders.permutive[1]);
        CHECK((v.canonical == Verdict::Holds) == (std::gcd(q, p - 1) == 1));
      }
    }
  }
}

TEST_CASE("prime fields: surjectivity sufficient condition is confirmed") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t p = trial % 2 ? 5 : 3;
    const std::string q1 = std::to_string(1 + rng() % 8), q3 = std::to_string(1 + rng() % 8);
    const std::string text = "m=" + std::to_string(p) + "; d=2; f=" + std::to_string(1 + rng() % (p - 1)) + "*x1^" + q1 +
                             "+x2*x3^" + std::to_string(rng() % 3) + "+0*x1+" + std::to_string(1 + rng() % (p - 1)) +
                             "*x3^" + q3;
    const AnalysisReport r = run(text);
    if (verdict(r, "surjectivity_sufficient").canonical == Verdict::Holds) CHECK(r.audit.deciders.surjective);
    CHECK_FALSE(flagged(r, "surjectivity_sufficient"));
  }
}
