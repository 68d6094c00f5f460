#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "nlca/error.hpp"
#include "nlca/family.hpp"
#include "nlca/report.hpp"
#include "oracles.hpp"

using namespace nlca;

namespace {
std::string dump_all(const std::vector<AuditReport>& reports) {
  std::string s;
  for (const auto& r : reports) s += to_json(r).dump() + "\n";
  return s;
}
}  // namespace

TEST_CASE("family spec parsing") {
  const FamilySpec s = FamilySpec::parse(
      "# sweep\n"
      "moduli = 3, 5\n"
      "d=2\n"
      "kind=lr-separated   # trailing comment\n"
      "exponents=2..4\n"
      "coefficients=nonzero\n"
      "pi=sample:7\n"
      "seed=99\n\n");
  CHECK(s.moduli == std::vector<std::uint32_t>{3, 5});
  CHECK(s.diameter == 2);
  CHECK(s.kind == FamilyKind::LrSeparated);
  CHECK(s.exponent_min == 2);
  CHECK(s.exponent_max == 4);
  CHECK(s.coefficients == CoefficientSet::NonZero);
  CHECK(s.pi.sample);
  CHECK(s.pi.count == 7);
  CHECK(s.seed == 99);

  const FamilySpec t = FamilySpec::parse("m=4\nq=3\nkind=shift-like\n");
  CHECK(t.moduli == std::vector<std::uint32_t>{4});
  CHECK(t.exponent_min == 3);
  CHECK(t.exponent_max == 3);
}

TEST_CASE("family spec errors") {
  for (const char* bad : {"moduli=1\n", "kind=round\n", "exponents=3..1\n", "exponents=0..2\n", "pi=some\n",
                          "pi=sample:0\n", "colour=blue\n", "d\n", "d=-1\n", "kind=lr-separated\nd=0\n", "moduli=\n"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(FamilySpec::parse(std::string(bad)), ParseError);
  }
}

TEST_CASE("family sizes and members") {
  const Family shift(FamilySpec::parse("moduli=4,5\nkind=shift-like\nexponents=1..4\n"));
  CHECK(shift.size() == 2 * 4 + 4 * 4);
  CHECK(shift.member(0).id == "m=4; d=0; f=x1");
  CHECK(shift.member(1).id == "m=4; d=0; f=3*x1");
  CHECK(shift.member(5).id == "m=4; d=0; f=3*x1^3");
  CHECK(shift.member(8).id == "m=5; d=0; f=x1");
  CHECK_THROWS_AS(shift.member(24), PreconditionError);

  const Family lr(FamilySpec::parse("moduli=3\nd=2\nkind=lr-separated\nexponents=1..4\n"));
  CHECK(lr.size() == 4 * 4 * 2 * 2 * 27);
  std::set<std::uint64_t> hashes;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    const FamilyMember f = lr.member(i);
    const SeparationClass c = classify(f.rule);
    CHECK(c.lr_separated);
    CHECK(c.leftmost == 1);
    CHECK(c.rightmost == 3);
    const auto [ql, qr] = lr.end_exponents(i);
    CHECK(f.raw.exponents.at(1) == ql);
    CHECK(f.raw.exponents.at(3) == qr);
    CHECK(f.raw.components.count(2) == 0);
    hashes.insert(f.rule.hash());
  }
  // x^3 = x on Z_3, so only the exponent classes {1,3} and {2,4} are distinct.
  CHECK(hashes.size() == 2 * 2 * 2 * 2 * 27);

  const Family total(FamilySpec::parse("moduli=3\nd=1\nkind=totally-separated\nexponents=2..2\n"));
  CHECK(total.size() == 4);
  CHECK(total.member(0).id == "m=3; d=1; f=x1^2+x2^2");
  CHECK(total.member(3).id == "m=3; d=1; f=2*x1^2+2*x2^2");

  const Family tables(FamilySpec::parse("moduli=2\nd=1\nkind=all-tables\n"));
  CHECK(tables.size() == 16);
  CHECK(tables.member(1).id == "m=2; d=1; table=[0,0,0,1]");
  CHECK(tables.member(8).rule.at(0) == 1);
}

TEST_CASE("sampled families are reproducible") {
  const FamilySpec spec = FamilySpec::parse("moduli=5\nd=2\nkind=lr-separated\nexponents=1..2\npi=sample:5\nseed=3\n");
  const Family a(spec), b(spec);
  REQUIRE(a.size() == 4 * 4 * 4 * 5);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.member(i).rule == b.member(i).rule);
  FamilySpec other = spec;
  other.seed = 4;
  const Family c(other);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= !(a.member(i).rule == c.member(i).rule);
  CHECK(differs);
}

TEST_CASE("family size is capped") {
  Caps caps;
  caps.search_budget = 100;
  CHECK_THROWS_AS(Family(FamilySpec::parse("moduli=3\nd=1\nkind=all-tables\n"), caps), CapExceeded);
}

TEST_CASE("ordered_parallel keeps enumeration order") {
  for (unsigned jobs : {1u, 2u, 5u, 16u}) {
    std::vector<std::size_t> seen;
    ordered_parallel<std::size_t>(1000, jobs, [](std::size_t i) { return i * i; },
                                  [&](std::size_t i, std::size_t&& v) {
                                    CHECK(v == i * i);
                                    seen.push_back(i);
                                  });
    std::vector<std::size_t> want(1000);
    std::iota(want.begin(), want.end(), 0);
    CHECK(seen == want);
  }
  CHECK_THROWS_AS(ordered_parallel<int>(
                      50, 4, [](std::size_t i) -> int { if (i == 33) throw CapExceeded("x"); return 0; },
                      [](std::size_t, int&&) {}),
                  CapExceeded);
}

TEST_CASE("audit: composite modulus flags the q = 3 totient case") {
  const auto reports = audit(FamilySpec::parse("moduli=4\nkind=shift-like\nexponents=1..4\n"), 2);
  REQUIRE(reports.size() == 8);
  for (const auto& r : reports) {
    bool totient_flag = false;
    for (const auto& d : r.discrepancies) totient_flag |= d.criterion == "totient_permutivity";
    CHECK(totient_flag == (r.rule.find("^3") != std::string::npos));
  }
}

TEST_CASE("audit: prime shift-like family has no totient discrepancies") {
  // Hermite flags x^3 (and x^7, its canonical form) as well as raw x^5,
  // whose written degree is not below p.
  for (const auto& r : audit(FamilySpec::parse("moduli=5\nkind=shift-like\nexponents=1..8\n"), 3)) {
    const std::uint32_t q = r.rule.find('^') == std::string::npos ? 1 : std::stoul(r.rule.substr(r.rule.find('^') + 1));
    std::set<std::string> hermite;
    for (const auto& d : r.discrepancies) {
      CHECK(d.criterion == "hermite_permutivity");
      hermite.insert(d.variant);
    }
    const std::set<std::string> want = q == 3 || q == 7 ? std::set<std::string>{"raw", "canonical"}
                                       : q == 5          ? std::set<std::string>{"raw"}
                                                         : std::set<std::string>{};
    CHECK(hermite == want);
  }
}

TEST_CASE("audit: m = 3, d = 1 tables agree on prime-field permutivity criteria") {
  std::size_t applicable = 0;
  audit(FamilySpec::parse("moduli=3\nd=1\nkind=all-tables\n"), 4, Caps{}, [&](const AuditReport& r) {
    for (const auto& v : r.criteria)
      if (v.property == Property::Permutive && v.id == "totient_permutivity" && v.canonical != Verdict::NotApplicable)
        ++applicable;
    for (const auto& d : r.discrepancies) CHECK(d.criterion != "totient_permutivity");
  });
  CHECK(applicable > 0);
}

TEST_CASE("audit output is independent of the worker count") {
  const FamilySpec spec = FamilySpec::parse("moduli=3,4\nd=2\nkind=lr-separated\nexponents=1..2\npi=sample:4\nseed=8\n");
  const std::string one = dump_all(audit(spec, 1));
  CHECK(one == dump_all(audit(spec, 4)));
  CHECK(one == dump_all(audit(spec, 7)));
}

TEST_CASE("conjecture scan over Z_3") {
  ConjectureBounds b;
  const ScanReport r = conjecture_scan(3, b, 4);
  CHECK(r.total == 1728);
  CHECK(r.sufficiency_violations.empty());
  // Independent recount of the prediction.
  std::uint64_t predicted = 0;
  for (std::uint32_t ql = 1; ql <= 4; ++ql)
    for (std::uint32_t qr = 1; qr <= 4; ++qr) predicted += (std::gcd(ql, 2u) == 1 || std::gcd(qr, 2u) == 1) * 4 * 27;
  CHECK(r.predicted == predicted);
  CHECK(r.surjective == r.predicted + r.necessity_counterexamples.size());
}

TEST_CASE("conjecture scan is deterministic when sampled") {
  ConjectureBounds b;
  b.exponent_max = 3;
  b.pi = PiSelection{true, 5};
  b.seed = 12;
  const ScanReport x = conjecture_scan(5, b, 1), y = conjecture_scan(5, b, 6);
  CHECK(x.total == 3 * 3 * 4 * 4 * 5);
  CHECK(x.sufficiency_violations.empty());
  Json jx = to_json(x), jy = to_json(y);
  jx.erase("elapsed_ms");
  jy.erase("elapsed_ms");
  CHECK(jx.dump() == jy.dump());
  CHECK_THROWS_AS(conjecture_scan(4, b), PreconditionError);
}
