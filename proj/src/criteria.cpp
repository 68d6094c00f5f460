#include "nlca/criteria.hpp"

#include <chrono>
#include <numeric>
#include <sstream>

#include "nlca/error.hpp"

namespace nlca {
namespace {

std::string join(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(w[i]);
  }
  return s;
}

Verdict from_bool(bool b) { return b ? Verdict::Holds : Verdict::Fails; }

CriterionVerdict not_applicable(std::string id, unsigned position, Property p, std::string note) {
  CriterionVerdict v;
  v.id = std::move(id);
  v.position = position;
  v.property = p;
  v.value = v.canonical = Verdict::NotApplicable;
  v.note = std::move(note);
  return v;
}

std::uint32_t raw_exponent(const SeparationClass& cls, unsigned j, const RawForm* raw) {
  if (raw != nullptr) {
    auto it = raw->exponents.find(j);
    if (it != raw->exponents.end()) return it->second;
  }
  return cls.at(j)->monomial.exponent;
}

bool coprime(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b) == 1; }

// Shared hypothesis of the LR-separated criteria.
std::optional<std::string> lr_hypothesis(const RuleTable& rule, const SeparationClass& cls) {
  if (rule.modulus().value() < 3) return "stated for m >= 3";
  if (!cls.lr_separated) return "rule is not LR-separated";
  return std::nullopt;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::NotApplicable: return "NotApplicable";
  }
  return "?";
}

const char* to_string(Property p) noexcept {
  switch (p) {
    case Property::Permutive: return "permutive";
    case Property::Surjective: return "surjective";
    case Property::Injective: return "injective";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "Holds") return Verdict::Holds;
  if (s == "Fails") return Verdict::Fails;
  if (s == "NotApplicable") return Verdict::NotApplicable;
  throw ParseError("unknown verdict '" + s + "'", 0);
}

Property property_from_string(const std::string& s) {
  if (s == "permutive") return Property::Permutive;
  if (s == "surjective") return Property::Surjective;
  if (s == "injective") return Property::Injective;
  throw ParseError("unknown property '" + s + "'", 0);
}

RawForm RawForm::from_expression(const RuleExpression& expr) {
  RawForm raw;
  for (unsigned j = 1; j <= expr.diameter + 1; ++j) {
    if (auto q = expr.raw_exponent_at(j)) raw.exponents.emplace(j, *q);
    if (auto c = expr.raw_component_at(j)) raw.components.emplace(j, *c);
  }
  return raw;
}

CriterionVerdict criterion_totient_permutivity(const RuleTable& rule, const SeparationClass& cls, unsigned j,
                                               const RawForm* raw) {
  const char* id = "totient_permutivity";
  const SeparatedPosition* s = cls.at(j);
  if (s == nullptr) return not_applicable(id, j, Property::Permutive, "rule is not separated at this position");
  const Modulus m = rule.modulus();
  if (!is_unit(s->monomial.coefficient, m))
    return not_applicable(id, j, Property::Permutive, "coefficient is not a unit");
  const std::uint32_t phi = totient(m);
  const std::uint32_t q_raw = raw_exponent(cls, j, raw);
  CriterionVerdict v;
  v.id = id;
  v.position = j;
  v.property = Property::Permutive;
  v.value = from_bool(coprime(q_raw, phi));
  v.canonical = from_bool(coprime(s->monomial.exponent, phi));
  v.when_holds = true;
  v.when_fails = false;
  v.note = "gcd(q=" + std::to_string(q_raw) + ", phi=" + std::to_string(phi) + ")=" +
           std::to_string(std::gcd(q_raw, phi)) + "; canonical q=" + std::to_string(s->monomial.exponent);
  return v;
}

CriterionVerdict criterion_hermite_permutivity(const RuleTable& rule, const SeparationClass&, unsigned j,
                                               const RawForm* raw) {
  const char* id = "hermite_permutivity";
  const Modulus m = rule.modulus();
  if (!m.is_prime()) return not_applicable(id, j, Property::Permutive, "modulus is not prime");
  const auto component = separable_component(rule, j);
  if (!component)
    return not_applicable(id, j, Property::Permutive, "no univariate polynomial component at this position");
  const UniPoly interpolated = interpolate_prime(*component);
  UniPoly written = interpolated;
  if (raw != nullptr) {
    auto it = raw->components.find(j);
    if (it != raw->components.end()) written = it->second;
  }
  CriterionVerdict v;
  v.id = id;
  v.position = j;
  v.property = Property::Permutive;
  v.value = from_bool(hermite_criterion(written));
  v.canonical = from_bool(hermite_criterion(interpolated));
  v.when_holds = true;
  v.when_fails = false;
  v.note = "pi(x) = " + written.to_string() + "; interpolated " + interpolated.to_string();
  return v;
}

CriterionVerdict criterion_surjectivity_sufficient(const RuleTable& rule, const SeparationClass& cls,
                                                   const RawForm* raw) {
  const char* id = "surjectivity_sufficient";
  if (auto why = lr_hypothesis(rule, cls)) return not_applicable(id, 0, Property::Surjective, *why);
  const std::uint32_t phi = totient(rule.modulus());
  const unsigned l = cls.leftmost, r = cls.rightmost;
  const std::uint32_t ql = raw_exponent(cls, l, raw), qr = raw_exponent(cls, r, raw);
  CriterionVerdict v;
  v.id = id;
  v.property = Property::Surjective;
  v.value = from_bool(coprime(ql, phi) || coprime(qr, phi));
  v.canonical = from_bool(coprime(cls.at(l)->monomial.exponent, phi) || coprime(cls.at(r)->monomial.exponent, phi));
  v.when_holds = true;
  v.note = "gcd(q_l=" + std::to_string(ql) + ", phi=" + std::to_string(phi) + ")=" +
           std::to_string(std::gcd(ql, phi)) + ", gcd(q_r=" + std::to_string(qr) + ", phi)=" +
           std::to_string(std::gcd(qr, phi)) + "; sufficient condition only";
  return v;
}

bool is_permutation_map(const ResidualMap& map) {
  const std::size_t m = map.modulus.value();
  std::vector<std::uint64_t> counts(m, 0);
  for (Letter v : map.values) ++counts[v];
  const std::uint64_t expected = map.values.size() / m;
  if (map.values.size() % m != 0) return false;  // zero variables: a constant
  for (std::uint64_t c : counts)
    if (c != expected) return false;
  return true;
}

std::vector<CriterionVerdict> criterion_pp_characterization(const RuleTable& rule, const SeparationClass& cls,
                                                            const RawForm* raw) {
  std::vector<CriterionVerdict> out;
  const Modulus m = rule.modulus();
  const char* id1 = "pp_characterization.clause1";
  const char* id2 = "pp_characterization.clause2";
  std::optional<std::string> base;
  if (!m.is_prime() || m.value() < 3) base = "modulus is not an odd prime";

  // Clause 1.
  if (base) {
    out.push_back(not_applicable(id1, 0, Property::Surjective, *base));
  } else if (!cls.lr_separated) {
    out.push_back(not_applicable(id1, 0, Property::Surjective, "rule is not LR-separated"));
  } else if (cls.rightmost <= cls.leftmost + 1) {
    out.push_back(not_applicable(id1, 0, Property::Surjective, "no interior coordinates (r <= l + 1)"));
  } else if (is_permutation_map(*cls.interior)) {
    out.push_back(not_applicable(id1, 0, Property::Surjective, "interior pi is a permutation polynomial"));
  } else {
    const std::uint32_t pm1 = m.value() - 1;
    const std::uint32_t ql = raw_exponent(cls, cls.leftmost, raw), qr = raw_exponent(cls, cls.rightmost, raw);
    CriterionVerdict v;
    v.id = id1;
    v.property = Property::Surjective;
    v.value = from_bool(coprime(ql, pm1) || coprime(qr, pm1));
    v.canonical = from_bool(coprime(cls.at(cls.leftmost)->monomial.exponent, pm1) ||
                            coprime(cls.at(cls.rightmost)->monomial.exponent, pm1));
    v.when_holds = true;
    v.when_fails = false;
    v.note = "interior pi is not a permutation polynomial; gcd(q_l=" + std::to_string(ql) + ", p-1)=" +
             std::to_string(std::gcd(ql, pm1)) + ", gcd(q_r=" + std::to_string(qr) + ", p-1)=" +
             std::to_string(std::gcd(qr, pm1));
    out.push_back(std::move(v));
  }

  // Clause 2.
  if (base) {
    out.push_back(not_applicable(id2, 0, Property::Surjective, *base));
  } else if (!cls.totally_separated) {
    out.push_back(not_applicable(id2, 0, Property::Surjective, "rule is not totally separated"));
  } else {
    const std::uint32_t pm1 = m.value() - 1;
    bool any_raw = false, any_canonical = false;
    for (const auto& s : cls.separated) {
      any_raw = any_raw || coprime(raw_exponent(cls, s.position, raw), pm1);
      any_canonical = any_canonical || coprime(s.monomial.exponent, pm1);
    }
    CriterionVerdict v;
    v.id = id2;
    v.property = Property::Surjective;
    v.value = from_bool(any_raw);
    v.canonical = from_bool(any_canonical);
    v.when_fails = false;
    v.note = "necessary condition: some q_j coprime to p-1";
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

CriterionVerdict injectivity_like(const char* id, const RuleTable& rule, const SeparationClass& cls,
                                  const RawForm* raw, std::string extra) {
  if (auto why = lr_hypothesis(rule, cls)) return not_applicable(id, 0, Property::Injective, *why);
  const std::uint32_t phi = totient(rule.modulus());
  const bool single = cls.leftmost == cls.rightmost;
  const std::uint32_t ql = raw_exponent(cls, cls.leftmost, raw);
  CriterionVerdict v;
  v.id = id;
  v.property = Property::Injective;
  v.value = from_bool(single && coprime(ql, phi));
  v.canonical = from_bool(single && coprime(cls.at(cls.leftmost)->monomial.exponent, phi));
  v.when_holds = true;
  v.when_fails = false;
  v.note = std::string(single ? "l = r" : "l != r") + "; gcd(q_l=" + std::to_string(ql) +
           ", phi=" + std::to_string(phi) + ")=" + std::to_string(std::gcd(ql, phi)) + extra;
  return v;
}

}  // namespace

CriterionVerdict criterion_injectivity(const RuleTable& rule, const SeparationClass& cls, const RawForm* raw) {
  return injectivity_like("injectivity", rule, cls, raw, "");
}

CriterionVerdict criterion_bijectivity_corollary(const RuleTable& rule, const SeparationClass& cls,
                                                 const RawForm* raw) {
  return injectivity_like("bijectivity_corollary", rule, cls, raw,
                          "; as-printed ambiguous: gcd(q_l, rho(m)) read as gcd(q_l, phi(m))");
}

std::vector<CriterionVerdict> criterion_even_exponents(const RuleTable& rule, const SeparationClass& cls,
                                                       const RawForm* raw) {
  const Modulus m = rule.modulus();
  std::optional<std::string> why;
  if (!m.is_prime() || m.value() < 3) why = "modulus is not an odd prime";
  else if (!cls.totally_separated) why = "rule is not totally separated";
  if (why)
    return {not_applicable("even_exponents", 0, Property::Surjective, *why),
            not_applicable("even_exponents.injectivity", 0, Property::Injective, *why)};

  bool raw_even = true, canonical_even = true;
  std::string exps;
  for (const auto& s : cls.separated) {
    const std::uint32_t q = raw_exponent(cls, s.position, raw);
    raw_even = raw_even && q % 2 == 0;
    canonical_even = canonical_even && s.monomial.exponent % 2 == 0;
    if (!exps.empty()) exps += ',';
    exps += std::to_string(q);
  }
  std::vector<CriterionVerdict> out;
  for (auto [id, prop] : {std::pair{"even_exponents", Property::Surjective},
                          std::pair{"even_exponents.injectivity", Property::Injective}}) {
    CriterionVerdict v;
    v.id = id;
    v.property = prop;
    v.value = from_bool(raw_even);
    v.canonical = from_bool(canonical_even);
    v.when_holds = false;
    v.note = "exponents (" + exps + ")" + (raw_even ? " all even" : " not all even");
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CriterionVerdict> evaluate_criteria(const RuleTable& rule, const SeparationClass& cls,
                                                const RawForm* raw) {
  std::vector<CriterionVerdict> out;
  for (unsigned j = 1; j <= rule.arity(); ++j) out.push_back(criterion_totient_permutivity(rule, cls, j, raw));
  for (unsigned j = 1; j <= rule.arity(); ++j) out.push_back(criterion_hermite_permutivity(rule, cls, j, raw));
  out.push_back(criterion_surjectivity_sufficient(rule, cls, raw));
  for (auto& v : criterion_pp_characterization(rule, cls, raw)) out.push_back(std::move(v));
  out.push_back(criterion_injectivity(rule, cls, raw));
  out.push_back(criterion_bijectivity_corollary(rule, cls, raw));
  for (auto& v : criterion_even_exponents(rule, cls, raw)) out.push_back(std::move(v));
  return out;
}

std::optional<std::pair<Word, Word>> permutivity_collision(const RuleTable& rule, unsigned j) {
  if (j < 1 || j > rule.arity()) throw PreconditionError("window position outside [1, d+1]");
  const std::size_t m = rule.modulus().value();
  for (std::size_t idx = 0; idx < rule.size(); ++idx) {
    Word w = rule.window_at(idx);
    if (w[j - 1] != 0) continue;
    std::vector<int> first(m, -1);
    for (Letter x = 0; x < m; ++x) {
      w[j - 1] = x;
      const Letter out = rule(w);
      if (first[out] >= 0) {
        Word other = w;
        other[j - 1] = static_cast<Letter>(first[out]);
        return std::pair{std::move(other), std::move(w)};
      }
      first[out] = static_cast<int>(x);
    }
  }
  return std::nullopt;
}

namespace {

std::string describe(const InjectivityWitness& w) {
  if (const auto* d = std::get_if<Diamond>(&w)) return "diamond [" + join(d->u) + "] / [" + join(d->v) + "]";
  const auto& p = std::get<PeriodicPair>(w);
  return "periodic (" + join(p.x.letters()) + ")^inf / (" + join(p.y.letters()) + ")^inf";
}

}  // namespace

AnalysisReport analyze(const RuleTable& rule, const RawForm* raw, std::string rule_id, const Caps& caps) {
  const auto start = std::chrono::steady_clock::now();
  AnalysisReport report;
  report.classification = classify(rule);
  AuditReport& audit = report.audit;
  audit.rule = std::move(rule_id);
  audit.modulus = rule.modulus().value();
  audit.diameter = rule.diameter();
  audit.table_hash = rule.hash();

  const SurjectivityResult surj = decide_surjective(rule, caps);
  const InjectivityResult inj = decide_injective(rule, caps);
  audit.deciders.surjective = surj.surjective;
  audit.deciders.injective = inj.injective;
  for (unsigned j = 1; j <= rule.arity(); ++j) audit.deciders.permutive.push_back(permutive_bruteforce(rule, j));
  report.surjectivity_witness = surj.witness;
  report.injectivity_witness = inj.witness;

  audit.criteria = evaluate_criteria(rule, report.classification, raw);

  for (const CriterionVerdict& v : audit.criteria) {
    bool truth = false;
    std::string evidence;
    switch (v.property) {
      case Property::Permutive: {
        truth = audit.deciders.permutive[v.position - 1];
        if (truth) {
          evidence = "brute force: bijective in every context";
        } else if (auto c = permutivity_collision(rule, v.position)) {
          evidence = "windows [" + join(c->first) + "] and [" + join(c->second) + "] share an output";
        }
        break;
      }
      case Property::Surjective:
        truth = surj.surjective;
        evidence = truth ? "subset construction: empty set unreachable (" + std::to_string(surj.explored_subsets) +
                               " subsets)"
                         : "orphan word [" + join(surj.witness->word) + "]";
        break;
      case Property::Injective:
        truth = inj.injective;
        evidence = truth ? "pair graph: no off-diagonal bi-infinite path" : describe(*inj.witness);
        break;
    }
    for (auto [variant, value] : {std::pair{"raw", v.value}, std::pair{"canonical", v.canonical}}) {
      const auto expected = v.prediction(value);
      if (expected && *expected != truth)
        audit.discrepancies.push_back(Discrepancy{v.id, v.position, variant, v.property, *expected, truth, evidence});
    }
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace nlca
