#pragma once

// Algebraic criteria for separated rules, each evaluated exactly as stated
// (including its hypotheses), and the audit that compares every applicable
// criterion against the ground-truth deciders.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlca/caps.hpp"
#include "nlca/decide.hpp"
#include "nlca/expression.hpp"
#include "nlca/rule.hpp"

namespace nlca {

enum class Verdict { Holds, Fails, NotApplicable };
enum class Property { Permutive, Surjective, Injective };

const char* to_string(Verdict v) noexcept;
const char* to_string(Property p) noexcept;
Verdict verdict_from_string(const std::string& s);
Property property_from_string(const std::string& s);

// Exponents and univariate components as the user wrote them. Criteria use
// these for the "raw" sub-verdict and fall back to canonical data otherwise.
struct RawForm {
  std::map<unsigned, std::uint32_t> exponents;
  std::map<unsigned, UniPoly> components;

  static RawForm from_expression(const RuleExpression& expr);
};

struct CriterionVerdict {
  std::string id;
  unsigned position = 0;  // window position for per-position criteria, else 0
  Property property = Property::Surjective;
  Verdict value = Verdict::NotApplicable;      // on raw exponents
  Verdict canonical = Verdict::NotApplicable;  // on canonical exponents
  std::string note;
  // What Holds / Fails predict about `property`; nullopt = no prediction.
  std::optional<bool> when_holds;
  std::optional<bool> when_fails;

  std::optional<bool> prediction(Verdict v) const noexcept {
    if (v == Verdict::Holds) return when_holds;
    if (v == Verdict::Fails) return when_fails;
    return std::nullopt;
  }

  friend bool operator==(const CriterionVerdict&, const CriterionVerdict&) = default;
};

CriterionVerdict criterion_totient_permutivity(const RuleTable& rule, const SeparationClass& cls, unsigned position,
                                               const RawForm* raw = nullptr);
CriterionVerdict criterion_hermite_permutivity(const RuleTable& rule, const SeparationClass& cls, unsigned position,
                                               const RawForm* raw = nullptr);
CriterionVerdict criterion_surjectivity_sufficient(const RuleTable& rule, const SeparationClass& cls,
                                                   const RawForm* raw = nullptr);
// Clause 1 (non-permutation interior pi) and clause 2 (totally separated).
std::vector<CriterionVerdict> criterion_pp_characterization(const RuleTable& rule, const SeparationClass& cls,
                                                            const RawForm* raw = nullptr);
CriterionVerdict criterion_injectivity(const RuleTable& rule, const SeparationClass& cls,
                                       const RawForm* raw = nullptr);
// Same predicate under the totient reading of the printed gcd(q_l, rho(m)).
CriterionVerdict criterion_bijectivity_corollary(const RuleTable& rule, const SeparationClass& cls,
                                                 const RawForm* raw = nullptr);
// Even exponents everywhere: predicts non-surjective, and hence non-injective.
std::vector<CriterionVerdict> criterion_even_exponents(const RuleTable& rule, const SeparationClass& cls,
                                                       const RawForm* raw = nullptr);

// Multivariate permutation test: every value has exactly m^(n-1) solutions.
bool is_permutation_map(const ResidualMap& map);

struct DeciderVerdicts {
  bool surjective = false;
  bool injective = false;
  std::vector<bool> permutive;  // index j - 1
  friend bool operator==(const DeciderVerdicts&, const DeciderVerdicts&) = default;
};

struct Discrepancy {
  std::string criterion;
  unsigned position = 0;
  std::string variant;  // "raw" or "canonical"
  Property property = Property::Surjective;
  bool expected = false;
  bool ground_truth = false;
  std::string witness;
  friend bool operator==(const Discrepancy&, const Discrepancy&) = default;
};

struct AuditReport {
  std::string rule;
  std::uint32_t modulus = 0;
  unsigned diameter = 0;
  std::uint64_t table_hash = 0;
  DeciderVerdicts deciders;
  std::vector<CriterionVerdict> criteria;
  std::vector<Discrepancy> discrepancies;
  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

struct AnalysisReport {
  AuditReport audit;
  SeparationClass classification;
  std::optional<UnbalancedWord> surjectivity_witness;
  std::optional<InjectivityWitness> injectivity_witness;
  std::optional<double> elapsed_ms;
};

std::vector<CriterionVerdict> evaluate_criteria(const RuleTable& rule, const SeparationClass& cls,
                                                const RawForm* raw = nullptr);

AnalysisReport analyze(const RuleTable& rule, const RawForm* raw, std::string rule_id, const Caps& caps = {});

// Windows (differing only at `position`) with equal outputs, if any.
std::optional<std::pair<Word, Word>> permutivity_collision(const RuleTable& rule, unsigned position);

}  // namespace nlca
