#include "nlca/report.hpp"

#include <cstdio>

#include "nlca/error.hpp"

namespace nlca {
namespace {

Json optional_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

std::optional<bool> optional_bool(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<bool>();
}

Json residual_json(const ResidualMap& r) {
  return Json{{"positions", r.positions}, {"values", r.values}};
}

ResidualMap residual_from(const Json& j, Modulus m) {
  return ResidualMap{m, j.at("positions").get<std::vector<unsigned>>(), j.at("values").get<std::vector<Letter>>()};
}

}  // namespace

Json to_json(const CriterionVerdict& v) {
  Json j;
  j["id"] = v.id;
  j["position"] = v.position;
  j["property"] = to_string(v.property);
  j["value"] = to_string(v.value);
  j["canonical_value"] = to_string(v.canonical);
  j["predicts_when_holds"] = optional_bool(v.when_holds);
  j["predicts_when_fails"] = optional_bool(v.when_fails);
  j["note"] = v.note;
  return j;
}

CriterionVerdict criterion_from_json(const Json& j) {
  CriterionVerdict v;
  v.id = j.at("id").get<std::string>();
  v.position = j.at("position").get<unsigned>();
  v.property = property_from_string(j.at("property").get<std::string>());
  v.value = verdict_from_string(j.at("value").get<std::string>());
  v.canonical = verdict_from_string(j.at("canonical_value").get<std::string>());
  v.when_holds = optional_bool(j.at("predicts_when_holds"));
  v.when_fails = optional_bool(j.at("predicts_when_fails"));
  v.note = j.at("note").get<std::string>();
  return v;
}

Json to_json(const Discrepancy& d) {
  return Json{{"criterion", d.criterion},   {"position", d.position},
              {"variant", d.variant},       {"property", to_string(d.property)},
              {"expected", d.expected},     {"ground_truth", d.ground_truth},
              {"witness", d.witness}};
}

Discrepancy discrepancy_from_json(const Json& j) {
  return Discrepancy{j.at("criterion").get<std::string>(),
                     j.at("position").get<unsigned>(),
                     j.at("variant").get<std::string>(),
                     property_from_string(j.at("property").get<std::string>()),
                     j.at("expected").get<bool>(),
                     j.at("ground_truth").get<bool>(),
                     j.at("witness").get<std::string>()};
}

Json to_json(const AuditReport& r) {
  Json j;
  j["rule"] = r.rule;
  j["modulus"] = r.modulus;
  j["diameter"] = r.diameter;
  // Hex string: JSON numbers above 2^53 do not survive every consumer.
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.table_hash));
  j["table_hash"] = hash;
  j["deciders"] = Json{{"surjective", r.deciders.surjective},
                       {"injective", r.deciders.injective},
                       {"permutive", r.deciders.permutive}};
  j["criteria"] = Json::array();
  for (const auto& v : r.criteria) j["criteria"].push_back(to_json(v));
  j["discrepancies"] = Json::array();
  for (const auto& d : r.discrepancies) j["discrepancies"].push_back(to_json(d));
  return j;
}

AuditReport audit_from_json(const Json& j) {
  AuditReport r;
  r.rule = j.at("rule").get<std::string>();
  r.modulus = j.at("modulus").get<std::uint32_t>();
  r.diameter = j.at("diameter").get<unsigned>();
  r.table_hash = std::stoull(j.at("table_hash").get<std::string>(), nullptr, 16);
  const Json& d = j.at("deciders");
  r.deciders.surjective = d.at("surjective").get<bool>();
  r.deciders.injective = d.at("injective").get<bool>();
  r.deciders.permutive = d.at("permutive").get<std::vector<bool>>();
  for (const auto& v : j.at("criteria")) r.criteria.push_back(criterion_from_json(v));
  for (const auto& v : j.at("discrepancies")) r.discrepancies.push_back(discrepancy_from_json(v));
  return r;
}

Json to_json(const SeparationClass& c) {
  Json j;
  j["essential"] = c.essential;
  j["leftmost"] = c.leftmost;
  j["rightmost"] = c.rightmost;
  j["lr_separated"] = c.lr_separated;
  j["totally_separated"] = c.totally_separated;
  j["shift_like"] = c.shift_like;
  j["constant"] = c.constant;
  j["separated"] = Json::array();
  for (const auto& s : c.separated) {
    j["separated"].push_back(Json{{"position", s.position},
                                  {"coefficient", s.monomial.coefficient},
                                  {"exponent", s.monomial.exponent},
                                  {"residual", residual_json(s.residual)}});
  }
  j["interior"] = c.interior ? residual_json(*c.interior) : Json(nullptr);
  return j;
}

SeparationClass classification_from_json(const Json& j, Modulus m) {
  SeparationClass c;
  c.essential = j.at("essential").get<std::vector<unsigned>>();
  c.leftmost = j.at("leftmost").get<unsigned>();
  c.rightmost = j.at("rightmost").get<unsigned>();
  c.lr_separated = j.at("lr_separated").get<bool>();
  c.totally_separated = j.at("totally_separated").get<bool>();
  c.shift_like = j.at("shift_like").get<bool>();
  c.constant = j.at("constant").get<Letter>();
  for (const auto& s : j.at("separated")) {
    c.separated.push_back(SeparatedPosition{
        s.at("position").get<unsigned>(),
        MonomialMap{m, s.at("coefficient").get<Letter>(), s.at("exponent").get<std::uint32_t>()},
        residual_from(s.at("residual"), m)});
  }
  if (!j.at("interior").is_null()) c.interior = residual_from(j.at("interior"), m);
  return c;
}

SeparationClass classification_from_json(const Json& j) {
  return classification_from_json(j.at("classification"), Modulus(j.at("modulus").get<std::uint32_t>()));
}

Json to_json(const UnbalancedWord& w) {
  return Json{{"kind", "UnbalancedWord"}, {"word", w.word}, {"preimages", w.preimages}};
}

UnbalancedWord unbalanced_from_json(const Json& j) {
  return UnbalancedWord{j.at("word").get<Word>(), j.at("preimages").get<std::uint64_t>()};
}

Json to_json(const InjectivityWitness& w) {
  if (const auto* d = std::get_if<Diamond>(&w)) return Json{{"kind", "Diamond"}, {"u", d->u}, {"v", d->v}};
  const auto& p = std::get<PeriodicPair>(w);
  return Json{{"kind", "PeriodicPair"},
              {"modulus", p.x.modulus().value()},
              {"x", p.x.letters()},
              {"y", p.y.letters()}};
}

InjectivityWitness injectivity_witness_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Diamond") return Diamond{j.at("u").get<Word>(), j.at("v").get<Word>()};
  if (kind == "PeriodicPair") {
    const Modulus m(j.at("modulus").get<std::uint32_t>());
    return PeriodicPair{CyclicWord(m, j.at("x").get<Word>()), CyclicWord(m, j.at("y").get<Word>())};
  }
  throw ParseError("unknown witness kind '" + kind + "'", 0);
}

Json to_json(const AnalysisReport& r) {
  Json j = to_json(r.audit);
  j["classification"] = to_json(r.classification);
  j["witnesses"] = Json{{"surjectivity", r.surjectivity_witness ? to_json(*r.surjectivity_witness) : Json(nullptr)},
                        {"injectivity", r.injectivity_witness ? to_json(*r.injectivity_witness) : Json(nullptr)}};
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j;
}

AnalysisReport analysis_from_json(const Json& j) {
  AnalysisReport r;
  r.audit = audit_from_json(j);
  r.classification = classification_from_json(j);
  const Json& w = j.at("witnesses");
  if (!w.at("surjectivity").is_null()) r.surjectivity_witness = unbalanced_from_json(w.at("surjectivity"));
  if (!w.at("injectivity").is_null()) r.injectivity_witness = injectivity_witness_from_json(w.at("injectivity"));
  if (j.contains("elapsed_ms")) r.elapsed_ms = j.at("elapsed_ms").get<double>();
  return r;
}

Json to_json(const ScanEntry& e) {
  return Json{{"rule", e.rule},
              {"q_left", e.q_left},
              {"q_right", e.q_right},
              {"predicted", e.predicted},
              {"surjective", e.surjective}};
}

Json to_json(const ScanReport& r) {
  Json j;
  j["prime"] = r.prime;
  j["bounds"] = Json{{"d", r.bounds.diameter},
                     {"exponent_min", r.bounds.exponent_min},
                     {"exponent_max", r.bounds.exponent_max},
                     {"pi", r.bounds.pi.sample ? "sample:" + std::to_string(r.bounds.pi.count) : std::string("all")},
                     {"seed", r.bounds.seed}};
  j["total"] = r.total;
  j["surjective"] = r.surjective;
  j["predicted"] = r.predicted;
  j["sufficiency_violation_count"] = r.sufficiency_violations.size();
  j["necessity_counterexample_count"] = r.necessity_counterexamples.size();
  j["sufficiency_violations"] = Json::array();
  for (const auto& e : r.sufficiency_violations) j["sufficiency_violations"].push_back(to_json(e));
  j["necessity_counterexamples"] = Json::array();
  for (const auto& e : r.necessity_counterexamples) j["necessity_counterexamples"].push_back(to_json(e));
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j;
}

Json make_document(const std::string& command, const std::vector<std::string>& args, int exit_status, Json report) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = Json{{"name", command}, {"args", args}};
  j["exit_status"] = exit_status;
  j["report"] = std::move(report);
  return j;
}

}  // namespace nlca
