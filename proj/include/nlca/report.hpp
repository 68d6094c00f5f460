#pragma once

// JSON serialization of reports. Field order is fixed (ordered_json), so a
// parsed-and-redumped document is byte-identical to the original.

#include <string>
#include <vector>

#include "json.hpp"
#include "nlca/criteria.hpp"
#include "nlca/family.hpp"

namespace nlca {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "nlca-report/1";

Json to_json(const CriterionVerdict& v);
Json to_json(const Discrepancy& d);
Json to_json(const AuditReport& r);
Json to_json(const SeparationClass& c);
Json to_json(const UnbalancedWord& w);
Json to_json(const InjectivityWitness& w);
Json to_json(const AnalysisReport& r);
Json to_json(const ScanEntry& e);
Json to_json(const ScanReport& r);

CriterionVerdict criterion_from_json(const Json& j);
Discrepancy discrepancy_from_json(const Json& j);
AuditReport audit_from_json(const Json& j);
SeparationClass classification_from_json(const Json& j);
UnbalancedWord unbalanced_from_json(const Json& j);
InjectivityWitness injectivity_witness_from_json(const Json& j);
AnalysisReport analysis_from_json(const Json& j);

// Envelope shared by every command:
//   {"schema", "command": {"name", "args"}, "exit_status", "report"}
Json make_document(const std::string& command, const std::vector<std::string>& args, int exit_status, Json report);

}  // namespace nlca
