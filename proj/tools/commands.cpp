#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "nlca/caps.hpp"
#include "nlca/criteria.hpp"
#include "nlca/decide.hpp"
#include "nlca/error.hpp"
#include "nlca/expression.hpp"
#include "nlca/family.hpp"
#include "nlca/poly.hpp"
#include "nlca/report.hpp"
#include "nlca/rule.hpp"

namespace nlca::cli {
namespace {

std::string word_string(const Word& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

std::string periodic_string(const CyclicWord& c) { return word_string(c.letters()) + "^inf"; }

std::string witness_string(const InjectivityWitness& w) {
  if (const auto* d = std::get_if<Diamond>(&w)) return "diamond u=" + word_string(d->u) + " v=" + word_string(d->v);
  const auto& p = std::get<PeriodicPair>(w);
  return "periodic pair x=" + periodic_string(p.x) + " y=" + periodic_string(p.y);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Word parse_letters(const std::string& text) {
  Word w;
  std::string token;
  std::istringstream in(text);
  std::size_t offset = 0;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      w.push_back(static_cast<Letter>(v));
    } catch (const std::exception&) {
      throw ParseError("invalid letter '" + token + "'", offset);
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) flush();
    else token += c;
    ++offset;
  }
  flush();
  return w;
}

struct LoadedRule {
  RuleTable rule;
  std::optional<RawForm> raw;
  std::string id;
};

LoadedRule load_rule(const std::string& expression, const std::string& table_path, const Caps& caps) {
  if (expression.empty() == table_path.empty()) throw ParseError("give exactly one of RULE or --table", 0);
  if (!expression.empty()) {
    const RuleExpression expr = parse_rule_expression(expression);
    return LoadedRule{table_from_expression(expr, caps), RawForm::from_expression(expr), expression};
  }
  std::ifstream in(table_path);
  if (!in) throw ParseError("cannot open '" + table_path + "'", 0);
  return LoadedRule{read_rule_table(in, caps), std::nullopt, "table:" + table_path};
}

// --expect tokens: [non-]surjective, [non-]injective, reversible, irreversible, [non-]permutive:J
struct Expectation {
  std::string token;
  enum { Surjective, Injective, Permutive } property;
  bool value;
  unsigned position = 0;
};

Expectation parse_expectation(const std::string& token) {
  std::string t = token;
  bool value = true;
  if (t.rfind("non-", 0) == 0) value = false, t = t.substr(4);
  else if (t.rfind("not-", 0) == 0) value = false, t = t.substr(4);
  if (t == "surjective") return {token, Expectation::Surjective, value};
  if (t == "injective") return {token, Expectation::Injective, value};
  if (t == "reversible" && value) return {token, Expectation::Injective, true};
  if (t == "irreversible" && value) return {token, Expectation::Injective, false};
  if (t.rfind("permutive:", 0) == 0) {
    try {
      return {token, Expectation::Permutive, value, static_cast<unsigned>(std::stoul(t.substr(10)))};
    } catch (const std::exception&) {
    }
  }
  throw ParseError("unknown expectation '" + token + "'", 0);
}

std::optional<std::string> check_expectation(const Expectation& e, const DeciderVerdicts& d) {
  bool actual = false;
  switch (e.property) {
    case Expectation::Surjective: actual = d.surjective; break;
    case Expectation::Injective: actual = d.injective; break;
    case Expectation::Permutive:
      if (e.position < 1 || e.position > d.permutive.size())
        throw ParseError("expectation position out of range in '" + e.token + "'", 0);
      actual = d.permutive[e.position - 1];
      break;
  }
  if (actual == e.value) return std::nullopt;
  return "expectation '" + e.token + "' failed";
}

void print_analysis_text(std::ostream& out, const AnalysisReport& r) {
  const AuditReport& a = r.audit;
  const SeparationClass& c = r.classification;
  out << "rule        " << a.rule << "\n";
  out << "modulus     " << a.modulus << ", diameter " << a.diameter << "\n";
  out << "surjective  " << (a.deciders.surjective ? "yes" : "no") << "\n";
  out << "injective   " << (a.deciders.injective ? "yes" : "no") << "\n";
  out << "permutive  ";
  for (std::size_t j = 0; j < a.deciders.permutive.size(); ++j)
    out << " x" << j + 1 << ':' << (a.deciders.permutive[j] ? "yes" : "no");
  out << "\nseparated  ";
  if (c.separated.empty()) out << " none";
  for (const auto& s : c.separated)
    out << " x" << s.position << "=" << s.monomial.coefficient << "*x^" << s.monomial.exponent;
  out << "\nclass       lr-separated " << (c.lr_separated ? "yes" : "no") << ", totally separated "
      << (c.totally_separated ? "yes" : "no") << ", shift-like " << (c.shift_like ? "yes" : "no") << "\n";
  out << "criteria\n";
  for (const auto& v : a.criteria) {
    std::string label = v.id + (v.position ? "@" + std::to_string(v.position) : "");
    out << "  " << label << std::string(label.size() < 34 ? 34 - label.size() : 1, ' ') << to_string(v.value);
    if (v.canonical != v.value) out << " (canonical " << to_string(v.canonical) << ")";
    if (!v.note.empty()) out << "  [" << v.note << "]";
    out << "\n";
  }
  out << "discrepancies " << a.discrepancies.size() << "\n";
  for (const auto& d : a.discrepancies) {
    out << "  DISCREPANCY " << d.criterion << (d.position ? "@" + std::to_string(d.position) : "") << " (" << d.variant
        << "): predicts " << (d.expected ? "" : "not ") << to_string(d.property) << ", oracle says "
        << (d.ground_truth ? "" : "not ") << to_string(d.property);
    if (!d.witness.empty()) out << "; " << d.witness;
    out << "\n";
  }
  if (r.surjectivity_witness)
    out << "orphan      " << word_string(r.surjectivity_witness->word) << " has " << r.surjectivity_witness->preimages
        << " preimages\n";
  if (r.injectivity_witness) out << "collision   " << witness_string(*r.injectivity_witness) << "\n";
  if (r.elapsed_ms) out << "elapsed     " << *r.elapsed_ms << " ms\n";
}

// ---------------------------------------------------------------------------
// examples

struct ExampleRecord {
  std::string example;
  std::string expected;
  std::string computed;
  bool agrees;
};

std::vector<ExampleRecord> run_examples() {
  std::vector<ExampleRecord> records;
  auto yes_no = [](bool b) { return std::string(b ? "true" : "false"); };
  auto add_bool = [&](std::string name, bool expected, bool computed) {
    records.push_back({std::move(name), yes_no(expected), yes_no(computed), expected == computed});
  };
  auto rule_of = [](const char* text) { return table_from_expression(parse_rule_expression(text)); };

  {
    const char* name = "a^2+b+c^2 mod 4";
    const RuleTable f = rule_of("m=4; d=2; f=x1^2+x2+x3^2");
    add_bool(std::string(name) + ": surjective", true, decide_surjective(f).surjective);
    add_bool(std::string(name) + ": left permutive", false, permutive_bruteforce(f, 1));
    add_bool(std::string(name) + ": right permutive", false, permutive_bruteforce(f, 3));
  }

  auto add_image = [&](std::string name, const RuleTable& f, Word x, Word expected, bool up_to_shift) {
    const Modulus m = f.modulus();
    const CyclicWord image = apply_periodic(f, CyclicWord(m, std::move(x)));
    const CyclicWord want(m, std::move(expected));
    const bool agrees = up_to_shift ? image.rotation_equivalent(want) : image.same_configuration(want);
    records.push_back({std::move(name), periodic_string(want) + (up_to_shift ? " up to shift" : ""),
                       periodic_string(image), agrees});
  };
  auto permutation = [](std::uint32_t m, std::vector<Letter> coefficients) {
    return is_permutation_poly(UniPoly(Modulus(m), std::move(coefficients)));
  };

  {
    const std::string name = "a^4+3b mod 7";
    const RuleTable f = rule_of("m=7; d=2; f=x1^4+3*x2");
    add_image(name + ": F((5,6)^inf)", f, {5, 6}, {6, 2}, true);
    add_image(name + ": F((4,3)^inf)", f, {4, 3}, {6, 2}, true);
    add_bool(name + ": injective", false, decide_injective(f).injective);
    add_bool(name + ": x^4+3x permutes Z_7", true, permutation(7, {0, 3, 0, 0, 1}));
  }
  {
    const std::string name = "a^3+2b+c^2 mod 5";
    const RuleTable f = rule_of("m=5; d=2; f=x1^3+2*x2+x3^2");
    add_image(name + ": F((1,0)^inf)", f, {1, 0}, {2}, false);
    add_image(name + ": F((3)^inf)", f, {3}, {2}, false);
    add_image(name + ": F((3,0)^inf)", f, {3, 0}, {3, 4}, true);
    add_image(name + ": F((4,1)^inf)", f, {4, 1}, {3, 4}, true);
    add_bool(name + ": injective", false, decide_injective(f).injective);
    add_bool(name + ": x^3+x^2+2x permutes Z_5", true, permutation(5, {0, 2, 1, 1}));
    add_bool(name + ": x^3+2x permutes Z_5", false, permutation(5, {0, 2, 0, 1}));
    add_bool(name + ": x^2 permutes Z_5", false, permutation(5, {0, 0, 1}));
  }
  {
    const FunctionTable delta(Modulus(4), {1, 0, 0, 0});
    const auto found = representability_search(delta, Caps{}.search_budget);
    records.push_back({"Kronecker delta on Z_4: polynomial", "not representable",
                       found ? found->to_string() : "not representable", !found});
  }
  return records;
}

// ---------------------------------------------------------------------------
// trace

void write_pgm(std::ostream& out, const RuleTable& rule, const std::string& rule_id, CyclicWord row, unsigned steps,
               const std::string& seed_note) {
  const std::uint64_t top = rule.modulus().value() - 1;
  out << "P2\n";
  out << "# rule: " << rule_id << "\n";
  out << "# anchor: F(x)_i = f(x_{i-r..i-r+d}), r = floor(d/2) = " << rule.radius() << ", periodic boundary\n";
  out << "# seed: " << seed_note << "\n";
  out << row.period() << ' ' << steps + 1 << "\n255\n";
  for (unsigned t = 0; t <= steps; ++t) {
    for (std::size_t i = 0; i < row.period(); ++i)
      out << (i ? " " : "") << (255 * static_cast<std::uint64_t>(row.letters()[i])) / top;
    out << "\n";
    if (t < steps) row = apply_periodic(rule, row);
  }
}

int fail(std::ostream& err, int code, const std::string& what) {
  err << "ca-verify: " << what << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact deciders and algebraic-criterion audits for cellular automata over Z_m"};
  app.name("ca-verify");
  app.require_subcommand(1);

  std::string format = "json";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };

  // analyze
  std::string rule_text, table_path;
  std::vector<std::string> expectations;
  bool timings = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "classify a rule, run every criterion and decider");
  analyze_cmd->add_option("rule", rule_text, "rule expression, e.g. \"m=3; d=1; f=x1+x2\"");
  analyze_cmd->add_option("--table", table_path, "rule table file");
  analyze_cmd->add_option("--expect", expectations, "surjective, non-injective, permutive:J, ...")->delimiter(',');
  analyze_cmd->add_flag("--timings", timings, "include elapsed time in the report");
  add_format(analyze_cmd);

  auto* examples_cmd = app.add_subcommand("examples", "recompute the worked examples");
  add_format(examples_cmd);

  std::string family_path;
  unsigned jobs = 1;
  auto* audit_cmd = app.add_subcommand("audit", "audit every rule of a family file (JSON lines)");
  audit_cmd->add_option("family", family_path, "family spec file")->required();
  audit_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_format(audit_cmd);

  std::uint32_t prime = 3;
  ConjectureBounds bounds;
  std::string q_range = "1..4", pi_text = "all";
  auto* conjecture_cmd = app.add_subcommand("conjecture", "scan lr-separated rules over Z_p for the gcd conjecture");
  conjecture_cmd->add_option("--p", prime, "prime modulus");
  conjecture_cmd->add_option("--d", bounds.diameter, "diameter (>= 2)");
  conjecture_cmd->add_option("--q", q_range, "end exponent range a..b");
  conjecture_cmd->add_option("--pi", pi_text, "all or sample:N");
  conjecture_cmd->add_option("--seed", bounds.seed, "sampling seed");
  conjecture_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_format(conjecture_cmd);

  auto* witness_cmd = app.add_subcommand("witness", "print a non-injectivity witness");
  witness_cmd->add_option("rule", rule_text, "rule expression");
  witness_cmd->add_option("--table", table_path, "rule table file");
  add_format(witness_cmd);

  std::string init_text, output_path;
  std::optional<std::uint64_t> trace_seed;
  std::size_t width = 64;
  unsigned steps = 0;
  auto* trace_cmd = app.add_subcommand("trace", "space-time diagram as ASCII PGM");
  trace_cmd->add_option("rule", rule_text, "rule expression");
  trace_cmd->add_option("--table", table_path, "rule table file");
  trace_cmd->add_option("--init", init_text, "initial periodic row, e.g. 5,6");
  trace_cmd->add_option("--seed", trace_seed, "random initial row seed");
  trace_cmd->add_option("--width", width, "random row width")->check(CLI::PositiveNumber);
  trace_cmd->add_option("--steps", steps, "time steps T (>= 1)")->required();
  trace_cmd->add_option("-o,--output", output_path, "output file (default stdout)");

  std::uint32_t interp_modulus = 0;
  std::string values_text, values_path;
  auto* interpolate_cmd = app.add_subcommand("interpolate", "polynomial representing a function Z_m -> Z_m");
  interpolate_cmd->add_option("--m", interp_modulus, "modulus")->required();
  interpolate_cmd->add_option("--values", values_text, "table values f(0),...,f(m-1)");
  interpolate_cmd->add_option("--file", values_path, "file holding the table values");
  add_format(interpolate_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  const bool json = format == "json";
  std::string command = app.get_subcommands().front()->get_name();

  try {
    const Caps caps = Caps::from_environment();

    if (analyze_cmd->parsed()) {
      std::vector<Expectation> wanted;
      for (const auto& e : expectations) wanted.push_back(parse_expectation(e));
      const LoadedRule loaded = load_rule(rule_text, table_path, caps);
      AnalysisReport report = analyze(loaded.rule, loaded.raw ? &*loaded.raw : nullptr, loaded.id, caps);
      if (!timings) report.elapsed_ms.reset();
      int status = kOk;
      for (const auto& e : wanted) {
        if (auto why = check_expectation(e, report.audit.deciders)) {
          err << "ca-verify: " << *why << "\n";
          status = kExpectationFailed;
        }
      }
      if (json) out << make_document(command, args, status, to_json(report)).dump(2) << "\n";
      else print_analysis_text(out, report);
      return status;
    }

    if (examples_cmd->parsed()) {
      const auto records = run_examples();
      if (json) {
        Json list = Json::array();
        for (const auto& r : records)
          list.push_back(Json{{"example", r.example},
                              {"expected", r.expected},
                              {"computed", r.computed},
                              {"status", r.agrees ? "ok" : "DISCREPANCY"}});
        out << make_document(command, args, kOk, Json{{"examples", list}}).dump(2) << "\n";
      } else {
        for (const auto& r : records) {
          out << (r.agrees ? "ok          " : "DISCREPANCY ") << r.example << ": expected " << r.expected
              << ", computed " << r.computed << "\n";
        }
      }
      return kOk;
    }

    if (audit_cmd->parsed()) {
      const FamilySpec spec = FamilySpec::parse(read_file(family_path));
      std::uint64_t rules = 0, discrepancies = 0, violations = 0;
      audit(spec, jobs, caps, [&](const AuditReport& r) {
        ++rules;
        discrepancies += r.discrepancies.size();
        for (const auto& d : r.discrepancies)
          if (d.criterion == "surjectivity_sufficient" && is_prime(r.modulus)) ++violations;
        if (json) {
          out << to_json(r).dump() << "\n";
        } else {
          out << r.rule << ": surjective " << (r.deciders.surjective ? "yes" : "no") << ", injective "
              << (r.deciders.injective ? "yes" : "no") << ", discrepancies " << r.discrepancies.size() << "\n";
          for (const auto& d : r.discrepancies)
            out << "  DISCREPANCY " << d.criterion << (d.position ? "@" + std::to_string(d.position) : "") << " ("
                << d.variant << ") " << d.witness << "\n";
        }
      });
      const int status = violations ? kSufficiencyViolation : kOk;
      const Json summary{{"rules", rules}, {"discrepancies", discrepancies}, {"prime_sufficiency_violations", violations}};
      if (json) out << make_document(command, args, status, summary).dump() << "\n";
      else out << "rules " << rules << ", discrepancies " << discrepancies << "\n";
      return status;
    }

    if (conjecture_cmd->parsed()) {
      const auto dots = q_range.find("..");
      try {
        if (dots == std::string::npos) {
          bounds.exponent_min = bounds.exponent_max = static_cast<std::uint32_t>(std::stoul(q_range));
        } else {
          bounds.exponent_min = static_cast<std::uint32_t>(std::stoul(q_range.substr(0, dots)));
          bounds.exponent_max = static_cast<std::uint32_t>(std::stoul(q_range.substr(dots + 2)));
        }
      } catch (const std::exception&) {
        throw ParseError("invalid exponent range '" + q_range + "'", 0);
      }
      if (pi_text == "all") {
        bounds.pi = PiSelection{};
      } else if (pi_text.rfind("sample:", 0) == 0) {
        try {
          bounds.pi = PiSelection{true, std::stoull(pi_text.substr(7))};
        } catch (const std::exception&) {
          throw ParseError("invalid pi selection '" + pi_text + "'", 0);
        }
      } else {
        throw ParseError("pi must be 'all' or 'sample:N'", 0);
      }
      ScanReport scan = conjecture_scan(prime, bounds, jobs, caps);
      scan.elapsed_ms.reset();
      const int status = scan.sufficiency_violations.empty() ? kOk : kSufficiencyViolation;
      if (json) {
        out << make_document(command, args, status, to_json(scan)).dump() << "\n";
      } else {
        out << "p " << scan.prime << ", rules " << scan.total << ", surjective " << scan.surjective
            << ", predicted " << scan.predicted << "\n";
        out << "sufficiency violations " << scan.sufficiency_violations.size() << "\n";
        for (const auto& e : scan.sufficiency_violations) out << "  " << e.rule << "\n";
        out << "necessity counterexamples " << scan.necessity_counterexamples.size() << "\n";
        for (const auto& e : scan.necessity_counterexamples) out << "  " << e.rule << "\n";
      }
      return status;
    }

    if (witness_cmd->parsed()) {
      const LoadedRule loaded = load_rule(rule_text, table_path, caps);
      const InjectivityResult result = decide_injective(loaded.rule, caps);
      if (json) {
        const Json body{{"rule", loaded.id},
                        {"injective", result.injective},
                        {"witness", result.witness ? to_json(*result.witness) : Json(nullptr)}};
        out << make_document(command, args, kOk, body).dump(2) << "\n";
      } else {
        out << (result.witness ? witness_string(*result.witness) : std::string("injective: no witness")) << "\n";
      }
      return kOk;
    }

    if (trace_cmd->parsed()) {
      if (steps < 1) throw ParseError("--steps must be at least 1", 0);
      if (init_text.empty() == !trace_seed) throw ParseError("give exactly one of --init or --seed", 0);
      const LoadedRule loaded = load_rule(rule_text, table_path, caps);
      const Modulus m = loaded.rule.modulus();
      Word row;
      std::string seed_note = "none";
      if (trace_seed) {
        std::mt19937_64 rng(*trace_seed);
        for (std::size_t i = 0; i < width; ++i) row.push_back(static_cast<Letter>(rng() % m.value()));
        seed_note = std::to_string(*trace_seed) + " (mt19937_64, width " + std::to_string(width) + ")";
      } else {
        row = parse_letters(init_text);
      }
      CyclicWord start(m, std::move(row));
      if (output_path.empty()) {
        write_pgm(out, loaded.rule, loaded.id, std::move(start), steps, seed_note);
      } else {
        std::ofstream file(output_path);
        if (!file) throw ParseError("cannot write '" + output_path + "'", 0);
        write_pgm(file, loaded.rule, loaded.id, std::move(start), steps, seed_note);
      }
      return kOk;
    }

    if (interpolate_cmd->parsed()) {
      if (values_text.empty() == values_path.empty()) throw ParseError("give exactly one of --values or --file", 0);
      const Word values = parse_letters(values_path.empty() ? values_text : read_file(values_path));
      const Modulus m(interp_modulus);
      const FunctionTable table(m, values);
      std::optional<UniPoly> poly;
      std::string method;
      if (m.is_prime()) {
        poly = interpolate_prime(table);
        method = "lagrange";
      } else {
        poly = representability_search(table, caps.search_budget);
        method = "kempner-search";
      }
      if (json) {
        const Json body{{"modulus", m.value()},
                        {"values", values},
                        {"method", method},
                        {"representable", poly.has_value()},
                        {"polynomial", poly ? Json(poly->to_string()) : Json(nullptr)}};
        out << make_document(command, args, kOk, body).dump(2) << "\n";
      } else {
        out << (poly ? poly->to_string() : std::string("not representable")) << "\n";
      }
      return kOk;
    }
  } catch (const ParseError& e) {
    return fail(err, kParseError, std::string("parse error: ") + e.what());
  } catch (const CapExceeded& e) {
    return fail(err, kCapExceeded, std::string("cap exceeded: ") + e.what());
  } catch (const PreconditionError& e) {
    return fail(err, kParseError, std::string("invalid input: ") + e.what());
  }
  return fail(err, kParseError, "no command");
}

}  // namespace nlca::cli
