#include "nlca/family.hpp"

#include <chrono>
#include <numeric>
#include <charconv>
#include <random>
#include <sstream>

#include "nlca/error.hpp"

namespace nlca {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t number(const std::string& text, std::size_t line) {
  std::uint64_t v = 0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ParseError("expected a non-negative integer, got '" + t + "' on line " + std::to_string(line), line);
  return v;
}

// Checked multiply against the family cap.
std::uint64_t grow(std::uint64_t acc, std::uint64_t factor, const Caps& caps) {
  if (factor != 0 && acc > caps.search_budget / factor)
    throw CapExceeded("family size exceeds the search budget of " + std::to_string(caps.search_budget));
  return acc * factor;
}

std::vector<Letter> decode_table(std::uint64_t index, std::size_t length, std::size_t m) {
  std::vector<Letter> t(length);
  for (std::size_t k = length; k-- > 0;) {
    t[k] = static_cast<Letter>(index % m);
    index /= m;
  }
  return t;
}

std::string monomial_text(Letter a, unsigned position, std::uint32_t q) {
  std::string s;
  if (a != 1) s += std::to_string(a) + "*";
  s += "x" + std::to_string(position);
  if (q != 1) s += "^" + std::to_string(q);
  return s;
}

std::string table_text(const std::vector<Letter>& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t[i]);
  }
  return s + "]";
}

}  // namespace

FamilySpec FamilySpec::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

FamilySpec FamilySpec::parse(std::istream& in) {
  FamilySpec spec;
  std::string line;
  std::size_t lineno = 0;
  bool have_exponents = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value on line " + std::to_string(lineno), lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "moduli" || key == "m") {
      spec.moduli.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const std::uint64_t m = number(item, lineno);
        if (m < 2 || m > Modulus::kMax) throw ParseError("modulus out of range on line " + std::to_string(lineno), lineno);
        spec.moduli.push_back(static_cast<std::uint32_t>(m));
      }
      if (spec.moduli.empty()) throw ParseError("empty moduli list", lineno);
    } else if (key == "d") {
      spec.diameter = static_cast<unsigned>(number(value, lineno));
    } else if (key == "kind") {
      if (value == "shift-like") spec.kind = FamilyKind::ShiftLike;
      else if (value == "lr-separated") spec.kind = FamilyKind::LrSeparated;
      else if (value == "totally-separated") spec.kind = FamilyKind::TotallySeparated;
      else if (value == "all-tables") spec.kind = FamilyKind::AllTables;
      else throw ParseError("unknown kind '" + value + "'", lineno);
    } else if (key == "exponents" || key == "q") {
      const auto dots = value.find("..");
      if (dots == std::string::npos) {
        spec.exponent_min = spec.exponent_max = static_cast<std::uint32_t>(number(value, lineno));
      } else {
        spec.exponent_min = static_cast<std::uint32_t>(number(value.substr(0, dots), lineno));
        spec.exponent_max = static_cast<std::uint32_t>(number(value.substr(dots + 2), lineno));
      }
      if (spec.exponent_min == 0 || spec.exponent_max < spec.exponent_min)
        throw ParseError("exponent range must satisfy 1 <= min <= max", lineno);
      have_exponents = true;
    } else if (key == "coefficients") {
      if (value == "units") spec.coefficients = CoefficientSet::Units;
      else if (value == "nonzero") spec.coefficients = CoefficientSet::NonZero;
      else throw ParseError("unknown coefficient set '" + value + "'", lineno);
    } else if (key == "pi") {
      if (value == "all") {
        spec.pi = PiSelection{};
      } else if (value.rfind("sample:", 0) == 0) {
        spec.pi = PiSelection{true, number(value.substr(7), lineno)};
        if (spec.pi.count == 0) throw ParseError("sample size must be positive", lineno);
      } else {
        throw ParseError("pi must be 'all' or 'sample:N'", lineno);
      }
    } else if (key == "seed") {
      spec.seed = number(value, lineno);
    } else {
      throw ParseError("unknown key '" + key + "' on line " + std::to_string(lineno), lineno);
    }
  }
  if (!have_exponents && spec.kind != FamilyKind::AllTables) spec.exponent_max = spec.exponent_min;
  if (spec.kind == FamilyKind::LrSeparated && spec.diameter == 0)
    throw ParseError("lr-separated families need d >= 1", lineno);
  return spec;
}

Family::Family(const FamilySpec& spec, const Caps& caps) : spec_(spec), caps_(caps) {
  std::mt19937_64 rng(spec.seed);
  const std::uint64_t exps = spec.exponent_max - spec.exponent_min + 1;
  for (std::uint32_t mv : spec.moduli) {
    const Modulus m(mv);
    RuleTable::checked_size(m, spec.diameter, caps);
    Block block{m, {}, {}, 0};
    for (Letter a = 1; a < mv; ++a)
      if (spec.coefficients == CoefficientSet::NonZero || is_unit(a, m)) block.coefficients.push_back(a);
    const std::uint64_t coeffs = block.coefficients.size();

    auto pi_space = [&](std::size_t length) -> std::uint64_t {
      if (spec.pi.sample) {
        for (std::uint64_t s = 0; s < spec.pi.count; ++s) {
          std::vector<Letter> t(length);
          for (Letter& v : t) v = static_cast<Letter>(rng() % mv);
          block.pis.push_back(std::move(t));
        }
        return spec.pi.count;
      }
      std::uint64_t n = 1;
      for (std::size_t k = 0; k < length; ++k) n = grow(n, mv, caps);
      return n;
    };

    std::uint64_t count = 0;
    switch (spec.kind) {
      case FamilyKind::ShiftLike:
        count = grow(exps, coeffs, caps);
        break;
      case FamilyKind::LrSeparated: {
        std::size_t interior = 1;
        for (unsigned k = 1; k < spec.diameter; ++k) interior *= mv;
        count = grow(grow(grow(exps * exps, coeffs, caps), coeffs, caps), pi_space(interior), caps);
        break;
      }
      case FamilyKind::TotallySeparated:
        count = 1;
        for (unsigned k = 0; k <= spec.diameter; ++k) count = grow(count, exps * coeffs, caps);
        break;
      case FamilyKind::AllTables: {
        std::size_t entries = 1;
        for (unsigned k = 0; k <= spec.diameter; ++k) entries *= mv;
        count = pi_space(entries);
        break;
      }
    }
    block.count = static_cast<std::size_t>(count);
    total_ = static_cast<std::size_t>(grow(1, total_ + block.count, caps));
    blocks_.push_back(std::move(block));
  }
}

const Family::Block& Family::block_of(std::size_t& index) const {
  for (const Block& b : blocks_) {
    if (index < b.count) return b;
    index -= b.count;
  }
  throw PreconditionError("family index out of range");
}

std::pair<std::uint32_t, std::uint32_t> Family::end_exponents(std::size_t index) const {
  const Block& b = block_of(index);
  if (spec_.kind != FamilyKind::LrSeparated) throw PreconditionError("end exponents exist only for lr-separated families");
  const std::size_t exps = spec_.exponent_max - spec_.exponent_min + 1;
  const std::size_t per_q = b.count / (exps * exps);
  index /= per_q;
  return {spec_.exponent_min + static_cast<std::uint32_t>(index / exps),
          spec_.exponent_min + static_cast<std::uint32_t>(index % exps)};
}

FamilyMember Family::member(std::size_t index) const {
  const Block& b = block_of(index);
  const Modulus m = b.modulus;
  const std::size_t mv = m.value();
  const unsigned d = spec_.diameter;
  const std::size_t exps = spec_.exponent_max - spec_.exponent_min + 1;
  const std::size_t coeffs = b.coefficients.size();
  const std::string head = "m=" + std::to_string(mv) + "; d=" + std::to_string(d) + "; f=";

  switch (spec_.kind) {
    case FamilyKind::ShiftLike: {
      const std::uint32_t q = spec_.exponent_min + static_cast<std::uint32_t>(index / coeffs);
      const Letter a = b.coefficients[index % coeffs];
      const std::string text = head + monomial_text(a, 1, q);
      const RuleExpression expr = parse_rule_expression(text);
      return FamilyMember{table_from_expression(expr, caps_), RawForm::from_expression(expr), text};
    }
    case FamilyKind::TotallySeparated: {
      std::string body;
      for (unsigned p = d + 1; p >= 1; --p) {
        const std::size_t digit = index % (exps * coeffs);
        index /= exps * coeffs;
        const std::uint32_t q = spec_.exponent_min + static_cast<std::uint32_t>(digit / coeffs);
        const Letter a = b.coefficients[digit % coeffs];
        body = monomial_text(a, p, q) + (body.empty() ? "" : "+" + body);
      }
      const RuleExpression expr = parse_rule_expression(head + body);
      return FamilyMember{table_from_expression(expr, caps_), RawForm::from_expression(expr), head + body};
    }
    case FamilyKind::LrSeparated: {
      const std::size_t per_q = b.count / (exps * exps);
      const std::size_t qs = index / per_q;
      std::size_t rest = index % per_q;
      const std::size_t pis = per_q / (coeffs * coeffs);
      const std::size_t pi_index = rest % pis;
      rest /= pis;
      const Letter ar = b.coefficients[rest % coeffs];
      const Letter al = b.coefficients[rest / coeffs];
      const std::uint32_t ql = spec_.exponent_min + static_cast<std::uint32_t>(qs / exps);
      const std::uint32_t qr = spec_.exponent_min + static_cast<std::uint32_t>(qs % exps);
      std::size_t interior = 1;
      for (unsigned k = 1; k < d; ++k) interior *= mv;
      const std::vector<Letter> pi = spec_.pi.sample ? b.pis[pi_index] : decode_table(pi_index, interior, mv);

      const std::string ends = monomial_text(al, 1, ql) + "+" + monomial_text(ar, d + 1, qr);
      const RuleExpression expr = parse_rule_expression(head + ends);
      RuleTable rule = RuleTable::tabulate(
          m, d,
          [&](std::span<const Letter> w) {
            std::size_t k = 0;
            for (unsigned p = 1; p + 1 < w.size(); ++p) k = k * mv + w[p];
            return m.add(expr.evaluate(w), pi[k]);
          },
          caps_);
      std::string args;
      for (unsigned p = 2; p <= d; ++p) args += (args.empty() ? "x" : ",x") + std::to_string(p);
      // pi is table-given: interior positions have no written form.
      RawForm raw = RawForm::from_expression(expr);
      for (unsigned p = 2; p <= d; ++p) raw.exponents.erase(p), raw.components.erase(p);
      return FamilyMember{std::move(rule), std::move(raw), head + ends + " + pi(" + args + ")=" + table_text(pi)};
    }
    case FamilyKind::AllTables: {
      std::size_t entries = 1;
      for (unsigned k = 0; k <= d; ++k) entries *= mv;
      std::vector<Letter> t = spec_.pi.sample ? b.pis[index] : decode_table(index, entries, mv);
      std::string id = "m=" + std::to_string(mv) + "; d=" + std::to_string(d) + "; table=" + table_text(t);
      return FamilyMember{RuleTable(m, d, std::move(t), caps_), RawForm{}, std::move(id)};
    }
  }
  throw PreconditionError("unknown family kind");
}

void audit(const FamilySpec& spec, unsigned jobs, const Caps& caps,
           const std::function<void(const AuditReport&)>& sink) {
  const Family family(spec, caps);
  ordered_parallel<AuditReport>(
      family.size(), jobs,
      [&](std::size_t i) {
        FamilyMember member = family.member(i);
        return analyze(member.rule, &member.raw, std::move(member.id), caps).audit;
      },
      [&](std::size_t, AuditReport&& r) { sink(r); });
}

std::vector<AuditReport> audit(const FamilySpec& spec, unsigned jobs, const Caps& caps) {
  std::vector<AuditReport> out;
  audit(spec, jobs, caps, [&](const AuditReport& r) { out.push_back(r); });
  return out;
}

ScanReport conjecture_scan(std::uint32_t prime, const ConjectureBounds& bounds, unsigned jobs, const Caps& caps) {
  const auto start = std::chrono::steady_clock::now();
  if (!is_prime(prime) || prime < 3) throw PreconditionError("conjecture scan needs an odd prime");
  if (bounds.diameter == 0) throw PreconditionError("conjecture scan needs d >= 1");
  FamilySpec spec;
  spec.moduli = {prime};
  spec.diameter = bounds.diameter;
  spec.kind = FamilyKind::LrSeparated;
  spec.exponent_min = bounds.exponent_min;
  spec.exponent_max = bounds.exponent_max;
  spec.coefficients = CoefficientSet::Units;
  spec.pi = bounds.pi;
  spec.seed = bounds.seed;
  const Family family(spec, caps);

  ScanReport report;
  report.prime = prime;
  report.bounds = bounds;
  ordered_parallel<ScanEntry>(
      family.size(), jobs,
      [&](std::size_t i) {
        FamilyMember member = family.member(i);
        const auto [ql, qr] = family.end_exponents(i);
        const bool predicted = std::gcd(ql, prime - 1) == 1 || std::gcd(qr, prime - 1) == 1;
        return ScanEntry{std::move(member.id), ql, qr, predicted, decide_surjective(member.rule, caps).surjective};
      },
      [&](std::size_t, ScanEntry&& e) {
        ++report.total;
        report.surjective += e.surjective;
        report.predicted += e.predicted;
        if (e.predicted && !e.surjective) report.sufficiency_violations.push_back(std::move(e));
        else if (e.surjective && !e.predicted) report.necessity_counterexamples.push_back(std::move(e));
      });
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace nlca
