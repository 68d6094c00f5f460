#include "nlca/rule.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nlca/error.hpp"

namespace nlca {
namespace {

// m^k as a table stride; callers stay within the table cap.
std::size_t power(std::size_t m, unsigned k) {
  std::size_t r = 1;
  while (k-- > 0) r *= m;
  return r;
}

// Weight of window position j (1-based) in the mixed-radix index.
std::size_t weight(const RuleTable& rule, unsigned j) {
  return power(rule.modulus().value(), rule.arity() - j);
}

void require_position(const RuleTable& rule, unsigned j) {
  if (j < 1 || j > rule.arity())
    throw PreconditionError("window position " + std::to_string(j) + " outside [1, " +
                            std::to_string(rule.arity()) + "]");
}

}  // namespace

std::size_t RuleTable::checked_size(Modulus m, unsigned diameter, const Caps& caps) {
  std::uint64_t n = 1;
  for (unsigned k = 0; k <= diameter; ++k) {
    n *= m.value();
    if (n > caps.table_entries)
      throw CapExceeded("rule table m^(d+1) exceeds the table cap of " + std::to_string(caps.table_entries));
  }
  return static_cast<std::size_t>(n);
}

RuleTable::RuleTable(Modulus m, unsigned diameter, std::vector<Letter> values, const Caps& caps)
    : modulus_(m), diameter_(diameter), values_(std::move(values)) {
  const std::size_t n = checked_size(m, diameter, caps);
  if (values_.size() != n)
    throw PreconditionError("rule table needs " + std::to_string(n) + " entries, got " +
                            std::to_string(values_.size()));
  for (Letter v : values_)
    if (!m.contains(v)) throw PreconditionError("rule table entry " + std::to_string(v) + " outside Z_m");
}

std::size_t RuleTable::window_index(std::span<const Letter> window) const {
  if (window.size() != arity())
    throw PreconditionError("window length " + std::to_string(window.size()) + " != d + 1 = " +
                            std::to_string(arity()));
  std::size_t idx = 0;
  for (Letter a : window) {
    if (!modulus_.contains(a)) throw PreconditionError("window letter outside Z_m");
    idx = idx * modulus_.value() + a;
  }
  return idx;
}

Word RuleTable::window_at(std::size_t index) const {
  Word w(arity());
  for (std::size_t k = w.size(); k-- > 0;) {
    w[k] = static_cast<Letter>(index % modulus_.value());
    index /= modulus_.value();
  }
  return w;
}

Letter RuleTable::operator()(std::span<const Letter> window) const { return values_[window_index(window)]; }

std::uint64_t RuleTable::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int k = 0; k < 4; ++k) {
      h ^= (v >> (16 * k)) & 0xffff;
      h *= 1099511628211ull;
    }
  };
  mix(modulus_.value());
  mix(diameter_);
  for (Letter v : values_) mix(v);
  return h;
}

Letter evaluate_rule(const RuleTable& rule, std::span<const Letter> window) { return rule(window); }

Word f_star(const RuleTable& rule, std::span<const Letter> word) {
  const std::size_t d = rule.diameter();
  if (word.size() <= d) return {};
  Word out(word.size() - d);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rule(word.subspan(i, d + 1));
  return out;
}

CyclicWord::CyclicWord(Modulus m, Word letters) : modulus_(m), letters_(std::move(letters)) {
  if (letters_.empty()) throw PreconditionError("cyclic word must be non-empty");
  for (Letter a : letters_)
    if (!m.contains(a)) throw PreconditionError("cyclic word letter outside Z_m");
}

Letter CyclicWord::at(std::int64_t cell) const noexcept {
  const auto n = static_cast<std::int64_t>(letters_.size());
  std::int64_t k = cell % n;
  if (k < 0) k += n;
  return letters_[static_cast<std::size_t>(k)];
}

CyclicWord CyclicWord::rotated(std::int64_t k) const {
  Word out(letters_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(static_cast<std::int64_t>(i) + k);
  return CyclicWord(modulus_, std::move(out));
}

CyclicWord CyclicWord::primitive() const {
  const std::size_t n = letters_.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = letters_[i] == letters_[i - p];
    if (periodic) return CyclicWord(modulus_, Word(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(p)));
  }
  return *this;
}

bool CyclicWord::same_configuration(const CyclicWord& other) const {
  if (!(modulus_ == other.modulus_)) return false;
  return primitive().letters_ == other.primitive().letters_;
}

bool CyclicWord::rotation_equivalent(const CyclicWord& other) const {
  if (!(modulus_ == other.modulus_)) return false;
  const CyclicWord a = primitive();
  const CyclicWord b = other.primitive();
  if (a.period() != b.period()) return false;
  for (std::size_t k = 0; k < a.period(); ++k)
    if (a.rotated(static_cast<std::int64_t>(k)).letters_ == b.letters_) return true;
  return false;
}

CyclicWord apply_periodic(const RuleTable& rule, const CyclicWord& x) {
  if (!(rule.modulus() == x.modulus())) throw PreconditionError("configuration modulus differs from rule modulus");
  const auto rho = static_cast<std::int64_t>(rule.radius());
  Word window(rule.arity());
  Word out(x.period());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < window.size(); ++k)
      window[k] = x.at(static_cast<std::int64_t>(i) - rho + static_cast<std::int64_t>(k));
    out[i] = rule(window);
  }
  return CyclicWord(x.modulus(), std::move(out));
}

std::vector<unsigned> essential_positions(const RuleTable& rule) {
  const std::size_t m = rule.modulus().value();
  std::vector<unsigned> out;
  for (unsigned j = 1; j <= rule.arity(); ++j) {
    const std::size_t w = weight(rule, j);
    bool essential = false;
    for (std::size_t idx = 0; idx < rule.size() && !essential; ++idx) {
      const std::size_t digit = (idx / w) % m;
      essential = rule.at(idx) != rule.at(idx - digit * w);
    }
    if (essential) out.push_back(j);
  }
  return out;
}

Letter ResidualMap::operator()(std::span<const Letter> args) const {
  if (args.size() != positions.size()) throw PreconditionError("residual map argument count mismatch");
  std::size_t idx = 0;
  for (Letter a : args) idx = idx * modulus.value() + a;
  return values.at(idx);
}

bool ResidualMap::is_constant() const {
  return std::all_of(values.begin(), values.end(), [&](Letter v) { return v == values.front(); });
}

std::optional<FunctionTable> separable_component(const RuleTable& rule, unsigned j) {
  require_position(rule, j);
  const Modulus mod = rule.modulus();
  const std::size_t m = mod.value();
  const std::size_t w = weight(rule, j);
  std::vector<Letter> g(m, 0);
  bool first_context = true;
  for (std::size_t base = 0; base < rule.size(); ++base) {
    if ((base / w) % m != 0) continue;  // contexts: windows with x_j = 0
    const Letter zero_value = rule.at(base);
    for (std::size_t x = 0; x < m; ++x) {
      const Letter diff = mod.sub(rule.at(base + x * w), zero_value);
      if (first_context) {
        g[x] = diff;
      } else if (g[x] != diff) {
        return std::nullopt;
      }
    }
    first_context = false;
  }
  return FunctionTable(mod, std::move(g));
}

namespace {

ResidualMap residual_without(const RuleTable& rule, std::vector<unsigned> positions,
                             const std::vector<unsigned>& zeroed) {
  const std::size_t m = rule.modulus().value();
  const std::size_t count = power(m, static_cast<unsigned>(positions.size()));
  std::vector<Letter> values(count);
  Word window(rule.arity(), 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = positions.size(); k-- > 0;) {
      window[positions[k] - 1] = static_cast<Letter>(rest % m);
      rest /= m;
    }
    for (unsigned z : zeroed) window[z - 1] = 0;
    values[idx] = rule(window);
  }
  return ResidualMap{rule.modulus(), std::move(positions), std::move(values)};
}

}  // namespace

std::optional<SeparatedPosition> extract_monomial_at(const RuleTable& rule, unsigned j) {
  const auto component = separable_component(rule, j);
  if (!component) return std::nullopt;
  const Modulus mod = rule.modulus();
  const std::uint32_t bound = kempner(mod) + totient(mod);
  std::optional<MonomialMap> found;
  for (std::uint32_t q = 1; q <= bound && !found; ++q) {
    for (Letter a = 1; a < mod.value(); ++a) {
      const MonomialMap h{mod, a, q};
      if (h.table() == component->values) {
        found = h;
        break;
      }
    }
  }
  if (!found) return std::nullopt;

  std::vector<unsigned> others;
  for (unsigned p : essential_positions(rule))
    if (p != j) others.push_back(p);
  return SeparatedPosition{j, *found, residual_without(rule, std::move(others), {j})};
}

const SeparatedPosition* SeparationClass::at(unsigned position) const noexcept {
  for (const auto& s : separated)
    if (s.position == position) return &s;
  return nullptr;
}

SeparationClass classify(const RuleTable& rule) {
  SeparationClass c;
  c.essential = essential_positions(rule);
  c.constant = rule.at(0);
  if (c.essential.empty()) return c;
  c.leftmost = c.essential.front();
  c.rightmost = c.essential.back();
  for (unsigned j : c.essential)
    if (auto s = extract_monomial_at(rule, j)) c.separated.push_back(std::move(*s));

  c.totally_separated = c.separated.size() == c.essential.size();
  c.lr_separated = c.is_separated_at(c.leftmost) && c.is_separated_at(c.rightmost);
  c.shift_like = c.lr_separated && c.leftmost == c.rightmost;
  if (c.lr_separated) {
    std::vector<unsigned> between;
    for (unsigned p = c.leftmost + 1; p < c.rightmost; ++p) between.push_back(p);
    std::vector<unsigned> zeroed{c.leftmost};
    if (c.rightmost != c.leftmost) zeroed.push_back(c.rightmost);
    c.interior = residual_without(rule, std::move(between), zeroed);
  }
  return c;
}

}  // namespace nlca
