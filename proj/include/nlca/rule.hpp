#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlca/caps.hpp"
#include "nlca/poly.hpp"
#include "nlca/zmod.hpp"

namespace nlca {

// Local rule f : Z_m^(d+1) -> Z_m stored as its full value table. Windows
// (x_1, ..., x_{d+1}) are indexed in mixed radix with x_1 most significant,
// so the window u.a (u of length d, a a letter) has index index(u) * m + a.
class RuleTable {
 public:
  // Throws PreconditionError for a wrong table length or out-of-range entries,
  // CapExceeded when m^(d+1) exceeds caps.table_entries.
  RuleTable(Modulus m, unsigned diameter, std::vector<Letter> values, const Caps& caps = {});

  // Builds the table by calling f(window) for every window.
  template <class F>
  static RuleTable tabulate(Modulus m, unsigned diameter, F&& f, const Caps& caps = {}) {
    const std::size_t n = checked_size(m, diameter, caps);
    std::vector<Letter> values(n);
    Word window(diameter + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = m.reduce(static_cast<std::int64_t>(f(std::span<const Letter>(window))));
      for (std::size_t k = window.size(); k-- > 0;) {
        if (++window[k] < m.value()) break;
        window[k] = 0;
      }
    }
    return RuleTable(m, diameter, std::move(values), caps);
  }

  Modulus modulus() const noexcept { return modulus_; }
  unsigned diameter() const noexcept { return diameter_; }
  unsigned arity() const noexcept { return diameter_ + 1; }
  // Output anchor: F(x)_i = f(x_{i-radius} .. x_{i-radius+d}).
  unsigned radius() const noexcept { return diameter_ / 2; }

  std::span<const Letter> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  Letter at(std::size_t index) const { return values_.at(index); }

  // Throws PreconditionError unless window.size() == d + 1 and all letters are in range.
  Letter operator()(std::span<const Letter> window) const;

  std::size_t window_index(std::span<const Letter> window) const;
  Word window_at(std::size_t index) const;

  // FNV-1a over (m, d, table).
  std::uint64_t hash() const noexcept;

  friend bool operator==(const RuleTable&, const RuleTable&) = default;

  static std::size_t checked_size(Modulus m, unsigned diameter, const Caps& caps);

 private:
  Modulus modulus_;
  unsigned diameter_;
  std::vector<Letter> values_;
};

Letter evaluate_rule(const RuleTable& rule, std::span<const Letter> window);

// f*: output length max(0, |word| - d); output i applies f at input offset i.
Word f_star(const RuleTable& rule, std::span<const Letter> word);

// Spatially periodic configuration letters^infinity, letter 0 at cell 0.
class CyclicWord {
 public:
  // Throws PreconditionError when empty or a letter is out of range.
  CyclicWord(Modulus m, Word letters);

  Modulus modulus() const noexcept { return modulus_; }
  const Word& letters() const noexcept { return letters_; }
  std::size_t period() const noexcept { return letters_.size(); }
  Letter at(std::int64_t cell) const noexcept;

  // Cell i of the result holds cell i + k of this configuration.
  CyclicWord rotated(std::int64_t k) const;

  // Smallest-period representation of the same configuration.
  CyclicWord primitive() const;

  // Same bi-infinite configuration up to a shift.
  bool rotation_equivalent(const CyclicWord& other) const;
  // Same bi-infinite configuration with the same anchor.
  bool same_configuration(const CyclicWord& other) const;

  // Anchored letter-wise equality of the stored representation.
  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  Modulus modulus_;
  Word letters_;
};

CyclicWord apply_periodic(const RuleTable& rule, const CyclicWord& x);

// 1-based positions j such that some pair of windows differing only at j
// has different outputs.
std::vector<unsigned> essential_positions(const RuleTable& rule);

// A map over a subset of window positions (1-based, increasing); values are
// indexed in mixed radix with positions.front() most significant.
struct ResidualMap {
  Modulus modulus;
  std::vector<unsigned> positions;
  std::vector<Letter> values;

  Letter operator()(std::span<const Letter> args) const;
  bool is_constant() const;
  friend bool operator==(const ResidualMap&, const ResidualMap&) = default;
};

// g_j(x) = f(.., x, ..) - f(.., 0, ..) when it is independent of every other
// coordinate, i.e. f = g_j(x_j) + rest. nullopt otherwise.
std::optional<FunctionTable> separable_component(const RuleTable& rule, unsigned position);

struct SeparatedPosition {
  unsigned position;
  MonomialMap monomial;   // canonical exponent, coefficient != 0
  ResidualMap residual;   // f with x_j = 0, over the other essential positions
};

// f = a * x_j^q + pi(other essential coordinates) for all windows, with the
// smallest q and then the smallest a.
std::optional<SeparatedPosition> extract_monomial_at(const RuleTable& rule, unsigned position);

struct SeparationClass {
  std::vector<unsigned> essential;
  std::vector<SeparatedPosition> separated;  // increasing position
  unsigned leftmost = 0;                     // 0 when no essential position
  unsigned rightmost = 0;
  bool lr_separated = false;
  bool totally_separated = false;
  bool shift_like = false;
  // f(0, ..., 0); the folded constant term.
  Letter constant = 0;
  // For LR-separated rules: f with x_l = x_r = 0, over every position strictly
  // between leftmost and rightmost (empty domain when r <= l + 1).
  std::optional<ResidualMap> interior;

  const SeparatedPosition* at(unsigned position) const noexcept;
  bool is_separated_at(unsigned position) const noexcept { return at(position) != nullptr; }
};

SeparationClass classify(const RuleTable& rule);

}  // namespace nlca
