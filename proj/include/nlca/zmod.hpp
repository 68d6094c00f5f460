#pragma once

// Exact arithmetic over Z_m for desk-scale moduli (2 <= m <= 2^16).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nlca {

// A letter of the alphabet Z_m, always kept in [0, m).
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

bool is_prime(std::uint64_t n);

class Modulus {
 public:
  static constexpr std::uint32_t kMax = 1u << 16;

  // Throws PreconditionError unless 2 <= m <= kMax.
  explicit Modulus(std::uint32_t m);

  std::uint32_t value() const noexcept { return m_; }
  bool is_prime() const noexcept { return prime_; }

  Letter reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(m_);
    return static_cast<Letter>(r < 0 ? r + m_ : r);
  }
  Letter add(Letter a, Letter b) const noexcept { return (a + b) % m_; }
  Letter sub(Letter a, Letter b) const noexcept { return (a + m_ - b) % m_; }
  Letter mul(Letter a, Letter b) const noexcept {
    return static_cast<Letter>((std::uint64_t{a} * b) % m_);
  }
  Letter neg(Letter a) const noexcept { return (m_ - a) % m_; }
  // Raw power with 0^0 = 1.
  Letter pow(Letter base, std::uint64_t exponent) const noexcept;

  // True when v is a valid letter.
  bool contains(std::uint64_t v) const noexcept { return v < m_; }

  friend bool operator==(const Modulus& a, const Modulus& b) noexcept { return a.m_ == b.m_; }

 private:
  std::uint32_t m_;
  bool prime_;
};

// Number of units of Z_m.
std::uint32_t totient(Modulus m);

// Smallest k >= 1 with m | k!.
std::uint32_t kempner(Modulus m);

std::optional<Letter> unit_inverse(Letter a, Modulus m);

bool is_unit(Letter a, Modulus m);

// The map x -> a * x^q on Z_m.
struct MonomialMap {
  Modulus modulus;
  Letter coefficient;
  std::uint32_t exponent;

  Letter operator()(Letter x) const noexcept {
    return modulus.mul(coefficient, modulus.pow(x, exponent));
  }

  // Image table (value at x for x = 0..m-1).
  std::vector<Letter> table() const;

  // Same map with the smallest exponent q' >= 1 inducing the identical table,
  // searched up to kempner(m) + totient(m). Requires exponent >= 1.
  MonomialMap canonical() const;

  friend bool operator==(const MonomialMap&, const MonomialMap&) = default;
};

std::uint32_t canonical_exponent(Letter coefficient, std::uint32_t exponent, Modulus m);

// Brute force: evaluates the full image table.
bool monomial_is_bijective(const MonomialMap& h);

// All x with h(x) = b, in increasing order.
std::vector<Letter> monomial_invert(const MonomialMap& h, Letter b);

// True iff `values` (length m) is a permutation of Z_m.
bool is_permutation_table(std::span<const Letter> values, Modulus m);

}  // namespace nlca
