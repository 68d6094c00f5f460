#include "nlca/zmod.hpp"

#include <numeric>
#include <string>

#include "nlca/error.hpp"

namespace nlca {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

Modulus::Modulus(std::uint32_t m) : m_(m), prime_(false) {
  if (m < 2 || m > kMax)
    throw PreconditionError("modulus must lie in [2, 65536], got " + std::to_string(m));
  prime_ = nlca::is_prime(m);
}

Letter Modulus::pow(Letter base, std::uint64_t exponent) const noexcept {
  std::uint64_t result = 1 % m_;
  std::uint64_t b = base % m_;
  while (exponent > 0) {
    if (exponent & 1) result = (result * b) % m_;
    b = (b * b) % m_;
    exponent >>= 1;
  }
  return static_cast<Letter>(result);
}

std::uint32_t totient(Modulus modulus) {
  std::uint32_t n = modulus.value();
  std::uint32_t result = n;
  for (std::uint32_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::uint32_t kempner(Modulus modulus) {
  const std::uint64_t m = modulus.value();
  std::uint64_t factorial = 1;
  for (std::uint32_t k = 1;; ++k) {
    factorial = (factorial * k) % m;
    if (factorial == 0) return k;
  }
}

std::optional<Letter> unit_inverse(Letter a, Modulus modulus) {
  std::int64_t m = modulus.value();
  std::int64_t old_r = a % m, r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  return modulus.reduce(old_s);
}

bool is_unit(Letter a, Modulus m) { return std::gcd(a, m.value()) == 1; }

std::vector<Letter> MonomialMap::table() const {
  std::vector<Letter> out(modulus.value());
  for (Letter x = 0; x < modulus.value(); ++x) out[x] = (*this)(x);
  return out;
}

std::uint32_t canonical_exponent(Letter coefficient, std::uint32_t exponent, Modulus m) {
  if (exponent == 0) throw PreconditionError("monomial exponent must be >= 1");
  const MonomialMap target{m, coefficient, exponent};
  const auto reference = target.table();
  const std::uint32_t bound = kempner(m) + totient(m);
  for (std::uint32_t q = 1; q <= bound && q < exponent; ++q) {
    if (MonomialMap{m, coefficient, q}.table() == reference) return q;
  }
  return exponent;
}

MonomialMap MonomialMap::canonical() const {
  return MonomialMap{modulus, coefficient, canonical_exponent(coefficient, exponent, modulus)};
}

bool is_permutation_table(std::span<const Letter> values, Modulus m) {
  if (values.size() != m.value()) return false;
  std::vector<bool> seen(m.value(), false);
  for (Letter v : values) {
    if (v >= m.value() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

bool monomial_is_bijective(const MonomialMap& h) {
  const auto t = h.table();
  return is_permutation_table(t, h.modulus);
}

std::vector<Letter> monomial_invert(const MonomialMap& h, Letter b) {
  std::vector<Letter> out;
  for (Letter x = 0; x < h.modulus.value(); ++x)
    if (h(x) == b % h.modulus.value()) out.push_back(x);
  return out;
}

}  // namespace nlca
