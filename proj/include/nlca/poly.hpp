#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlca/zmod.hpp"

namespace nlca {

// Univariate polynomial over Z_m. coefficients()[i] is the coefficient of
// x^i; the sequence never ends in a zero, so the zero polynomial is empty.
class UniPoly {
 public:
  // Coefficients are reduced mod m and trailing zeros dropped.
  UniPoly(Modulus m, std::vector<Letter> coefficients);

  static UniPoly zero(Modulus m) { return UniPoly(m, {}); }
  static UniPoly monomial(Modulus m, Letter coefficient, std::uint32_t exponent);
  // x^p - x, the product of (x - c) over the field Z_p.
  static UniPoly field_vanishing(Modulus p);

  Modulus modulus() const noexcept { return modulus_; }
  const std::vector<Letter>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Letter leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }

  // "c0 + c1*x + c2*x^2 + ...", zero terms omitted, unit coefficients elided.
  std::string to_string() const;

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  Modulus modulus_;
  std::vector<Letter> coeffs_;
};

// A function Z_m -> Z_m given by its value table.
struct FunctionTable {
  Modulus modulus;
  std::vector<Letter> values;

  FunctionTable(Modulus m, std::vector<Letter> v);
  Letter operator()(Letter x) const { return values.at(x); }
  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

// Horner evaluation; throws PreconditionError when x is not a letter of Z_m.
Letter evaluate(const UniPoly& p, Letter x);
FunctionTable table_of(const UniPoly& p);

UniPoly derivative(const UniPoly& p);

// Prime modulus only: replaces x^e (e >= p) by x^(e - (p - 1)) until every
// exponent is below p.
UniPoly frobenius_reduce(const UniPoly& p);

// Euclidean remainder over a prime field.
UniPoly poly_mod(const UniPoly& a, const UniPoly& b);

// Monic gcd over a prime field; gcd(0, 0) = 0.
UniPoly poly_gcd(const UniPoly& a, const UniPoly& b);

// Ground truth: the induced map is a bijection of Z_m.
bool is_permutation_poly(const UniPoly& p);

// The simplified invertibility predicate deg(p) < p0 and
// gcd(p', x^p0 - x) = 1, evaluated literally. Not ground truth.
bool hermite_criterion(const UniPoly& p);

// Unique polynomial of degree < p interpolating t over the prime field Z_p,
// obtained by Gaussian elimination on the Vandermonde system.
UniPoly interpolate_prime(const FunctionTable& t);

// Exhaustive search over all coefficient vectors of length kempner(m) in
// lexicographic order of (c0, c1, ...). Returns the first polynomial inducing
// t, or nullopt if t is not a polynomial function. Throws CapExceeded when
// m^kempner(m) exceeds `budget`.
std::optional<UniPoly> representability_search(const FunctionTable& t, std::uint64_t budget);

}  // namespace nlca
