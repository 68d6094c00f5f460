#include "nlca/poly.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "nlca/error.hpp"

namespace nlca {
namespace {

void require_prime(Modulus m, const char* op) {
  if (!m.is_prime())
    throw PreconditionError(std::string(op) + " requires a prime modulus, got " +
                            std::to_string(m.value()));
}

void require_same(const UniPoly& a, const UniPoly& b) {
  if (!(a.modulus() == b.modulus())) throw PreconditionError("polynomial modulus mismatch");
}

}  // namespace

UniPoly::UniPoly(Modulus m, std::vector<Letter> coefficients)
    : modulus_(m), coeffs_(std::move(coefficients)) {
  for (Letter& c : coeffs_) c %= m.value();
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::monomial(Modulus m, Letter coefficient, std::uint32_t exponent) {
  std::vector<Letter> c(exponent + 1, 0);
  c[exponent] = coefficient;
  return UniPoly(m, std::move(c));
}

UniPoly UniPoly::field_vanishing(Modulus p) {
  std::vector<Letter> c(p.value() + 1, 0);
  c[1] = p.value() - 1;
  c[p.value()] = 1;
  return UniPoly(p, std::move(c));
}

std::string UniPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Letter c = coeffs_[i];
    if (c == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (i == 0) {
      out << c;
      continue;
    }
    if (c != 1) out << c << '*';
    out << 'x';
    if (i > 1) out << '^' << i;
  }
  return out.str();
}

FunctionTable::FunctionTable(Modulus m, std::vector<Letter> v) : modulus(m), values(std::move(v)) {
  if (values.size() != m.value())
    throw PreconditionError("function table must have exactly m = " + std::to_string(m.value()) +
                            " entries, got " + std::to_string(values.size()));
  for (Letter x : values)
    if (!m.contains(x)) throw PreconditionError("function table entry out of range");
}

Letter evaluate(const UniPoly& p, Letter x) {
  const Modulus m = p.modulus();
  if (!m.contains(x)) throw PreconditionError("evaluation point outside Z_m");
  Letter acc = 0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = m.add(m.mul(acc, x), *it);
  return acc;
}

FunctionTable table_of(const UniPoly& p) {
  std::vector<Letter> v(p.modulus().value());
  for (Letter x = 0; x < v.size(); ++x) v[x] = evaluate(p, x);
  return FunctionTable(p.modulus(), std::move(v));
}

UniPoly derivative(const UniPoly& p) {
  const Modulus m = p.modulus();
  const auto& c = p.coefficients();
  if (c.size() <= 1) return UniPoly::zero(m);
  std::vector<Letter> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = m.mul(m.reduce(static_cast<std::int64_t>(i)), c[i]);
  return UniPoly(m, std::move(d));
}

UniPoly frobenius_reduce(const UniPoly& p) {
  const Modulus m = p.modulus();
  require_prime(m, "frobenius_reduce");
  const std::size_t prime = m.value();
  std::vector<Letter> out(std::min(p.coefficients().size(), prime), 0);
  const auto& c = p.coefficients();
  for (std::size_t e = 0; e < c.size(); ++e) {
    std::size_t target = e;
    // x^e with e >= p induces the same function as x^(e-(p-1)).
    if (target >= prime) target = (target - 1) % (prime - 1) + 1;
    out[target] = m.add(out[target], c[e]);
  }
  return UniPoly(m, std::move(out));
}

UniPoly poly_mod(const UniPoly& a, const UniPoly& b) {
  require_same(a, b);
  const Modulus m = a.modulus();
  require_prime(m, "poly_mod");
  if (b.is_zero()) throw PreconditionError("polynomial division by zero");
  std::vector<Letter> r = a.coefficients();
  const auto& d = b.coefficients();
  const Letter inv_lead = *unit_inverse(b.leading(), m);
  while (r.size() >= d.size()) {
    const Letter factor = m.mul(r.back(), inv_lead);
    const std::size_t shift = r.size() - d.size();
    for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] = m.sub(r[shift + i], m.mul(factor, d[i]));
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  return UniPoly(m, std::move(r));
}

UniPoly poly_gcd(const UniPoly& a, const UniPoly& b) {
  require_same(a, b);
  const Modulus m = a.modulus();
  require_prime(m, "poly_gcd");
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = poly_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  const Letter inv = *unit_inverse(x.leading(), m);
  std::vector<Letter> monic = x.coefficients();
  for (Letter& c : monic) c = m.mul(c, inv);
  return UniPoly(m, std::move(monic));
}

bool is_permutation_poly(const UniPoly& p) {
  const auto t = table_of(p);
  return is_permutation_table(t.values, p.modulus());
}

bool hermite_criterion(const UniPoly& p) {
  const Modulus m = p.modulus();
  require_prime(m, "hermite_criterion");
  if (p.degree() >= static_cast<int>(m.value())) return false;
  const UniPoly g = poly_gcd(derivative(p), UniPoly::field_vanishing(m));
  return g == UniPoly(m, {1});
}

UniPoly interpolate_prime(const FunctionTable& t) {
  const Modulus m = t.modulus;
  require_prime(m, "interpolate_prime");
  const std::size_t n = m.value();
  // Augmented Vandermonde system V a = t with rows (1, h, h^2, ..., h^(n-1) | t(h)).
  std::vector<std::vector<Letter>> rows(n, std::vector<Letter>(n + 1));
  for (std::size_t h = 0; h < n; ++h) {
    Letter power = 1;
    for (std::size_t k = 0; k < n; ++k) {
      rows[h][k] = power;
      power = m.mul(power, static_cast<Letter>(h));
    }
    rows[h][n] = t.values[h];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && rows[pivot][col] == 0) ++pivot;
    // The Vandermonde determinant over distinct nodes is a unit.
    std::swap(rows[col], rows[pivot]);
    const Letter inv = *unit_inverse(rows[col][col], m);
    for (Letter& v : rows[col]) v = m.mul(v, inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || rows[r][col] == 0) continue;
      const Letter factor = rows[r][col];
      for (std::size_t k = col; k <= n; ++k) rows[r][k] = m.sub(rows[r][k], m.mul(factor, rows[col][k]));
    }
  }
  std::vector<Letter> coeffs(n);
  for (std::size_t k = 0; k < n; ++k) coeffs[k] = rows[k][n];
  return UniPoly(m, std::move(coeffs));
}

std::optional<UniPoly> representability_search(const FunctionTable& t, std::uint64_t budget) {
  const Modulus m = t.modulus;
  const std::uint32_t length = kempner(m);
  std::uint64_t box = 1;
  for (std::uint32_t i = 0; i < length; ++i) {
    if (box > budget / m.value()) throw CapExceeded("representability search box m^kempner(m) exceeds budget");
    box *= m.value();
  }
  // Precomputed powers: pw[k][x] = x^k.
  const std::size_t n = m.value();
  std::vector<std::vector<Letter>> pw(length, std::vector<Letter>(n));
  for (std::uint32_t k = 0; k < length; ++k)
    for (Letter x = 0; x < n; ++x) pw[k][x] = m.pow(x, k);

  std::vector<Letter> coeffs(length, 0);
  for (std::uint64_t idx = 0; idx < box; ++idx) {
    // c0 is the most significant digit, so idx order is lexicographic on (c0, c1, ...).
    std::uint64_t rest = idx;
    for (std::uint32_t k = length; k-- > 0;) {
      coeffs[k] = static_cast<Letter>(rest % n);
      rest /= n;
    }
    bool match = true;
    for (Letter x = 0; x < n && match; ++x) {
      Letter acc = 0;
      for (std::uint32_t k = 0; k < length; ++k) acc = m.add(acc, m.mul(coeffs[k], pw[k][x]));
      match = acc == t.values[x];
    }
    if (match) return UniPoly(m, coeffs);
  }
  return std::nullopt;
}

}  // namespace nlca
