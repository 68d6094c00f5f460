#pragma once

// Rule families for audits and conjecture scans, with a deterministic
// index -> rule decoding so work can be split across threads while results
// keep enumeration order.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <istream>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "nlca/caps.hpp"
#include "nlca/criteria.hpp"

namespace nlca {

enum class FamilyKind { ShiftLike, LrSeparated, TotallySeparated, AllTables };
enum class CoefficientSet { Units, NonZero };

struct PiSelection {
  bool sample = false;
  std::uint64_t count = 0;  // sample size when sample
};

// Line-oriented key=value family description:
//   moduli = 3,5          d = 2
//   kind = shift-like | lr-separated | totally-separated | all-tables
//   exponents = 1..4      coefficients = units | nonzero
//   pi = all | sample:N   seed = K
// Blank lines and '#' comments are ignored.
struct FamilySpec {
  std::vector<std::uint32_t> moduli{3};
  unsigned diameter = 0;
  FamilyKind kind = FamilyKind::ShiftLike;
  std::uint32_t exponent_min = 1;
  std::uint32_t exponent_max = 1;
  CoefficientSet coefficients = CoefficientSet::Units;
  PiSelection pi;
  std::uint64_t seed = 0;

  static FamilySpec parse(std::istream& in);
  static FamilySpec parse(const std::string& text);
};

struct FamilyMember {
  RuleTable rule;
  RawForm raw;
  std::string id;
};

// Materialized index space of a family. member(i) is pure.
class Family {
 public:
  explicit Family(const FamilySpec& spec, const Caps& caps = {});

  std::size_t size() const noexcept { return total_; }
  FamilyMember member(std::size_t index) const;
  // Gcd-disjunction inputs for LR-separated members: (q_l, q_r) as written.
  std::pair<std::uint32_t, std::uint32_t> end_exponents(std::size_t index) const;

 private:
  struct Block {
    Modulus modulus;
    std::vector<Letter> coefficients;
    std::vector<std::vector<Letter>> pis;  // residual tables (lr-separated, all-tables sample)
    std::size_t count;
  };

  const Block& block_of(std::size_t& index) const;

  FamilySpec spec_;
  Caps caps_;
  std::vector<Block> blocks_;
  std::size_t total_ = 0;
};

// Applies fn(i) for i in [0, count) on `jobs` threads and hands results to
// sink in index order.
template <class T, class Fn, class Sink>
void ordered_parallel(std::size_t count, unsigned jobs, Fn&& fn, Sink&& sink) {
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) sink(i, fn(i));
    return;
  }
  const std::size_t window = std::size_t{64} * jobs;
  std::vector<std::optional<T>> results;
  for (std::size_t base = 0; base < count; base += window) {
    const std::size_t n = std::min(window, count - base);
    results.assign(n, std::nullopt);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        (void)t;
        for (std::size_t k; (k = next.fetch_add(1)) < n && !failed.load();) {
          try {
            results[k].emplace(fn(base + k));
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
    for (std::size_t k = 0; k < n; ++k) sink(base + k, std::move(*results[k]));
  }
}

// Runs analyze() on every member; sink receives reports in enumeration order.
void audit(const FamilySpec& spec, unsigned jobs, const Caps& caps,
           const std::function<void(const AuditReport&)>& sink);
std::vector<AuditReport> audit(const FamilySpec& spec, unsigned jobs = 1, const Caps& caps = {});

struct ConjectureBounds {
  unsigned diameter = 2;
  std::uint32_t exponent_min = 1;
  std::uint32_t exponent_max = 4;
  PiSelection pi;
  std::uint64_t seed = 0;
};

struct ScanEntry {
  std::string rule;
  std::uint32_t q_left;
  std::uint32_t q_right;
  bool predicted;   // gcd(q_l, p-1) = 1 or gcd(q_r, p-1) = 1
  bool surjective;  // decider
  friend bool operator==(const ScanEntry&, const ScanEntry&) = default;
};

struct ScanReport {
  std::uint32_t prime = 0;
  ConjectureBounds bounds;
  std::uint64_t total = 0;
  std::uint64_t surjective = 0;
  std::uint64_t predicted = 0;
  std::vector<ScanEntry> sufficiency_violations;     // predicted, not surjective
  std::vector<ScanEntry> necessity_counterexamples;  // surjective, not predicted
  std::optional<double> elapsed_ms;
};

// LR-separated rules over Z_p with l = 1, r = d + 1, unit end coefficients,
// end exponents in bounds and interior pi over all or sampled tables.
ScanReport conjecture_scan(std::uint32_t prime, const ConjectureBounds& bounds, unsigned jobs = 1,
                           const Caps& caps = {});

}  // namespace nlca
