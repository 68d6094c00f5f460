#pragma once

// Ground-truth deciders for surjectivity and injectivity of the global map,
// with witnesses that re-validate by direct recomputation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "nlca/caps.hpp"
#include "nlca/rule.hpp"

namespace nlca {

// Vertices are the words of length d (index in mixed radix); the edge from
// u on letter a goes to u[2..d].a and carries the label f(u.a). The edge index
// u * m + a is the window index of u.a.
class DeBruijnGraph {
 public:
  explicit DeBruijnGraph(const RuleTable& rule);

  std::size_t vertex_count() const noexcept { return vertices_; }
  std::size_t successor(std::size_t u, Letter a) const noexcept { return (u * m_ + a) % vertices_; }
  Letter label(std::size_t u, Letter a) const noexcept { return rule_->at(u * m_ + a); }
  // Letters a (increasing) whose edge from u carries label c.
  std::span<const Letter> letters_with_label(std::size_t u, Letter c) const noexcept;

 private:
  const RuleTable* rule_;
  std::size_t m_;
  std::size_t vertices_;
  std::vector<std::uint32_t> offsets_;  // (u, c) -> range in letters_
  std::vector<Letter> letters_;
};

// Ordered pairs (u, v) of length-d words with an edge for every letter pair
// (a, b) such that f(u.a) = f(v.b). Requires d >= 1.
class PairGraph {
 public:
  struct Edge {
    std::uint32_t target;
    Letter a;
    Letter b;
  };

  PairGraph(const RuleTable& rule, const Caps& caps = {});

  std::size_t vertex_count() const noexcept { return side_ * side_; }
  std::size_t side() const noexcept { return side_; }
  std::size_t vertex(std::size_t u, std::size_t v) const noexcept { return u * side_ + v; }
  std::size_t left(std::size_t vertex) const noexcept { return vertex / side_; }
  std::size_t right(std::size_t vertex) const noexcept { return vertex % side_; }
  bool diagonal(std::size_t vertex) const noexcept { return left(vertex) == right(vertex); }
  std::span<const Edge> edges(std::size_t vertex) const noexcept;

 private:
  std::size_t side_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Edge> edges_;
};

// A word with preimage count != m^d under f*.
struct UnbalancedWord {
  Word word;
  std::uint64_t preimages;
  friend bool operator==(const UnbalancedWord&, const UnbalancedWord&) = default;
};

// Distinct equal-length words sharing their first d and last d letters with
// equal f* images.
struct Diamond {
  Word u;
  Word v;
  friend bool operator==(const Diamond&, const Diamond&) = default;
};

// Distinct periodic configurations with equal images.
struct PeriodicPair {
  CyclicWord x;
  CyclicWord y;
  friend bool operator==(const PeriodicPair&, const PeriodicPair&) = default;
};

using InjectivityWitness = std::variant<Diamond, PeriodicPair>;

struct SurjectivityResult {
  bool surjective;
  std::optional<UnbalancedWord> witness;  // shortest orphan word when not surjective
  std::size_t explored_subsets;
};

struct InjectivityResult {
  bool injective;
  std::optional<InjectivityWitness> witness;
};

// Subset construction on the de Bruijn graph starting from the full vertex
// set. Throws CapExceeded past caps.subset_states.
SurjectivityResult decide_surjective(const RuleTable& rule, const Caps& caps = {});

// Number of words of length |w| + d mapped onto w by f*. Requires |w| >= 1.
std::uint64_t count_preimages(const RuleTable& rule, std::span<const Letter> w);

// Non-injective iff some off-diagonal pair-graph vertex both reaches a cycle
// and is reachable from one. Throws CapExceeded past caps.pair_vertices.
InjectivityResult decide_injective(const RuleTable& rule, const Caps& caps = {});

// For every context, x_j -> f(.., x_j, ..) is a bijection of Z_m.
bool permutive_bruteforce(const RuleTable& rule, unsigned position);

bool validate(const RuleTable& rule, const UnbalancedWord& w);
bool validate(const RuleTable& rule, const Diamond& w);
bool validate(const RuleTable& rule, const PeriodicPair& w);
bool validate(const RuleTable& rule, const InjectivityWitness& w);

// Central windows (length 2W + 1) of two distinct configurations with the
// same constant image, built from the preimages of 1 and -1 under the
// leftmost and rightmost monomials. Requires an LR-separated rule with l < r,
// permutive at both l and r, and W >= r - l + d.
std::pair<Word, Word> bipermutive_collision(const RuleTable& rule, const SeparationClass& cls, unsigned half_width);

}  // namespace nlca
