#include <random>

#include "doctest.h"
#include "nlca/decide.hpp"
#include "nlca/error.hpp"
#include "nlca/expression.hpp"
#include "oracles.hpp"

using namespace nlca;

namespace {
RuleTable rule(const char* text) { return table_from_expression(parse_rule_expression(text)); }

RuleTable nth_rule(std::uint32_t m, unsigned d, std::uint64_t index) {
  const unsigned n = static_cast<unsigned>(oracle::ipow(m, d + 1));
  return RuleTable(Modulus(m), d, oracle::decode(index, n, m));
}

bool witness_checks_out(const RuleTable& f, const InjectivityWitness& w) {
  if (const auto* d = std::get_if<Diamond>(&w)) return oracle::is_diamond(f, d->u, d->v);
  const auto& p = std::get<PeriodicPair>(w);
  return !oracle::same_configuration(p.x.letters(), p.y.letters()) &&
         oracle::same_configuration(oracle::periodic_image(f, p.x.letters()), oracle::periodic_image(f, p.y.letters()));
}

// Orphan witness is shortest and lexicographically first among orphans.
void check_orphan(const RuleTable& f, const UnbalancedWord& w) {
  CHECK(w.preimages == 0);
  CHECK(oracle::count_preimages(f, w.word) == 0);
  const std::uint32_t m = f.modulus().value();
  for (unsigned n = 1; n < w.word.size(); ++n)
    for (std::uint64_t c : oracle::preimage_histogram(f, n)) CHECK(c > 0);
  const auto same = oracle::preimage_histogram(f, static_cast<unsigned>(w.word.size()));
  for (std::uint64_t i = 0; i < oracle::encode(w.word, m); ++i) CHECK(same[i] > 0);
}
}  // namespace

TEST_CASE("graphs: degrees") {
  const RuleTable f = rule("m=3; d=2; f=x1*x2+x3^2");
  const DeBruijnGraph g(f);
  CHECK(g.vertex_count() == 9);
  std::vector<int> indegree(9, 0);
  for (std::size_t u = 0; u < 9; ++u) {
    std::size_t out = 0;
    for (Letter c = 0; c < 3; ++c) out += g.letters_with_label(u, c).size();
    CHECK(out == 3);
    for (Letter a = 0; a < 3; ++a) ++indegree[g.successor(u, a)];
  }
  for (int k : indegree) CHECK(k == 3);

  const PairGraph p(f);
  CHECK(p.vertex_count() == 81);
  for (std::size_t v = 0; v < p.vertex_count(); ++v) {
    if (!p.diagonal(v)) continue;
    int diagonal_edges = 0;
    for (const auto& e : p.edges(v)) diagonal_edges += (e.a == e.b && p.diagonal(e.target));
    CHECK(diagonal_edges == 3);
  }
  CHECK_THROWS_AS(PairGraph(rule("m=3; d=0; f=x1")), PreconditionError);
  Caps tiny;
  tiny.pair_vertices = 80;
  CHECK_THROWS_AS(PairGraph(f, tiny), CapExceeded);
}

TEST_CASE("surjectivity examples") {
  CHECK(decide_surjective(rule("m=4; d=2; f=x1^2+x2+x3^2")).surjective);
  CHECK(decide_surjective(rule("m=3; d=1; f=x2")).surjective);
  const RuleTable sq = rule("m=3; d=1; f=x1^2+x2^2");
  const SurjectivityResult r = decide_surjective(sq);
  CHECK_FALSE(r.surjective);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->word == Word{0, 2});
  check_orphan(sq, *r.witness);
  // The letters themselves are already unbalanced.
  CHECK(count_preimages(sq, Word{0}) == 1);
  CHECK(count_preimages(sq, Word{1}) == 4);
  CHECK(count_preimages(sq, Word{2}) == 4);
  CHECK(validate(sq, UnbalancedWord{Word{1}, 4}));
  CHECK_FALSE(validate(sq, UnbalancedWord{Word{1}, 3}));
}

TEST_CASE("count_preimages") {
  const RuleTable f = rule("m=3; d=1; f=x1+x2");
  for (Letter a = 0; a < 3; ++a) CHECK(count_preimages(f, Word{a}) == 3);
  CHECK_THROWS_AS(count_preimages(f, Word{}), PreconditionError);
  CHECK_THROWS_AS(count_preimages(f, Word{3}), PreconditionError);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t m = 2 + trial % 3;
    const unsigned d = trial % 3;
    std::vector<Letter> v(oracle::ipow(m, d + 1));
    for (auto& x : v) x = static_cast<Letter>(rng() % m);
    const RuleTable g(Modulus(m), d, v);
    for (unsigned n = 1; n <= 4; ++n) {
      Word w(n);
      for (auto& a : w) a = static_cast<Letter>(rng() % m);
      CHECK(count_preimages(g, w) == oracle::count_preimages(g, w));
    }
  }
}

TEST_CASE("count_preimages reports overflow") {
  const RuleTable zero(Modulus(256), 2, std::vector<Letter>(1u << 24, 0));
  CHECK(count_preimages(zero, Word{0}) == (1ull << 24));
  CHECK_THROWS_AS(count_preimages(zero, Word(7, 0)), CapExceeded);
}

TEST_CASE("subset construction respects its cap") {
  Caps tiny;
  tiny.subset_states = 1;
  CHECK_THROWS_AS(decide_surjective(rule("m=3; d=2; f=x1*x2+x3^2"), tiny), CapExceeded);
  CHECK(decide_surjective(rule("m=3; d=1; f=x1+x2"), tiny).surjective);
}

TEST_CASE("surjectivity agrees with the balance oracle: m = 2, d <= 2 exhaustive") {
  for (unsigned d = 0; d <= 2; ++d) {
    const std::uint64_t rules = oracle::ipow(2, static_cast<unsigned>(oracle::ipow(2, d + 1)));
    for (std::uint64_t i = 0; i < rules; ++i) {
      const RuleTable f = nth_rule(2, d, i);
      const SurjectivityResult r = decide_surjective(f);
      CHECK(r.surjective == oracle::balanced(f, 6));
      CHECK(r.witness.has_value() != r.surjective);
      if (r.witness) check_orphan(f, *r.witness);
    }
  }
}

TEST_CASE("injectivity examples") {
  CHECK(decide_injective(rule("m=3; d=2; f=x1")).injective);
  CHECK(decide_injective(rule("m=3; d=0; f=x1")).injective);
  CHECK(decide_injective(rule("m=5; d=0; f=2*x1+1")).injective);
  CHECK_FALSE(decide_injective(rule("m=5; d=0; f=x1^2")).injective);

  const RuleTable f = rule("m=7; d=2; f=x1^4+3*x2");
  const InjectivityResult r = decide_injective(f);
  CHECK_FALSE(r.injective);
  REQUIRE(r.witness.has_value());
  REQUIRE(std::holds_alternative<PeriodicPair>(*r.witness));
  CHECK(validate(f, *r.witness));
  CHECK(witness_checks_out(f, *r.witness));
  // The pair from the worked example also collides.
  const PeriodicPair printed{CyclicWord(Modulus(7), {5, 6}), CyclicWord(Modulus(7), {4, 3})};
  CHECK(validate(f, printed));

  const RuleTable g = rule("m=3; d=1; f=x1+x2");
  const InjectivityResult s = decide_injective(g);
  CHECK_FALSE(s.injective);
  REQUIRE(s.witness.has_value());
  CHECK(witness_checks_out(g, *s.witness));
}

TEST_CASE("injective rules are surjective and not bipermutive") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const RuleTable f = nth_rule(3, 1, rng() % 19683);
    const bool inj = decide_injective(f).injective;
    if (inj) {
      CHECK(decide_surjective(f).surjective);
      const bool bipermutive = permutive_bruteforce(f, 1) && permutive_bruteforce(f, 2);
      CHECK_FALSE(bipermutive);
    }
  }
}

TEST_CASE("injectivity agrees with collision oracles: m = 2, d <= 2 exhaustive") {
  for (unsigned d = 0; d <= 2; ++d) {
    const std::uint64_t rules = oracle::ipow(2, static_cast<unsigned>(oracle::ipow(2, d + 1)));
    for (std::uint64_t i = 0; i < rules; ++i) {
      const RuleTable f = nth_rule(2, d, i);
      const InjectivityResult r = decide_injective(f);
      const auto diamond = oracle::diamond_length(f, 20);
      const bool collides = diamond.has_value() || oracle::periodic_collision(f, 16).has_value();
      CHECK(r.injective == !collides);
      if (!r.witness) continue;
      CHECK(witness_checks_out(f, *r.witness));
      CHECK(validate(f, *r.witness));
      if (d > 0) {
        // A diamond is reported whenever one exists, at minimal length.
        CHECK(std::holds_alternative<Diamond>(*r.witness) == diamond.has_value());
        if (const auto* dm = std::get_if<Diamond>(&*r.witness)) CHECK(dm->u.size() == *diamond);
      }
    }
  }
}

TEST_CASE("injectivity witnesses on sampled larger rules") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t m = 3 + trial % 2;
    const unsigned d = 1 + trial % 2;
    const std::uint64_t n = oracle::ipow(m, d + 1);
    std::vector<Letter> v(n);
    for (auto& x : v) x = static_cast<Letter>(rng() % m);
    const RuleTable f(Modulus(m), d, v);
    const InjectivityResult r = decide_injective(f);
    if (r.injective) {
      CHECK_FALSE(oracle::periodic_collision(f, 6).has_value());
      CHECK_FALSE(oracle::diamond_length(f, 10).has_value());
    } else {
      REQUIRE(r.witness.has_value());
      CHECK(witness_checks_out(f, *r.witness));
    }
  }
}

TEST_CASE("witness validation rejects bogus witnesses") {
  const RuleTable f = rule("m=3; d=1; f=x1+x2");
  CHECK_FALSE(validate(f, Diamond{{0, 1, 2}, {0, 1, 2}}));
  CHECK_FALSE(validate(f, Diamond{{0, 1}, {0, 1, 2}}));
  CHECK_FALSE(validate(f, Diamond{{0, 1, 2}, {1, 1, 2}}));
  CHECK_FALSE(validate(f, PeriodicPair{CyclicWord(Modulus(3), {1}), CyclicWord(Modulus(3), {1, 1})}));
  CHECK_FALSE(validate(f, PeriodicPair{CyclicWord(Modulus(3), {1}), CyclicWord(Modulus(3), {2})}));
  CHECK(validate(f, PeriodicPair{CyclicWord(Modulus(3), {1, 2}), CyclicWord(Modulus(3), {2, 1})}));
}

TEST_CASE("bipermutive collisions") {
  for (const auto& [text, width] : {std::pair{"m=3; d=1; f=x1+x2", 4u}, std::pair{"m=5; d=2; f=x1+x2+x3", 5u},
                                     std::pair{"m=7; d=2; f=3*x1^5+x2*x2+2*x3+4", 6u},
                                     std::pair{"m=5; d=4; f=x2^3+x3*x4+x5+1", 8u}}) {
    const RuleTable f = rule(text);
    const SeparationClass cls = classify(f);
    const auto [u, v] = bipermutive_collision(f, cls, width);
    CHECK(u.size() == 2 * width + 1);
    CHECK(v.size() == u.size());
    CHECK(u != v);
    const Word iu = oracle::image(f, u), iv = oracle::image(f, v);
    CHECK(iu == iv);
    CHECK(std::all_of(iu.begin(), iu.end(), [&](Letter a) { return a == iu.front(); }));
    CHECK_FALSE(decide_injective(f).injective);
  }
  const RuleTable g = rule("m=4; d=2; f=x1^2+x2+x3^2");
  CHECK_THROWS_AS(bipermutive_collision(g, classify(g), 6), PreconditionError);
  const RuleTable h = rule("m=3; d=1; f=x1+x2");
  CHECK_THROWS_AS(bipermutive_collision(h, classify(h), 1), PreconditionError);
}

TEST_CASE("brute-force permutivity") {
  CHECK(permutive_bruteforce(rule("m=3; d=1; f=x1+x2"), 1));
  CHECK_FALSE(permutive_bruteforce(rule("m=4; d=2; f=x1^2+x2+x3^2"), 3));
  CHECK(permutive_bruteforce(rule("m=7; d=2; f=x1^4+3*x2"), 2));
  CHECK_THROWS_AS(permutive_bruteforce(rule("m=7; d=2; f=x1"), 4), PreconditionError);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t m = 2 + trial % 3;
    const unsigned d = trial % 3;
    std::vector<Letter> v(oracle::ipow(m, d + 1));
    // Mix of random tables and sums of a permutation with noise elsewhere.
    for (auto& x : v) x = static_cast<Letter>(rng() % m);
    RuleTable f(Modulus(m), d, v);
    if (trial % 2) {
      const RuleTable noise = f;
      f = RuleTable::tabulate(Modulus(m), d, [&](std::span<const Letter> w) {
        Word z(w.begin(), w.end());
        z[0] = 0;
        return w[0] + noise(z);
      });
    }
    for (unsigned j = 1; j <= d + 1; ++j) CHECK(permutive_bruteforce(f, j) == oracle::permutive(f, j));
  }
}
