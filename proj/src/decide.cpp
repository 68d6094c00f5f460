#include "nlca/decide.hpp"

#include <numeric>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "nlca/error.hpp"

namespace nlca {
namespace {

std::size_t word_count(std::size_t m, unsigned length) {
  std::size_t n = 1;
  for (unsigned k = 0; k < length; ++k) n *= m;
  return n;
}

Word digits(std::size_t index, std::size_t m, unsigned length) {
  Word w(length);
  for (std::size_t k = length; k-- > 0;) {
    w[k] = static_cast<Letter>(index % m);
    index /= m;
  }
  return w;
}

using Subset = std::vector<std::uint64_t>;

struct SubsetHash {
  std::size_t operator()(const Subset& s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : s) {
      h ^= w;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

bool empty(const Subset& s) {
  return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
}

}  // namespace

DeBruijnGraph::DeBruijnGraph(const RuleTable& rule)
    : rule_(&rule), m_(rule.modulus().value()), vertices_(word_count(m_, rule.diameter())) {
  offsets_.assign(vertices_ * m_ + 1, 0);
  for (std::size_t u = 0; u < vertices_; ++u)
    for (Letter a = 0; a < m_; ++a) ++offsets_[u * m_ + label(u, a) + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  letters_.resize(vertices_ * m_);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t u = 0; u < vertices_; ++u)
    for (Letter a = 0; a < m_; ++a) letters_[fill[u * m_ + label(u, a)]++] = a;
}

std::span<const Letter> DeBruijnGraph::letters_with_label(std::size_t u, Letter c) const noexcept {
  const std::size_t slot = u * m_ + c;
  return std::span<const Letter>(letters_).subspan(offsets_[slot], offsets_[slot + 1] - offsets_[slot]);
}

namespace {

// Breadth-first subset construction shared by the one-word and multi-word
// subset encodings. Step(key, c) returns the successor subset on label c.
template <class Key, class Hash, class Step, class IsEmpty>
SurjectivityResult subset_search(const RuleTable& rule, const Caps& caps, Key full, Step&& step, IsEmpty&& is_empty) {
  const std::size_t m = rule.modulus().value();
  std::vector<Key> states{full};
  std::vector<std::pair<std::size_t, Letter>> parent{{0, 0}};
  std::unordered_map<Key, std::size_t, Hash> index{{full, 0}};
  for (std::size_t current = 0; current < states.size(); ++current) {
    for (Letter c = 0; c < m; ++c) {
      Key next = step(states[current], c);
      if (is_empty(next)) {
        Word word{c};
        for (std::size_t s = current; s != 0; s = parent[s].first) word.push_back(parent[s].second);
        std::reverse(word.begin(), word.end());
        return {false, UnbalancedWord{word, count_preimages(rule, word)}, states.size()};
      }
      if (index.find(next) != index.end()) continue;
      if (states.size() >= caps.subset_states)
        throw CapExceeded("subset construction exceeded " + std::to_string(caps.subset_states) + " states");
      index.emplace(next, states.size());
      states.push_back(std::move(next));
      parent.emplace_back(current, c);
    }
  }
  return {true, std::nullopt, states.size()};
}

}  // namespace

SurjectivityResult decide_surjective(const RuleTable& rule, const Caps& caps) {
  const DeBruijnGraph graph(rule);
  const std::size_t n = graph.vertex_count();
  const std::size_t m = rule.modulus().value();
  const std::size_t words = (n + 63) / 64;

  // masks[(u * m + c) * words ..] is the set of endpoints of c-labelled edges leaving u.
  std::vector<std::uint64_t> masks(n * m * words, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (Letter a = 0; a < m; ++a) {
      const std::size_t v = graph.successor(u, a);
      masks[(u * m + graph.label(u, a)) * words + v / 64] |= std::uint64_t{1} << (v % 64);
    }
  }

  if (words == 1) {
    const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    return subset_search<std::uint64_t, std::hash<std::uint64_t>>(
        rule, caps, full,
        [&](std::uint64_t from, Letter c) {
          std::uint64_t next = 0;
          while (from != 0) {
            next |= masks[static_cast<std::size_t>(__builtin_ctzll(from)) * m + c];
            from &= from - 1;
          }
          return next;
        },
        [](std::uint64_t s) { return s == 0; });
  }

  Subset full(words, ~std::uint64_t{0});
  if (n % 64 != 0) full.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return subset_search<Subset, SubsetHash>(
      rule, caps, full,
      [&](const Subset& from, Letter c) {
        Subset next(words, 0);
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t bits = from[w];
          while (bits != 0) {
            const std::size_t u = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
            bits &= bits - 1;
            const std::uint64_t* mask = &masks[(u * m + c) * words];
            for (std::size_t k = 0; k < words; ++k) next[k] |= mask[k];
          }
        }
        return next;
      },
      [](const Subset& s) { return empty(s); });
}

std::uint64_t count_preimages(const RuleTable& rule, std::span<const Letter> w) {
  if (w.empty()) throw PreconditionError("count_preimages needs a non-empty word");
  const DeBruijnGraph graph(rule);
  const std::size_t m = rule.modulus().value();
  std::vector<std::uint64_t> current(graph.vertex_count(), 1), next(graph.vertex_count());
  for (Letter c : w) {
    if (c >= m) throw PreconditionError("word letter outside Z_m");
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t u = 0; u < current.size(); ++u) {
      if (current[u] == 0) continue;
      for (Letter a : graph.letters_with_label(u, c)) {
        std::uint64_t& slot = next[graph.successor(u, a)];
        if (__builtin_add_overflow(slot, current[u], &slot)) throw CapExceeded("preimage count overflows 64 bits");
      }
    }
    current.swap(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : current)
    if (__builtin_add_overflow(total, c, &total)) throw CapExceeded("preimage count overflows 64 bits");
  return total;
}

PairGraph::PairGraph(const RuleTable& rule, const Caps& caps) {
  if (rule.diameter() == 0) throw PreconditionError("pair graph needs diameter >= 1");
  const std::size_t m = rule.modulus().value();
  side_ = word_count(m, rule.diameter());
  if (static_cast<std::uint64_t>(side_) * side_ > caps.pair_vertices)
    throw CapExceeded("pair graph m^(2d) exceeds " + std::to_string(caps.pair_vertices) + " vertices");
  if (static_cast<std::uint64_t>(side_) * side_ > std::numeric_limits<std::uint32_t>::max())
    throw CapExceeded("pair graph too large for 32-bit vertex ids");
  const DeBruijnGraph graph(rule);
  offsets_.reserve(side_ * side_ + 1);
  offsets_.push_back(0);
  for (std::size_t u = 0; u < side_; ++u) {
    for (std::size_t v = 0; v < side_; ++v) {
      for (Letter a = 0; a < m; ++a) {
        const Letter c = graph.label(u, a);
        for (Letter b : graph.letters_with_label(v, c))
          edges_.push_back(Edge{static_cast<std::uint32_t>(vertex(graph.successor(u, a), graph.successor(v, b))), a, b});
      }
      offsets_.push_back(static_cast<std::uint32_t>(edges_.size()));
    }
  }
}

std::span<const PairGraph::Edge> PairGraph::edges(std::size_t vertex) const noexcept {
  return std::span<const Edge>(edges_).subspan(offsets_[vertex], offsets_[vertex + 1] - offsets_[vertex]);
}

namespace {

// Vertices lying on some directed cycle (non-trivial SCC or self-loop),
// via iterative Tarjan.
std::vector<bool> cyclic_vertices(const PairGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> order(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> call;  // (vertex, next edge)
  std::vector<std::uint32_t> component_size;
  std::uint32_t counter = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next_edge] = call.back();
      const auto edges = g.edges(v);
      if (next_edge < edges.size()) {
        const std::uint32_t w = edges[next_edge++].target;
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        const auto id = static_cast<std::uint32_t>(component_size.size());
        std::uint32_t size = 0;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = id;
          ++size;
        } while (w != v);
        component_size.push_back(size);
      }
      const std::uint32_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }

  std::vector<bool> cyclic(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (component_size[component[v]] > 1) {
      cyclic[v] = true;
      continue;
    }
    for (const auto& e : g.edges(v))
      if (e.target == v) cyclic[v] = true;
  }
  return cyclic;
}

std::vector<bool> reachable_from(const PairGraph& g, const std::vector<bool>& sources, bool reverse) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::uint32_t>> incoming;
  if (reverse) {
    incoming.resize(n);
    for (std::uint32_t v = 0; v < n; ++v)
      for (const auto& e : g.edges(v)) incoming[e.target].push_back(v);
  }
  std::vector<bool> seen(sources);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < n; ++v)
    if (seen[v]) queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    auto visit = [&](std::uint32_t w) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    };
    if (reverse) {
      for (std::uint32_t w : incoming[v]) visit(w);
    } else {
      for (const auto& e : g.edges(v)) visit(e.target);
    }
  }
  return seen;
}

struct Step {
  std::uint32_t from;
  Letter a;
  Letter b;
};

std::optional<Diamond> shortest_diamond(const PairGraph& g, const RuleTable& rule) {
  const std::size_t n = g.vertex_count();
  const std::size_t m = rule.modulus().value();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<Step> via(n, Step{kNone, 0, 0});
  std::vector<std::uint32_t> queue;

  auto build = [&](std::uint32_t last, Step closing) {
    std::vector<Step> steps{closing};
    std::uint32_t v = last;
    while (!g.diagonal(v)) {
      steps.push_back(via[v]);
      v = via[v].from;
    }
    std::reverse(steps.begin(), steps.end());
    const Word start = digits(g.left(v), m, rule.diameter());
    Diamond d{start, start};
    for (const Step& s : steps) {
      d.u.push_back(s.a);
      d.v.push_back(s.b);
    }
    return d;
  };

  for (std::size_t u = 0; u < g.side(); ++u) {
    const auto start = static_cast<std::uint32_t>(g.vertex(u, u));
    for (const auto& e : g.edges(start)) {
      if (e.a == e.b || via[e.target].from != kNone) continue;
      via[e.target] = Step{start, e.a, e.b};
      queue.push_back(e.target);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    for (const auto& e : g.edges(v)) {
      if (g.diagonal(e.target)) return build(v, Step{v, e.a, e.b});
      if (via[e.target].from != kNone) continue;
      via[e.target] = Step{v, e.a, e.b};
      queue.push_back(e.target);
    }
  }
  return std::nullopt;
}

// Shortest cycle through off-diagonal vertices only; ties go to the smallest
// starting vertex.
std::optional<PeriodicPair> shortest_offdiagonal_cycle(const PairGraph& g, const RuleTable& rule,
                                                       const std::vector<bool>& candidates) {
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(n, kNone);
  std::vector<Step> via(n);
  std::vector<std::uint32_t> queue, touched;
  std::vector<Step> best;

  for (std::uint32_t start = 0; start < n; ++start) {
    if (!candidates[start]) continue;
    for (std::uint32_t v : touched) dist[v] = kNone;
    touched.clear();
    queue.assign(1, start);
    dist[start] = 0;
    touched.push_back(start);
    bool closed = false;
    for (std::size_t head = 0; head < queue.size() && !closed; ++head) {
      const std::uint32_t v = queue[head];
      if (!best.empty() && dist[v] + 1 >= best.size()) break;
      for (const auto& e : g.edges(v)) {
        if (e.target == start) {
          std::vector<Step> steps{Step{v, e.a, e.b}};
          for (std::uint32_t w = v; w != start; w = via[w].from) steps.push_back(via[w]);
          std::reverse(steps.begin(), steps.end());
          best = std::move(steps);
          closed = true;
          break;
        }
        if (!candidates[e.target] || dist[e.target] != kNone) continue;
        dist[e.target] = dist[v] + 1;
        via[e.target] = Step{v, e.a, e.b};
        touched.push_back(e.target);
        queue.push_back(e.target);
      }
    }
    if (best.size() == 1) break;
  }
  if (best.empty()) return std::nullopt;
  Word x, y;
  for (const Step& s : best) {
    x.push_back(s.a);
    y.push_back(s.b);
  }
  // Cell i of the configuration is the letter added at step i; the periodic
  // image is then anchored identically for both.
  return PeriodicPair{CyclicWord(rule.modulus(), std::move(x)), CyclicWord(rule.modulus(), std::move(y))};
}

}  // namespace

InjectivityResult decide_injective(const RuleTable& rule, const Caps& caps) {
  const std::size_t m = rule.modulus().value();
  if (rule.diameter() == 0) {
    for (Letter a = 0; a < m; ++a)
      for (Letter b = a + 1; b < m; ++b)
        if (rule.at(a) == rule.at(b))
          return {false, PeriodicPair{CyclicWord(rule.modulus(), {a}), CyclicWord(rule.modulus(), {b})}};
    return {true, std::nullopt};
  }

  const PairGraph g(rule, caps);
  const auto cyclic = cyclic_vertices(g);
  const auto after_cycle = reachable_from(g, cyclic, false);
  const auto before_cycle = reachable_from(g, cyclic, true);
  bool injective = true;
  for (std::size_t v = 0; v < g.vertex_count() && injective; ++v)
    if (!g.diagonal(v) && after_cycle[v] && before_cycle[v]) injective = false;
  if (injective) return {true, std::nullopt};

  if (auto d = shortest_diamond(g, rule)) return {false, InjectivityWitness{std::move(*d)}};
  std::vector<bool> candidates(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) candidates[v] = cyclic[v] && !g.diagonal(v);
  auto pair = shortest_offdiagonal_cycle(g, rule, candidates);
  if (!pair) throw std::logic_error("non-injective rule without diamond or off-diagonal cycle");
  return {false, InjectivityWitness{std::move(*pair)}};
}

bool permutive_bruteforce(const RuleTable& rule, unsigned position) {
  if (position < 1 || position > rule.arity())
    throw PreconditionError("window position " + std::to_string(position) + " outside [1, d+1]");
  const std::size_t m = rule.modulus().value();
  const std::size_t w = word_count(m, rule.arity() - position);
  std::vector<std::uint32_t> stamp(m, 0);
  std::uint32_t context = 0;
  for (std::size_t base = 0; base < rule.size(); ++base) {
    if ((base / w) % m != 0) continue;
    ++context;
    for (std::size_t x = 0; x < m; ++x) {
      const Letter out = rule.at(base + x * w);
      if (stamp[out] == context) return false;
      stamp[out] = context;
    }
  }
  return true;
}

bool validate(const RuleTable& rule, const UnbalancedWord& w) {
  if (w.word.empty()) return false;
  const std::uint64_t count = count_preimages(rule, w.word);
  return count == w.preimages && count != word_count(rule.modulus().value(), rule.diameter());
}

bool validate(const RuleTable& rule, const Diamond& w) {
  const std::size_t d = rule.diameter();
  if (w.u.size() != w.v.size() || w.u.size() <= d || w.u == w.v) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (w.u[i] != w.v[i]) return false;
    if (w.u[w.u.size() - 1 - i] != w.v[w.v.size() - 1 - i]) return false;
  }
  return f_star(rule, w.u) == f_star(rule, w.v);
}

bool validate(const RuleTable& rule, const PeriodicPair& w) {
  if (w.x.same_configuration(w.y)) return false;
  // Compare on a common period so anchors line up.
  const std::size_t p = std::lcm(w.x.period(), w.y.period());
  Word xs(p), ys(p);
  for (std::size_t i = 0; i < p; ++i) {
    xs[i] = w.x.at(static_cast<std::int64_t>(i));
    ys[i] = w.y.at(static_cast<std::int64_t>(i));
  }
  const CyclicWord x(rule.modulus(), xs), y(rule.modulus(), ys);
  return apply_periodic(rule, x) == apply_periodic(rule, y);
}

bool validate(const RuleTable& rule, const InjectivityWitness& w) {
  return std::visit([&](const auto& v) { return validate(rule, v); }, w);
}

std::pair<Word, Word> bipermutive_collision(const RuleTable& rule, const SeparationClass& cls, unsigned half_width) {
  if (!cls.lr_separated || cls.leftmost >= cls.rightmost)
    throw PreconditionError("bipermutive_collision needs an LR-separated rule with l < r");
  const unsigned l = cls.leftmost, r = cls.rightmost;
  if (!permutive_bruteforce(rule, l) || !permutive_bruteforce(rule, r))
    throw PreconditionError("bipermutive_collision needs permutivity at both l and r");
  if (half_width < r - l + rule.diameter())
    throw PreconditionError("half width must be at least r - l + d");

  const Modulus mod = rule.modulus();
  const MonomialMap g = cls.at(l)->monomial;
  const MonomialMap h = cls.at(r)->monomial;
  const Letter b = monomial_invert(g, 1).front();
  const Letter c = monomial_invert(h, mod.neg(1)).front();
  const Letter target = cls.constant;  // pi(0, ..., 0)

  const std::size_t n = 2 * static_cast<std::size_t>(half_width) + 1;
  const std::size_t span = r - l;
  const std::size_t core = half_width - span / 2;

  // Output of f on the window whose position l sits at word index k.
  auto span_value = [&](const Word& y, std::size_t k) {
    Word window(rule.arity(), 0);
    for (unsigned p = l; p <= r; ++p) window[p - 1] = y[k + (p - l)];
    return rule(window);
  };
  auto extend = [&](Word& y) {
    for (std::size_t idx = core + span + 1; idx < n; ++idx) {
      y[idx] = 0;
      const Letter rest = span_value(y, idx - span);
      y[idx] = monomial_invert(h, mod.sub(target, rest)).front();
    }
    for (std::size_t idx = core; idx-- > 0;) {
      y[idx] = 0;
      const Letter rest = span_value(y, idx);
      y[idx] = monomial_invert(g, mod.sub(target, rest)).front();
    }
  };

  Word y(n, 0), z(n, 0);
  y[core] = b;
  y[core + span] = c;
  extend(y);
  extend(z);

  const Word image = f_star(rule, y);
  if (y == z || image != f_star(rule, z) ||
      std::any_of(image.begin(), image.end(), [&](Letter v) { return v != target; }))
    throw std::logic_error("bipermutive collision failed its post-condition");
  return {std::move(y), std::move(z)};
}

}  // namespace nlca
