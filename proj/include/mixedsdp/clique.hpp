#pragma once

// Exact maximum clique by branch and bound with greedy colouring bounds
// (bitset formulation), and the exact code size N(n2,n3,d) built on it.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mixedsdp/codes.hpp"
#include "mixedsdp/errors.hpp"

namespace mixedsdp {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t universe() const { return n_; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Index of the lowest set bit; universe() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return n_;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }

  Bitset& subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CliqueStats {
  std::uint64_t nodes = 0;
};

// Maximum clique among `candidates`. Returns a clique strictly larger than
// `lower_bound` if one exists, otherwise an empty vector.
class MaxCliqueSolver {
 public:
  explicit MaxCliqueSolver(const std::vector<Bitset>& adjacency) {
    const std::size_t n = adjacency.size();
    // relabel so that vertex 0 has the largest degree
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<std::size_t> degree(n);
    for (std::size_t v = 0; v < n; ++v) degree[v] = adjacency[v].count();
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    position_.resize(n);
    for (std::size_t i = 0; i < n; ++i) position_[order_[i]] = i;
    adj_.assign(n, Bitset(n));
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u = 0; u < n; ++u)
        if (u != v && adjacency[v].test(u)) adj_[position_[v]].set(position_[u]);
  }

  std::vector<int> solve(const Bitset& candidates, std::size_t lower_bound = 0) {
    Bitset p(adj_.size());
    for (std::size_t v = 0; v < adj_.size(); ++v)
      if (candidates.test(v)) p.set(position_[v]);
    best_.clear();
    best_size_ = lower_bound;
    current_.clear();
    expand(p);
    std::vector<int> out;
    for (auto v : best_) out.push_back(static_cast<int>(order_[v]));
    std::sort(out.begin(), out.end());
    return out;
  }

  const CliqueStats& stats() const { return stats_; }

 private:
  void colour(Bitset p, std::vector<std::size_t>& verts, std::vector<std::size_t>& bounds) {
    verts.clear();
    bounds.clear();
    std::size_t k = 0;
    while (!p.none()) {
      ++k;
      Bitset q = p;
      while (!q.none()) {
        const std::size_t v = q.first();
        q.reset(v);
        q.subtract(adj_[v]);
        p.reset(v);
        verts.push_back(v);
        bounds.push_back(k);
      }
    }
  }

  void expand(Bitset p) {
    ++stats_.nodes;
    std::vector<std::size_t> verts;
    std::vector<std::size_t> bounds;
    colour(p, verts, bounds);
    for (std::size_t i = verts.size(); i-- > 0;) {
      if (current_.size() + bounds[i] <= best_size_) return;
      const std::size_t v = verts[i];
      current_.push_back(v);
      Bitset next = p & adj_[v];
      if (next.none()) {
        if (current_.size() > best_size_) {
          best_size_ = current_.size();
          best_ = current_;
        }
      } else {
        expand(next);
      }
      current_.pop_back();
      p.reset(v);
    }
  }

  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
  std::vector<Bitset> adj_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> current_;
  std::size_t best_size_ = 0;
  CliqueStats stats_;
};

inline std::vector<int> max_clique(const std::vector<Bitset>& adjacency) {
  Bitset all(adjacency.size());
  for (std::size_t v = 0; v < adjacency.size(); ++v) all.set(v);
  MaxCliqueSolver solver(adjacency);
  return solver.solve(all);
}

struct ExactCode {
  int size = 0;
  std::vector<Word> words;
};

inline constexpr std::size_t kDefaultWordCap = 1000;

// Graph on all words, edges between words at distance >= d.
inline std::vector<Bitset> distance_graph(const ProblemSpec& spec,
                                          const std::vector<Word>& words) {
  std::vector<Bitset> adj(words.size(), Bitset(words.size()));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j)
      if (hamming_distance(words[i], words[j]) >= spec.d) {
        adj[i].set(j);
        adj[j].set(i);
      }
  return adj;
}

// Exact N(n2,n3,d) with an optimal code. The isometry group is transitive on
// ordered pairs of words with the same binary and ternary distance, so the
// pair of an optimal code whose distance class comes first in a fixed order
// can be moved to (0, rep). The search for class c then runs on the graph
// whose edges are the pairs of class c or later.
inline ExactCode exact_N(const ProblemSpec& spec, std::size_t cap = kDefaultWordCap) {
  spec.validate();
  const std::size_t n = spec.word_count();
  if (n > cap)
    throw ResourceError("exact_N: " + std::to_string(n) + " words exceed the cap of " +
                        std::to_string(cap));
  const auto words = all_words(spec);
  if (spec.d == 1) return {static_cast<int>(n), words};

  // distance classes (a, b) with a + b >= d, most frequent first
  std::vector<std::pair<int, int>> classes;
  for (int a = 0; a <= spec.n2; ++a)
    for (int b = 0; b <= spec.n3; ++b)
      if (a + b >= spec.d) classes.emplace_back(a, b);
  auto frequency = [&](const std::pair<int, int>& c) -> BigInt {
    return binomial(spec.n2, c.first) * binomial(spec.n3, c.second) * power(2, c.second);
  };
  std::stable_sort(classes.begin(), classes.end(),
                   [&](const auto& x, const auto& y) { return frequency(x) > frequency(y); });
  std::vector<int> rank((spec.n2 + 1) * (spec.n3 + 1), -1);
  for (std::size_t i = 0; i < classes.size(); ++i)
    rank[classes[i].first * (spec.n3 + 1) + classes[i].second] = static_cast<int>(i);
  std::vector<int> pair_rank(n * n, -1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int a = 0, b = 0;
      for (int p = 0; p < spec.n2; ++p) a += words[i].bits[p] != words[j].bits[p];
      for (int p = 0; p < spec.n3; ++p) b += words[i].trits[p] != words[j].trits[p];
      pair_rank[i * n + j] = rank[a * (spec.n3 + 1) + b];
    }

  ExactCode best{1, {words[0]}};
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto [w2, w3] = classes[ci];
    std::vector<Bitset> adj(n, Bitset(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (pair_rank[i * n + j] >= static_cast<int>(ci)) adj[i].set(j);
    Word rep = zero_word(spec);
    for (int i = 0; i < w2; ++i) rep.bits[i] = 1;
    for (int i = 0; i < w3; ++i) rep.trits[i] = 1;
    const std::size_t x = word_index(rep);
    const Bitset candidates = adj[0] & adj[x];
    if (best.size < 2) best = {2, {words[0], rep}};
    if (candidates.none()) continue;
    MaxCliqueSolver solver(adj);
    const auto rest = solver.solve(candidates, static_cast<std::size_t>(best.size - 2));
    if (rest.empty()) continue;
    best.size = static_cast<int>(rest.size()) + 2;
    best.words = {words[0], rep};
    for (int v : rest) best.words.push_back(words[v]);
  }
  std::sort(best.words.begin(), best.words.end());
  return best;
}

// Same value without the symmetry shortcut.
inline ExactCode exact_N_plain(const ProblemSpec& spec, std::size_t cap = kDefaultWordCap) {
  spec.validate();
  const std::size_t n = spec.word_count();
  if (n > cap) throw ResourceError("exact_N_plain: word cap exceeded");
  const auto words = all_words(spec);
  const auto clique = max_clique(distance_graph(spec, words));
  ExactCode out{static_cast<int>(clique.size()), {}};
  for (int v : clique) out.words.push_back(words[v]);
  return out;
}

}  // namespace mixedsdp
