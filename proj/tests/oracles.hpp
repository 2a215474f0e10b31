#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the canonical-form or closed-form code paths of the library.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "mixedsdp/codes.hpp"
#include "mixedsdp/dual_poly.hpp"
#include "mixedsdp/tableaux.hpp"

namespace oracle {

using mixedsdp::ProblemSpec;
using mixedsdp::Word;

// A code as a sorted vector of word indices.
using IndexCode = std::vector<std::size_t>;

// Orbits of all codes of size <= 3 under the isometry group, by closing each
// code under a generating set: adjacent transpositions of binary and of
// ternary coordinates, flipping a binary coordinate, and the letter swaps
// (0 1), (1 2) on a ternary coordinate.
struct BruteOrbits {
  std::map<IndexCode, int> orbit_of;
  std::vector<std::vector<IndexCode>> members;
};

inline BruteOrbits brute_force_orbits(const ProblemSpec& spec) {
  const auto words = mixedsdp::all_words(spec);
  const std::size_t n = words.size();
  std::vector<std::function<Word(const Word&)>> gens;
  for (int i = 0; i + 1 < spec.n2; ++i)
    gens.push_back([i](Word w) { std::swap(w.bits[i], w.bits[i + 1]); return w; });
  for (int i = 0; i + 1 < spec.n3; ++i)
    gens.push_back([i](Word w) { std::swap(w.trits[i], w.trits[i + 1]); return w; });
  for (int i = 0; i < spec.n2; ++i)
    gens.push_back([i](Word w) { w.bits[i] ^= 1; return w; });
  for (int i = 0; i < spec.n3; ++i) {
    gens.push_back([i](Word w) {
      if (w.trits[i] < 2) w.trits[i] ^= 1;
      return w;
    });
    gens.push_back([i](Word w) {
      if (w.trits[i] > 0) w.trits[i] = static_cast<std::uint8_t>(3 - w.trits[i]);
      return w;
    });
  }
  // word permutation induced by each generator
  std::vector<std::vector<std::size_t>> perms;
  for (const auto& g : gens) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = mixedsdp::word_index(g(words[i]));
    perms.push_back(p);
  }

  std::vector<IndexCode> codes = {{}};
  for (std::size_t a = 0; a < n; ++a) {
    codes.push_back({a});
    for (std::size_t b = a + 1; b < n; ++b) {
      codes.push_back({a, b});
      for (std::size_t c = b + 1; c < n; ++c) codes.push_back({a, b, c});
    }
  }
  BruteOrbits out;
  for (const auto& code : codes) {
    if (out.orbit_of.count(code)) continue;
    const int id = static_cast<int>(out.members.size());
    std::vector<IndexCode> orbit = {code};
    out.orbit_of[code] = id;
    for (std::size_t q = 0; q < orbit.size(); ++q) {
      for (const auto& p : perms) {
        IndexCode image;
        for (auto v : orbit[q]) image.push_back(p[v]);
        std::sort(image.begin(), image.end());
        if (out.orbit_of.emplace(image, id).second) orbit.push_back(image);
      }
    }
    out.members.push_back(std::move(orbit));
  }
  return out;
}

// Largest code with minimum distance >= d by plain exhaustive search.
inline int brute_force_N(const ProblemSpec& spec) {
  const auto words = mixedsdp::all_words(spec);
  const std::size_t n = words.size();
  int best = 0;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    best = std::max(best, static_cast<int>(cur.size()));
    if (cur.size() + (n - start) <= static_cast<std::size_t>(best)) return;
    for (std::size_t v = start; v < n; ++v) {
      bool ok = true;
      for (auto u : cur)
        if (mixedsdp::hamming_distance(words[u], words[v]) < spec.d) { ok = false; break; }
      if (!ok) continue;
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return best;
}

// One factor of p_{sigma,tau} straight from the definition:
//   sum_{tau' ~ tau} sum_{sigma' ~ sigma} sum_{c, c' in C_lambda}
//     sgn(c) sgn(c') prod_y F(tau'(c(y)), sigma'(c'(y)))
template <std::size_t N>
mixedsdp::DualPoly<N> literal_factor_poly(
    const mixedsdp::Tableau& sigma, const mixedsdp::Tableau& tau,
    const std::function<mixedsdp::DualPoly<N>(int, int)>& F) {
  const auto& lambda = tau.shape;
  const int n = lambda.size();
  std::vector<int> start;
  for (int r = 0, off = 0; r < lambda.height(); off += lambda.parts[r], ++r) start.push_back(off);

  auto row_classes = [&](const mixedsdp::Tableau& t) {
    std::set<std::vector<int>> out;
    std::vector<int> fill = t.entries;
    std::function<void(int)> rec = [&](int r) {
      if (r == lambda.height()) { out.insert(fill); return; }
      auto b = fill.begin() + start[r], e = b + lambda.parts[r];
      std::vector<int> saved(b, e);
      std::sort(b, e);
      do { rec(r + 1); } while (std::next_permutation(b, e));
      std::copy(saved.begin(), saved.end(), b);
    };
    rec(0);
    return out;
  };

  // column group: with height <= 2 each column is either fixed or swapped
  std::vector<std::pair<std::vector<int>, int>> group;
  const int tall = lambda.tall_columns();
  for (int mask = 0; mask < (1 << tall); ++mask) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int sign = 1;
    for (int c = 0; c < tall; ++c)
      if (mask >> c & 1) {
        std::swap(perm[c], perm[start[1] + c]);
        sign = -sign;
      }
    group.emplace_back(perm, sign);
  }

  mixedsdp::DualPoly<N> total;
  for (const auto& tp : row_classes(tau))
    for (const auto& sp : row_classes(sigma))
      for (const auto& [c, sc] : group)
        for (const auto& [cp, scp] : group) {
          auto term = mixedsdp::DualPoly<N>::constant(sc * scp);
          for (int y = 0; y < n; ++y) term = term * F(tp[c[y]], sp[cp[y]]);
          total += term;
        }
  return total;
}

}  // namespace oracle
