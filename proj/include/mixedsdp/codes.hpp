#pragma once

// Words, codes and G-orbits of codes of size at most three in the mixed
// Hamming space [2]^n2 x [3]^n3.
//
// An orbit is identified by the column-pattern counts of an ordered triple of
// words: for each coordinate, which of the three stacked letters coincide.
// Codes of size one or two are padded to a triple, (v,v,v) and (x,y,y). The
// counts are minimised lexicographically over the six reorderings of the
// triple, which gives a canonical form for the action of the isometry group.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mixedsdp/errors.hpp"
#include "mixedsdp/rational.hpp"

namespace mixedsdp {

struct ProblemSpec {
  int n2 = 1;
  int n3 = 1;
  int d = 1;
  int k = 3;

  int length() const { return n2 + n3; }

  std::size_t word_count() const {
    std::size_t count = 1;
    for (int i = 0; i < n2; ++i) count *= 2;
    for (int i = 0; i < n3; ++i) count *= 3;
    return count;
  }

  void validate() const {
    if (n2 < 1 || n3 < 1)
      throw ShapeError("mixed codes need n2 >= 1 and n3 >= 1");
    if (d < 1 || d > n2 + n3)
      throw ShapeError("distance must satisfy 1 <= d <= n2 + n3");
    if (k != 2 && k != 3) throw ShapeError("hierarchy level k must be 2 or 3");
  }

  static ProblemSpec make(int n2, int n3, int d, int k = 3) {
    ProblemSpec spec{n2, n3, d, k};
    spec.validate();
    return spec;
  }

  bool operator==(const ProblemSpec&) const = default;
};

inline std::string describe(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "(" << spec.n2 << "," << spec.n3 << "," << spec.d << ") k=" << spec.k;
  return out.str();
}

struct Word {
  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> trits;

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

  bool conforms(const ProblemSpec& spec) const {
    if (static_cast<int>(bits.size()) != spec.n2) return false;
    if (static_cast<int>(trits.size()) != spec.n3) return false;
    for (auto b : bits)
      if (b > 1) return false;
    for (auto t : trits)
      if (t > 2) return false;
    return true;
  }

  std::uint8_t at(int position) const {
    const int nb = static_cast<int>(bits.size());
    return position < nb ? bits[position] : trits[position - nb];
  }

  // Hamming distance to the all-zero word.
  int weight() const {
    int w = 0;
    for (auto b : bits) w += b != 0;
    for (auto t : trits) w += t != 0;
    return w;
  }
};

inline std::string to_string(const Word& w) {
  std::string s;
  for (auto b : w.bits) s += static_cast<char>('0' + b);
  s += '|';
  for (auto t : w.trits) s += static_cast<char>('0' + t);
  return s;
}

inline Word zero_word(const ProblemSpec& spec) {
  return Word{std::vector<std::uint8_t>(spec.n2, 0),
              std::vector<std::uint8_t>(spec.n3, 0)};
}

// Words are numbered in lexicographic order, binary part most significant.
inline Word word_from_index(const ProblemSpec& spec, std::size_t index) {
  Word w = zero_word(spec);
  for (int i = spec.n3 - 1; i >= 0; --i) {
    w.trits[i] = static_cast<std::uint8_t>(index % 3);
    index /= 3;
  }
  for (int i = spec.n2 - 1; i >= 0; --i) {
    w.bits[i] = static_cast<std::uint8_t>(index % 2);
    index /= 2;
  }
  return w;
}

inline std::size_t word_index(const Word& w) {
  std::size_t index = 0;
  for (auto b : w.bits) index = index * 2 + b;
  for (auto t : w.trits) index = index * 3 + t;
  return index;
}

inline std::vector<Word> all_words(const ProblemSpec& spec) {
  std::vector<Word> words;
  const std::size_t count = spec.word_count();
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    words.push_back(word_from_index(spec, i));
  return words;
}

inline int hamming_distance(const Word& v, const Word& w) {
  if (v.bits.size() != w.bits.size() || v.trits.size() != w.trits.size())
    throw ShapeError("hamming_distance: word lengths differ");
  int dist = 0;
  for (std::size_t i = 0; i < v.bits.size(); ++i) dist += v.bits[i] != w.bits[i];
  for (std::size_t i = 0; i < v.trits.size(); ++i)
    dist += v.trits[i] != w.trits[i];
  return dist;
}

// A set of at most three distinct words, stored sorted.
class Code {
 public:
  Code() = default;

  explicit Code(std::vector<Word> words) : words_(std::move(words)) {
    std::sort(words_.begin(), words_.end());
    if (std::adjacent_find(words_.begin(), words_.end()) != words_.end())
      throw ShapeError("code contains a repeated word");
    for (std::size_t i = 1; i < words_.size(); ++i) {
      if (words_[i].bits.size() != words_[0].bits.size() ||
          words_[i].trits.size() != words_[0].trits.size())
        throw ShapeError("code words have different lengths");
    }
  }

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::vector<Word>& words() const { return words_; }
  const Word& operator[](std::size_t i) const { return words_[i]; }

  bool operator==(const Code&) const = default;

 private:
  std::vector<Word> words_;
};

inline std::optional<int> min_distance(const Code& c) {
  if (c.size() <= 1) return std::nullopt;
  int best = hamming_distance(c[0], c[1]);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      best = std::min(best, hamming_distance(c[i], c[j]));
  return best;
}

// Partitions of the three positions of a stacked triple.
enum class Pattern : std::uint8_t {
  All = 0,       // {123}
  Split12_3 = 1, // {12|3}
  Split13_2 = 2, // {13|2}
  Split1_23 = 3, // {1|23}
  Distinct = 4,  // {1|2|3}, ternary columns only
};

inline constexpr int kBinaryPatterns = 4;
inline constexpr int kTernaryPatterns = 5;

inline const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::All: return "123";
    case Pattern::Split12_3: return "12,3";
    case Pattern::Split13_2: return "13,2";
    case Pattern::Split1_23: return "1,23";
    case Pattern::Distinct: return "1,2,3";
  }
  return "?";
}

constexpr Pattern pattern_of(int a, int b, int c) {
  if (a == b && b == c) return Pattern::All;
  if (a == b) return Pattern::Split12_3;
  if (a == c) return Pattern::Split13_2;
  if (b == c) return Pattern::Split1_23;
  return Pattern::Distinct;
}

namespace detail {

// The six reorderings of a triple: position i of the new triple takes the
// word at position perm[i] of the old one.
inline constexpr std::array<std::array<int, 3>, 6> kTriplePerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

inline constexpr std::array<std::array<int, 3>, 5> kPatternRep = {{
    {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 2},
}};

// permuted_pattern[g][p]: pattern of a column with pattern p after the
// triple is reordered by kTriplePerms[g].
inline constexpr auto kPermutedPattern = [] {
  std::array<std::array<int, 5>, 6> table{};
  for (int g = 0; g < 6; ++g)
    for (int p = 0; p < 5; ++p) {
      const auto& rep = kPatternRep[p];
      const auto& perm = kTriplePerms[g];
      table[g][p] = static_cast<int>(
          pattern_of(rep[perm[0]], rep[perm[1]], rep[perm[2]]));
    }
  return table;
}();

}  // namespace detail

struct OrbitId {
  int size = 0;
  std::array<int, kBinaryPatterns> bin{};
  std::array<int, kTernaryPatterns> ter{};

  auto operator<=>(const OrbitId&) const = default;
  bool operator==(const OrbitId&) const = default;
};

inline std::string to_string(const OrbitId& w) {
  std::ostringstream out;
  out << "size" << w.size << " bin[";
  for (int p = 0; p < kBinaryPatterns; ++p)
    out << (p ? " " : "") << pattern_name(static_cast<Pattern>(p)) << ":"
        << w.bin[p];
  out << "] ter[";
  for (int p = 0; p < kTernaryPatterns; ++p)
    out << (p ? " " : "") << pattern_name(static_cast<Pattern>(p)) << ":"
        << w.ter[p];
  out << "]";
  return out.str();
}

// d(1,2), d(1,3), d(2,3) of a triple with the given pattern counts.
inline std::array<int, 3> triple_pair_distances(
    const std::array<int, kBinaryPatterns>& bin,
    const std::array<int, kTernaryPatterns>& ter) {
  auto count = [&](Pattern p) {
    const int i = static_cast<int>(p);
    return (i < kBinaryPatterns ? bin[i] : 0) + ter[i];
  };
  const int s12 = count(Pattern::Split12_3);
  const int s13 = count(Pattern::Split13_2);
  const int s1 = count(Pattern::Split1_23);
  const int all3 = count(Pattern::Distinct);
  return {s13 + s1 + all3, s12 + s1 + all3, s12 + s13 + all3};
}

// Canonical orbit of an ordered triple given by its column-pattern counts.
inline OrbitId canonical_from_counts(
    const std::array<int, kBinaryPatterns>& bin,
    const std::array<int, kTernaryPatterns>& ter) {
  if (std::any_of(bin.begin(), bin.end(), [](int v) { return v < 0; }) ||
      std::any_of(ter.begin(), ter.end(), [](int v) { return v < 0; }))
    throw DomainError("negative pattern count");
  OrbitId best;
  bool first = true;
  for (int g = 0; g < 6; ++g) {
    OrbitId cand;
    for (int p = 0; p < kBinaryPatterns; ++p)
      cand.bin[detail::kPermutedPattern[g][p]] += bin[p];
    for (int p = 0; p < kTernaryPatterns; ++p)
      cand.ter[detail::kPermutedPattern[g][p]] += ter[p];
    if (first || std::tie(cand.bin, cand.ter) < std::tie(best.bin, best.ter)) {
      best = cand;
      first = false;
    }
  }
  const auto dist = triple_pair_distances(best.bin, best.ter);
  const int zeros = static_cast<int>(std::count(dist.begin(), dist.end(), 0));
  best.size = zeros == 3 ? 1 : (zeros == 1 ? 2 : 3);
  return best;
}

inline OrbitId empty_orbit(const ProblemSpec& spec) {
  OrbitId w;
  w.size = 0;
  w.bin[0] = spec.n2;
  w.ter[0] = spec.n3;
  return w;
}

inline OrbitId canonical_orbit(const ProblemSpec& spec, const Code& c) {
  if (c.size() > 3) throw ShapeError("canonical_orbit: code has more than 3 words");
  for (const auto& w : c.words())
    if (!w.conforms(spec)) throw ShapeError("canonical_orbit: word does not fit spec");
  if (c.empty()) return empty_orbit(spec);
  // size 2 is padded as (x, y, y) with y the larger word
  const Word& a = c[0];
  const Word& b = c.size() == 1 ? c[0] : c[1];
  const Word& e = c.size() == 3 ? c[2] : b;
  std::array<int, kBinaryPatterns> bin{};
  std::array<int, kTernaryPatterns> ter{};
  for (int i = 0; i < spec.n2; ++i)
    ++bin[static_cast<int>(pattern_of(a.bits[i], b.bits[i], e.bits[i]))];
  for (int i = 0; i < spec.n3; ++i)
    ++ter[static_cast<int>(pattern_of(a.trits[i], b.trits[i], e.trits[i]))];
  return canonical_from_counts(bin, ter);
}

inline std::array<int, 3> orbit_pair_distances(const OrbitId& w) {
  if (w.size < 2) throw DomainError("orbit_pair_distances: orbit of size < 2");
  return triple_pair_distances(w.bin, w.ter);
}

// Minimum distance of any code in the orbit, absent for size <= 1.
inline std::optional<int> orbit_min_distance(const OrbitId& w) {
  if (w.size < 2) return std::nullopt;
  const auto dist = orbit_pair_distances(w);
  int best = -1;
  for (int x : dist)
    if (x > 0 && (best < 0 || x < best)) best = x;
  return best;
}

// Pair orbit with binary distance a and ternary distance b.
inline OrbitId pair_orbit(const ProblemSpec& spec, int a, int b) {
  if (a < 0 || b < 0 || a > spec.n2 || b > spec.n3 || a + b == 0)
    throw DomainError("pair_orbit: distances out of range");
  std::array<int, kBinaryPatterns> bin{};
  std::array<int, kTernaryPatterns> ter{};
  bin[0] = spec.n2 - a;
  bin[static_cast<int>(Pattern::Split1_23)] = a;
  ter[0] = spec.n3 - b;
  ter[static_cast<int>(Pattern::Split1_23)] = b;
  return canonical_from_counts(bin, ter);
}

inline OrbitId singleton_orbit(const ProblemSpec& spec) {
  std::array<int, kBinaryPatterns> bin{};
  std::array<int, kTernaryPatterns> ter{};
  bin[0] = spec.n2;
  ter[0] = spec.n3;
  return canonical_from_counts(bin, ter);
}

struct OrbitEntry {
  OrbitId id;
  bool feasible = true;
};

class OrbitTable {
 public:
  OrbitTable() = default;

  OrbitTable(ProblemSpec spec, std::vector<OrbitEntry> entries)
      : spec_(spec), entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!index_.emplace(entries_[i].id, static_cast<int>(i)).second)
        throw DomainError("duplicate orbit in table");
    }
  }

  const ProblemSpec& spec() const { return spec_; }
  std::size_t size() const { return entries_.size(); }
  const OrbitEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<OrbitEntry>& entries() const { return entries_; }

  std::optional<int> find(const OrbitId& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(const OrbitId& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw DomainError("unknown orbit " + to_string(w));
    return it->second;
  }

  static constexpr int empty_index() { return 0; }
  int singleton_index() const { return index_of(singleton_orbit(spec_)); }
  int pair_index(int a, int b) const { return index_of(pair_orbit(spec_, a, b)); }

  // Number of codes in the orbit.
  BigInt orbit_size(int index) const {
    const OrbitId& w = entries_.at(index).id;
    const BigInt words = power(2, spec_.n2) * power(3, spec_.n3);
    if (w.size == 0) return 1;
    if (w.size == 1) return words;
    if (w.size == 2) {
      const int a = w.bin[static_cast<int>(Pattern::Split1_23)];
      const int b = w.ter[static_cast<int>(Pattern::Split1_23)];
      return words * binomial(spec_.n2, a) * binomial(spec_.n3, b) *
             power(2, b) / 2;
    }
    // ordered triples whose counts lie in the S3-orbit of w, over 3!
    std::vector<std::pair<std::array<int, 4>, std::array<int, 5>>> seen;
    BigInt ordered = 0;
    for (int g = 0; g < 6; ++g) {
      std::array<int, 4> bin{};
      std::array<int, 5> ter{};
      for (int p = 0; p < 4; ++p) bin[detail::kPermutedPattern[g][p]] += w.bin[p];
      for (int p = 0; p < 5; ++p) ter[detail::kPermutedPattern[g][p]] += w.ter[p];
      auto key = std::make_pair(bin, ter);
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      BigInt t = multinomial({bin[0], bin[1], bin[2], bin[3]}) * power(2, spec_.n2) *
                 multinomial({ter[0], ter[1], ter[2], ter[3], ter[4]}) *
                 power(3, ter[0]) * power(6, spec_.n3 - ter[0]);
      ordered += t;
    }
    return ordered / 6;
  }

 private:
  ProblemSpec spec_;
  std::vector<OrbitEntry> entries_;
  std::map<OrbitId, int> index_;
};

inline bool orbit_feasible(const OrbitId& w, int d) {
  if (w.size <= 1) return true;
  return *orbit_min_distance(w) >= d;
}

namespace detail {

template <std::size_t N, typename Fn>
void for_each_composition(int total, Fn&& fn) {
  std::array<int, N> parts{};
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == N) {
      parts[pos] = remaining;
      fn(parts);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      parts[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
}

}  // namespace detail

// All orbits of codes of size 0..3. Index 0 is the empty code; the rest are
// sorted by size and then by canonical counts.
inline OrbitTable enumerate_orbits(const ProblemSpec& spec) {
  std::vector<OrbitId> found;
  detail::for_each_composition<kBinaryPatterns>(spec.n2, [&](const auto& bin) {
    detail::for_each_composition<kTernaryPatterns>(spec.n3, [&](const auto& ter) {
      OrbitId w = canonical_from_counts(bin, ter);
      if (w.bin == bin && w.ter == ter) found.push_back(w);
    });
  });
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<OrbitEntry> entries;
  entries.push_back({empty_orbit(spec), true});
  for (const auto& w : found) entries.push_back({w, orbit_feasible(w, spec.d)});
  return OrbitTable(spec, std::move(entries));
}

}  // namespace mixedsdp
