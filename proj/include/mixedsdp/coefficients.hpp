#pragma once

// Exact block coefficients of the symmetry-reduced moment matrices.
//
// For the all-zero code D0 the entry (sigma, tau) of U^T N_w U is obtained from
// the polynomial p_{sigma,tau} in the dual variables c*_P (binary column
// patterns) and d*_P (ternary column patterns): its monomials record the
// column patterns of the ordered triple (0, x, y), and the coefficients of all
// monomials whose triple lies in orbit w add up to the entry. For the empty
// code the same idea runs with the per-coordinate pair patterns {equal,
// unequal}.
//
// Dual variables are taken against the SUM of the unit tensors with a given
// pattern (not their average), which makes the coefficients integers.

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mixedsdp/codes.hpp"
#include "mixedsdp/dual_poly.hpp"
#include "mixedsdp/errors.hpp"
#include "mixedsdp/rational.hpp"
#include "mixedsdp/tableaux.hpp"

namespace mixedsdp {

// c*_{123}, c*_{12,3}, c*_{13,2}, c*_{1,23}, d*_{123}, d*_{12,3}, d*_{13,2},
// d*_{1,23}, d*_{1,2,3}
using TriplePoly = DualPoly<9>;
// c*_eq, c*_neq, d*_eq, d*_neq
using PairPoly = DualPoly<4>;

inline constexpr std::array<const char*, 9> kTripleVarNames = {
    "c123", "c12_3", "c13_2", "c1_23", "d123", "d12_3", "d13_2", "d1_23", "d1_2_3"};
inline constexpr std::array<const char*, 4> kPairVarNames = {"c_eq", "c_neq", "d_eq",
                                                             "d_neq"};

enum class StabilizerCase { D0, Empty };

using LetterVector = std::vector<int>;

// Columns of A1 = [e1, e2], A2 = [f1, f2 + f3], A3 = [f2 - f3], with letters
// shifted to 0-based.
inline LetterVector representative_column_d0(int factor, int column) {
  switch (factor) {
    case 1:
      if (column == 1) return {1, 0};
      if (column == 2) return {0, 1};
      break;
    case 2:
      if (column == 1) return {1, 0, 0};
      if (column == 2) return {0, 1, 1};
      break;
    case 3:
      if (column == 1) return {0, 1, -1};
      break;
  }
  throw DomainError("no column " + std::to_string(column) + " in A" + std::to_string(factor));
}

// B1 = [e1 + e2], B2 = [e1 - e2], B3 = [f1 + f2 + f3], B4 = [f1 - f2].
inline LetterVector representative_column_empty(int factor) {
  switch (factor) {
    case 1: return {1, 1};
    case 2: return {1, -1};
    case 3: return {1, 1, 1};
    case 4: return {1, -1, 0};
  }
  throw DomainError("no factor B" + std::to_string(factor));
}

// A_j(l) (x) A_j(m) as a linear form in the dual variables: the coefficient of
// c*_P (or d*_P) is the tensor evaluated at sum_{(s,t): part(0,s,t) = P} e_s (x) e_t.
inline TriplePoly base_change_d0(int factor, int l, int m) {
  const LetterVector a = representative_column_d0(factor, l);
  const LetterVector b = representative_column_d0(factor, m);
  const std::size_t offset = factor == 1 ? 0 : kBinaryPatterns;
  TriplePoly out;
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t t = 0; t < b.size(); ++t) {
      const int value = a[s] * b[t];
      if (value == 0) continue;
      const auto p = static_cast<std::size_t>(pattern_of(0, static_cast<int>(s), static_cast<int>(t)));
      out += TriplePoly::variable(offset + p, value);
    }
  return out;
}

// B_j(1) (x) B_j(1) in the dual variables of {equal, unequal}.
inline PairPoly base_change_empty(int factor) {
  const LetterVector v = representative_column_empty(factor);
  const std::size_t offset = factor <= 2 ? 0 : 2;
  int eq = 0;
  int neq = 0;
  for (std::size_t s = 0; s < v.size(); ++s)
    for (std::size_t t = 0; t < v.size(); ++t) (s == t ? eq : neq) += v[s] * v[t];
  PairPoly out;
  out += PairPoly::variable(offset, eq);
  out += PairPoly::variable(offset + 1, neq);
  return out;
}

// One factor of p_{sigma,tau}:
//   sum_{tau' ~ tau, sigma' ~ sigma} sum_{c, c' in C_lambda} sgn(c c')
//     prod_y F(tau'(c(y)), sigma'(c'(y)))
// for shapes of height <= 2 and entries in [m], m <= 2. The sums over column
// stabilisers factor per Ferrers column. A column of height two contributes
// 2 [F(t1,s1) F(t2,s2) - F(t2,s1) F(t1,s2)], which vanishes unless both
// rearranged columns read (1,2); the remaining single-cell columns are filled
// by rearrangements of the leftover first-row entries and are counted by
// multinomial coefficients.
template <std::size_t N>
DualPoly<N> factor_poly(const Partition& lambda, const Tableau& sigma, const Tableau& tau,
                        const std::function<DualPoly<N>(int, int)>& F) {
  if (sigma.shape != lambda || tau.shape != lambda)
    throw DomainError("factor_poly: tableau shape mismatch");
  if (lambda.height() > 2) throw DomainError("factor_poly: height > 2 not supported");
  if (lambda.height() == 0) return DualPoly<N>::constant(1);
  const int a = lambda.parts[0];
  const int b = lambda.tall_columns();
  for (int v : sigma.entries)
    if (v > 2) throw DomainError("factor_poly: entries above 2 not supported");
  for (int v : tau.entries)
    if (v > 2) throw DomainError("factor_poly: entries above 2 not supported");

  auto ones_in_first_row = [&](const Tableau& t) {
    int c = 0;
    for (int j = 0; j < a; ++j) c += t.entries[j] == 1;
    return c;
  };
  const int free = a - b;
  const int s_tau = ones_in_first_row(tau) - b;
  const int s_sig = ones_in_first_row(sigma) - b;
  const int t_tau = free - s_tau;

  DualPoly<N> result = DualPoly<N>::constant(1);
  if (b > 0) {
    const DualPoly<N> tall = 2 * (F(1, 1) * F(2, 2) - F(2, 1) * F(1, 2));
    result = tall.pow(b);
  }
  // i11 cells read (1,1), i12 read (tau 1, sigma 2), and so on.
  const DualPoly<N> f11 = F(1, 1);
  const bool need2 = free > std::min(s_tau, s_sig);
  const DualPoly<N> f12 = need2 ? F(1, 2) : DualPoly<N>();
  const DualPoly<N> f21 = need2 ? F(2, 1) : DualPoly<N>();
  const DualPoly<N> f22 = need2 ? F(2, 2) : DualPoly<N>();
  DualPoly<N> single;
  for (int i11 = 0; i11 <= std::min(s_tau, s_sig); ++i11) {
    const int i12 = s_tau - i11;
    const int i21 = s_sig - i11;
    const int i22 = t_tau - i21;
    if (i12 < 0 || i21 < 0 || i22 < 0) continue;
    DualPoly<N> term = DualPoly<N>::constant(Rational(multinomial({i11, i12, i21, i22})));
    if (i11) term = term * f11.pow(i11);
    if (i12) term = term * f12.pow(i12);
    if (i21) term = term * f21.pow(i21);
    if (i22) term = term * f22.pow(i22);
    single += term;
  }
  return result * single;
}

inline std::function<TriplePoly(int, int)> d0_factor_form(int factor) {
  return [factor](int l, int m) { return base_change_d0(factor, l, m); };
}

// p_{sigma,tau} for the all-zero code. The first index of every factor comes
// from tau, the second from sigma.
inline TriplePoly expand_p(const ShapeD0& shape, const TableauTriple& sigma,
                           const TableauTriple& tau) {
  return factor_poly<9>(shape.lambda1, sigma.t1, tau.t1, d0_factor_form(1)) *
         factor_poly<9>(shape.lambda2, sigma.t2, tau.t2, d0_factor_form(2)) *
         factor_poly<9>(shape.lambda3, sigma.t3, tau.t3, d0_factor_form(3));
}

// p for the unique column of an empty-code shape.
inline PairPoly expand_p(const ShapeEmpty& shape) {
  const int ls[4] = {shape.l1, shape.l2, shape.l3, shape.l4};
  PairPoly out = PairPoly::constant(1);
  for (int j = 0; j < 4; ++j) out = out * base_change_empty(j + 1).pow(ls[j]);
  return out;
}

// Orbit of {0, x, y} for the ordered triple (0, x, y) whose column patterns
// are counted by the monomial.
inline OrbitId kappa(const TriplePoly::Monomial& m) {
  std::array<int, kBinaryPatterns> bin{};
  std::array<int, kTernaryPatterns> ter{};
  for (int p = 0; p < kBinaryPatterns; ++p) bin[p] = m[p];
  for (int p = 0; p < kTernaryPatterns; ++p) ter[p] = m[kBinaryPatterns + p];
  return canonical_from_counts(bin, ter);
}

// Orbit of {x, y} for the ordered pair whose equal/unequal coordinates are
// counted by the monomial.
inline OrbitId kappa(const ProblemSpec& spec, const PairPoly::Monomial& m) {
  if (m[0] + m[1] != spec.n2 || m[2] + m[3] != spec.n3)
    throw DomainError("kappa: monomial degree does not match the spec");
  if (m[1] == 0 && m[3] == 0) return singleton_orbit(spec);
  return pair_orbit(spec, m[1], m[3]);
}

class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, Rational(0)) {}

  int dim() const { return n_; }
  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const Rational& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  bool is_symmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool operator==(const RationalMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<Rational> data_;
};

// One reduced block: constant + sum_w y(w) coeffs[w] must be PSD.
struct BlockSpec {
  StabilizerCase kind = StabilizerCase::D0;
  std::string label;
  std::vector<std::string> row_labels;
  bool augmented = false;
  RationalMatrix constant;
  std::map<int, RationalMatrix> coeffs;  // orbit table index -> F_w

  int dim() const { return static_cast<int>(row_labels.size()); }
};

namespace detail {

template <std::size_t N>
std::map<std::array<std::uint8_t, N>, int> rank_compositions(int total) {
  std::map<std::array<std::uint8_t, N>, int> ranks;
  for_each_composition<N>(total, [&](const std::array<int, N>& parts) {
    std::array<std::uint8_t, N> m{};
    for (std::size_t i = 0; i < N; ++i) m[i] = static_cast<std::uint8_t>(parts[i]);
    ranks.emplace(m, static_cast<int>(ranks.size()));
  });
  int r = 0;
  for (auto& [m, rank] : ranks) rank = r++;
  return ranks;
}

using RankedTerms = std::vector<std::pair<int, Rational>>;

}  // namespace detail

// Reduced blocks for the all-zero code. With feasible_only, coefficients of
// orbits with minimum distance below d are dropped (those variables are 0).
inline std::vector<BlockSpec> build_blocks_d0(const ProblemSpec& spec, const ShapeIndexD0& shapes,
                                              const OrbitTable& orbits,
                                              bool feasible_only = true) {
  const auto bin_rank = detail::rank_compositions<kBinaryPatterns>(spec.n2);
  const auto ter_rank = detail::rank_compositions<kTernaryPatterns>(spec.n3);
  const int nb = static_cast<int>(bin_rank.size());
  const int nt = static_cast<int>(ter_rank.size());

  // orbit index of every (binary monomial, ternary monomial), -1 if dropped
  std::vector<int> kappa_index(static_cast<std::size_t>(nb) * nt, -1);
  for (const auto& [mb, rb] : bin_rank)
    for (const auto& [mt, rt] : ter_rank) {
      TriplePoly::Monomial m{};
      for (int i = 0; i < kBinaryPatterns; ++i) m[i] = mb[i];
      for (int i = 0; i < kTernaryPatterns; ++i) m[kBinaryPatterns + i] = mt[i];
      const int idx = orbits.index_of(kappa(m));
      if (!feasible_only || orbits[idx].feasible)
        kappa_index[static_cast<std::size_t>(rb) * nt + rt] = idx;
    }

  auto binary_terms = [&](const TriplePoly& p) {
    detail::RankedTerms out;
    for (const auto& [m, c] : p.terms()) {
      std::array<std::uint8_t, kBinaryPatterns> mb{};
      for (int i = 0; i < kBinaryPatterns; ++i) mb[i] = m[i];
      out.emplace_back(bin_rank.at(mb), c);
    }
    return out;
  };
  auto ternary_terms = [&](const TriplePoly& p) {
    detail::RankedTerms out;
    for (const auto& [m, c] : p.terms()) {
      std::array<std::uint8_t, kTernaryPatterns> mt{};
      for (int i = 0; i < kTernaryPatterns; ++i) mt[i] = m[kBinaryPatterns + i];
      out.emplace_back(ter_rank.at(mt), c);
    }
    return out;
  };

  const auto f1 = d0_factor_form(1);
  const auto f2 = d0_factor_form(2);
  const auto f3 = d0_factor_form(3);

  std::vector<BlockSpec> blocks;
  for (const auto& shape : shapes.shapes) {
    const auto& cols = shape.columns;
    const int k = static_cast<int>(cols.size());
    BlockSpec block;
    block.kind = StabilizerCase::D0;
    block.label = shape.label();
    for (const auto& c : cols) block.row_labels.push_back(to_string(c));
    block.constant = RationalMatrix(k);

    std::map<std::pair<Tableau, Tableau>, detail::RankedTerms> bin_cache;
    std::map<std::array<Tableau, 4>, detail::RankedTerms> ter_cache;
    std::map<int, Rational> acc;
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        const auto& sigma = cols[i];
        const auto& tau = cols[j];
        auto bkey = std::make_pair(sigma.t1, tau.t1);
        auto bit = bin_cache.find(bkey);
        if (bit == bin_cache.end())
          bit = bin_cache
                    .emplace(bkey, binary_terms(factor_poly<9>(shape.lambda1, sigma.t1,
                                                               tau.t1, f1)))
                    .first;
        std::array<Tableau, 4> tkey{sigma.t2, tau.t2, sigma.t3, tau.t3};
        auto tit = ter_cache.find(tkey);
        if (tit == ter_cache.end())
          tit = ter_cache
                    .emplace(tkey, ternary_terms(
                                       factor_poly<9>(shape.lambda2, sigma.t2, tau.t2, f2) *
                                       factor_poly<9>(shape.lambda3, sigma.t3, tau.t3, f3)))
                    .first;
        acc.clear();
        for (const auto& [rb, cb] : bit->second)
          for (const auto& [rt, ct] : tit->second) {
            const int idx = kappa_index[static_cast<std::size_t>(rb) * nt + rt];
            if (idx < 0) continue;
            acc[idx] += cb * ct;
          }
        for (const auto& [idx, value] : acc) {
          if (value == 0) continue;
          auto [it, inserted] = block.coeffs.try_emplace(idx, k);
          it->second(i, j) = value;
          it->second(j, i) = value;
        }
      }
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

// Reduced blocks for the empty code: one 1x1 block per shape, the shape
// ((n2),(),(n3),()) extended by the row of the empty code.
inline std::vector<BlockSpec> build_blocks_empty(const ProblemSpec& spec,
                                                 const ShapeIndexEmpty& shapes,
                                                 const OrbitTable& orbits,
                                                 bool feasible_only = true) {
  const Rational words = Rational(power(2, spec.n2) * power(3, spec.n3));
  const int singleton = orbits.singleton_index();
  std::vector<BlockSpec> blocks;
  for (const auto& shape : shapes.shapes) {
    BlockSpec block;
    block.kind = StabilizerCase::Empty;
    block.label = shape.label();
    block.augmented = shape.augmented;
    if (shape.augmented) block.row_labels.push_back("e_empty");
    block.row_labels.push_back("v");
    const int k = block.dim();
    const int v = k - 1;
    block.constant = RationalMatrix(k);
    if (shape.augmented) block.constant(0, 0) = 1;
    const PairPoly p = expand_p(shape);
    for (const auto& [m, c] : p.terms()) {
      const int idx = orbits.index_of(kappa(spec, m));
      if (feasible_only && !orbits[idx].feasible) continue;
      auto [it, inserted] = block.coeffs.try_emplace(idx, k);
      it->second(v, v) += c;
    }
    if (shape.augmented) {
      auto [it, inserted] = block.coeffs.try_emplace(singleton, k);
      it->second(0, v) = words;
      it->second(v, 0) = words;
    }
    for (auto it = block.coeffs.begin(); it != block.coeffs.end();) {
      if (it->second.is_zero())
        it = block.coeffs.erase(it);
      else
        ++it;
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

}  // namespace mixedsdp
