#pragma once

// The optimisation problem in reduced form: one variable per feasible orbit of
// nonempty codes of size <= 3, maximise N * y(singleton) subject to
//   F0 + sum_w y(w) F_w >= 0   for every reduced block,
//   y(w) >= 0                  for every variable.
// y(empty) = 1 has been substituted into F0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mixedsdp/codes.hpp"
#include "mixedsdp/coefficients.hpp"
#include "mixedsdp/errors.hpp"
#include "mixedsdp/rational.hpp"
#include "mixedsdp/tableaux.hpp"

namespace mixedsdp {

struct LmiBlock {
  std::string label;
  StabilizerCase kind = StabilizerCase::D0;
  std::vector<std::string> row_labels;
  RationalMatrix constant;                // F0 restricted to this block
  std::map<int, RationalMatrix> coeffs;  // variable index -> F_w

  int dim() const { return constant.dim(); }
};

struct SdpProblem {
  ProblemSpec spec;
  OrbitTable orbits;
  std::vector<OrbitId> variables;
  std::vector<int> orbit_of_variable;  // variable -> orbit table index
  std::vector<Rational> objective;
  std::vector<LmiBlock> blocks;
  std::vector<int> nonneg;

  std::size_t variable_count() const { return variables.size(); }

  // Variable index of an orbit, or -1 when the orbit has no variable.
  int variable_of(const OrbitId& w) const {
    auto it = std::find(variables.begin(), variables.end(), w);
    return it == variables.end() ? -1 : static_cast<int>(it - variables.begin());
  }
};

namespace detail {

inline LmiBlock to_lmi(const BlockSpec& b, const std::vector<int>& variable_of_orbit) {
  LmiBlock out;
  out.label = b.label;
  out.kind = b.kind;
  out.row_labels = b.row_labels;
  out.constant = b.constant;
  for (const auto& [orbit, f] : b.coeffs) {
    if (orbit == OrbitTable::empty_index()) {
      // y(empty) = 1
      for (int i = 0; i < f.dim(); ++i)
        for (int j = 0; j < f.dim(); ++j) out.constant(i, j) += f(i, j);
      continue;
    }
    const int var = variable_of_orbit.at(orbit);
    if (var < 0) throw DomainError("block refers to an orbit without a variable");
    out.coeffs.emplace(var, f);
  }
  return out;
}

inline SdpProblem assemble(const ProblemSpec& spec, OrbitTable orbits,
                           const std::vector<BlockSpec>& blocks, int max_code_size) {
  SdpProblem p;
  p.spec = spec;
  std::vector<int> variable_of_orbit(orbits.size(), -1);
  for (std::size_t w = 1; w < orbits.size(); ++w) {
    const auto& e = orbits[w];
    if (!e.feasible || e.id.size > max_code_size) continue;
    variable_of_orbit[w] = static_cast<int>(p.variables.size());
    p.variables.push_back(e.id);
    p.orbit_of_variable.push_back(static_cast<int>(w));
  }
  p.objective.assign(p.variables.size(), Rational(0));
  p.objective[variable_of_orbit.at(orbits.singleton_index())] =
      Rational(power(2, spec.n2) * power(3, spec.n3));
  for (const auto& b : blocks) p.blocks.push_back(to_lmi(b, variable_of_orbit));
  for (std::size_t i = 0; i < p.variables.size(); ++i) p.nonneg.push_back(static_cast<int>(i));
  p.orbits = std::move(orbits);
  return p;
}

}  // namespace detail

inline SdpProblem build_sdp(const ProblemSpec& spec) {
  spec.validate();
  if (spec.k != 3) throw ShapeError("build_sdp: needs k = 3");
  OrbitTable orbits = enumerate_orbits(spec);
  std::vector<BlockSpec> blocks = build_blocks_d0(spec, build_shape_index_d0(spec), orbits);
  auto empty = build_blocks_empty(spec, build_shape_index_empty(spec), orbits);
  blocks.insert(blocks.end(), empty.begin(), empty.end());
  return detail::assemble(spec, std::move(orbits), blocks, 3);
}

// Level two: the empty-code blocks (all 1x1 except the augmented 2x2) and
// nonnegativity of the singleton and pair variables.
inline SdpProblem build_lp_k2(const ProblemSpec& spec) {
  spec.validate();
  if (spec.k != 2) throw ShapeError("build_lp_k2: needs k = 2");
  OrbitTable orbits = enumerate_orbits(spec);
  auto blocks = build_blocks_empty(spec, build_shape_index_empty(spec), orbits);
  return detail::assemble(spec, std::move(orbits), blocks, 2);
}

inline SdpProblem build_problem(const ProblemSpec& spec) {
  return spec.k == 2 ? build_lp_k2(spec) : build_sdp(spec);
}

inline int derived_doubling_bound(const ProblemSpec& spec, int known_bound) {
  spec.validate();
  if (known_bound < 1) throw DomainError("derived_doubling_bound: bound must be positive");
  return 2 * known_bound;
}

// Value of every variable for the G-average of the indicator of the subcodes
// of a code: y(w) = #{C subset of code, C in w} / |w|.
inline std::vector<Rational> code_assignment(const SdpProblem& p, const std::vector<Word>& code) {
  std::vector<BigInt> hits(p.orbits.size(), 0);
  const std::size_t n = code.size();
  auto count = [&](std::vector<Word> c) {
    const auto w = canonical_orbit(p.spec, Code(std::move(c)));
    hits[p.orbits.index_of(w)] += 1;
  };
  for (std::size_t i = 0; i < n; ++i) {
    count({code[i]});
    for (std::size_t j = i + 1; j < n; ++j) {
      count({code[i], code[j]});
      for (std::size_t l = j + 1; l < n; ++l) count({code[i], code[j], code[l]});
    }
  }
  std::vector<Rational> y(p.variable_count());
  for (std::size_t v = 0; v < y.size(); ++v) {
    const int w = p.orbit_of_variable[v];
    y[v] = Rational(hits[w], p.orbits.orbit_size(w));
    y[v].canonicalize();
  }
  for (std::size_t w = 1; w < p.orbits.size(); ++w)
    if (hits[w] != 0 && !p.orbits[w].feasible)
      throw DomainError("code_assignment: the code violates the distance");
  return y;
}

inline Rational objective_value(const SdpProblem& p, const std::vector<Rational>& y) {
  Rational v = 0;
  for (std::size_t i = 0; i < y.size(); ++i) v += p.objective[i] * y[i];
  return v;
}

inline Eigen::MatrixXd evaluate_block(const LmiBlock& b, const std::vector<double>& y) {
  const int k = b.dim();
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = to_double(b.constant(i, j));
  for (const auto& [var, f] : b.coeffs)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const double c = to_double(f(i, j));
        if (c != 0.0) m(i, j) += y[var] * c;
      }
  return m;
}

// Largest magnitude among the terms summed into the block at y.
inline double block_term_scale(const LmiBlock& b, const std::vector<double>& y) {
  double scale = 0.0;
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      scale = std::max(scale, std::abs(to_double(b.constant(i, j))));
  for (const auto& [var, f] : b.coeffs)
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j)
        scale = std::max(scale, std::abs(y[var] * to_double(f(i, j))));
  return scale;
}

struct FeasibilityReport {
  double min_block_eigenvalue = 0.0;  // normalised per block
  std::string worst_block;
  double min_variable = 0.0;
};

// Smallest eigenvalue over the blocks at y, each block divided by the size of
// the terms it is built from, and the smallest variable value.
inline FeasibilityReport check_feasibility(const SdpProblem& p, const std::vector<double>& y) {
  if (y.size() != p.variable_count()) throw ShapeError("check_feasibility: wrong length");
  FeasibilityReport r;
  r.min_block_eigenvalue = 1e300;
  for (const auto& b : p.blocks) {
    const Eigen::MatrixXd m = evaluate_block(b, y);
    const double scale = std::max(block_term_scale(b, y), 1e-300);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m / scale, Eigen::EigenvaluesOnly);
    const double e = es.eigenvalues().minCoeff();
    if (e < r.min_block_eigenvalue) {
      r.min_block_eigenvalue = e;
      r.worst_block = b.label;
    }
  }
  r.min_variable = 1e300;
  for (int v : p.nonneg) r.min_variable = std::min(r.min_variable, y[v]);
  if (p.nonneg.empty()) r.min_variable = 0.0;
  return r;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

}  // namespace mixedsdp
