#pragma once

// Brute-force verification of the reduced blocks at tiny sizes. Everything
// here is built from the definitions directly: the representative vectors are
// expanded in the full word space, the orbit matrices N_w and M_w are written
// down entry by entry, and the contractions are compared with the block
// coefficients exactly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mixedsdp/codes.hpp"
#include "mixedsdp/coefficients.hpp"
#include "mixedsdp/errors.hpp"
#include "mixedsdp/tableaux.hpp"

namespace mixedsdp {

using IntVector = std::vector<std::int64_t>;

// u_{tau,B} = sum_{tau' ~ tau} sum_{c in C_lambda} sgn(c) (x)_{y} B(tau'(c(y)))
// as a vector of length q^n; the cell order is row-major and the first cell
// is the most significant tensor index.
inline IntVector representative_vector(const Tableau& tau,
                                       const std::vector<LetterVector>& columns) {
  const Partition& lambda = tau.shape;
  const int n = lambda.size();
  const int q = columns.empty() ? 1 : static_cast<int>(columns.front().size());
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= static_cast<std::size_t>(q);
  IntVector out(dim, 0);

  std::vector<int> row_start;
  {
    int offset = 0;
    for (int r = 0; r < lambda.height(); ++r) {
      row_start.push_back(offset);
      offset += lambda.parts[r];
    }
  }
  // cells of each Ferrers column
  std::vector<std::vector<int>> column_cells(lambda.height() ? lambda.parts[0] : 0);
  for (int r = 0; r < lambda.height(); ++r)
    for (int c = 0; c < lambda.parts[r]; ++c) column_cells[c].push_back(row_start[r] + c);

  // distinct row rearrangements of tau
  std::vector<std::vector<int>> rearrangements;
  {
    std::vector<std::vector<int>> rows;
    for (int r = 0; r < lambda.height(); ++r) {
      std::vector<int> row(tau.entries.begin() + row_start[r],
                           tau.entries.begin() + row_start[r] + lambda.parts[r]);
      std::sort(row.begin(), row.end());
      rows.push_back(row);
    }
    std::vector<int> filling(n);
    auto rec = [&](auto&& self, int r) -> void {
      if (r == lambda.height()) {
        rearrangements.push_back(filling);
        return;
      }
      std::vector<int> row = rows[r];
      do {
        std::copy(row.begin(), row.end(), filling.begin() + row_start[r]);
        self(self, r + 1);
      } while (std::next_permutation(row.begin(), row.end()));
    };
    rec(rec, 0);
  }

  // column stabiliser: one permutation per Ferrers column, with signs
  std::vector<std::pair<std::vector<int>, int>> stabiliser;
  {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    auto rec = [&](auto&& self, std::size_t col, int sign) -> void {
      if (col == column_cells.size()) {
        stabiliser.emplace_back(perm, sign);
        return;
      }
      const auto& cells = column_cells[col];
      std::vector<int> idx(cells.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      do {
        int inversions = 0;
        for (std::size_t i = 0; i < idx.size(); ++i)
          for (std::size_t j = i + 1; j < idx.size(); ++j) inversions += idx[i] > idx[j];
        for (std::size_t i = 0; i < idx.size(); ++i) perm[cells[i]] = cells[idx[i]];
        self(self, col + 1, inversions % 2 ? -sign : sign);
      } while (std::next_permutation(idx.begin(), idx.end()));
      for (int cell : cells) perm[cell] = cell;
    };
    rec(rec, 0, 1);
  }

  for (const auto& filling : rearrangements) {
    for (const auto& [perm, sign] : stabiliser) {
      // tensor product of the letter vectors B(filling[perm[y]])
      IntVector term(1, sign);
      for (int y = 0; y < n; ++y) {
        const LetterVector& v = columns.at(filling[perm[y]] - 1);
        IntVector next(term.size() * q, 0);
        for (std::size_t i = 0; i < term.size(); ++i)
          for (int s = 0; s < q; ++s) next[i * q + s] = term[i] * v[s];
        term.swap(next);
      }
      for (std::size_t i = 0; i < dim; ++i) out[i] += term[i];
    }
  }
  return out;
}

inline IntVector kronecker(const IntVector& a, const IntVector& b) {
  IntVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

// u_tau for the all-zero code, as a vector over all words.
inline IntVector explicit_u(const TableauTriple& t) {
  const std::vector<LetterVector> a1 = {representative_column_d0(1, 1),
                                        representative_column_d0(1, 2)};
  const std::vector<LetterVector> a2 = {representative_column_d0(2, 1),
                                        representative_column_d0(2, 2)};
  const std::vector<LetterVector> a3 = {representative_column_d0(3, 1)};
  return kronecker(kronecker(representative_vector(t.t1, a1), representative_vector(t.t2, a2)),
                   representative_vector(t.t3, a3));
}

// v_tau for the empty code.
inline IntVector explicit_v(const ShapeEmpty& shape) {
  IntVector out(1, 1);
  for (int j = 0; j < 4; ++j)
    out = kronecker(out, representative_vector(shape.column[j],
                                               {representative_column_empty(j + 1)}));
  return out;
}

struct ReductionReport {
  ProblemSpec spec;
  std::size_t entries_checked = 0;
  std::size_t eigen_checks = 0;
  std::vector<std::string> discrepancies;

  bool ok() const { return discrepancies.empty(); }
};

inline std::string summary(const ReductionReport& r) {
  std::ostringstream out;
  out << "verify " << describe(r.spec) << ": " << (r.ok() ? "pass" : "FAIL") << " ("
      << r.entries_checked << " block entries, " << r.eigen_checks << " eigenvalue checks)";
  if (!r.ok()) out << "\n  first discrepancy: " << r.discrepancies.front();
  return out.str();
}

namespace detail {

// Smallest eigenvalue of m divided by `scale`, by default the largest entry.
inline double min_eigenvalue_normalised(const Eigen::MatrixXd& m, double scale = 0.0) {
  if (m.rows() == 0) return 0.0;
  if (scale <= 0.0) scale = m.cwiseAbs().maxCoeff();
  scale = std::max(scale, 1e-300);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m / scale, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Magnitude of the terms that make up a block value: cancellation between
// them is measured against this rather than against the (possibly tiny) sum.
inline double block_scale(const BlockSpec& block, const std::vector<double>& y) {
  double scale = 0.0;
  for (int i = 0; i < block.dim(); ++i)
    for (int j = 0; j < block.dim(); ++j) scale = std::max(scale, std::abs(to_double(block.constant(i, j))));
  for (const auto& [idx, f] : block.coeffs) {
    double fmax = 0.0;
    for (int i = 0; i < block.dim(); ++i)
      for (int j = 0; j < block.dim(); ++j) fmax = std::max(fmax, std::abs(to_double(f(i, j))));
    scale = std::max(scale, std::abs(y[idx]) * fmax);
  }
  return scale;
}

inline Eigen::MatrixXd evaluate_block(const BlockSpec& block, const std::vector<double>& y) {
  const int k = block.dim();
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = to_double(block.constant(i, j));
  for (const auto& [idx, f] : block.coeffs)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) += y[idx] * to_double(f(i, j));
  return m;
}

}  // namespace detail

// G-average of the indicator of the subcodes of `code`: y(w) is the number of
// subcodes of size <= 3 in orbit w divided by the size of w.
inline std::vector<Rational> averaged_indicator(const ProblemSpec& spec, const OrbitTable& orbits,
                                                const std::vector<Word>& code) {
  std::vector<BigInt> hits(orbits.size(), 0);
  const std::size_t n = code.size();
  hits[OrbitTable::empty_index()] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    hits[orbits.index_of(canonical_orbit(spec, Code({code[i]})))] += 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      hits[orbits.index_of(canonical_orbit(spec, Code({code[i], code[j]})))] += 1;
      for (std::size_t l = j + 1; l < n; ++l)
        hits[orbits.index_of(canonical_orbit(spec, Code({code[i], code[j], code[l]})))] += 1;
    }
  }
  std::vector<Rational> y(orbits.size());
  for (std::size_t w = 0; w < orbits.size(); ++w) {
    y[w] = Rational(hits[w], orbits.orbit_size(static_cast<int>(w)));
    y[w].canonicalize();
  }
  return y;
}

inline constexpr std::size_t kVerifyWordCap = 108;

inline ReductionReport verify_reduction(const ProblemSpec& spec, int random_trials = 50,
                                        std::uint64_t seed = 12345) {
  spec.validate();
  const std::size_t nw = spec.word_count();
  if (nw > kVerifyWordCap)
    throw ResourceError("verify_reduction: only specs with at most 108 words are supported");

  ReductionReport report{spec, 0, 0, {}};
  const auto words = all_words(spec);
  const OrbitTable orbits = enumerate_orbits(spec);
  auto fail = [&](const std::string& what) { report.discrepancies.push_back(what); };

  // orbit of {0, x, y} and of {x, y}
  std::vector<int> triple_orbit(nw * nw), pair_orbit_idx(nw * nw);
  const Word& zero = words[0];
  for (std::size_t x = 0; x < nw; ++x)
    for (std::size_t y = 0; y < nw; ++y) {
      std::vector<Word> t = {zero, words[x], words[y]};
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      triple_orbit[x * nw + y] = orbits.index_of(canonical_orbit(spec, Code(t)));
      std::vector<Word> p = {words[x], words[y]};
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
      pair_orbit_idx[x * nw + y] = orbits.index_of(canonical_orbit(spec, Code(p)));
    }

  // ---- all-zero code
  const auto shapes_d0 = build_shape_index_d0(spec);
  const auto blocks_d0 = build_blocks_d0(spec, shapes_d0, orbits, /*feasible_only=*/false);
  const auto blocks_d0_feasible = build_blocks_d0(spec, shapes_d0, orbits, true);
  std::vector<std::vector<IntVector>> u_vectors;
  for (std::size_t s = 0; s < shapes_d0.shapes.size(); ++s) {
    const auto& shape = shapes_d0.shapes[s];
    const auto& block = blocks_d0[s];
    std::vector<IntVector> us;
    for (const auto& col : shape.columns) {
      us.push_back(explicit_u(col));
      for (std::size_t x = 0; x < nw; ++x)
        if (us.back()[x] != 0 && words[x].weight() != col.weight)
          fail(block.label + ": column " + to_string(col) + " leaves its weight space");
    }
    const int k = static_cast<int>(us.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        std::vector<std::int64_t> acc(orbits.size(), 0);
        for (std::size_t x = 0; x < nw; ++x) {
          if (us[i][x] == 0) continue;
          for (std::size_t y = 0; y < nw; ++y) {
            if (us[j][y] == 0) continue;
            acc[triple_orbit[x * nw + y]] += us[i][x] * us[j][y];
          }
        }
        for (std::size_t w = 0; w < orbits.size(); ++w) {
          auto it = block.coeffs.find(static_cast<int>(w));
          const Rational engine = it == block.coeffs.end() ? Rational(0) : it->second(i, j);
          ++report.entries_checked;
          if (engine != Rational(acc[w])) {
            std::ostringstream msg;
            msg << block.label << " entry (" << shape.columns[i].t1.entries.size() << ":"
                << to_string(shape.columns[i]) << ", " << to_string(shape.columns[j])
                << ") orbit " << to_string(orbits[w].id) << ": engine " << to_string(engine)
                << " explicit " << acc[w];
            fail(msg.str());
          }
        }
      }
    u_vectors.push_back(std::move(us));
  }

  // ---- empty code
  const auto shapes_empty = build_shape_index_empty(spec);
  const auto blocks_empty = build_blocks_empty(spec, shapes_empty, orbits, false);
  const auto blocks_empty_feasible = build_blocks_empty(spec, shapes_empty, orbits, true);
  std::vector<IntVector> v_vectors;
  for (std::size_t s = 0; s < shapes_empty.shapes.size(); ++s) {
    const auto& shape = shapes_empty.shapes[s];
    const auto& block = blocks_empty[s];
    const IntVector v = explicit_v(shape);
    std::vector<std::int64_t> acc(orbits.size(), 0);
    for (std::size_t x = 0; x < nw; ++x)
      for (std::size_t y = 0; y < nw; ++y) acc[pair_orbit_idx[x * nw + y]] += v[x] * v[y];
    const int vi = block.dim() - 1;
    for (std::size_t w = 0; w < orbits.size(); ++w) {
      auto it = block.coeffs.find(static_cast<int>(w));
      const Rational engine = it == block.coeffs.end() ? Rational(0) : it->second(vi, vi);
      ++report.entries_checked;
      if (engine != Rational(acc[w]))
        fail(block.label + " orbit " + to_string(orbits[w].id) + ": engine " +
             to_string(engine) + " explicit " + std::to_string(acc[w]));
    }
    if (shape.augmented) {
      // e_empty^T M v = sum_u v(u) y({u})
      std::int64_t total = 0;
      for (auto value : v) total += value;
      const int single = orbits.singleton_index();
      ++report.entries_checked;
      if (block.constant(0, 0) != 1 || block.coeffs.at(single)(0, vi) != Rational(total))
        fail(block.label + ": empty-code row does not match");
    }
    v_vectors.push_back(v);
  }

  // ---- PSD transport on random invariant assignments
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> allowed_rows;
  for (std::size_t x = 0; x < nw; ++x)
    if (weight_allowed(words[x].weight(), spec)) allowed_rows.push_back(x);

  auto random_code = [&]() {
    std::vector<std::size_t> perm(nw);
    for (std::size_t i = 0; i < nw; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t target = 1 + rng() % std::max<std::size_t>(1, nw / 2);
    std::vector<Word> code;
    for (std::size_t i : perm) {
      if (code.size() >= target) break;
      bool ok = true;
      for (const auto& c : code)
        if (hamming_distance(c, words[i]) < spec.d) ok = false;
      if (ok) code.push_back(words[i]);
    }
    return code;
  };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double noise_levels[] = {0.0, 0.0, 1e-3, 1e-2, 0.1, 0.5};
  for (int trial = 0; trial < random_trials; ++trial) {
    std::vector<double> y(orbits.size(), 0.0);
    const int mix = 1 + static_cast<int>(rng() % 3);
    double total = 0;
    std::vector<double> weights(mix);
    for (auto& w : weights) total += (w = 0.1 + unit(rng));
    for (int j = 0; j < mix; ++j) {
      const auto yc = averaged_indicator(spec, orbits, random_code());
      for (std::size_t w = 0; w < orbits.size(); ++w) y[w] += weights[j] / total * to_double(yc[w]);
    }
    const double noise = noise_levels[trial % 6];
    for (std::size_t w = 1; w < orbits.size(); ++w)
      if (orbits[w].feasible && noise > 0)
        y[w] *= 1.0 + noise * (2 * unit(rng) - 1) * 4;
    y[0] = 1.0;

    // full matrices
    Eigen::MatrixXd full_d0(allowed_rows.size(), allowed_rows.size());
    for (std::size_t a = 0; a < allowed_rows.size(); ++a)
      for (std::size_t b = 0; b < allowed_rows.size(); ++b)
        full_d0(a, b) = y[triple_orbit[allowed_rows[a] * nw + allowed_rows[b]]];
    Eigen::MatrixXd full_empty(nw + 1, nw + 1);
    full_empty(0, 0) = 1.0;
    for (std::size_t x = 0; x < nw; ++x) {
      full_empty(0, x + 1) = full_empty(x + 1, 0) = y[orbits.singleton_index()];
      for (std::size_t z = 0; z < nw; ++z) full_empty(x + 1, z + 1) = y[pair_orbit_idx[x * nw + z]];
    }

    const double tol = 1e-9;
    auto blocks_min = [&](const std::vector<BlockSpec>& blocks) {
      double m = 1e300;
      for (const auto& b : blocks)
        m = std::min(m, detail::min_eigenvalue_normalised(detail::evaluate_block(b, y),
                                                          detail::block_scale(b, y)));
      return m;
    };
    const double full0 = detail::min_eigenvalue_normalised(full_d0);
    const double red0 = blocks_min(blocks_d0_feasible);
    const double fullE = detail::min_eigenvalue_normalised(full_empty);
    const double redE = blocks_min(blocks_empty_feasible);
    report.eigen_checks += 2;
    if ((full0 >= -tol) != (red0 >= -tol)) {
      std::ostringstream msg;
      msg << "trial " << trial << ": zero-word matrix min eigenvalue " << full0
          << " but reduced blocks " << red0;
      fail(msg.str());
    }
    if ((fullE >= -tol) != (redE >= -tol)) {
      std::ostringstream msg;
      msg << "trial " << trial << ": empty-code matrix min eigenvalue " << fullE
          << " but reduced blocks " << redE;
      fail(msg.str());
    }
  }
  return report;
}

}  // namespace mixedsdp
