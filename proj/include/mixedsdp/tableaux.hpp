#pragma once

// Partitions, semistandard Young tableaux, and the index structures that
// enumerate the columns of the representative sets for the two stabiliser
// cases: the all-zero code and the empty code.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mixedsdp/codes.hpp"
#include "mixedsdp/errors.hpp"

namespace mixedsdp {

struct Partition {
  std::vector<int> parts;  // weakly decreasing, positive

  int size() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  int height() const { return static_cast<int>(parts.size()); }
  // Number of columns of the Ferrers diagram of height two or more.
  int tall_columns() const { return parts.size() >= 2 ? parts[1] : 0; }

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;
};

inline std::string to_string(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.parts.size(); ++i)
    s += (i ? "," : "") + std::to_string(p.parts[i]);
  return s + ")";
}

// Single-row partition (n), or () for n = 0.
inline Partition row_partition(int n) {
  return n == 0 ? Partition{} : Partition{{n}};
}

// Partitions of n with at most h rows, largest first part first.
inline std::vector<Partition> partitions_up_to_height(int n, int h) {
  if (n < 0 || h < 0) throw DomainError("partitions_up_to_height: negative argument");
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(Partition{cur});
      return;
    }
    if (static_cast<int>(cur.size()) == h) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

// A filling of a Ferrers diagram, stored row-major, entries 1-based.
struct Tableau {
  Partition shape;
  std::vector<int> entries;

  int at(int row, int col) const {
    int offset = 0;
    for (int r = 0; r < row; ++r) offset += shape.parts[r];
    return entries[offset + col];
  }

  int count(int value) const {
    return static_cast<int>(std::count(entries.begin(), entries.end(), value));
  }

  bool is_semistandard(int m) const {
    for (int v : entries)
      if (v < 1 || v > m) return false;
    for (int r = 0; r < shape.height(); ++r)
      for (int c = 0; c < shape.parts[r]; ++c) {
        if (c > 0 && at(r, c - 1) > at(r, c)) return false;
        if (r > 0 && at(r - 1, c) >= at(r, c)) return false;
      }
    return true;
  }

  auto operator<=>(const Tableau&) const = default;
  bool operator==(const Tableau&) const = default;
};

inline std::string to_string(const Tableau& t) {
  std::string s = "[";
  int offset = 0;
  for (int r = 0; r < t.shape.height(); ++r) {
    if (r) s += "/";
    for (int c = 0; c < t.shape.parts[r]; ++c) s += std::to_string(t.entries[offset + c]);
    offset += t.shape.parts[r];
  }
  return s + "]";
}

// All semistandard tableaux of shape lambda with entries in [m], sorted by
// their row-major entry sequence.
inline std::vector<Tableau> semistandard_tableaux(const Partition& lambda, int m) {
  std::vector<Tableau> out;
  const int n = lambda.size();
  if (m < lambda.height()) return out;
  std::vector<int> row_of(n), col_of(n);
  {
    int k = 0;
    for (int r = 0; r < lambda.height(); ++r)
      for (int c = 0; c < lambda.parts[r]; ++c, ++k) {
        row_of[k] = r;
        col_of[k] = c;
      }
  }
  std::vector<int> entries(n);
  auto above = [&](int k) { return k - lambda.parts[row_of[k] - 1]; };
  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      out.push_back(Tableau{lambda, entries});
      return;
    }
    int lo = 1;
    if (col_of[k] > 0) lo = std::max(lo, entries[k - 1]);
    if (row_of[k] > 0) lo = std::max(lo, entries[above(k)] + 1);
    for (int v = lo; v <= m; ++v) {
      entries[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Stabiliser of the all-zero word.
//
// Factor 1: the n2 binary coordinates, trivial group on [2], entries in [2].
// Factor 2: l2 ternary coordinates carrying the trivial copies (A2).
// Factor 3: l3 ternary coordinates carrying the sign copy (A3).

struct TableauTriple {
  Tableau t1;
  Tableau t2;
  Tableau t3;
  int weight = 0;  // weight of the words spanned by this column

  auto operator<=>(const TableauTriple&) const = default;
  bool operator==(const TableauTriple&) const = default;
};

inline std::string to_string(const TableauTriple& t) {
  return to_string(t.t1) + to_string(t.t2) + to_string(t.t3);
}

struct ShapeD0 {
  int n2 = 0;
  int l2 = 0;
  int l3 = 0;
  Partition lambda1;
  Partition lambda2;
  Partition lambda3;
  std::vector<TableauTriple> all;      // W_lambda
  std::vector<TableauTriple> columns;  // W'_lambda, the weight-filtered subset

  std::string label() const {
    return "D0 n=(" + std::to_string(n2) + "," + std::to_string(l2) + "," +
           std::to_string(l3) + ") lambda=" + to_string(lambda1) + to_string(lambda2) +
           to_string(lambda3);
  }
};

struct ShapeIndexD0 {
  ProblemSpec spec;
  std::vector<ShapeD0> shapes;
};

inline bool weight_allowed(int weight, const ProblemSpec& spec) {
  return weight == 0 || (weight >= spec.d && weight <= spec.n2 + spec.n3);
}

inline ShapeIndexD0 build_shape_index_d0(const ProblemSpec& spec) {
  ShapeIndexD0 index{spec, {}};
  for (int l2 = spec.n3; l2 >= 0; --l2) {
    const int l3 = spec.n3 - l2;
    for (const auto& lam1 : partitions_up_to_height(spec.n2, 2)) {
      const auto tabs1 = semistandard_tableaux(lam1, 2);
      for (const auto& lam2 : partitions_up_to_height(l2, 2)) {
        const auto tabs2 = semistandard_tableaux(lam2, 2);
        for (const auto& lam3 : partitions_up_to_height(l3, 1)) {
          const auto tabs3 = semistandard_tableaux(lam3, 1);
          ShapeD0 shape{spec.n2, l2, l3, lam1, lam2, lam3, {}, {}};
          for (const auto& a : tabs1)
            for (const auto& b : tabs2)
              for (const auto& c : tabs3) {
                const int weight = spec.n2 + spec.n3 - a.count(1) - b.count(1);
                TableauTriple col{a, b, c, weight};
                shape.all.push_back(col);
                if (weight_allowed(weight, spec)) shape.columns.push_back(col);
              }
          if (!shape.columns.empty()) index.shapes.push_back(std::move(shape));
        }
      }
    }
  }
  return index;
}

// ---------------------------------------------------------------------------
// Empty code: the full group. Factors B1, B2 (binary) and B3, B4 (ternary),
// all with m = 1, so every shape has a single row per factor and a single
// column in its representative matrix.

struct ShapeEmpty {
  int l1 = 0;
  int l2 = 0;
  int l3 = 0;
  int l4 = 0;
  std::vector<Tableau> column;  // the unique element of Z_lambda, one per factor
  bool augmented = false;       // carries the extra row for the empty code

  std::string label() const {
    return "Empty n=(" + std::to_string(l1) + "," + std::to_string(l2) + "," +
           std::to_string(l3) + "," + std::to_string(l4) + ")" +
           (augmented ? " +e0" : "");
  }
};

struct ShapeIndexEmpty {
  ProblemSpec spec;
  std::vector<ShapeEmpty> shapes;
};

inline ShapeIndexEmpty build_shape_index_empty(const ProblemSpec& spec) {
  ShapeIndexEmpty index{spec, {}};
  for (int l1 = spec.n2; l1 >= 0; --l1)
    for (int l3 = spec.n3; l3 >= 0; --l3) {
      ShapeEmpty shape;
      shape.l1 = l1;
      shape.l2 = spec.n2 - l1;
      shape.l3 = l3;
      shape.l4 = spec.n3 - l3;
      for (int l : {shape.l1, shape.l2, shape.l3, shape.l4}) {
        auto tabs = semistandard_tableaux(row_partition(l), 1);
        shape.column.push_back(tabs.front());
      }
      shape.augmented = shape.l2 == 0 && shape.l4 == 0;
      index.shapes.push_back(std::move(shape));
    }
  return index;
}

}  // namespace mixedsdp
