#pragma once

// The packaged table of published bounds and the bounds that follow from
// N(n2 + 1, n3, d) <= 2 N(n2, n3, d).

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mixedsdp/errors.hpp"
#include "mixedsdp/sdp_model.hpp"

namespace mixedsdp {

#ifdef MIXEDSDP_DATA_DIR
inline constexpr const char* kDefaultTablePath = MIXEDSDP_DATA_DIR "/table1.csv";
#else
inline constexpr const char* kDefaultTablePath = "data/table1.csv";
#endif

struct TableRow {
  int n2 = 0;
  int n3 = 0;
  int d = 0;
  long long lower = 0;
  long long new_upper = 0;
  long long previous_upper = 0;
  std::string mark;  // "", "k4" or "doubling"
};

inline std::vector<TableRow> parse_table(std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("n2,", 0) == 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() == 6) f.emplace_back();
    if (f.size() != 7) throw ParseError("table line " + std::to_string(number) + ": 7 fields expected");
    try {
      rows.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]), std::stoll(f[3]),
                      std::stoll(f[4]), std::stoll(f[5]), f[6]});
    } catch (const std::logic_error&) {
      throw ParseError("table line " + std::to_string(number) + ": not a number");
    }
  }
  return rows;
}

inline std::vector<TableRow> load_table(const std::string& path = kDefaultTablePath) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open table " + path);
  return parse_table(in);
}

inline std::optional<TableRow> find_row(const std::vector<TableRow>& rows, int n2, int n3, int d) {
  for (const auto& r : rows)
    if (r.n2 == n2 && r.n3 == n3 && r.d == d) return r;
  return std::nullopt;
}

struct DoublingRow {
  ProblemSpec source;  // k unused
  long long source_bound = 0;
  ProblemSpec target;
  long long derived = 0;
  std::optional<long long> published;  // the table entry for target, if any
};

// The three bounds of this kind reported with the table: (2,12,8) from
// (1,12,8), (5,3,3) from (4,3,3) and (5,9,4) from (4,9,4).
inline std::vector<DoublingRow> doubling_rows(const std::vector<TableRow>& rows) {
  std::vector<DoublingRow> out;
  for (auto [n2, n3, d] : {std::tuple{1, 12, 8}, {4, 3, 3}, {4, 9, 4}}) {
    const auto src = find_row(rows, n2, n3, d);
    if (!src) throw DomainError("table has no entry for a doubling source");
    DoublingRow r;
    r.source = ProblemSpec{n2, n3, d, 3};
    r.source_bound = src->new_upper;
    r.target = ProblemSpec{n2 + 1, n3, d, 3};
    r.derived = derived_doubling_bound(r.source, static_cast<int>(r.source_bound));
    if (auto t = find_row(rows, n2 + 1, n3, d)) r.published = t->new_upper;
    out.push_back(r);
  }
  return out;
}

}  // namespace mixedsdp
