#pragma once

// SDPA sparse format (.dat-s) for SdpProblem, a reader for it, and a reader
// for the result block printed by SDPA-family solvers.
//
// SDPA solves  min c'^T x  s.t.  sum_i F'_i x_i - F'_0 >= 0.  Our problem is
// max c^T y s.t. F0 + sum_i y_i F_i >= 0, so the file carries c' = -c,
// F'_i = F_i and F'_0 = -F0. The optimal values read back are the negatives
// of ours.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "mixedsdp/errors.hpp"
#include "mixedsdp/rational.hpp"
#include "mixedsdp/sdp_model.hpp"

namespace mixedsdp {

struct SdpaEntry {
  int matno = 0;  // 0 is -F0
  int block = 0;  // 1-based
  int i = 0;      // 1-based, i <= j
  int j = 0;
  double value = 0.0;

  bool operator==(const SdpaEntry&) const = default;
};

struct SdpaData {
  int m = 0;
  std::vector<int> block_sizes;  // negative for diagonal blocks
  std::vector<double> c;         // SDPA objective, minimised
  std::vector<SdpaEntry> entries;

  bool operator==(const SdpaData&) const = default;
};

// Shortest decimal that reads back as the same double.
inline std::string shortest_decimal(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw DomainError("shortest_decimal: conversion failed");
  return std::string(buf, end);
}

// The problem laid out as SDPA blocks: every LMI block of size >= 2 is its own
// block, and the 1x1 blocks followed by the nonnegativity rows form one
// diagonal block at the end.
inline SdpaData to_sdpa(const SdpProblem& p) {
  SdpaData d;
  d.m = static_cast<int>(p.variable_count());
  for (const auto& q : p.objective) d.c.push_back(-to_double(q));
  std::map<std::tuple<int, int, int, int>, double> entries;
  int blk = 0;
  for (const auto& b : p.blocks) {
    if (b.dim() < 2) continue;
    ++blk;
    d.block_sizes.push_back(b.dim());
    for (int i = 0; i < b.dim(); ++i)
      for (int j = i; j < b.dim(); ++j) {
        if (b.constant(i, j) != 0) entries[{0, blk, i + 1, j + 1}] = -to_double(b.constant(i, j));
        for (const auto& [var, f] : b.coeffs)
          if (f(i, j) != 0) entries[{var + 1, blk, i + 1, j + 1}] = to_double(f(i, j));
      }
  }
  int rows = 0;
  const int diag = blk + 1;
  for (const auto& b : p.blocks) {
    if (b.dim() != 1) continue;
    ++rows;
    if (b.constant(0, 0) != 0) entries[{0, diag, rows, rows}] = -to_double(b.constant(0, 0));
    for (const auto& [var, f] : b.coeffs)
      if (f(0, 0) != 0) entries[{var + 1, diag, rows, rows}] = to_double(f(0, 0));
  }
  for (int v : p.nonneg) {
    ++rows;
    entries[{v + 1, diag, rows, rows}] = 1.0;
  }
  if (rows > 0) d.block_sizes.push_back(-rows);
  for (const auto& [key, value] : entries) {
    const auto [matno, b, i, j] = key;
    d.entries.push_back({matno, b, i, j, value});
  }
  return d;
}

inline void write_sdpa(const SdpaData& d, std::ostream& out, const std::string& title = "") {
  out << "* " << (title.empty() ? "mixed-code bound" : title) << "\n";
  out << "* maximise c^T y s.t. F0 + sum_i y_i F_i >= 0, written as SDPA's\n";
  out << "* min (-c)^T y s.t. sum_i F_i y_i - (-F0) >= 0; optimal values are negated\n";
  out << d.m << "\n" << d.block_sizes.size() << "\n";
  for (std::size_t k = 0; k < d.block_sizes.size(); ++k)
    out << (k ? " " : "") << d.block_sizes[k];
  out << "\n";
  for (std::size_t k = 0; k < d.c.size(); ++k) out << (k ? " " : "") << shortest_decimal(d.c[k]);
  out << "\n";
  for (const auto& e : d.entries)
    out << e.matno << " " << e.block << " " << e.i << " " << e.j << " " << shortest_decimal(e.value)
        << "\n";
}

inline void emit_sdpa(const SdpProblem& p, std::ostream& out) {
  write_sdpa(to_sdpa(p), out, "bound for " + describe(p.spec));
}

inline void emit_sdpa(const SdpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("emit_sdpa: cannot open " + path);
  emit_sdpa(p, out);
  out.flush();
  if (!out) throw Error("emit_sdpa: write failed for " + path);
}

namespace detail {

inline double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && token[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("not a number: '" + token + "'");
  return v;
}

inline int parse_int(const std::string& token) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("not an integer: '" + token + "'");
  return v;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cleaned = line;
  for (char& ch : cleaned)
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  std::istringstream in(cleaned);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace detail

inline SdpaData parse_sdpa(std::istream& in) {
  SdpaData d;
  std::string line;
  std::vector<std::string> header;
  // comments, then m, nBlocks, block sizes, objective
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*' || line[0] == '"') continue;
    break;
  }
  auto next_tokens = [&]() {
    auto t = detail::tokens(line);
    if (t.empty()) throw ParseError("unexpected blank line in SDPA header");
    return t;
  };
  if (!in && line.empty()) throw ParseError("empty SDPA file");
  d.m = detail::parse_int(next_tokens()[0]);
  if (!std::getline(in, line)) throw ParseError("missing block count");
  const int nblocks = detail::parse_int(next_tokens()[0]);
  if (!std::getline(in, line)) throw ParseError("missing block sizes");
  auto sizes = next_tokens();
  if (static_cast<int>(sizes.size()) < nblocks) throw ParseError("too few block sizes");
  for (int k = 0; k < nblocks; ++k) d.block_sizes.push_back(detail::parse_int(sizes[k]));
  while (static_cast<int>(d.c.size()) < d.m) {
    if (!std::getline(in, line)) throw ParseError("objective vector too short");
    for (const auto& t : detail::tokens(line)) d.c.push_back(detail::parse_double(t));
  }
  if (static_cast<int>(d.c.size()) != d.m) throw ParseError("objective vector has wrong length");
  while (std::getline(in, line)) {
    auto t = detail::tokens(line);
    if (t.empty()) continue;
    if (t.size() != 5) throw ParseError("entry line needs 5 fields: '" + line + "'");
    SdpaEntry e{detail::parse_int(t[0]), detail::parse_int(t[1]), detail::parse_int(t[2]),
                detail::parse_int(t[3]), detail::parse_double(t[4])};
    if (e.matno < 0 || e.matno > d.m || e.block < 1 || e.block > nblocks)
      throw ParseError("entry index out of range: '" + line + "'");
    const int size = std::abs(d.block_sizes[e.block - 1]);
    if (e.i < 1 || e.j < 1 || e.i > size || e.j > size)
      throw ParseError("entry position out of range: '" + line + "'");
    if (e.i > e.j) std::swap(e.i, e.j);
    d.entries.push_back(e);
  }
  return d;
}

inline SdpaData parse_sdpa(const std::string& text) {
  std::istringstream in(text);
  return parse_sdpa(in);
}

struct SdpaResult {
  double objective = 0.0;       // objValPrimal as printed (SDPA orientation)
  double dual_objective = 0.0;  // objValDual as printed
};

// Reads "objValPrimal = ..." and "objValDual = ..." from solver output.
inline SdpaResult parse_sdpa_output(const std::string& text) {
  auto find = [&](const char* key) -> std::optional<double> {
    const std::regex re(std::string(key) + R"(\s*=\s*([-+0-9.eEinfINFna]+))");
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    return detail::parse_double(m[1].str());
  };
  const auto primal = find("objValPrimal");
  const auto dual = find("objValDual");
  if (!primal) throw ParseError("solver output has no objValPrimal line");
  if (!dual) throw ParseError("solver output has no objValDual line");
  return {*primal, *dual};
}

// SDPA values converted to (objective, dual objective) of the maximisation.
inline std::pair<double, double> external_objectives(const SdpaResult& r) {
  return {-r.objective, -r.dual_objective};
}

}  // namespace mixedsdp
