#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mixedsdp/sdpa_io.hpp"

using namespace mixedsdp;

namespace {

std::string written(const SdpProblem& p) {
  std::ostringstream out;
  emit_sdpa(p, out);
  return out.str();
}

std::vector<std::string> body_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '*') out.push_back(line);
  return out;
}

// max y s.t. 1 - y >= 0
SdpProblem one_variable_lp() {
  SdpProblem p;
  p.variables.resize(1);
  p.orbit_of_variable = {0};
  p.objective = {Rational(1)};
  LmiBlock b;
  b.label = "cap";
  b.constant = RationalMatrix(1);
  b.constant(0, 0) = 1;
  RationalMatrix f(1);
  f(0, 0) = -1;
  b.coeffs.emplace(0, f);
  p.blocks.push_back(b);
  return p;
}

// Dense matrix of sum_i F'_i y_i - F'_0 for one SDPA block.
Eigen::MatrixXd sdpa_block_value(const SdpaData& d, int block, const std::vector<double>& y) {
  const int n = std::abs(d.block_sizes[block - 1]);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : d.entries) {
    if (e.block != block) continue;
    const double w = e.matno == 0 ? -e.value : e.value * y[e.matno - 1];
    m(e.i - 1, e.j - 1) += w;
    if (e.i != e.j) m(e.j - 1, e.i - 1) += w;
  }
  return m;
}

}  // namespace

TEST(ShortestDecimal, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5, 1e-300, 123456789.0, 65.0}) {
    const auto s = shortest_decimal(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(shortest_decimal(0.1), "0.1");
  EXPECT_EQ(shortest_decimal(-0.0), "0");
}

TEST(EmitSdpa, OneVariableLpHasSingleDiagonalBlock) {
  const auto lines = body_lines(written(one_variable_lp()));
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[0], "1");
  EXPECT_EQ(lines[1], "1");
  EXPECT_EQ(lines[2], "-1");
  EXPECT_EQ(lines[3], "-1");
  // -F0 = -1 and F_1 = -1 in the diagonal block
  EXPECT_EQ(std::vector<std::string>(lines.begin() + 4, lines.end()),
            (std::vector<std::string>{"0 1 1 1 -1", "1 1 1 1 -1"}));
}

TEST(EmitSdpa, HeaderDocumentsOrientation) {
  const auto text = written(build_sdp(ProblemSpec::make(1, 1, 1)));
  EXPECT_EQ(text.rfind("* ", 0), 0u);
  EXPECT_NE(text.find("negated"), std::string::npos);
  EXPECT_EQ(text.find("-0 "), std::string::npos);
  EXPECT_EQ(text.find(" -0\n"), std::string::npos);
}

TEST(EmitSdpa, RoundTripIsLossless) {
  for (auto spec : {ProblemSpec::make(1, 1, 1), ProblemSpec::make(2, 3, 3),
                    ProblemSpec::make(2, 2, 2, 2)}) {
    const auto p = build_problem(spec);
    const auto data = to_sdpa(p);
    const auto parsed = parse_sdpa(written(p));
    EXPECT_EQ(parsed, data) << describe(spec);
    // and the text is a fixed point
    std::ostringstream again;
    write_sdpa(parsed, again, "bound for " + describe(spec));
    EXPECT_EQ(again.str(), written(p));
  }
}

TEST(EmitSdpa, EncodesTheSameConstraints) {
  const auto p = build_sdp(ProblemSpec::make(2, 2, 2));
  const auto d = to_sdpa(p);
  ASSERT_EQ(d.m, static_cast<int>(p.variable_count()));
  for (int i = 0; i < d.m; ++i) EXPECT_EQ(d.c[i], -to_double(p.objective[i]));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> y(d.m);
  for (auto& v : y) v = dist(rng);

  int sdp_block = 0;
  std::vector<double> diagonal;
  for (const auto& b : p.blocks) {
    const Eigen::MatrixXd ours = evaluate_block(b, y);
    if (b.dim() == 1) {
      diagonal.push_back(ours(0, 0));
      continue;
    }
    ++sdp_block;
    EXPECT_LE((sdpa_block_value(d, sdp_block, y) - ours).cwiseAbs().maxCoeff(), 1e-12) << b.label;
  }
  for (int v : p.nonneg) diagonal.push_back(y[v]);
  ASSERT_EQ(d.block_sizes.back(), -static_cast<int>(diagonal.size()));
  const Eigen::MatrixXd diag = sdpa_block_value(d, sdp_block + 1, y);
  for (std::size_t r = 0; r < diagonal.size(); ++r)
    EXPECT_NEAR(diag(r, r), diagonal[r], 1e-12);
}

TEST(EmitSdpa, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "mixedsdp_emit_test.dat-s";
  emit_sdpa(one_variable_lp(), path.string());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), written(one_variable_lp()));
  std::filesystem::remove(path);
  EXPECT_THROW(emit_sdpa(one_variable_lp(), "/nonexistent-dir/x.dat-s"), Error);
}

TEST(ParseSdpa, AcceptsPunctuationAndComments) {
  const auto d = parse_sdpa(
      "\"title\"\n* comment\n2 = m\n1\n{2}\n{1.0, -2}\n0 1 1 1 1\n1,1,1,2,0.5\n2 1 2 1 3\n");
  EXPECT_EQ(d.m, 2);
  EXPECT_EQ(d.block_sizes, std::vector<int>{2});
  EXPECT_EQ(d.c, (std::vector<double>{1.0, -2.0}));
  ASSERT_EQ(d.entries.size(), 3u);
  EXPECT_EQ(d.entries[2], (SdpaEntry{2, 1, 1, 2, 3.0}));
}

TEST(ParseSdpa, RejectsMalformedInput) {
  EXPECT_THROW(parse_sdpa(""), ParseError);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n"), ParseError);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n1\n0 1 1 1\n"), ParseError);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n1\n0 2 1 1 1\n"), ParseError);
  EXPECT_THROW(parse_sdpa("1\n1\n2\n1\n0 1 3 1 1\n"), ParseError);
  EXPECT_THROW(parse_sdpa("1\n1\n2\nx\n"), ParseError);
}

TEST(ParseSdpaOutput, CanonicalSample) {
  const std::string text =
      "phase.value  = pdOPT\n"
      "   Iteration = 24\n"
      "objValPrimal = 6.5e+01\n"
      "objValDual   = 6.5000001e+01\n";
  const auto r = parse_sdpa_output(text);
  EXPECT_DOUBLE_EQ(r.objective, 65.0);
  EXPECT_DOUBLE_EQ(r.dual_objective, 65.000001);
  const auto [ours, ours_dual] = external_objectives(r);
  EXPECT_DOUBLE_EQ(ours, -65.0);
  EXPECT_DOUBLE_EQ(ours_dual, -65.000001);
}

TEST(ParseSdpaOutput, MissingDualLine) {
  EXPECT_THROW(parse_sdpa_output("objValPrimal = 6.5e+01\n"), ParseError);
  EXPECT_THROW(parse_sdpa_output("objValDual = 6.5e+01\n"), ParseError);
  EXPECT_THROW(parse_sdpa_output("objValPrimal = abc\nobjValDual = 1\n"), ParseError);
}
