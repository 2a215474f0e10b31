#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include "mixedsdp/store.hpp"

using namespace mixedsdp;

namespace {

class StoreFile : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = (std::filesystem::temp_directory_path() /
             ("mixedsdp_store_" + std::to_string(::getpid()) + "_" +
              ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".jsonl"))
                .string();
    std::filesystem::remove(path_);
  }
  void TearDown() override { std::filesystem::remove(path_); }

  std::string path_;
};

BoundRecord record(int n2, int n3, int d, int k, long long bound) {
  BoundRecord r;
  r.spec = ProblemSpec::make(n2, n3, d, k);
  r.sdp_objective = bound + 0.25;
  r.certified_bound = bound;
  r.stats.iterations = 20;
  r.stats.gap = 1e-9;
  return r;
}

}  // namespace

TEST_F(StoreFile, MissingFileIsEmpty) {
  ResultsStore store(path_);
  EXPECT_TRUE(store.all().empty());
  EXPECT_FALSE(store.latest(ProblemSpec::make(2, 5, 3)).has_value());
}

TEST_F(StoreFile, LatestRecordWins) {
  ResultsStore store(path_);
  store.append(record(2, 5, 3, 3, 66));
  store.append(record(2, 5, 3, 2, 67));
  store.append(record(2, 5, 3, 3, 65));
  EXPECT_EQ(store.all().size(), 3u);
  EXPECT_EQ(store.latest(ProblemSpec::make(2, 5, 3, 3))->certified_bound, 65);
  EXPECT_EQ(store.latest(ProblemSpec::make(2, 5, 3, 2))->certified_bound, 67);
  EXPECT_EQ(store.latest_all().size(), 2u);
}

TEST_F(StoreFile, OneJsonObjectPerLine) {
  ResultsStore store(path_);
  store.append(record(1, 1, 1, 3, 6));
  store.append(record(2, 2, 2, 3, 12));
  std::ifstream in(path_);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("certifiedBound"));
    EXPECT_TRUE(j.contains("sdpObjective"));
    EXPECT_TRUE(j.at("solverStats").contains("iterations"));
  }
  EXPECT_EQ(lines, 2);
}

TEST_F(StoreFile, RecordRoundTrip) {
  ResultsStore store(path_);
  auto r = record(3, 5, 3, 3, 125);
  r.stats.provenance = "external-file";
  r.stats.seconds = 0.5;
  store.append(r);
  const auto back = store.all().at(0);
  EXPECT_EQ(back.spec, r.spec);
  EXPECT_EQ(back.certified_bound, 125);
  EXPECT_DOUBLE_EQ(back.sdp_objective, 125.25);
  EXPECT_EQ(back.stats.provenance, "external-file");
  EXPECT_DOUBLE_EQ(back.stats.gap, 1e-9);
  EXPECT_EQ(back.stats.iterations, 20);
}

TEST_F(StoreFile, MalformedLineIsParseError) {
  {
    std::ofstream out(path_);
    out << "{\"n2\": 1}\n";
  }
  EXPECT_THROW(ResultsStore(path_).all(), ParseError);
  {
    std::ofstream out(path_);
    out << "not json\n";
  }
  EXPECT_THROW(ResultsStore(path_).all(), ParseError);
}

TEST_F(StoreFile, ConcurrentAppendsAreWholeLines) {
  ResultsStore store(path_);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (int i = 0; i < 25; ++i) store.append(record(1 + t, 1, 1, 3, i));
    });
  for (auto& w : workers) w.join();
  EXPECT_EQ(store.all().size(), 100u);
}

TEST_F(StoreFile, EnvironmentOverridesPath) {
  ::setenv("MIXEDSDP_STORE", path_.c_str(), 1);
  EXPECT_EQ(ResultsStore::open_default().path(), path_);
  ::unsetenv("MIXEDSDP_STORE");
  EXPECT_EQ(ResultsStore::open_default().path(), "mixedsdp_results.jsonl");
}

TEST(StoreRecord, FromSolution) {
  Solution s;
  s.objective = 65.3;
  s.dual_objective = 65.3000001;
  s.gap = 1e-7;
  s.iterations = 24;
  s.converged = true;
  const auto c = certify_values(s.objective, s.dual_objective, 0.0);
  const auto r = make_record(ProblemSpec::make(2, 5, 3), s, c);
  EXPECT_EQ(r.certified_bound, 65);
  EXPECT_EQ(r.stats.provenance, "solver");
  EXPECT_EQ(r.stats.iterations, 24);
}
