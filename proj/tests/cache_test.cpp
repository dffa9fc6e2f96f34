#include "gammacrit/cache.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <unistd.h>

#include "gtest/gtest.h"

namespace gammacrit {
namespace {

namespace fs = std::filesystem;

class CacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("gammacrit_cache_test_" + std::string(info->name()) + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST(CacheEntry, LineRoundTrip) {
  const CacheEntry e{{CacheKind::kFrac, 12, 6}, "0.123456;0.123456789012345678;3.1e-19", "gammacrit-1.0",
                     "2024-01-02T03:04:05Z"};
  const std::string line = e.to_line();
  EXPECT_EQ(line, "frac\t12\t6\t0.123456;0.123456789012345678;3.1e-19\tgammacrit-1.0\t2024-01-02T03:04:05Z");
  EXPECT_EQ(CacheEntry::parse_line(line), e);
  EXPECT_EQ(CacheEntry::parse_line(line).to_line(), line);
}

TEST(CacheEntry, Kinds) {
  for (CacheKind k : {CacheKind::kDn, CacheKind::kExpTable, CacheKind::kLogS, CacheKind::kFrac, CacheKind::kGamma})
    EXPECT_EQ(parse_cache_kind(to_string(k)), k);
  EXPECT_FALSE(parse_cache_kind("pi").has_value());
}

TEST(CacheEntry, RejectsBadRecords) {
  CacheEntry e{{CacheKind::kDn, 3, 0}, "a\tb", "v", "t"};
  EXPECT_THROW(e.to_line(), std::invalid_argument);
  e.payload = "line\nbreak";
  EXPECT_THROW(e.to_line(), std::invalid_argument);
  for (const char* bad : {"", "dn\t3\t0\t6\tv", "pi\t3\t0\t6\tv\tt", "dn\t-3\t0\t6\tv\tt", "dn\tx\t0\t6\tv\tt",
                          "dn\t3\t0\t\tv\tt", "dn\t3\t0\t6\tv\tt\textra"})
    EXPECT_THROW(CacheEntry::parse_line(bad), std::invalid_argument) << bad;
}

TEST(Timestamp, Shape) {
  const std::string t = utc_timestamp();
  ASSERT_EQ(t.size(), 20u);
  EXPECT_EQ(t[4], '-');
  EXPECT_EQ(t[10], 'T');
  EXPECT_EQ(t.back(), 'Z');
}

TEST_F(CacheTest, PutFindNeverOverwrites) {
  const fs::path file = dir_ / "sub" / "results.tsv";
  {
    ResultCache cache(file);
    EXPECT_EQ(cache.size(), 0u);
    EXPECT_TRUE(cache.put({CacheKind::kDn, 10, 0}, "2520"));
    EXPECT_FALSE(cache.put({CacheKind::kDn, 10, 0}, "9999"));
    EXPECT_EQ(cache.find({CacheKind::kDn, 10, 0})->payload, "2520");
    EXPECT_FALSE(cache.find({CacheKind::kDn, 11, 0}).has_value());
  }
  const std::string text = slurp(file);
  EXPECT_EQ(text.rfind(std::string(kCacheHeader) + "\n", 0), 0u);
  EXPECT_EQ(text.find("9999"), std::string::npos);
  ResultCache reopened(file);
  EXPECT_EQ(reopened.size(), 1u);
  EXPECT_EQ(reopened.find({CacheKind::kDn, 10, 0})->payload, "2520");
}

TEST_F(CacheTest, SkipsTornLinesAndForeignVersions) {
  const fs::path file = dir_ / "results.tsv";
  {
    std::ofstream out(file);
    out << kCacheHeader << '\n'
        << "dn\t6\t0\t60\t" << kToolVersion << "\t2024-01-01T00:00:00Z\n"
        << "dn\t7\t0\t420\tgammacrit-0.1\t2024-01-01T00:00:00Z\n"
        << "dn\t8\t0\t84";
  }
  ResultCache cache(file);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.find({CacheKind::kDn, 6, 0})->payload, "60");
  EXPECT_FALSE(cache.find({CacheKind::kDn, 7, 0}).has_value());
  EXPECT_FALSE(cache.find({CacheKind::kDn, 8, 0}).has_value());
}

TEST_F(CacheTest, RejectsForeignHeader) {
  const fs::path file = dir_ / "results.tsv";
  std::ofstream(file) << "#gammacrit-cache v0\n";
  EXPECT_THROW(ResultCache{file}, std::runtime_error);
}

TEST_F(CacheTest, HigherPrecisionSupersedes) {
  ResultCache cache(dir_ / "results.tsv");
  cache.put({CacheKind::kFrac, 3, 4}, "0.3446;0.3446561264643;1.0e-20");
  cache.put({CacheKind::kFrac, 3, 8}, "0.34465612;0.34465612646432;1.0e-20");
  cache.put({CacheKind::kFrac, 4, 20}, "x");
  EXPECT_EQ(cache.find_best(CacheKind::kFrac, 3, 4)->key.digits, 8);
  EXPECT_EQ(cache.find_best(CacheKind::kFrac, 3, 6)->key.digits, 8);
  EXPECT_FALSE(cache.find_best(CacheKind::kFrac, 3, 9).has_value());
  EXPECT_EQ(cache.find({CacheKind::kFrac, 3, 4})->payload, "0.3446;0.3446561264643;1.0e-20");
}

TEST_F(CacheTest, CachedSourceReusesResults) {
  ResultCache cache(dir_ / "results.tsv");
  auto calls = std::make_shared<std::atomic<int>>(0);
  FracSource counting = [calls, engine = engine_source()](std::uint32_t n, long d) {
    ++*calls;
    return engine(n, d);
  };
  const FracSource source = cached_source(cache, counting);
  const FracEnclosure first = source(6, 10);
  const FracEnclosure second = source(6, 10);
  EXPECT_EQ(calls->load(), 1);
  EXPECT_EQ(first.to_payload(), second.to_payload());
  EXPECT_EQ(first.mid, second.mid);

  ResultCache reopened(dir_ / "results.tsv");
  const FracEnclosure third = cached_source(reopened, counting)(6, 10);
  EXPECT_EQ(calls->load(), 1);
  EXPECT_EQ(third.truncated, "0.5546915412");
}

TEST_F(CacheTest, EveryPayloadRoundTrips) {
  ResultCache cache(dir_ / "results.tsv");
  const FracSource source = cached_source(cache, engine_source());
  for (std::uint32_t n = 1; n <= 20; ++n) source(n, 3 + n % 5);
  std::istringstream lines(slurp(dir_ / "results.tsv"));
  std::string line;
  std::getline(lines, line);
  int count = 0;
  while (std::getline(lines, line)) {
    const CacheEntry e = CacheEntry::parse_line(line);
    EXPECT_EQ(e.to_line(), line);
    EXPECT_EQ(FracEnclosure::from_payload(e.key.n, e.key.digits, e.payload).to_payload(), e.payload);
    ++count;
  }
  EXPECT_EQ(count, 20);
}

TEST_F(CacheTest, LocationFromEnvironment) {
  const std::string var(kCacheEnvVar);
  ::setenv(var.c_str(), dir_.c_str(), 1);
  EXPECT_EQ(ResultCache::location_from_env(), dir_ / "results.tsv");
  ::setenv(var.c_str(), "", 1);
  EXPECT_FALSE(ResultCache::location_from_env().has_value());
  ::unsetenv(var.c_str());
  EXPECT_FALSE(ResultCache::location_from_env().has_value());
}

TEST_F(CacheTest, CheckpointRoundTrip) {
  SurveyCheckpoint c;
  c.n_from = 3;
  c.digits = 6;
  c.rows_done = 17;
  c.csv_bytes = 4242;
  c.frac_sum = BigRational(20366147, 1000000);
  c.frac_count = 17;
  EXPECT_EQ(SurveyCheckpoint::parse(c.serialize()).serialize(), c.serialize());
  const fs::path csv = dir_ / "out.csv";
  EXPECT_FALSE(SurveyCheckpoint::load(csv).has_value());
  c.save(csv);
  EXPECT_TRUE(fs::exists(dir_ / "out.csv.ckpt"));
  const auto loaded = SurveyCheckpoint::load(csv);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(loaded->frac_sum, c.frac_sum);
  EXPECT_EQ(loaded->csv_bytes, 4242u);
  EXPECT_EQ(loaded->tool_version, kToolVersion);
}

TEST(Checkpoint, MalformedText) {
  EXPECT_THROW(SurveyCheckpoint::parse("format=other\n"), std::invalid_argument);
  EXPECT_THROW(SurveyCheckpoint::parse("format=gammacrit-checkpoint-v1\nno equals\n"), std::invalid_argument);
  EXPECT_THROW(SurveyCheckpoint::parse("format=gammacrit-checkpoint-v1\ntool_version=x\n"), std::invalid_argument);
}

}  // namespace
}  // namespace gammacrit
