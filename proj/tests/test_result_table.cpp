#include <cmath>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "rggu/result_table.hpp"
#include "test_support.hpp"

namespace rggu {
namespace {

ResultTable sample_table() {
  ResultTable t;
  t.metadata()["seed"] = "7";
  t.metadata()["quantity"] = "critical-value";
  ResultRow a;
  a.variant = "te";
  a.beta = -0.5;
  a.n = 50;
  a.k = 1.0;
  a.value = 3.5153;
  a.se = 0.0123456789012345;
  a.reps = 100000;
  a.seed = 7;
  t.add(a);
  ResultRow b = a;
  b.model = "con";
  b.variant = "ta";
  b.d = 3;
  b.n = 500;
  b.k = 0.1;
  b.value = 1.0 / 3.0;
  b.level = 0.05;
  t.add(b);
  return t;
}

TEST(ResultTable, CsvRoundTripIsExact) {
  const ResultTable t = sample_table();
  const std::string csv = t.to_csv();
  EXPECT_NE(csv.find("# seed: 7"), std::string::npos);
  EXPECT_NE(csv.find("model,variant,beta,d,n,k,value,se,reps,seed,level"), std::string::npos);
  EXPECT_EQ(ResultTable::from_csv(csv), t);
  EXPECT_EQ(ResultTable::from_csv(csv).to_csv(), csv);
}

TEST(ResultTable, JsonRoundTripIsExact) {
  const ResultTable t = sample_table();
  EXPECT_EQ(ResultTable::from_json(t.to_json()), t);
}

TEST(ResultTable, SaveAndLoadPickTheFormatFromTheExtension) {
  const auto dir = std::filesystem::temp_directory_path();
  const ResultTable t = sample_table();
  for (const char* name : {"rggu_table_test.csv", "rggu_table_test.json"}) {
    const auto path = dir / name;
    t.save(path);
    EXPECT_EQ(ResultTable::load(path), t);
    std::filesystem::remove(path);
  }
  EXPECT_RGGU_ERROR(ResultTable::load(dir / "rggu_no_such_table.csv"), ErrorCode::Io);
}

TEST(ResultTable, LookupByCell) {
  const ResultTable t = sample_table();
  ResultRow key;
  key.variant = "te";
  key.beta = -0.5;
  key.n = 50;
  key.k = 1.0;
  ASSERT_NE(t.find(key), nullptr);
  EXPECT_EQ(t.find(key)->value, 3.5153);
  key.n = 51;
  EXPECT_EQ(t.find(key), nullptr);
  ASSERT_NE(t.find_critical("ta", -0.5, 3, 500, 0.1, 0.05), nullptr);
  EXPECT_EQ(t.find_critical("te", -0.5, 3, 500, 0.1, 0.05), nullptr);
}

TEST(ResultTable, MalformedInput) {
  EXPECT_RGGU_ERROR(ResultTable::from_csv("model,variant\nh0,te\n"), ErrorCode::Parse);
  EXPECT_RGGU_ERROR(
      ResultTable::from_csv("model,variant,beta,d,n,k,value,se,reps,seed,level\nh0,te,x,2,5,1,1,0,1,1,0.95\n"),
      ErrorCode::Parse);
  EXPECT_RGGU_ERROR(ResultTable::from_json("{not json"), ErrorCode::Parse);
}

TEST(FormatDouble, ShortestRoundTrip) {
  testing::Gen gen(111);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(gen.uniform(-1.0, 1.0), static_cast<int>(gen.size(0, 80)) - 40);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(5.0), "5");
}

}  // namespace
}  // namespace rggu
