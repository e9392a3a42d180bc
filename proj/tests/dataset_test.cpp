#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "phcausal/dataset.hpp"
#include "phcausal/error.hpp"

namespace phcausal {
namespace {

Dataset small_dataset(bool with_latent) {
  std::vector<SubjectRecord> recs;
  recs.emplace_back(1.0 / 3.0, true, std::vector<double>{0.1}, std::vector<double>{-2.5e-7});
  recs.emplace_back(10.0, false, std::vector<double>{-1e300}, std::vector<double>{3.0});
  recs.emplace_back(2.718281828459045, true, std::vector<double>{0.0},
                    std::vector<double>{1.0 / 7.0});
  if (with_latent) {
    for (std::size_t i = 0; i < recs.size(); ++i) recs[i].set_latent(0.5 * i - 0.123456789);
  }
  return Dataset(std::move(recs), {"x"}, {"z"});
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("phcausal_dataset_test_" + name);
}

TEST(DatasetCsv, HeaderLayout) {
  const std::string csv = format_dataset_csv(small_dataset(false));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,event,x,z");
  const std::string latent = format_dataset_csv(small_dataset(true));
  EXPECT_EQ(latent.substr(0, latent.find('\n')), "time,event,x,z,u_latent");
}

TEST(DatasetCsv, SaveThenLoadIsIdentical) {
  for (bool latent : {false, true}) {
    const Dataset d = small_dataset(latent);
    const auto path = temp_file(latent ? "latent.csv" : "plain.csv");
    save_dataset(d, path);
    const Dataset back = load_dataset(path);
    EXPECT_EQ(back.records(), d.records());
    EXPECT_EQ(back.x_names(), d.x_names());
    EXPECT_EQ(back.z_names(), d.z_names());
    EXPECT_EQ(back.has_latent(), latent);
    std::filesystem::remove(path);
  }
}

TEST(DatasetCsv, VectorCovariatesExpand) {
  std::vector<SubjectRecord> recs;
  recs.emplace_back(1.0, true, std::vector<double>{1, 2}, std::vector<double>{3, 4, 5});
  const Dataset d(std::move(recs), {"x0", "x1"}, {"z0", "z1", "z2"});
  const std::string csv = format_dataset_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,event,x0,x1,z0,z1,z2");
  EXPECT_EQ(parse_dataset_csv(csv).records(), d.records());
}

TEST(DatasetCsv, RandomValuesRoundTripBitExactly) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  std::vector<SubjectRecord> recs;
  for (int i = 0; i < 500; ++i) {
    recs.emplace_back(std::abs(dist(gen)) + 1e-300, i % 3 == 0, std::vector<double>{dist(gen)},
                      std::vector<double>{dist(gen) * 1e-9});
  }
  const Dataset d(std::move(recs), {"x"}, {"z"});
  EXPECT_EQ(parse_dataset_csv(format_dataset_csv(d)).records(), d.records());
}

TEST(DatasetCsv, TwelveSignificantDigitsSurvive) {
  // Fields are written so that reading back at 12 significant digits is unchanged.
  for (double v : {1.0 / 3.0, 123456.789012345, 2.5e-7, 10.0}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v);
  }
}

ParseError parse_error_of(const std::string& text) {
  try {
    parse_dataset_csv(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError(0, "none");
}

TEST(DatasetCsv, MalformedRowsReportLine) {
  EXPECT_EQ(parse_error_of("time,event,x,z\n1,1,0,0\n2,1,abc,0\n").line(), 3u);
  EXPECT_EQ(parse_error_of("time,event,x,z\n1,1,0\n").line(), 2u);
  EXPECT_EQ(parse_error_of("time,event,x,z\n1,2,0,0\n").line(), 2u);
  EXPECT_EQ(parse_error_of("time,status,x,z\n1,1,0,0\n").line(), 1u);
  EXPECT_EQ(parse_error_of("").line(), 1u);
}

TEST(DatasetCsv, InvalidValues) {
  EXPECT_THROW(parse_dataset_csv("time,event,x,z\n-1,1,0,0\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("time,event,x,z\n0,1,0,0\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("time,event,x,z\n1,1,nan,0\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("time,event,x,z\n1,1,inf,0\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("time,event,x,z\n"), ValidationError);
}

TEST(DatasetCsv, MissingFile) {
  EXPECT_THROW(load_dataset(temp_file("does_not_exist.csv")), ValidationFailure);
}

TEST(Dataset, ConstructorChecks) {
  EXPECT_THROW(Dataset({}, {"x"}, {}), ValidationError);
  std::vector<SubjectRecord> ragged;
  ragged.emplace_back(1.0, true, std::vector<double>{1.0}, std::vector<double>{});
  ragged.emplace_back(1.0, true, std::vector<double>{1.0, 2.0}, std::vector<double>{});
  EXPECT_THROW(Dataset(ragged, {"x"}, {}), ValidationFailure);
}

TEST(Dataset, Columns) {
  const Dataset d = small_dataset(false);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.event_count(), 2u);
  EXPECT_EQ(d.covariate_names(), (std::vector<std::string>{"x", "z"}));
  EXPECT_EQ(d.column("z")[2], 1.0 / 7.0);
  EXPECT_TRUE(d.has_column("x"));
  EXPECT_FALSE(d.has_column("u_latent"));
  EXPECT_THROW(d.column("w"), InvalidArgument);
}

TEST(Dataset, LatentNeedsKey) {
  const Dataset d = small_dataset(true);
  EXPECT_TRUE(d.has_latent());
  EXPECT_DOUBLE_EQ(d.records()[1].latent(detail::make_latent_key()), 0.5 - 0.123456789);
}

}  // namespace
}  // namespace phcausal
