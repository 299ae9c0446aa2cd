#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "stlf/csv.hpp"
#include "stlf/series.hpp"

using namespace stlf;

TEST(LogReturns, ConstantSeriesGivesZeros) {
    auto r = log_returns(LoadSeries({50.0, 50.0, 50.0}));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.values()[0], 0.0);
    EXPECT_EQ(r.values()[1], 0.0);
    EXPECT_EQ(r.origin_level(), 50.0);
}

TEST(LogReturns, SingleStep) {
    auto r = log_returns(LoadSeries({100.0, 110.0}));
    EXPECT_NEAR(r.values()[0], 0.0953101798043249, 1e-15);
}

TEST(LogReturns, TableThreeFirstHour) {
    // ln(73.99142 / 75.83555), computed directly
    auto r = log_returns(LoadSeries({75.83555, 73.99142}));
    EXPECT_NEAR(r.values()[0], -0.02461803952894251, 1e-12);
}

TEST(LogReturns, RejectsNonPositiveLevelNamingIndex) {
    try {
        LoadSeries({10.0, 11.0, 0.0, 12.0});
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(LoadSeries({10.0, -1.0}), DataError);
    EXPECT_THROW(LoadSeries({10.0}), DataError);
}

TEST(ReconstructLevels, Examples) {
    auto flat = reconstruct_levels(ReturnSeries({0.0, 0.0}, 100.0));
    ASSERT_EQ(flat.size(), 3u);
    for (double v : flat.values()) EXPECT_EQ(v, 100.0);

    auto up = reconstruct_levels(ReturnSeries({std::log(1.1)}, 100.0));
    EXPECT_EQ(up.front(), 100.0);
    EXPECT_NEAR(up.back(), 110.0, 1e-12);
}

namespace {

std::vector<double> random_positive_series(std::mt19937_64& rng, std::size_t n) {
    std::lognormal_distribution<double> level(3.0, 1.5);
    std::vector<double> v(n);
    for (auto& x : v) x = level(rng);
    return v;
}

}  // namespace

TEST(SeriesProperties, RoundTripScaleAndSum) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> len(2, 400);
    for (int trial = 0; trial < 200; ++trial) {
        auto values = random_positive_series(rng, len(rng));
        LoadSeries s(values);
        auto r = log_returns(s);
        ASSERT_EQ(r.size(), s.size() - 1);

        auto back = reconstruct_levels(r);
        for (std::size_t i = 0; i < values.size(); ++i)
            ASSERT_LE(std::abs(back.values()[i] - values[i]) / values[i], 1e-12);
        for (std::size_t i = 0; i < values.size(); ++i) ASSERT_EQ(back.timestamps()[i], s.timestamps()[i]);

        double sum = 0.0;
        for (double x : r.values()) sum += x;
        ASSERT_NEAR(sum, std::log(values.back() / values.front()), 1e-10);

        // powers of two scale exactly, so the ratios are bit-identical
        std::vector<double> scaled = values;
        for (auto& x : scaled) x *= 8.0;
        auto rs = log_returns(LoadSeries(scaled));
        for (std::size_t i = 0; i < r.size(); ++i) ASSERT_EQ(rs.values()[i], r.values()[i]);

        // arbitrary k: ratios agree to rounding of the two products
        for (auto& x : scaled) x = x / 8.0 * 3.7;
        auto rk = log_returns(LoadSeries(scaled));
        for (std::size_t i = 0; i < r.size(); ++i) ASSERT_NEAR(rk.values()[i], r.values()[i], 1e-15);
    }
}

TEST(Split, Lengths) {
    std::vector<double> r(100, 0.01);
    auto [train, test] = split(ReturnSeries(r, 50.0), 24);
    EXPECT_EQ(train.size(), 76u);
    EXPECT_EQ(test.size(), 24u);
}

TEST(Split, BoundariesRejected) {
    ReturnSeries r(std::vector<double>(100, 0.0), 1.0);
    EXPECT_THROW(split(r, 100), DataError);
    EXPECT_THROW(split(r, 0), DataError);
    EXPECT_NO_THROW(split(r, 99));
}

TEST(Split, HalvesReconstructTheOriginalLevels) {
    std::mt19937_64 rng(11);
    auto values = random_positive_series(rng, 60);
    LoadSeries s(values);
    auto [train, test] = split(log_returns(s), 17);
    auto a = reconstruct_levels(train);
    auto b = reconstruct_levels(test);
    ASSERT_EQ(a.size() + b.size(), s.size() + 1);  // boundary level appears in both
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i] / values[i], 1.0, 1e-12);
    for (std::size_t i = 0; i < b.size(); ++i)
        EXPECT_NEAR(b.values()[i] / values[a.size() - 1 + i], 1.0, 1e-12);
    EXPECT_EQ(b.timestamps().front(), a.timestamps().back());
}

TEST(Timestamps, ParsesBothFormats) {
    auto a = parse_timestamp("11/11/2018 0:00");
    auto b = parse_timestamp("2018-11-11T00:00");
    auto c = parse_timestamp("2018-11-11 23:00:00");
    ASSERT_TRUE(a && b && c);
    EXPECT_EQ(*a, *b);
    EXPECT_EQ(*c - *b, std::chrono::hours{23});
    EXPECT_EQ(format_timestamp(*a), "2018-11-11T00:00");
    EXPECT_FALSE(parse_timestamp("13/01/2018 00:00"));
    EXPECT_FALSE(parse_timestamp("2018-02-30T00:00"));
    EXPECT_FALSE(parse_timestamp("yesterday"));
}

TEST(CsvIngestion, ReadsHourlyGrid) {
    std::istringstream in("timestamp,load\n11/11/2018 0:00,75.5\n11/11/2018 1:00,74.0\n2018-11-11T02:00,73.25\n");
    auto s = read_load_csv(in);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s.values()[2], 73.25);
}

TEST(CsvIngestion, RejectsGapsAndBadRows) {
    std::istringstream gap("timestamp,load\n11/11/2018 0:00,75.5\n11/11/2018 2:00,74.0\n");
    EXPECT_THROW(read_load_csv(gap), DataError);
    std::istringstream dup("timestamp,load\n11/11/2018 0:00,75.5\n11/11/2018 0:00,74.0\n");
    EXPECT_THROW(read_load_csv(dup), DataError);
    std::istringstream thousands("timestamp,load\n11/11/2018 0:00,\"75,500\"\n11/11/2018 1:00,74.0\n");
    EXPECT_THROW(read_load_csv(thousands), DataError);
    std::istringstream neg("timestamp,load\n11/11/2018 0:00,75.5\n11/11/2018 1:00,-1\n");
    EXPECT_THROW(read_load_csv(neg), DataError);
}

TEST(CsvIngestion, TableThreeFixture) {
    auto s = read_load_csv(std::string(STLF_DATA_DIR) + "/table3.csv");
    ASSERT_EQ(s.size(), 24u);
    EXPECT_DOUBLE_EQ(s.front(), 75.83555);
    EXPECT_DOUBLE_EQ(s.back(), 69.90736);
}
