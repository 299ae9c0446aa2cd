#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "stlf/csv.hpp"
#include "stlf/evaluation.hpp"

using namespace stlf;

namespace {

struct TableThree {
    std::vector<double> load, proposed, checked;
};

TableThree table_three() {
    auto t = read_timed_table(std::string(STLF_DATA_DIR) + "/table3.csv");
    return {t.column("load"), t.column("proposed"), t.column("checked")};
}

}  // namespace

TEST(Score, TableThreeProposed) {
    auto t = table_three();
    ASSERT_EQ(t.load.size(), 24u);
    auto r = score(t.load, t.proposed);
    EXPECT_NEAR(r.mse, 0.2803, 0.005);
    EXPECT_NEAR(r.mae, 0.4583, 0.005);
    // mean, not sum: the sum of squares is about 6.7
    EXPECT_NEAR(r.mse * 24.0, 6.726, 0.01);
    EXPECT_EQ(r.n, 24u);
}

TEST(Score, TableThreeChecked) {
    auto t = table_three();
    auto r = score(t.load, t.checked);
    EXPECT_NEAR(r.mse, 4.2024, 0.005);
    EXPECT_NEAR(r.mae, 2.0314, 0.005);
}

TEST(Score, IdenticalSequences) {
    std::vector<double> a{1.0, 2.0, 3.0};
    auto r = score(a, a);
    EXPECT_EQ(r.mse, 0.0);
    EXPECT_EQ(r.mae, 0.0);
}

TEST(Score, PerStepErrorsAreActualMinusPredicted) {
    auto r = score(std::vector<double>{3.0, 1.0}, std::vector<double>{1.0, 2.0});
    EXPECT_EQ(r.per_step_errors, (std::vector<double>{2.0, -1.0}));
    EXPECT_DOUBLE_EQ(r.mse, 2.5);
    EXPECT_DOUBLE_EQ(r.mae, 1.5);
}

TEST(Score, Errors) {
    EXPECT_THROW(score(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), DataError);
    EXPECT_THROW(score(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST(Score, Properties) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(70.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + trial % 40), p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = z(rng);
            p[i] = z(rng);
        }
        auto r = score(a, p);
        auto swapped = score(p, a);
        EXPECT_EQ(r.mse, swapped.mse);
        EXPECT_EQ(r.mae, swapped.mae);
        EXPECT_GE(r.mse, 0.0);
        EXPECT_LE(r.mae * r.mae, r.mse * (1.0 + 1e-12));
        const double c = z(rng);
        for (auto& v : a) v += c;
        for (auto& v : p) v += c;
        auto shifted = score(a, p);
        EXPECT_NEAR(shifted.mse, r.mse, 1e-9 * (1.0 + r.mse));
        EXPECT_NEAR(shifted.mae, r.mae, 1e-9 * (1.0 + r.mae));
    }
}

TEST(Compare, TableThreeRanking) {
    auto t = table_three();
    auto ranked = compare(t.load, {{"checked", t.checked}, {"proposed", t.proposed}});
    ASSERT_EQ(ranked.size(), 2u);
    EXPECT_EQ(ranked[0].name, "proposed");
    EXPECT_EQ(ranked[1].name, "checked");
}

TEST(Compare, PerfectPredictionFirst) {
    auto t = table_three();
    auto ranked = compare(t.load, {{"oracle", t.load}, {"proposed", t.proposed}});
    EXPECT_EQ(ranked[0].name, "oracle");
    EXPECT_EQ(ranked[0].report.mse, 0.0);
    auto single = compare(t.load, {{"only", t.checked}});
    ASSERT_EQ(single.size(), 1u);
}

TEST(Compare, TiesBrokenByMae) {
    std::vector<double> a{0.0, 0.0, 0.0, 0.0};
    // equal mse (1.0), different mae
    std::vector<double> spread{1.0, -1.0, 1.0, -1.0};
    std::vector<double> spike{2.0, 0.0, 0.0, 0.0};
    auto ranked = compare(a, {{"a_spike", spike}, {"b_spread", spread}});
    EXPECT_EQ(ranked[0].name, "a_spike");
    EXPECT_DOUBLE_EQ(ranked[0].report.mse, ranked[1].report.mse);
    EXPECT_LT(ranked[0].report.mae, ranked[1].report.mae);
}

TEST(Compare, LengthMismatchPropagates) {
    EXPECT_THROW(compare(std::vector<double>{1.0, 2.0}, {{"x", {1.0}}}), DataError);
}
