#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gbm/errors.hpp"
#include "gbm/montecarlo.hpp"

using namespace gbm;

namespace {

// Three-sigma check using the analytic variance, so empty bins are handled.
void expect_within_3sigma(const SimResult& sim, const PhotonStatistics& s, std::size_t upto) {
    const double n = static_cast<double>(sim.trials);
    for (std::size_t i = 0; i <= upto; ++i) {
        const double p = s.p[i];
        const double got = i < sim.p_hat.size() ? sim.p_hat[i] : 0.0;
        const double sigma = std::sqrt(p * (1 - p) / n);
        EXPECT_LE(std::abs(got - p), 3 * sigma) << "i = " << i << " p = " << p << " p_hat = " << got;
    }
}

}  // namespace

TEST(Splitmix64, KnownValues) {
    // Reference outputs of the standard splitmix64 step from state 0.
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFull);
    EXPECT_NE(splitmix64(1), splitmix64(2));
}

TEST(Simulate, SameSeedSameHistogram) {
    const SimConfig cfg{ArmVector({0.95, 0.9, 0.8}), 0.7, 0.9, 200000, 42};
    const SimResult a = simulate(cfg);
    const SimResult b = simulate(cfg);
    EXPECT_EQ(a.counts, b.counts);
    SimConfig other = cfg;
    other.seed = 43;
    EXPECT_NE(simulate(other).counts, a.counts);
}

TEST(Simulate, ThreadCountDoesNotMatter) {
    const SimConfig cfg{ArmVector({0.95, 0.9, 0.8}), 0.7, 0.9, 300001, 7};
    const SimResult one = simulate(cfg, 1);
    EXPECT_EQ(simulate(cfg, 3).counts, one.counts);
    EXPECT_EQ(simulate(cfg, 8).counts, one.counts);
}

TEST(Simulate, CountsSumToTrials) {
    const SimConfig cfg{ArmVector({0.9}), 1.2, 0.6, 100000, 1};
    const SimResult r = simulate(cfg);
    std::uint64_t total = 0;
    for (std::uint64_t c : r.counts) total += c;
    EXPECT_EQ(total, cfg.trials);
    EXPECT_EQ(r.p_hat.size(), r.counts.size());
    EXPECT_EQ(r.std_err.size(), r.counts.size());
    EXPECT_FALSE(r.rng_algorithm.empty());
}

TEST(Simulate, VacuumAtTinyLambda) {
    const SimResult r = simulate({ArmVector({0.9, 0.8}), 1e-9, 0.95, 100000, 3});
    ASSERT_GE(r.counts.size(), 1u);
    EXPECT_EQ(r.counts[0], 100000u);
}

TEST(Simulate, PerfectSingleArmGivesQuarter) {
    const SimResult r = simulate({ArmVector({1.0}), 1.0, 1.0, 10'000'000, 2024});
    const double sigma = std::sqrt(0.25 * 0.75 / 1e7);
    EXPECT_NEAR(r.p_hat[1], 0.25, 3 * sigma);
    // A perfect detector never heralds a multi-pair event, and the arm is lossless.
    for (std::size_t i = 2; i < r.counts.size(); ++i) EXPECT_EQ(r.counts[i], 0u);
}

TEST(Simulate, ThermalMarginalsOfFirstUnit) {
    const double lambda = 0.8;
    const double v_d = 0.7;
    const std::uint64_t trials = 2'000'000;
    const SimResult r = simulate({ArmVector({0.9, 0.9}), lambda, v_d, trials, 99});
    const double n = static_cast<double>(trials);
    const double mean = r.diagnostics.unit1_pair_sum / n;
    const double var = lambda * (1 + lambda);
    EXPECT_NEAR(mean, lambda, 4 * std::sqrt(var / n));
    EXPECT_NEAR(r.diagnostics.unit1_pair_sq_sum / n, var + lambda * lambda, 0.01);
    const double herald = herald_prob(lambda, v_d);
    EXPECT_NEAR(r.diagnostics.unit1_heralds / n, herald, 4 * std::sqrt(herald * (1 - herald) / n));
}

TEST(Simulate, MatchesAnalyticWithinThreeSigma) {
    const ArmVector arms({0.97, 0.95, 0.93, 0.9, 0.88});
    const double lambda = 0.8;
    const double v_d = 0.9;
    const SimResult r = simulate({arms, lambda, v_d, 4'000'000, 17});
    expect_within_3sigma(r, output_distribution(arms, lambda, v_d), 3);
}

TEST(Simulate, Contracts) {
    EXPECT_THROW(simulate({ArmVector({0.9}), 0.5, 0.9, 0, 1}), ContractViolation);
    EXPECT_THROW(simulate({ArmVector{}, 0.5, 0.9, 10, 1}), ContractViolation);
    EXPECT_THROW(simulate({ArmVector({0.9}), 0.0, 0.9, 10, 1}), ContractViolation);
    EXPECT_THROW(simulate({ArmVector({0.9}), 0.5, 1.5, 10, 1}), ContractViolation);
}

TEST(Chi2, GridOfThreeUnitConfigsPasses) {
    const ArmVector arms({0.97, 0.95, 0.92});
    std::uint64_t seed = 1000;
    for (double lambda : {0.3, 0.8, 1.5}) {
        for (double v_d : {0.7, 0.85, 0.95}) {
            const SimResult r = simulate({arms, lambda, v_d, 1'000'000, ++seed});
            const Chi2Result c = chi2_compare(r, output_distribution(arms, lambda, v_d));
            EXPECT_EQ(c.verdict, Verdict::Pass) << lambda << ' ' << v_d << " stat " << c.statistic << " crit "
                                                << c.critical;
            EXPECT_GE(c.bins_used, 3);
            EXPECT_EQ(c.dof, c.bins_used - 1);
        }
    }
}

TEST(Chi2, WrongDetectorEfficiencyFails) {
    const ArmVector arms({0.97, 0.95, 0.92});
    const SimResult r = simulate({arms, 0.8, 0.9, 1'000'000, 5});
    const Chi2Result c = chi2_compare(r, output_distribution(arms, 0.8, 0.85));
    EXPECT_EQ(c.verdict, Verdict::Fail);
    EXPECT_LT(c.p_value, 1e-3);
}

TEST(Chi2, CriticalValueMatchesTable) {
    const ArmVector arms({0.97, 0.95, 0.92});
    const SimResult r = simulate({arms, 0.8, 0.9, 200000, 5});
    const Chi2Result c = chi2_compare(r, output_distribution(arms, 0.8, 0.9));
    // Upper 0.1% points of chi-squared.
    const std::vector<double> table{10.828, 13.816, 16.266, 18.467, 20.515};
    ASSERT_GE(c.dof, 1);
    ASSERT_LE(c.dof, 5);
    EXPECT_NEAR(c.critical, table[static_cast<std::size_t>(c.dof - 1)], 1e-3);
}

TEST(Chi2, TooFewTrialsIsInconclusive) {
    const ArmVector arms({0.9});
    const SimResult r = simulate({arms, 0.5, 0.9, 20, 5});
    EXPECT_EQ(chi2_compare(r, output_distribution(arms, 0.5, 0.9)).verdict, Verdict::Inconclusive);
}

TEST(Chi2, ZeroTrialsRejected) {
    SimResult empty;
    EXPECT_THROW(chi2_compare(empty, output_distribution(ArmVector({0.9}), 0.5, 0.9)), ContractViolation);
}
