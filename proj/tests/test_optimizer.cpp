#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gbm/errors.hpp"
#include "gbm/optimizer.hpp"

using namespace gbm;

namespace {

const LossParams kHeadline{0.985, 0.99, 0.98, 0.95};

std::vector<double> values(const ArmVector& a) { return {a.values().begin(), a.values().end()}; }

class HeadlineSearch : public ::testing::Test {
protected:
    static void SetUpTestSuite() { catalog_ = new StructureCatalog(build_catalog(10)); }
    static void TearDownTestSuite() {
        delete catalog_;
        catalog_ = nullptr;
    }
    static const StructureCatalog& catalog() { return *catalog_; }

private:
    static inline StructureCatalog* catalog_ = nullptr;
};

}  // namespace

TEST(NumericArms, SingleRouter) {
    const TransmissionSet t({{0, 1}, {1, 0}});
    const ArmVector arms = numeric_arms(t, kHeadline);
    ASSERT_EQ(arms.size(), 2u);
    EXPECT_NEAR(arms[0], 0.98 * 0.99, 1e-15);
    EXPECT_NEAR(arms[1], 0.98 * 0.985, 1e-15);
    EXPECT_NEAR(arms[0], 0.9702, 1e-12);
    EXPECT_NEAR(arms[1], 0.9653, 1e-12);
}

TEST(NumericArms, LosslessRoutersGiveUnitArms) {
    const ArmVector arms = numeric_arms(transmission_set(RouterSequence{{1, 2, 1, 2}}), {1.0, 1.0, 1.0, 0.9});
    for (double v : arms.values()) EXPECT_EQ(v, 1.0);
}

TEST(NumericArms, SymmetricRoutersCollapseByDepth) {
    const double v = 0.97;
    const double vb = 0.98;
    const ArmVector arms = numeric_arms(transmission_set(RouterSequence{{1, 2, 1, 2}}), {v, v, vb, 0.9});
    const std::vector<double> expected{vb * v * v, vb * v * v, vb * v * v, vb * v * v * v, vb * v * v * v};
    ASSERT_EQ(arms.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(arms[i], expected[i], 1e-15);
}

TEST(NumericArms, SwapImageIsBitIdentical) {
    const LossParams p{0.93, 0.97, 0.98, 0.95};
    for (const RouterSequence& s : generate_canonical_sequences(6)) {
        const TransmissionSet t = transmission_set(s);
        EXPECT_EQ(values(numeric_arms(t, p)), values(numeric_arms(t.swapped(), p.swapped())));
    }
}

TEST(OptimizeLambda, PerfectSingleArm) {
    const LambdaOptimum opt = optimize_lambda(ArmVector({1.0}), 1.0);
    EXPECT_NEAR(opt.lambda, 1.0, 1e-6);
    EXPECT_NEAR(opt.p1, 0.25, 1e-12);
    EXPECT_FALSE(opt.at_bracket_edge);
}

TEST(OptimizeLambda, EmptyArmsRejected) {
    EXPECT_THROW(optimize_lambda(ArmVector{}, 0.9), ContractViolation);
    EXPECT_THROW(ArmVector({0.0}), ContractViolation);
}

TEST(OptimizeLambda, EdgeOfBracketIsFlagged) {
    // A lossy arm behind a poor detector keeps gaining from multi-pair events
    // up to the largest allowed lambda.
    const LambdaOptimum opt = optimize_lambda(ArmVector({0.5}), 0.2);
    EXPECT_TRUE(opt.at_bracket_edge);
    EXPECT_NEAR(opt.lambda, kLambdaHi, 1e-6);
}

TEST(OptimizeLambda, HeadlineStructureAtItsOptimum) {
    const ArmVector arms = numeric_arms(transmission_set(RouterSequence{{1, 2, 3, 3, 1, 2, 3, 4, 3, 4}}), kHeadline);
    const LambdaOptimum opt = optimize_lambda(arms, kHeadline.v_d);
    EXPECT_NEAR(opt.p1, 0.866, 1e-3);
    const PhotonStatistics s = output_distribution(arms, opt.lambda, kHeadline.v_d);
    EXPECT_NEAR(s.p1, 0.866, 1e-3);
    EXPECT_NEAR(*s.g2, 0.091, 2e-3);
}

TEST(OptimizeLambda, PerturbationsDoNotImprove) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> v(0.6, 1.0);
    std::uniform_real_distribution<double> vd(0.7, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> raw(1 + trial % 12);
        for (double& x : raw) x = v(rng);
        const ArmVector arms = ArmVector::from_unsorted(raw);
        const double v_d = vd(rng);
        const LambdaOptimum opt = optimize_lambda(arms, v_d);
        ASSERT_FALSE(opt.at_bracket_edge);
        EXPECT_LE(single_photon_probability(arms, opt.lambda + 1e-4, v_d), opt.p1);
        EXPECT_LE(single_photon_probability(arms, opt.lambda - 1e-4, v_d), opt.p1);
    }
}

TEST(OptimizeLambda, SingleMaximumOnLogGrid) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> v(0.3, 1.0);
    std::uniform_real_distribution<double> vd(0.3, 1.0);
    std::uniform_int_distribution<int> count(1, 16);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> raw(static_cast<std::size_t>(count(rng)));
        for (double& x : raw) x = v(rng);
        const ArmVector arms = ArmVector::from_unsorted(raw);
        const double v_d = vd(rng);
        std::vector<double> p;
        for (int g = 0; g <= 600; ++g) {
            const double lambda = kLambdaLo * std::pow(kLambdaHi / kLambdaLo, g / 600.0);
            p.push_back(single_photon_probability(arms, lambda, v_d));
        }
        int maxima = 0;
        int last_sign = 1;  // rising from the left edge
        for (std::size_t g = 1; g < p.size(); ++g) {
            const double d = p[g] - p[g - 1];
            if (std::abs(d) < 1e-15) continue;
            const int sign = d > 0 ? 1 : -1;
            if (last_sign > 0 && sign < 0) ++maxima;
            last_sign = sign;
        }
        if (last_sign > 0) ++maxima;  // still rising at lambda = 2
        EXPECT_EQ(maxima, 1) << "trial " << trial;
    }
}

TEST(FindOgbm, SingleRouter) {
    const SearchReport r = find_ogbm(1, kHeadline);
    EXPECT_EQ(r.optimum.sequence.entries, std::vector<int>{1});
    EXPECT_EQ(r.n_structures_evaluated, 1u);
    EXPECT_EQ(r.n_distinct_sets, 1u);
}

TEST_F(HeadlineSearch, HeadlineOptimum) {
    const SearchReport r = find_ogbm(catalog(), kHeadline, {.top_k = 5});
    EXPECT_NEAR(r.optimum.p1_max, 0.866, 1e-3);
    EXPECT_NEAR(r.optimum.g2, 0.091, 2e-3);
    EXPECT_FALSE(r.optimum.at_bracket_edge);
    EXPECT_EQ(r.n_structures_evaluated, 16796u);
    EXPECT_EQ(r.n_distinct_sets, 7624u);
    EXPECT_EQ(r.optimum.arms.size(), 11u);
    ASSERT_EQ(r.runner_ups.size(), 5u);
    double prev = r.optimum.p1_max;
    for (const StructureOptimum& o : r.runner_ups) {
        EXPECT_LE(o.p1_max, prev);
        prev = o.p1_max;
    }
}

TEST_F(HeadlineSearch, DetectorUpgrade) {
    LossParams p = kHeadline;
    p.v_d = 0.98;
    const SearchReport r = find_ogbm(catalog(), p);
    EXPECT_NEAR(r.optimum.p1_max, 0.889, 1e-3);
    EXPECT_NEAR(r.optimum.g2, 0.0395, 1e-3);
}

TEST_F(HeadlineSearch, OptimumReverifiesThroughSeries) {
    const SearchReport r = find_ogbm(catalog(), kHeadline, {.top_k = 3});
    for (const StructureOptimum* o : {&r.optimum, &r.runner_ups[0], &r.runner_ups[2]}) {
        const PhotonStatistics s = output_distribution(o->arms, o->lambda_opt, kHeadline.v_d);
        EXPECT_NEAR(o->p1_max, s.p1, 1e-12);
        EXPECT_NEAR(o->p1_max, single_photon_probability(o->arms, o->lambda_opt, kHeadline.v_d), 1e-12);
    }
}

TEST_F(HeadlineSearch, ThreadCountDoesNotChangeResult) {
    const SearchReport a = find_ogbm(catalog(), kHeadline, {.top_k = 4, .threads = 1});
    const SearchReport b = find_ogbm(catalog(), kHeadline, {.top_k = 4, .threads = 4});
    EXPECT_EQ(a.optimum.sequence, b.optimum.sequence);
    EXPECT_EQ(a.optimum.p1_max, b.optimum.p1_max);
    ASSERT_EQ(a.runner_ups.size(), b.runner_ups.size());
    for (std::size_t i = 0; i < a.runner_ups.size(); ++i) EXPECT_EQ(a.runner_ups[i].sequence, b.runner_ups[i].sequence);
}

TEST_F(HeadlineSearch, DominatesBothChains) {
    const SearchReport r = find_ogbm(catalog(), kHeadline);
    for (const RouterSequence& chain : {RouterSequence::reflection_chain(10), RouterSequence::transmission_chain(10)}) {
        const LambdaOptimum c = optimize_lambda(numeric_arms(transmission_set(chain), kHeadline), kHeadline.v_d);
        EXPECT_GE(r.optimum.p1_max, c.p1 - 1e-12);
    }
}

TEST(FindOgbm, SwapSymmetryOfValue) {
    const StructureCatalog catalog = build_catalog(7);
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> v(0.9, 0.99);
    for (int trial = 0; trial < 10; ++trial) {
        const LossParams p{v(rng), v(rng), 0.98, 0.95};
        const double a = find_ogbm(catalog, p).optimum.p1_max;
        const double b = find_ogbm(catalog, p.swapped()).optimum.p1_max;
        EXPECT_NEAR(a, b, 1e-10);
    }
}

TEST(FindOgbm, TiesResolveToEnumerationOrder) {
    // With V_t = V_r every set with the same depth profile evaluates identically.
    const StructureCatalog catalog = build_catalog(4);
    const LossParams p{0.95, 0.95, 0.98, 0.95};
    const SearchReport r = find_ogbm(catalog, p, {.top_k = static_cast<int>(catalog.structures.size())});
    for (const StructureOptimum& o : r.runner_ups) {
        if (o.p1_max == r.optimum.p1_max) {
            EXPECT_LT(r.optimum.sequence, o.sequence);
        }
    }
}

TEST(AsymArms, TwoUnits) {
    const ArmVector arms = asym_arms(2, {0.985, 0.99, 1.0, 0.95});
    EXPECT_EQ(values(arms), (std::vector<double>{0.99, 0.985}));
}

TEST(AsymArms, MatchesChainFormula) {
    for (const LossParams& p : {kHeadline, kHeadline.swapped(), LossParams{0.93, 0.97, 0.9, 0.8}}) {
        const double v1 = std::min(p.v_t, p.v_r);
        const double v2 = std::max(p.v_t, p.v_r);
        for (int n_units = 2; n_units <= 30; ++n_units) {
            std::vector<double> formula;
            for (int n = 1; n < n_units; ++n) formula.push_back(p.v_b * v1 * std::pow(v2, n - 1));
            formula.push_back(p.v_b * std::pow(v2, n_units - 1));
            const ArmVector expected = ArmVector::from_unsorted(formula);
            const ArmVector got = asym_arms(n_units, p);
            ASSERT_EQ(got.size(), expected.size());
            for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-15);
        }
    }
}

TEST(AsymArms, SymmetricRoutersGiveGeometricChain) {
    const double v = 0.97;
    const ArmVector arms = asym_arms(6, {v, v, 1.0, 0.9});
    const std::vector<double> expected{v, v * v, v * v * v, v * v * v * v, v * v * v * v * v, v * v * v * v * v};
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(arms[i], expected[i], 1e-15);
    EXPECT_THROW(asym_arms(1, kHeadline), ContractViolation);
}

TEST(AsymScan, SaturatesMonotonically) {
    const auto scan = asym_saturation_scan(kHeadline, 40);
    ASSERT_EQ(scan.size(), 39u);
    for (std::size_t i = 1; i < scan.size(); ++i) EXPECT_GE(scan[i].p1_max, scan[i - 1].p1_max - 1e-10);
    EXPECT_NEAR(scan[28 - 2].p1_max, 0.905, 1e-3);
    EXPECT_EQ(scan[28 - 2].n_units, 28);
}

TEST(AsymScan, MonotoneForOtherParameters) {
    for (const LossParams& p : {LossParams{0.9, 0.99, 0.98, 0.8}, LossParams{0.97, 0.92, 0.9, 0.99}}) {
        const auto scan = asym_saturation_scan(p, 30);
        for (std::size_t i = 1; i < scan.size(); ++i) EXPECT_GE(scan[i].p1_max, scan[i - 1].p1_max - 1e-10);
    }
}

TEST_F(HeadlineSearch, AsymBelowOgbmAtElevenUnits) {
    const auto scan = asym_saturation_scan(kHeadline, 11);
    const SearchReport r = find_ogbm(catalog(), kHeadline);
    EXPECT_GE(r.optimum.p1_max - scan.back().p1_max, 0.0);
}
