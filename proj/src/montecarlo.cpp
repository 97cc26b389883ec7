#include "gbm/montecarlo.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>

#include "gbm/errors.hpp"
#include "gbm/parallel.hpp"

namespace gbm {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace {

// Portable uniform in [0, 1); std::uniform_real_distribution is implementation-defined.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(std::mt19937_64& rng, double p) { return uniform01(rng) < p; }

struct BlockTally {
    std::vector<std::uint64_t> counts;
    SimDiagnostics diag;
};

BlockTally run_block(const SimConfig& cfg, std::uint64_t block, std::uint64_t trials) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(block)));
    const double log_x = std::log(cfg.lambda / (1.0 + cfg.lambda));
    const auto arms = cfg.arms.values();

    BlockTally tally;
    tally.counts.assign(1, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t out = 0;
        for (std::size_t n = 0; n < arms.size(); ++n) {
            // Inverse CDF of P(l) = (1/(1+lambda)) x^l: P(l >= k) = x^k.
            const auto pairs = static_cast<std::uint64_t>(std::floor(std::log1p(-uniform01(rng)) / log_x));
            int clicks = 0;
            for (std::uint64_t p = 0; p < pairs && clicks < 2; ++p) clicks += bernoulli(rng, cfg.v_d);
            const bool heralded = clicks == 1;
            if (n == 0) {
                tally.diag.unit1_heralds += heralded;
                tally.diag.unit1_pair_sum += static_cast<double>(pairs);
                tally.diag.unit1_pair_sq_sum += static_cast<double>(pairs) * static_cast<double>(pairs);
            }
            if (!heralded) continue;
            for (std::uint64_t p = 0; p < pairs; ++p) out += bernoulli(rng, arms[n]);
            break;  // priority: lowest-indexed heralded unit is routed out
        }
        if (out >= tally.counts.size()) tally.counts.resize(out + 1, 0);
        ++tally.counts[out];
    }
    return tally;
}

}  // namespace

SimResult simulate(const SimConfig& cfg, int threads) {
    if (cfg.trials < 1) throw ContractViolation("simulate: trials must be >= 1");
    if (cfg.arms.size() == 0) throw ContractViolation("simulate: arm vector is empty");
    if (!(cfg.lambda > 0.0 && cfg.lambda <= kLambdaMax)) throw ContractViolation("simulate: lambda outside (0, 2]");
    if (!is_probability(cfg.v_d)) throw ContractViolation("simulate: v_d outside (0, 1]");

    const std::uint64_t n_blocks = (cfg.trials + kSimBlockTrials - 1) / kSimBlockTrials;
    std::vector<BlockTally> blocks(n_blocks);
    parallel_for(n_blocks, threads, [&](std::size_t b) {
        const std::uint64_t begin = b * kSimBlockTrials;
        const std::uint64_t len = std::min(kSimBlockTrials, cfg.trials - begin);
        blocks[b] = run_block(cfg, b, len);
    });

    SimResult res;
    res.trials = cfg.trials;
    res.seed = cfg.seed;
    res.rng_algorithm = kSimRngAlgorithm;
    for (const BlockTally& blk : blocks) {
        if (blk.counts.size() > res.counts.size()) res.counts.resize(blk.counts.size(), 0);
        for (std::size_t i = 0; i < blk.counts.size(); ++i) res.counts[i] += blk.counts[i];
        res.diagnostics.unit1_heralds += blk.diag.unit1_heralds;
        res.diagnostics.unit1_pair_sum += blk.diag.unit1_pair_sum;
        res.diagnostics.unit1_pair_sq_sum += blk.diag.unit1_pair_sq_sum;
    }
    const double n = static_cast<double>(cfg.trials);
    for (std::uint64_t c : res.counts) {
        const double p = static_cast<double>(c) / n;
        res.p_hat.push_back(p);
        res.std_err.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return res;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Chi2Result chi2_compare(const SimResult& sim, const PhotonStatistics& analytic, double significance) {
    if (sim.trials == 0) throw ContractViolation("chi2_compare: simulation has zero trials");
    const double n = static_cast<double>(sim.trials);

    Chi2Result res;
    double used_p = 0.0;
    std::uint64_t used_obs = 0;
    for (std::size_t i = 0; i < analytic.p.size(); ++i) {
        const double expected = n * analytic.p[i];
        if (expected < kChi2MinExpected) continue;
        const std::uint64_t obs = i < sim.counts.size() ? sim.counts[i] : 0;
        const double diff = static_cast<double>(obs) - expected;
        res.statistic += diff * diff / expected;
        used_p += analytic.p[i];
        used_obs += obs;
        ++res.bins_used;
    }
    const double rest_expected = n * std::max(0.0, 1.0 - used_p);
    if (rest_expected >= kChi2MinExpected) {
        const double diff = static_cast<double>(sim.trials - used_obs) - rest_expected;
        res.statistic += diff * diff / rest_expected;
        ++res.bins_used;
    }
    if (res.bins_used < 2) {
        res.verdict = Verdict::Inconclusive;
        return res;
    }
    res.dof = res.bins_used - 1;
    const boost::math::chi_squared_distribution<double> dist(res.dof);
    res.critical = boost::math::quantile(boost::math::complement(dist, significance));
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
    res.verdict = res.statistic < res.critical ? Verdict::Pass : Verdict::Fail;
    return res;
}

}  // namespace gbm
