#pragma once

// Event-level simulation of the multiplexed source. Every pulse samples the
// pair number of each unit from the thermal law, thins the idler photons by
// the detector efficiency photon by photon, routes the first unit that saw
// exactly one click, and thins its signal photons by the arm transmission.

#include <cstdint>
#include <string>
#include <vector>

#include "gbm/statistics.hpp"

namespace gbm {

struct SimConfig {
    ArmVector arms;
    double lambda = 0.0;
    double v_d = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

struct SimDiagnostics {
    std::uint64_t unit1_heralds = 0;  // pulses in which unit 1 heralded
    double unit1_pair_sum = 0.0;      // sum of unit-1 pair numbers
    double unit1_pair_sq_sum = 0.0;
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;  // histogram over output photon number
    std::vector<double> p_hat;
    std::vector<double> std_err;  // sqrt(p(1-p)/trials)
    SimDiagnostics diagnostics;
    std::string rng_algorithm;
};

// Trials are split into fixed blocks of kSimBlockTrials, each with its own
// generator seeded from (seed, block index); the histogram is therefore the
// same for any number of worker threads.
inline constexpr std::uint64_t kSimBlockTrials = 1u << 16;
inline constexpr const char* kSimRngAlgorithm = "mt19937_64 per 65536-trial block, seeded by splitmix64(seed, block)";

SimResult simulate(const SimConfig& config, int threads = 1);

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct Chi2Result {
    double statistic = 0.0;
    int dof = 0;
    double critical = 0.0;  // upper quantile at the significance level
    double p_value = 1.0;
    int bins_used = 0;
    Verdict verdict = Verdict::Inconclusive;
};

inline constexpr double kChi2Significance = 0.001;
inline constexpr double kChi2MinExpected = 10.0;

// Pearson test of the simulated histogram against analytic P_i. Bins with
// expected count >= 10 are tested individually; the remaining probability is
// pooled into one bin when that also reaches 10 expected counts.
Chi2Result chi2_compare(const SimResult& sim, const PhotonStatistics& analytic,
                        double significance = kChi2Significance);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace gbm
