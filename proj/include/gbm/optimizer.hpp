#pragma once

#include <cstdint>
#include <vector>

#include "gbm/statistics.hpp"
#include "gbm/tree_enum.hpp"

namespace gbm {

inline constexpr double kLambdaLo = 1e-6;
inline constexpr double kLambdaHi = kLambdaMax;
inline constexpr double kLambdaTol = 1e-7;

struct LambdaOptimum {
    double lambda = 0.0;
    double p1 = 0.0;
    bool at_bracket_edge = false;  // maximum hit an end of (1e-6, 2]
};

struct StructureOptimum {
    RouterSequence sequence;
    TransmissionSet symbolic;
    ArmVector arms;  // numeric, V_b applied, descending
    double lambda_opt = 0.0;
    double p1_max = 0.0;
    double g2 = 0.0;
    bool at_bracket_edge = false;
};

struct SearchReport {
    StructureOptimum optimum;
    std::uint64_t n_structures_evaluated = 0;  // canonical sequences enumerated
    std::uint64_t n_distinct_sets = 0;         // survivors of dedup, each lambda-optimized
    std::vector<StructureOptimum> runner_ups;  // next best structures, descending
};

struct SearchOptions {
    int top_k = 0;    // runner-ups to report
    int threads = 1;  // 0 = hardware concurrency
};

// V_b * V_r^j * V_t^k per arm, sorted descending (stable for ties).
ArmVector numeric_arms(const TransmissionSet& tset, const LossParams& params);

// Golden-section maximization of lambda -> P_1 on (1e-6, 2].
LambdaOptimum optimize_lambda(const ArmVector& arms, double v_d);

// Full evaluation of a structure at its optimal lambda.
StructureOptimum evaluate_structure(const Structure& s, const LossParams& params);

SearchReport find_ogbm(const StructureCatalog& catalog, const LossParams& params,
                       const SearchOptions& opts = {});
SearchReport find_ogbm(int n_routers, const LossParams& params, const SearchOptions& opts = {});

// Chain multiplexer arms with the longer path along the better router input:
// V_n = V_b V_1 V_2^(n-1) for n < N and V_b V_2^(N-1) for n = N, V_1 = min, V_2 = max.
TransmissionSet asym_exponents(int n_units, const LossParams& params);
ArmVector asym_arms(int n_units, const LossParams& params);

struct AsymPoint {
    int n_units = 0;
    double lambda_opt = 0.0;
    double p1_max = 0.0;
};

std::vector<AsymPoint> asym_saturation_scan(const LossParams& params, int n_max);

}  // namespace gbm
