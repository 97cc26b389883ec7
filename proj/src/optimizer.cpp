#include "gbm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbm/errors.hpp"
#include "gbm/parallel.hpp"

namespace gbm {

ArmVector numeric_arms(const TransmissionSet& tset, const LossParams& params) {
    std::vector<double> v;
    v.reserve(tset.size());
    // The router product is formed as one commutative multiply so that the
    // V_t <-> V_r image of a set evaluates bit-identically.
    for (const ArmExponents& a : tset.arms()) {
        v.push_back(params.v_b * (std::pow(params.v_r, a.j) * std::pow(params.v_t, a.k)));
    }
    return ArmVector::from_unsorted(std::move(v));
}

LambdaOptimum optimize_lambda(const ArmVector& arms, double v_d) {
    if (arms.size() == 0) throw ContractViolation("optimize_lambda: empty arm vector");
    const auto f = [&](double lambda) { return single_photon_probability(arms, lambda, v_d); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = kLambdaLo;
    double b = kLambdaHi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > kLambdaTol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    LambdaOptimum out;
    out.lambda = 0.5 * (a + b);
    out.p1 = f(out.lambda);
    out.at_bracket_edge =
        out.lambda - kLambdaLo < 2.0 * kLambdaTol || kLambdaHi - out.lambda < 2.0 * kLambdaTol;
    return out;
}

namespace {

StructureOptimum finish(const Structure& s, ArmVector arms, const LambdaOptimum& lam, double v_d) {
    const PhotonStatistics stats = output_distribution(arms, lam.lambda, v_d);
    StructureOptimum out;
    out.sequence = s.sequence;
    out.symbolic = s.arms;
    out.arms = std::move(arms);
    out.lambda_opt = lam.lambda;
    out.p1_max = stats.p1;
    out.g2 = stats.g2.value_or(0.0);
    out.at_bracket_edge = lam.at_bracket_edge;
    return out;
}

}  // namespace

StructureOptimum evaluate_structure(const Structure& s, const LossParams& params) {
    params.validate();
    ArmVector arms = numeric_arms(s.arms, params);
    const LambdaOptimum lam = optimize_lambda(arms, params.v_d);
    return finish(s, std::move(arms), lam, params.v_d);
}

SearchReport find_ogbm(const StructureCatalog& catalog, const LossParams& params,
                       const SearchOptions& opts) {
    params.validate();
    const auto& structures = catalog.structures;
    if (structures.empty()) throw ContractViolation("find_ogbm: empty structure catalog");

    std::vector<LambdaOptimum> optima(structures.size());
    parallel_for(structures.size(), opts.threads, [&](std::size_t i) {
        optima[i] = optimize_lambda(numeric_arms(structures[i].arms, params), params.v_d);
    });

    // Descending P_1; equal values fall back to enumeration order.
    std::vector<std::size_t> order(structures.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto better = [&](std::size_t x, std::size_t y) {
        if (optima[x].p1 != optima[y].p1) return optima[x].p1 > optima[y].p1;
        return structures[x].enumeration_index < structures[y].enumeration_index;
    };
    const std::size_t keep = std::min(order.size(), static_cast<std::size_t>(std::max(0, opts.top_k)) + 1);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), better);

    SearchReport report;
    report.n_structures_evaluated = catalog.n_sequences;
    report.n_distinct_sets = structures.size();
    for (std::size_t r = 0; r < keep; ++r) {
        const std::size_t i = order[r];
        StructureOptimum so = finish(structures[i], numeric_arms(structures[i].arms, params), optima[i], params.v_d);
        if (r == 0) {
            report.optimum = std::move(so);
        } else {
            report.runner_ups.push_back(std::move(so));
        }
    }
    return report;
}

SearchReport find_ogbm(int n_routers, const LossParams& params, const SearchOptions& opts) {
    return find_ogbm(build_catalog(n_routers), params, opts);
}

TransmissionSet asym_exponents(int n_units, const LossParams& params) {
    if (n_units < 2) throw ContractViolation("asym multiplexer needs at least 2 units");
    const bool long_path_reflects = params.v_r >= params.v_t;
    std::vector<ArmExponents> arms;
    arms.reserve(static_cast<std::size_t>(n_units));
    for (int n = 1; n < n_units; ++n) {
        // V_1 * V_2^(n-1)
        arms.push_back(long_path_reflects ? ArmExponents{n - 1, 1} : ArmExponents{1, n - 1});
    }
    arms.push_back(long_path_reflects ? ArmExponents{n_units - 1, 0} : ArmExponents{0, n_units - 1});
    return TransmissionSet(std::move(arms));
}

ArmVector asym_arms(int n_units, const LossParams& params) {
    return numeric_arms(asym_exponents(n_units, params), params);
}

std::vector<AsymPoint> asym_saturation_scan(const LossParams& params, int n_max) {
    params.validate();
    if (n_max < 2) throw ContractViolation("asym_saturation_scan: n_max must be >= 2");
    std::vector<AsymPoint> out;
    for (int n = 2; n <= n_max; ++n) {
        const LambdaOptimum lam = optimize_lambda(asym_arms(n, params), params.v_d);
        out.push_back({n, lam.lambda, lam.p1});
    }
    return out;
}

}  // namespace gbm
