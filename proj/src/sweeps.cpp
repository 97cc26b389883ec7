#include "gbm/sweeps.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>

#include "gbm/errors.hpp"
#include "gbm/parallel.hpp"

namespace gbm {

double AxisRange::value(int i) const {
    if (steps == 1) return lo;
    if (i == steps - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void GridSpec::validate() const {
    const auto check = [](const AxisRange& a, const char* name) {
        const bool single = a.steps == 1 && a.lo == a.hi;
        const bool span = a.steps >= 2 && a.lo < a.hi;
        if (!(a.lo >= 0.9 && a.hi <= 0.99) || !(single || span)) {
            throw ContractViolation(std::string(name) +
                                    " range must satisfy 0.9 <= lo < hi <= 0.99 with steps >= 2");
        }
    };
    check(vt, "v_t");
    check(vr, "v_r");
    if (!is_probability(v_d) || !is_probability(v_b)) throw ContractViolation("v_d and v_b must lie in (0, 1]");
    if (n_units < 2) throw ContractViolation("n_units must be >= 2");
}

LossParams GridSpec::params_at(std::size_t cell) const {
    const auto cols = static_cast<std::size_t>(vr.steps);
    return {vt.value(static_cast<int>(cell / cols)), vr.value(static_cast<int>(cell % cols)), v_b, v_d};
}

const char* to_string(Half h) noexcept { return h == Half::Upper ? "upper" : "lower"; }

bool in_half(Half h, double v_t, double v_r) noexcept { return h == Half::Upper ? v_r >= v_t : v_r <= v_t; }

int OccurrenceMap::total_counted() const {
    int total = 0;
    for (const auto& e : ranking) total += e.count;
    return total;
}

namespace {

std::vector<StructureOptimum> sweep_optima(const GridSpec& grid, int threads,
                                           const std::vector<bool>* mask = nullptr) {
    grid.validate();
    const StructureCatalog catalog = build_catalog(grid.n_units - 1);
    std::vector<StructureOptimum> out(grid.cell_count());
    parallel_for(out.size(), threads, [&](std::size_t c) {
        if (mask && !(*mask)[c]) return;
        out[c] = find_ogbm(catalog, grid.params_at(c)).optimum;
    });
    return out;
}

}  // namespace

StructureOptimum evaluate_asym(int n_units, const LossParams& params) {
    const int n_routers = n_units - 1;
    Structure chain;
    chain.sequence = params.v_r >= params.v_t ? RouterSequence::reflection_chain(n_routers)
                                              : RouterSequence::transmission_chain(n_routers);
    chain.arms = asym_exponents(n_units, params);
    return evaluate_structure(chain, params);
}

std::vector<SurfaceRow> surface_sweep(const GridSpec& grid, int threads) {
    const auto optima = sweep_optima(grid, threads);
    std::vector<SurfaceRow> rows;
    rows.reserve(optima.size());
    for (std::size_t c = 0; c < optima.size(); ++c) {
        const LossParams p = grid.params_at(c);
        const StructureOptimum& o = optima[c];
        rows.push_back({p.v_t, p.v_r, o.p1_max, o.g2, o.lambda_opt, o.sequence.id(), o.symbolic,
                        o.at_bracket_edge});
    }
    return rows;
}

std::vector<DiffRow> diff_vs_asym(const GridSpec& grid, int threads) {
    const auto optima = sweep_optima(grid, threads);
    std::vector<StructureOptimum> asym(optima.size());
    parallel_for(asym.size(), threads,
                 [&](std::size_t c) { asym[c] = evaluate_asym(grid.n_units, grid.params_at(c)); });

    std::vector<DiffRow> rows;
    rows.reserve(optima.size());
    for (std::size_t c = 0; c < optima.size(); ++c) {
        const LossParams p = grid.params_at(c);
        const StructureOptimum& o = optima[c];
        const StructureOptimum& a = asym[c];
        DiffRow row;
        row.v_t = p.v_t;
        row.v_r = p.v_r;
        row.p1_ogbm = o.p1_max;
        row.p1_asym = a.p1_max;
        row.g2_ogbm = o.g2;
        row.g2_asym = a.g2;
        row.delta_p1 = o.p1_max - a.p1_max;
        row.delta_g2 = a.g2 - o.g2;
        row.structure_id = o.sequence.id();
        row.winner_is_chain = is_chain(o.symbolic, grid.n_units - 1);
        rows.push_back(std::move(row));
    }
    return rows;
}

OccurrenceMap occurrence_map(const GridSpec& grid, Half half, int threads) {
    grid.validate();
    std::vector<bool> mask(grid.cell_count());
    for (std::size_t c = 0; c < mask.size(); ++c) {
        const LossParams p = grid.params_at(c);
        mask[c] = in_half(half, p.v_t, p.v_r);
    }
    const auto optima = sweep_optima(grid, threads, &mask);

    OccurrenceMap map;
    map.grid = grid;
    map.half = half;
    map.cells.assign(optima.size(), std::nullopt);

    std::map<std::string, int> first_seen;  // set key -> index in appearance order
    std::vector<OccurrenceEntry> entries;
    std::vector<int> cell_entry(optima.size(), -1);
    for (std::size_t c = 0; c < optima.size(); ++c) {
        if (!mask[c]) continue;
        const StructureOptimum& o = optima[c];
        auto [it, inserted] = first_seen.try_emplace(o.symbolic.key(), static_cast<int>(entries.size()));
        if (inserted) entries.push_back({o.sequence.id(), o.symbolic, 0});
        ++entries[static_cast<std::size_t>(it->second)].count;
        cell_entry[c] = it->second;
    }

    std::vector<int> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return entries[static_cast<std::size_t>(a)].count > entries[static_cast<std::size_t>(b)].count;
    });
    std::vector<int> rank_of(entries.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank_of[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
        map.ranking.push_back(entries[static_cast<std::size_t>(order[r])]);
    }
    for (std::size_t c = 0; c < optima.size(); ++c) {
        if (cell_entry[c] >= 0) map.cells[c] = rank_of[static_cast<std::size_t>(cell_entry[c])];
    }
    return map;
}

std::vector<NScalingRow> n_scaling(const LossParams& params, const std::vector<int>& n_units, int threads) {
    params.validate();
    std::vector<NScalingRow> rows(n_units.size());
    for (std::size_t i = 0; i < n_units.size(); ++i) {
        if (n_units[i] < 1) throw ContractViolation("n_scaling: every N must be >= 1");
        if (n_units[i] == 1) {
            // A lone source: no routers, only the V_b loss before the output.
            const ArmVector arm({params.v_b});
            const LambdaOptimum opt = optimize_lambda(arm, params.v_d);
            const PhotonStatistics s = output_distribution(arm, opt.lambda, params.v_d);
            rows[i] = {1, s.p1, s.g2.value_or(0.0), opt.lambda, ""};
            continue;
        }
        const SearchReport rep = find_ogbm(n_units[i] - 1, params, {.top_k = 0, .threads = threads});
        rows[i] = {n_units[i], rep.optimum.p1_max, rep.optimum.g2, rep.optimum.lambda_opt,
                   rep.optimum.sequence.id()};
    }
    return rows;
}

namespace {

struct Precision {
    explicit Precision(std::ostream& os) : os_(os), old_(os.precision(12)) {}
    ~Precision() { os_.precision(old_); }
    std::ostream& os_;
    std::streamsize old_;
};

}  // namespace

void write_csv(std::ostream& os, const std::vector<SurfaceRow>& rows) {
    Precision guard(os);
    os << "v_t,v_r,p1_max,g2,lambda_opt,structure_id,at_bracket_edge\n";
    for (const auto& r : rows) {
        os << r.v_t << ',' << r.v_r << ',' << r.p1_max << ',' << r.g2 << ',' << r.lambda_opt << ','
           << r.structure_id << ',' << (r.at_bracket_edge ? 1 : 0) << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<DiffRow>& rows) {
    Precision guard(os);
    os << "v_t,v_r,delta_p1,delta_g2,p1_ogbm,p1_asym,g2_ogbm,g2_asym,structure_id,winner_is_chain\n";
    for (const auto& r : rows) {
        os << r.v_t << ',' << r.v_r << ',' << r.delta_p1 << ',' << r.delta_g2 << ',' << r.p1_ogbm << ','
           << r.p1_asym << ',' << r.g2_ogbm << ',' << r.g2_asym << ',' << r.structure_id << ','
           << (r.winner_is_chain ? 1 : 0) << '\n';
    }
}

void write_csv(std::ostream& os, const OccurrenceMap& map) {
    Precision guard(os);
    os << "v_t,v_r,rank,structure_id,count\n";
    for (std::size_t c = 0; c < map.cells.size(); ++c) {
        const LossParams p = map.grid.params_at(c);
        os << p.v_t << ',' << p.v_r << ',';
        if (const auto& rank = map.cells[c]) {
            const auto& e = map.ranking[static_cast<std::size_t>(*rank)];
            os << (*rank + 1) << ',' << e.structure_id << ',' << e.count;
        } else {
            os << ",,";
        }
        os << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<NScalingRow>& rows) {
    Precision guard(os);
    os << "n_units,p1_max,g2,lambda_opt,structure_id\n";
    for (const auto& r : rows) {
        os << r.n_units << ',' << r.p1_max << ',' << r.g2 << ',' << r.lambda_opt << ',' << r.structure_id << '\n';
    }
}

}  // namespace gbm
