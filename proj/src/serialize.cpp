#include "gbm/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "gbm/errors.hpp"

namespace gbm {

double round_significant(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

namespace {

json rounded(std::span<const double> xs) {
    json arr = json::array();
    for (double x : xs) arr.push_back(round_significant(x));
    return arr;
}

}  // namespace

void to_json(json& j, const RouterSequence& seq) { j = seq.entries; }

void to_json(json& j, const ArmExponents& a) { j = json{{"j", a.j}, {"k", a.k}}; }

void to_json(json& j, const TransmissionSet& t) { j = t.arms(); }

void to_json(json& j, const Structure& s) { j = json{{"sequence", s.sequence}, {"arms", s.arms}}; }

void to_json(json& j, const LossParams& p) {
    j = json{{"v_t", round_significant(p.v_t)},
             {"v_r", round_significant(p.v_r)},
             {"v_b", round_significant(p.v_b)},
             {"v_d", round_significant(p.v_d)}};
}

void from_json(const json& j, LossParams& p) {
    p.v_t = j.value("v_t", p.v_t);
    p.v_r = j.value("v_r", p.v_r);
    p.v_b = j.value("v_b", p.v_b);
    p.v_d = j.value("v_d", p.v_d);
}

void to_json(json& j, const ArmVector& v) { j = rounded(v.values()); }

void to_json(json& j, const PhotonStatistics& s) {
    j = json{{"lambda", round_significant(s.lambda)},
             {"p", rounded(s.p)},
             {"p1", round_significant(s.p1)},
             {"g2", s.g2 ? json(round_significant(*s.g2)) : json(nullptr)},
             {"tail_bound", s.tail_bound},
             {"truncation_tail", s.truncation_tail},
             {"l_max", s.l_max}};
}

void to_json(json& j, const StructureOptimum& o) {
    j = json{{"sequence", o.sequence},
             {"structure_id", o.sequence.id()},
             {"transmissions", o.symbolic},
             {"arms", o.arms},
             {"lambda_opt", round_significant(o.lambda_opt)},
             {"p1_max", round_significant(o.p1_max)},
             {"g2", round_significant(o.g2)},
             {"at_bracket_edge", o.at_bracket_edge}};
}

void to_json(json& j, const SearchReport& r) {
    j = json{{"optimum", r.optimum},
             {"n_structures_evaluated", r.n_structures_evaluated},
             {"n_distinct_sets", r.n_distinct_sets},
             {"runner_ups", r.runner_ups}};
}

void to_json(json& j, const SimResult& r) {
    j = json{{"trials", r.trials},
             {"seed", r.seed},
             {"rng_algorithm", r.rng_algorithm},
             {"counts", r.counts},
             {"p_hat", rounded(r.p_hat)},
             {"stderr", rounded(r.std_err)},
             {"unit1_heralds", r.diagnostics.unit1_heralds}};
}

void to_json(json& j, const Chi2Result& r) {
    j = json{{"statistic", round_significant(r.statistic)},
             {"dof", r.dof},
             {"critical", round_significant(r.critical)},
             {"p_value", round_significant(r.p_value)},
             {"bins_used", r.bins_used},
             {"verdict", to_string(r.verdict)}};
}

void to_json(json& j, const AxisRange& a) {
    j = json{{"lo", round_significant(a.lo)}, {"hi", round_significant(a.hi)}, {"steps", a.steps}};
}

void to_json(json& j, const GridSpec& g) {
    j = json{{"vt_range", g.vt},
             {"vr_range", g.vr},
             {"v_d", round_significant(g.v_d)},
             {"v_b", round_significant(g.v_b)},
             {"n_units", g.n_units}};
}

ArmVector arms_from_json(const json& doc) {
    const json* arr = &doc;
    if (doc.is_object()) {
        if (doc.contains("optimum")) {
            arr = &doc.at("optimum").at("arms");
        } else if (doc.contains("arms")) {
            arr = &doc.at("arms");
        } else {
            throw ContractViolation("arms document has neither \"optimum\" nor \"arms\"");
        }
    }
    if (!arr->is_array() || arr->empty()) throw ContractViolation("arms must be a non-empty array");
    std::vector<double> v;
    for (const json& x : *arr) {
        if (!x.is_number()) throw ContractViolation("arms must be numeric transmissions");
        v.push_back(x.get<double>());
    }
    return ArmVector(std::move(v));
}

}  // namespace gbm
