#include "gbm/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gbm/errors.hpp"
#include "gbm/serialize.hpp"

namespace gbm {

namespace {

const CLI::Validator kProbability(
    [](std::string& s) -> std::string {
        double x = 0.0;
        try {
            std::size_t pos = 0;
            x = std::stod(s, &pos);
            if (pos != s.size()) return "value " + s + " is not a number";
        } catch (const std::exception&) {
            return "value " + s + " is not a number";
        }
        if (!is_probability(x)) return "value " + s + " outside (0, 1]";
        return {};
    },
    "PROB in (0,1]");

struct RunConfig {
    LossParams params;
    int n_routers = 10;
    bool raw = false;
    bool list = false;
    int cap = 0;  // 0: the default cap of the chosen enumeration mode
    int top_k = 5;
    int threads = 0;
    std::string out_path;

    GridSpec grid;
    std::string half = "upper";
    std::vector<int> n_list{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

    std::string arms_path;
    double lambda = 0.0;  // 0: take lambda_opt from the arms file
    bool vd_given = false;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    int i_max = kDefaultIMax;
    double tol = kDefaultSeriesTol;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_loss_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--vt", cfg.params.v_t, "router transmission coefficient V_t")->check(kProbability)->capture_default_str();
    cmd->add_option("--vr", cfg.params.v_r, "router reflection coefficient V_r")->check(kProbability)->capture_default_str();
    cmd->add_option("--vb", cfg.params.v_b, "general transmission coefficient V_b")->check(kProbability)->capture_default_str();
    cmd->add_option("--vd", cfg.params.v_d, "detector efficiency V_D")->check(kProbability)->capture_default_str();
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--out", cfg.out_path, "write results to this file instead of stdout");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

void add_grid_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--vt-lo", cfg.grid.vt.lo, "lowest V_t on the grid")->capture_default_str();
    cmd->add_option("--vt-hi", cfg.grid.vt.hi, "highest V_t on the grid")->capture_default_str();
    cmd->add_option("--vr-lo", cfg.grid.vr.lo, "lowest V_r on the grid")->capture_default_str();
    cmd->add_option("--vr-hi", cfg.grid.vr.hi, "highest V_r on the grid")->capture_default_str();
    cmd->add_option("--steps", cfg.grid.vt.steps, "grid points per axis")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--units", cfg.grid.n_units, "number of multiplexed units N")->check(CLI::Range(2, kDefaultRouterCap + 1))->capture_default_str();
    cmd->add_option("--vd", cfg.grid.v_d, "detector efficiency V_D")->check(kProbability)->capture_default_str();
    cmd->add_option("--vb", cfg.grid.v_b, "general transmission coefficient V_b")->check(kProbability)->capture_default_str();
}

json header(const char* command, const RunConfig& cfg) {
    return json{{"tool", "gbmux"}, {"version", kVersion}, {"command", command}, {"params", cfg.params}};
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
        os_ = path.empty() ? &fallback : &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void emit(const json& doc, const RunConfig& cfg, std::ostream& out) {
    Sink sink(cfg.out_path, out);
    sink.stream() << doc.dump(2) << '\n';
}

int run_enumerate(const RunConfig& cfg, std::ostream& out) {
    json doc = header("enumerate", cfg);
    doc["routers"] = cfg.n_routers;
    doc["mode"] = cfg.raw ? "raw" : "canonical";
    const int cap = cfg.cap > 0 ? cfg.cap : (cfg.raw ? kDefaultRawRouterCap : kDefaultRouterCap);
    const SequenceRange range = cfg.raw ? generate_raw_sequences(cfg.n_routers, cap)
                                        : generate_canonical_sequences(cfg.n_routers, cap);
    StructureDeduplicator dedup;
    json list = json::array();
    for (const RouterSequence& seq : range) {
        const bool fresh = dedup.add(seq);
        if (cfg.list) {
            json item = Structure{seq, transmission_set(seq), dedup.seen() - 1};
            item["retained"] = fresh;
            list.push_back(std::move(item));
        }
    }
    doc["count"] = dedup.seen();
    doc["catalan"] = catalan(cfg.n_routers);
    doc["distinct_sets"] = dedup.structures().size();
    if (cfg.list) doc["structures"] = std::move(list);
    emit(doc, cfg, out);
    return kExitOk;
}

int run_optimize(const RunConfig& cfg, std::ostream& out) {
    const SearchReport report = find_ogbm(cfg.n_routers, cfg.params, {.top_k = cfg.top_k, .threads = cfg.threads});
    json doc = header("optimize", cfg);
    doc["routers"] = cfg.n_routers;
    doc["n_units"] = cfg.n_routers + 1;
    doc.update(json(report));
    emit(doc, cfg, out);
    return kExitOk;
}

int run_sweep(const std::string& kind, RunConfig cfg, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream csv;
    json extra = json::object();
    if (kind == "surface") {
        write_csv(csv, surface_sweep(cfg.grid, cfg.threads));
    } else if (kind == "diff") {
        write_csv(csv, diff_vs_asym(cfg.grid, cfg.threads));
    } else if (kind == "occurrence") {
        const OccurrenceMap map = occurrence_map(cfg.grid, cfg.half == "upper" ? Half::Upper : Half::Lower, cfg.threads);
        write_csv(csv, map);
        json ranking = json::array();
        for (const auto& e : map.ranking) {
            ranking.push_back({{"structure_id", e.structure_id}, {"transmissions", e.symbolic}, {"count", e.count}});
        }
        extra["half"] = to_string(map.half);
        extra["ranking"] = std::move(ranking);
    } else {
        write_csv(csv, n_scaling(cfg.params, cfg.n_list, cfg.threads));
        extra["n_list"] = cfg.n_list;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json side = header(("sweep " + kind).c_str(), cfg);
    if (kind == "nscaling") {
        side.update(extra);
    } else {
        side["grid"] = cfg.grid;
        side["params"] = {{"v_b", cfg.grid.v_b}, {"v_d", cfg.grid.v_d}};
        side.update(extra);
    }
    side["elapsed_seconds"] = seconds;

    if (cfg.out_path.empty()) {
        out << "# " << side.dump() << '\n' << csv.str();
    } else {
        Sink(cfg.out_path, out).stream() << csv.str();
        Sink(cfg.out_path + ".json", out).stream() << side.dump(2) << '\n';
    }
    return kExitOk;
}

struct SimInputs {
    ArmVector arms;
    double lambda;
    double v_d;
};

SimInputs load_sim_inputs(const RunConfig& cfg) {
    std::ifstream in(cfg.arms_path);
    if (!in) throw UsageError("cannot read arms file " + cfg.arms_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("arms file " + cfg.arms_path + " is not valid JSON: " + e.what());
    }
    SimInputs inputs{arms_from_json(doc), cfg.lambda, cfg.params.v_d};
    if (inputs.lambda <= 0.0) {
        if (!doc.is_object() || !doc.contains("optimum")) throw UsageError("--lambda is required for this arms file");
        inputs.lambda = doc.at("optimum").at("lambda_opt").get<double>();
    }
    if (!cfg.vd_given && doc.is_object() && doc.contains("params")) {
        inputs.v_d = doc.at("params").value("v_d", inputs.v_d);
    }
    return inputs;
}

int run_simulate(const RunConfig& cfg, bool compare, std::ostream& out) {
    const SimInputs in = load_sim_inputs(cfg);
    const SimResult sim = simulate({in.arms, in.lambda, in.v_d, cfg.trials, cfg.seed}, cfg.threads);
    json doc = {{"tool", "gbmux"}, {"version", kVersion}, {"command", compare ? "compare" : "simulate"},
                {"arms", in.arms}, {"lambda", round_significant(in.lambda)}, {"v_d", round_significant(in.v_d)},
                {"simulation", sim}};
    if (compare) {
        const PhotonStatistics stats = output_distribution(in.arms, in.lambda, in.v_d, {.i_max = cfg.i_max, .tol = cfg.tol});
        doc["analytic"] = stats;
        doc["chi2"] = chi2_compare(sim, stats);
    }
    emit(doc, cfg, out);
    return kExitOk;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"gbmux"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Search and evaluate binary-tree multiplexers for heralded single-photon sources", "gbmux"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CLI::App* enumerate = app.add_subcommand("enumerate", "enumerate router sequences");
    enumerate->add_option("--routers", cfg.n_routers, "number of routers N_R")->required()->check(CLI::PositiveNumber);
    enumerate->add_flag("--raw", cfg.raw, "enumerate all N_R! raw sequences instead of canonical ones");
    enumerate->add_flag("--list", cfg.list, "include every sequence and its transmission set");
    enumerate->add_option("--cap", cfg.cap, "router cap (default 15 canonical, 10 raw)")->check(CLI::PositiveNumber);
    add_common_flags(enumerate, cfg);

    CLI::App* optimize = app.add_subcommand("optimize", "find the optimal multiplexer structure");
    optimize->add_option("--routers", cfg.n_routers, "number of routers N_R")->check(CLI::Range(1, kDefaultRouterCap))->capture_default_str();
    optimize->add_option("--top", cfg.top_k, "runner-up structures to report")->check(CLI::NonNegativeNumber)->capture_default_str();
    add_loss_flags(optimize, cfg);
    add_common_flags(optimize, cfg);

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps");
    sweep->require_subcommand(1);
    std::vector<CLI::App*> sweeps;
    for (const char* kind : {"surface", "diff", "occurrence", "nscaling"}) {
        CLI::App* s = sweep->add_subcommand(kind);
        add_common_flags(s, cfg);
        if (std::string(kind) == "nscaling") {
            add_loss_flags(s, cfg);
            s->add_option("--n-list", cfg.n_list, "numbers of multiplexed units")->delimiter(',')->check(CLI::Range(1, kDefaultRouterCap + 1));
        } else {
            add_grid_flags(s, cfg);
        }
        if (std::string(kind) == "occurrence") {
            s->add_option("--half", cfg.half, "upper (v_r >= v_t) or lower (v_r <= v_t)")->check(CLI::IsMember({"upper", "lower"}))->capture_default_str();
        }
        sweeps.push_back(s);
    }

    std::vector<CLI::App*> sims;
    for (const char* name : {"simulate", "compare"}) {
        CLI::App* s = app.add_subcommand(name, std::string(name) == "simulate" ? "Monte Carlo simulation"
                                                                              : "Monte Carlo vs analytic chi-squared test");
        s->add_option("--arms", cfg.arms_path, "JSON arms file (optimize output, {\"arms\": [...]} or [...])")->required();
        s->add_option("--lambda", cfg.lambda, "input mean photon number (default: lambda_opt from the arms file)")->check(CLI::Range(0.0, kLambdaMax));
        s->add_option("--vd", cfg.params.v_d, "detector efficiency V_D")->check(kProbability);
        s->add_option("--trials", cfg.trials, "simulated pulses")->check(CLI::PositiveNumber)->capture_default_str();
        s->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
        if (std::string(name) == "compare") {
            s->add_option("--i-max", cfg.i_max, "largest photon number in the analytic distribution")->check(CLI::Range(2, 200))->capture_default_str();
        }
        add_common_flags(s, cfg);
        sims.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        cfg.grid.vr.steps = cfg.grid.vt.steps;
        cfg.params.validate();
        if (*sweep && !sweeps[3]->parsed()) cfg.grid.validate();
        for (CLI::App* s : sims) {
            if (s->parsed()) cfg.vd_given = s->get_option("--vd")->count() > 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*enumerate) return run_enumerate(cfg, out);
        if (*optimize) return run_optimize(cfg, out);
        if (*sweep) {
            for (CLI::App* s : sweeps) {
                if (s->parsed()) return run_sweep(s->get_name(), cfg, out);
            }
        }
        for (std::size_t i = 0; i < sims.size(); ++i) {
            if (sims[i]->parsed()) return run_simulate(cfg, i == 1, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace gbm
