// Command-line front end: instance generation, ingestion, structural
// analysis, single solves, batch experiments, sweeps, and bound reports.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfl/connectivity.hpp"
#include "cfl/graph_io.hpp"
#include "cfl/graphs.hpp"
#include "cfl/harness.hpp"
#include "cfl/solver.hpp"
#include "cfl/wireless.hpp"

namespace {

using nlohmann::json;

const char* verdict_name(cfl::Verdict v) {
    switch (v) {
        case cfl::Verdict::satisfied: return "satisfied";
        case cfl::Verdict::not_satisfied: return "not_satisfied";
        case cfl::Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

json chromatic_json(const cfl::ChromaticResult& chi) {
    return {{"exact", chi.exact}, {"lower", chi.lower}, {"upper", chi.upper}};
}

cfl::PaletteRule parse_palette_rule(const std::string& text) {
    if (text == "chi") return cfl::PaletteRule::exact_chi();
    if (text.rfind("chi+", 0) == 0)
        return cfl::PaletteRule::chi_plus(std::stoi(text.substr(4)));
    return cfl::PaletteRule::fixed(std::stoi(text));
}

// Palette for a generated graph file: an exact chromatic number when the
// search finishes, otherwise the best coloring found.
int auto_palette(const cfl::ConstraintGraph& g, long long budget) {
    if (g.n_vertices() == 0) return 1;
    const cfl::ChromaticResult chi = cfl::chromatic_number(g, budget);
    if (!chi.exact)
        std::cerr << "warning: chromatic search hit its budget; using upper bound "
                  << chi.upper << "\n";
    return std::max(1, chi.upper);
}

void write_node_sidecar(const std::string& path, const std::vector<cfl::Node>& nodes,
                        const std::vector<double>* radii, const json& config) {
    json list = json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        json entry{{"x", nodes[i].x},
                   {"y", nodes[i].y},
                   {"z", nodes[i].z},
                   {"tx_power_dbm", nodes[i].tx_power_dbm},
                   {"threshold_dbm", nodes[i].threshold_dbm}};
        if (radii) entry["radius"] = (*radii)[i];
        list.push_back(std::move(entry));
    }
    const json doc{{"nodes", std::move(list)}, {"config", config}};
    std::ofstream out(path);
    if (!out) throw cfl::io_error("cannot open output file", path);
    out << doc.dump(2) << "\n";
    if (!out) throw cfl::io_error("write failed", path);
}

struct GenerateArgs {
    cfl::DbmConfig dbm;
    std::string out;
    int colors = 0;  // 0 = size from the chromatic number
    long long budget = cfl::kChromaticNodeBudget;
};

int cmd_generate(const GenerateArgs& args) {
    const cfl::DbmInstance inst = cfl::generate_dbm(args.dbm);
    const int d = args.colors > 0 ? args.colors : auto_palette(inst.constraints, args.budget);
    cfl::write_graph_file(args.out, inst.constraints, inst.sensing, cfl::Palette(d));
    const json config{{"source", "dbm"},
                      {"lambda", args.dbm.intensity},
                      {"area_side", args.dbm.area_side},
                      {"detection_threshold_dbm", args.dbm.detection_threshold},
                      {"frequency_ghz", args.dbm.frequency_ghz},
                      {"seed", args.dbm.seed}};
    write_node_sidecar(args.out + ".nodes.json", inst.nodes, &inst.radii, config);
    std::cout << "wrote " << inst.nodes.size() << " nodes, "
              << inst.constraints.n_edges() << " undirected edges, "
              << inst.sensing.n_edges() << " sensing edges, palette " << d << " -> "
              << args.out << "\n";
    return 0;
}

struct IngestArgs {
    std::string xyz;
    double alpha = 4.3;
    cfl::IngestConfig radio;
    cfl::SensingMode mode = cfl::SensingMode::channel;
    std::string out;
    int colors = 0;
    long long budget = cfl::kChromaticNodeBudget;
};

int cmd_ingest(const IngestArgs& args) {
    const std::vector<cfl::Node> nodes = cfl::ingest_xyz(args.xyz, args.radio);
    const cfl::PathLossModel model = cfl::PathLossModel::exponent(args.alpha);
    const cfl::InterferenceGraphs built = cfl::build_interference_graph(nodes, model, args.mode);
    const int d = args.colors > 0 ? args.colors : auto_palette(built.constraints, args.budget);
    cfl::write_graph_file(args.out, built.constraints, built.sensing, cfl::Palette(d));
    const json config{{"source", "xyz"},
                      {"path", args.xyz},
                      {"alpha", args.alpha},
                      {"detection_threshold_dbm", args.radio.detection_threshold},
                      {"seed", args.radio.seed},
                      {"mode", args.mode == cfl::SensingMode::channel ? "channel" : "tdma"}};
    write_node_sidecar(args.out + ".nodes.json", nodes, nullptr, config);
    std::cout << "wrote " << nodes.size() << " nodes, " << built.constraints.n_edges()
              << " undirected edges, " << built.sensing.n_edges()
              << " sensing edges, palette " << d << " -> " << args.out << "\n";
    return 0;
}

int cmd_analyze(const std::string& path, int colors, long long budget) {
    const cfl::GraphFile file = cfl::read_graph_file(path);
    const cfl::Palette palette = colors > 0 ? cfl::Palette(colors) : file.palette;
    const int n = file.constraints.n_vertices();

    const cfl::ConditionAResult cond_a = cfl::check_condition_a(file.constraints, file.sensing);
    const cfl::Theorem2Result t2 =
        cfl::check_theorem2(file.constraints, file.sensing, palette, budget);
    const cfl::ChromaticResult chi_full =
        n > 0 ? cfl::chromatic_number(file.constraints, budget) : cfl::ChromaticResult{true, 0, 0};

    json components = json::array();
    for (const cfl::ComponentReport& report : t2.components) {
        // components never need more colors than the whole graph
        if (report.chromatic.exact && chi_full.exact && report.chromatic.chi() > chi_full.chi())
            throw std::logic_error("component chromatic number exceeds whole-graph value");
        components.push_back({{"id", report.id},
                              {"size", report.size},
                              {"in_degree", report.in_degree},
                              {"chromatic", chromatic_json(report.chromatic)},
                              {"eligible", verdict_name(report.eligible)}});
    }

    json uncovered = json::array();
    for (const auto& [u, v] : cond_a.uncovered) uncovered.push_back({u, v});

    const std::vector<std::uint8_t> eligible =
        cfl::node_eligibility(file.constraints, file.sensing, palette, budget);
    long eligible_count = 0;
    for (std::uint8_t bit : eligible) eligible_count += bit;

    const json doc{
        {"n", n},
        {"edges", file.constraints.n_edges()},
        {"sensing_edges", file.sensing.n_edges()},
        {"palette", palette.n_colors},
        {"condition_a", {{"holds", cond_a.holds}, {"uncovered", std::move(uncovered)}}},
        {"strongly_connected", n > 0 ? cfl::is_strongly_connected(file.sensing) : true},
        {"chromatic", chromatic_json(chi_full)},
        {"components", std::move(components)},
        {"overall", verdict_name(t2.overall)},
        {"node_eligibility_fraction",
         n > 0 ? static_cast<double>(eligible_count) / n : 1.0}};
    std::cout << doc.dump(2) << "\n";
    return 0;
}

struct SolveArgs {
    std::string in;
    std::uint64_t seed = 0;
    double a = cfl::kDefaultA;
    double b = cfl::kDefaultB;
    std::uint64_t max_rounds = cfl::kDefaultMaxRounds;
    int colors = 0;
    bool parallel = false;
    bool full_sensing = false;
};

int cmd_solve(const SolveArgs& args) {
    cfl::GraphFile file = cfl::read_graph_file(args.in);
    if (args.full_sensing) file.sensing = cfl::full_sensing(file.constraints);
    const cfl::Palette palette = args.colors > 0 ? cfl::Palette(args.colors) : file.palette;
    const cfl::SolverParams params{args.a, args.b, palette};
    const cfl::RunOutcome outcome =
        cfl::run(file.sensing, params, args.seed, args.max_rounds, &file.constraints,
                 args.parallel ? cfl::Exec::parallel : cfl::Exec::serial);

    long satisfied = 0;
    for (std::uint8_t bit : outcome.fully_satisfied) satisfied += bit;
    const int n = file.constraints.n_vertices();
    const json doc{{"n", n},
                   {"d", palette.n_colors},
                   {"seed", args.seed},
                   {"converged", outcome.converged},
                   {"rounds", outcome.rounds_used},
                   {"assignment", outcome.final_assignment.colors},
                   {"fully_satisfied_fraction",
                    n > 0 ? static_cast<double>(satisfied) / n : 1.0}};
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const cfl::ExperimentConfig& cfg, const std::string& format,
                   const std::string& out) {
    const cfl::ExperimentResult result = cfl::run_experiment(cfg);
    if (out.empty()) {
        std::cout << (format == "json" ? cfl::to_json_text(result) : cfl::to_csv(result));
    } else if (format == "both") {
        cfl::emit_csv(result, out + ".csv");
        cfl::emit_json(result, out + ".json");
    } else if (format == "json") {
        cfl::emit_json(result, out);
    } else {
        cfl::emit_csv(result, out);
    }
    std::cerr << "trials " << result.summary.trials << ", converged "
              << result.summary.converged << ", mean rounds (converged) "
              << result.summary.mean_rounds_converged << "\n";
    return 0;
}

int cmd_bounds(int n, double gamma_value, double epsilon) {
    const cfl::BoundInputs inputs{n, gamma_value, epsilon};
    const cfl::BoundResult t1 = cfl::theorem1_bound(inputs);
    const cfl::BoundResult c2 = cfl::corollary2_bound(inputs);
    const auto linear = [](const cfl::BoundResult& r) {
        return r.linear_ok ? json(r.linear_value) : json();
    };
    const json doc{{"n", n},
                   {"gamma", gamma_value},
                   {"epsilon", epsilon},
                   {"theorem1", {{"log", t1.log_value}, {"linear", linear(t1)}}},
                   {"corollary2", {{"log", c2.log_value}, {"linear", linear(c2)}}}};
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const cfl::ExperimentConfig& base, const std::vector<double>& lambdas,
              const std::vector<double>& thresholds, std::optional<double> solve_at,
              const std::string& out) {
    const std::vector<cfl::SweepRow> table =
        cfl::connectivity_sweep(base, lambdas, thresholds, solve_at);
    std::string text = "lambda,threshold_dbm,mean_eligible,mean_colored,solver_ran\n";
    for (const cfl::SweepRow& row : table) {
        text += std::to_string(row.lambda) + ',' + std::to_string(row.threshold_dbm) + ',';
        text += std::to_string(row.mean_eligible) + ',';
        text += row.solver_ran ? std::to_string(row.mean_colored) : std::string("nan");
        text += row.solver_ran ? ",1\n" : ",0\n";
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out);
        if (!file) throw cfl::io_error("cannot open output file", out);
        file << text;
        if (!file) throw cfl::io_error("write failed", out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"communication-free learning graph coloring toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "sample a directed Boolean model instance");
    generate->add_option("--lambda", gen.dbm.intensity, "node intensity per m^2")
        ->capture_default_str();
    generate->add_option("--area-side", gen.dbm.area_side, "square side in meters")
        ->capture_default_str();
    generate->add_option("--threshold-dbm", gen.dbm.detection_threshold, "detection threshold")
        ->capture_default_str();
    generate->add_option("--freq-ghz", gen.dbm.frequency_ghz, "carrier frequency")
        ->capture_default_str();
    generate->add_option("--powers", gen.dbm.power_set, "transmit power choices, dBm")
        ->capture_default_str();
    generate->add_option("--seed", gen.dbm.seed, "rng seed")->capture_default_str();
    generate->add_option("--colors", gen.colors, "palette size (0 = chromatic number)")
        ->capture_default_str();
    generate->add_option("--chromatic-budget", gen.budget, "branch-node budget")
        ->capture_default_str();
    generate->add_option("--out", gen.out, "output graph file")->required();

    IngestArgs ing;
    auto* ingest = app.add_subcommand("ingest", "build interference graphs from x y z rows");
    ingest->add_option("--xyz", ing.xyz, "coordinate file")->required();
    ingest->add_option("--alpha", ing.alpha, "path loss exponent")->capture_default_str();
    ingest
        ->add_option("--threshold-dbm", ing.radio.detection_threshold,
                     "receiver detection threshold")
        ->capture_default_str();
    ingest->add_option("--powers", ing.radio.power_set, "transmit power choices, dBm")
        ->capture_default_str();
    ingest->add_option("--seed", ing.radio.seed, "rng seed for power draws")
        ->capture_default_str();
    std::string ingest_mode = "channel";
    ingest->add_option("--mode", ingest_mode, "sensing medium")
        ->check(CLI::IsMember({"channel", "tdma"}))
        ->capture_default_str();
    ingest->add_option("--colors", ing.colors, "palette size (0 = chromatic number)")
        ->capture_default_str();
    ingest->add_option("--chromatic-budget", ing.budget, "branch-node budget")
        ->capture_default_str();
    ingest->add_option("--out", ing.out, "output graph file")->required();

    std::string analyze_in;
    int analyze_colors = 0;
    long long analyze_budget = cfl::kChromaticNodeBudget;
    auto* analyze = app.add_subcommand("analyze", "structural report for a graph file");
    analyze->add_option("input", analyze_in, "graph file")->required();
    analyze->add_option("--colors", analyze_colors, "palette override (0 = file header)")
        ->capture_default_str();
    analyze->add_option("--chromatic-budget", analyze_budget, "branch-node budget")
        ->capture_default_str();

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "run the solver once on a graph file");
    solve->add_option("input", solve_args.in, "graph file")->required();
    solve->add_option("--seed", solve_args.seed, "solver seed")->capture_default_str();
    solve->add_option("--a", solve_args.a, "unchosen-color gain")->capture_default_str();
    solve->add_option("--b", solve_args.b, "chosen-color gain")->capture_default_str();
    solve->add_option("--max-rounds", solve_args.max_rounds, "round limit")
        ->capture_default_str();
    solve->add_option("--colors", solve_args.colors, "palette override (0 = file header)")
        ->capture_default_str();
    solve->add_flag("--parallel", solve_args.parallel, "update vertices with OpenMP");
    solve->add_flag("--full-sensing", solve_args.full_sensing,
                    "replace sensing with both directions of every edge");

    cfl::ExperimentConfig exp_cfg;
    std::string exp_palette = "chi", exp_format = "csv", exp_out, exp_in, exp_xyz;
    std::string exp_mode = "channel";
    double exp_alpha = 4.3;
    auto* experiment = app.add_subcommand("experiment", "batch solver trials with statistics");
    experiment->add_option("--trials", exp_cfg.trials, "number of trials")
        ->capture_default_str();
    experiment->add_option("--max-rounds", exp_cfg.max_rounds, "round limit per trial")
        ->capture_default_str();
    experiment->add_option("--palette", exp_palette, "chi, chi+K, or a fixed color count")
        ->capture_default_str();
    experiment->add_option("--a", exp_cfg.a, "unchosen-color gain")->capture_default_str();
    experiment->add_option("--b", exp_cfg.b, "chosen-color gain")->capture_default_str();
    experiment->add_option("--seed", exp_cfg.master_seed, "master seed")->capture_default_str();
    experiment->add_option("--format", exp_format, "csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    experiment->add_option("--out", exp_out, "output path (stdout when omitted)");
    experiment->add_option("--in", exp_in, "graph file source");
    experiment->add_option("--xyz", exp_xyz, "coordinate file source");
    experiment->add_option("--alpha", exp_alpha, "path loss exponent for --xyz")
        ->capture_default_str();
    experiment->add_option("--mode", exp_mode, "sensing medium for --xyz")
        ->check(CLI::IsMember({"channel", "tdma"}))
        ->capture_default_str();
    experiment->add_option("--lambda", exp_cfg.dbm.intensity, "dbm intensity per m^2")
        ->capture_default_str();
    experiment->add_option("--area-side", exp_cfg.dbm.area_side, "dbm square side, meters")
        ->capture_default_str();
    double exp_threshold = exp_cfg.dbm.detection_threshold;
    experiment->add_option("--threshold-dbm", exp_threshold, "detection threshold")
        ->capture_default_str();
    experiment->add_option("--freq-ghz", exp_cfg.dbm.frequency_ghz, "dbm carrier frequency")
        ->capture_default_str();
    std::vector<double> exp_powers = exp_cfg.dbm.power_set;
    experiment->add_option("--powers", exp_powers, "transmit power choices, dBm")
        ->capture_default_str();
    experiment->add_flag("--full-sensing", exp_cfg.full_sensing,
                         "replace sensing with both directions of every edge");
    experiment->add_option("--quantiles", exp_cfg.quantiles, "summary quantiles")
        ->capture_default_str();
    experiment->add_option("--chromatic-budget", exp_cfg.chromatic_budget, "branch-node budget")
        ->capture_default_str();

    int bounds_n = 1, bounds_d = 0;
    double bounds_gamma = 0.0, bounds_eps = 0.01, bounds_a = 0.0, bounds_b = 0.0;
    auto* bounds = app.add_subcommand("bounds", "convergence-time bound report");
    bounds->add_option("--n", bounds_n, "vertex count")->required();
    bounds->add_option("--gamma", bounds_gamma, "exploration rate in (0,1)");
    bounds->add_option("--epsilon", bounds_eps, "failure probability")->capture_default_str();
    bounds->add_option("--a", bounds_a, "unchosen-color gain (with --b and --d)");
    bounds->add_option("--b", bounds_b, "chosen-color gain (with --a and --d)");
    bounds->add_option("--d", bounds_d, "palette size (with --a and --b)");

    cfl::ExperimentConfig sweep_cfg;
    sweep_cfg.trials = 200;
    std::vector<double> sweep_lambdas = {0.25, 0.5};
    std::vector<double> sweep_thresholds = {-25, -20, -15, -10, -5, 0};
    double sweep_solve_at = 0.0;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "eligibility fractions over (lambda, threshold)");
    sweep->add_option("--lambdas", sweep_lambdas, "intensity grid")->capture_default_str();
    sweep->add_option("--thresholds", sweep_thresholds, "detection threshold grid, dBm")
        ->capture_default_str();
    sweep->add_option("--trials", sweep_cfg.trials, "instances per grid point")
        ->capture_default_str();
    sweep->add_option("--seed", sweep_cfg.master_seed, "master seed")->capture_default_str();
    sweep->add_option("--area-side", sweep_cfg.dbm.area_side, "dbm square side, meters")
        ->capture_default_str();
    sweep->add_option("--max-rounds", sweep_cfg.max_rounds, "round limit at the solve point")
        ->capture_default_str();
    sweep->add_option("--palette", exp_palette, "chi, chi+K, or a fixed color count");
    sweep->add_option("--chromatic-budget", sweep_cfg.chromatic_budget, "branch-node budget")
        ->capture_default_str();
    auto* solve_at_opt =
        sweep->add_option("--solve-at", sweep_solve_at, "also run the solver at this threshold");
    sweep->add_option("--out", sweep_out, "output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (ingest->parsed()) {
            ing.mode = ingest_mode == "tdma" ? cfl::SensingMode::tdma : cfl::SensingMode::channel;
            return cmd_ingest(ing);
        }
        if (analyze->parsed()) return cmd_analyze(analyze_in, analyze_colors, analyze_budget);
        if (solve->parsed()) return cmd_solve(solve_args);
        if (experiment->parsed()) {
            exp_cfg.palette_rule = parse_palette_rule(exp_palette);
            exp_cfg.dbm.power_set = exp_powers;
            exp_cfg.dbm.detection_threshold = exp_threshold;
            if (!exp_in.empty()) {
                exp_cfg.source = cfl::SourceKind::file;
                exp_cfg.graph_path = exp_in;
            } else if (!exp_xyz.empty()) {
                exp_cfg.source = cfl::SourceKind::xyz;
                exp_cfg.xyz.path = exp_xyz;
                exp_cfg.xyz.model = cfl::PathLossModel::exponent(exp_alpha);
                exp_cfg.xyz.radio.power_set = exp_powers;
                exp_cfg.xyz.radio.detection_threshold = exp_threshold;
                exp_cfg.xyz.mode =
                    exp_mode == "tdma" ? cfl::SensingMode::tdma : cfl::SensingMode::channel;
            }
            return cmd_experiment(exp_cfg, exp_format, exp_out);
        }
        if (bounds->parsed()) {
            double g = bounds_gamma;
            if (g <= 0.0) {
                if (bounds_d < 1)
                    throw std::invalid_argument("need --gamma, or --a --b --d to derive it");
                g = cfl::gamma({bounds_a, bounds_b, cfl::Palette(bounds_d)});
            }
            return cmd_bounds(bounds_n, g, bounds_eps);
        }
        if (sweep->parsed()) {
            sweep_cfg.palette_rule = parse_palette_rule(exp_palette);
            std::optional<double> solve_at;
            if (solve_at_opt->count() > 0) solve_at = sweep_solve_at;
            return cmd_sweep(sweep_cfg, sweep_lambdas, sweep_thresholds, solve_at, sweep_out);
        }
    } catch (const cfl::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cfl::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
