#include "cfl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "cfl/graph_io.hpp"
#include "cfl/rng.hpp"

namespace cfl {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlotSeconds = 10.0;  // reporting convention for update interval

}  // namespace

void BoundInputs::validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(gamma_value > 0.0 && gamma_value < 1.0))
        throw std::invalid_argument("gamma must be in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in (0, 1)");
}

namespace {

// Sums are accumulated in long double so the rounded double is within 1 ulp
// of the exact log-domain value.
BoundResult finish_bound(long double log_value) {
    BoundResult result;
    result.log_value = static_cast<double>(log_value);
    if (result.log_value <= std::log(std::numeric_limits<double>::max())) {
        result.linear_value = static_cast<double>(std::exp(log_value));
        result.linear_ok = std::isfinite(result.linear_value);
    } else {
        result.linear_value = kInf;
        result.linear_ok = false;
    }
    return result;
}

}  // namespace

BoundResult theorem1_bound(const BoundInputs& in) {
    in.validate();
    const long double n = in.n;
    const long double log_inv_gamma = std::log(1.0L / static_cast<long double>(in.gamma_value));
    const long double log_log_inv_eps =
        std::log(std::log(1.0L / static_cast<long double>(in.epsilon)));
    return finish_bound(3.0L * std::log(n) + n * n * n * n * log_inv_gamma + log_log_inv_eps);
}

BoundResult corollary2_bound(const BoundInputs& in) {
    in.validate();
    const long double n = in.n;
    const long double log_inv_gamma = std::log(1.0L / static_cast<long double>(in.gamma_value));
    const long double log_log_inv_eps =
        std::log(std::log(1.0L / static_cast<long double>(in.epsilon)));
    return finish_bound(std::log(n) + n * (n + 1.0L) / 2.0L * log_inv_gamma + log_log_inv_eps);
}

PaletteRule PaletteRule::chi_plus(int k) {
    if (k < 0) throw std::invalid_argument("palette offset must be nonnegative");
    PaletteRule rule;
    rule.kind = Kind::chi_plus;
    rule.offset = k;
    return rule;
}

PaletteRule PaletteRule::fixed(int d) {
    if (d < 1) throw std::invalid_argument("palette needs at least one color");
    PaletteRule rule;
    rule.kind = Kind::fixed;
    rule.fixed_d = d;
    return rule;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
    SolverParams probe{a, b, Palette(1)};
    probe.validate();
    if (chromatic_budget < 1) throw std::invalid_argument("chromatic budget must be >= 1");
    for (double q : quantiles)
        if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantiles must be in (0, 1]");
    switch (source) {
        case SourceKind::dbm:
            dbm.validate();
            break;
        case SourceKind::file:
            if (graph_path.empty()) throw std::invalid_argument("graph path required");
            break;
        case SourceKind::xyz:
            if (xyz.path.empty()) throw std::invalid_argument("coordinate path required");
            if (xyz.radio.power_set.empty())
                throw std::invalid_argument("power set must be nonempty");
            break;
    }
}

namespace {

struct TrialOutput {
    bool skipped = false;
    TrialRecord record;
};

// Immutable cross-trial inputs; for the file source the whole analysis is
// trial-invariant, so it is done once here.
struct SharedSource {
    GraphFile file;
    ChromaticResult file_chi;
    int file_d = 1;
    double file_eligible = 1.0;
    bool file_skip = false;
    std::vector<Node> xyz_base;
};

ChromaticResult chi_of(const ConstraintGraph& g, long long budget) {
    if (g.n_vertices() == 0) return {true, 0, 0};
    return chromatic_number(g, budget);
}

// Returns the palette size, or 0 when the rule needs an exact chi that the
// search did not deliver.
int resolve_palette(const PaletteRule& rule, const ChromaticResult& chi) {
    switch (rule.kind) {
        case PaletteRule::Kind::exact_chi:
            return chi.exact ? std::max(1, chi.chi()) : 0;
        case PaletteRule::Kind::chi_plus:
            return chi.exact ? std::max(1, chi.chi() + rule.offset) : 0;
        case PaletteRule::Kind::fixed:
            return rule.fixed_d;
    }
    return 0;
}

double fraction_of(const std::vector<std::uint8_t>& bits) {
    if (bits.empty()) return 1.0;
    long count = 0;
    for (std::uint8_t b : bits) count += b;
    return static_cast<double>(count) / static_cast<double>(bits.size());
}

double eligible_fraction(const ConstraintGraph& g, const SensingGraph& s, int d,
                         long long budget) {
    if (g.n_vertices() == 0) return 1.0;
    return fraction_of(node_eligibility(g, s, Palette(d), budget));
}

SharedSource prepare_shared(const ExperimentConfig& cfg) {
    SharedSource shared;
    if (cfg.source == SourceKind::file) {
        shared.file = read_graph_file(cfg.graph_path);
        if (cfg.full_sensing) shared.file.sensing = full_sensing(shared.file.constraints);
        shared.file_chi = chi_of(shared.file.constraints, cfg.chromatic_budget);
        shared.file_d = resolve_palette(cfg.palette_rule, shared.file_chi);
        if (shared.file_d == 0)
            shared.file_skip = true;
        else
            shared.file_eligible = eligible_fraction(shared.file.constraints, shared.file.sensing,
                                                     shared.file_d, cfg.chromatic_budget);
    } else if (cfg.source == SourceKind::xyz) {
        shared.xyz_base = ingest_xyz(cfg.xyz.path, cfg.xyz.radio);
    }
    return shared;
}

TrialOutput run_one_trial(const ExperimentConfig& cfg, const SharedSource& shared, int trial) {
    const std::uint64_t trial_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial));
    const std::uint64_t instance_seed = derive_seed(trial_seed, 1);
    const std::uint64_t solver_seed = derive_seed(trial_seed, 2);

    ConstraintGraph g(0);
    SensingGraph s(0);
    ChromaticResult chi;
    int d = 0;
    double eligible = 1.0;

    if (cfg.source == SourceKind::file) {
        if (shared.file_skip) return {true, {}};
        g = shared.file.constraints;
        s = shared.file.sensing;
        chi = shared.file_chi;
        d = shared.file_d;
        eligible = shared.file_eligible;
    } else {
        if (cfg.source == SourceKind::dbm) {
            DbmConfig dc = cfg.dbm;
            dc.seed = instance_seed;
            DbmInstance inst = generate_dbm(dc);
            g = std::move(inst.constraints);
            s = std::move(inst.sensing);
        } else {
            std::vector<Node> nodes = shared.xyz_base;
            SplitMix64 rng(instance_seed);
            for (Node& node : nodes) {
                node.tx_power_dbm =
                    cfg.xyz.radio.power_set[rng.next_below(cfg.xyz.radio.power_set.size())];
                node.threshold_dbm = cfg.xyz.radio.detection_threshold;
            }
            InterferenceGraphs built = build_interference_graph(nodes, cfg.xyz.model, cfg.xyz.mode);
            g = std::move(built.constraints);
            s = std::move(built.sensing);
        }
        if (cfg.full_sensing) s = full_sensing(g);
        chi = chi_of(g, cfg.chromatic_budget);
        d = resolve_palette(cfg.palette_rule, chi);
        if (d == 0) return {true, {}};
        eligible = eligible_fraction(g, s, d, cfg.chromatic_budget);
    }

    const SolverParams params{cfg.a, cfg.b, Palette(d)};
    const RunOutcome outcome = run(s, params, solver_seed, cfg.max_rounds, &g);

    TrialOutput out;
    out.record.instance_id = trial;
    out.record.seed = trial_seed;
    out.record.n = g.n_vertices();
    out.record.d = d;
    out.record.chi_known = chi.exact;
    out.record.chi = chi.exact ? chi.chi() : -1;
    out.record.converged = outcome.converged;
    out.record.rounds = outcome.rounds_used;
    out.record.frac_satisfied = fraction_of(outcome.fully_satisfied);
    out.record.frac_eligible = eligible;
    return out;
}

ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
    ExperimentSummary summary;
    summary.trials = cfg.trials;
    summary.completed = static_cast<int>(records.size());
    summary.skipped_chromatic = cfg.trials - summary.completed;
    summary.note = "mean_rounds_converged and quantiles cover converged trials only; "
                   "non-converged trials are reported via convergence_fraction";

    std::vector<double> converged_rounds;
    double sum_eligible = 0.0, sum_colored = 0.0;
    for (const TrialRecord& r : records) {
        if (r.converged) converged_rounds.push_back(static_cast<double>(r.rounds));
        sum_eligible += r.frac_eligible;
        sum_colored += r.frac_satisfied;
    }
    summary.converged = static_cast<int>(converged_rounds.size());
    summary.convergence_fraction =
        cfg.trials > 0 ? static_cast<double>(summary.converged) / cfg.trials : 0.0;

    if (converged_rounds.empty()) {
        summary.mean_rounds_converged = kNan;
    } else {
        double sum = 0.0;
        for (double r : converged_rounds) sum += r;
        summary.mean_rounds_converged = sum / static_cast<double>(converged_rounds.size());
    }
    summary.mean_converged_time_seconds = summary.mean_rounds_converged * kSlotSeconds;

    std::sort(converged_rounds.begin(), converged_rounds.end());
    summary.quantile_probs = cfg.quantiles;
    for (double p : cfg.quantiles) {
        if (summary.completed == 0) {
            summary.quantile_rounds.push_back(kNan);
            continue;
        }
        // smallest r with #(converged, rounds <= r) / completed >= p
        const double want = p * summary.completed;
        auto k = static_cast<std::size_t>(std::ceil(want - 1e-9));
        if (k < 1) k = 1;
        summary.quantile_rounds.push_back(
            k <= converged_rounds.size() ? converged_rounds[k - 1] : kInf);
    }

    summary.mean_eligible_fraction =
        summary.completed > 0 ? sum_eligible / summary.completed : kNan;
    summary.mean_colored_fraction =
        summary.completed > 0 ? sum_colored / summary.completed : kNan;
    return summary;
}

ExperimentResult run_trials(const ExperimentConfig& cfg, bool parallel) {
    cfg.validate();
    const SharedSource shared = prepare_shared(cfg);

    std::vector<TrialOutput> outputs(static_cast<std::size_t>(cfg.trials));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int t = 0; t < cfg.trials; ++t) {
        try {
            outputs[t] = run_one_trial(cfg, shared, t);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult result;
    for (const TrialOutput& out : outputs)
        if (!out.skipped) result.records.push_back(out.record);
    result.summary = summarize(cfg, result.records);
    return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_trials(cfg, true); }

ExperimentResult run_experiment_serial(const ExperimentConfig& cfg) {
    return run_trials(cfg, false);
}

std::vector<SweepRow> connectivity_sweep(const ExperimentConfig& base,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& thresholds,
                                         std::optional<double> solve_threshold) {
    if (base.source != SourceKind::dbm)
        throw std::invalid_argument("connectivity sweep needs a dbm source");
    if (lambdas.empty() || thresholds.empty())
        throw std::invalid_argument("sweep lists must be nonempty");
    base.validate();

    std::vector<SweepRow> table;
    for (double lambda : lambdas) {
        for (double threshold : thresholds) {
            ExperimentConfig cfg = base;
            cfg.dbm.intensity = lambda;
            cfg.dbm.detection_threshold = threshold;

            SweepRow row;
            row.lambda = lambda;
            row.threshold_dbm = threshold;
            row.mean_colored = kNan;

            const bool solve_here =
                solve_threshold && std::abs(threshold - *solve_threshold) < 1e-9;
            if (solve_here) {
                const ExperimentResult result = run_experiment(cfg);
                row.mean_eligible = result.summary.mean_eligible_fraction;
                row.mean_colored = result.summary.mean_colored_fraction;
                row.solver_ran = true;
            } else {
                // eligibility needs no solver run: generate, size the palette,
                // and evaluate the per-node condition
                double sum = 0.0;
                int counted = 0;
                std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) reduction(+ : sum, counted)
                for (int t = 0; t < cfg.trials; ++t) {
                    try {
                        DbmConfig dc = cfg.dbm;
                        dc.seed = derive_seed(derive_seed(cfg.master_seed,
                                                          static_cast<std::uint64_t>(t)),
                                              1);
                        const DbmInstance inst = generate_dbm(dc);
                        const ChromaticResult chi = chi_of(inst.constraints, cfg.chromatic_budget);
                        const int d = resolve_palette(cfg.palette_rule, chi);
                        if (d == 0) continue;
                        sum += eligible_fraction(inst.constraints, inst.sensing, d,
                                                 cfg.chromatic_budget);
                        counted += 1;
                    } catch (...) {
#pragma omp critical
                        if (!failure) failure = std::current_exception();
                    }
                }
                if (failure) std::rethrow_exception(failure);
                row.mean_eligible = counted > 0 ? sum / counted : kNan;
            }
            table.push_back(row);
        }
    }
    return table;
}

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

std::string to_csv(const ExperimentResult& result) {
    std::string out =
        "instance_id,seed,n,d,chi,converged,rounds,frac_satisfied,frac_eligible\n";
    for (const TrialRecord& r : result.records) {
        out += std::to_string(r.instance_id);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.d);
        out += ',';
        out += r.chi_known ? std::to_string(r.chi) : std::string("unknown");
        out += ',';
        out += r.converged ? '1' : '0';
        out += ',';
        out += std::to_string(r.rounds);
        out += ',';
        out += format_double(r.frac_satisfied);
        out += ',';
        out += format_double(r.frac_eligible);
        out += '\n';
    }
    return out;
}

std::string to_json_text(const ExperimentResult& result) {
    using nlohmann::json;
    json records = json::array();
    for (const TrialRecord& r : result.records) {
        json rec{{"instance_id", r.instance_id},
                 {"seed", r.seed},
                 {"n", r.n},
                 {"d", r.d},
                 {"chi", r.chi_known ? json(r.chi) : json()},
                 {"converged", r.converged},
                 {"rounds", r.rounds},
                 {"frac_satisfied", r.frac_satisfied},
                 {"frac_eligible", r.frac_eligible}};
        records.push_back(std::move(rec));
    }

    const ExperimentSummary& s = result.summary;
    json quantiles = json::array();
    for (std::size_t i = 0; i < s.quantile_probs.size(); ++i)
        quantiles.push_back({{"p", s.quantile_probs[i]}, {"rounds", s.quantile_rounds[i]}});
    json summary{{"trials", s.trials},
                 {"completed", s.completed},
                 {"skipped_chromatic", s.skipped_chromatic},
                 {"converged", s.converged},
                 {"convergence_fraction", s.convergence_fraction},
                 {"mean_rounds_converged", s.mean_rounds_converged},
                 {"quantiles", std::move(quantiles)},
                 {"mean_eligible_fraction", s.mean_eligible_fraction},
                 {"mean_colored_fraction", s.mean_colored_fraction},
                 {"mean_converged_time_seconds", s.mean_converged_time_seconds},
                 {"note", s.note}};

    const json doc{{"records", std::move(records)}, {"summary", std::move(summary)}};
    return doc.dump(2) + "\n";
}

namespace {

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open output file", path);
    out << text;
    if (!out) throw io_error("write failed", path);
}

}  // namespace

void emit_csv(const ExperimentResult& result, const std::string& path) {
    write_text_file(path, to_csv(result));
}

void emit_json(const ExperimentResult& result, const std::string& path) {
    write_text_file(path, to_json_text(result));
}

}  // namespace cfl
