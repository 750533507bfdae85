#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfl/connectivity.hpp"
#include "cfl/graphs.hpp"
#include "cfl/solver.hpp"
#include "cfl/wireless.hpp"

namespace cfl {

struct BoundInputs {
    int n = 1;
    double gamma_value = 0.5;
    double epsilon = 0.01;

    void validate() const;  // n >= 1, 0 < gamma < 1, 0 < epsilon < 1
};

// Bounds are computed in the log domain; the linear value is exp(log_value)
// when that fits a double, otherwise linear_ok is false.
struct BoundResult {
    double log_value = 0.0;
    double linear_value = 0.0;
    bool linear_ok = false;
};

// ln bound = 3 ln N + N^4 ln(1/gamma) + ln ln(1/epsilon)
BoundResult theorem1_bound(const BoundInputs& in);
// ln bound = ln N + (N(N+1)/2) ln(1/gamma) + ln ln(1/epsilon)
BoundResult corollary2_bound(const BoundInputs& in);

struct PaletteRule {
    enum class Kind { exact_chi, chi_plus, fixed };

    Kind kind = Kind::exact_chi;
    int offset = 0;   // chi_plus
    int fixed_d = 1;  // fixed

    static PaletteRule exact_chi() { return {}; }
    static PaletteRule chi_plus(int k);
    static PaletteRule fixed(int d);
};

enum class SourceKind { dbm, file, xyz };

struct XyzSource {
    std::string path;
    PathLossModel model = PathLossModel::exponent(4.3);
    IngestConfig radio;
    SensingMode mode = SensingMode::channel;
};

struct ExperimentConfig {
    SourceKind source = SourceKind::dbm;
    DbmConfig dbm;           // source == dbm
    std::string graph_path;  // source == file
    XyzSource xyz;           // source == xyz

    int trials = 1;
    std::uint64_t max_rounds = kDefaultMaxRounds;
    PaletteRule palette_rule;
    double a = kDefaultA;
    double b = kDefaultB;
    std::uint64_t master_seed = 0;
    bool full_sensing = false;  // replace C with both directions of every M edge
    std::vector<double> quantiles = {0.5, 0.9, 0.99};
    long long chromatic_budget = kChromaticNodeBudget;

    void validate() const;
};

struct TrialRecord {
    int instance_id = 0;
    std::uint64_t seed = 0;
    int n = 0;
    int d = 0;
    int chi = 0;  // meaningful only when chi_known
    bool chi_known = false;
    bool converged = false;
    std::uint64_t rounds = 0;
    double frac_satisfied = 0.0;  // fraction of vertices conflict-free in M
    double frac_eligible = 0.0;   // per-node component-eligibility fraction
};

struct ExperimentSummary {
    int trials = 0;
    int completed = 0;
    int skipped_chromatic = 0;
    int converged = 0;
    double convergence_fraction = 0.0;      // converged / trials
    double mean_rounds_converged = 0.0;     // NaN when nothing converged
    std::vector<double> quantile_probs;
    std::vector<double> quantile_rounds;    // +inf where the CDF never reaches p
    double mean_eligible_fraction = 0.0;
    double mean_colored_fraction = 0.0;
    double mean_converged_time_seconds = 0.0;  // rounds x 10 s slot length
    std::string note;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;  // ordered by trial index
    ExperimentSummary summary;
};

// Runs cfg.trials independent trials. Per-trial seeds are derived from the
// master seed by index, with instance generation and solver sampling on
// disjoint substreams, so results do not depend on trial count or schedule.
ExperimentResult run_experiment(const ExperimentConfig& cfg);         // trials via OpenMP
ExperimentResult run_experiment_serial(const ExperimentConfig& cfg);  // reference loop

struct SweepRow {
    double lambda = 0.0;
    double threshold_dbm = 0.0;
    double mean_eligible = 0.0;
    double mean_colored = 0.0;  // NaN unless solver ran at this threshold
    bool solver_ran = false;
};

// Per (lambda, threshold): mean eligible-node fraction over base.trials DBM
// instances; at solve_threshold (when given) also the mean colored fraction.
std::vector<SweepRow> connectivity_sweep(const ExperimentConfig& base,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& thresholds,
                                         std::optional<double> solve_threshold = {});

void emit_csv(const ExperimentResult& result, const std::string& path);
void emit_json(const ExperimentResult& result, const std::string& path);
std::string to_csv(const ExperimentResult& result);
std::string to_json_text(const ExperimentResult& result);

}  // namespace cfl
