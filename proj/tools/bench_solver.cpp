// Compares the serial kernels against their OpenMP versions: per-vertex
// solver rounds on one large instance, and whole experiments across trials.
// Both comparisons insist on identical outputs before reporting speedups.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cfl/harness.hpp"
#include "cfl/solver.hpp"
#include "cfl/wireless.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

bool same_state(const cfl::SolverState& a, const cfl::SolverState& b) {
    return a.round == b.round && a.assignment.colors == b.assignment.colors &&
           a.probs == b.probs;
}

int bench_step(double lambda, double side, double threshold, int rounds, std::uint64_t seed) {
    cfl::DbmConfig cfg;
    cfg.intensity = lambda;
    cfg.area_side = side;
    cfg.detection_threshold = threshold;
    cfg.seed = seed;
    const cfl::DbmInstance inst = cfl::generate_dbm(cfg);
    const int n = inst.constraints.n_vertices();
    std::cout << "instance: " << n << " vertices, " << inst.sensing.n_edges()
              << " sensing edges\n";

    const cfl::SolverParams params{cfl::kDefaultA, cfl::kDefaultB, cfl::Palette(4)};
    cfl::SolverState serial = cfl::init(n, params, seed);
    cfl::SolverState parallel = serial;

    auto start = clock_type::now();
    for (int t = 0; t < rounds; ++t) cfl::step(serial, inst.sensing, params);
    const double serial_time = seconds_since(start);

    start = clock_type::now();
    for (int t = 0; t < rounds; ++t) cfl::step_parallel(parallel, inst.sensing, params);
    const double parallel_time = seconds_since(start);

    if (!same_state(serial, parallel)) {
        std::cerr << "MISMATCH: parallel step diverged from serial reference\n";
        return 1;
    }
    std::cout << "step x" << rounds << ":  serial " << serial_time << " s, parallel "
              << parallel_time << " s, speedup " << serial_time / parallel_time
              << " (states identical)\n";
    return 0;
}

int bench_experiment(double lambda, double side, double threshold, int trials,
                     std::uint64_t seed) {
    cfl::ExperimentConfig cfg;
    cfg.dbm.intensity = lambda;
    cfg.dbm.area_side = side;
    cfg.dbm.detection_threshold = threshold;
    cfg.trials = trials;
    cfg.master_seed = seed;

    auto start = clock_type::now();
    const cfl::ExperimentResult serial = cfl::run_experiment_serial(cfg);
    const double serial_time = seconds_since(start);

    start = clock_type::now();
    const cfl::ExperimentResult parallel = cfl::run_experiment(cfg);
    const double parallel_time = seconds_since(start);

    if (cfl::to_csv(serial) != cfl::to_csv(parallel) ||
        cfl::to_json_text(serial) != cfl::to_json_text(parallel)) {
        std::cerr << "MISMATCH: parallel experiment diverged from serial reference\n";
        return 1;
    }
    std::cout << "experiment x" << trials << " trials:  serial " << serial_time
              << " s, parallel " << parallel_time << " s, speedup "
              << serial_time / parallel_time << " (outputs identical)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    double lambda = 0.5, side = 30.0, threshold = -25.0;
    double exp_side = 10.0;
    int rounds = 2000, trials = 64;
    std::uint64_t seed = 1;

    CLI::App app{"serial vs OpenMP kernel benchmark"};
    app.add_option("--lambda", lambda, "instance intensity per m^2")->capture_default_str();
    app.add_option("--side", side, "area side for the step benchmark")->capture_default_str();
    app.add_option("--exp-side", exp_side, "area side for the experiment benchmark")
        ->capture_default_str();
    app.add_option("--threshold", threshold, "detection threshold, dBm")->capture_default_str();
    app.add_option("--rounds", rounds, "solver rounds to time")->capture_default_str();
    app.add_option("--trials", trials, "experiment trials to time")->capture_default_str();
    app.add_option("--seed", seed, "rng seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const int rc_step = bench_step(lambda, side, threshold, rounds, seed);
    const int rc_exp = bench_experiment(lambda, exp_side, threshold, trials, seed);
    return rc_step != 0 || rc_exp != 0 ? 1 : 0;
}
