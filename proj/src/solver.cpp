#include "cfl/solver.hpp"

#include <stdexcept>

#include "cfl/rng.hpp"

namespace cfl {

namespace {

constexpr std::uint64_t kRenormInterval = 1024;

// Uniform [0,1) draw for (seed, round, vertex); the per-vertex substream
// that makes rounds order-independent.
double vertex_uniform(std::uint64_t seed, std::uint64_t round, int vertex) {
    return u64_to_unit_double(
        splitmix64(derive_seed(derive_seed(seed, round), static_cast<std::uint64_t>(vertex))));
}

int sample_row(std::span<const double> row, double u) {
    double cum = 0.0;
    const int d = static_cast<int>(row.size());
    for (int j = 0; j < d; ++j) {
        cum += row[j];
        if (u < cum) return j;
    }
    return d - 1;  // u landed beyond the accumulated mass (fp round-off)
}

int round_impl(SolverState& state, const SensingGraph& sensing,
               const SolverParams& params, bool parallel) {
    if (state.n != sensing.n_vertices())
        throw std::invalid_argument("state size does not match sensing graph");
    if (state.d != params.palette.n_colors)
        throw std::invalid_argument("state palette does not match params");

    const int n = state.n;
    const std::uint64_t round = state.round + 1;
    state.assignment.colors.resize(static_cast<std::size_t>(n));
    auto& colors = state.assignment.colors;

    const double b = params.b;
    const double denom = static_cast<double>(state.d) - 1.0 + params.a / b;
    const double gain_chosen = params.a / denom;
    const double gain_other = b / denom;

#pragma omp parallel for schedule(static) if (parallel)
    for (int v = 0; v < n; ++v)
        colors[v] = sample_row(state.row(v), vertex_uniform(state.rng_seed, round, v));

    int n_unsat = 0;
#pragma omp parallel for schedule(static) reduction(+ : n_unsat) if (parallel)
    for (int v = 0; v < n; ++v) {
        bool unsatisfied = false;
        for (int j : sensing.sources_of(v))
            if (colors[j] == colors[v]) {
                unsatisfied = true;
                break;
            }
        auto row = state.row(v);
        const int chosen = colors[v];
        if (unsatisfied) {
            for (int j = 0; j < state.d; ++j)
                row[j] = (1.0 - b) * row[j] + (j == chosen ? gain_chosen : gain_other);
            n_unsat += 1;
        } else {
            for (int j = 0; j < state.d; ++j) row[j] = 0.0;
            row[chosen] = 1.0;
        }
    }

    state.round = round;
    if (round % kRenormInterval == 0) {
#pragma omp parallel for schedule(static) if (parallel)
        for (int v = 0; v < n; ++v) {
            auto row = state.row(v);
            double sum = 0.0;
            for (int j = 0; j < state.d; ++j) sum += row[j];
            for (int j = 0; j < state.d; ++j) row[j] /= sum;
        }
    }
    return n_unsat;
}

}  // namespace

void SolverParams::validate() const {
    if (!(a > 0.0) || a > 1.0) throw std::invalid_argument("a must be in (0, 1]");
    if (!(b > 0.0) || b > 1.0) throw std::invalid_argument("b must be in (0, 1]");
    if (palette.n_colors < 1) throw std::invalid_argument("palette needs at least one color");
}

double gamma(const SolverParams& params) {
    params.validate();
    const double d = static_cast<double>(params.palette.n_colors);
    return std::min(params.a, params.b) / (d - 1.0 + params.a / params.b);
}

SolverState init(int n, const SolverParams& params, std::uint64_t seed) {
    params.validate();
    if (n < 0) throw std::invalid_argument("negative vertex count");
    SolverState state;
    state.n = n;
    state.d = params.palette.n_colors;
    state.rng_seed = seed;
    state.round = 0;
    state.probs.assign(static_cast<std::size_t>(n) * state.d, 1.0 / state.d);
    return state;
}

int step(SolverState& state, const SensingGraph& sensing, const SolverParams& params) {
    return round_impl(state, sensing, params, false);
}

int step_parallel(SolverState& state, const SensingGraph& sensing, const SolverParams& params) {
    return round_impl(state, sensing, params, true);
}

RunOutcome run(const SensingGraph& sensing, const SolverParams& params,
               std::uint64_t seed, std::uint64_t max_rounds,
               const ConstraintGraph* full_graph, Exec exec) {
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
    if (sensing.n_vertices() == 0) {
        RunOutcome out;
        out.converged = true;  // nothing to color
        return out;
    }
    SolverState state = init(sensing.n_vertices(), params, seed);

    RunOutcome out;
    for (std::uint64_t t = 0; t < max_rounds; ++t) {
        const int n_unsat = exec == Exec::parallel ? step_parallel(state, sensing, params)
                                                   : step(state, sensing, params);
        if (n_unsat == 0) {
            out.converged = true;
            break;
        }
    }
    out.rounds_used = state.round;
    out.final_assignment = state.assignment;

    ConstraintGraph closure(0);
    const ConstraintGraph* g = full_graph;
    if (g == nullptr) {
        closure = symmetric_closure(sensing);
        g = &closure;
    }
    out.fully_satisfied.assign(static_cast<std::size_t>(state.n), 1);
    for (int v = 0; v < state.n; ++v)
        for (int j : g->neighbors(v))
            if (out.final_assignment.colors[j] == out.final_assignment.colors[v]) {
                out.fully_satisfied[v] = 0;
                break;
            }
    return out;
}

bool absorption_check(const SolverState& state) {
    for (int v = 0; v < state.n; ++v) {
        auto row = state.row(v);
        int ones = 0;
        for (double p : row) {
            if (p == 1.0)
                ++ones;
            else if (p != 0.0)
                return false;
        }
        if (ones != 1) return false;
    }
    return true;
}

}  // namespace cfl
