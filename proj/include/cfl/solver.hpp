#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfl/graphs.hpp"

namespace cfl {

inline constexpr double kDefaultA = 1.0;
inline constexpr double kDefaultB = 0.1;
inline constexpr std::uint64_t kDefaultMaxRounds = 100000;

// Learning parameters of the color-probability update. a and b live in
// (0, 1]; defaults follow the reference choice a=1, b=0.1.
struct SolverParams {
    double a = kDefaultA;
    double b = kDefaultB;
    Palette palette;

    void validate() const;
};

// Per-round lower bound on an unsatisfied vertex's probability of picking
// any particular color: min(a,b) / (D - 1 + a/b).
double gamma(const SolverParams& params);

// Per-vertex color distributions plus the current assignment. Rows are
// stored row-major (n x d). The rng seed is carried in the state so a run
// can be resumed (e.g. stepping past convergence in tests) on the exact
// same sample stream.
struct SolverState {
    int n = 0;
    int d = 1;
    std::uint64_t rng_seed = 0;
    std::uint64_t round = 0;
    std::vector<double> probs;  // n rows of d entries
    Assignment assignment;      // empty until the first step

    std::span<double> row(int i) { return {probs.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)}; }
    std::span<const double> row(int i) const { return {probs.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)}; }
};

// All rows uniform 1/D, round 0. The first assignment is sampled by the
// first step, not here.
SolverState init(int n, const SolverParams& params, std::uint64_t seed);

// One synchronous round: every vertex samples a color from its row, the
// sensed-conflict set is evaluated once on the completed assignment, then
// satisfied rows collapse to a point mass on the chosen color and
// unsatisfied rows get the blended update. Returns the number of
// unsatisfied vertices. Vertex v's draw in round t depends only on
// (rng_seed, t, v), so step() and step_parallel() produce identical states.
int step(SolverState& state, const SensingGraph& sensing, const SolverParams& params);

// Same round, per-vertex loops run under OpenMP.
int step_parallel(SolverState& state, const SensingGraph& sensing, const SolverParams& params);

enum class Exec { serial, parallel };

struct RunOutcome {
    bool converged = false;
    std::uint64_t rounds_used = 0;
    Assignment final_assignment;
    // Per-vertex satisfaction of the full (undirected) constraints, not just
    // the sensed ones.
    std::vector<std::uint8_t> fully_satisfied;

    bool operator==(const RunOutcome&) const = default;
};

// Repeats step() until no vertex senses a conflict (converged) or
// max_rounds is hit (not an error). Full satisfaction is reported against
// full_graph when given, otherwise against the symmetric closure of the
// sensing edges.
RunOutcome run(const SensingGraph& sensing, const SolverParams& params,
               std::uint64_t seed, std::uint64_t max_rounds = kDefaultMaxRounds,
               const ConstraintGraph* full_graph = nullptr,
               Exec exec = Exec::serial);

// True iff every row is a point mass, i.e. the assignment will repeat
// forever.
bool absorption_check(const SolverState& state);

}  // namespace cfl
