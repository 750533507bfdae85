#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cfl/graphs.hpp"

namespace cfl {

// Maximal strongly connected components of a sensing graph. Components are
// listed in topological order of the condensation: every condensation edge
// (a, b) has a < b.
struct SccDecomposition {
    std::vector<int> component_of;
    std::vector<std::vector<int>> components;          // each sorted ascending
    std::vector<std::pair<int, int>> condensation_edges;  // sorted, deduplicated

    int n_components() const { return static_cast<int>(components.size()); }
};

SccDecomposition scc_decompose(const SensingGraph& s);

bool is_strongly_connected(const SensingGraph& s);

// Number of distinct vertices outside component k with at least one sensing
// edge ending inside it.
int component_in_degree(const SensingGraph& s, const SccDecomposition& dec, int k);

inline constexpr long long kChromaticNodeBudget = 10'000'000;

// Exact chromatic number when the search finishes within the node budget;
// otherwise the tightest bounds proven so far. upper always comes from a
// concrete proper coloring, so chi <= upper holds even when !exact.
struct ChromaticResult {
    bool exact = false;
    int lower = 0;
    int upper = 0;

    int chi() const;  // throws std::logic_error unless exact
};

ChromaticResult chromatic_number(const ConstraintGraph& g, std::span<const int> subset,
                                 long long node_budget = kChromaticNodeBudget);
ChromaticResult chromatic_number(const ConstraintGraph& g,
                                 long long node_budget = kChromaticNodeBudget);

enum class Verdict { satisfied, not_satisfied, inconclusive };

struct ComponentReport {
    int id = 0;
    int size = 0;
    int in_degree = 0;
    ChromaticResult chromatic;
    Verdict eligible = Verdict::inconclusive;  // chi(V_k) <= n_colors - in_degree
};

struct Theorem2Result {
    SccDecomposition scc;
    std::vector<ComponentReport> components;
    Verdict overall = Verdict::inconclusive;
};

// Per-component color-surplus condition: chi(V_k) <= D - deg(V_k) for every
// strongly connected component of the sensing graph. overall is satisfied only
// when every component check passes, not_satisfied as soon as one provably
// fails, and inconclusive when a chromatic search hit its budget.
Theorem2Result check_theorem2(const ConstraintGraph& g, const SensingGraph& s,
                              const Palette& palette,
                              long long node_budget = kChromaticNodeBudget);

// Vertex i is eligible iff its component passes the check above and every
// undirected edge touching that component is sensed in at least one direction.
std::vector<std::uint8_t> node_eligibility(const ConstraintGraph& g, const SensingGraph& s,
                                           const Palette& palette,
                                           long long node_budget = kChromaticNodeBudget);

}  // namespace cfl
