#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cfl {

using Color = int;

// Color palette {0, ..., n_colors-1}. Colors are 0-based everywhere in the
// library; 1-based presentation, if any, happens at the CLI formatting layer.
struct Palette {
    int n_colors = 1;

    Palette() = default;
    explicit Palette(int d);
};

// A color per vertex.
struct Assignment {
    std::vector<Color> colors;

    Assignment() = default;
    explicit Assignment(std::vector<Color> c) : colors(std::move(c)) {}

    int size() const { return static_cast<int>(colors.size()); }
    bool operator==(const Assignment&) const = default;
};

// Undirected constraint graph on vertices 0..N-1. Edges are kept as sorted
// per-vertex adjacency lists with both directions always present; duplicate
// insertions are idempotent. Immutable by convention once built, so shared
// concurrent reads are safe.
class ConstraintGraph {
public:
    explicit ConstraintGraph(int n_vertices);

    void add_edge(int i, int j);

    int n_vertices() const { return n_; }
    std::size_t n_edges() const { return n_undirected_; }  // undirected count
    const std::vector<int>& neighbors(int i) const;
    bool has_edge(int i, int j) const;

    // All undirected edges as (i, j) with i < j, lexicographically sorted.
    std::vector<std::pair<int, int>> undirected_edges() const;

private:
    int n_ = 0;
    std::size_t n_undirected_ = 0;
    std::vector<std::vector<int>> adj_;
};

// Oriented sensing graph on the same vertex set. A directed edge (j -> i)
// means vertex i observes conflicts caused by j; the in-list of i is its
// information set C_i. Duplicate insertions are idempotent.
class SensingGraph {
public:
    explicit SensingGraph(int n_vertices);

    void add_sense(int source, int target);  // adds (source -> target)

    int n_vertices() const { return n_; }
    std::size_t n_edges() const { return n_directed_; }  // directed count
    const std::vector<int>& sources_of(int i) const;     // C_i, as source ids
    const std::vector<int>& targets_of(int j) const;     // out-neighbors of j
    bool has_edge(int source, int target) const;

private:
    int n_ = 0;
    std::size_t n_directed_ = 0;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> out_;
};

// Sensing graph with C = M (both directions of every constraint edge).
SensingGraph full_sensing(const ConstraintGraph& g);

// Constraint graph whose edge set is the symmetric closure of C.
ConstraintGraph symmetric_closure(const SensingGraph& s);

// Throws std::invalid_argument unless every sensing edge is also a
// constraint edge (C_i subset of M_i).
void validate_subset(const ConstraintGraph& g, const SensingGraph& s);

// Edge clause: 1 iff the endpoint colors differ. Symmetric in the edge
// orientation.
int clause(const Assignment& x, std::pair<int, int> edge);

// True iff every edge clause evaluates to 1 (vacuously true when there are
// no edges).
bool is_proper_coloring(const ConstraintGraph& g, const Assignment& x);

// Vertices i with some sensed source j in C_i sharing i's color, ascending.
// A vertex with empty C_i is never unsatisfied (min over the empty set is 1).
std::vector<int> unsatisfied_set(const SensingGraph& s, const Assignment& x);

// Equivalent to unsatisfied_set(s, x).empty() without materializing the set.
bool restricted_satisfied(const SensingGraph& s, const Assignment& x);

struct ConditionAResult {
    bool holds = true;
    std::vector<std::pair<int, int>> uncovered;  // undirected edges, i < j

    explicit operator bool() const { return holds; }
};

// Condition (A): every undirected constraint edge appears in C in at least
// one direction. Returns the uncovered edges when it fails.
ConditionAResult check_condition_a(const ConstraintGraph& g, const SensingGraph& s);

// Test oracle: under condition (A), satisfaction with sensing restrictions
// coincides with proper coloring. Computes both predicates independently,
// throws std::logic_error if they ever disagree, and returns their common
// value. Throws std::invalid_argument when condition (A) does not hold.
bool restricted_equals_full(const ConstraintGraph& g, const SensingGraph& s,
                            const Assignment& x);

}  // namespace cfl
