#include "cfl/graphs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cfl {

namespace {

void check_vertex(int v, int n, const char* what) {
    if (v < 0 || v >= n)
        throw std::out_of_range(std::string(what) + " index " + std::to_string(v) +
                                " outside [0, " + std::to_string(n) + ")");
}

// Sorted insert; returns false if already present.
bool insert_unique(std::vector<int>& list, int v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it != list.end() && *it == v) return false;
    list.insert(it, v);
    return true;
}

bool contains(const std::vector<int>& list, int v) {
    return std::binary_search(list.begin(), list.end(), v);
}

}  // namespace

Palette::Palette(int d) : n_colors(d) {
    if (d < 1) throw std::invalid_argument("palette needs at least one color");
}

ConstraintGraph::ConstraintGraph(int n_vertices) : n_(n_vertices) {
    if (n_vertices < 0) throw std::invalid_argument("negative vertex count");
    adj_.resize(static_cast<std::size_t>(n_));
}

void ConstraintGraph::add_edge(int i, int j) {
    check_vertex(i, n_, "vertex");
    check_vertex(j, n_, "vertex");
    if (i == j) throw std::invalid_argument("self-loop (" + std::to_string(i) + ")");
    if (insert_unique(adj_[i], j)) {
        insert_unique(adj_[j], i);
        ++n_undirected_;
    }
}

const std::vector<int>& ConstraintGraph::neighbors(int i) const {
    check_vertex(i, n_, "vertex");
    return adj_[i];
}

bool ConstraintGraph::has_edge(int i, int j) const {
    check_vertex(i, n_, "vertex");
    check_vertex(j, n_, "vertex");
    return contains(adj_[i], j);
}

std::vector<std::pair<int, int>> ConstraintGraph::undirected_edges() const {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n_undirected_);
    for (int i = 0; i < n_; ++i)
        for (int j : adj_[i])
            if (i < j) edges.emplace_back(i, j);
    return edges;
}

SensingGraph::SensingGraph(int n_vertices) : n_(n_vertices) {
    if (n_vertices < 0) throw std::invalid_argument("negative vertex count");
    in_.resize(static_cast<std::size_t>(n_));
    out_.resize(static_cast<std::size_t>(n_));
}

void SensingGraph::add_sense(int source, int target) {
    check_vertex(source, n_, "vertex");
    check_vertex(target, n_, "vertex");
    if (source == target)
        throw std::invalid_argument("self-loop (" + std::to_string(source) + ")");
    if (insert_unique(in_[target], source)) {
        insert_unique(out_[source], target);
        ++n_directed_;
    }
}

const std::vector<int>& SensingGraph::sources_of(int i) const {
    check_vertex(i, n_, "vertex");
    return in_[i];
}

const std::vector<int>& SensingGraph::targets_of(int j) const {
    check_vertex(j, n_, "vertex");
    return out_[j];
}

bool SensingGraph::has_edge(int source, int target) const {
    check_vertex(source, n_, "vertex");
    check_vertex(target, n_, "vertex");
    return contains(in_[target], source);
}

SensingGraph full_sensing(const ConstraintGraph& g) {
    SensingGraph s(g.n_vertices());
    for (int i = 0; i < g.n_vertices(); ++i)
        for (int j : g.neighbors(i)) s.add_sense(i, j);
    return s;
}

ConstraintGraph symmetric_closure(const SensingGraph& s) {
    ConstraintGraph g(s.n_vertices());
    for (int i = 0; i < s.n_vertices(); ++i)
        for (int j : s.sources_of(i)) g.add_edge(j, i);
    return g;
}

void validate_subset(const ConstraintGraph& g, const SensingGraph& s) {
    if (g.n_vertices() != s.n_vertices())
        throw std::invalid_argument("constraint and sensing graphs differ in size");
    for (int i = 0; i < s.n_vertices(); ++i)
        for (int j : s.sources_of(i))
            if (!g.has_edge(j, i))
                throw std::invalid_argument("sensing edge (" + std::to_string(j) +
                                            " -> " + std::to_string(i) +
                                            ") has no constraint edge");
}

int clause(const Assignment& x, std::pair<int, int> edge) {
    check_vertex(edge.first, x.size(), "vertex");
    check_vertex(edge.second, x.size(), "vertex");
    return x.colors[edge.first] != x.colors[edge.second] ? 1 : 0;
}

bool is_proper_coloring(const ConstraintGraph& g, const Assignment& x) {
    if (x.size() != g.n_vertices())
        throw std::invalid_argument("assignment length does not match graph");
    for (int i = 0; i < g.n_vertices(); ++i)
        for (int j : g.neighbors(i))
            if (x.colors[i] == x.colors[j]) return false;
    return true;
}

std::vector<int> unsatisfied_set(const SensingGraph& s, const Assignment& x) {
    if (x.size() != s.n_vertices())
        throw std::invalid_argument("assignment length does not match graph");
    std::vector<int> out;
    for (int i = 0; i < s.n_vertices(); ++i)
        for (int j : s.sources_of(i))
            if (x.colors[j] == x.colors[i]) {
                out.push_back(i);
                break;
            }
    return out;
}

bool restricted_satisfied(const SensingGraph& s, const Assignment& x) {
    if (x.size() != s.n_vertices())
        throw std::invalid_argument("assignment length does not match graph");
    for (int i = 0; i < s.n_vertices(); ++i)
        for (int j : s.sources_of(i))
            if (x.colors[j] == x.colors[i]) return false;
    return true;
}

ConditionAResult check_condition_a(const ConstraintGraph& g, const SensingGraph& s) {
    validate_subset(g, s);
    ConditionAResult r;
    for (auto [i, j] : g.undirected_edges())
        if (!s.has_edge(i, j) && !s.has_edge(j, i)) r.uncovered.emplace_back(i, j);
    r.holds = r.uncovered.empty();
    return r;
}

bool restricted_equals_full(const ConstraintGraph& g, const SensingGraph& s,
                            const Assignment& x) {
    if (!check_condition_a(g, s).holds)
        throw std::invalid_argument("condition (A) does not hold");
    bool restricted = restricted_satisfied(s, x);
    bool full = is_proper_coloring(g, x);
    if (restricted != full)
        throw std::logic_error("restricted satisfaction disagrees with proper coloring");
    return restricted;
}

}  // namespace cfl
