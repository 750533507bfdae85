#include "cfl/connectivity.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cfl {

SccDecomposition scc_decompose(const SensingGraph& s) {
    const int n = s.n_vertices();
    SccDecomposition dec;
    dec.component_of.assign(n, -1);

    // Tarjan with an explicit stack; emits components in reverse topological
    // order, flipped below.
    std::vector<int> index(n, -1), lowlink(n, 0);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::pair<int, int>> dfs;  // (vertex, next out-edge position)
    int next_index = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        dfs.emplace_back(root, 0);
        while (!dfs.empty()) {
            const int v = dfs.back().first;
            const int ci = dfs.back().second;
            if (ci == 0) {
                index[v] = lowlink[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            const auto& out = s.targets_of(v);
            if (ci < static_cast<int>(out.size())) {
                dfs.back().second = ci + 1;
                const int w = out[ci];
                if (index[w] == -1)
                    dfs.emplace_back(w, 0);
                else if (on_stack[w])
                    lowlink[v] = std::min(lowlink[v], index[w]);
            } else {
                if (lowlink[v] == index[v]) {
                    std::vector<int> comp;
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        dec.component_of[w] = static_cast<int>(dec.components.size());
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    dec.components.push_back(std::move(comp));
                }
                dfs.pop_back();
                if (!dfs.empty()) {
                    const int parent = dfs.back().first;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }

    const int p = dec.n_components();
    std::reverse(dec.components.begin(), dec.components.end());
    for (int& c : dec.component_of) c = p - 1 - c;

    for (int v = 0; v < n; ++v)
        for (int w : s.targets_of(v))
            if (dec.component_of[v] != dec.component_of[w])
                dec.condensation_edges.emplace_back(dec.component_of[v], dec.component_of[w]);
    std::sort(dec.condensation_edges.begin(), dec.condensation_edges.end());
    dec.condensation_edges.erase(
        std::unique(dec.condensation_edges.begin(), dec.condensation_edges.end()),
        dec.condensation_edges.end());
    return dec;
}

bool is_strongly_connected(const SensingGraph& s) {
    if (s.n_vertices() < 1) throw std::invalid_argument("empty graph");
    return scc_decompose(s).n_components() == 1;
}

int component_in_degree(const SensingGraph& s, const SccDecomposition& dec, int k) {
    if (k < 0 || k >= dec.n_components()) throw std::out_of_range("component id out of range");
    std::set<int> sources;
    for (int v : dec.components[k])
        for (int j : s.sources_of(v))
            if (dec.component_of[j] != k) sources.insert(j);
    return static_cast<int>(sources.size());
}

int ChromaticResult::chi() const {
    if (!exact) throw std::logic_error("chromatic number not resolved within budget");
    return upper;
}

namespace {

// Local view of one induced subgraph: adjacency lists over 0..m-1, sorted.
struct LocalGraph {
    std::vector<std::vector<int>> adj;

    int size() const { return static_cast<int>(adj.size()); }
    bool adjacent(int u, int v) const {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }
};

int greedy_clique_bound(const LocalGraph& lg) {
    const int m = lg.size();
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return lg.adj[a].size() != lg.adj[b].size() ? lg.adj[a].size() > lg.adj[b].size()
                                                    : a < b;
    });
    int best = 1;
    const int seeds = std::min(m, 16);
    for (int si = 0; si < seeds; ++si) {
        std::vector<int> clique{order[si]};
        for (int v : order) {
            if (v == order[si]) continue;
            bool ok = true;
            for (int u : clique)
                if (!lg.adjacent(u, v)) {
                    ok = false;
                    break;
                }
            if (ok) clique.push_back(v);
        }
        best = std::max(best, static_cast<int>(clique.size()));
    }
    return best;
}

int dsatur_upper(const LocalGraph& lg) {
    const int m = lg.size();
    std::vector<int> color(m, -1);
    std::vector<std::set<int>> neighbor_colors(m);
    for (int step = 0; step < m; ++step) {
        int pick = -1;
        for (int v = 0; v < m; ++v) {
            if (color[v] != -1) continue;
            if (pick == -1 || neighbor_colors[v].size() > neighbor_colors[pick].size() ||
                (neighbor_colors[v].size() == neighbor_colors[pick].size() &&
                 lg.adj[v].size() > lg.adj[pick].size()))
                pick = v;
        }
        int c = 0;
        while (neighbor_colors[pick].count(c)) ++c;
        color[pick] = c;
        for (int w : lg.adj[pick])
            if (color[w] == -1) neighbor_colors[w].insert(c);
    }
    return *std::max_element(color.begin(), color.end()) + 1;
}

enum class Tri { yes, no, unknown };

// Saturation-first branch and bound for k-colorability. budget counts branch
// nodes and is shared across calls.
struct KColorSearch {
    const LocalGraph& lg;
    int k;
    long long& budget;
    std::vector<int> color;
    std::vector<std::set<int>> neighbor_colors;

    KColorSearch(const LocalGraph& g, int k_, long long& budget_)
        : lg(g), k(k_), budget(budget_), color(g.size(), -1), neighbor_colors(g.size()) {}

    Tri go(int n_colored, int n_used) {
        if (n_colored == lg.size()) return Tri::yes;
        if (budget <= 0) return Tri::unknown;

        int pick = -1;
        for (int v = 0; v < lg.size(); ++v) {
            if (color[v] != -1) continue;
            if (pick == -1 || neighbor_colors[v].size() > neighbor_colors[pick].size() ||
                (neighbor_colors[v].size() == neighbor_colors[pick].size() &&
                 lg.adj[v].size() > lg.adj[pick].size()))
                pick = v;
        }

        bool saw_unknown = false;
        const int c_max = std::min(n_used, k - 1);  // at most one brand-new color
        for (int c = 0; c <= c_max; ++c) {
            if (neighbor_colors[pick].count(c)) continue;
            --budget;
            color[pick] = c;
            std::vector<int> touched;
            for (int w : lg.adj[pick])
                if (color[w] == -1 && neighbor_colors[w].insert(c).second)
                    touched.push_back(w);
            const Tri sub = go(n_colored + 1, std::max(n_used, c + 1));
            for (int w : touched) neighbor_colors[w].erase(c);
            color[pick] = -1;
            if (sub == Tri::yes) return Tri::yes;
            if (sub == Tri::unknown) saw_unknown = true;
        }
        return saw_unknown ? Tri::unknown : Tri::no;
    }
};

Tri k_colorable(const LocalGraph& lg, int k, long long& budget) {
    if (k >= lg.size()) return Tri::yes;
    if (k < 1) return Tri::no;
    KColorSearch search(lg, k, budget);
    return search.go(0, 0);
}

ChromaticResult chi_connected(const LocalGraph& lg, long long& budget) {
    const int m = lg.size();
    bool has_edge = false;
    for (int v = 0; v < m && !has_edge; ++v) has_edge = !lg.adj[v].empty();
    if (!has_edge) return {true, 1, 1};

    int lower = std::max(2, greedy_clique_bound(lg));
    const int upper = dsatur_upper(lg);
    if (lower >= upper) return {true, upper, upper};

    for (int k = lower; k < upper; ++k) {
        switch (k_colorable(lg, k, budget)) {
            case Tri::yes:
                return {true, k, k};
            case Tri::no:
                lower = k + 1;
                break;
            case Tri::unknown:
                return {false, lower, upper};
        }
    }
    return {true, upper, upper};
}

}  // namespace

ChromaticResult chromatic_number(const ConstraintGraph& g, std::span<const int> subset,
                                 long long node_budget) {
    if (subset.empty()) throw std::invalid_argument("empty vertex subset");
    std::vector<int> local_of(g.n_vertices(), -1);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const int v = subset[i];
        if (v < 0 || v >= g.n_vertices()) throw std::out_of_range("subset vertex out of range");
        if (local_of[v] != -1) throw std::invalid_argument("duplicate vertex in subset");
        local_of[v] = static_cast<int>(i);
    }

    const int m = static_cast<int>(subset.size());
    LocalGraph lg;
    lg.adj.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int w : g.neighbors(subset[i]))
            if (local_of[w] != -1) lg.adj[i].push_back(local_of[w]);
        std::sort(lg.adj[i].begin(), lg.adj[i].end());
    }

    // Independent connected pieces color independently; chi is the max.
    std::vector<int> piece(m, -1);
    int n_pieces = 0;
    std::vector<int> queue;
    for (int v = 0; v < m; ++v) {
        if (piece[v] != -1) continue;
        piece[v] = n_pieces;
        queue.assign(1, v);
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            for (int w : lg.adj[u])
                if (piece[w] == -1) {
                    piece[w] = n_pieces;
                    queue.push_back(w);
                }
        }
        ++n_pieces;
    }

    ChromaticResult result{true, 1, 1};
    long long budget = node_budget;
    for (int p = 0; p < n_pieces; ++p) {
        std::vector<int> members;
        for (int v = 0; v < m; ++v)
            if (piece[v] == p) members.push_back(v);
        LocalGraph sub;
        sub.adj.resize(members.size());
        std::vector<int> sub_of(m, -1);
        for (std::size_t i = 0; i < members.size(); ++i) sub_of[members[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (int w : lg.adj[members[i]]) sub.adj[i].push_back(sub_of[w]);
        for (auto& row : sub.adj) std::sort(row.begin(), row.end());

        const ChromaticResult piece_result = chi_connected(sub, budget);
        result.exact = result.exact && piece_result.exact;
        result.lower = std::max(result.lower, piece_result.lower);
        result.upper = std::max(result.upper, piece_result.upper);
    }
    if (!result.exact && result.lower == result.upper) result.exact = true;
    return result;
}

ChromaticResult chromatic_number(const ConstraintGraph& g, long long node_budget) {
    if (g.n_vertices() == 0) return {true, 0, 0};  // zero colors color nothing
    std::vector<int> all(g.n_vertices());
    for (int v = 0; v < g.n_vertices(); ++v) all[v] = v;
    return chromatic_number(g, all, node_budget);
}

Theorem2Result check_theorem2(const ConstraintGraph& g, const SensingGraph& s,
                              const Palette& palette, long long node_budget) {
    if (g.n_vertices() != s.n_vertices())
        throw std::invalid_argument("graph sizes do not match");
    Theorem2Result result;
    result.scc = scc_decompose(s);

    bool any_fail = false, any_unknown = false;
    for (int k = 0; k < result.scc.n_components(); ++k) {
        ComponentReport report;
        report.id = k;
        report.size = static_cast<int>(result.scc.components[k].size());
        report.in_degree = component_in_degree(s, result.scc, k);
        report.chromatic = chromatic_number(g, result.scc.components[k], node_budget);

        const int threshold = palette.n_colors - report.in_degree;
        if (report.chromatic.upper <= threshold)
            report.eligible = Verdict::satisfied;
        else if (report.chromatic.lower > threshold)
            report.eligible = Verdict::not_satisfied;
        else
            report.eligible = Verdict::inconclusive;

        any_fail = any_fail || report.eligible == Verdict::not_satisfied;
        any_unknown = any_unknown || report.eligible == Verdict::inconclusive;
        result.components.push_back(std::move(report));
    }
    result.overall = any_fail ? Verdict::not_satisfied
                    : any_unknown ? Verdict::inconclusive
                                  : Verdict::satisfied;
    return result;
}

std::vector<std::uint8_t> node_eligibility(const ConstraintGraph& g, const SensingGraph& s,
                                           const Palette& palette, long long node_budget) {
    const Theorem2Result t2 = check_theorem2(g, s, palette, node_budget);

    std::vector<std::uint8_t> component_ok(t2.scc.n_components(), 0);
    for (const ComponentReport& report : t2.components)
        component_ok[report.id] = report.eligible == Verdict::satisfied;

    // An unsensed edge poisons the components at both of its endpoints.
    for (const auto& [u, v] : check_condition_a(g, s).uncovered) {
        component_ok[t2.scc.component_of[u]] = 0;
        component_ok[t2.scc.component_of[v]] = 0;
    }

    std::vector<std::uint8_t> eligible(g.n_vertices());
    for (int v = 0; v < g.n_vertices(); ++v)
        eligible[v] = component_ok[t2.scc.component_of[v]];
    return eligible;
}

}  // namespace cfl
