#include <sstream>
#include <stdexcept>

#include "cfl/graph_io.hpp"
#include "cfl/graphs.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfl;

TEST_CASE("palette requires at least one color") {
    CHECK_THROWS_AS(Palette(0), std::invalid_argument);
    CHECK_THROWS_AS(Palette(-3), std::invalid_argument);
    CHECK(Palette(4).n_colors == 4);
}

TEST_CASE("constraint graph basics") {
    ConstraintGraph g(4);
    g.add_edge(2, 0);
    g.add_edge(0, 3);
    g.add_edge(0, 2);  // duplicate, reversed
    CHECK(g.n_vertices() == 4);
    CHECK(g.n_edges() == 2);
    CHECK((g.neighbors(0) == std::vector<int>{2, 3}));
    CHECK(g.has_edge(3, 0));
    CHECK_FALSE(g.has_edge(1, 2));
    CHECK((g.undirected_edges() == std::vector<std::pair<int, int>>{{0, 2}, {0, 3}}));

    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 4), std::out_of_range);
    CHECK_THROWS_AS(g.add_edge(-1, 0), std::out_of_range);
    CHECK_THROWS_AS(g.neighbors(4), std::out_of_range);
    CHECK_THROWS_AS(ConstraintGraph(-1), std::invalid_argument);
}

TEST_CASE("sensing graph basics") {
    SensingGraph s(3);
    s.add_sense(0, 2);
    s.add_sense(1, 2);
    s.add_sense(0, 2);  // duplicate
    CHECK(s.n_edges() == 2);
    CHECK((s.sources_of(2) == std::vector<int>{0, 1}));
    CHECK(s.targets_of(0) == std::vector<int>{2});
    CHECK(s.has_edge(0, 2));
    CHECK_FALSE(s.has_edge(2, 0));

    CHECK_THROWS_AS(s.add_sense(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(s.add_sense(3, 0), std::out_of_range);
    CHECK_THROWS_AS(s.sources_of(-1), std::out_of_range);
}

TEST_CASE("full sensing and symmetric closure invert each other") {
    auto fix = oracle::two_scc_fixture();
    SensingGraph both = full_sensing(fix.g);
    for (auto [i, j] : fix.g.undirected_edges()) {
        CHECK(both.has_edge(i, j));
        CHECK(both.has_edge(j, i));
    }
    CHECK(both.n_edges() == 2 * fix.g.n_edges());

    ConstraintGraph m = symmetric_closure(fix.c);
    CHECK(m.undirected_edges() == fix.g.undirected_edges());
}

TEST_CASE("validate_subset rejects sensing edges outside the constraints") {
    ConstraintGraph g(3);
    g.add_edge(0, 1);
    SensingGraph s(3);
    s.add_sense(0, 1);
    CHECK_NOTHROW(validate_subset(g, s));
    s.add_sense(2, 1);
    CHECK_THROWS_AS(validate_subset(g, s), std::invalid_argument);
}

TEST_CASE("clause is symmetric in the edge orientation") {
    Assignment x(std::vector<Color>{0, 0, 1});
    CHECK(clause(x, {0, 1}) == 0);
    CHECK(clause(x, {1, 0}) == 0);
    CHECK(clause(x, {0, 2}) == 1);
    CHECK(clause(x, {2, 0}) == 1);
}

TEST_CASE("unsatisfied set follows the sensed direction only") {
    // One edge 0-1, sensed only as 0 -> 1: on a conflict, vertex 1 is the
    // only one that notices.
    ConstraintGraph g(2);
    g.add_edge(0, 1);
    SensingGraph s(2);
    s.add_sense(0, 1);

    Assignment same(std::vector<Color>{2, 2});
    CHECK(unsatisfied_set(s, same) == std::vector<int>{1});
    CHECK_FALSE(restricted_satisfied(s, same));
    CHECK_FALSE(is_proper_coloring(g, same));

    Assignment diff(std::vector<Color>{2, 3});
    CHECK(unsatisfied_set(s, diff).empty());
    CHECK(restricted_satisfied(s, diff));
    CHECK(is_proper_coloring(g, diff));
}

TEST_CASE("vacuous satisfaction on edgeless graphs") {
    ConstraintGraph g(3);
    SensingGraph s(3);
    Assignment x(std::vector<Color>{0, 0, 0});
    CHECK(is_proper_coloring(g, x));
    CHECK(restricted_satisfied(s, x));
}

TEST_CASE("condition (A) reports uncovered edges") {
    auto fix = oracle::two_scc_fixture();
    CHECK(check_condition_a(fix.g, fix.c).holds);

    // drop all sensing of edge (0,1)
    SensingGraph partial(7);
    for (int i = 0; i < 7; ++i)
        for (int j : fix.c.targets_of(i))
            if (!((i == 0 && j == 1) || (i == 1 && j == 0))) partial.add_sense(i, j);
    auto res = check_condition_a(fix.g, partial);
    CHECK_FALSE(res.holds);
    CHECK((res.uncovered == std::vector<std::pair<int, int>>{{0, 1}}));
    CHECK_FALSE(static_cast<bool>(res));
}

TEST_CASE("restricted satisfaction equals proper coloring under condition (A)") {
    // sampled graphs and covers, but every assignment with up to 3 colors
    SplitMix64 rng(4242);
    long checked = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const int n = 1 + static_cast<int>(rng.next_below(6));
        auto g = oracle::random_graph(n, 0.5, rng);
        auto s = oracle::random_cover(g, rng);
        for (int d = 1; d <= 3; ++d) {
            std::vector<Color> colors(n, 0);
            for (;;) {
                Assignment x(colors);
                // throws std::logic_error on any disagreement
                restricted_equals_full(g, s, x);
                ++checked;
                int k = 0;
                while (k < n && colors[k] == d - 1) colors[k++] = 0;
                if (k == n) break;
                ++colors[k];
            }
        }
    }
    CHECK(checked > 10000);
}

TEST_CASE("restricted_equals_full rejects inputs without condition (A)") {
    ConstraintGraph g(2);
    g.add_edge(0, 1);
    SensingGraph s(2);  // edge unsensed
    Assignment x(std::vector<Color>{0, 1});
    CHECK_THROWS_AS(restricted_equals_full(g, s, x), std::invalid_argument);
}

// --- file format -------------------------------------------------------------

TEST_CASE("graph file round-trip") {
    auto fix = oracle::two_scc_fixture();
    std::ostringstream out;
    write_graph(out, fix.g, fix.c, Palette(4));

    std::istringstream in(out.str());
    GraphFile back = parse_graph(in);
    CHECK(back.palette.n_colors == 4);
    CHECK(back.constraints.undirected_edges() == fix.g.undirected_edges());
    CHECK(back.sensing.n_edges() == fix.c.n_edges());
    for (int i = 0; i < 7; ++i) CHECK(back.sensing.sources_of(i) == fix.c.sources_of(i));
}

TEST_CASE("parser accepts comments and blank lines") {
    std::istringstream in(
        "# interference instance\n"
        "\n"
        "graph 3 2   # header\n"
        "edge 0 1\n"
        "  edge 1 2  # chains\n"
        "sense 0 1\n"
        "sense 2 1\n");
    GraphFile f = parse_graph(in);
    CHECK(f.constraints.n_vertices() == 3);
    CHECK(f.palette.n_colors == 2);
    CHECK(f.constraints.n_edges() == 2);
    CHECK((f.sensing.sources_of(1) == std::vector<int>{0, 2}));
}

static int parse_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_graph(in);
    } catch (const parse_error& e) {
        return e.line();
    }
    return -1;
}

TEST_CASE("parser reports the offending line") {
    CHECK(parse_error_line("edge 0 1\n") == 1);                          // header missing
    CHECK(parse_error_line("graph 2 2\ngraph 2 2\n") == 2);              // duplicate header
    CHECK(parse_error_line("graph 2\n") == 1);                           // malformed header
    CHECK(parse_error_line("graph -1 2\n") == 1);                        // negative size
    CHECK(parse_error_line("graph 2 0\n") == 1);                         // empty palette
    CHECK(parse_error_line("graph 2 2\nedge 0 2\n") == 2);               // vertex out of range
    CHECK(parse_error_line("graph 2 2\nedge 0 0\n") == 2);               // self loop
    CHECK(parse_error_line("graph 2 2\nedge 0 1 9\n") == 2);             // trailing tokens
    CHECK(parse_error_line("graph 2 2\nlink 0 1\n") == 2);               // unknown keyword
    CHECK(parse_error_line("graph 2 2\nedge 0 1\nsense 0 1 1\n") == 3);  // trailing tokens
    CHECK(parse_error_line("graph 3 2\nedge 0 1\nsense 1 2\n") == 3);    // sense outside M
    CHECK(parse_error_line("graph 2 2\nedge zero 1\n") == 2);            // non-numeric
}

TEST_CASE("empty graph file is valid") {
    std::istringstream in("graph 0 1\n");
    GraphFile f = parse_graph(in);
    CHECK(f.constraints.n_vertices() == 0);
    CHECK(f.sensing.n_vertices() == 0);
}

TEST_CASE("writer emits a canonical layout") {
    ConstraintGraph g(3);
    g.add_edge(2, 1);
    g.add_edge(0, 2);
    SensingGraph s(3);
    s.add_sense(2, 0);
    s.add_sense(1, 2);
    std::ostringstream out;
    write_graph(out, g, s, Palette(3));
    CHECK(out.str() ==
          "graph 3 3\n"
          "edge 0 2\n"
          "edge 1 2\n"
          "sense 2 0\n"
          "sense 1 2\n");
}

TEST_CASE("file io errors carry the path") {
    CHECK_THROWS_AS(read_graph_file("/nonexistent/toto.graph"), io_error);
    try {
        read_graph_file("/nonexistent/toto.graph");
    } catch (const io_error& e) {
        CHECK(e.path() == "/nonexistent/toto.graph");
    }
}
