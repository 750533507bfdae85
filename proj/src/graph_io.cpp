#include "cfl/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace cfl {

namespace {

bool vertex_ok(int v, int n) { return v >= 0 && v < n; }

}  // namespace

GraphFile parse_graph(std::istream& in) {
    GraphFile file;
    bool have_header = false;
    std::vector<std::pair<int, std::pair<int, int>>> senses;  // (line, (source, target))

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::string keyword;
        if (!(line >> keyword)) continue;

        if (keyword == "graph") {
            if (have_header) throw parse_error("duplicate graph header", line_no);
            int n = 0, d = 0;
            if (!(line >> n >> d)) throw parse_error("malformed graph header", line_no);
            if (n < 0) throw parse_error("negative vertex count", line_no);
            if (d < 1) throw parse_error("palette must have at least one color", line_no);
            file.constraints = ConstraintGraph(n);
            file.sensing = SensingGraph(n);
            file.palette = Palette(d);
            have_header = true;
        } else if (keyword == "edge" || keyword == "sense") {
            if (!have_header) throw parse_error("edge before graph header", line_no);
            int a = 0, b = 0;
            if (!(line >> a >> b)) throw parse_error("malformed " + keyword + " line", line_no);
            const int n = file.constraints.n_vertices();
            if (!vertex_ok(a, n) || !vertex_ok(b, n))
                throw parse_error("vertex index out of range", line_no);
            if (a == b) throw parse_error("self-loop not allowed", line_no);
            if (keyword == "edge")
                file.constraints.add_edge(a, b);
            else
                senses.push_back({line_no, {a, b}});
        } else {
            throw parse_error("unknown keyword '" + keyword + "'", line_no);
        }

        std::string trailing;
        if (line >> trailing) throw parse_error("trailing tokens on line", line_no);
    }
    if (!have_header) throw parse_error("missing graph header", line_no);

    for (const auto& [at_line, edge] : senses) {
        if (!file.constraints.has_edge(edge.first, edge.second))
            throw parse_error("sensing edge not present in constraint set", at_line);
        file.sensing.add_sense(edge.first, edge.second);
    }
    return file;
}

GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open graph file", path);
    return parse_graph(in);
}

void write_graph(std::ostream& out, const ConstraintGraph& g, const SensingGraph& s,
                 const Palette& palette) {
    if (g.n_vertices() != s.n_vertices())
        throw std::invalid_argument("graph sizes do not match");
    out << "graph " << g.n_vertices() << ' ' << palette.n_colors << '\n';
    for (const auto& [i, j] : g.undirected_edges()) out << "edge " << i << ' ' << j << '\n';
    for (int i = 0; i < s.n_vertices(); ++i)
        for (int j : s.sources_of(i)) out << "sense " << j << ' ' << i << '\n';
}

void write_graph_file(const std::string& path, const ConstraintGraph& g, const SensingGraph& s,
                      const Palette& palette) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open output file", path);
    write_graph(out, g, s, palette);
    if (!out) throw io_error("write failed", path);
}

}  // namespace cfl
