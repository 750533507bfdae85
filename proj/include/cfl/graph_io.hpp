#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "cfl/graphs.hpp"

namespace cfl {

class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

class io_error : public std::runtime_error {
  public:
    io_error(const std::string& msg, const std::string& path)
        : std::runtime_error(msg + ": " + path), path_(path) {}

    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct GraphFile {
    ConstraintGraph constraints{0};
    SensingGraph sensing{0};
    Palette palette;
};

// Text format, one record per line, '#' starts a comment:
//   graph <N> <D>     header, required first
//   edge <i> <j>      undirected constraint edge
//   sense <j> <i>     directed sensing edge from j into i
GraphFile parse_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const ConstraintGraph& g, const SensingGraph& s,
                 const Palette& palette);
void write_graph_file(const std::string& path, const ConstraintGraph& g, const SensingGraph& s,
                      const Palette& palette);

}  // namespace cfl
