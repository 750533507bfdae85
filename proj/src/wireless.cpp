#include "cfl/wireless.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "cfl/graph_io.hpp"
#include "cfl/rng.hpp"

namespace cfl {

PathLossModel PathLossModel::three_gpp(double frequency_ghz) {
    if (!(frequency_ghz > 0.0)) throw std::invalid_argument("frequency must be positive");
    PathLossModel model;
    model.kind = Kind::three_gpp_indoor;
    model.frequency_ghz = frequency_ghz;
    return model;
}

PathLossModel PathLossModel::exponent(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    PathLossModel model;
    model.kind = Kind::exponent;
    model.alpha = alpha;
    return model;
}

double path_loss_db(const PathLossModel& model, double distance_m) {
    if (!(distance_m > 0.0)) throw std::domain_error("distance must be positive");
    if (model.kind == PathLossModel::Kind::three_gpp_indoor)
        return 43.3 * std::log10(distance_m) + 11.5 + 20.0 * std::log10(model.frequency_ghz);
    return 10.0 * model.alpha * std::log10(distance_m);
}

double coverage_radius(const PathLossModel& model, double tx_power_dbm, double threshold_dbm) {
    const double budget = tx_power_dbm - threshold_dbm;  // loss we can absorb
    double d;
    if (model.kind == PathLossModel::Kind::three_gpp_indoor)
        d = std::pow(10.0, (budget - 11.5 - 20.0 * std::log10(model.frequency_ghz)) / 43.3);
    else
        d = std::pow(10.0, budget / (10.0 * model.alpha));
    return std::isfinite(d) && d > 0.0 ? d : 0.0;
}

double planar_distance(const Node& a, const Node& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void DbmConfig::validate() const {
    if (!(intensity > 0.0)) throw std::invalid_argument("intensity must be positive");
    if (!(area_side > 0.0)) throw std::invalid_argument("area side must be positive");
    if (power_set.empty()) throw std::invalid_argument("power set must be nonempty");
    if (!(frequency_ghz > 0.0)) throw std::invalid_argument("frequency must be positive");
}

DbmInstance generate_dbm(const DbmConfig& cfg) {
    cfg.validate();
    SplitMix64 rng(cfg.seed);
    const PathLossModel model = PathLossModel::three_gpp(cfg.frequency_ghz);

    const int n = rng.poisson(cfg.intensity * cfg.area_side * cfg.area_side);
    DbmInstance inst;
    inst.nodes.reserve(n);
    inst.radii.reserve(n);
    for (int i = 0; i < n; ++i) {
        Node node;
        node.x = rng.next_double() * cfg.area_side;
        node.y = rng.next_double() * cfg.area_side;
        node.tx_power_dbm = cfg.power_set[rng.next_below(cfg.power_set.size())];
        node.threshold_dbm = cfg.detection_threshold;
        inst.nodes.push_back(node);
        inst.radii.push_back(coverage_radius(model, node.tx_power_dbm, cfg.detection_threshold));
    }

    inst.sensing = SensingGraph(n);
    for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
            if (y != z && planar_distance(inst.nodes[y], inst.nodes[z]) <= inst.radii[y])
                inst.sensing.add_sense(y, z);
    inst.constraints = symmetric_closure(inst.sensing);
    return inst;
}

InterferenceGraphs build_interference_graph(const std::vector<Node>& nodes,
                                            const PathLossModel& model, SensingMode mode) {
    (void)mode;  // channel and tdma share the pairwise power-threshold rule
    const int n = static_cast<int>(nodes.size());
    InterferenceGraphs out{ConstraintGraph(n), SensingGraph(n)};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            const double d = planar_distance(nodes[j], nodes[i]);
            if (d == 0.0) {
                std::cerr << "warning: nodes " << j << " and " << i
                          << " are coincident; forcing interference edge\n";
                out.sensing.add_sense(j, i);
            } else if (nodes[j].tx_power_dbm - path_loss_db(model, d) >= nodes[i].threshold_dbm) {
                out.sensing.add_sense(j, i);
            }
        }
    out.constraints = symmetric_closure(out.sensing);
    return out;
}

std::vector<Node> ingest_xyz(const std::string& path, const IngestConfig& cfg) {
    if (cfg.power_set.empty()) throw std::invalid_argument("power set must be nonempty");
    std::ifstream in(path);
    if (!in) throw io_error("cannot open coordinate file", path);

    std::vector<Node> nodes;
    SplitMix64 rng(cfg.seed);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::string first;
        if (!(line >> first)) continue;  // blank or comment-only line
        line.clear();
        line.seekg(0);
        Node node;
        if (!(line >> node.x >> node.y >> node.z))
            throw parse_error("expected three numeric coordinates", line_no);
        std::string trailing;
        if (line >> trailing) throw parse_error("trailing tokens on line", line_no);
        node.tx_power_dbm = cfg.power_set[rng.next_below(cfg.power_set.size())];
        node.threshold_dbm = cfg.detection_threshold;
        nodes.push_back(node);
    }
    return nodes;
}

}  // namespace cfl
