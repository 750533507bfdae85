#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfl/graphs.hpp"

namespace cfl {

struct PathLossModel {
    enum class Kind { three_gpp_indoor, exponent };

    Kind kind = Kind::three_gpp_indoor;
    double frequency_ghz = 2.412;  // three_gpp_indoor only
    double alpha = 4.3;            // exponent only

    static PathLossModel three_gpp(double frequency_ghz);
    static PathLossModel exponent(double alpha);
};

// three_gpp_indoor: 43.3*log10(d) + 11.5 + 20*log10(f); exponent: 10*alpha*log10(d).
double path_loss_db(const PathLossModel& model, double distance_m);

// Largest d with tx_power - path_loss_db(d) >= threshold; 0 when no positive
// distance qualifies.
double coverage_radius(const PathLossModel& model, double tx_power_dbm, double threshold_dbm);

struct Node {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // carried through from input files, ignored by the planar model
    double tx_power_dbm = 0.0;
    double threshold_dbm = 0.0;
};

double planar_distance(const Node& a, const Node& b);

struct DbmConfig {
    double intensity = 0.5;     // nodes per m^2
    double area_side = 10.0;    // square side, meters
    std::vector<double> power_set = {12.0, 14.0, 16.0, 18.0, 20.0};  // dBm
    double detection_threshold = -25.0;  // dBm
    double frequency_ghz = 2.412;
    std::uint64_t seed = 0;

    void validate() const;
};

struct DbmInstance {
    ConstraintGraph constraints{0};  // symmetric closure of sensing
    SensingGraph sensing{0};
    std::vector<Node> nodes;
    std::vector<double> radii;  // coverage radius per node
};

// Directed Boolean Model: Poisson(intensity * area) points placed uniformly,
// powers drawn from power_set, directed edge y->z whenever z falls inside y's
// coverage ball.
DbmInstance generate_dbm(const DbmConfig& cfg);

enum class SensingMode { channel, tdma };

struct InterferenceGraphs {
    ConstraintGraph constraints{0};
    SensingGraph sensing{0};
};

// Directed edge (j -> i) iff tx_power(j) - path_loss(dist(j,i)) >= threshold(i).
// Both modes reduce to this pairwise rule for point nodes; the enum records
// which medium the thresholds were calibrated for. Coincident nodes get a
// forced edge plus a warning on stderr.
InterferenceGraphs build_interference_graph(const std::vector<Node>& nodes,
                                            const PathLossModel& model, SensingMode mode);

struct IngestConfig {
    std::vector<double> power_set = {12.0, 14.0, 16.0, 18.0, 20.0};  // dBm
    double detection_threshold = -45.0;  // dBm, applied to every node
    std::uint64_t seed = 0;
};

// Reads whitespace-separated "x y z" rows (meters); '#' comments and blank
// lines are skipped. Powers are drawn uniformly from cfg.power_set.
std::vector<Node> ingest_xyz(const std::string& path, const IngestConfig& cfg);

}  // namespace cfl
