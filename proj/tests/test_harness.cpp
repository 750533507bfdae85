#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cfl/graph_io.hpp"
#include "cfl/harness.hpp"
#include "cfl/rng.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace cfl;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& tag) { return "cfl_htest_" + tag + ".tmp"; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Just enough of JSON Schema to check the documented output shape: type,
// properties/required/additionalProperties, items, enum.
bool type_matches(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "boolean") return doc.is_boolean();
    if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
    if (type == "number") return doc.is_number();
    if (type == "null") return doc.is_null();
    throw std::invalid_argument("unknown schema type " + type);
}

bool validate_schema(const json& schema, const json& doc, std::string& why);

bool validate_type(const json& schema, const json& doc, std::string& why) {
    if (!schema.contains("type")) return true;
    const json& t = schema["type"];
    if (t.is_string()) {
        if (type_matches(doc, t.get<std::string>())) return true;
        why = "expected type " + t.get<std::string>() + ", got " + doc.dump();
        return false;
    }
    for (const json& option : t)
        if (type_matches(doc, option.get<std::string>())) return true;
    why = "value " + doc.dump() + " matches none of " + t.dump();
    return false;
}

bool validate_schema(const json& schema, const json& doc, std::string& why) {
    if (!validate_type(schema, doc, why)) return false;
    if (schema.contains("enum")) {
        bool hit = false;
        for (const json& v : schema["enum"]) hit = hit || v == doc;
        if (!hit) {
            why = doc.dump() + " not in enum " + schema["enum"].dump();
            return false;
        }
    }
    if (doc.is_object() && schema.contains("required"))
        for (const json& key : schema["required"])
            if (!doc.contains(key.get<std::string>())) {
                why = "missing required key " + key.get<std::string>();
                return false;
            }
    if (doc.is_object() && schema.contains("properties")) {
        for (auto& [key, sub] : schema["properties"].items())
            if (doc.contains(key) && !validate_schema(sub, doc[key], why)) {
                why = key + ": " + why;
                return false;
            }
        if (schema.value("additionalProperties", true) == false)
            for (auto& [key, value] : doc.items())
                if (!schema["properties"].contains(key)) {
                    why = "unexpected key " + key;
                    return false;
                }
    }
    if (doc.is_array() && schema.contains("items"))
        for (std::size_t i = 0; i < doc.size(); ++i)
            if (!validate_schema(schema["items"], doc[i], why)) {
                why = "item " + std::to_string(i) + ": " + why;
                return false;
            }
    return true;
}

ExperimentConfig small_dbm_config() {
    ExperimentConfig cfg;
    cfg.source = SourceKind::dbm;
    cfg.dbm.intensity = 0.35;
    cfg.dbm.area_side = 6.0;
    cfg.dbm.detection_threshold = -15.0;
    cfg.trials = 8;
    cfg.max_rounds = 30000;
    cfg.palette_rule = PaletteRule::chi_plus(1);
    cfg.master_seed = 4321;
    return cfg;
}

std::string fixture_graph_file() {
    auto fix = oracle::two_scc_fixture();
    std::ostringstream out;
    write_graph(out, fix.g, fix.c, Palette(4));
    const std::string path = temp_path("fixture_graph");
    write_file(path, out.str());
    return path;
}

}  // namespace

TEST_CASE("bound input validation") {
    CHECK_THROWS_AS((BoundInputs{0, 0.5, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BoundInputs{1, 0.0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BoundInputs{1, 1.0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BoundInputs{1, 0.5, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BoundInputs{1, 0.5, 1.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((BoundInputs{3, 0.1, 0.01}.validate()));
}

TEST_CASE("bound calculators match the high-precision table") {
    for (const auto& c : oracle::frozen::bound_cases) {
        BoundInputs in{c.n, c.gamma, 0.5};
        BoundResult t1 = theorem1_bound(in);
        BoundResult c2 = corollary2_bound(in);
        CHECK(oracle::within_ulps(t1.log_value, c.t1_log, 1));
        CHECK(oracle::within_ulps(c2.log_value, c.c2_log, 1));
        REQUIRE(t1.linear_ok);
        REQUIRE(c2.linear_ok);
        CHECK(t1.linear_value == doctest::Approx(c.t1_lin).epsilon(1e-12));
        CHECK(c2.linear_value == doctest::Approx(c.c2_lin).epsilon(1e-12));
    }
}

TEST_CASE("bound overflow falls back to the log domain") {
    BoundInputs in{5, 0.1, 0.5};
    BoundResult t1 = theorem1_bound(in);
    CHECK_FALSE(t1.linear_ok);           // 625 ln 10 is far past double range
    CHECK(t1.log_value > 1400.0);
    CHECK(std::isfinite(t1.log_value));

    BoundResult c2 = corollary2_bound(in);  // 15 ln 10 is fine
    CHECK(c2.linear_ok);
    CHECK(c2.linear_value == doctest::Approx(5.0 * 1e15 * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("palette rules") {
    CHECK_THROWS_AS(PaletteRule::chi_plus(-1), std::invalid_argument);
    CHECK_THROWS_AS(PaletteRule::fixed(0), std::invalid_argument);
    CHECK(PaletteRule::chi_plus(2).offset == 2);
    CHECK(PaletteRule::fixed(7).fixed_d == 7);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg = small_dbm_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_dbm_config();
    cfg.max_rounds = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_dbm_config();
    cfg.a = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_dbm_config();
    cfg.quantiles = {0.5, 1.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_dbm_config();
    cfg.source = SourceKind::file;
    cfg.graph_path.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("experiments are reproducible and schedule-independent") {
    const ExperimentConfig cfg = small_dbm_config();
    ExperimentResult a = run_experiment(cfg);
    ExperimentResult b = run_experiment(cfg);
    ExperimentResult c = run_experiment_serial(cfg);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_csv(a) == to_csv(c));
    CHECK(to_json_text(a) == to_json_text(b));
    CHECK(to_json_text(a) == to_json_text(c));
}

TEST_CASE("per-trial seeds follow the derivation law") {
    const ExperimentConfig cfg = small_dbm_config();
    ExperimentResult res = run_experiment(cfg);
    REQUIRE(static_cast<int>(res.records.size()) == cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
        CHECK(res.records[t].instance_id == t);
        CHECK(res.records[t].seed == derive_seed(cfg.master_seed, t));
    }
}

TEST_CASE("file-source experiments analyze the instance once") {
    const std::string path = fixture_graph_file();
    ExperimentConfig cfg;
    cfg.source = SourceKind::file;
    cfg.graph_path = path;
    cfg.trials = 5;
    cfg.max_rounds = 200000;
    cfg.palette_rule = PaletteRule::exact_chi();
    cfg.master_seed = 99;
    ExperimentResult res = run_experiment(cfg);
    std::remove(path.c_str());

    REQUIRE(res.records.size() == 5);
    for (const TrialRecord& r : res.records) {
        CHECK(r.n == 7);
        CHECK(r.chi_known);
        CHECK(r.chi == 4);
        CHECK(r.d == 4);
        CHECK(r.converged);
        CHECK(r.frac_satisfied == doctest::Approx(1.0));
        CHECK(r.frac_eligible == doctest::Approx(1.0));  // both components pass at D=4
    }
    CHECK(res.summary.converged == 5);
    CHECK(res.summary.convergence_fraction == doctest::Approx(1.0));
    CHECK(res.summary.mean_colored_fraction == doctest::Approx(1.0));
}

TEST_CASE("palette rules change the run difficulty") {
    const std::string path = fixture_graph_file();
    ExperimentConfig cfg;
    cfg.source = SourceKind::file;
    cfg.graph_path = path;
    cfg.trials = 3;
    cfg.max_rounds = 200000;
    cfg.palette_rule = PaletteRule::chi_plus(2);
    cfg.master_seed = 7;
    ExperimentResult plus = run_experiment(cfg);
    for (const TrialRecord& r : plus.records) CHECK(r.d == 6);

    cfg.palette_rule = PaletteRule::fixed(2);  // infeasible: K4 inside
    cfg.max_rounds = 1500;
    ExperimentResult starved = run_experiment(cfg);
    std::remove(path.c_str());

    CHECK(starved.summary.converged == 0);
    CHECK(std::isnan(starved.summary.mean_rounds_converged));
    for (double q : starved.summary.quantile_rounds) CHECK(std::isinf(q));

    // NaN and infinity must surface as JSON nulls
    json doc = json::parse(to_json_text(starved));
    CHECK(doc["summary"]["mean_rounds_converged"].is_null());
    for (const json& q : doc["summary"]["quantiles"]) CHECK(q["rounds"].is_null());
}

TEST_CASE("quantiles match their definition on the records") {
    ExperimentConfig cfg = small_dbm_config();
    cfg.quantiles = {0.25, 0.5, 0.9, 0.99};
    ExperimentResult res = run_experiment(cfg);
    const auto& s = res.summary;
    REQUIRE(s.quantile_probs.size() == 4);

    std::vector<double> conv;
    for (const TrialRecord& r : res.records)
        if (r.converged) conv.push_back(static_cast<double>(r.rounds));
    std::sort(conv.begin(), conv.end());

    for (std::size_t i = 0; i < 4; ++i) {
        const double p = s.quantile_probs[i];
        // smallest round count r with #(converged <= r) / completed >= p
        double expect = std::numeric_limits<double>::infinity();
        for (double r : conv) {
            int count = 0;
            for (double x : conv) count += x <= r;
            if (count >= p * s.completed - 1e-9) {
                expect = r;
                break;
            }
        }
        CHECK(s.quantile_rounds[i] == expect);
    }
}

TEST_CASE("xyz experiments redraw powers per trial") {
    const std::string path = temp_path("aps");
    write_file(path,
               "0 0 0\n"
               "2 0 0\n"
               "0 2 0\n"
               "2 2 0\n"
               "1 1 0\n");
    ExperimentConfig cfg;
    cfg.source = SourceKind::xyz;
    cfg.xyz.path = path;
    cfg.xyz.model = PathLossModel::exponent(4.3);
    cfg.xyz.radio.detection_threshold = -20.0;
    cfg.trials = 6;
    cfg.max_rounds = 50000;
    cfg.palette_rule = PaletteRule::chi_plus(1);
    cfg.master_seed = 12;
    ExperimentResult res = run_experiment(cfg);
    ExperimentResult res2 = run_experiment(cfg);
    std::remove(path.c_str());

    CHECK(res.records.size() == 6);
    for (const TrialRecord& r : res.records) CHECK(r.n == 5);
    CHECK(to_csv(res) == to_csv(res2));
}

TEST_CASE("full sensing flag symmetrizes the information sets") {
    ExperimentConfig cfg = small_dbm_config();
    cfg.full_sensing = true;
    ExperimentResult res = run_experiment(cfg);
    // with C = M and a chi+1 palette these tiny instances always converge
    CHECK(res.summary.converged == res.summary.completed);
}

TEST_CASE("a starved search budget skips undecided instances") {
    ExperimentConfig cfg = small_dbm_config();
    cfg.dbm.intensity = 0.8;  // dense enough that greedy bounds stay open
    cfg.trials = 12;
    cfg.chromatic_budget = 1;
    ExperimentResult res = run_experiment(cfg);
    CHECK(res.summary.trials == 12);
    CHECK(res.summary.completed == static_cast<int>(res.records.size()));
    CHECK(res.summary.skipped_chromatic == 12 - res.summary.completed);
    CHECK(res.summary.skipped_chromatic > 0);
}

TEST_CASE("csv output is stable and parseable") {
    ExperimentConfig cfg = small_dbm_config();
    cfg.trials = 4;
    ExperimentResult res = run_experiment(cfg);
    const std::string csv = to_csv(res);

    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "instance_id,seed,n,d,chi,converged,rounds,frac_satisfied,frac_eligible");

    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        ++rows;
        int commas = 0;
        for (char ch : line) commas += ch == ',';
        CHECK(commas == 8);
    }
    CHECK(rows == static_cast<int>(res.records.size()));

    // floats round-trip through the shortest representation
    const double value = res.records[0].frac_eligible;
    std::istringstream first_line(csv.substr(csv.find('\n') + 1));
    std::string field;
    for (int i = 0; i < 9; ++i) std::getline(first_line, field, i == 8 ? '\n' : ',');
    CHECK(std::stod(field) == value);
}

TEST_CASE("json output matches the published schema") {
    ExperimentConfig cfg = small_dbm_config();
    ExperimentResult res = run_experiment(cfg);
    json doc = json::parse(to_json_text(res));
    json schema = json::parse(slurp(SCHEMA_PATH));

    std::string why;
    const bool ok = validate_schema(schema, doc, why);
    INFO(why);
    CHECK(ok);

    // spot checks beyond the schema
    CHECK(doc["records"].size() == res.records.size());
    CHECK(doc["summary"]["trials"] == cfg.trials);
    CHECK(doc["summary"]["note"].is_string());
}

TEST_CASE("emitters write what the formatters produce") {
    ExperimentConfig cfg = small_dbm_config();
    cfg.trials = 3;
    ExperimentResult res = run_experiment(cfg);

    const std::string csv_path = temp_path("emit_csv");
    const std::string json_path = temp_path("emit_json");
    emit_csv(res, csv_path);
    emit_json(res, json_path);
    CHECK(slurp(csv_path) == to_csv(res));
    CHECK(slurp(json_path) == to_json_text(res));
    std::remove(csv_path.c_str());
    std::remove(json_path.c_str());

    CHECK_THROWS_AS(emit_csv(res, "/nonexistent/dir/out.csv"), io_error);
}

TEST_CASE("connectivity sweep covers the grid") {
    ExperimentConfig base = small_dbm_config();
    base.trials = 6;
    base.max_rounds = 20000;
    const std::vector<double> lambdas = {0.2, 0.4};
    const std::vector<double> thresholds = {-25.0, -15.0};
    auto rows = connectivity_sweep(base, lambdas, thresholds, -15.0);

    REQUIRE(rows.size() == 4);
    int solved = 0;
    for (const SweepRow& row : rows) {
        CHECK((row.lambda == 0.2 || row.lambda == 0.4));
        CHECK((row.threshold_dbm == -25.0 || row.threshold_dbm == -15.0));
        CHECK(row.mean_eligible >= 0.0);
        CHECK(row.mean_eligible <= 1.0);
        if (row.solver_ran) {
            ++solved;
            CHECK(row.threshold_dbm == -15.0);
            CHECK(row.mean_colored >= 0.0);
        } else {
            CHECK(std::isnan(row.mean_colored));
        }
    }
    CHECK(solved == 2);
}
