#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "magwkb/commands.hpp"
#include "magwkb/config.hpp"
#include "magwkb/report.hpp"

using namespace magwkb;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("defaults are resolved and echoed") {
    const auto cfg = parse_config_text(R"({"command":"verify-residual","field":{"beta_poly":[1,1]}})");
    CHECK(cfg.params.h_ladder == default_h_ladder());
    CHECK(cfg.params.n_grid == 2001);
    CHECK(cfg.field.type == "radial");
    const auto fib = parse_config_text(R"({"command":"verify-fibers","field":{"beta_poly":[1,1]}})");
    CHECK(fib.params.n_grid == 161);
    const json j = config_to_json(cfg);
    CHECK(j["params"]["h_ladder"].size() == 5);
}

TEST_CASE("resolved configs round-trip through the emitted JSON") {
    std::mt19937_64 rng(magwkb_seed(501));
    std::uniform_real_distribution<double> u(0.01, 2);
    std::uniform_int_distribution<int> small(0, 4);
    const auto& cmds = known_commands();
    for (int trial = 0; trial < 1000; ++trial) {
        const std::string cmd = cmds[trial % cmds.size()];
        json doc = {{"command", cmd}};
        if (cmd == "wkb-surface") {
            const double a = u(rng), g = a + u(rng);
            doc["field"] = {{"type", "surface"},
                            {"b_taylor", {{1.0 + u(rng), 0.0, g}, {0.0, 0.0, u(rng)}, {a, u(rng)}, {u(rng)}}},
                            {"eta_taylor", {{u(rng)}}}};
        } else if (cmd != "verify-laguerre") {
            doc["field"] = {{"beta_poly", {u(rng), u(rng), u(rng) - 1}}};
        }
        doc["params"] = {{"J", small(rng)}, {"m", small(rng)}, {"epsilon", u(rng) / 2.5},
                         {"h_ladder", {u(rng), 0.009}}, {"cutoff_K", u(rng)}, {"h", u(rng) / 10}};
        const RunConfig cfg = parse_config_json(doc);
        const RunConfig again = parse_config_text(emit_json(config_to_json(cfg)));
        CHECK(cfg == again);
        CHECK(emit_json(config_to_json(again)) == emit_json(config_to_json(cfg)));
    }
}

TEST_CASE("configuration errors name the offending key") {
    CHECK(contains(error_of(R"({"command":"wkb-radial","field":{"beta_poly":[1,1]},"params":{"Jay":2}})"),
                   "params.Jay"));
    CHECK(contains(error_of(R"({"command":"wkb-radial","field":{"beta_poly":[1,1]},"params":{"J":1.5}})"),
                   "params.J"));
    CHECK(contains(error_of(R"({"command":"wkb-radial","field":{"beta_poly":[1,1]},"params":{"epsilon":1.0}})"),
                   "params.epsilon"));
    CHECK(contains(error_of(R"({"command":"wkb-radial","field":{"beta_poly":[1,1]},"params":{"h_ladder":[0.1,0.2]}})"),
                   "params.h_ladder"));
    CHECK(contains(error_of(R"({"command":"wkb-radial","field":{"beta_poly":[1,-1]}})"), "field.beta_poly"));
    CHECK(contains(error_of(R"({"command":"frobnicate"})"), "command"));
    CHECK(contains(error_of(R"({"command":"wkb-radial","field":{"beta_poly":[1,1]},"extra":1})"), "'extra'"));
    CHECK(contains(error_of("{not json"), "invalid JSON"));
    const std::string mixed = error_of(
        R"({"command":"wkb-surface","field":{"type":"surface","b_taylor":[[1,0,2],[0,2],[2]]}})");
    CHECK(contains(mixed, "normalize-quadratic"));
    CHECK_FALSE(contains(mixed, "Eq"));
}

TEST_CASE("normalize-quadratic rewrites a config into an accepted one") {
    const json doc = json::parse(
        R"({"command":"wkb-surface","field":{"type":"surface","b_taylor":[[1,0,2],[0,2],[2]]},"params":{"J":1}})");
    const auto [normalized, summary] = normalize_config_document(doc);
    CHECK(summary["alpha"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(summary["gamma"].get<double>() == doctest::Approx(3.0).epsilon(1e-14));
    const RunConfig cfg = parse_config_json(normalized);
    CHECK(cfg.params.J == 1);
    CHECK(run_command(cfg).pass);
}

TEST_CASE("JSON emission is deterministic") {
    json j = {{"zeta", 1}, {"alpha", 0.1}, {"nan", std::nan("")}, {"inf", INFINITY}, {"list", {1.5, 2}}};
    const std::string s = emit_json(j);
    CHECK(s.find("\"alpha\"") < s.find("\"zeta\""));
    CHECK(contains(s, "\"nan\": null"));
    CHECK(contains(s, "\"inf\": null"));
    CHECK(contains(s, "0.10000000000000001"));
    CHECK(json::parse(s)["alpha"].get<double>() == 0.1);
    CHECK(s.back() == '\n');
}

TEST_CASE("CSV output uses LF line endings") {
    CsvTable t;
    t.header = {"a", "b"};
    t.add_row({csv_number(0.1), csv_number(2)});
    const std::string s = t.str();
    CHECK(s == "a,b\n0.10000000000000001,2\n");
    CHECK(s.find('\r') == std::string::npos);
}

TEST_CASE("commands are reproducible byte for byte") {
    const auto cfg = parse_config_text(
        R"({"command":"wkb-surface","field":{"type":"surface","b_taylor":[[1,0,2,0.2],[0,0,0.3],[1,0.1]]},"params":{"J":2}})");
    const auto a = run_command(cfg), b = run_command(cfg);
    CHECK(a.pass);
    CHECK(emit_json(a.report) == emit_json(b.report));
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i] == b.files[i]);

    const auto lag = run_command(parse_config_text(R"({"command":"verify-laguerre","params":{"n_max":6}})"));
    CHECK(lag.pass);
    CHECK(lag.report["config"]["params"]["n_max"] == 6);

    const auto radial = run_command(
        parse_config_text(R"({"command":"wkb-radial","field":{"beta_poly":[1,0.5,1]},"params":{"m":1,"J":3}})"));
    CHECK(radial.pass);
    CHECK(radial.report["mode_agreement"].get<double>() < 1e-8);
}

TEST_CASE("seed override") {
    ::setenv("MAGWKB_SEED", "77", 1);
    CHECK(magwkb_seed(5) == 77);
    ::unsetenv("MAGWKB_SEED");
    CHECK(magwkb_seed(5) == 5);
}
