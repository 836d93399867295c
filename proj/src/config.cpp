#include "magwkb/config.hpp"
#include "magwkb/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace magwkb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where + it.key(), "unknown key");
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
}

int get_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
}

std::vector<double> get_numbers(const json& v, const std::string& key) {
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<double>> get_rows(const json& v, const std::string& key) {
    if (!v.is_array()) fail(key, "expected nested arrays: rows[i][j] is the coefficient of q1^i q2^j");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_numbers(v[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

bool is_plane_command(const std::string& c) { return c == "verify-fibers"; }

void validate_radial_profile(const std::vector<double>& beta) {
    if (beta.empty()) fail("field.beta_poly", "must list at least the constant coefficient");
    if (!(beta[0] > 0)) fail("field.beta_poly", "beta(0) must be positive");
    const bool constant = std::all_of(beta.begin() + 1, beta.end(), [](double c) { return c == 0; });
    if (!constant && !(beta.size() > 1 && beta[1] > 0))
        fail("field.beta_poly", "beta'(0) must be positive (or the profile constant): the minimum must be nondegenerate");
}

}  // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c{"wkb-surface",     "wkb-radial",    "verify-residual",
                                            "verify-eigenvalues", "verify-decay", "verify-weighted",
                                            "verify-fibers",   "verify-laguerre"};
    return c;
}

TruncatedSeries2 taylor_from_rows(const std::vector<std::vector<double>>& rows, int order) {
    TruncatedSeries2 s(order);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            if (rows[i][j] == 0) continue;
            if (static_cast<int>(i + j) > order)
                throw std::invalid_argument("Taylor coefficient of degree " + std::to_string(i + j) +
                                            " exceeds the series order " + std::to_string(order));
            s.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
        }
    return s;
}

std::vector<std::vector<double>> rows_from_taylor(const TruncatedSeries2& s) {
    std::vector<std::vector<double>> rows(s.order() + 1);
    for (int i = 0; i <= s.order(); ++i)
        for (int j = 0; i + j <= s.order(); ++j) rows[i].push_back(s(i, j).real());
    return rows;
}

namespace {
int taylor_degree(const std::vector<std::vector<double>>& rows) {
    int d = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j] != 0) d = std::max(d, static_cast<int>(i + j));
    return d;
}
}  // namespace

RadialField make_radial_field(const FieldConfig& f) {
    if (f.type != "radial") throw std::invalid_argument("config key 'field.type': a radial field is required here");
    validate_radial_profile(f.beta_poly);
    return RadialField::polynomial(f.beta_poly);
}

FieldSpecSurface make_surface_field(const FieldConfig& f, int order) {
    if (f.type != "surface") throw std::invalid_argument("config key 'field.type': a surface field is required here");
    const int need = std::max({order, taylor_degree(f.b_taylor), taylor_degree(f.eta_taylor), 2});
    auto b = taylor_from_rows(f.b_taylor, need);
    auto eta = taylor_from_rows(f.eta_taylor, need);
    if (b(1, 1) != cplx{})
        fail("field.b_taylor",
             "the quadratic part has a q1*q2 term; rotate the field first with 'magwkb normalize-quadratic'");
    return FieldSpecSurface::from_taylor(std::move(b), std::move(eta));
}

RunConfig parse_config_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    reject_unknown(doc, "", {"command", "field", "params"});
    RunConfig cfg;
    if (!doc.contains("command") || !doc["command"].is_string()) fail("command", "required string");
    cfg.command = doc["command"].get<std::string>();
    const auto& cmds = known_commands();
    if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end()) fail("command", "unknown command '" + cfg.command + "'");

    // field
    if (doc.contains("field")) {
        const json& f = doc["field"];
        if (!f.is_object()) fail("field", "expected an object");
        reject_unknown(f, "field.", {"type", "beta_poly", "b_taylor", "eta_taylor"});
        if (f.contains("type")) {
            if (!f["type"].is_string()) fail("field.type", "expected \"radial\" or \"surface\"");
            cfg.field.type = f["type"].get<std::string>();
        }
        if (cfg.field.type != "radial" && cfg.field.type != "surface")
            fail("field.type", "expected \"radial\" or \"surface\"");
        if (f.contains("beta_poly")) cfg.field.beta_poly = get_numbers(f["beta_poly"], "field.beta_poly");
        if (f.contains("b_taylor")) cfg.field.b_taylor = get_rows(f["b_taylor"], "field.b_taylor");
        if (f.contains("eta_taylor")) cfg.field.eta_taylor = get_rows(f["eta_taylor"], "field.eta_taylor");
        if (cfg.field.type == "radial" && (f.contains("b_taylor") || f.contains("eta_taylor")))
            fail(f.contains("b_taylor") ? "field.b_taylor" : "field.eta_taylor", "not used by a radial field");
        if (cfg.field.type == "surface" && f.contains("beta_poly")) fail("field.beta_poly", "not used by a surface field");
    } else if (cfg.command != "verify-laguerre") {
        fail("field", "required for command '" + cfg.command + "'");
    }

    // params
    RunParams& p = cfg.params;
    bool have_n_grid = false;
    if (doc.contains("params")) {
        const json& q = doc["params"];
        if (!q.is_object()) fail("params", "expected an object");
        reject_unknown(q, "params.",
                       {"m", "ell", "J", "epsilon", "h_ladder", "n_grid", "rho_max", "box", "cutoff_K", "mode", "h",
                        "m_max", "k_max", "n_max", "m_range", "nodes_per_h"});
        if (q.contains("m")) p.m = get_int(q["m"], "params.m");
        if (q.contains("ell")) p.ell = get_int(q["ell"], "params.ell");
        if (q.contains("J")) p.J = get_int(q["J"], "params.J");
        if (q.contains("epsilon")) p.epsilon = get_number(q["epsilon"], "params.epsilon");
        if (q.contains("h_ladder")) p.h_ladder = get_numbers(q["h_ladder"], "params.h_ladder");
        if (q.contains("n_grid")) {
            p.n_grid = get_int(q["n_grid"], "params.n_grid");
            have_n_grid = true;
        }
        if (q.contains("rho_max")) p.rho_max = get_number(q["rho_max"], "params.rho_max");
        if (q.contains("box")) {
            auto b = get_numbers(q["box"], "params.box");
            if (b.size() != 2) fail("params.box", "expected [lo, hi]");
            p.box = {b[0], b[1]};
        }
        if (q.contains("cutoff_K")) p.cutoff_K = get_number(q["cutoff_K"], "params.cutoff_K");
        if (q.contains("mode")) {
            if (!q["mode"].is_string()) fail("params.mode", "expected \"grid\" or \"series\"");
            p.mode = q["mode"].get<std::string>();
        }
        if (q.contains("h")) p.h = get_number(q["h"], "params.h");
        if (q.contains("m_max")) p.m_max = get_int(q["m_max"], "params.m_max");
        if (q.contains("k_max")) p.k_max = get_int(q["k_max"], "params.k_max");
        if (q.contains("n_max")) p.n_max = get_int(q["n_max"], "params.n_max");
        if (q.contains("m_range")) {
            const json& r = q["m_range"];
            if (!r.is_array() || r.size() != 2) fail("params.m_range", "expected [m_min, m_max]");
            p.m_range = {get_int(r[0], "params.m_range[0]"), get_int(r[1], "params.m_range[1]")};
        }
        if (q.contains("nodes_per_h")) p.nodes_per_h = get_number(q["nodes_per_h"], "params.nodes_per_h");
    }
    if (p.h_ladder.empty()) p.h_ladder = default_h_ladder();
    if (!have_n_grid) p.n_grid = is_plane_command(cfg.command) ? 161 : 2001;

    // invariants
    if (p.m < 0) fail("params.m", "the angular index must be non-negative");
    if (p.ell < 0) fail("params.ell", "the level index must be non-negative");
    if (p.J < 0) fail("params.J", "must be non-negative");
    if (!(p.epsilon >= 0 && p.epsilon < 1)) fail("params.epsilon", "must satisfy 0 <= epsilon < 1");
    for (std::size_t i = 0; i < p.h_ladder.size(); ++i) {
        if (!(p.h_ladder[i] > 0)) fail("params.h_ladder", "all values must be positive");
        if (i > 0 && !(p.h_ladder[i] < p.h_ladder[i - 1])) fail("params.h_ladder", "must be strictly decreasing");
    }
    if (p.n_grid < 8) fail("params.n_grid", "must be at least 8");
    if (p.rho_max < 0) fail("params.rho_max", "must be non-negative (0 selects the automatic window)");
    if (!(p.box[0] < 0 && p.box[1] > 0)) fail("params.box", "the box [lo, hi] must contain the origin");
    if (p.cutoff_K < 0) fail("params.cutoff_K", "must be non-negative (0 selects the default)");
    if (p.mode != "grid" && p.mode != "series") fail("params.mode", "expected \"grid\" or \"series\"");
    if (!(p.h > 0)) fail("params.h", "must be positive");
    if (p.m_max < 0) fail("params.m_max", "must be non-negative");
    if (p.k_max < 1) fail("params.k_max", "must be at least 1");
    if (p.n_max < 0 || p.n_max > 12) fail("params.n_max", "must lie in [0, 12]");
    if (p.m_range[0] > p.m_range[1]) fail("params.m_range", "expected m_min <= m_max");
    if (p.nodes_per_h < 0) fail("params.nodes_per_h", "must be non-negative (0 selects the default)");

    if (cfg.command != "verify-laguerre") {
        if (cfg.command == "wkb-surface") {
            if (cfg.field.type != "surface") fail("field.type", "wkb-surface needs a surface field");
            if (cfg.field.b_taylor.empty()) fail("field.b_taylor", "required for a surface field");
            try {
                make_surface_field(cfg.field, cascade_required_field_order(p.ell, p.J));
            } catch (const std::invalid_argument& e) {
                const std::string msg = e.what();
                if (msg.rfind("config key", 0) == 0) throw;
                fail("field.b_taylor", msg);
            }
        } else {
            if (cfg.field.type != "radial") fail("field.type", "command '" + cfg.command + "' needs a radial field");
            validate_radial_profile(cfg.field.beta_poly);
        }
    }
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config_json(doc);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& cfg) {
    json f = {{"type", cfg.field.type}};
    if (cfg.field.type == "radial") {
        f["beta_poly"] = cfg.field.beta_poly;
    } else {
        f["b_taylor"] = cfg.field.b_taylor;
        f["eta_taylor"] = cfg.field.eta_taylor;
    }
    const RunParams& p = cfg.params;
    json q = {{"m", p.m},           {"ell", p.ell},
              {"J", p.J},           {"epsilon", p.epsilon},
              {"h_ladder", p.h_ladder}, {"n_grid", p.n_grid},
              {"rho_max", p.rho_max}, {"box", {p.box[0], p.box[1]}},
              {"cutoff_K", p.cutoff_K}, {"mode", p.mode},
              {"h", p.h},           {"m_max", p.m_max},
              {"k_max", p.k_max},   {"n_max", p.n_max},
              {"m_range", {p.m_range[0], p.m_range[1]}}, {"nodes_per_h", p.nodes_per_h}};
    json doc = {{"command", cfg.command}, {"params", q}};
    if (cfg.command != "verify-laguerre" || !cfg.field.beta_poly.empty() || !cfg.field.b_taylor.empty())
        doc["field"] = f;
    return doc;
}

std::uint64_t magwkb_seed(std::uint64_t fallback) {
    if (const char* s = std::getenv("MAGWKB_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw std::invalid_argument("MAGWKB_SEED must be an unsigned integer");
        }
    }
    return fallback;
}

}  // namespace magwkb
