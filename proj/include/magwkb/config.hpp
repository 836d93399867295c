#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "magwkb/radial_wkb.hpp"
#include "magwkb/surface_wkb.hpp"

namespace magwkb {

struct FieldConfig {
    std::string type = "radial";  // "radial" | "surface"
    std::vector<double> beta_poly;
    // Taylor data: b_taylor[i][j] is the coefficient of q1^i q2^j.
    std::vector<std::vector<double>> b_taylor;
    std::vector<std::vector<double>> eta_taylor;

    bool operator==(const FieldConfig&) const = default;
};

struct RunParams {
    int m = 0;
    int ell = 0;
    int J = 2;
    double epsilon = 0.5;
    std::vector<double> h_ladder;  // strictly decreasing
    int n_grid = 0;                // 1D minimum node count / 2D nodes per axis
    double rho_max = 0;            // 0 = automatic
    std::array<double, 2> box{-1.6, 1.6};
    double cutoff_K = 0;           // 0 = automatic
    std::string mode = "grid";     // radial WKB construction: "grid" | "series"
    double h = 0.03125;            // single-h commands (verify-fibers)
    int m_max = 3;
    int k_max = 4;
    int n_max = 10;
    std::array<int, 2> m_range{-5, 5};
    double nodes_per_h = 0;        // 0 = check-specific default

    bool operator==(const RunParams&) const = default;
};

struct RunConfig {
    std::string command;
    FieldConfig field;
    RunParams params;

    bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& known_commands();

// Parses and validates; every default is filled in so that the result is the
// fully resolved configuration. Throws std::invalid_argument naming the key.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
nlohmann::json config_to_json(const RunConfig& cfg);

RadialField make_radial_field(const FieldConfig& f);
// Taylor data zero-padded to `order`; throws if it is not in normal form.
FieldSpecSurface make_surface_field(const FieldConfig& f, int order);
TruncatedSeries2 taylor_from_rows(const std::vector<std::vector<double>>& rows, int order);
std::vector<std::vector<double>> rows_from_taylor(const TruncatedSeries2& s);

// Seed for randomized sampling: MAGWKB_SEED if set, else the fallback.
std::uint64_t magwkb_seed(std::uint64_t fallback = 12345);

}  // namespace magwkb
