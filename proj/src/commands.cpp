#include "magwkb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "magwkb/normalize.hpp"
#include "magwkb/report.hpp"

namespace magwkb {

using nlohmann::json;

namespace {

std::string report_csv(const VerificationReport& r) {
    CsvTable t;
    t.header = {"h", "observed", "included", "refinement_change"};
    for (std::size_t i = 0; i < r.h_values.size(); ++i)
        t.add_row({csv_number(r.h_values[i]), csv_number(i < r.observed.size() ? r.observed[i] : NAN),
                   i < r.included.size() && r.included[i] ? "1" : "0",
                   csv_number(i < r.refinement_change.size() ? r.refinement_change[i] : NAN)});
    return t.str();
}

CommandResult from_reports(const RunConfig& cfg, const std::vector<VerificationReport>& reports) {
    CommandResult out;
    out.pass = true;
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        out.files.emplace_back(r.check + ".csv", report_csv(r));
        out.pass = out.pass && r.pass;
    }
    out.report = {{"command", cfg.command}, {"config", config_to_json(cfg)}, {"checks", arr}, {"pass", out.pass}};
    return out;
}

RadialChainOptions chain_options(const RunConfig& cfg) {
    RadialChainOptions c;
    c.mode = cfg.params.mode == "series" ? RadialMode::series : RadialMode::grid;
    c.cutoff_K = cfg.params.cutoff_K;
    return c;
}

CommandResult run_wkb_surface(const RunConfig& cfg) {
    const int ell = cfg.params.ell, J = cfg.params.J;
    const FieldSpecSurface field = make_surface_field(cfg.field, cascade_required_field_order(ell, J));
    const SurfaceWkbExpansion e = transport_cascade(field, ell, J);
    const double eik = eikonal_residual(e);
    const auto trans = transport_residuals(field, e);
    const double closed = mu1_closed_form(field.alpha, field.gamma, field.eta0(), field.b0, ell);
    const double mu1_err = std::abs(e.mu[1] - closed) / std::abs(closed);
    double trans_max = 0;
    for (double t : trans) trans_max = std::max(trans_max, t);
    bool finite = true;
    for (double m : e.mu) finite = finite && std::isfinite(m);

    CommandResult out;
    out.pass = finite && eik <= 1e-10 && trans_max <= 1e-8 && mu1_err <= 1e-10;
    out.report = {{"command", cfg.command},
                  {"config", config_to_json(cfg)},
                  {"mu", e.mu},
                  {"mu1_closed_form", closed},
                  {"mu1_relative_error", mu1_err},
                  {"eikonal_residual", eik},
                  {"transport_residuals", trans},
                  {"working_order", e.working_order},
                  {"field", {{"b0", field.b0}, {"alpha", field.alpha}, {"gamma", field.gamma}, {"eta0", field.eta0()}}},
                  {"pass", out.pass}};
    CsvTable mu;
    mu.header = {"j", "mu"};
    for (std::size_t j = 0; j < e.mu.size(); ++j) mu.add_row({std::to_string(j), csv_number(e.mu[j])});
    out.files.emplace_back("mu.csv", mu.str());
    CsvTable amp;
    amp.header = {"j", "z_power", "y_power", "re", "im"};
    for (std::size_t j = 0; j < e.amplitudes_shifted.size(); ++j) {
        const auto& a = e.amplitudes_shifted[j];
        for (int p = 0; p <= a.order(); ++p)
            for (int q = 0; p + q <= a.order(); ++q) {
                const cplx c = a(p, q);
                if (c == cplx{}) continue;
                amp.add_row({std::to_string(j), std::to_string(p), std::to_string(q), csv_number(c.real()),
                             csv_number(c.imag())});
            }
    }
    out.files.emplace_back("amplitudes.csv", amp.str());
    return out;
}

CommandResult run_wkb_radial(const RunConfig& cfg) {
    const RadialField field = make_radial_field(cfg.field);
    const int m = cfg.params.m, J = cfg.params.J;
    RadialChainOptions opts = chain_options(cfg);
    opts.rho_max = cfg.params.rho_max;
    const RadialWkbExpansion e = transport_chain(field, m, J, opts);
    RadialChainOptions other = opts;
    other.mode = opts.mode == RadialMode::grid ? RadialMode::series : RadialMode::grid;
    const RadialWkbExpansion f = transport_chain(field, m, J, other);
    double agreement = 0;
    bool finite = true;
    for (std::size_t j = 0; j < e.mu.size(); ++j) {
        finite = finite && std::isfinite(e.mu[j]);
        agreement = std::max(agreement, std::abs(e.mu[j] - f.mu[j]) / std::max(1.0, std::abs(e.mu[j])));
    }
    CommandResult out;
    out.pass = finite && agreement <= 1e-6;
    out.report = {{"command", cfg.command},       {"config", config_to_json(cfg)},
                  {"mu", e.mu},                   {"mu_other_mode", f.mu},
                  {"mode_agreement", agreement},  {"cutoff_K", e.cutoff_K},
                  {"rho_max", e.rho_max},         {"pass", out.pass}};
    CsvTable mu;
    mu.header = {"j", "mu"};
    for (std::size_t j = 0; j < e.mu.size(); ++j) mu.add_row({std::to_string(j), csv_number(e.mu[j])});
    out.files.emplace_back("mu.csv", mu.str());
    CsvTable prof;
    prof.header = {"rho", "phi"};
    for (int j = 0; j <= J; ++j) prof.header.push_back("a" + std::to_string(j));
    const double top = e.mode == RadialMode::grid ? e.rho_max : std::min(1.0, e.cutoff_K);
    const int samples = 65;
    for (int i = 0; i < samples; ++i) {
        const double rho = top * i / (samples - 1);
        std::vector<std::string> row{csv_number(rho), csv_number(e.phi(rho))};
        for (const auto& a : e.amplitudes) row.push_back(csv_number(a(rho)));
        prof.add_row(std::move(row));
    }
    out.files.emplace_back("profile.csv", prof.str());
    return out;
}

}  // namespace

RadialSweepOptions sweep_options(const RunConfig& cfg, int jobs) {
    RadialSweepOptions o;
    o.nodes_per_h = cfg.params.nodes_per_h;
    o.jobs = std::max(1, jobs);
    o.min_nodes = cfg.params.n_grid;
    o.rho_max = cfg.params.rho_max;
    o.chain = chain_options(cfg);
    return o;
}

CommandResult run_command(const RunConfig& cfg, int jobs) {
    const RunParams& p = cfg.params;
    const std::string& c = cfg.command;
    if (c == "wkb-surface") return run_wkb_surface(cfg);
    if (c == "wkb-radial") return run_wkb_radial(cfg);
    if (c == "verify-laguerre")
        return from_reports(cfg, {laguerre_report(laguerre_suite(p.n_max, p.m_range[0], p.m_range[1]))});
    if (c == "verify-fibers") {
        PlaneSweepOptions po;
        po.n_grid = p.n_grid;
        po.box = {p.box[0], p.box[1]};
        const auto fid = fiber_identification(make_radial_field(cfg.field), p.h, p.m_max, p.k_max, po);
        CommandResult out = from_reports(cfg, {fiber_report(fid, p.h)});
        CsvTable t;
        t.header = {"index", "plane_fine", "plane_coarse", "tolerance", "matched_m", "fiber", "angular_mode"};
        for (std::size_t i = 0; i < fid.plane_fine.size(); ++i) {
            const int perm = i < fid.permutation.size() ? fid.permutation[i] : -1;
            t.add_row({std::to_string(i), csv_number(fid.plane_fine[i]), csv_number(fid.plane_coarse[i]),
                       csv_number(fid.tolerance[i]), std::to_string(perm),
                       csv_number(perm >= 0 && perm < static_cast<int>(fid.fiber.size()) ? fid.fiber[perm] : NAN),
                       std::to_string(i < fid.angular_mode.size() ? fid.angular_mode[i] : -1)});
        }
        out.files.emplace_back("fibers.csv", t.str());
        return out;
    }
    const RadialField field = make_radial_field(cfg.field);
    const RadialSweepOptions o = sweep_options(cfg, jobs);
    if (c == "verify-residual") return from_reports(cfg, {residual_scaling(field, p.m, p.J, p.h_ladder, o)});
    if (c == "verify-eigenvalues")
        return from_reports(cfg, {eigenvalue_expansion(field, p.m, p.J, p.h_ladder, o),
                                  model_spectrum_check(p.m, field.beta0(), std::max(p.n_grid, 4000))});
    if (c == "verify-decay") return from_reports(cfg, {agmon_check(field, p.m, p.h_ladder, p.epsilon, o)});
    if (c == "verify-weighted")
        return from_reports(cfg, {weighted_approximation(field, p.m, p.J, p.h_ladder, p.epsilon, o)});
    throw std::invalid_argument("unknown command '" + c + "'");
}

void write_outputs(const CommandResult& result, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_text_file((dir / "report.json").string(), emit_json(result.report));
    for (const auto& [name, text] : result.files) write_text_file((dir / name).string(), text);
}

std::pair<json, json> normalize_config_document(const json& doc) {
    if (!doc.is_object() || !doc.contains("field") || !doc["field"].is_object())
        throw std::invalid_argument("config key 'field': a surface field object is required");
    json out = doc;
    json& f = out["field"];
    if (f.value("type", std::string("surface")) != "surface")
        throw std::invalid_argument("config key 'field.type': normalize-quadratic needs a surface field");
    auto rows = [&](const char* key) {
        std::vector<std::vector<double>> r;
        if (f.contains(key)) {
            try {
                r = f[key].get<std::vector<std::vector<double>>>();
            } catch (const json::exception&) {
                throw std::invalid_argument(std::string("config key 'field.") + key + "': expected nested arrays of numbers");
            }
        }
        return r;
    };
    const auto b_rows = rows("b_taylor"), eta_rows = rows("eta_taylor");
    int order = 2;
    for (const auto* rr : {&b_rows, &eta_rows})
        for (std::size_t i = 0; i < rr->size(); ++i)
            if (!(*rr)[i].empty()) order = std::max(order, static_cast<int>(i + (*rr)[i].size() - 1));
    const NormalizedField n =
        normalize_quadratic(taylor_from_rows(b_rows, order), taylor_from_rows(eta_rows, order));
    f["type"] = "surface";
    f["b_taylor"] = rows_from_taylor(n.field.b_taylor);
    f["eta_taylor"] = rows_from_taylor(n.field.eta_taylor);
    json summary = {{"alpha", n.field.alpha},
                    {"gamma", n.field.gamma},
                    {"b0", n.field.b0},
                    {"rotation", {{n.rotation(0, 0), n.rotation(0, 1)}, {n.rotation(1, 0), n.rotation(1, 1)}}}};
    return {out, summary};
}

}  // namespace magwkb
