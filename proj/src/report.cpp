#include "magwkb/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace magwkb {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const json& v, int indent, std::string& out) {
    const std::string pad(indent, ' '), inner(indent + 2, ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {  // std::map order: sorted keys
                if (!first) out += ",\n";
                first = false;
                out += inner + json(it.key()).dump() + ": ";
                emit(it.value(), indent + 2, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            bool scalar = true;
            for (const auto& e : v) scalar = scalar && e.is_primitive();
            if (scalar) {
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out += ", ";
                    emit(v[i], indent + 2, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                emit(v[i], indent + 2, out);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
    }
}

}  // namespace

std::string emit_json(const json& doc) {
    std::string out;
    emit(doc, 0, out);
    out += "\n";
    return out;
}

json report_to_json(const VerificationReport& r) {
    json j;
    j["check"] = r.check;
    j["h_values"] = r.h_values;
    j["observed"] = r.observed;
    j["included"] = r.included;
    j["refinement_change"] = r.refinement_change;
    if (r.has_slope) {
        j["slope"] = r.slope;
        j["slope_fit_rms"] = r.slope_ci;
    } else {
        j["slope"] = nullptr;
    }
    j["target"] = r.target;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["verdict"] = r.verdict;
    json s = json::object();
    for (const auto& [k, v] : r.scalars) s[k] = v;
    j["scalars"] = s;
    j["notes"] = r.notes;
    return j;
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ",";
            out += cells[i];
        }
        out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace magwkb
