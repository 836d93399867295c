#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "magwkb/verification.hpp"

namespace magwkb {

// Deterministic JSON text: sorted keys, two-space indent, floats as %.17g,
// non-finite values as null, trailing newline.
std::string emit_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const VerificationReport& r);

// Comma-separated table with LF line endings; doubles as %.17g.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string str() const;
};
std::string csv_number(double v);

// Writes bytes verbatim (binary mode, so line endings stay LF everywhere).
void write_text_file(const std::string& path, const std::string& text);

}  // namespace magwkb
