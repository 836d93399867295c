#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "magwkb/config.hpp"
#include "magwkb/verification.hpp"

namespace magwkb {

struct CommandResult {
    nlohmann::json report;  // written as report.json
    std::vector<std::pair<std::string, std::string>> files;  // extra outputs: name, contents
    bool pass = false;
};

RadialSweepOptions sweep_options(const RunConfig& cfg, int jobs);
CommandResult run_command(const RunConfig& cfg, int jobs = 1);
// Writes report.json and the extra files into out_dir (created if needed).
void write_outputs(const CommandResult& result, const std::string& out_dir);

// Rotates the surface field of a (not yet validated) config document into
// quadratic normal form and returns the rewritten document plus a summary.
std::pair<nlohmann::json, nlohmann::json> normalize_config_document(const nlohmann::json& doc);

}  // namespace magwkb
