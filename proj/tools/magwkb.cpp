#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "magwkb/commands.hpp"
#include "magwkb/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"magwkb: WKB quasimodes and spectral checks for magnetic Laplacians"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    int jobs = 1;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--jobs", jobs, "worker threads over h values")->check(CLI::PositiveNumber)->capture_default_str();
    };
    for (const auto& name : magwkb::known_commands()) add_common(app.add_subcommand(name));
    add_common(app.add_subcommand("normalize-quadratic", "rotate a surface field into quadratic normal form"));

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "normalize-quadratic") {
            std::ifstream in(config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(ss.str());
            } catch (const nlohmann::json::parse_error& e) {
                throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
            }
            auto [normalized, summary] = magwkb::normalize_config_document(doc);
            std::filesystem::create_directories(out_dir);
            magwkb::write_text_file(out_dir + "/normalized_config.json", magwkb::emit_json(normalized));
            magwkb::write_text_file(out_dir + "/report.json", magwkb::emit_json(summary));
            std::cout << magwkb::emit_json(summary);
            return 0;
        }
        const magwkb::RunConfig cfg = magwkb::parse_config(config_path);
        if (cfg.command != command) {
            std::cerr << "error: config command '" << cfg.command << "' does not match '" << command << "'\n";
            return 2;
        }
        const magwkb::CommandResult result = magwkb::run_command(cfg, jobs);
        magwkb::write_outputs(result, out_dir);
        std::cout << command << ": " << (result.pass ? "PASS" : "FAIL") << " (" << out_dir << "/report.json)\n";
        return result.pass ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
