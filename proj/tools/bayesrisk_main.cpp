// Command-line front end: analyze scenario files or run the built-in examples.
//
//   bayesrisk analyze scenario.json [--format json]
//   bayesrisk builtin coin_game --resolution 0.001
//   bayesrisk --list-builtins
//
// Exit codes: 0 success, 1 schema or usage error, 2 numeric/validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bayesrisk/scenario.hpp"

namespace {

constexpr int kSchemaExit = 1;
constexpr int kValidationExit = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayes estimator risk analysis: relative error of mode, mean and median "
                 "estimation under a cost function"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::optional<double> resolution;
    std::optional<double> epsilon;
    std::string format = "text";
    bool list_builtins = false;
    app.add_option("--resolution", resolution, "Simplex grid step for worst-case search");
    app.add_option("--epsilon", epsilon, "Near-tie offset for limit constructions");
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_flag("--list-builtins", list_builtins, "List built-in scenarios and exit");

    std::string scenario_path;
    auto* analyze = app.add_subcommand("analyze", "Analyze a JSON scenario file");
    analyze->add_option("scenario-file", scenario_path, "Scenario file")->required();

    std::string builtin;
    auto* run_builtin = app.add_subcommand("builtin", "Run a built-in scenario");
    run_builtin->add_option("name", builtin, "Built-in scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kSchemaExit;
    }

    if (list_builtins) {
        for (const auto& name : bayesrisk::builtin_names()) {
            std::cout << name << "\n";
        }
        return 0;
    }
    if (!*analyze && !*run_builtin) {
        std::cerr << app.help();
        return kSchemaExit;
    }

    try {
        bayesrisk::Scenario scenario;
        if (*analyze) {
            const auto text = read_file(scenario_path);
            if (!text) {
                std::cerr << "error: cannot read " << scenario_path << "\n";
                return kSchemaExit;
            }
            scenario = bayesrisk::parse_scenario(*text);
        } else {
            auto found = bayesrisk::builtin_scenario(builtin);
            if (!found) {
                std::cerr << "error: unknown built-in '" << builtin << "'\n";
                return kSchemaExit;
            }
            scenario = std::move(*found);
        }
        if (resolution) {
            scenario.search.resolution = *resolution;
        }
        if (epsilon) {
            scenario.search.epsilon = *epsilon;
        }

        const auto report = bayesrisk::run_scenario(scenario);
        std::cout << bayesrisk::render_report(report, format == "json"
                                                          ? bayesrisk::ReportFormat::json
                                                          : bayesrisk::ReportFormat::text);
        return 0;
    } catch (const bayesrisk::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kSchemaExit;
    } catch (const bayesrisk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationExit;
    }
}
