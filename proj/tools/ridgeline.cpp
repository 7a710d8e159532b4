// Command-line driver: pattern simulations, stability spectra, and the
// threshold/force scans, all configured through flat key=value files with
// --key=value overrides.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ridgeline/commands.hpp"

namespace {

void print_usage() {
    std::cout <<
        "usage: ridgeline <command> [--config <path>] [--key=value ...]\n"
        "\n"
        "commands:\n"
        "  simulate      integrate the particle model, write snapshots + summary\n"
        "  spectrum      vertical-line stability spectrum, write spectrum.csv\n"
        "  force-table   coefficient table over an r-grid, write forces.csv\n"
        "  a0-scan       linear-coefficient threshold scan, write a0_scan.csv\n"
        "  rotated-scan  high-wave matrix over admissible angles, write rotated.csv\n"
        "\n"
        "options:\n"
        "  --config <path>   key = value configuration file ('#' comments)\n"
        "  --key=value       override any configuration key\n"
        "\n"
        "The RIDGELINE_OUTPUT_DIR environment variable overrides output.dir.\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ridgeline::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

int main(int argc, char** argv) {
    using namespace ridgeline;

    if (argc < 2) {
        print_usage();
        return 1;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        print_usage();
        return 0;
    }

    try {
        RunConfig config;
        std::vector<std::pair<std::string, std::string>> overrides;
        for (int i = 2; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config") {
                if (i + 1 >= argc) throw ConfigError("--config needs a path");
                const std::string path = argv[++i];
                config = RunConfig::parse(read_file(path), path);
            } else if (arg.rfind("--config=", 0) == 0) {
                const std::string path = arg.substr(9);
                config = RunConfig::parse(read_file(path), path);
            } else if (arg.rfind("--", 0) == 0) {
                const std::size_t eq = arg.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("override '" + arg + "' must look like --key=value");
                overrides.emplace_back(arg.substr(2, eq - 2), arg.substr(eq + 1));
            } else {
                throw ConfigError("unexpected argument '" + arg + "'");
            }
        }
        for (const auto& [key, value] : overrides) config.apply_override(key, value);
        for (const auto& warning : config.warnings()) std::cerr << "warning: " << warning << '\n';

        if (command == "simulate") {
            cmd_simulate(config);
        } else if (command == "spectrum") {
            cmd_spectrum(config);
        } else if (command == "force-table") {
            cmd_force_table(config);
        } else if (command == "a0-scan") {
            cmd_a0_scan(config);
        } else if (command == "rotated-scan") {
            cmd_rotated_scan(config);
        } else {
            std::cerr << "unknown command '" << command << "'\n";
            print_usage();
            return 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
