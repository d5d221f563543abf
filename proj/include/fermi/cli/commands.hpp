// The fermi-lattice sub-commands and their run manifest

#pragma once

#include "fermi/cli/scenario_file.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fermi::cli {

struct RunManifest {
    std::string tool{"fermi-lattice"};
    std::string version;
    std::string command;
    std::string scenario_path;
    std::string scenario_hash;
    double wall_time{0.0};
    std::vector<std::string> outputs;
    json summary = json::object();
    std::vector<std::string> warnings;

    json to_json() const;
};

const std::vector<std::string>& command_names();

// Runs one command, writes its CSV files and "<out>.manifest.json". Warnings go to `diag`
// (always); the human-readable summary goes to `info` unless quiet.
RunManifest run_command(const std::string& command, const ScenarioFile& file, const std::string& out,
                        std::ostream& info, std::ostream& diag, bool quiet = false);

}  // namespace fermi::cli
