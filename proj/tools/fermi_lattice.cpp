// Command-line front end
//
// exit codes: 0 success, 2 schema/usage error, 3 numerical failure

#include "fermi/cli/commands.hpp"
#include "fermi/cli/scenario_file.hpp"
#include "fermi/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fermi two-atom problem on discrete bosonic systems"};
    app.set_version_flag("--version", FERMI_LATTICE_VERSION);

    std::string command;
    std::string scenario;
    std::string out;
    bool quiet = false;
    app.add_option("command", command, "causality | bare | dressed | ion2 | cloud | oracle-check")
        ->required()
        ->check(CLI::IsMember(fermi::cli::command_names()));
    app.add_option("--scenario", scenario, "scenario JSON file")->required();
    app.add_option("--out", out, "output CSV path")->required();
    app.add_flag("--quiet", quiet, "suppress the summary on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const auto file = fermi::cli::load_scenario_file(scenario);
        fermi::cli::run_command(command, file, out, std::cout, std::cerr, quiet);
        return kOk;
    } catch (const fermi::cli::SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fermi::InvalidParameters& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fermi::UnsupportedConfiguration& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fermi::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const fermi::NoRiseDetected& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
