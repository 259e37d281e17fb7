#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "occtime/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Minimum occupation time below zero for a retiree: solve, tabulate, simulate, verify, sweep"};
    std::string config_path, out_path, command;
    occtime::VerifyHooks hooks;
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--command", command, "what to run")
        ->required()
        ->check(CLI::IsMember({"solve", "curve", "simulate", "verify", "sweep"}));
    app.add_option("--test-corrupt-y0", hooks.y0_factor, "multiply y0 before verify (fault injection)")
        ->group("");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    occtime::RunConfig cfg;
    try {
        cfg = occtime::load_config(config_path);
    } catch (const occtime::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    occtime::CommandResult result;
    try {
        result = occtime::run_command(command, cfg, hooks);
    } catch (const std::exception& e) {
        std::cerr << "error: " << command << " failed: " << e.what() << "\n";
        return 3;
    }

    if (out_path.empty()) {
        std::cout << result.text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << result.text)) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 2;
        }
    }
    if (!result.pass) {
        std::cerr << "verify: one or more checks failed\n";
        return 1;
    }
    return 0;
}
