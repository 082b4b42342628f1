#include <iostream>

#include <CLI11.hpp>

#include "sympjet/cli.hpp"

int main(int argc, char** argv) {
    sympjet::CommandSpec spec;
    CLI::App app{"Symplectic jet interpolation toolkit"};
    app.add_option("command", spec.command, "Command to run")
        ->required()
        ->check(CLI::IsMember(sympjet::command_names()));
    app.add_option("-i,--input", spec.input, "Input JSON file");
    app.add_option("-o,--output", spec.output, "Output JSON file (default: stdout)");
    app.add_option("--seed", spec.seed, "Seed for randomized commands");
    app.add_option("--tol", spec.tol, "Global comparison tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-degree", spec.max_degree, "Cap on attenuation degrees")->check(CLI::PositiveNumber);
    app.add_option("--stages", spec.stages, "Number of stacked jobs for multi-interp")->check(CLI::NonNegativeNumber);
    app.add_flag("--text", spec.text, "Plain-text report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors share the schema exit code.
        return app.exit(e) == 0 ? 0 : 2;
    }
    return sympjet::run(spec, std::cout, std::cerr);
}
