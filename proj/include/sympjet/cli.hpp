#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sympjet/json_io.hpp"

namespace sympjet {

struct CommandSpec {
    std::string command;  // factor | interp | multi-interp | tame-normalize | verify | unavoidable | lemmas
    std::string input;    // JSON file; empty means an empty object
    std::string output;   // empty means stdout
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> max_degree;
    std::optional<int> stages;
    bool text = false;
};

struct CommandResult {
    int exit_code = 0;
    json output;       // always carries "config"
    std::string text;  // plain-text rendering of the checks
};

const std::vector<std::string>& command_names();

/// Runs a command on an already parsed input document.
CommandResult execute(const CommandSpec& spec, const json& input);

/// Reads spec.input, executes, writes the JSON (and optional text) report.
/// Exit codes: 0 ok, 1 usage/io, 2 schema, 3 precondition, 4 numeric.
int run(const CommandSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace sympjet
