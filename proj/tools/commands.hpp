#pragma once

#include "json_writer.hpp"

#include <string>
#include <vector>

namespace aplab::cli {

enum class OptType { integer, real, flag, text, integer_list };

struct OptionSpec {
    std::string name; // flag is --name
    OptType type;
    json fallback;    // null: omitted from the config unless given
    std::string help;
    bool required = false;
    std::string excludes; // another option of the same command
    bool hidden = false;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<OptionSpec> options;
};

const std::vector<CommandSpec>& command_specs();

struct Output {
    Output() = default;
    Output(std::string doc, std::string text = {}) : document(std::move(doc)), console(std::move(text)) {}

    std::string document; // JSON, or CSV for scans
    std::string console;  // extra text for stdout (the verify matrix)
    int exit_code = 0;
    std::string failure; // failing keys, for stderr
};

/// Runs the experiment described by a config object ("subcommand" plus
/// parameters). Throws input_error / invariant_violation / resource_error.
Output execute(const json& config);

/// Config object recovered from an emitted JSON document or scan CSV.
json config_from_artifact(const std::string& text);

} // namespace aplab::cli
