#pragma once

// Subcommand pipelines: each writes its CSV artifacts, optional SVG plots, the
// resolved configuration echo and a run manifest into one output directory.

#include <string>
#include <vector>

#include "einselect/scenario.hpp"

namespace einselect {

inline constexpr const char* kOutDirEnv = "EINSELECT_OUT_DIR";

const std::vector<std::string>& subcommands();

struct RunReport {
    int exit_code = 0;
    std::string message;
    std::string output_dir;
    std::vector<std::string> files;
    double wall_time_seconds = 0.0;
};

/// Precedence: explicit --out, then $EINSELECT_OUT_DIR, then output.dir.
std::string resolve_output_dir(const std::string& cli_out, const Scenario& scenario);

/// Runs one pipeline. Never throws for module errors: they become exit codes
/// (2 config, 3 truncation, 4 quadrature, 5 degeneracy; 1 otherwise) and every
/// file written by the failed run is removed.
RunReport run_command(const std::string& subcommand, const Scenario& scenario, const std::string& out_dir);

/// Loads the config file first; config errors exit with code 2.
RunReport run_from_config(const std::string& subcommand, const std::string& config_path,
                          const std::string& cli_out);

} // namespace einselect
