#pragma once
#include <iosfwd>
#include <string>

#include "edgelab/config.hpp"

namespace edgelab {

enum ExitCode { kOk = 0, kConfigError = 2, kDomainError = 3, kNumericalError = 4 };

struct CommandFlags {
    bool require_crossing = false;
};

// Each command writes its artifacts under cfg.out and throws on failure.
void cmd_spectrum(const RunConfig& cfg, const CommandFlags& flags, std::ostream& log);
void cmd_match_c(const RunConfig& cfg, std::ostream& log);
void cmd_exist(const RunConfig& cfg, std::ostream& log);
void cmd_evolve(const RunConfig& cfg, std::ostream& log);
void cmd_bulk(const RunConfig& cfg, std::ostream& log);

// dispatch by subcommand name and map exceptions to exit codes
int run_command(const std::string& name, const RunConfig& cfg, const CommandFlags& flags, std::ostream& log,
                std::ostream& err);

// exit code for an in-flight exception; call from a catch block
int exit_code_for_current_exception(std::ostream& err);

}
