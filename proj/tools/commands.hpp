#pragma once

#include "job_config.hpp"

#include <iosfwd>
#include <string>

namespace hartorus::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kOther = 1 };

void cmd_invariants(const JobConfig& job, std::ostream& out);
void cmd_laplace(const JobConfig& job, std::ostream& out);
void cmd_steklov(const JobConfig& job, std::ostream& out);
/// Returns false if every row failed.
bool cmd_convergence(const JobConfig& job, std::ostream& out);

/// Maps the active exception to an exit code and prints it to `err`.
int report_exception(std::ostream& err);

/// Full command line: parses argv, runs the subcommand, returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hartorus::cli
