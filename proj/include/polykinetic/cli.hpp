#pragma once

namespace polykinetic {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitSolver = 3, kExitAudit = 4 };

// Subcommands: run <config>, audit <trace.csv|checkpoint>, scenario <name>, selftest.
int cli_main(int argc, char** argv);

} // namespace polykinetic
