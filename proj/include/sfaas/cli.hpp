#pragma once

#include <ostream>

namespace sfaas {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitSaturated = 3,  // saturation or unstable-only results
};

// Entry point of the `sfaas` tool. Subcommands: scenario1, scenario2,
// simulate, oracle, selftest.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

// Quick invariant suite: oracle identities plus a transition soak with drain.
int run_selftest(std::ostream& out);

}  // namespace sfaas
