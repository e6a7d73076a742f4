#pragma once

namespace displab {

// Subcommands: norms, oscsweep, identities, born-verify, evolve, stein-tomas, accept.
// Exit codes: 0 ok, 1 suite failure, 2 config or usage error.
int run(int argc, char** argv);

}  // namespace displab
