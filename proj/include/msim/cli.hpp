#pragma once

namespace msim {

// command-line entry point (subcommands: simulate, features, classify,
// cluster, stylized, reproduce).  Exit codes: 0 success, 1 usage or
// configuration error, 2 missing or inconsistent artifacts, 3 numeric
// failure.
int run_cli(int argc, const char* const* argv);

}  // namespace msim
