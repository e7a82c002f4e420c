#pragma once

// Command-line front end: subcommands spectrum, winding, evolve, sweep,
// ensemble, fit and router, each writing CSV tables plus a JSON manifest.

#include <string>

namespace topopump::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Artifact version embedded in every table and manifest.
std::string version();

/// Parses argv, runs one subcommand and returns the process exit code.
int run(int argc, char** argv);

}  // namespace topopump::cli
