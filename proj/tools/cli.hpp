#pragma once

namespace flightrl::cli {

// Exit codes. Scripts branch on these, so they are part of the interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;         // training diverged, benchmark missed, I/O
inline constexpr int kExitUsage = 2;           // bad flags / unknown subcommand
inline constexpr int kExitConfig = 3;          // unreadable or invalid config, bad precondition
inline constexpr int kExitUnknownPreset = 4;   // eval --scenario with an unknown name
inline constexpr int kExitCheckpoint = 5;      // unreadable or incompatible checkpoint

// Full command-line entry point (argv[0] is the program name). Never throws;
// all failures are reported on stderr and mapped to the codes above.
int run(int argc, const char* const* argv);

}  // namespace flightrl::cli
