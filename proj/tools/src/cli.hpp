#pragma once

// Command-line front end. Subcommands:
//
//   residual        sweep a Lagrange or Cauchy residual over a grid
//   classify        sort a pair (F, G) into a solution family
//   construct       tabulate f = (A + K int dt/g^2) g, optionally against a reference
//   verify-example  end-to-end check of the (cosh, exp) pair
//   suite           random round-trip experiment
//
// Exit codes: 0 pass, 1 quantitative failure, 2 usage or parse error.

#include <iosfwd>
#include <string>
#include <vector>

namespace mvtlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable capping the suite's worker threads.
inline constexpr const char* kThreadsEnv = "MVTLAB_THREADS";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvtlab::cli
