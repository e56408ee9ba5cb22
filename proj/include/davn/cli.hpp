#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace davn::cli {

enum ExitCode : int { ok = 0, io_or_config = 1, model_domain = 2 };

/// Runs the command line `args` (without the program name). `environment`
/// holds NAME=VALUE entries consulted for DAVN_ overrides.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::vector<std::string>& environment = {});

/// Process entry point.
int main(int argc, char** argv);

}  // namespace davn::cli
