#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csfs::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

// Runs one csfs command. `args` excludes the program name. Results go to
// files named by -o, or to `out` when -o is absent or "-"; diagnostics and
// warnings go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csfs::cli
