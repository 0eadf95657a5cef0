#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinprobe::cli {

enum ExitCode : int { ok = 0, usage = 2, input = 3, numerical = 4 };

/// Runs one command line (without the program name).  Results that have no
/// --out go to `out`; diagnostics and warnings go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace spinprobe::cli
