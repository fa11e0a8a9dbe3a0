#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cslmeson::cli
{

enum ExitCode : int
{
    kOk = 0,
    kUsage = 2,
    kConfig = 3,
    kNumeric = 4,
};

/// Runs one command line. Data goes to --out or `out`; the run manifest goes
/// to OUT.manifest.json or, without --out, to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cslmeson::cli
