#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reconf {

/// Entry point of the `reconf` tool. args[0] is the program name. Returns
/// the process exit code: 0 iff the command ran and all its checks passed,
/// 1 on a failed check or runtime error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reconf
