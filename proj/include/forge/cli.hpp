#pragma once

#include <string>
#include <vector>

namespace forge {

/// Full CLI dispatch, callable in-process for tests. Exit codes: 0 success,
/// 1 domain error (machine-readable JSON on err), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forge
