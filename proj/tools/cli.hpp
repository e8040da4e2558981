#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cutfem {

/// Command-line entry point. Returns 0 on success, 2 on bad arguments and 1 when the
/// computation fails.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cutfem
