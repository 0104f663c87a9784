#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cardio {

/// Subcommands: run, ensemble, mms, diagnose, mesh-info. Returns 0 on
/// success, 1 on usage errors, 2 on runtime failures (messages on err).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace cardio
