#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sgmsup::cli {

/// Runs one subcommand (`match`, `mask`, `loss`, `patches`, `eval`,
/// `profile`). `args` excludes the program name. Diagnostics go to `err`;
/// `out` only receives help text and `--print-report` output.
/// Returns 0 on success, 1 on a pipeline error, 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgmsup::cli
