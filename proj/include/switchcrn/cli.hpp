// Command-line front end.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace switchcrn {

/// Exit codes: 0 success, 1 usage error, 2 model validation error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "log:<lo>:<hi>:<count>", "lin:<lo>:<hi>:<count>" or a comma-separated list.
std::vector<double> parse_kappa_grid(const std::string& text);

}  // namespace switchcrn
