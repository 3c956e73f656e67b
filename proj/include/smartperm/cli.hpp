#pragma once

#include <ostream>

namespace smartperm {

// Entry point of the `smartperm` tool. Exit codes: 0 clean, 1 findings, 2 error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smartperm
