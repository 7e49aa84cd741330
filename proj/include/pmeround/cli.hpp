// Command-line entry point, exposed as a library function for in-process
// testing. Exit codes: 0 success, 1 validation/computation error, 2 usage.
#pragma once

namespace pmeround {

int cli_main(int argc, const char* const* argv);

}  // namespace pmeround
