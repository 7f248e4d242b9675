#ifndef CMRAD_DRIVER_HPP
#define CMRAD_DRIVER_HPP

#include <string>
#include <vector>

#include "cmrad/jsonio.hpp"

namespace cmrad::cli {

// Run the command line and return the process exit code:
//   0 success, 1 domain error, 2 precision/inconclusive, 3 internal
//   inconsistency, 64 malformed arguments.
// When envelope_out is non-null the ResultEnvelope is copied there
// (left empty on usage errors), which is how the tests observe outputs.
int run(const std::vector<std::string>& args, io::json* envelope_out = nullptr);

int run(int argc, const char* const* argv);

}  // namespace cmrad::cli

#endif
