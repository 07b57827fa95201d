#pragma once

#include <iosfwd>

namespace seconv {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

// `seconv add-noise|denoise|eval|bench|make-weights [flags]`. Returns the
// process exit code; all output goes to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seconv
