#pragma once

// Command-line surface. Exit codes: 0 success, 1 mathematical negative
// (NotFound / NotSeparableThroughP / PInInterior or a failed check), 2 input
// error. Machine-readable JSON goes to the output stream, diagnostics to the
// error stream.

#include <ostream>

namespace persep {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace persep
