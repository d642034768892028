#pragma once

#include <ostream>

namespace geoflow {

// Entry point behind the geoflow binary; factored out so the command table,
// exit codes and stream separation are unit-testable in-process.
// Machine output (report JSON, trajectory CSV) goes to `out`; human-readable
// summaries and errors go to `err`.
// Exit codes: 0 success, 1 check/validation failure, 2 bad input or unknown
// name, 3 I/O failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoflow
