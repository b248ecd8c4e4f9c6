#pragma once

namespace wvi {

// Entry point behind the `wvi` binary; callable in-process for tests.
// Exit codes: 0 success, 1 validation/parse error, 2 runtime error.
int run_cli(int argc, const char* const* argv);

}  // namespace wvi
