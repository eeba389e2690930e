#pragma once

#include <iosfwd>

namespace narrascope::cli {

// Exit codes: 0 success, 1 pipeline error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPipeline = 1;
inline constexpr int kExitUsage = 2;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace narrascope::cli
