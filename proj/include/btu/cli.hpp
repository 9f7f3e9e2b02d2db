#pragma once

#include <iosfwd>

namespace btu {

/// Entry point of the `btu` tool. Documents go to `out` (or to --out),
/// diagnostics to `err`. Returns 0 on success, 1 on a computation error and
/// 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace btu
