#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace posicert::cli {

enum ExitCode : int {
  kOk = 0,             // success, Found, identity true
  kInternal = 1,       // unexpected failure
  kUsage = 2,          // bad arguments or malformed input
  kIdentityFalse = 3,  // verification failed
  kExhausted = 4,      // search exhausted without a certificate
};

/// Runs one `posicert` command. `args` excludes the program name. Reports go
/// to `out` (JSON with --json), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posicert::cli
