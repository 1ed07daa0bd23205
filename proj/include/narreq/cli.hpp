#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace narreq {

// Full command driver, also usable in-process by tests. `args` excludes the
// program name. Structured results go to `out`; on failure a machine-readable
// {"error": {"kind", "message"}} document goes to `err`.
// Exit codes: 0 ok, 1 usage, 2 validation, 3 verification failed, 4 resource
// guard tripped. Relative output paths resolve under $NARREQ_OUT_DIR when set.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace narreq
