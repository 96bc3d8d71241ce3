#pragma once

namespace tmo {

/// Exit codes: 0 success, 2 configuration or precondition error, 3 numerical error.
int run_cli(int argc, char** argv);

}  // namespace tmo
