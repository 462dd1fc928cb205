#pragma once

#include <string>

namespace hilfer::cli {

struct Options {
    std::string out_dir;          // overrides the config's output.dir when set
    int threads = 0;              // 0 keeps the runtime default
    std::string log_level = "info";  // quiet | info | debug
};

// Executes one scenario config. Returns the process exit code: 0 on
// success, 2 on configuration or validation errors, 3 on numerical failure
// (a verification task breaching its tolerance, or a solver reporting a
// nonfinite result).
int run_config(const std::string& config_path, const Options& opt);

// Full argv interface behind the `hilfer` binary: `hilfer run <config>`
// and `hilfer selftest`.
int dispatch(int argc, char** argv);

} // namespace hilfer::cli
