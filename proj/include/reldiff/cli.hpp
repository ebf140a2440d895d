#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace reldiff {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "run_out";
    std::optional<std::uint64_t> seed_override;
    int workers = 0;  // 0 = hardware concurrency
    bool verbose = false;
};

// exit codes: 0 pass, 1 check/experiment failure, 2 usage or config error
int cmd_validate_field(const CliOptions& opt);
int cmd_kubo(const CliOptions& opt);
int cmd_run(const CliOptions& opt);

int cli_main(int argc, const char* const* argv);

}  // namespace reldiff
