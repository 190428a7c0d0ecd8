#pragma once

#include <string>
#include <vector>

namespace hpl::driver {

/// Exit codes shared with the CLI: 0 ok, 2 config error, 3 numerical
/// failure (NaN / CFL refusal), 4 blowup-suspected termination.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitBlowup = 4;

int cmd_run(const std::string& config_path);

int cmd_audit(const std::string& run_dir, std::vector<int> orders,
              const std::string& pairs_spec = "");

int cmd_derive(bool json_mode, const std::string& out_path = "");

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& grid_specs,
              const std::string& self_exe);

}  // namespace hpl::driver
