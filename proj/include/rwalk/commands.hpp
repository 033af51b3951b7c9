#pragma once

#include <iosfwd>

#include "rwalk/config.hpp"

namespace rwalk {

// Each command writes its complete output to `out` and returns the process
// exit status: 0 on success, 1 when a check or cross-check fails. Invalid
// configurations throw ConfigError.

int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_moments(const RunConfig& cfg, std::ostream& out);
int cmd_oracle(const RunConfig& cfg, std::ostream& out);
int cmd_limits(const RunConfig& cfg, std::ostream& out);
/// JSON report to `out`, summary table to `table`.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& table);

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& table);

}  // namespace rwalk
