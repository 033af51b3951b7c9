#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rwalk/distribution.hpp"
#include "rwalk/monte_carlo.hpp"
#include "rwalk/types.hpp"

namespace rwalk {

inline constexpr std::string_view kArtifactVersion = "0.1.0";
inline constexpr const char* kSeedEnvironmentVariable = "REINFORCED_WALKS_SEED";

enum class Command { Simulate, Moments, Oracle, Limits, Verify };

std::string to_string(Command command);
Command parse_command(std::string_view text);

/// Thrown for malformed configuration; the CLI maps it to exit status 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    Command command = Command::Simulate;
    std::string distribution = "rademacher";
    double p = 0.25;
    Sign sign = Sign::Positive;
    Truncation truncation = Truncation::None;
    std::uint64_t n = 1000;
    std::uint64_t replicas = 100;
    std::uint64_t seed = 1;
    /// Empty means the command default.
    std::vector<std::uint64_t> checkpoints;
    Normalization normalization = Normalization::Sqrt;
    /// Defaults to the almost-sure limit of S(n)/n.
    std::optional<double> centering;
    std::string process = "bm";
    /// Times for `limits`; empty means 0.01, 0.02, ..., 1.
    std::vector<double> grid;
    /// Oracle functionals ("S", "Z", "N:j", "Delta:j"); empty means all of them.
    std::vector<std::string> functionals;
    /// Verify checks; empty means the full suite.
    std::vector<std::string> checks;
    double level = 0.01;
    unsigned parallelism = 1;
    std::string output = "-";

    /// Keys set by a config file or flag. Verify applies only these on top of
    /// each check's defaults.
    std::set<std::string> explicit_keys;

    bool is_explicit(const std::string& key) const { return explicit_keys.contains(key); }
    StepDistribution step_distribution() const { return StepDistribution::parse(distribution); }

    /// Sets `key` from its textual values (one entry for scalars) and marks it
    /// explicit. Throws ConfigError for unknown keys or unparsable values.
    void set(const std::string& key, const std::vector<std::string>& values);
    /// Throws ConfigError on a violated constraint.
    void validate() const;
    /// Copy with every command default filled in (checkpoints, grid,
    /// functionals, checks, centering).
    RunConfig resolved() const;
};

/// 10, 100, ... below n, then n.
std::vector<std::uint64_t> decade_checkpoints(std::uint64_t n);

/// Every key the config file and the command line understand.
const std::vector<std::string>& config_keys();

/// Reads a YAML config, or the config echoed at the top of an earlier output
/// (CSV comment block or the "config" member of a JSON report).
void load_config_text(RunConfig& cfg, std::string_view text);
void load_config_file(RunConfig& cfg, const std::string& path);

/// The resolved config as YAML lines, without parallelism and output path,
/// which never change a result. For verify only explicit walk keys appear.
std::string config_yaml(const RunConfig& cfg);
/// config_yaml with every line prefixed by "# ", plus the artifact version.
std::string config_comment_block(const RunConfig& cfg);
nlohmann::ordered_json config_json(const RunConfig& cfg);

}  // namespace rwalk
