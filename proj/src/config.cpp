#include "rwalk/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rwalk/format.hpp"
#include "rwalk/oracle.hpp"
#include "rwalk/verify.hpp"

namespace rwalk {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Simulate, "simulate"}, {Command::Moments, "moments"}, {Command::Oracle, "oracle"},
    {Command::Limits, "limits"},     {Command::Verify, "verify"},
};

std::uint64_t parse_count(const std::string& key, const std::string& text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        // Accept integral floating forms such as 1e6.
        double d = 0.0;
        try {
            d = parse_double(text);
        } catch (const std::invalid_argument&) {
            throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
        }
        if (!(d >= 0.0 && d < 1.8e19 && std::floor(d) == d)) {
            throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
        }
        value = static_cast<std::uint64_t>(d);
    }
    return value;
}

double parse_real(const std::string& key, const std::string& text) {
    try {
        return parse_double(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
}

const std::string& single(const std::string& key, const std::vector<std::string>& values) {
    if (values.size() != 1) throw ConfigError(key + ": expected a single value");
    return values.front();
}

Normalization parse_normalization(const std::string& text) {
    if (text == "none") return Normalization::None;
    if (text == "linear") return Normalization::Linear;
    if (text == "sqrt") return Normalization::Sqrt;
    throw ConfigError("normalization: unknown value '" + text + "' (none|linear|sqrt)");
}

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::Linear: return "linear";
        case Normalization::Sqrt: break;
    }
    return "sqrt";
}

std::vector<std::string> node_values(const std::string& key, const YAML::Node& node) {
    std::vector<std::string> out;
    if (node.IsScalar()) {
        out.push_back(node.Scalar());
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (!item.IsScalar()) throw ConfigError(key + ": nested lists are not supported");
            out.push_back(item.Scalar());
        }
    } else if (!node.IsNull()) {
        throw ConfigError(key + ": expected a scalar or a list");
    }
    return out;
}

void load_node(RunConfig& cfg, const YAML::Node& root) {
    if (!root.IsMap()) throw ConfigError("config: expected a mapping of keys to values");
    for (const auto& entry : root) {
        const auto key = entry.first.as<std::string>();
        if (key == "version") continue;
        cfg.set(key, node_values(key, entry.second));
    }
}

}  // namespace

std::string to_string(Command command) {
    for (const auto& [c, name] : kCommands) {
        if (c == command) return std::string(name);
    }
    return "?";
}

Command parse_command(std::string_view text) {
    for (const auto& [c, name] : kCommands) {
        if (text == name) return c;
    }
    throw ConfigError("unknown command '" + std::string(text) + "' (simulate|moments|oracle|limits|verify)");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "command",       "distribution", "p",       "sign",    "truncation", "n",           "replicas",
        "seed",          "checkpoints",  "normalization", "centering", "process", "grid",  "functionals",
        "checks",        "level",        "parallelism",   "output",
    };
    return keys;
}

std::vector<std::uint64_t> decade_checkpoints(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 10; d < n; d *= 10) out.push_back(d);
    out.push_back(n);
    return out;
}

void RunConfig::set(const std::string& key, const std::vector<std::string>& values) {
    try {
        if (key == "command") {
            command = parse_command(single(key, values));
        } else if (key == "distribution") {
            distribution = StepDistribution::parse(single(key, values)).to_string();
        } else if (key == "p") {
            p = parse_real(key, single(key, values));
        } else if (key == "sign") {
            sign = parse_sign(single(key, values));
        } else if (key == "truncation") {
            truncation = parse_truncation(single(key, values));
        } else if (key == "n") {
            n = parse_count(key, single(key, values));
        } else if (key == "replicas") {
            replicas = parse_count(key, single(key, values));
        } else if (key == "seed") {
            seed = parse_count(key, single(key, values));
        } else if (key == "checkpoints") {
            checkpoints.clear();
            for (const auto& v : values) checkpoints.push_back(parse_count(key, v));
        } else if (key == "normalization") {
            normalization = parse_normalization(single(key, values));
        } else if (key == "centering") {
            centering = parse_real(key, single(key, values));
        } else if (key == "process") {
            process = single(key, values);
        } else if (key == "grid") {
            grid.clear();
            for (const auto& v : values) grid.push_back(parse_real(key, v));
        } else if (key == "functionals") {
            functionals.clear();
            for (const auto& v : values) functionals.push_back(Functional::parse(v).to_string());
        } else if (key == "checks") {
            checks.clear();
            for (const auto& v : values) checks.push_back(to_string(parse_check_id(v)));
        } else if (key == "level") {
            level = parse_real(key, single(key, values));
        } else if (key == "parallelism") {
            parallelism = static_cast<unsigned>(parse_count(key, single(key, values)));
        } else if (key == "output") {
            output = single(key, values);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
    }
    explicit_keys.insert(key);
}

void RunConfig::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0,1]");
    if (n == 0) throw ConfigError("n must be positive");
    if (replicas == 0) throw ConfigError("replicas must be positive");
    if (parallelism == 0) throw ConfigError("parallelism must be positive");
    if (level != 0.01 && level != 0.05) throw ConfigError("level must be 0.01 or 0.05");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0 || checkpoints[i] > n || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
            throw ConfigError("checkpoints must be strictly increasing within 1..n");
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || (i > 0 && grid[i] < grid[i - 1])) {
            throw ConfigError("grid must be sorted and non-negative");
        }
    }
    if (process != "bm" && process != "noise-reinforced" && process != "counterbalanced") {
        throw ConfigError("process must be bm, noise-reinforced or counterbalanced");
    }
    try {
        step_distribution();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("distribution: ") + e.what());
    }
}

RunConfig RunConfig::resolved() const {
    RunConfig r = *this;
    if (r.checkpoints.empty()) r.checkpoints = decade_checkpoints(n);
    if (r.grid.empty()) {
        for (int i = 1; i <= 100; ++i) r.grid.push_back(i / 100.0);
    }
    if (r.functionals.empty()) {
        r.functionals = {"S", "Z"};
        for (std::uint64_t j = 1; j <= n; ++j) {
            r.functionals.push_back(Functional::occupancy(j).to_string());
            r.functionals.push_back(Functional::signed_occupancy(j).to_string());
        }
    }
    if (r.checks.empty()) {
        for (auto id : all_checks()) r.checks.push_back(to_string(id));
    }
    if (!r.centering) {
        const double m1 = step_distribution().m1();
        r.centering = sign == Sign::Positive ? m1 : (1.0 - p) / (1.0 + p) * m1;
    }
    return r;
}

void load_config_text(RunConfig& cfg, std::string_view text) {
    std::string yaml;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '#') {
        // Comment block echoed at the top of a CSV output.
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line) && line.starts_with("#")) {
            yaml += line.substr(line.starts_with("# ") ? 2 : 1) + '\n';
        }
    } else {
        yaml = text;
    }
    try {
        auto root = YAML::Load(yaml);
        if (root.IsMap() && root["config"] && root["config"].IsMap()) root = root["config"];
        if (root.IsNull()) return;
        load_node(cfg, root);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    load_config_text(cfg, text.str());
}

namespace {

// Keys written for each command, in output order.
std::vector<std::string> keys_for(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Simulate:
            return {"distribution", "p", "sign", "truncation", "n", "replicas", "seed", "checkpoints", "normalization",
                    "centering"};
        case Command::Moments: return {"distribution", "p", "sign", "truncation", "n", "checkpoints"};
        case Command::Oracle: return {"distribution", "p", "truncation", "n", "functionals"};
        case Command::Limits: return {"process", "p", "replicas", "seed", "grid"};
        case Command::Verify: {
            std::vector<std::string> keys{"seed", "checks", "level"};
            for (const char* k : {"distribution", "p", "sign", "truncation", "n", "replicas"}) {
                if (cfg.is_explicit(k)) keys.emplace_back(k);
            }
            return keys;
        }
    }
    return {};
}

template <class T, class F>
std::string yaml_list(const std::vector<T>& values, F fmt) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + fmt(values[i]);
    return out + "]";
}

std::string yaml_value(const RunConfig& c, const std::string& key) {
    const auto count = [](std::uint64_t v) { return std::to_string(v); };
    const auto text = [](const std::string& s) { return s; };
    if (key == "distribution") return c.distribution;
    if (key == "p") return format_double(c.p);
    if (key == "sign") return to_string(c.sign);
    if (key == "truncation") return to_string(c.truncation);
    if (key == "n") return count(c.n);
    if (key == "replicas") return count(c.replicas);
    if (key == "seed") return count(c.seed);
    if (key == "checkpoints") return yaml_list(c.checkpoints, count);
    if (key == "normalization") return to_string(c.normalization);
    if (key == "centering") return format_double(*c.centering);
    if (key == "process") return c.process;
    if (key == "grid") return yaml_list(c.grid, format_double);
    if (key == "functionals") return yaml_list(c.functionals, text);
    if (key == "checks") return yaml_list(c.checks, text);
    if (key == "level") return format_double(c.level);
    return "";
}

}  // namespace

std::string config_yaml(const RunConfig& cfg) {
    const auto r = cfg.resolved();
    std::string out = "command: " + to_string(r.command) + '\n';
    for (const auto& key : keys_for(r)) out += key + ": " + yaml_value(r, key) + '\n';
    return out;
}

std::string config_comment_block(const RunConfig& cfg) {
    std::string out = "# version: " + std::string(kArtifactVersion) + '\n';
    std::istringstream in(config_yaml(cfg));
    std::string line;
    while (std::getline(in, line)) out += "# " + line + '\n';
    return out;
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
    const auto r = cfg.resolved();
    nlohmann::ordered_json j;
    j["version"] = kArtifactVersion;
    j["command"] = to_string(r.command);
    for (const auto& key : keys_for(r)) {
        if (key == "p") {
            j[key] = r.p;
        } else if (key == "centering") {
            j[key] = *r.centering;
        } else if (key == "level") {
            j[key] = r.level;
        } else if (key == "n") {
            j[key] = r.n;
        } else if (key == "replicas") {
            j[key] = r.replicas;
        } else if (key == "seed") {
            j[key] = r.seed;
        } else if (key == "checkpoints") {
            j[key] = r.checkpoints;
        } else if (key == "grid") {
            j[key] = r.grid;
        } else if (key == "functionals") {
            j[key] = r.functionals;
        } else if (key == "checks") {
            j[key] = r.checks;
        } else {
            j[key] = yaml_value(r, key);
        }
    }
    return j;
}

}  // namespace rwalk
