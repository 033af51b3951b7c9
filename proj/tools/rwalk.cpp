#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rwalk/commands.hpp"
#include "rwalk/config.hpp"
#include "rwalk/parallel.hpp"

namespace {

constexpr int kUsageError = 2;

const std::map<std::string, std::string> kHelp{
    {"distribution", "step law: rademacher | gaussian:MEAN,SD | twopoint:A,B,PROB_A | constant:C | pareto:ALPHA,SCALE"},
    {"p", "reinforcement probability in [0,1]; fractions like 1/3 are accepted"},
    {"sign", "positive | negative"},
    {"truncation", "innovation truncation at birth: none | sqrt | linear"},
    {"n", "walk length"},
    {"replicas", "independent replicas"},
    {"seed", "master seed (default: $REINFORCED_WALKS_SEED, else 1)"},
    {"checkpoints", "comma-separated step indices (default 10, 100, ..., n)"},
    {"normalization", "simulate: none | linear | sqrt"},
    {"centering", "simulate: subtract centering * n before normalizing (default: the limit of S(n)/n)"},
    {"process", "limits: bm | noise-reinforced | counterbalanced"},
    {"grid", "limits: comma-separated times (default 0.01, ..., 1)"},
    {"functionals", "oracle: comma-separated S, Z, N:j, Delta:j (default: all)"},
    {"checks", "verify: comma-separated check names (default: all)"},
    {"level", "verify: KS level, 0.01 or 0.05"},
    {"parallelism", "worker threads (default: available processors); never changes results"},
    {"output", "output path, - for stdout"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Step-reinforced random walks: simulation, exact moments, limit processes and checks"};
    std::string command;
    std::string config_path;
    app.add_option("command", command, "simulate | moments | oracle | limits | verify");
    app.add_option("-c,--config", config_path, "YAML config, or an earlier output whose config block to reuse");

    std::map<std::string, std::vector<std::string>> flags;
    for (const auto& key : rwalk::config_keys()) {
        if (key == "command") continue;
        std::string names = "--" + key;
        if (key == "n") names = "-n,--n";
        if (key == "output") names = "-o,--output";
        auto* opt = app.add_option(names, flags[key], kHelp.at(key));
        if (key == "checkpoints" || key == "grid" || key == "functionals" || key == "checks") opt->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? 0 : kUsageError;
    }

    rwalk::RunConfig cfg;
    cfg.parallelism = rwalk::default_parallelism();
    try {
        if (!config_path.empty()) rwalk::load_config_file(cfg, config_path);
        if (!cfg.is_explicit("seed")) {
            if (const char* env = std::getenv(rwalk::kSeedEnvironmentVariable); env && *env) {
                cfg.set("seed", {env});
            }
        }
        for (const auto& key : rwalk::config_keys()) {
            if (key != "command" && app.count("--" + key) > 0) cfg.set(key, flags[key]);
        }
        if (!command.empty()) cfg.set("command", {command});
        if (!cfg.is_explicit("command")) throw rwalk::ConfigError("no command given (see --help)");
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "rwalk: " << e.what() << '\n';
        return kUsageError;
    }

    std::ofstream file;
    if (cfg.output != "-") {
        file.open(cfg.output, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "rwalk: cannot write output '" << cfg.output << "'\n";
            return kUsageError;
        }
    }
    std::ostream& out = cfg.output == "-" ? std::cout : file;
    std::ostream& table = cfg.output == "-" ? std::cerr : std::cout;

    std::ostringstream buffer;
    int status = 0;
    try {
        status = rwalk::run_command(cfg, buffer, table);
    } catch (const rwalk::ConfigError& e) {
        std::cerr << "rwalk: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "rwalk: " << e.what() << '\n';
        return kUsageError;
    }
    out << buffer.str();
    out.flush();
    if (!out) {
        std::cerr << "rwalk: write to '" << cfg.output << "' failed\n";
        return kUsageError;
    }
    return status;
}
