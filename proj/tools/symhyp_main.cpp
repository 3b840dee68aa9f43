#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "symhyp/cli/catalog.hpp"
#include "symhyp/cli/config.hpp"
#include "symhyp/cli/run.hpp"

namespace {

using symhyp::cli::Experiment;

std::vector<double> parse_s_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) {
            throw std::invalid_argument(item);
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for first-order symmetric hyperbolic systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string scenario;
    std::string s_list;
    std::uint64_t seed = 0;
    int nx = 0;

    const std::vector<std::pair<const char*, Experiment>> verbs{
        {"check", Experiment::kHypotheses},       {"solve", Experiment::kSolve},
        {"carleman", Experiment::kCarlemanScan},  {"observe", Experiment::kObservability},
        {"energy", Experiment::kEnergy},          {"identities", Experiment::kIdentities},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, exp] : verbs) {
        CLI::App* sub = app.add_subcommand(name, std::string("run the ") + symhyp::cli::to_string(exp) +
                                                     " experiment");
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--nx", nx, "spatial nodes");
        sub->add_option("--s", s_list, "comma separated s values");
        sub->add_option("--scenario", scenario, "catalog scenario name");
        subs.push_back(sub);
    }
    CLI::App* list = app.add_subcommand("scenarios", "list the builtin scenario catalog");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        symhyp::cli::list_scenarios(std::cout);
        return symhyp::cli::kExitOk;
    }

    symhyp::cli::RunConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) {
                std::cerr << "I/O error: cannot read '" << config_path << "'\n";
                return symhyp::cli::kExitIo;
            }
            std::ostringstream text;
            text << in.rdbuf();
            config = symhyp::cli::parse_config(text.str());
        }
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (subs[k]->parsed()) config.experiment = verbs[k].second;
        }
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--out")) config.output = out_dir;
        if (sub->count("--seed")) config.seed = seed;
        if (sub->count("--nx")) config.grid.nx = nx;
        if (sub->count("--scenario")) {
            config.scenario = scenario;
            config.inline_scenario.reset();
        }
        if (sub->count("--s")) {
            try {
                config.s_grid = parse_s_list(s_list);
            } catch (const std::exception&) {
                std::cerr << "config error:\n  --s: malformed list '" << s_list << "'\n";
                return symhyp::cli::kExitUsage;
            }
        }
    } catch (const symhyp::cli::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
        return symhyp::cli::kExitUsage;
    }
    return symhyp::cli::run(config, std::cout, std::cerr);
}
