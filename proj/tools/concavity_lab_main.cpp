#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "concavity/experiment.hpp"
#include "concavity/io.hpp"

namespace {

struct SubcommandInfo {
    const char* name;
    const char* description;
};

constexpr SubcommandInfo kCommands[] = {
    {"solve", "solve the semilinear problem and emit the solution field"},
    {"analyze", "classify concavity of the solution with witnesses"},
    {"verify-representation",
     "Monte Carlo check of the second-derivative representation at probes"},
    {"exit-time", "estimate expected Brownian exit times against the ball bound"},
    {"rearrange", "rearrangement profiles and equal-measure ball comparison"},
    {"sweep-aspect", "peak Hessian eigenvalue decay across domain aspect ratios"},
    {"check-conditions", "evaluate the slope thresholds for both comparisons"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for concavity properties of the "
                 "semilinear Poisson equation",
                 "concavity-lab"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");  // frees -h / --h

    std::string config_path;
    double h_flag = 0.0;
    long seed_flag = 0;
    long walks_flag = 0;
    std::string out_flag;

    for (const SubcommandInfo& info : kCommands) {
        CLI::App* sub = app.add_subcommand(info.name, info.description);
        sub->set_help_flag("--help", "print help and exit");
        sub->add_option("--config", config_path, "path to the JSON experiment config")
            ->required();
        sub->add_option("--h", h_flag, "override grid spacing");
        sub->add_option("--seed", seed_flag, "override walk RNG seed");
        sub->add_option("--n-walks", walks_flag, "override walk count");
        sub->add_option("--out", out_flag, "override output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        std::string text;
        try {
            text = concavity::io::read_text(config_path);
        } catch (const std::exception& e) {
            throw std::invalid_argument(e.what());
        }
        concavity::ExperimentConfig cfg = concavity::parse_config(text);
        if (cfg.command != sub->get_name())
            throw std::invalid_argument("cli.run: config command '" +
                                        cfg.command +
                                        "' does not match subcommand '" +
                                        sub->get_name() + "'");
        concavity::CliOverrides overrides;
        if (sub->count("--h") > 0) overrides.h = h_flag;
        if (sub->count("--seed") > 0) overrides.seed = seed_flag;
        if (sub->count("--n-walks") > 0) overrides.n_walks = walks_flag;
        if (sub->count("--out") > 0) overrides.out = out_flag;
        concavity::apply_overrides(cfg, overrides);
        return concavity::run_experiment(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
