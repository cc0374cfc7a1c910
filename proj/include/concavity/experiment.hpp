#pragma once

#include <optional>
#include <string>
#include <vector>

#include "concavity/geometry.hpp"
#include "concavity/nonlinearity.hpp"
#include "concavity/stochastic.hpp"

namespace concavity {

struct ProbeSpec {
    Vec2 point;
    Vec2 direction{1.0, 0.0};
    bool has_direction = false;
};

struct ExperimentConfig {
    std::string command;
    std::optional<DomainSpec> domain;
    std::optional<SourceKind> f_kind;
    double f_c = 0.0;
    double f_a = 0.0;
    double h = 0.0;
    bool has_h = false;
    WalkConfig walk;
    std::vector<ProbeSpec> probes;
    std::string output_dir = "out";
    bool emit_svg = false;
    std::vector<double> aspects;  // sweep-aspect only
    int levels = 8;               // contour levels for SVG output
    int bins = 0;                 // exit histogram bins (0: no histogram)
};

// Strict parse: the key set of every object is checked against what the
// chosen command references; unknown or unused keys are rejected by name.
ExperimentConfig parse_config(const std::string& json_text);

struct CliOverrides {
    std::optional<double> h;
    std::optional<long> seed;
    std::optional<long> n_walks;
    std::optional<std::string> out;
};

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& overrides);

// Executes the configured command and writes its artifact files under
// cfg.output_dir.  Returns 0 on success or 3 when a certified theorem check
// fails; validation problems throw std::invalid_argument and solver or
// estimator failures throw std::runtime_error.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace concavity
