#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clusterperf/experiment.hpp"
#include "clusterperf/report.hpp"

namespace clusterperf {

/// Everything a CLI invocation needs, with defaults applied.
///
/// Config files are flat JSON objects using the key names below; command-line
/// flags use the same names and take precedence.
///
///   model:   S, L, lambda, mu, mu_h (defaults to mu), xi, xi_h, eta, eta_h, semantics
///   solver:  delta, max_iterations, residual_target
///   sim:     seed, replications, confidence, horizon, warmup
///   oracle:  oracle_max_states
///   run:     methods, axis, values, threshold, preset, with_des, out, format
struct RunConfig {
    SystemParams params;
    MethodConfigs configs;
    std::vector<Method> methods{Method::Iterative};
    std::optional<SweepAxis> axis;
    std::vector<double> values;
    double threshold = 0.05;
    std::string preset;
    bool with_des = false;
    std::string out;  // empty: stdout
    OutputFormat format = OutputFormat::Csv;

    std::vector<std::string> keys_set;  // every key given by file or flag
};

/// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

/// The model defaults: S=500, L=1000, lambda=10, mu=mu_h=0.25,
/// xi=xi_h=0.001, eta=eta_h=0.5, paper-literal semantics.
RunConfig default_run_config();

/// Applies `file_text` (a flat JSON object, may be empty) and then
/// `overrides` (key -> textual value) on top of the defaults, then validates.
/// Throws ParameterError naming the offending key for any invalid key or value.
RunConfig parse_config(const std::string& file_text, const std::map<std::string, std::string>& overrides);

/// Reads `path` and forwards to parse_config.
RunConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides);

}  // namespace clusterperf
