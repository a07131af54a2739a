// Command-line front end for the cluster performability engine.
//
// Exit codes: 0 success, 1 validation error, 2 solver non-convergence,
// 3 exact-oracle size cap exceeded.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clusterperf/experiment.hpp"
#include "clusterperf/report.hpp"
#include "clusterperf/run_config.hpp"

namespace cp = clusterperf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitCapExceeded = 3;

struct FlagBinding {
    const char* flag;
    const char* key;
    const char* help;
};

const std::vector<FlagBinding>& flag_bindings() {
    static const std::vector<FlagBinding> bindings{
        {"--s", "S", "serving nodes including the head"},
        {"--l", "L", "system capacity in tasks"},
        {"--lambda", "lambda", "arrival rate"},
        {"--mu", "mu", "service rate per node"},
        {"--mu-h", "mu_h", "head service rate (must equal mu)"},
        {"--xi", "xi", "computing-node failure rate"},
        {"--xi-h", "xi_h", "head-node failure rate"},
        {"--eta", "eta", "computing-node repair rate"},
        {"--eta-h", "eta_h", "head-node repair rate"},
        {"--semantics", "semantics", "paper-literal | per-computing-node"},
        {"--delta", "delta", "MQL convergence threshold"},
        {"--max-iter", "max_iterations", "sweep cap"},
        {"--residual-target", "residual_target", "extra stop criterion on the balance residual (0 = off)"},
        {"--seed", "seed", "DES master seed"},
        {"--replications", "replications", "DES replications (>= 2)"},
        {"--horizon", "horizon", "DES measured time per replication"},
        {"--warmup", "warmup", "DES warmup (default 10% of horizon)"},
        {"--confidence", "confidence", "DES confidence level"},
        {"--oracle-max-states", "oracle_max_states", "state cap of the exact oracle"},
        {"--methods", "methods", "comma list of iterative,exact,des"},
        {"--axis", "axis", "sweep axis: lambda, mu, xi, xi_h, eta, eta_h, S, L"},
        {"--values", "values", "comma list of sweep values"},
        {"--threshold", "threshold", "compare pass threshold (relative)"},
        {"--out", "out", "output file (default stdout)"},
        {"--format", "format", "csv | json"},
    };
    return bindings;
}

// Keys each subcommand reads; anything else present is ignored with a warning.
std::set<std::string> relevant_keys(const std::string& command) {
    std::set<std::string> keys{"S",  "L",     "lambda", "mu",        "mu_h", "xi",
                               "xi_h", "eta", "eta_h",  "semantics", "out",  "format"};
    const std::set<std::string> solver{"delta", "max_iterations", "residual_target"};
    const std::set<std::string> sim{"seed", "replications", "horizon", "warmup", "confidence"};
    const std::set<std::string> oracle{"oracle_max_states"};
    auto add = [&](const std::set<std::string>& extra) { keys.insert(extra.begin(), extra.end()); };
    if (command == "solve") {
        add(solver);
    } else if (command == "exact") {
        add(oracle);
    } else if (command == "simulate") {
        add(sim);
    } else {
        add(solver);
        add(sim);
        add(oracle);
        add({"methods", "threshold", "axis", "values", "with_des", "preset"});
    }
    return keys;
}

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) {
                throw cp::ParameterError("out", "cannot open output file '" + path + "'");
            }
            stream = &file;
        }
    }
};

void report_failures(const std::vector<cp::SweepRow>& rows) {
    for (const auto& row : rows) {
        if (row.failure != cp::FailureKind::None) {
            std::cerr << "warning: " << cp::to_string(row.method) << " failed at S=" << row.params.servers
                      << " L=" << row.params.capacity << " lambda=" << cp::format_number(row.params.lambda) << ": "
                      << row.error << '\n';
        }
    }
}

int exit_code_for(const std::vector<cp::SweepRow>& rows) {
    bool not_converged = false;
    for (const auto& row : rows) {
        if (row.failure == cp::FailureKind::CapExceeded) {
            return kExitCapExceeded;
        }
        if (row.failure == cp::FailureKind::Validation) {
            return kExitValidation;
        }
        if (row.converged && !*row.converged) {
            not_converged = true;
        }
    }
    return not_converged ? kExitNotConverged : kExitOk;
}

bool key_given(const cp::RunConfig& cfg, const std::string& key) {
    return std::find(cfg.keys_set.begin(), cfg.keys_set.end(), key) != cfg.keys_set.end();
}

// Model keys given by the user replace the preset's base values, except the
// one that distinguishes the preset's curves.
cp::SweepSpec customize(cp::SweepSpec spec, const cp::Preset& preset, const cp::RunConfig& cfg) {
    const std::string curve = preset.curve_axis ? std::string(cp::to_string(*preset.curve_axis)) : std::string();
    const cp::SystemParams& u = cfg.params;
    cp::SystemParams& b = spec.base;
    auto take = [&](const char* key, auto& dst, const auto& src) {
        if (key_given(cfg, key) && curve != key) {
            dst = src;
        }
    };
    take("S", b.servers, u.servers);
    take("L", b.capacity, u.capacity);
    take("lambda", b.lambda, u.lambda);
    take("xi", b.xi, u.xi);
    take("xi_h", b.xi_h, u.xi_h);
    take("eta", b.eta, u.eta);
    take("eta_h", b.eta_h, u.eta_h);
    take("semantics", b.semantics, u.semantics);
    if (key_given(cfg, "mu") && curve != "mu") {
        b.mu = u.mu;
        b.mu_h = u.mu_h;
    }
    const double preset_horizon = spec.configs.sim.horizon;
    spec.configs = cfg.configs;
    if (!key_given(cfg, "horizon")) {
        spec.configs.sim.horizon = preset_horizon;
    }
    if (!cfg.values.empty()) {
        spec.values = cfg.values;
    }
    if (key_given(cfg, "methods")) {
        spec.methods = cfg.methods;
    }
    return spec;
}

int run(const std::string& command, const std::string& preset_name, const cp::RunConfig& cfg) {
    for (const auto& key : cfg.keys_set) {
        if (!relevant_keys(command).contains(key)) {
            std::cerr << "warning: key '" << key << "' is not used by '" << command << "'\n";
        }
    }
    Output out(cfg.out);
    if (command == "solve" || command == "exact" || command == "simulate") {
        const cp::Method method = command == "solve"   ? cp::Method::Iterative
                                  : command == "exact" ? cp::Method::Exact
                                                       : cp::Method::Des;
        const cp::SweepRow row = cp::evaluate(cfg.params, method, cfg.configs);
        report_failures({row});
        if (row.failure == cp::FailureKind::CapExceeded) {
            return kExitCapExceeded;
        }
        cp::write_rows(*out.stream, {row}, cfg.format);
        return exit_code_for({row});
    }
    if (command == "compare") {
        const auto methods = key_given(cfg, "methods")
                                 ? cfg.methods
                                 : std::vector<cp::Method>{cp::Method::Iterative, cp::Method::Exact, cp::Method::Des};
        const cp::ComparisonReport report = cp::compare(cfg.params, methods, cfg.configs, cfg.threshold);
        report_failures(report.rows);
        cp::write_comparison(*out.stream, report, cfg.format);
        return exit_code_for(report.rows);
    }
    if (command == "sweep") {
        if (!cfg.axis) {
            throw cp::ParameterError("axis", "sweep needs an axis");
        }
        cp::SweepSpec spec;
        spec.base = cfg.params;
        spec.axis = *cfg.axis;
        spec.values = cfg.values;
        spec.methods = cfg.methods;
        spec.configs = cfg.configs;
        const auto rows = cp::run_sweep(spec);
        report_failures(rows);
        cp::write_rows(*out.stream, rows, cfg.format);
        return exit_code_for(rows);
    }
    // repro
    const cp::Preset preset = cp::make_preset(preset_name, cfg.with_des);
    std::vector<cp::SweepRow> rows;
    for (const auto& spec : preset.sweeps) {
        auto part = cp::run_sweep(customize(spec, preset, cfg));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    report_failures(rows);
    cp::write_rows(*out.stream, rows, cfg.format);
    return exit_code_for(rows);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Performability engine for head-node / computing-node clusters"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> flag_values;
    std::string preset_name;
    bool with_des = false;

    std::vector<CLI::App*> commands{
        app.add_subcommand("solve", "iterative stationary solve"),
        app.add_subcommand("exact", "direct elimination solve (small instances)"),
        app.add_subcommand("simulate", "discrete-event simulation with replications"),
        app.add_subcommand("compare", "discrepancies between methods"),
        app.add_subcommand("sweep", "sweep one parameter"),
        app.add_subcommand("repro", "run a named preset"),
    };
    std::map<std::string, std::string> raw;
    for (CLI::App* sub : commands) {
        sub->add_option("--config", config_path, "flat JSON config file");
        for (const auto& b : flag_bindings()) {
            sub->add_option(b.flag, raw[b.key], b.help);
        }
        sub->add_flag("--with-des", with_des, "include DES in presets");
    }
    commands.back()->add_option("preset", preset_name, "fig8 | fig9 | fig10 | fig11 | fig12 | fig13 | fig14 | tables")
        ->required()
        ->check(CLI::IsMember(cp::preset_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    CLI::App* chosen = app.get_subcommands().front();
    for (const auto& b : flag_bindings()) {
        if (chosen->count(b.flag) > 0) {
            flag_values[b.key] = raw[b.key];
        }
    }
    if (with_des) {
        flag_values["with_des"] = "true";
    }

    try {
        const cp::RunConfig cfg =
            config_path.empty() ? cp::parse_config("", flag_values) : cp::load_config(config_path, flag_values);
        return run(chosen->get_name(), preset_name, cfg);
    } catch (const cp::ParameterError& e) {
        std::cerr << "error: " << e.what() << " [key: " << e.key() << "]\n";
        return kExitValidation;
    } catch (const cp::OracleCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCapExceeded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
