#include "clusterperf/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clusterperf/approx_init.hpp"

namespace clusterperf {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Iterative:
            return "iterative";
        case Method::Exact:
            return "exact";
        case Method::Des:
            return "des";
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    if (text == "iterative" || text == "solve") {
        return Method::Iterative;
    }
    if (text == "exact") {
        return Method::Exact;
    }
    if (text == "des" || text == "simulate") {
        return Method::Des;
    }
    throw ParameterError("methods", "unknown method '" + std::string(text) + "'");
}

std::vector<Method> parse_methods(std::string_view text) {
    std::vector<Method> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (!token.empty()) {
            out.push_back(parse_method(token));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (out.empty()) {
        throw ParameterError("methods", "no methods given");
    }
    return out;
}

std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Lambda:
            return "lambda";
        case SweepAxis::Mu:
            return "mu";
        case SweepAxis::Xi:
            return "xi";
        case SweepAxis::XiH:
            return "xi_h";
        case SweepAxis::Eta:
            return "eta";
        case SweepAxis::EtaH:
            return "eta_h";
        case SweepAxis::Servers:
            return "S";
        case SweepAxis::Capacity:
            return "L";
    }
    return "unknown";
}

SweepAxis parse_axis(std::string_view text) {
    for (SweepAxis a : {SweepAxis::Lambda, SweepAxis::Mu, SweepAxis::Xi, SweepAxis::XiH, SweepAxis::Eta,
                        SweepAxis::EtaH, SweepAxis::Servers, SweepAxis::Capacity}) {
        if (text == to_string(a)) {
            return a;
        }
    }
    if (text == "xi-h") {
        return SweepAxis::XiH;
    }
    if (text == "eta-h") {
        return SweepAxis::EtaH;
    }
    if (text == "s") {
        return SweepAxis::Servers;
    }
    if (text == "l") {
        return SweepAxis::Capacity;
    }
    throw ParameterError("axis", "unknown sweep axis '" + std::string(text) + "'");
}

SystemParams with_axis_value(SystemParams base, SweepAxis axis, double value) {
    auto as_count = [&](const char* key) {
        if (value != std::floor(value) || value < 0 || value > 1e9) {
            throw ParameterError(key, std::string(key) + " sweep values must be non-negative integers");
        }
        return static_cast<int>(value);
    };
    switch (axis) {
        case SweepAxis::Lambda:
            base.lambda = value;
            break;
        case SweepAxis::Mu:
            base.mu = value;
            base.mu_h = value;
            break;
        case SweepAxis::Xi:
            base.xi = value;
            break;
        case SweepAxis::XiH:
            base.xi_h = value;
            break;
        case SweepAxis::Eta:
            base.eta = value;
            break;
        case SweepAxis::EtaH:
            base.eta_h = value;
            break;
        case SweepAxis::Servers:
            base.servers = as_count("S");
            break;
        case SweepAxis::Capacity:
            base.capacity = as_count("L");
            break;
    }
    return base;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SweepRow evaluate(const SystemParams& p, Method method, const MethodConfigs& configs) {
    SweepRow row;
    row.method = method;
    row.params = p;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        validate_params(p);
        switch (method) {
            case Method::Iterative: {
                const SolveResult r = solve(p, configs.solver);
                row.metrics = r.metrics;
                row.iterations = r.report.iterations;
                row.converged = r.report.converged;
                row.residual = r.report.final_residual;
                break;
            }
            case Method::Exact: {
                const SparseGenerator g = build_generator(p, configs.oracle);
                const ProbabilityField pi = stationary(g, configs.oracle);
                row.metrics = metrics_from(pi, p);
                row.residual = balance_residual(pi, g);
                break;
            }
            case Method::Des: {
                const SimResult r = simulate(p, configs.sim);
                Metrics m;
                m.mql = r.mql.mean;
                m.thrp = r.thrp.mean;
                m.availability = r.availability.mean;
                m.p_block = r.p_block.mean;
                if (r.mrt) {
                    m.mrt = r.mrt->mean;
                    row.ci_mrt = r.mrt->half_width;
                }
                row.metrics = m;
                row.ci_mql = r.mql.half_width;
                row.ci_thrp = r.thrp.half_width;
                break;
            }
        }
    } catch (const ParameterError& e) {
        row.metrics.reset();
        row.failure = FailureKind::Validation;
        row.error = e.what();
    } catch (const OracleCapExceeded& e) {
        row.metrics.reset();
        row.failure = FailureKind::CapExceeded;
        row.error = e.what();
    } catch (const std::exception& e) {
        row.metrics.reset();
        row.failure = FailureKind::Other;
        row.error = e.what();
    }
    row.wall_ms = elapsed_ms(t0);
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) {
        throw ParameterError("values", "sweep needs at least one value");
    }
    if (spec.methods.empty()) {
        throw ParameterError("methods", "sweep needs at least one method");
    }
    for (double v : spec.values) {
        validate_params(with_axis_value(spec.base, spec.axis, v));
    }
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size() * spec.methods.size());
    for (double v : spec.values) {
        const SystemParams p = with_axis_value(spec.base, spec.axis, v);
        for (Method m : spec.methods) {
            rows.push_back(evaluate(p, m, spec.configs));
        }
    }
    return rows;
}

double relative_discrepancy(double a, double b) {
    if (a == b) {
        return 0.0;
    }
    if (b == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::abs(a - b) / std::abs(b);
}

bool ComparisonReport::all_pass() const {
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            return false;
        }
    }
    for (const auto& d : discrepancies) {
        if (!d.pass) {
            return false;
        }
    }
    return true;
}

ComparisonReport compare(const SystemParams& p, const std::vector<Method>& methods, const MethodConfigs& configs,
                         double threshold) {
    ComparisonReport report;
    report.threshold = threshold;
    for (Method m : methods) {
        report.rows.push_back(evaluate(p, m, configs));
    }
    for (std::size_t x = 0; x < report.rows.size(); ++x) {
        for (std::size_t y = x + 1; y < report.rows.size(); ++y) {
            const SweepRow& a = report.rows[x];
            const SweepRow& b = report.rows[y];
            if (!a.metrics || !b.metrics) {
                continue;
            }
            auto add = [&](const char* name, double va, double vb) {
                Discrepancy d{a.method, b.method, name, va, vb, relative_discrepancy(va, vb), false};
                d.pass = d.relative <= threshold;
                report.discrepancies.push_back(d);
            };
            add("mql", a.metrics->mql, b.metrics->mql);
            add("thrp", a.metrics->thrp, b.metrics->thrp);
            if (a.metrics->mrt && b.metrics->mrt) {
                add("mrt", *a.metrics->mrt, *b.metrics->mrt);
            } else if (a.metrics->mrt.has_value() != b.metrics->mrt.has_value()) {
                report.discrepancies.push_back(Discrepancy{a.method, b.method, "mrt", a.metrics->mrt.value_or(0.0),
                                                           b.metrics->mrt.value_or(0.0),
                                                           std::numeric_limits<double>::infinity(), false});
            }
        }
    }
    return report;
}

namespace {

SystemParams cluster_baseline(int servers, int capacity) {
    SystemParams p;
    p.servers = servers;
    p.capacity = capacity;
    p.lambda = 10.0;
    p.mu = 0.25;
    p.mu_h = 0.25;
    p.xi = 0.001;
    p.xi_h = 0.001;
    p.eta = 0.5;
    p.eta_h = 0.5;
    return p;
}

std::vector<double> arrival_grid() { return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}; }

Preset lambda_curves(std::string name, std::string description, SystemParams base, SweepAxis curve_axis,
                     const std::vector<double>& curve_values, bool with_des) {
    Preset preset{std::move(name), std::move(description), curve_axis, {}};
    for (double v : curve_values) {
        SweepSpec spec;
        spec.base = with_axis_value(base, curve_axis, v);
        spec.axis = SweepAxis::Lambda;
        spec.values = arrival_grid();
        spec.methods = {Method::Iterative};
        if (with_des) {
            spec.methods.push_back(Method::Des);
        }
        spec.configs.sim.horizon = 1e5;
        preset.sweeps.push_back(std::move(spec));
    }
    return preset;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "tables"};
}

Preset make_preset(std::string_view name, bool with_des) {
    const SystemParams base = cluster_baseline(500, 1000);
    const std::vector<double> node_failure_rates{0.001, 0.002, 0.004};
    if (name == "fig8" || name == "fig9" || name == "fig10") {
        const char* metric = name == "fig8" ? "MQL" : name == "fig9" ? "THRP" : "MRT";
        return lambda_curves(std::string(name), std::string(metric) + " vs lambda, S=500, L=1000, xi in {0.001, 0.002, 0.004}",
                             base, SweepAxis::Xi, node_failure_rates, with_des);
    }
    if (name == "fig11") {
        return lambda_curves("fig11", "THRP vs lambda, S=500, L=1000, xi_h in {0.001, 0.005, 0.01}", base,
                             SweepAxis::XiH, {0.001, 0.005, 0.01}, with_des);
    }
    if (name == "fig12") {
        return lambda_curves("fig12", "MQL vs lambda, S=500, L=1000, eta_h in {0.5, 0.05, 0.005, 0.0005}", base,
                             SweepAxis::EtaH, {0.5, 0.05, 0.005, 0.0005}, with_des);
    }
    if (name == "fig13") {
        return lambda_curves("fig13", "MQL vs lambda, L=1000, S in {32, 64, 128, 256, 372}", base, SweepAxis::Servers,
                             {32, 64, 128, 256, 372}, with_des);
    }
    if (name == "fig14") {
        return lambda_curves("fig14", "MQL vs lambda, S=500, L in {500, 1000, 1500, 2000}", base, SweepAxis::Capacity,
                             {500, 1000, 1500, 2000}, with_des);
    }
    if (name == "tables") {
        Preset preset{"tables", "analytical vs DES with timings, (S, L) in {(500, 1000), (1000, 2000)}", std::nullopt, {}};
        for (const auto& [s, l] : {std::pair{500, 1000}, std::pair{1000, 2000}}) {
            SweepSpec spec;
            spec.base = cluster_baseline(s, l);
            spec.axis = SweepAxis::Lambda;
            spec.values = {10, 30, 50, 70, 90};
            spec.methods = {Method::Iterative};
            if (with_des) {
                spec.methods.push_back(Method::Des);
            }
            spec.configs.sim.horizon = 1e5;
            preset.sweeps.push_back(std::move(spec));
        }
        return preset;
    }
    throw ParameterError("preset", "unknown preset '" + std::string(name) + "'");
}

}  // namespace clusterperf
