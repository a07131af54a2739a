#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clusterperf/des.hpp"
#include "clusterperf/exact_oracle.hpp"
#include "clusterperf/iterative_solver.hpp"
#include "clusterperf/model.hpp"
#include "clusterperf/params.hpp"

namespace clusterperf {

enum class Method { Iterative, Exact, Des };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);
/// Comma-separated list, e.g. "iterative,des".
std::vector<Method> parse_methods(std::string_view text);

enum class SweepAxis { Lambda, Mu, Xi, XiH, Eta, EtaH, Servers, Capacity };

std::string_view to_string(SweepAxis a);
SweepAxis parse_axis(std::string_view text);

/// Copy of `base` with the axis parameter set to `value` (mu also sets mu_h).
SystemParams with_axis_value(SystemParams base, SweepAxis axis, double value);

struct MethodConfigs {
    SolverConfig solver;
    SimConfig sim;
    OracleLimits oracle;
};

struct SweepSpec {
    SystemParams base;
    SweepAxis axis = SweepAxis::Lambda;
    std::vector<double> values;
    std::vector<Method> methods{Method::Iterative};
    MethodConfigs configs;
};

enum class FailureKind { None, Validation, CapExceeded, Other };

/// One evaluated (axis value, method) point.
struct SweepRow {
    Method method = Method::Iterative;
    SystemParams params;
    std::optional<Metrics> metrics;  // empty when the point failed
    double wall_ms = 0.0;

    // Iterative solver only.
    std::optional<std::int64_t> iterations;
    std::optional<bool> converged;
    std::optional<double> residual;  // also filled for the exact oracle

    // DES only.
    std::optional<double> ci_mql;
    std::optional<double> ci_thrp;
    std::optional<double> ci_mrt;

    FailureKind failure = FailureKind::None;
    std::string error;  // message when failure != None
};

/// Evaluates one method at one parameter point; failures land in row.error.
SweepRow evaluate(const SystemParams& p, Method method, const MethodConfigs& configs);

/// Validates the spec, then evaluates every method at every value in axis
/// order. Per-point failures are recorded, not thrown.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct Discrepancy {
    Method a;
    Method b;
    std::string metric;  // "mql", "thrp" or "mrt"
    double value_a = 0.0;
    double value_b = 0.0;
    double relative = 0.0;  // |a - b| / |b|
    bool pass = false;
};

struct ComparisonReport {
    std::vector<SweepRow> rows;
    std::vector<Discrepancy> discrepancies;
    double threshold = 0.05;
    bool all_pass() const;
};

/// Relative discrepancy |a - b| / |b|; 0 when both are 0.
double relative_discrepancy(double a, double b);

/// Evaluates each method once and compares every ordered pair (a before b
/// in `methods`) metric by metric against `threshold`.
ComparisonReport compare(const SystemParams& p, const std::vector<Method>& methods, const MethodConfigs& configs,
                         double threshold = 0.05);

struct Preset {
    std::string name;
    std::string description;
    std::optional<SweepAxis> curve_axis;  // parameter that differs between curves
    std::vector<SweepSpec> sweeps;        // one per curve
};

/// Named presets: fig8..fig14 and tables. DES rows only with `with_des`.
Preset make_preset(std::string_view name, bool with_des = false);
std::vector<std::string> preset_names();

}  // namespace clusterperf
