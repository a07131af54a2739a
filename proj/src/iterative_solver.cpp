#include "clusterperf/iterative_solver.hpp"

#include <cmath>
#include <limits>

#include "clusterperf/approx_init.hpp"

namespace clusterperf {

InflowGraph::InflowGraph(const SystemParams& p) : space_(p), outflow_(space_.size(), 0.0) {
    const std::size_t n = space_.size();
    if (n >= std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("state space too large for 32-bit inflow indices");
    }
    // First pass counts in-degrees and outflows; second pass fills.
    std::vector<std::uint32_t> in_degree(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        const StateIndex from = space_.state(s);
        double out = 0.0;
        for_each_transition(from, p, [&](const StateIndex& to, double rate) {
            ++in_degree[space_.index(to)];
            out += rate;
        });
        outflow_[s] = out;
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s) {
        offsets_[s + 1] = offsets_[s] + in_degree[s];
    }
    sources_.resize(offsets_[n]);
    rates_.resize(offsets_[n]);
    std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t s = 0; s < n; ++s) {
        const StateIndex from = space_.state(s);
        for_each_transition(from, p, [&](const StateIndex& to, double rate) {
            const std::uint64_t k = cursor[space_.index(to)]++;
            sources_[k] = static_cast<std::uint32_t>(s);
            rates_[k] = rate;
        });
    }
}

std::size_t InflowGraph::memory_bytes() const noexcept {
    return offsets_.size() * sizeof(std::uint64_t) + sources_.size() * sizeof(std::uint32_t) +
           rates_.size() * sizeof(double) + outflow_.size() * sizeof(double);
}

void sweep(ProbabilityField& field, const InflowGraph& graph) {
    double* values = field.values().data();
    const std::size_t n = graph.size();
    for (std::size_t s = 0; s < n; ++s) {
        const double out = graph.outflow(s);
        // Every state has at least the head failure or head repair arc.
        values[s] = graph.inflow(s, values) / out;
    }
}

ProbabilityField sweep(const ProbabilityField& field, const SystemParams& p) {
    ProbabilityField next = field;
    sweep(next, InflowGraph(p));
    return next;
}

void normalize(ProbabilityField& field) {
    const double total = field.total();
    if (!std::isfinite(total) || total <= 0.0) {
        throw SolverError("cannot normalize a field with total " + std::to_string(total));
    }
    const double scale = 1.0 / total;
    for (double& v : field.values()) {
        v *= scale;
    }
}

ProbabilityField normalized(const ProbabilityField& field) {
    ProbabilityField out = field;
    normalize(out);
    return out;
}

double residual(const ProbabilityField& field, const InflowGraph& graph) {
    const double* values = field.values().data();
    double worst = 0.0;
    for (std::size_t s = 0; s < graph.size(); ++s) {
        worst = std::max(worst, std::abs(graph.inflow(s, values) - graph.outflow(s) * values[s]));
    }
    return worst;
}

double residual(const ProbabilityField& field, const SystemParams& p) {
    return residual(field, InflowGraph(p));
}

namespace {

double mean_tasks(const ProbabilityField& field) {
    const auto values = field.values();
    const auto width = static_cast<std::size_t>(field.space().capacity()) + 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        acc += static_cast<double>(k % width) * values[k];
    }
    return acc;
}

}  // namespace

SolveResult solve(const SystemParams& p, const SolverConfig& cfg) {
    return solve_from(initial_field(p), p, cfg, {});
}

SolveResult solve_from(ProbabilityField start, const SystemParams& p, const SolverConfig& cfg) {
    return solve_from(std::move(start), p, cfg, {});
}

SolveResult solve_from(ProbabilityField start, const SystemParams& p, const SolverConfig& cfg,
                       const IterationObserver& observer) {
    if (!(cfg.delta > 0.0) || cfg.max_iterations < 1 || cfg.residual_target < 0.0) {
        throw std::invalid_argument("solver config needs delta > 0, max_iterations >= 1, residual_target >= 0");
    }
    if (start.space() != StateSpace(p)) {
        throw std::invalid_argument("starting field does not match the parameter state space");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const InflowGraph graph(p);
    ProbabilityField field = std::move(start);
    normalize(field);

    SolveReport report;
    double previous = mean_tasks(field);
    for (std::int64_t it = 1; it <= cfg.max_iterations; ++it) {
        sweep(field, graph);
        normalize(field);
        const double current = mean_tasks(field);
        report.iterations = it;
        report.final_mql_delta = std::abs(current - previous);
        previous = current;
        if (observer) {
            observer(it, field);
        }
        if (report.final_mql_delta <= cfg.delta) {
            if (cfg.residual_target == 0.0 || residual(field, graph) <= cfg.residual_target) {
                report.converged = true;
                break;
            }
        }
    }
    report.final_residual = residual(field, graph);
    report.wall_time = std::chrono::steady_clock::now() - t0;
    Metrics metrics = metrics_from(field, p);
    return SolveResult{std::move(field), metrics, report};
}

}  // namespace clusterperf
