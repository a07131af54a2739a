#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "clusterperf/model.hpp"
#include "clusterperf/params.hpp"
#include "clusterperf/state_space.hpp"

namespace clusterperf {

struct SolverConfig {
    double delta = 0.001;                  // stop when |MQL_k - MQL_{k-1}| <= delta
    std::int64_t max_iterations = 1 << 18;
    double residual_target = 0.0;          // 0 disables the residual criterion
};

struct SolveReport {
    std::int64_t iterations = 0;
    bool converged = false;
    double final_mql_delta = 0.0;
    double final_residual = 0.0;
    std::chrono::duration<double> wall_time{0.0};
};

/// Raised when normalization meets a zero or non-finite total.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incoming arcs of every state, obtained by inverting the transition rules,
/// stored in compressed-row form in flat-index order.
class InflowGraph {
public:
    explicit InflowGraph(const SystemParams& p);

    const StateSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return outflow_.size(); }

    double outflow(std::size_t state) const noexcept { return outflow_[state]; }

    template <typename F>
    void for_each_inflow(std::size_t state, F&& f) const {
        for (std::uint64_t k = offsets_[state]; k < offsets_[state + 1]; ++k) {
            f(sources_[k], rates_[k]);
        }
    }

    /// sum over arcs into `state` of rate * values[source]
    double inflow(std::size_t state, const double* values) const noexcept {
        double acc = 0.0;
        for (std::uint64_t k = offsets_[state]; k < offsets_[state + 1]; ++k) {
            acc += rates_[k] * values[sources_[k]];
        }
        return acc;
    }

    std::size_t memory_bytes() const noexcept;

private:
    StateSpace space_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> sources_;
    std::vector<double> rates_;
    std::vector<double> outflow_;
};

/// One in-place Gauss-Seidel pass in flat order (plane 1 then plane 0):
/// P(s) <- inflow(s) / outflow(s), reusing values updated earlier in the pass.
void sweep(ProbabilityField& field, const InflowGraph& graph);
ProbabilityField sweep(const ProbabilityField& field, const SystemParams& p);

/// Scales the field to unit total. Throws SolverError on a zero or
/// non-finite total.
void normalize(ProbabilityField& field);
ProbabilityField normalized(const ProbabilityField& field);

/// max over states of |inflow(s) - outflow(s) * P(s)|
double residual(const ProbabilityField& field, const InflowGraph& graph);
double residual(const ProbabilityField& field, const SystemParams& p);

struct SolveResult {
    ProbabilityField field;
    Metrics metrics;
    SolveReport report;
};

/// Warm start from initial_field, then sweep + normalize until the MQL
/// criterion (and residual_target, if set) holds or max_iterations is hit.
/// Non-convergence is reported via report.converged, not thrown.
SolveResult solve(const SystemParams& p, const SolverConfig& cfg = {});

/// Same iteration from a caller-supplied starting field.
SolveResult solve_from(ProbabilityField start, const SystemParams& p, const SolverConfig& cfg);

/// Callback invoked after every iteration with (iteration, normalized field);
/// used by property tests.
using IterationObserver = std::function<void(std::int64_t, const ProbabilityField&)>;
SolveResult solve_from(ProbabilityField start, const SystemParams& p, const SolverConfig& cfg,
                       const IterationObserver& observer);

}  // namespace clusterperf
