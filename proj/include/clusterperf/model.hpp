#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "clusterperf/params.hpp"
#include "clusterperf/state_space.hpp"

namespace clusterperf {

struct Transition {
    StateIndex from;
    StateIndex to;
    double rate = 0.0;
};

/// Rate at which a plane-1 state with `operative` nodes loses a computing node.
inline double computing_failure_rate(int operative, const SystemParams& p) noexcept {
    if (operative <= 1) {
        return 0.0;
    }
    const int failing = p.semantics == FailureSemantics::PaperLiteral ? operative : operative - 1;
    return failing * p.xi;
}

/// Calls `visit(to, rate)` for each outgoing arc of `s`. Zero-rate arcs
/// (e.g. xi = 0) are skipped. Caller guarantees `s` is valid.
template <typename Visitor>
void for_each_transition(const StateIndex& s, const SystemParams& p, Visitor&& visit) {
    const int i = s.operative;
    const int j = s.tasks;
    const int L = p.capacity;
    auto emit = [&](Plane n, int to_i, int to_j, double rate) {
        if (rate > 0.0) {
            visit(StateIndex{n, to_i, to_j}, rate);
        }
    };

    if (s.plane == Plane::HeadUp) {
        if (j < L) {
            emit(Plane::HeadUp, i, j + 1, p.lambda);
        }
        if (j > 0) {
            emit(Plane::HeadUp, i, j - 1, std::min(i, j) * p.mu);
        }
        if (i > 1) {
            emit(Plane::HeadUp, i - 1, j, computing_failure_rate(i, p));
        }
        // The head leaves with its own slot; tasks stay queued.
        emit(Plane::HeadDown, i - 1, j, p.xi_h);
        if (i < p.servers) {
            emit(Plane::HeadUp, i + 1, j, p.eta);
        }
    } else {
        if (j < L) {
            emit(Plane::HeadDown, i, j + 1, p.lambda);
        }
        if (i > 0) {
            emit(Plane::HeadDown, i - 1, j, i * p.xi);
        }
        // Repair facility serves the head first.
        emit(Plane::HeadUp, i + 1, j, p.eta_h);
    }
}

/// Outgoing arcs of `s`. Throws std::out_of_range for an invalid state.
std::vector<Transition> transitions_from(const StateIndex& s, const SystemParams& p);

/// Sum of the rates returned by transitions_from(s, p).
double total_outflow(const StateIndex& s, const SystemParams& p);

struct Metrics {
    double mql = 0.0;
    double thrp = 0.0;
    std::optional<double> mrt;  // empty when thrp == 0
    double availability = 0.0;
    double p_block = 0.0;
};

/// Reward-weighted sums over a normalized field.
Metrics metrics_from(const ProbabilityField& field, const SystemParams& p);

}  // namespace clusterperf
