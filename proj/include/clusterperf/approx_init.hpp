#pragma once

#include <utility>
#include <vector>

#include "clusterperf/params.hpp"
#include "clusterperf/state_space.hpp"

namespace clusterperf {

/// Closed-form product-form approximation of the stationary distribution,
/// used only as a warm start for the iterative solver.
///
/// Plane 1 is approximated as (operative-count marginal) x (per-column
/// truncated multi-server queue); plane 0 has no closed form and is spread
/// uniformly.
struct Decomposition {
    double m0 = 0.0;                               // plane-0 (head down) mass
    double m1 = 0.0;                               // plane-1 (head up) mass
    std::vector<double> marginal;                  // [i-1] for i = 1..S, sums to m1
    std::vector<std::vector<double>> conditional;  // [i-1][j], each row sums to 1
    double rho = 0.0;                              // lambda / mu
};

/// (m0, m1) from the head on/off chain: xi_h/(eta_h+xi_h), eta_h/(eta_h+xi_h).
std::pair<double, double> plane_masses(const SystemParams& p);

/// Plane-1 operative-count masses for i = 1..S (index i-1), from the
/// failure/repair birth-death balance, scaled to sum to m1. Log domain.
std::vector<double> operative_marginal(const SystemParams& p);

/// Distribution over j = 0..L of a truncated queue with `operative` pooled
/// servers at offered load lambda/mu. Throws std::out_of_range unless
/// 1 <= operative <= S.
std::vector<double> column_conditional(int operative, const SystemParams& p);

Decomposition decompose(const SystemParams& p);

/// Warm-start field: plane 1 = marginal x conditional, plane 0 uniform.
ProbabilityField initial_field(const SystemParams& p);

/// Uniform field over every state; baseline start for comparisons.
ProbabilityField uniform_field(const SystemParams& p);

}  // namespace clusterperf
