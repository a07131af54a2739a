#include "clusterperf/approx_init.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clusterperf {

namespace {

// exp(log_w - max) normalized to `total`.
std::vector<double> normalize_log_weights(const std::vector<double>& log_w, double total) {
    const double peak = *std::max_element(log_w.begin(), log_w.end());
    std::vector<double> w(log_w.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < log_w.size(); ++k) {
        w[k] = std::exp(log_w[k] - peak);
        sum += w[k];
    }
    for (double& x : w) {
        x *= total / sum;
    }
    return w;
}

}  // namespace

std::pair<double, double> plane_masses(const SystemParams& p) {
    const double down = p.xi_h / (p.eta_h + p.xi_h);
    return {down, 1.0 - down};
}

std::vector<double> operative_marginal(const SystemParams& p) {
    const auto [m0, m1] = plane_masses(p);
    const auto S = static_cast<std::size_t>(p.servers);
    if (p.xi == 0.0) {
        std::vector<double> w(S, 0.0);
        w.back() = m1;
        return w;
    }
    // Detailed balance between i and i+1: eta * P_i = k(i+1) * xi * P_{i+1},
    // where k(i+1) is the number of failing nodes in state i+1.
    const double log_ratio = std::log(p.eta / p.xi);
    std::vector<double> log_w(S);
    log_w[0] = 0.0;
    for (std::size_t idx = 1; idx < S; ++idx) {
        const int upper = static_cast<int>(idx) + 1;
        const int failing = p.semantics == FailureSemantics::PaperLiteral ? upper : upper - 1;
        log_w[idx] = log_w[idx - 1] + log_ratio - std::log(static_cast<double>(failing));
    }
    return normalize_log_weights(log_w, m1);
}

std::vector<double> column_conditional(int operative, const SystemParams& p) {
    if (operative < 1 || operative > p.servers) {
        throw std::out_of_range("column_conditional needs 1 <= i <= S");
    }
    const double log_rho = std::log(p.lambda / p.mu);
    const auto width = static_cast<std::size_t>(p.capacity) + 1;
    std::vector<double> log_w(width);
    log_w[0] = 0.0;
    for (std::size_t j = 1; j < width; ++j) {
        const int busy = std::min(static_cast<int>(j), operative);
        log_w[j] = log_w[j - 1] + log_rho - std::log(static_cast<double>(busy));
    }
    return normalize_log_weights(log_w, 1.0);
}

Decomposition decompose(const SystemParams& p) {
    Decomposition d;
    std::tie(d.m0, d.m1) = plane_masses(p);
    d.marginal = operative_marginal(p);
    d.rho = p.lambda / p.mu;
    d.conditional.reserve(static_cast<std::size_t>(p.servers));
    for (int i = 1; i <= p.servers; ++i) {
        d.conditional.push_back(column_conditional(i, p));
    }
    return d;
}

ProbabilityField initial_field(const SystemParams& p) {
    const StateSpace space(p);
    ProbabilityField field(space);
    const auto [m0, m1] = plane_masses(p);
    const auto marginal = operative_marginal(p);
    for (int i = 1; i <= p.servers; ++i) {
        const double column_mass = marginal[static_cast<std::size_t>(i - 1)];
        if (column_mass == 0.0) {
            continue;
        }
        const auto cond = column_conditional(i, p);
        for (int j = 0; j <= p.capacity; ++j) {
            field[StateIndex{Plane::HeadUp, i, j}] = column_mass * cond[static_cast<std::size_t>(j)];
        }
    }
    const double spread = m0 / static_cast<double>(space.plane_size());
    for (int i = 0; i < p.servers; ++i) {
        for (int j = 0; j <= p.capacity; ++j) {
            field[StateIndex{Plane::HeadDown, i, j}] = spread;
        }
    }
    return field;
}

ProbabilityField uniform_field(const SystemParams& p) {
    const StateSpace space(p);
    return ProbabilityField(space, 1.0 / static_cast<double>(space.size()));
}

}  // namespace clusterperf
