#include "clusterperf/model.hpp"

#include <stdexcept>

namespace clusterperf {

namespace {

void require_valid(const StateIndex& s, const SystemParams& p) {
    if (!StateSpace(p).contains(s)) {
        throw std::out_of_range("state outside the state space of the given parameters");
    }
}

}  // namespace

std::vector<Transition> transitions_from(const StateIndex& s, const SystemParams& p) {
    require_valid(s, p);
    std::vector<Transition> out;
    out.reserve(5);
    for_each_transition(s, p, [&](const StateIndex& to, double rate) { out.push_back({s, to, rate}); });
    return out;
}

double total_outflow(const StateIndex& s, const SystemParams& p) {
    require_valid(s, p);
    double sum = 0.0;
    for_each_transition(s, p, [&](const StateIndex&, double rate) { sum += rate; });
    return sum;
}

Metrics metrics_from(const ProbabilityField& field, const SystemParams& p) {
    const StateSpace& space = field.space();
    const int L = space.capacity();
    Metrics m;
    double served = 0.0;
    for (Plane n : {Plane::HeadUp, Plane::HeadDown}) {
        for (int i = StateSpace::min_operative(n); i <= space.max_operative(n); ++i) {
            for (int j = 0; j <= L; ++j) {
                const double prob = field[StateIndex{n, i, j}];
                m.mql += j * prob;
                if (n == Plane::HeadUp) {
                    served += std::min(i, j) * prob;
                    m.availability += prob;
                }
                if (j == L) {
                    m.p_block += prob;
                }
            }
        }
    }
    m.thrp = served * p.mu;
    if (m.thrp > 0.0) {
        m.mrt = m.mql / m.thrp;
    }
    return m;
}

}  // namespace clusterperf
