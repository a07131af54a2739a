#include "clusterperf/state_space.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace clusterperf {

StateSpace::StateSpace(int servers, int capacity) : servers_(servers), capacity_(capacity) {
    if (servers < 1 || capacity < 0) {
        throw std::invalid_argument("state space needs S >= 1 and L >= 0");
    }
}

bool StateSpace::contains(const StateIndex& s) const noexcept {
    return s.operative >= min_operative(s.plane) && s.operative <= max_operative(s.plane) && s.tasks >= 0 &&
           s.tasks <= capacity_;
}

StateIndex StateSpace::make(Plane n, int operative, int tasks) const {
    StateIndex s{n, operative, tasks};
    if (!contains(s)) {
        throw std::out_of_range("invalid state (i=" + std::to_string(operative) + ", j=" + std::to_string(tasks) +
                                ", n=" + std::to_string(static_cast<int>(n)) + ")");
    }
    return s;
}

StateIndex StateSpace::state(std::size_t flat) const noexcept {
    const Plane n = flat < plane_size() ? Plane::HeadUp : Plane::HeadDown;
    const std::size_t local = n == Plane::HeadUp ? flat : flat - plane_size();
    const auto width = static_cast<std::size_t>(capacity_ + 1);
    return StateIndex{n, static_cast<int>(local / width) + min_operative(n), static_cast<int>(local % width)};
}

ProbabilityField::ProbabilityField(StateSpace space, double fill)
    : space_(space), values_(space.size(), fill) {}

std::span<const double> ProbabilityField::plane(Plane n) const noexcept {
    const std::size_t half = space_.plane_size();
    return std::span<const double>(values_).subspan(n == Plane::HeadUp ? 0 : half, half);
}

double ProbabilityField::total() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double ProbabilityField::plane_mass(Plane n) const noexcept {
    const auto p = plane(n);
    return std::accumulate(p.begin(), p.end(), 0.0);
}

}  // namespace clusterperf
