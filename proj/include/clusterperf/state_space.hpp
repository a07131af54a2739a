#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clusterperf/params.hpp"

namespace clusterperf {

enum class Plane : std::uint8_t { HeadDown = 0, HeadUp = 1 };

/// A (plane, operative count, task count) coordinate.
///
/// Plane HeadUp counts the head among the operative nodes (1..S); plane
/// HeadDown counts only operative computing nodes (0..S-1).
struct StateIndex {
    Plane plane = Plane::HeadUp;
    int operative = 1;
    int tasks = 0;

    friend bool operator==(const StateIndex&, const StateIndex&) = default;
};

/// Layout of the 2*S*(L+1) states of one parameter set.
///
/// Flat storage holds plane HeadUp first, then HeadDown; inside a plane the
/// operative count is the major index and the task count the minor one. This
/// is also the Gauss-Seidel sweep order.
class StateSpace {
public:
    StateSpace(int servers, int capacity);
    explicit StateSpace(const SystemParams& p) : StateSpace(p.servers, p.capacity) {}

    int servers() const noexcept { return servers_; }
    int capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return 2 * plane_size(); }
    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(servers_) * static_cast<std::size_t>(capacity_ + 1);
    }

    static int min_operative(Plane n) noexcept { return n == Plane::HeadUp ? 1 : 0; }
    int max_operative(Plane n) const noexcept { return n == Plane::HeadUp ? servers_ : servers_ - 1; }

    bool contains(const StateIndex& s) const noexcept;

    /// Throws std::out_of_range for states outside the valid ranges.
    StateIndex make(Plane n, int operative, int tasks) const;

    std::size_t index(const StateIndex& s) const noexcept {
        const std::size_t base = s.plane == Plane::HeadUp ? 0 : plane_size();
        return base +
               static_cast<std::size_t>(s.operative - min_operative(s.plane)) * static_cast<std::size_t>(capacity_ + 1) +
               static_cast<std::size_t>(s.tasks);
    }

    StateIndex state(std::size_t flat) const noexcept;

    friend bool operator==(const StateSpace&, const StateSpace&) = default;

private:
    int servers_;
    int capacity_;
};

/// Dense probability array over every state of a StateSpace.
class ProbabilityField {
public:
    explicit ProbabilityField(StateSpace space, double fill = 0.0);

    const StateSpace& space() const noexcept { return space_; }

    double& operator[](const StateIndex& s) noexcept { return values_[space_.index(s)]; }
    double operator[](const StateIndex& s) const noexcept { return values_[space_.index(s)]; }
    double at(Plane n, int operative, int tasks) const { return values_[space_.index(space_.make(n, operative, tasks))]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entries of one plane in flat order.
    std::span<const double> plane(Plane n) const noexcept;

    double total() const noexcept;
    double plane_mass(Plane n) const noexcept;

private:
    StateSpace space_;
    std::vector<double> values_;
};

}  // namespace clusterperf
