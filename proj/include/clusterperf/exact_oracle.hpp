#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterperf/params.hpp"
#include "clusterperf/state_space.hpp"

namespace clusterperf {

struct OracleLimits {
    std::size_t max_states = 200'000;
    // Band storage cap for the elimination.
    std::size_t max_band_bytes = std::size_t{1} << 31;
};

/// Raised when an instance exceeds the oracle's size limits.
class OracleCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Raised when elimination meets a zero pivot; `closed_set()` lists flat
/// indices of a closed (absorbing) class that excludes part of the chain.
class ReducibleChainError : public std::runtime_error {
public:
    ReducibleChainError(const std::string& what, std::vector<std::size_t> closed)
        : std::runtime_error(what), closed_(std::move(closed)) {}
    const std::vector<std::size_t>& closed_set() const noexcept { return closed_; }

private:
    std::vector<std::size_t> closed_;
};

/// Infinitesimal generator in compressed-row form over StateSpace flat
/// indices. Off-diagonal entries are transition rates; `diagonal` holds the
/// negated row sums.
struct SparseGenerator {
    StateSpace space{1, 0};
    std::vector<std::size_t> row_offsets;
    std::vector<std::size_t> columns;
    std::vector<double> rates;
    std::vector<double> diagonal;

    std::size_t dimension() const noexcept { return diagonal.size(); }

    /// Dense (row, column) value, including the diagonal. O(row length).
    double entry(std::size_t row, std::size_t column) const noexcept;
};

SparseGenerator build_generator(const SystemParams& p, const OracleLimits& limits = {});

/// Stationary vector by Grassmann-Taksar-Heyman elimination over a
/// task-count-major reordering (band half-width ~2S).
ProbabilityField stationary(const SparseGenerator& g, const OracleLimits& limits = {});

/// max_s |(pi G)_s|
double balance_residual(const ProbabilityField& pi, const SparseGenerator& g);

}  // namespace clusterperf
