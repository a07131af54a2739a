#include "clusterperf/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "clusterperf/model.hpp"

namespace clusterperf {

double SparseGenerator::entry(std::size_t row, std::size_t column) const noexcept {
    if (row == column) {
        return diagonal[row];
    }
    for (std::size_t k = row_offsets[row]; k < row_offsets[row + 1]; ++k) {
        if (columns[k] == column) {
            return rates[k];
        }
    }
    return 0.0;
}

SparseGenerator build_generator(const SystemParams& p, const OracleLimits& limits) {
    const StateSpace space(p);
    if (space.size() > limits.max_states) {
        throw OracleCapExceeded("instance too large for exact solve: " + std::to_string(space.size()) +
                                " states exceeds the cap of " + std::to_string(limits.max_states));
    }
    SparseGenerator g;
    g.space = space;
    const std::size_t n = space.size();
    g.row_offsets.reserve(n + 1);
    g.row_offsets.push_back(0);
    g.diagonal.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        double out = 0.0;
        for_each_transition(space.state(s), p, [&](const StateIndex& to, double rate) {
            g.columns.push_back(space.index(to));
            g.rates.push_back(rate);
            out += rate;
        });
        g.diagonal[s] = -out;
        g.row_offsets.push_back(g.columns.size());
    }
    return g;
}

namespace {

// Position of a flat state in task-count-major order.
std::vector<std::size_t> banded_order(const StateSpace& space) {
    const auto S = static_cast<std::size_t>(space.servers());
    std::vector<std::size_t> position(space.size());
    for (std::size_t s = 0; s < space.size(); ++s) {
        const StateIndex st = space.state(s);
        const std::size_t plane_offset = st.plane == Plane::HeadUp ? S : 0;
        position[s] = static_cast<std::size_t>(st.tasks) * 2 * S + plane_offset +
                      static_cast<std::size_t>(st.operative - StateSpace::min_operative(st.plane));
    }
    return position;
}

std::vector<std::size_t> reachable_from(const SparseGenerator& g, std::size_t start) {
    std::vector<char> seen(g.dimension(), 0);
    std::deque<std::size_t> frontier{start};
    seen[start] = 1;
    while (!frontier.empty()) {
        const std::size_t s = frontier.front();
        frontier.pop_front();
        for (std::size_t k = g.row_offsets[s]; k < g.row_offsets[s + 1]; ++k) {
            if (g.rates[k] > 0.0 && !seen[g.columns[k]]) {
                seen[g.columns[k]] = 1;
                frontier.push_back(g.columns[k]);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < seen.size(); ++s) {
        if (seen[s]) {
            out.push_back(s);
        }
    }
    return out;
}

// Dense band of half-width b: row r stores columns r-b .. r+b.
class Band {
public:
    Band(std::size_t n, std::size_t half_width)
        : n_(n), b_(half_width), data_(n * (2 * half_width + 1), 0.0) {}

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * (2 * b_ + 1) + (c + b_ - r)]; }
    std::size_t low(std::size_t k) const noexcept { return k > b_ ? k - b_ : 0; }
    std::size_t half_width() const noexcept { return b_; }
    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::size_t b_;
    std::vector<double> data_;
};

}  // namespace

ProbabilityField stationary(const SparseGenerator& g, const OracleLimits& limits) {
    const std::size_t n = g.dimension();
    if (n == 0 || g.space.size() != n) {
        throw std::invalid_argument("generator dimension does not match its state space");
    }
    if (n > limits.max_states) {
        throw OracleCapExceeded("instance too large for exact solve: " + std::to_string(n) + " states");
    }
    const std::vector<std::size_t> pos = banded_order(g.space);
    std::size_t half_width = 0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = g.row_offsets[s]; k < g.row_offsets[s + 1]; ++k) {
            const std::size_t a = pos[s];
            const std::size_t b = pos[g.columns[k]];
            half_width = std::max(half_width, a > b ? a - b : b - a);
        }
    }
    const double band_bytes = static_cast<double>(n) * static_cast<double>(2 * half_width + 1) * sizeof(double);
    if (band_bytes > static_cast<double>(limits.max_band_bytes)) {
        throw OracleCapExceeded("instance too large for exact solve: elimination band needs " +
                                std::to_string(static_cast<long long>(band_bytes / (1 << 20))) + " MiB");
    }

    Band a(n, half_width);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = g.row_offsets[s]; k < g.row_offsets[s + 1]; ++k) {
            if (g.columns[k] != s) {
                a(pos[s], pos[g.columns[k]]) += g.rates[k];
            }
        }
    }

    // Eliminate from the highest position down. After step k, a(r, c) for
    // r, c < k are the rates of the censored chain on {0..k-1}; a(k, k)
    // keeps the pivot for back substitution.
    for (std::size_t k = n - 1; k > 0; --k) {
        const std::size_t lo = a.low(k);
        double pivot = 0.0;
        for (std::size_t c = lo; c < k; ++c) {
            pivot += a(k, c);
        }
        if (!(pivot > 0.0)) {
            const auto original = static_cast<std::size_t>(std::find(pos.begin(), pos.end(), k) - pos.begin());
            auto closed = reachable_from(g, original);
            std::string what = "reducible chain: zero pivot at state " + std::to_string(original);
            if (closed.size() < n) {
                what += "; closed class of " + std::to_string(closed.size()) + " states cannot reach the rest";
            }
            throw ReducibleChainError(what, std::move(closed));
        }
        a(k, k) = pivot;
        for (std::size_t r = lo; r < k; ++r) {
            const double factor = a(r, k) / pivot;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t c = lo; c < k; ++c) {
                a(r, c) += factor * a(k, c);
            }
        }
    }

    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    double total = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t r = a.low(k); r < k; ++r) {
            acc += x[r] * a(r, k);
        }
        x[k] = acc / a(k, k);
        total += x[k];
    }

    ProbabilityField field(g.space);
    auto values = field.values();
    for (std::size_t s = 0; s < n; ++s) {
        values[s] = x[pos[s]] / total;
    }
    return field;
}

double balance_residual(const ProbabilityField& pi, const SparseGenerator& g) {
    const auto values = pi.values();
    std::vector<double> flow(g.dimension(), 0.0);
    for (std::size_t s = 0; s < g.dimension(); ++s) {
        flow[s] += values[s] * g.diagonal[s];
        for (std::size_t k = g.row_offsets[s]; k < g.row_offsets[s + 1]; ++k) {
            flow[g.columns[k]] += values[s] * g.rates[k];
        }
    }
    double worst = 0.0;
    for (double f : flow) {
        worst = std::max(worst, std::abs(f));
    }
    return worst;
}

}  // namespace clusterperf
