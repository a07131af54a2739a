#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "clusterperf/params.hpp"

namespace clusterperf {

struct SimConfig {
    std::uint64_t seed = 1;
    double warmup = -1.0;  // negative: 10% of horizon
    double horizon = 1e5;  // measured simulated time per replication
    int replications = 10;
    double confidence = 0.95;

    double effective_warmup() const noexcept { return warmup < 0.0 ? 0.1 * horizon : warmup; }
};

/// Throws ParameterError naming the offending field.
SimConfig validate_sim_config(const SimConfig& cfg);

enum class SimEvent : std::uint8_t {
    Arrival,
    ServiceCompletion,
    ComputingFailure,
    HeadFailure,
    ComputingRepair,
    HeadRepair,
};

struct TraceRecord {
    double time;
    SimEvent event;
    int operative;  // after the event, plane-consistent with the CTMC state
    int tasks;
    bool head_up;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// Raw statistics of one replication over the measurement window.
struct ReplicationSample {
    double mql = 0.0;
    double thrp = 0.0;
    std::optional<double> mrt;          // Little's law: mql / thrp
    std::optional<double> mrt_sojourn;  // mean sojourn of tasks departing in the window
    double availability = 0.0;
    double p_block = 0.0;

    std::uint64_t departures = 0;  // in the window
    bool zero_departures = false;

    // Whole-run counters, starting from the empty system at time 0.
    std::uint64_t arrivals_accepted = 0;
    std::uint64_t arrivals_blocked = 0;
    std::uint64_t departures_total = 0;
    std::uint64_t in_system_at_end = 0;
    std::uint64_t events = 0;
};

/// Simulates the physical cluster: FCFS bounded queue, pooled exponential
/// servers (head plus operative computing nodes), node failures at the
/// semantics-dependent aggregate rate, and one repair facility with
/// preemptive head priority. A task on a failing node, or on any node when
/// the head fails, returns to the front of the queue and is re-sampled when
/// it restarts. (seed, rep_index) fully determine the trace.
ReplicationSample run_replication(const SystemParams& p, const SimConfig& cfg, int rep_index,
                                  const TraceSink& trace = {});

struct Estimate {
    double mean = 0.0;
    double half_width = 0.0;
};

struct SimResult {
    Estimate mql;
    Estimate thrp;
    std::optional<Estimate> mrt;  // empty if any replication had no departures
    Estimate mrt_sojourn;
    Estimate availability;
    Estimate p_block;
    std::uint64_t events = 0;
    std::chrono::duration<double> wall_time{0.0};
    std::vector<ReplicationSample> samples;
};

/// Mean and Student-t half-width at `confidence` over the samples.
Estimate summarize(std::vector<double> samples, double confidence);

/// Aggregates replications; independent of their order.
SimResult aggregate(const std::vector<ReplicationSample>& samples, double confidence);

/// Runs cfg.replications replications with seeds derived from cfg.seed.
SimResult simulate(const SystemParams& p, const SimConfig& cfg);

}  // namespace clusterperf
