#include "clusterperf/des.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "clusterperf/model.hpp"

namespace clusterperf {

SimConfig validate_sim_config(const SimConfig& cfg) {
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
        throw ParameterError("horizon", "horizon must be > 0");
    }
    if (cfg.warmup >= 0.0 && !std::isfinite(cfg.warmup)) {
        throw ParameterError("warmup", "warmup must be finite");
    }
    if (cfg.replications < 2) {
        throw ParameterError("replications", "replications must be >= 2 for a confidence interval");
    }
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
        throw ParameterError("confidence", "confidence must lie in (0, 1)");
    }
    return cfg;
}

namespace {

constexpr int kNone = -1;

struct Task {
    std::uint64_t seq;
    double arrival;
};

struct ScheduledEvent {
    double time;
    std::uint64_t order;  // tie-break for equal times
    SimEvent kind;
    int target;
    std::uint64_t generation;

    bool operator>(const ScheduledEvent& o) const noexcept {
        return time != o.time ? time > o.time : order > o.order;
    }
};

// Set of node ids with O(1) insert, erase and indexed access.
class IdSet {
public:
    explicit IdSet(int universe) : slot_(static_cast<std::size_t>(universe), kNone) {}

    void insert(int id) {
        slot_[static_cast<std::size_t>(id)] = static_cast<int>(ids_.size());
        ids_.push_back(id);
    }
    void erase(int id) {
        const int at = slot_[static_cast<std::size_t>(id)];
        const int last = ids_.back();
        ids_[static_cast<std::size_t>(at)] = last;
        slot_[static_cast<std::size_t>(last)] = at;
        ids_.pop_back();
        slot_[static_cast<std::size_t>(id)] = kNone;
    }
    bool contains(int id) const { return slot_[static_cast<std::size_t>(id)] != kNone; }
    int pop_back() {
        const int id = ids_.back();
        erase(id);
        return id;
    }
    void clear() {
        for (int id : ids_) {
            slot_[static_cast<std::size_t>(id)] = kNone;
        }
        ids_.clear();
    }
    int at(std::size_t k) const { return ids_[k]; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

private:
    std::vector<int> slot_;
    std::vector<int> ids_;
};

enum class Repairing { Nothing, Head, Computing };

class ClusterSimulation {
public:
    ClusterSimulation(const SystemParams& p, const SimConfig& cfg, int rep_index, const TraceSink& trace)
        : p_(p),
          trace_(trace),
          window_start_(cfg.effective_warmup()),
          window_end_(cfg.effective_warmup() + cfg.horizon),
          up_computing_(p.servers),
          idle_(p.servers),
          serving_(static_cast<std::size_t>(p.servers)),
          service_generation_(static_cast<std::size_t>(p.servers), 0) {
        const std::uint64_t seed = cfg.seed;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(rep_index), 0x5eedu};
        rng_.seed(seq);
    }

    ReplicationSample run() {
        // Start with every node up, the head operative and no tasks.
        idle_.insert(0);
        for (int k = 1; k < p_.servers; ++k) {
            up_computing_.insert(k);
            idle_.insert(k);
        }
        schedule(SimEvent::Arrival, kNone, 0, exponential(p_.lambda));
        schedule(SimEvent::HeadFailure, kNone, ++head_failure_generation_, exponential(p_.xi_h));
        reschedule_computing_failure();

        while (!calendar_.empty()) {
            const ScheduledEvent ev = calendar_.top();
            if (ev.time > window_end_) {
                break;
            }
            calendar_.pop();
            if (stale(ev)) {
                continue;
            }
            advance_clock(ev.time);
            ++sample_.events;
            dispatch_event(ev);
            if (trace_) {
                trace_(TraceRecord{now_, ev.kind, operative(), static_cast<int>(tasks_in_system()), head_up_});
            }
        }
        advance_clock(window_end_);
        return finish();
    }

private:
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(rng_); }

    void schedule(SimEvent kind, int target, std::uint64_t generation, double delay) {
        calendar_.push(ScheduledEvent{now_ + delay, next_order_++, kind, target, generation});
    }

    bool stale(const ScheduledEvent& ev) const {
        switch (ev.kind) {
            case SimEvent::Arrival:
                return false;
            case SimEvent::ServiceCompletion:
                return ev.generation != service_generation_[static_cast<std::size_t>(ev.target)];
            case SimEvent::ComputingFailure:
                return ev.generation != computing_failure_generation_;
            case SimEvent::HeadFailure:
                return ev.generation != head_failure_generation_;
            case SimEvent::ComputingRepair:
            case SimEvent::HeadRepair:
                return ev.generation != repair_generation_;
        }
        return true;
    }

    int operative() const {
        return static_cast<int>(up_computing_.size()) + (head_up_ ? 1 : 0);
    }

    std::size_t tasks_in_system() const { return queue_.size() + busy_; }

    void advance_clock(double t) {
        const double lo = std::max(now_, window_start_);
        const double hi = std::min(t, window_end_);
        if (hi > lo) {
            const double dt = hi - lo;
            const auto j = tasks_in_system();
            area_tasks_ += static_cast<double>(j) * dt;
            if (head_up_) {
                area_up_ += dt;
            }
            if (j == static_cast<std::size_t>(p_.capacity)) {
                area_full_ += dt;
            }
        }
        now_ = t;
    }

    bool in_window() const { return now_ >= window_start_ && now_ <= window_end_; }

    void dispatch_event(const ScheduledEvent& ev) {
        switch (ev.kind) {
            case SimEvent::Arrival:
                on_arrival();
                break;
            case SimEvent::ServiceCompletion:
                on_service_completion(ev.target);
                break;
            case SimEvent::ComputingFailure:
                on_computing_failure();
                break;
            case SimEvent::HeadFailure:
                on_head_failure();
                break;
            case SimEvent::ComputingRepair:
                on_computing_repair();
                break;
            case SimEvent::HeadRepair:
                on_head_repair();
                break;
        }
    }

    void on_arrival() {
        schedule(SimEvent::Arrival, kNone, 0, exponential(p_.lambda));
        if (tasks_in_system() >= static_cast<std::size_t>(p_.capacity)) {
            ++sample_.arrivals_blocked;
            return;
        }
        ++sample_.arrivals_accepted;
        queue_.push_back(Task{next_task_++, now_});
        start_services();
    }

    void on_service_completion(int server) {
        auto& slot = serving_[static_cast<std::size_t>(server)];
        const Task done = *slot;
        slot.reset();
        --busy_;
        ++service_generation_[static_cast<std::size_t>(server)];
        ++sample_.departures_total;
        if (in_window()) {
            ++window_departures_;
            sojourn_sum_ += now_ - done.arrival;
        }
        idle_.insert(server);
        start_services();
    }

    void on_computing_failure() {
        std::uniform_int_distribution<std::size_t> pick(0, up_computing_.size() - 1);
        const int node = up_computing_.at(pick(rng_));
        up_computing_.erase(node);
        down_computing_.push_back(node);
        if (idle_.contains(node)) {
            idle_.erase(node);
        }
        if (serving_[static_cast<std::size_t>(node)]) {
            queue_.push_front(*serving_[static_cast<std::size_t>(node)]);
            serving_[static_cast<std::size_t>(node)].reset();
            ++service_generation_[static_cast<std::size_t>(node)];
            --busy_;
        }
        start_repair();
        reschedule_computing_failure();
        start_services();
    }

    void on_head_failure() {
        head_up_ = false;
        std::vector<Task> interrupted;
        for (std::size_t k = 0; k < serving_.size(); ++k) {
            if (serving_[k]) {
                interrupted.push_back(*serving_[k]);
                serving_[k].reset();
                ++service_generation_[k];
            }
        }
        busy_ = 0;
        std::sort(interrupted.begin(), interrupted.end(),
                  [](const Task& a, const Task& b) { return a.seq < b.seq; });
        for (auto it = interrupted.rbegin(); it != interrupted.rend(); ++it) {
            queue_.push_front(*it);
        }
        idle_.clear();
        if (repairing_ == Repairing::Computing) {
            // Preempted; the node stays first in line and restarts later.
            repairing_ = Repairing::Nothing;
            ++repair_generation_;
        }
        start_repair();
        reschedule_computing_failure();
    }

    void on_head_repair() {
        repairing_ = Repairing::Nothing;
        ++repair_generation_;
        head_up_ = true;
        idle_.insert(0);
        for (std::size_t k = 0; k < up_computing_.size(); ++k) {
            idle_.insert(up_computing_.at(k));
        }
        schedule(SimEvent::HeadFailure, kNone, ++head_failure_generation_, exponential(p_.xi_h));
        start_repair();
        reschedule_computing_failure();
        start_services();
    }

    void on_computing_repair() {
        repairing_ = Repairing::Nothing;
        ++repair_generation_;
        const int node = down_computing_.front();
        down_computing_.pop_front();
        up_computing_.insert(node);
        idle_.insert(node);
        start_repair();
        reschedule_computing_failure();
        start_services();
    }

    void start_repair() {
        if (repairing_ != Repairing::Nothing) {
            return;
        }
        if (!head_up_) {
            repairing_ = Repairing::Head;
            schedule(SimEvent::HeadRepair, kNone, ++repair_generation_, exponential(p_.eta_h));
        } else if (!down_computing_.empty()) {
            repairing_ = Repairing::Computing;
            schedule(SimEvent::ComputingRepair, kNone, ++repair_generation_, exponential(p_.eta));
        }
    }

    void reschedule_computing_failure() {
        ++computing_failure_generation_;
        const double rate = head_up_ ? computing_failure_rate(operative(), p_)
                                     : static_cast<double>(up_computing_.size()) * p_.xi;
        if (rate > 0.0) {
            schedule(SimEvent::ComputingFailure, kNone, computing_failure_generation_, exponential(rate));
        }
    }

    void start_services() {
        if (!head_up_) {
            return;
        }
        while (!queue_.empty() && !idle_.empty()) {
            const int server = idle_.pop_back();
            serving_[static_cast<std::size_t>(server)] = queue_.front();
            queue_.pop_front();
            ++busy_;
            schedule(SimEvent::ServiceCompletion, server, service_generation_[static_cast<std::size_t>(server)],
                     exponential(p_.mu));
        }
    }

    ReplicationSample finish() {
        const double span = window_end_ - window_start_;
        sample_.mql = area_tasks_ / span;
        sample_.availability = area_up_ / span;
        sample_.p_block = area_full_ / span;
        sample_.departures = window_departures_;
        sample_.thrp = static_cast<double>(window_departures_) / span;
        sample_.zero_departures = window_departures_ == 0;
        if (!sample_.zero_departures) {
            sample_.mrt = sample_.mql / sample_.thrp;
            sample_.mrt_sojourn = sojourn_sum_ / static_cast<double>(window_departures_);
        }
        sample_.in_system_at_end = tasks_in_system();
        return sample_;
    }

    const SystemParams& p_;
    const TraceSink& trace_;
    const double window_start_;
    const double window_end_;

    std::mt19937_64 rng_;
    std::priority_queue<ScheduledEvent, std::vector<ScheduledEvent>, std::greater<>> calendar_;
    std::uint64_t next_order_ = 0;
    double now_ = 0.0;

    bool head_up_ = true;
    IdSet up_computing_;
    std::deque<int> down_computing_;
    IdSet idle_;  // operative servers without a task; empty while the head is down
    std::vector<std::optional<Task>> serving_;
    std::size_t busy_ = 0;
    std::deque<Task> queue_;
    std::uint64_t next_task_ = 0;
    Repairing repairing_ = Repairing::Nothing;

    std::vector<std::uint64_t> service_generation_;
    std::uint64_t computing_failure_generation_ = 0;
    std::uint64_t head_failure_generation_ = 0;
    std::uint64_t repair_generation_ = 0;

    double area_tasks_ = 0.0;
    double area_up_ = 0.0;
    double area_full_ = 0.0;
    std::uint64_t window_departures_ = 0;
    double sojourn_sum_ = 0.0;
    ReplicationSample sample_;
};

}  // namespace

ReplicationSample run_replication(const SystemParams& p, const SimConfig& cfg, int rep_index,
                                  const TraceSink& trace) {
    validate_params(p);
    if (!(cfg.horizon > 0.0)) {
        throw ParameterError("horizon", "horizon must be > 0");
    }
    return ClusterSimulation(p, cfg, rep_index, trace).run();
}

Estimate summarize(std::vector<double> samples, double confidence) {
    // Sorted before summing.
    std::sort(samples.begin(), samples.end());
    Estimate e;
    const auto n = samples.size();
    if (n == 0) {
        return e;
    }
    e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    if (n < 2) {
        return e;
    }
    double ss = 0.0;
    for (double x : samples) {
        ss += (x - e.mean) * (x - e.mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
    e.half_width = t * sd / std::sqrt(static_cast<double>(n));
    return e;
}

SimResult aggregate(const std::vector<ReplicationSample>& samples, double confidence) {
    auto collect = [&](auto field) {
        std::vector<double> xs;
        xs.reserve(samples.size());
        for (const auto& s : samples) {
            xs.push_back(field(s));
        }
        return summarize(xs, confidence);
    };
    SimResult r;
    r.mql = collect([](const ReplicationSample& s) { return s.mql; });
    r.thrp = collect([](const ReplicationSample& s) { return s.thrp; });
    r.availability = collect([](const ReplicationSample& s) { return s.availability; });
    r.p_block = collect([](const ReplicationSample& s) { return s.p_block; });
    const bool all_departed = std::none_of(samples.begin(), samples.end(),
                                           [](const ReplicationSample& s) { return s.zero_departures; });
    if (all_departed && !samples.empty()) {
        r.mrt = collect([](const ReplicationSample& s) { return *s.mrt; });
        r.mrt_sojourn = collect([](const ReplicationSample& s) { return *s.mrt_sojourn; });
    }
    for (const auto& s : samples) {
        r.events += s.events;
    }
    r.samples = samples;
    return r;
}

SimResult simulate(const SystemParams& p, const SimConfig& cfg) {
    validate_params(p);
    validate_sim_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ReplicationSample> samples;
    samples.reserve(static_cast<std::size_t>(cfg.replications));
    for (int rep = 0; rep < cfg.replications; ++rep) {
        samples.push_back(run_replication(p, cfg, rep));
    }
    SimResult r = aggregate(samples, cfg.confidence);
    r.wall_time = std::chrono::steady_clock::now() - t0;
    return r;
}

}  // namespace clusterperf
