/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "skmon/assign.hpp"
#include "skmon/cost_model.hpp"
#include "skmon/generator.hpp"
#include "skmon/init_stats.hpp"
#include "skmon/partition.hpp"
#include "skmon/stream_io.hpp"
#include "skmon/types.hpp"
#include "skmon/worker.hpp"

namespace skmon {

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::kDkm;
    int workers = 4;  // m
    int theta = 20;
    int gamma1 = 20;
    int gamma2 = 100000;
    int stats_grid = 64;
    int worker_grid = 64;
    WorkloadShape shape;
    std::uint64_t seed = 1;
    bool deterministic = false;
    bool track_history = false;  // keep broadcast objects for oracle checks
    std::optional<Rect> space;   // override; default is warm-up bbox + 1%

    void validate() const {
        if (workers < 1) {
            throw ConfigError("need at least one worker");
        }
        if (theta < 1 || gamma1 < 1 || gamma2 < 1) {
            throw ConfigError("theta, gamma1 and gamma2 must be >= 1");
        }
        if (stats_grid < 1 || worker_grid < 1) {
            throw ConfigError("grid resolutions must be >= 1");
        }
        shape.validate();
    }
};

/// Wall-clock measurements for one simulated timestamp. The kNN-update
/// metric is the slowest worker's time; the combined column adds insert and
/// delete handling the way the end-to-end update cost is usually quoted.
struct TimestampMetrics {
    Timestamp timestamp = 0;
    std::vector<double> update_seconds;  // per worker
    double max_update_seconds = 0.0;
    double load_balance_seconds = 0.0;  // max - min over workers
    double insert_seconds = 0.0;
    double delete_seconds = 0.0;
    double combined_seconds = 0.0;
    std::size_t objects = 0;
    std::size_t inserts = 0;
    std::size_t deletes = 0;
    std::size_t unknown_deletes = 0;
    std::size_t result_changes = 0;
};

/// Difference between the heaviest and lightest worker load.
inline double measured_assignment_imbalance(const std::vector<double>& loads) {
    if (loads.size() <= 1) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
    return *hi - *lo;
}

/// Reference result: a full linear scan over the visible object history,
/// honoring the keyword overlap, the registration-time constraint, and the
/// (distance, object id) order. Independent of every worker index.
inline ResultSet oracle_knn(const Subscription& s, std::span<const SKObject> history) {
    std::vector<std::pair<double, ObjectId>> qualified;
    for (const SKObject& o : history) {
        if (o.t >= s.t && keywords_intersect(o.psi, s.psi)) {
            qualified.emplace_back(squared_dist(o.p, s.p), o.id);
        }
    }
    std::sort(qualified.begin(), qualified.end());
    if (qualified.size() > static_cast<std::size_t>(s.k)) {
        qualified.resize(static_cast<std::size_t>(s.k));
    }
    ResultSet out;
    out.entries.reserve(qualified.size());
    for (const auto& [d2, id] : qualified) {
        out.entries.push_back({id, std::sqrt(d2)});
    }
    return out;
}

struct VerifyMismatch {
    SubscriptionId id = 0;
    ResultSet expected;
    ResultSet actual;
};

struct VerifyReport {
    std::size_t checked = 0;
    std::vector<VerifyMismatch> mismatches;
    bool clean() const { return mismatches.empty(); }
};

namespace detail {

struct RegisterCmd {
    std::shared_ptr<const std::vector<Subscription>> subs;
};
struct AddSubsetsCmd {
    std::shared_ptr<const std::vector<std::pair<Rect, std::vector<Subscription>>>> subsets;
};
struct RemoveCmd {
    std::shared_ptr<const std::vector<SubscriptionId>> ids;
};
struct ProcessCmd {
    std::shared_ptr<const std::vector<SKObject>> objects;
};
struct BulkLoadCmd {
    std::shared_ptr<const std::vector<SKObject>> objects;
};
using CommandBody = std::variant<RegisterCmd, AddSubsetsCmd, RemoveCmd, ProcessCmd, BulkLoadCmd>;

struct Command {
    std::uint64_t round = 0;
    CommandBody body;
};

struct Ack {
    int worker = 0;
    std::uint64_t round = 0;
    double seconds = 0.0;
    std::size_t result_changes = 0;
};

inline std::size_t apply_command(Worker& worker, const CommandBody& body) {
    std::size_t changes = 0;
    std::visit(
        [&](const auto& cmd) {
            using T = std::decay_t<decltype(cmd)>;
            if constexpr (std::is_same_v<T, RegisterCmd>) {
                for (const Subscription& s : *cmd.subs) {
                    worker.register_subscription(s);
                }
            } else if constexpr (std::is_same_v<T, AddSubsetsCmd>) {
                for (const auto& [region, members] : *cmd.subsets) {
                    worker.add_subset(region, members);
                }
            } else if constexpr (std::is_same_v<T, RemoveCmd>) {
                for (SubscriptionId id : *cmd.ids) {
                    worker.remove_subscription(id);
                }
            } else if constexpr (std::is_same_v<T, BulkLoadCmd>) {
                worker.bulk_load(*cmd.objects);
            } else {
                for (const SKObject& o : *cmd.objects) {
                    changes += worker.process_object(o).size();
                }
            }
        },
        body);
    return changes;
}

/// m worker execution contexts behind one inbound queue each plus a shared
/// acknowledgement channel. round() posts at most one command per worker
/// and blocks until every targeted worker acknowledged, which is the
/// per-timestamp barrier: a command for round r+1 cannot be enqueued before
/// every round-r acknowledgement has been collected. In deterministic mode
/// the same commands run inline in worker-index order.
class WorkerPool {
public:
    WorkerPool(std::vector<std::unique_ptr<Worker>> workers, bool threaded)
        : workers_(std::move(workers)), threaded_(threaded) {
        if (threaded_) {
            inboxes_.resize(workers_.size());
            for (auto& inbox : inboxes_) {
                inbox = std::make_unique<Inbox>();
            }
            for (std::size_t i = 0; i < workers_.size(); ++i) {
                threads_.emplace_back([this, i] { worker_loop(static_cast<int>(i)); });
            }
        }
    }

    ~WorkerPool() {
        if (threaded_) {
            for (auto& inbox : inboxes_) {
                std::lock_guard<std::mutex> lock(inbox->mutex);
                inbox->stop = true;
                inbox->cv.notify_one();
            }
            for (std::thread& t : threads_) {
                t.join();
            }
        }
    }

    int size() const { return static_cast<int>(workers_.size()); }
    Worker& worker(int i) { return *workers_[static_cast<std::size_t>(i)]; }
    const Worker& worker(int i) const { return *workers_[static_cast<std::size_t>(i)]; }

    /// Posts the given per-worker commands (nullopt = skip that worker) and
    /// waits for all acknowledgements. Returns acks indexed by worker; a
    /// skipped worker reports zero time and zero changes.
    std::vector<Ack> round(std::vector<std::optional<CommandBody>> commands) {
        std::vector<Ack> acks(workers_.size());
        for (std::size_t i = 0; i < acks.size(); ++i) {
            acks[i].worker = static_cast<int>(i);
        }
        const std::uint64_t round_id = ++round_counter_;
        if (!threaded_) {
            for (std::size_t i = 0; i < workers_.size(); ++i) {
                if (!commands[i]) {
                    continue;
                }
                const auto t0 = std::chrono::steady_clock::now();
                const std::size_t changes = apply_command(*workers_[i], *commands[i]);
                const auto t1 = std::chrono::steady_clock::now();
                acks[i].round = round_id;
                acks[i].seconds = std::chrono::duration<double>(t1 - t0).count();
                acks[i].result_changes = changes;
            }
            return acks;
        }

        if (pending_.load() != 0) {
            ++barrier_violations_;  // a previous round leaked past its barrier
        }
        int dispatched = 0;
        for (std::size_t i = 0; i < workers_.size(); ++i) {
            if (!commands[i]) {
                continue;
            }
            ++dispatched;
        }
        pending_.store(dispatched);
        for (std::size_t i = 0; i < workers_.size(); ++i) {
            if (!commands[i]) {
                continue;
            }
            Inbox& inbox = *inboxes_[i];
            std::lock_guard<std::mutex> lock(inbox.mutex);
            inbox.queue.push_back(Command{round_id, std::move(*commands[i])});
            inbox.cv.notify_one();
        }
        std::unique_lock<std::mutex> lock(ack_mutex_);
        ack_cv_.wait(lock, [&] { return static_cast<int>(ack_buffer_.size()) == dispatched; });
        for (const Ack& ack : ack_buffer_) {
            if (ack.round != round_id) {
                ++barrier_violations_;
            }
            acks[static_cast<std::size_t>(ack.worker)] = ack;
        }
        ack_buffer_.clear();
        return acks;
    }

    std::uint64_t barrier_violations() const { return barrier_violations_.load(); }
    bool threaded() const { return threaded_; }

private:
    struct Inbox {
        std::mutex mutex;
        std::condition_variable cv;
        std::deque<Command> queue;
        bool stop = false;
    };

    void worker_loop(int index) {
        Inbox& inbox = *inboxes_[static_cast<std::size_t>(index)];
        Worker& worker = *workers_[static_cast<std::size_t>(index)];
        for (;;) {
            Command cmd;
            {
                std::unique_lock<std::mutex> lock(inbox.mutex);
                inbox.cv.wait(lock, [&] { return inbox.stop || !inbox.queue.empty(); });
                if (inbox.queue.empty()) {
                    return;  // stop requested
                }
                cmd = std::move(inbox.queue.front());
                inbox.queue.pop_front();
            }
            const auto t0 = std::chrono::steady_clock::now();
            const std::size_t changes = apply_command(worker, cmd.body);
            const auto t1 = std::chrono::steady_clock::now();
            Ack ack{index, cmd.round, std::chrono::duration<double>(t1 - t0).count(), changes};
            {
                std::lock_guard<std::mutex> lock(ack_mutex_);
                ack_buffer_.push_back(ack);
                pending_.fetch_sub(1);
            }
            ack_cv_.notify_one();
        }
    }

    std::vector<std::unique_ptr<Worker>> workers_;
    bool threaded_ = false;
    std::vector<std::unique_ptr<Inbox>> inboxes_;
    std::vector<std::thread> threads_;
    std::mutex ack_mutex_;
    std::condition_variable ack_cv_;
    std::vector<Ack> ack_buffer_;
    std::atomic<int> pending_{0};
    std::atomic<std::uint64_t> barrier_violations_{0};
    std::uint64_t round_counter_ = 0;
};

}  // namespace detail

/// The coordinator plus its workers: builds the warm-up statistics,
/// partitions and assigns the initial subscriptions, bulk-loads the
/// warm-up, then replays the script tick by tick (objects, then inserts,
/// then deletes, with a barrier per phase). The caller must keep the script
/// alive for the engine's lifetime.
class Engine {
public:
    Engine(ExperimentConfig config, const WorkloadScript& script)
        : config_(std::move(config)), script_(&script) {
        config_.validate();
        ledger_ = CoordinatorLedger(config_.workers);
        const Rect space = config_.space ? *config_.space : bounding_space(script.warmup);
        stats_.emplace(script.warmup, space, config_.stats_grid);

        // estimated balls for the initial set
        std::vector<SubRecord> records;
        records.reserve(script.initial_subs.size());
        for (const Subscription& s : script.initial_subs) {
            validate_subscription(s);
            records.push_back(make_sub_record(s, *stats_));
        }
        catalog_ = SubCatalog(std::move(records));

        build_initial_assignment();

        std::vector<std::unique_ptr<Worker>> workers;
        workers.reserve(static_cast<std::size_t>(config_.workers));
        for (int i = 0; i < config_.workers; ++i) {
            workers.push_back(std::make_unique<Worker>(i, config_.algorithm, space,
                                                       config_.worker_grid));
        }
        pool_.emplace(std::move(workers), !config_.deterministic);

        install_initial_subscriptions();

        if (!script.warmup.empty()) {
            auto warmup = std::make_shared<const std::vector<SKObject>>(script.warmup);
            std::vector<std::optional<detail::CommandBody>> cmds(
                static_cast<std::size_t>(config_.workers));
            for (auto& c : cmds) {
                c = detail::BulkLoadCmd{warmup};
            }
            pool_->round(std::move(cmds));
        }
        if (config_.track_history) {
            history_.insert(history_.end(), script.warmup.begin(), script.warmup.end());
        }
    }

    /// Executes the next scripted timestamp. Returns false when exhausted.
    bool step() {
        if (next_tick_ >= script_->ticks.size()) {
            return false;
        }
        const WorkloadTick& tick = script_->ticks[next_tick_++];
        TimestampMetrics m;
        m.timestamp = tick.timestamp;
        m.objects = tick.objects.size();
        m.update_seconds.assign(static_cast<std::size_t>(config_.workers), 0.0);

        if (!tick.objects.empty()) {
            auto batch = std::make_shared<const std::vector<SKObject>>(tick.objects);
            const auto acks = broadcast_round(detail::ProcessCmd{batch});
            for (const auto& ack : acks) {
                m.update_seconds[static_cast<std::size_t>(ack.worker)] = ack.seconds;
                m.result_changes += ack.result_changes;
            }
        }
        const auto [lo, hi] =
            std::minmax_element(m.update_seconds.begin(), m.update_seconds.end());
        m.max_update_seconds = *hi;
        m.load_balance_seconds = *hi - *lo;
        if (config_.track_history) {
            history_.insert(history_.end(), tick.objects.begin(), tick.objects.end());
        }

        if (!tick.inserts.empty()) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<std::vector<Subscription>> per_worker(
                static_cast<std::size_t>(config_.workers));
            for (const Subscription& s : tick.inserts) {
                validate_subscription(s);
                const RouteDecision decision = route(s);
                per_worker[static_cast<std::size_t>(decision.worker)].push_back(s);
                live_subs_.emplace(s.id, s);
                registration_cursor_[s.id] = history_.size();
            }
            std::vector<std::optional<detail::CommandBody>> cmds(
                static_cast<std::size_t>(config_.workers));
            for (int w = 0; w < config_.workers; ++w) {
                if (!per_worker[static_cast<std::size_t>(w)].empty()) {
                    cmds[static_cast<std::size_t>(w)] = detail::RegisterCmd{
                        std::make_shared<const std::vector<Subscription>>(
                            std::move(per_worker[static_cast<std::size_t>(w)]))};
                }
            }
            pool_->round(std::move(cmds));
            const auto t1 = std::chrono::steady_clock::now();
            m.insert_seconds = std::chrono::duration<double>(t1 - t0).count();
            m.inserts = tick.inserts.size();
        }

        if (!tick.deletes.empty()) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<std::vector<SubscriptionId>> per_worker(
                static_cast<std::size_t>(config_.workers));
            for (SubscriptionId id : tick.deletes) {
                const DeleteOutcome outcome = delete_subscription(id, ledger_);
                if (!outcome.known) {
                    ++m.unknown_deletes;
                    continue;
                }
                per_worker[static_cast<std::size_t>(outcome.worker)].push_back(id);
                live_subs_.erase(id);
                registration_cursor_.erase(id);
            }
            std::vector<std::optional<detail::CommandBody>> cmds(
                static_cast<std::size_t>(config_.workers));
            for (int w = 0; w < config_.workers; ++w) {
                if (!per_worker[static_cast<std::size_t>(w)].empty()) {
                    cmds[static_cast<std::size_t>(w)] = detail::RemoveCmd{
                        std::make_shared<const std::vector<SubscriptionId>>(
                            std::move(per_worker[static_cast<std::size_t>(w)]))};
                }
            }
            pool_->round(std::move(cmds));
            const auto t1 = std::chrono::steady_clock::now();
            m.delete_seconds = std::chrono::duration<double>(t1 - t0).count();
            m.deletes = tick.deletes.size();
        }

        m.combined_seconds = m.max_update_seconds + m.insert_seconds + m.delete_seconds;
        metrics_.push_back(std::move(m));
        return true;
    }

    void run_all() {
        while (step()) {
        }
    }

    // ---- state handle (valid between ticks) ----

    const ExperimentConfig& config() const { return config_; }
    const std::vector<TimestampMetrics>& metrics() const { return metrics_; }
    bool truncated() const {
        return script_->ticks.size() < static_cast<std::size_t>(config_.shape.timestamps);
    }
    const InitStats& stats() const { return *stats_; }
    const CoordinatorLedger& ledger() const { return ledger_; }
    const std::optional<PartitionResult>& partition() const { return partition_; }
    const Assignment& initial_assignment() const { return assignment_; }
    const Worker& worker(int i) const { return pool_->worker(i); }
    std::uint64_t barrier_violations() const { return pool_->barrier_violations(); }
    std::span<const SKObject> broadcast_history() const { return history_; }

    std::vector<SubscriptionId> live_subscriptions() const { return ledger_.live(); }

    ResultSet current_result(SubscriptionId id) const {
        const auto w = ledger_.worker_of(id);
        if (!w) {
            throw ConfigError("subscription " + std::to_string(id) + " is not live");
        }
        return pool_->worker(*w).current_result(id);
    }

    /// Compares every sampled live subscription's current result against
    /// the linear-scan reference over the objects broadcast since its
    /// registration. Requires track_history.
    VerifyReport verify_against_oracle(std::span<const SubscriptionId> sample) const {
        if (!config_.track_history) {
            throw ConfigError("oracle verification requires history tracking");
        }
        VerifyReport report;
        for (SubscriptionId id : sample) {
            const auto w = ledger_.worker_of(id);
            if (!w) {
                continue;
            }
            const Subscription& s = live_subs_.at(id);
            const std::size_t cursor = registration_cursor_.at(id);
            const ResultSet expected =
                oracle_knn(s, std::span<const SKObject>(history_).subspan(cursor));
            const ResultSet actual = pool_->worker(*w).current_result(id);
            ++report.checked;
            if (!(expected == actual)) {
                report.mismatches.push_back({id, expected, actual});
            }
        }
        return report;
    }

    VerifyReport verify_against_oracle() const {
        const auto ids = live_subscriptions();
        return verify_against_oracle(ids);
    }

    /// FNV-1a digest over all live results; replay runs with the same seed
    /// must reproduce it bit-for-bit.
    std::uint64_t result_digest() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (i * 8)) & 0xff;
                h *= 1099511628211ull;
            }
        };
        for (SubscriptionId id : live_subscriptions()) {
            mix(id);
            const ResultSet r = current_result(id);
            for (const ResultEntry& e : r.entries) {
                mix(e.object);
                std::uint64_t bits;
                static_assert(sizeof(bits) == sizeof(e.distance));
                std::memcpy(&bits, &e.distance, sizeof(bits));
                mix(bits);
            }
        }
        return h;
    }

    /// Fault-injection passthrough for verification tests.
    bool corrupt_result(SubscriptionId id) {
        const auto w = ledger_.worker_of(id);
        if (!w) {
            return false;
        }
        return pool_->worker(*w).corrupt_result(id);
    }

private:
    static void validate_subscription(const Subscription& s) {
        if (s.k < 1) {
            throw ConfigError("subscription " + std::to_string(s.id) + " has k < 1");
        }
        if (s.psi.empty()) {
            throw ConfigError("subscription " + std::to_string(s.id) + " has no keywords");
        }
    }

    void build_initial_assignment() {
        const std::size_t n = catalog_.size();
        switch (config_.algorithm) {
            case Algorithm::kKop: {
                std::vector<CostedItem> items;
                items.reserve(n);
                for (const SubRecord& r : catalog_.records()) {
                    items.push_back({r.sub.id, kop_cost(r.sub, *stats_)});
                }
                assignment_ = greedy_assign(std::move(items), config_.workers);
                for (int w = 0; w < config_.workers; ++w) {
                    for (std::uint64_t id : assignment_.members[static_cast<std::size_t>(w)]) {
                        ledger_.install(id, w, kop_cost(catalog_.by_id(id).sub, *stats_));
                    }
                }
                break;
            }
            case Algorithm::kSop: {
                partition_ = sop_quadtree_partition(catalog_, *stats_, config_.theta,
                                                    config_.workers);
                std::vector<CostedItem> items;
                items.reserve(partition_->subsets.size());
                for (const SubsetNode& subset : partition_->subsets) {
                    items.push_back({subset.seq, subset.cost});
                }
                assignment_ = greedy_assign(std::move(items), config_.workers);
                // per-member cost: the subset cost splits evenly as the
                // region probability itself
                for (int w = 0; w < config_.workers; ++w) {
                    for (std::uint64_t seq : assignment_.members[static_cast<std::size_t>(w)]) {
                        const SubsetNode& subset = subset_by_seq(seq);
                        if (subset.members.empty()) {
                            continue;
                        }
                        const double member_cost = sop_region_probability(subset.region, *stats_);
                        for (SubscriptionId id : subset.members) {
                            ledger_.install(id, w, member_cost);
                        }
                    }
                }
                break;
            }
            case Algorithm::kDkm: {
                partition_ = dkm_partition(catalog_, *stats_, config_.workers, config_.gamma1,
                                           config_.gamma2);
                assignment_ = dkm_assign(*partition_, config_.workers);
                std::unordered_map<SubscriptionId, double> cost_of;
                cost_of.reserve(n);
                for (const SubsetNode& subset : partition_->subsets) {
                    for (std::size_t i = 0; i < subset.members.size(); ++i) {
                        cost_of[subset.members[i]] = subset.member_costs[i];
                    }
                }
                for (int w = 0; w < config_.workers; ++w) {
                    for (std::uint64_t id : assignment_.members[static_cast<std::size_t>(w)]) {
                        ledger_.install(id, w, cost_of.at(id));
                    }
                }
                break;
            }
        }
        if (partition_) {
            for (const SubsetNode& subset : partition_->subsets) {
                if (!subset.members.empty()) {
                    regions_.push_back({subset.seq, subset.region});
                }
            }
        }
        if (config_.algorithm == Algorithm::kDkm && regions_.empty()) {
            // no initial subscriptions: the whole space acts as the only
            // stored rectangle, so new-subscription costs collapse to the
            // keyword-frequency model
            regions_.push_back({0, stats_->space()});
        }
        for (const Subscription& s : script_->initial_subs) {
            live_subs_.emplace(s.id, s);
            registration_cursor_[s.id] = 0;
        }
    }

    void install_initial_subscriptions() {
        std::vector<std::optional<detail::CommandBody>> cmds(
            static_cast<std::size_t>(config_.workers));
        if (config_.algorithm == Algorithm::kSop) {
            for (int w = 0; w < config_.workers; ++w) {
                auto payload =
                    std::make_shared<std::vector<std::pair<Rect, std::vector<Subscription>>>>();
                for (std::uint64_t seq : assignment_.members[static_cast<std::size_t>(w)]) {
                    const SubsetNode& subset = subset_by_seq(seq);
                    if (subset.members.empty()) {
                        continue;
                    }
                    std::vector<Subscription> members;
                    members.reserve(subset.members.size());
                    for (SubscriptionId id : subset.members) {
                        members.push_back(catalog_.by_id(id).sub);
                    }
                    payload->emplace_back(subset.region, std::move(members));
                }
                if (!payload->empty()) {
                    cmds[static_cast<std::size_t>(w)] = detail::AddSubsetsCmd{std::move(payload)};
                }
            }
        } else {
            for (int w = 0; w < config_.workers; ++w) {
                const auto& ids = assignment_.members[static_cast<std::size_t>(w)];
                if (ids.empty()) {
                    continue;
                }
                auto subs = std::make_shared<std::vector<Subscription>>();
                subs->reserve(ids.size());
                for (std::uint64_t id : ids) {
                    subs->push_back(catalog_.by_id(id).sub);
                }
                cmds[static_cast<std::size_t>(w)] = detail::RegisterCmd{std::move(subs)};
            }
        }
        pool_->round(std::move(cmds));
    }

    RouteDecision route(const Subscription& s) {
        switch (config_.algorithm) {
            case Algorithm::kKop:
                return route_new_kop(s, *stats_, ledger_);
            case Algorithm::kSop:
                return route_new_sop(s, *stats_, ledger_);
            case Algorithm::kDkm:
                return route_new_dkm(s, *stats_, regions_, ledger_, &region_cost_cache_);
        }
        throw ConfigError("unreachable");
    }

    const SubsetNode& subset_by_seq(std::uint64_t seq) const {
        for (const SubsetNode& subset : partition_->subsets) {
            if (subset.seq == seq) {
                return subset;
            }
        }
        throw ConfigError("unknown subset sequence " + std::to_string(seq));
    }

    std::vector<detail::Ack> broadcast_round(detail::ProcessCmd cmd) {
        std::vector<std::optional<detail::CommandBody>> cmds(
            static_cast<std::size_t>(config_.workers));
        for (auto& c : cmds) {
            c = cmd;
        }
        return pool_->round(std::move(cmds));
    }

    ExperimentConfig config_;
    const WorkloadScript* script_;
    std::optional<InitStats> stats_;
    SubCatalog catalog_;
    std::optional<PartitionResult> partition_;
    Assignment assignment_;
    CoordinatorLedger ledger_{1};
    std::vector<SubsetRegion> regions_;
    RegionCostCache region_cost_cache_;
    std::optional<detail::WorkerPool> pool_;
    std::unordered_map<SubscriptionId, Subscription> live_subs_;
    std::unordered_map<SubscriptionId, std::size_t> registration_cursor_;
    std::vector<SKObject> history_;
    std::vector<TimestampMetrics> metrics_;
    std::size_t next_tick_ = 0;
};

/// Per-run means of the timestamp metrics.
struct RunSummary {
    std::size_t ticks = 0;
    double mean_update_seconds = 0.0;      // slowest worker per tick
    double mean_load_balance_seconds = 0.0;
    double mean_insert_seconds = 0.0;
    double mean_delete_seconds = 0.0;
    double mean_combined_seconds = 0.0;
    std::size_t total_result_changes = 0;
    std::size_t total_unknown_deletes = 0;
};

inline RunSummary summarize(const std::vector<TimestampMetrics>& metrics) {
    RunSummary s;
    s.ticks = metrics.size();
    if (metrics.empty()) {
        return s;
    }
    for (const TimestampMetrics& m : metrics) {
        s.mean_update_seconds += m.max_update_seconds;
        s.mean_load_balance_seconds += m.load_balance_seconds;
        s.mean_insert_seconds += m.insert_seconds;
        s.mean_delete_seconds += m.delete_seconds;
        s.mean_combined_seconds += m.combined_seconds;
        s.total_result_changes += m.result_changes;
        s.total_unknown_deletes += m.unknown_deletes;
    }
    const double n = static_cast<double>(metrics.size());
    s.mean_update_seconds /= n;
    s.mean_load_balance_seconds /= n;
    s.mean_insert_seconds /= n;
    s.mean_delete_seconds /= n;
    s.mean_combined_seconds /= n;
    return s;
}

struct RunOutcome {
    std::vector<TimestampMetrics> metrics;
    RunSummary summary;
    bool truncated = false;
};

inline RunOutcome run_experiment(const ExperimentConfig& config, const WorkloadScript& script) {
    Engine engine(config, script);
    engine.run_all();
    return {engine.metrics(), summarize(engine.metrics()), engine.truncated()};
}

}  // namespace skmon
