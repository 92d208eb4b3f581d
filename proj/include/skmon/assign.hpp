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
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "skmon/cost_model.hpp"
#include "skmon/init_stats.hpp"
#include "skmon/partition.hpp"
#include "skmon/types.hpp"

namespace skmon {

struct AssignmentTraceStep {
    std::uint64_t item = 0;
    int worker = 0;
    double load_before = 0.0;  // the chosen worker's load at decision time
};

/// Result of an offline assignment round: per-worker item lists, per-worker
/// accumulated cost, and the full decision trace.
struct Assignment {
    std::vector<std::vector<std::uint64_t>> members;  // per worker
    std::vector<double> loads;                        // C(w)
    std::vector<AssignmentTraceStep> trace;
};

struct CostedItem {
    std::uint64_t id = 0;
    double cost = 0.0;
};

namespace detail {

inline int argmin_load(const std::vector<double>& loads) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(loads.size()); ++i) {
        if (loads[i] < loads[best]) {
            best = i;
        }
    }
    return best;
}

}  // namespace detail

/// Longest-processing-time greedy: items sorted by descending cost (ties by
/// ascending id), each assigned to the currently least-loaded worker (ties
/// by lowest index).
inline Assignment greedy_assign(std::vector<CostedItem> items, int m) {
    if (m < 1) {
        throw ConfigError("assignment requires at least one worker");
    }
    for (const CostedItem& it : items) {
        if (it.cost < 0.0) {
            throw ConfigError("assignment costs must be non-negative");
        }
    }
    std::sort(items.begin(), items.end(), [](const CostedItem& a, const CostedItem& b) {
        if (a.cost != b.cost) {
            return a.cost > b.cost;
        }
        return a.id < b.id;
    });

    Assignment out;
    out.members.resize(static_cast<std::size_t>(m));
    out.loads.assign(static_cast<std::size_t>(m), 0.0);
    out.trace.reserve(items.size());
    for (const CostedItem& it : items) {
        const int w = detail::argmin_load(out.loads);
        out.trace.push_back({it.id, w, out.loads[static_cast<std::size_t>(w)]});
        out.members[static_cast<std::size_t>(w)].push_back(it.id);
        out.loads[static_cast<std::size_t>(w)] += it.cost;
    }
    return out;
}

/// Assignment for the combined cost model: subsets in descending cost
/// order, and within each subset the members in descending cost order, each
/// member routed individually to the least-loaded worker. Spreading a
/// subset's members across workers parallelizes the updates its (spatially
/// and textually similar) members tend to share.
inline Assignment dkm_assign(const PartitionResult& partition, int m) {
    if (m < 1) {
        throw ConfigError("assignment requires at least one worker");
    }
    std::vector<const SubsetNode*> order;
    order.reserve(partition.subsets.size());
    for (const SubsetNode& s : partition.subsets) {
        if (!s.members.empty() && s.member_costs.size() != s.members.size()) {
            throw ConfigError("subset " + std::to_string(s.seq) +
                              " is missing member costs required for assignment");
        }
        order.push_back(&s);
    }
    std::sort(order.begin(), order.end(), [](const SubsetNode* a, const SubsetNode* b) {
        if (a->cost != b->cost) {
            return a->cost > b->cost;
        }
        return a->seq < b->seq;
    });

    Assignment out;
    out.members.resize(static_cast<std::size_t>(m));
    out.loads.assign(static_cast<std::size_t>(m), 0.0);
    for (const SubsetNode* subset : order) {
        std::vector<std::size_t> member_order(subset->members.size());
        for (std::size_t i = 0; i < member_order.size(); ++i) {
            member_order[i] = i;
        }
        std::sort(member_order.begin(), member_order.end(), [&](std::size_t a, std::size_t b) {
            if (subset->member_costs[a] != subset->member_costs[b]) {
                return subset->member_costs[a] > subset->member_costs[b];
            }
            return subset->members[a] < subset->members[b];
        });
        for (std::size_t i : member_order) {
            const int w = detail::argmin_load(out.loads);
            out.trace.push_back(
                {subset->members[i], w, out.loads[static_cast<std::size_t>(w)]});
            out.members[static_cast<std::size_t>(w)].push_back(subset->members[i]);
            out.loads[static_cast<std::size_t>(w)] += subset->member_costs[i];
        }
    }
    return out;
}

/// Live routing state owned by the coordinator: which worker holds each
/// subscription and at what estimated cost. Worker loads are recomputed as
/// id-ordered sums on every mutation (a contiguous scan, cheap at
/// coordinator scale), so inserting and then deleting the same
/// subscription restores the previous load bit-for-bit.
class CoordinatorLedger {
public:
    explicit CoordinatorLedger(int workers)
        : assigned_(static_cast<std::size_t>(std::max(1, workers))),
          loads_(assigned_.size(), 0.0) {
        if (workers < 1) {
            throw ConfigError("ledger requires at least one worker");
        }
    }

    int worker_count() const { return static_cast<int>(loads_.size()); }
    const std::vector<double>& loads() const { return loads_; }
    double load(int w) const { return loads_.at(static_cast<std::size_t>(w)); }

    int argmin_worker() const { return detail::argmin_load(loads_); }

    void install(SubscriptionId id, int worker, double cost) {
        if (worker_of_.count(id) != 0) {
            throw ConfigError("subscription " + std::to_string(id) + " is already routed");
        }
        worker_of_.emplace(id, worker);
        auto& subs = assigned_[static_cast<std::size_t>(worker)];
        subs.insert(std::lower_bound(subs.begin(), subs.end(), id,
                                     [](const Entry& e, SubscriptionId v) { return e.id < v; }),
                    Entry{id, cost});
        recompute(worker);
    }

    struct Removal {
        int worker = 0;
        double cost = 0.0;
    };

    /// Unknown ids are recorded as warnings and leave the loads untouched.
    std::optional<Removal> erase(SubscriptionId id) {
        auto it = worker_of_.find(id);
        if (it == worker_of_.end()) {
            ++warnings_;
            return std::nullopt;
        }
        const int worker = it->second;
        auto& subs = assigned_[static_cast<std::size_t>(worker)];
        const auto pos =
            std::lower_bound(subs.begin(), subs.end(), id,
                             [](const Entry& e, SubscriptionId v) { return e.id < v; });
        const double cost = pos->cost;
        subs.erase(pos);
        worker_of_.erase(it);
        recompute(worker);
        return Removal{worker, cost};
    }

    std::optional<int> worker_of(SubscriptionId id) const {
        auto it = worker_of_.find(id);
        if (it == worker_of_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::optional<double> cost_of(SubscriptionId id) const {
        auto it = worker_of_.find(id);
        if (it == worker_of_.end()) {
            return std::nullopt;
        }
        const auto& subs = assigned_[static_cast<std::size_t>(it->second)];
        const auto pos =
            std::lower_bound(subs.begin(), subs.end(), id,
                             [](const Entry& e, SubscriptionId v) { return e.id < v; });
        return pos->cost;
    }

    std::vector<SubscriptionId> live() const {
        std::vector<SubscriptionId> ids;
        ids.reserve(worker_of_.size());
        for (const auto& per_worker : assigned_) {
            for (const Entry& e : per_worker) {
                ids.push_back(e.id);
            }
        }
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    /// Live subscriptions of one worker with their routed costs, ascending
    /// by id.
    std::vector<std::pair<SubscriptionId, double>> assigned_to(int worker) const {
        std::vector<std::pair<SubscriptionId, double>> out;
        const auto& subs = assigned_.at(static_cast<std::size_t>(worker));
        out.reserve(subs.size());
        for (const Entry& e : subs) {
            out.emplace_back(e.id, e.cost);
        }
        return out;
    }

    std::size_t live_count() const { return worker_of_.size(); }
    std::size_t warning_count() const { return warnings_; }

private:
    struct Entry {
        SubscriptionId id;
        double cost;
    };

    void recompute(int worker) {
        double sum = 0.0;
        for (const Entry& e : assigned_[static_cast<std::size_t>(worker)]) {
            sum += e.cost;
        }
        loads_[static_cast<std::size_t>(worker)] = sum;
    }

    std::vector<std::vector<Entry>> assigned_;  // each sorted ascending by id
    std::vector<double> loads_;
    std::unordered_map<SubscriptionId, int> worker_of_;
    std::size_t warnings_ = 0;
};

struct RouteDecision {
    int worker = 0;
    double cost = 0.0;
    std::optional<std::uint64_t> subset_seq;  // which stored rectangle was used
};

/// Routes a new subscription by keyword-frequency cost.
inline RouteDecision route_new_kop(const Subscription& s, const InitStats& stats,
                                   CoordinatorLedger& ledger) {
    const double cost = kop_cost(s, stats);
    const int worker = ledger.argmin_worker();
    ledger.install(s.id, worker, cost);
    return {worker, cost, std::nullopt};
}

/// Routes a new subscription by the region probability of its estimated
/// ball (a singleton subset, so the subset cost reduces to the region
/// probability).
inline RouteDecision route_new_sop(const Subscription& s, const InitStats& stats,
                                   CoordinatorLedger& ledger) {
    const SubRecord record = make_sub_record(s, stats);
    const double cost = sop_region_probability(record.ball_rect, stats);
    const int worker = ledger.argmin_worker();
    ledger.install(s.id, worker, cost);
    return {worker, cost, std::nullopt};
}

/// Rectangle of one partition subset as kept by the coordinator for
/// routing new subscriptions.
struct SubsetRegion {
    std::uint64_t seq = 0;
    Rect region;
};

/// Memo for per-rectangle keyword probabilities: the stored rectangles are
/// fixed after partitioning, so routing reuses each (subset, keyword) term.
using RegionCostCache = std::unordered_map<std::uint64_t, std::unordered_map<KeywordId, double>>;

/// Routes a new subscription under the combined cost model: picks the
/// stored subset rectangle overlapping the new ball's rectangle the most
/// (ties by subset sequence; zero overlap everywhere falls back to the
/// nearest rectangle center) and prices the subscription under it.
inline RouteDecision route_new_dkm(const Subscription& s, const InitStats& stats,
                                   std::span<const SubsetRegion> regions,
                                   CoordinatorLedger& ledger,
                                   RegionCostCache* cache = nullptr) {
    if (regions.empty()) {
        throw ConfigError("routing requires at least one stored subset rectangle");
    }
    const SubRecord record = make_sub_record(s, stats);
    const SubsetRegion* best = nullptr;
    double best_overlap = -1.0;
    for (const SubsetRegion& r : regions) {
        const double overlap = rect_overlap_area(r.region, record.ball_rect);
        if (overlap > best_overlap ||
            (best != nullptr && overlap == best_overlap && r.seq < best->seq)) {
            best_overlap = overlap;
            best = &r;
        }
    }
    if (best_overlap <= 0.0) {
        // disjoint everywhere: fall back to spatial locality
        double best_d2 = 0.0;
        best = nullptr;
        for (const SubsetRegion& r : regions) {
            const double d2 = squared_dist(r.region.center(), s.p);
            if (best == nullptr || d2 < best_d2 || (d2 == best_d2 && r.seq < best->seq)) {
                best = &r;
                best_d2 = d2;
            }
        }
    }
    double cost = 0.0;
    if (cache != nullptr) {
        auto& terms = (*cache)[best->seq];
        for (KeywordId kw : s.psi) {
            auto it = terms.find(kw);
            if (it == terms.end()) {
                it = terms.emplace(kw, dkm_region_keyword_probability(best->region, kw, stats))
                         .first;
            }
            cost += it->second;
        }
    } else {
        cost = dkm_subscription_cost(s, best->region, stats);
    }
    const int worker = ledger.argmin_worker();
    ledger.install(s.id, worker, cost);
    return {worker, cost, best->seq};
}

struct DeleteOutcome {
    bool known = false;
    int worker = 0;
};

/// Looks up the routed worker and reverses the subscription's contribution
/// to its load; unknown ids are a warning-level no-op.
inline DeleteOutcome delete_subscription(SubscriptionId id, CoordinatorLedger& ledger) {
    auto removal = ledger.erase(id);
    if (!removal) {
        return {false, 0};
    }
    return {true, removal->worker};
}

/// Audit dump: one line per worker with its estimated load and items.
inline void write_assignment_audit(std::ostream& os, const Assignment& a) {
    os << "worker\testimated_cost\titems\n";
    for (std::size_t w = 0; w < a.members.size(); ++w) {
        os << w << '\t' << a.loads[w] << '\t';
        for (std::size_t i = 0; i < a.members[w].size(); ++i) {
            if (i > 0) {
                os << ',';
            }
            os << a.members[w][i];
        }
        os << '\n';
    }
}

}  // namespace skmon
