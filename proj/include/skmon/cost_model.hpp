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

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "skmon/geometry.hpp"
#include "skmon/init_stats.hpp"
#include "skmon/types.hpp"

namespace skmon {

/// A subscription bundled with the ball estimated from the warm-up data and
/// its clipped bounding square, the unit the partitioners work on.
struct SubRecord {
    Subscription sub;
    Ball ball;
    Rect ball_rect;
};

/// Id-addressable collection of SubRecords.
class SubCatalog {
public:
    SubCatalog() = default;

    explicit SubCatalog(std::vector<SubRecord> records) : records_(std::move(records)) {
        index_.reserve(records_.size());
        for (std::size_t i = 0; i < records_.size(); ++i) {
            if (!index_.emplace(records_[i].sub.id, i).second) {
                throw ConfigError("duplicate subscription id " +
                                  std::to_string(records_[i].sub.id));
            }
        }
    }

    const SubRecord& by_id(SubscriptionId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) {
            throw ConfigError("unknown subscription id " + std::to_string(id));
        }
        return records_[it->second];
    }

    bool contains(SubscriptionId id) const { return index_.count(id) != 0; }
    const std::vector<SubRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

private:
    std::vector<SubRecord> records_;
    std::unordered_map<SubscriptionId, std::size_t> index_;
};

/// A subset of subscriptions with the rectangle R enclosing all member
/// ball squares and the subset's estimated cost. member_costs (parallel to
/// members) is populated by the combined space+keyword cost model.
struct SubsetNode {
    std::vector<SubscriptionId> members;  // kept sorted ascending by id
    Rect region{};                        // R; meaningless when members is empty
    double cost = 0.0;
    std::vector<double> member_costs;
    std::uint64_t seq = 0;
};

/// Ball of a subscription given its current result snapshot: centered at
/// the query point, radius = k-th result distance, unbounded until the
/// result holds k entries.
inline Ball current_ball(const Subscription& s, const ResultSet& result) {
    Ball b{s.p, Ball::kUnbounded};
    if (result.entries.size() == static_cast<std::size_t>(s.k)) {
        b.radius = result.entries.back().distance;
    }
    return b;
}

/// Builds the partitioning record for one subscription; the ball comes from
/// its kNN over the warm-up objects.
inline SubRecord make_sub_record(const Subscription& s, const InitStats& stats) {
    const Ball ball = current_ball(s, stats.knn(s.p, s.psi, s.k));
    return {s, ball, ball_bounding_rect(ball, stats.space())};
}

/// MBR of the member ball squares; degenerate for an empty member list.
inline Rect member_ball_mbr(const std::vector<SubscriptionId>& members,
                            const SubCatalog& subs) {
    if (members.empty()) {
        return {};
    }
    Rect mbr = subs.by_id(members.front()).ball_rect;
    for (std::size_t i = 1; i < members.size(); ++i) {
        mbr.expand(subs.by_id(members[i]).ball_rect);
    }
    return mbr;
}

/// Keyword-frequency cost: the sum of appearance probabilities of the
/// subscription's keywords. Not capped at 1; it is a relative load score.
inline double kop_cost(const Subscription& s, const InitStats& stats) {
    double c = 0.0;
    for (KeywordId kw : s.psi) {
        c += stats.keyword_probability(kw);
    }
    return c;
}

/// Probability that a new object falls inside R, from the warm-up
/// distribution.
inline double sop_region_probability(const Rect& r, const InitStats& stats) {
    if (stats.total() == 0) {
        throw ConfigError("region probability requested before warm-up data was ingested");
    }
    return static_cast<double>(stats.region_count(r)) / static_cast<double>(stats.total());
}

/// Space-oriented subset cost: region probability times the member count.
inline double sop_subset_cost(const SubsetNode& subset, const InitStats& stats) {
    if (subset.members.empty()) {
        return 0.0;
    }
    return sop_region_probability(subset.region, stats) *
           static_cast<double>(subset.members.size());
}

/// Probability that a new object falls inside R and carries the keyword.
inline double dkm_region_keyword_probability(const Rect& r, KeywordId kw,
                                             const InitStats& stats) {
    if (stats.total() == 0) {
        throw ConfigError("region probability requested before warm-up data was ingested");
    }
    return static_cast<double>(stats.region_keyword_count(r, kw)) /
           static_cast<double>(stats.total());
}

/// Combined space+keyword cost of one subscription under rectangle R.
inline double dkm_subscription_cost(const Subscription& s, const Rect& r,
                                    const InitStats& stats) {
    double c = 0.0;
    for (KeywordId kw : s.psi) {
        c += dkm_region_keyword_probability(r, kw, stats);
    }
    return c;
}

/// Subset cost under the combined model: the sum of member costs under the
/// subset's own rectangle. Fills member_costs and cost. Members are
/// iterated in stored (id-ascending) order so the sum is reproducible, and
/// per-keyword probabilities are cached across members.
inline double dkm_subset_cost(SubsetNode& subset, const SubCatalog& subs,
                              const InitStats& stats) {
    subset.member_costs.assign(subset.members.size(), 0.0);
    std::unordered_map<KeywordId, double> cache;
    double total = 0.0;
    for (std::size_t i = 0; i < subset.members.size(); ++i) {
        const Subscription& s = subs.by_id(subset.members[i]).sub;
        double c = 0.0;
        for (KeywordId kw : s.psi) {
            auto it = cache.find(kw);
            if (it == cache.end()) {
                it = cache.emplace(kw, dkm_region_keyword_probability(subset.region, kw, stats))
                         .first;
            }
            c += it->second;
        }
        subset.member_costs[i] = c;
        total += c;
    }
    subset.cost = total;
    return total;
}

}  // namespace skmon
