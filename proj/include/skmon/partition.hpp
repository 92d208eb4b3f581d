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
#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "skmon/cost_model.hpp"
#include "skmon/geometry.hpp"
#include "skmon/init_stats.hpp"
#include "skmon/types.hpp"

namespace skmon {

enum class SplitMethod { kSpaceOnly, kHybrid };

inline const char* split_method_name(SplitMethod m) {
    return m == SplitMethod::kSpaceOnly ? "space-only" : "hybrid";
}

/// One record per executed split: the size of the subset that was split,
/// the total child cost of each candidate method (hybrid absent when the
/// oversize rule skipped it), and which method was kept.
struct SplitRecord {
    std::size_t subset_size = 0;
    double cost_space = 0.0;
    std::optional<double> cost_hybrid;
    SplitMethod chosen = SplitMethod::kSpaceOnly;
};

struct PartitionResult {
    std::vector<SubsetNode> subsets;
    std::vector<SplitRecord> strategy_log;
};

namespace detail {

// Subsets collapse to a point (or to the resolution floor) and cannot be
// subdivided by quadrants any further.
inline bool quadrant_splittable(const std::vector<SubscriptionId>& members,
                                const SubCatalog& subs, const Rect& region,
                                const Rect& space) {
    if (members.empty()) {
        return false;
    }
    const double floor_extent =
        1e-9 * std::max(space.width(), space.height());
    if (std::max(region.width(), region.height()) < floor_extent) {
        return false;
    }
    const Point2D first = subs.by_id(members.front()).sub.p;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (!(subs.by_id(members[i]).sub.p == first)) {
            return true;
        }
    }
    return false;
}

// Quadrant of `p` inside `r`: 0 = SW, 1 = SE, 2 = NW, 3 = NE. Points on the
// midline go to the upper/right side so each point lands in exactly one
// quadrant.
inline int quadrant_of(const Point2D& p, const Rect& r) {
    const Point2D mid = r.center();
    return (p.x >= mid.x ? 1 : 0) + (p.y >= mid.y ? 2 : 0);
}

inline Rect quadrant_rect(const Rect& r, int q) {
    const Point2D mid = r.center();
    Rect out = r;
    if (q & 1) {
        out.min.x = mid.x;
    } else {
        out.max.x = mid.x;
    }
    if (q & 2) {
        out.min.y = mid.y;
    } else {
        out.max.y = mid.y;
    }
    return out;
}

}  // namespace detail

/// Splits the subset's rectangle into four equal quadrants; members follow
/// their locations, and each child's R is recomputed from its member balls.
/// Empty children are kept so the fan-out is always four. Returns nullopt
/// when the subset cannot make progress (all members co-located, or the
/// region has shrunk to the resolution floor): the caller stops refining
/// that subset.
inline std::optional<std::array<SubsetNode, 4>> space_only_partition(
    const SubsetNode& parent, const SubCatalog& subs, const Rect& space) {
    if (!detail::quadrant_splittable(parent.members, subs, parent.region, space)) {
        return std::nullopt;
    }
    std::array<SubsetNode, 4> children;
    for (SubscriptionId id : parent.members) {
        const int q = detail::quadrant_of(subs.by_id(id).sub.p, parent.region);
        children[static_cast<std::size_t>(q)].members.push_back(id);
    }
    for (SubsetNode& child : children) {
        std::sort(child.members.begin(), child.members.end());
        child.region = member_ball_mbr(child.members, subs);
    }
    return children;
}

/// Greedy longest-processing-time split of the members into four bins by
/// their costs under the parent rectangle. Requires parent.member_costs.
/// Child rectangles are recomputed from the members' own balls; child costs
/// are left for the caller's cost model.
inline std::array<SubsetNode, 4> hybrid_partition(const SubsetNode& parent,
                                                  const SubCatalog& subs) {
    if (parent.member_costs.size() != parent.members.size()) {
        throw ConfigError("hybrid split requires member costs computed under the parent rectangle");
    }
    std::vector<std::size_t> order(parent.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (parent.member_costs[a] != parent.member_costs[b]) {
            return parent.member_costs[a] > parent.member_costs[b];
        }
        return parent.members[a] < parent.members[b];
    });

    std::array<SubsetNode, 4> children;
    std::array<double, 4> bin_cost{0.0, 0.0, 0.0, 0.0};
    for (std::size_t idx : order) {
        std::size_t best = 0;
        for (std::size_t b = 1; b < 4; ++b) {
            if (bin_cost[b] < bin_cost[best]) {
                best = b;
            }
        }
        children[best].members.push_back(parent.members[idx]);
        bin_cost[best] += parent.member_costs[idx];
    }
    for (SubsetNode& child : children) {
        std::sort(child.members.begin(), child.members.end());
        child.region = member_ball_mbr(child.members, subs);
    }
    return children;
}

/// Cost-guided quadtree partition of the whole data space. Repeatedly
/// splits the subspace whose subscription set has the largest
/// region-probability cost until there are at least theta * m subspaces
/// (or nothing splittable remains). Output subsets carry the ball-MBR
/// rectangle R used by the cost model, not the quadtree subspace.
inline PartitionResult sop_quadtree_partition(const SubCatalog& subs, const InitStats& stats,
                                              int theta, int m) {
    if (theta < 1 || m < 1) {
        throw ConfigError("quadtree partition requires theta >= 1 and m >= 1");
    }

    struct Leaf {
        Rect subspace;
        SubsetNode node;  // node.region is the ball MBR
    };

    std::vector<Leaf> leaves;
    auto make_leaf = [&](const Rect& subspace, std::vector<SubscriptionId> members,
                         std::uint64_t seq) {
        Leaf leaf{subspace, {}};
        std::sort(members.begin(), members.end());
        leaf.node.members = std::move(members);
        leaf.node.region = member_ball_mbr(leaf.node.members, subs);
        leaf.node.cost = sop_subset_cost(leaf.node, stats);
        leaf.node.seq = seq;
        return leaf;
    };

    std::uint64_t next_seq = 0;
    {
        std::vector<SubscriptionId> all;
        all.reserve(subs.size());
        for (const SubRecord& r : subs.records()) {
            all.push_back(r.sub.id);
        }
        leaves.push_back(make_leaf(stats.space(), std::move(all), next_seq++));
    }

    // (cost, seq) priority over splittable leaves; ties go to the older leaf
    auto cmp = [&](std::size_t a, std::size_t b) {
        if (leaves[a].node.cost != leaves[b].node.cost) {
            return leaves[a].node.cost < leaves[b].node.cost;
        }
        return leaves[a].node.seq > leaves[b].node.seq;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> active(cmp);
    std::vector<bool> consumed;
    active.push(0);
    consumed.push_back(false);

    PartitionResult result;
    std::size_t leaf_count = 1;
    const std::size_t target = static_cast<std::size_t>(theta) * static_cast<std::size_t>(m);
    while (leaf_count < target && !active.empty()) {
        const std::size_t i = active.top();
        active.pop();
        // quadtree splits act on the subspace rect, so splittability is
        // judged against it rather than the ball MBR
        if (!detail::quadrant_splittable(leaves[i].node.members, subs, leaves[i].subspace,
                                         stats.space())) {
            continue;  // frozen; stays a leaf
        }
        consumed[i] = true;
        std::array<std::vector<SubscriptionId>, 4> quadrant_members;
        for (SubscriptionId id : leaves[i].node.members) {
            const int q = detail::quadrant_of(subs.by_id(id).sub.p, leaves[i].subspace);
            quadrant_members[static_cast<std::size_t>(q)].push_back(id);
        }
        SplitRecord record;
        record.subset_size = leaves[i].node.members.size();
        record.chosen = SplitMethod::kSpaceOnly;
        for (int q = 0; q < 4; ++q) {
            Leaf child = make_leaf(detail::quadrant_rect(leaves[i].subspace, q),
                                   std::move(quadrant_members[static_cast<std::size_t>(q)]),
                                   next_seq++);
            record.cost_space += child.node.cost;
            leaves.push_back(std::move(child));
            consumed.push_back(false);
            active.push(leaves.size() - 1);
        }
        result.strategy_log.push_back(record);
        leaf_count += 3;
    }

    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (!consumed[i]) {
            result.subsets.push_back(std::move(leaves[i].node));
        }
    }
    std::sort(result.subsets.begin(), result.subsets.end(),
              [](const SubsetNode& a, const SubsetNode& b) { return a.seq < b.seq; });
    return result;
}

/// Cost-guided partition that picks, per split, the cheaper of a quadrant
/// split and an LPT split by member cost. Keeps a max-priority collection
/// keyed by subset cost (the initial whole set enters at cost 0), always
/// splits the costliest subset, and applies the quadrant split without
/// comparison when the subset is larger than gamma2. Stops once there are
/// at least gamma1 * m subsets or nothing splittable remains.
inline PartitionResult dkm_partition(const SubCatalog& subs, const InitStats& stats, int m,
                                     int gamma1, int gamma2) {
    if (gamma1 < 1 || gamma2 < 1 || m < 1) {
        throw ConfigError("partition requires gamma1, gamma2, m >= 1");
    }

    std::vector<SubsetNode> nodes;
    std::uint64_t next_seq = 0;
    {
        SubsetNode root;
        root.members.reserve(subs.size());
        for (const SubRecord& r : subs.records()) {
            root.members.push_back(r.sub.id);
        }
        std::sort(root.members.begin(), root.members.end());
        root.region = member_ball_mbr(root.members, subs);
        root.cost = 0.0;  // the collection starts with <S, 0>
        root.seq = next_seq++;
        nodes.push_back(std::move(root));
    }

    auto cmp = [&](std::size_t a, std::size_t b) {
        if (nodes[a].cost != nodes[b].cost) {
            return nodes[a].cost < nodes[b].cost;
        }
        return nodes[a].seq > nodes[b].seq;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> active(cmp);
    std::vector<bool> consumed{false};
    active.push(0);

    PartitionResult result;
    std::size_t subset_count = 1;
    const std::size_t target = static_cast<std::size_t>(gamma1) * static_cast<std::size_t>(m);

    auto insert_children = [&](std::array<SubsetNode, 4>&& children) {
        for (SubsetNode& child : children) {
            child.seq = next_seq++;
            nodes.push_back(std::move(child));
            consumed.push_back(false);
            active.push(nodes.size() - 1);
        }
    };

    while (subset_count < target && !active.empty()) {
        const std::size_t i = active.top();
        active.pop();

        auto space_children = space_only_partition(nodes[i], subs, stats.space());
        if (!space_children) {
            continue;  // unsplittable; stays in the output as-is
        }
        double cost_space = 0.0;
        for (SubsetNode& child : *space_children) {
            cost_space += dkm_subset_cost(child, subs, stats);
        }

        SplitRecord record;
        record.subset_size = nodes[i].members.size();
        record.cost_space = cost_space;

        if (nodes[i].members.size() > static_cast<std::size_t>(gamma2)) {
            record.chosen = SplitMethod::kSpaceOnly;
            consumed[i] = true;
            insert_children(std::move(*space_children));
        } else {
            dkm_subset_cost(nodes[i], subs, stats);  // member costs under the parent R
            auto hybrid_children = hybrid_partition(nodes[i], subs);
            double cost_hybrid = 0.0;
            for (SubsetNode& child : hybrid_children) {
                cost_hybrid += dkm_subset_cost(child, subs, stats);
            }
            record.cost_hybrid = cost_hybrid;
            consumed[i] = true;
            if (cost_space < cost_hybrid) {
                record.chosen = SplitMethod::kSpaceOnly;
                insert_children(std::move(*space_children));
            } else {
                record.chosen = SplitMethod::kHybrid;
                insert_children(std::move(hybrid_children));
            }
        }
        result.strategy_log.push_back(record);
        subset_count += 3;
    }

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (consumed[i]) {
            continue;
        }
        SubsetNode& node = nodes[i];
        if (node.member_costs.size() != node.members.size()) {
            // assignment needs member costs; preserve the priority cost the
            // subset entered the collection with
            const double entry_cost = node.cost;
            dkm_subset_cost(node, subs, stats);
            node.cost = entry_cost;
        }
        result.subsets.push_back(std::move(node));
    }
    std::sort(result.subsets.begin(), result.subsets.end(),
              [](const SubsetNode& a, const SubsetNode& b) { return a.seq < b.seq; });
    return result;
}

/// Line-delimited report of the per-split decisions.
inline void write_strategy_log(std::ostream& os, const PartitionResult& result) {
    os << "subset_size\tcost_space\tcost_hybrid\tchosen\n";
    for (const SplitRecord& r : result.strategy_log) {
        os << r.subset_size << '\t' << r.cost_space << '\t';
        if (r.cost_hybrid) {
            os << *r.cost_hybrid;
        } else {
            os << "-";
        }
        os << '\t' << split_method_name(r.chosen) << '\n';
    }
}

}  // namespace skmon
