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
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "skmon/cost_model.hpp"
#include "skmon/geometry.hpp"
#include "skmon/types.hpp"

namespace skmon {

/// Exact bounded top-k buffer keyed by (squared distance, object id). The
/// k-th entry defines the current ball radius; it never grows on an
/// insert-only stream.
class TopKState {
public:
    TopKState() = default;
    TopKState(int capacity, Timestamp since) : capacity_(capacity), since_(since) {}

    /// Returns true when the offered object changed the result.
    bool offer(ObjectId id, double d2) {
        const Entry cand{d2, id};
        if (heap_.size() < static_cast<std::size_t>(capacity_)) {
            heap_.push_back(cand);
            std::push_heap(heap_.begin(), heap_.end(), less);
            return true;
        }
        if (less(cand, heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), less);
            heap_.back() = cand;
            std::push_heap(heap_.begin(), heap_.end(), less);
            return true;
        }
        return false;
    }

    bool full() const { return heap_.size() == static_cast<std::size_t>(capacity_); }
    std::size_t size() const { return heap_.size(); }
    Timestamp since() const { return since_; }

    double radius_squared() const {
        return full() ? heap_.front().d2 : std::numeric_limits<double>::infinity();
    }

    double radius() const { return full() ? std::sqrt(heap_.front().d2) : Ball::kUnbounded; }

    ResultSet snapshot() const {
        std::vector<Entry> sorted = heap_;
        std::sort(sorted.begin(), sorted.end(), less);
        ResultSet out;
        out.entries.reserve(sorted.size());
        for (const Entry& e : sorted) {
            out.entries.push_back({e.id, std::sqrt(e.d2)});
        }
        return out;
    }

    /// Fault-injection hook: silently drops the nearest entry.
    bool drop_best() {
        if (heap_.empty()) {
            return false;
        }
        auto best = std::min_element(heap_.begin(), heap_.end(), less);
        heap_.erase(best);
        std::make_heap(heap_.begin(), heap_.end(), less);
        return true;
    }

private:
    struct Entry {
        double d2 = 0.0;
        ObjectId id = 0;
    };
    static bool less(const Entry& a, const Entry& b) {
        if (a.d2 != b.d2) {
            return a.d2 < b.d2;
        }
        return a.id < b.id;
    }

    int capacity_ = 1;
    Timestamp since_ = 0;
    std::vector<Entry> heap_;  // max-heap under less
};

/// One worker's online engine: a subscription index in one of three
/// variants plus exact per-subscription top-k maintenance over broadcast
/// objects. Holds no object history; with an insert-only stream and the
/// registration-time constraint, results only improve, so a discarded
/// object can never re-enter any result.
///
/// The grid variant keys each cell's inverted file by the subscriptions
/// whose current ball rectangle touches the cell. Subscriptions whose
/// rectangle covers every cell (unbounded or still very wide) live in one
/// shared side list instead of 4096 per-cell entries; that is the same
/// logical index, factored. Cleanup on ball shrink removes exactly the
/// ring of cells the rectangle no longer touches, so the total maintenance
/// cost per subscription telescopes to the size of its first proper range.
class Worker {
public:
    Worker(int index, Algorithm algorithm, const Rect& space, int grid_resolution)
        : index_(index),
          algorithm_(algorithm),
          space_(space),
          grid_(space, grid_resolution) {
        if (algorithm_ == Algorithm::kDkm) {
            dkm_cells_.resize(static_cast<std::size_t>(grid_.cell_count()));
            full_range_ = grid_.cell_range(space_);
        }
    }

    int index() const { return index_; }
    Algorithm algorithm() const { return algorithm_; }

    /// Registers one subscription with an empty result (unbounded ball).
    /// Under the space-oriented variant the subscription becomes its own
    /// subset whose frozen rectangle is the whole space.
    void register_subscription(const Subscription& s) {
        if (algorithm_ == Algorithm::kSop) {
            add_subset(space_, std::span<const Subscription>(&s, 1));
            return;
        }
        const std::uint32_t slot = allocate_slot(s);
        if (algorithm_ == Algorithm::kKop) {
            for (KeywordId kw : s.psi) {
                kop_postings_[kw].push_back(slot);
            }
        } else {
            // unbounded ball: logically present in every cell
            for (KeywordId kw : s.psi) {
                dkm_everywhere_[kw].push_back(slot);
            }
        }
    }

    /// Installs one space-oriented subset with its frozen pruning
    /// rectangle. Rectangles from partition time only over-cover the
    /// members' shrinking balls, so pruning stays exact.
    void add_subset(const Rect& region, std::span<const Subscription> members) {
        if (algorithm_ != Algorithm::kSop) {
            throw ConfigError("subsets can only be installed on a space-oriented worker");
        }
        if (members.empty()) {
            return;
        }
        SopSubset subset;
        subset.region = region;
        for (const Subscription& s : members) {
            const std::uint32_t slot = allocate_slot(s);
            slots_[slot].sop_subset = sop_subsets_.size();
            subset.slots.push_back(slot);
            for (KeywordId kw : s.psi) {
                subset.postings[kw].push_back(slot);
            }
        }
        sop_subsets_.push_back(std::move(subset));
    }

    /// Unknown ids are counted as warnings and ignored.
    bool remove_subscription(SubscriptionId id) {
        auto it = slot_of_.find(id);
        if (it == slot_of_.end()) {
            ++warnings_;
            return false;
        }
        const std::uint32_t slot = it->second;
        Slot& s = slots_[slot];
        switch (algorithm_) {
            case Algorithm::kKop:
                for (KeywordId kw : s.sub.psi) {
                    erase_value(kop_postings_[kw], slot);
                }
                break;
            case Algorithm::kSop: {
                SopSubset& subset = sop_subsets_[s.sop_subset];
                erase_value(subset.slots, slot);
                for (KeywordId kw : s.sub.psi) {
                    erase_value(subset.postings[kw], slot);
                    if (subset.postings[kw].empty()) {
                        subset.postings.erase(kw);
                    }
                }
                break;
            }
            case Algorithm::kDkm:
                if (s.dkm_in_cells) {
                    remove_from_cells(s.dkm_range, {0, 0, -1, -1}, slot, s.sub.psi);
                } else {
                    for (KeywordId kw : s.sub.psi) {
                        erase_everywhere(kw, slot);
                    }
                }
                break;
        }
        s.live = false;
        slot_of_.erase(it);
        free_slots_.push_back(slot);
        return true;
    }

    /// Feeds one broadcast object through the variant index and updates
    /// every matched subscription's result. Returns the ids whose result
    /// changed.
    std::vector<SubscriptionId> process_object(const SKObject& o) {
        ++objects_seen_;
        ++epoch_;
        updated_.clear();
        switch (algorithm_) {
            case Algorithm::kKop:
                for (KeywordId kw : o.psi) {
                    auto it = kop_postings_.find(kw);
                    if (it == kop_postings_.end()) {
                        continue;
                    }
                    for (std::uint32_t slot : it->second) {
                        visit(slot, o);
                    }
                }
                break;
            case Algorithm::kSop:
                for (SopSubset& subset : sop_subsets_) {
                    if (subset.slots.empty() || !subset.region.contains(o.p)) {
                        continue;
                    }
                    for (KeywordId kw : o.psi) {
                        auto it = subset.postings.find(kw);
                        if (it == subset.postings.end()) {
                            continue;
                        }
                        for (std::uint32_t slot : it->second) {
                            visit(slot, o);
                        }
                    }
                }
                break;
            case Algorithm::kDkm: {
                const auto cell = grid_.cell_of(o.p);
                const DkmCell& postings = dkm_cells_[static_cast<std::size_t>(grid_.flat(cell))];
                for (KeywordId kw : o.psi) {
                    auto it = postings.find(kw);
                    if (it != postings.end()) {
                        // result updates may shrink this very list, so
                        // visit a snapshot
                        scratch_ = it->second;
                        for (std::uint32_t slot : scratch_) {
                            visit(slot, o);
                        }
                    }
                    auto eit = dkm_everywhere_.find(kw);
                    if (eit != dkm_everywhere_.end()) {
                        scratch_ = eit->second;
                        for (std::uint32_t slot : scratch_) {
                            visit(slot, o);
                        }
                    }
                }
                break;
            }
        }
        std::sort(updated_.begin(), updated_.end());
        return updated_;
    }

    /// Loads a warm-up sequence. The final state is identical to processing
    /// each object in timestamp order, but each subscription's top-k is
    /// computed directly with an expanding ring search over a transient
    /// object grid. Replaying object-by-object would transiently index the
    /// wide balls every subscription passes through while its buffer fills.
    void bulk_load(std::span<const SKObject> warmup) {
        objects_seen_ += warmup.size();
        if (warmup.empty() || slot_of_.empty()) {
            return;
        }
        const int g = grid_.resolution();
        std::vector<std::vector<std::uint32_t>> cells(
            static_cast<std::size_t>(grid_.cell_count()));
        for (std::size_t i = 0; i < warmup.size(); ++i) {
            cells[static_cast<std::size_t>(grid_.flat(grid_.cell_of(warmup[i].p)))].push_back(
                static_cast<std::uint32_t>(i));
        }
        const double margin = std::max(space_.width(), space_.height()) * 1e-12;

        for (std::uint32_t slot = 0; slot < slots_.size(); ++slot) {
            Slot& s = slots_[slot];
            if (!s.live) {
                continue;
            }
            const GridGeometry::CellIndex origin = grid_.cell_of(s.sub.p);
            const int max_ring =
                std::max({origin.x, g - 1 - origin.x, origin.y, g - 1 - origin.y});
            for (int ring = 0; ring <= max_ring; ++ring) {
                if (s.topk.full() && ring >= 1) {
                    const double bound =
                        std::max(0.0, (ring - 1) * grid_.min_cell_side() - margin);
                    if (bound * bound > s.topk.radius_squared()) {
                        break;
                    }
                }
                auto visit_cell = [&](int cx, int cy) {
                    if (cx < 0 || cx >= g || cy < 0 || cy >= g) {
                        return;
                    }
                    const auto& bucket = cells[static_cast<std::size_t>(grid_.flat(cx, cy))];
                    if (bucket.empty()) {
                        return;
                    }
                    if (s.topk.full()) {
                        Rect padded = grid_.cell_rect(cx, cy);
                        padded.min.x -= margin;
                        padded.min.y -= margin;
                        padded.max.x += margin;
                        padded.max.y += margin;
                        if (min_squared_dist(s.sub.p, padded) > s.topk.radius_squared()) {
                            return;
                        }
                    }
                    for (std::uint32_t idx : bucket) {
                        const SKObject& o = warmup[idx];
                        if (o.t >= s.sub.t && keywords_intersect(o.psi, s.sub.psi)) {
                            s.topk.offer(o.id, squared_dist(o.p, s.sub.p));
                        }
                    }
                };
                if (ring == 0) {
                    visit_cell(origin.x, origin.y);
                } else {
                    for (int cx = origin.x - ring; cx <= origin.x + ring; ++cx) {
                        visit_cell(cx, origin.y - ring);
                        visit_cell(cx, origin.y + ring);
                    }
                    for (int cy = origin.y - ring + 1; cy <= origin.y + ring - 1; ++cy) {
                        visit_cell(origin.x - ring, cy);
                        visit_cell(origin.x + ring, cy);
                    }
                }
            }
            if (algorithm_ == Algorithm::kDkm) {
                refresh_dkm_cells(slot);
            }
        }
    }

    ResultSet current_result(SubscriptionId id) const {
        return slots_[checked_slot(id)].topk.snapshot();
    }

    bool has_subscription(SubscriptionId id) const { return slot_of_.count(id) != 0; }

    std::vector<SubscriptionId> subscription_ids() const {
        std::vector<SubscriptionId> ids;
        ids.reserve(slot_of_.size());
        for (const auto& [id, slot] : slot_of_) {
            ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    std::size_t live_count() const { return slot_of_.size(); }
    std::uint64_t objects_seen() const { return objects_seen_; }
    std::size_t warning_count() const { return warnings_; }

    /// Fault-injection hook for verification tests.
    bool corrupt_result(SubscriptionId id) { return slots_[checked_slot(id)].topk.drop_best(); }

    // ---- introspection for tests ----

    /// Logical grid membership: whether the subscription is indexed in the
    /// given cell under the given keyword (a ball rectangle covering every
    /// cell makes it logically present everywhere).
    bool dkm_cell_contains(int cx, int cy, KeywordId kw, SubscriptionId id) const {
        auto it = slot_of_.find(id);
        if (it == slot_of_.end()) {
            return false;
        }
        auto eit = dkm_everywhere_.find(kw);
        if (eit != dkm_everywhere_.end() && contains_value(eit->second, it->second)) {
            return true;
        }
        const DkmCell& cell = dkm_cells_[static_cast<std::size_t>(grid_.flat(cx, cy))];
        auto cit = cell.find(kw);
        return cit != cell.end() && contains_value(cit->second, it->second);
    }

    /// Full-structure audit of the grid-index membership rule: a live
    /// subscription sits in exactly the cells its current ball rectangle
    /// maps to, under exactly its keywords, with no stale or duplicate
    /// entries anywhere.
    bool dkm_audit() const {
        if (algorithm_ != Algorithm::kDkm) {
            return true;
        }
        for (const auto& [id, slot] : slot_of_) {
            const Slot& s = slots_[slot];
            const Ball ball{s.sub.p, s.topk.radius()};
            const auto range = grid_.cell_range(ball_bounding_rect(ball, space_));
            const bool everywhere = range == full_range_;
            if (everywhere == s.dkm_in_cells) {
                return false;
            }
            for (KeywordId kw : s.sub.psi) {
                auto eit = dkm_everywhere_.find(kw);
                const bool listed =
                    eit != dkm_everywhere_.end() && contains_value(eit->second, slot);
                if (listed != everywhere) {
                    return false;
                }
            }
            if (s.dkm_in_cells) {
                if (!(range == s.dkm_range)) {
                    return false;
                }
                for (int cy = 0; cy < grid_.resolution(); ++cy) {
                    for (int cx = 0; cx < grid_.resolution(); ++cx) {
                        const bool should = range.contains({cx, cy});
                        const DkmCell& cell =
                            dkm_cells_[static_cast<std::size_t>(grid_.flat(cx, cy))];
                        for (KeywordId kw : s.sub.psi) {
                            auto cit = cell.find(kw);
                            const bool present =
                                cit != cell.end() && contains_value(cit->second, slot);
                            if (present != should) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        // reverse direction: no stale, foreign or duplicate entries
        auto entry_valid = [&](std::uint32_t slot, KeywordId kw) {
            return slot < slots_.size() && slots_[slot].live &&
                   keyword_set_contains(slots_[slot].sub.psi, kw);
        };
        auto no_duplicates = [](std::vector<std::uint32_t> v) {
            std::sort(v.begin(), v.end());
            return std::adjacent_find(v.begin(), v.end()) == v.end();
        };
        for (const auto& [kw, slots] : dkm_everywhere_) {
            if (!no_duplicates(slots)) {
                return false;
            }
            for (std::uint32_t slot : slots) {
                if (!entry_valid(slot, kw) || slots_[slot].dkm_in_cells) {
                    return false;
                }
            }
        }
        for (const DkmCell& cell : dkm_cells_) {
            for (const auto& [kw, slots] : cell) {
                if (!no_duplicates(slots)) {
                    return false;
                }
                for (std::uint32_t slot : slots) {
                    if (!entry_valid(slot, kw) || !slots_[slot].dkm_in_cells) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    /// Deterministic dump of the logical index structure in terms of
    /// subscription ids (slot numbering does not leak in).
    std::string index_fingerprint() const {
        std::ostringstream os;
        auto id_of = [&](std::uint32_t slot) { return slots_[slot].sub.id; };
        auto dump_ids = [&](std::vector<SubscriptionId> ids) {
            std::sort(ids.begin(), ids.end());
            for (SubscriptionId id : ids) {
                os << ' ' << id;
            }
            os << '\n';
        };
        switch (algorithm_) {
            case Algorithm::kKop: {
                std::map<KeywordId, std::vector<SubscriptionId>> sorted;
                for (const auto& [kw, slots] : kop_postings_) {
                    for (std::uint32_t slot : slots) {
                        sorted[kw].push_back(id_of(slot));
                    }
                }
                for (auto& [kw, ids] : sorted) {
                    os << 'k' << kw << ':';
                    dump_ids(std::move(ids));
                }
                break;
            }
            case Algorithm::kSop:
                for (const SopSubset& subset : sop_subsets_) {
                    if (subset.slots.empty()) {
                        continue;
                    }
                    os << "subset " << subset.region.min.x << ',' << subset.region.min.y << ','
                       << subset.region.max.x << ',' << subset.region.max.y << '\n';
                    std::map<KeywordId, std::vector<SubscriptionId>> sorted;
                    for (const auto& [kw, slots] : subset.postings) {
                        for (std::uint32_t slot : slots) {
                            sorted[kw].push_back(id_of(slot));
                        }
                    }
                    for (auto& [kw, ids] : sorted) {
                        os << 'k' << kw << ':';
                        dump_ids(std::move(ids));
                    }
                }
                break;
            case Algorithm::kDkm: {
                std::map<KeywordId, std::vector<SubscriptionId>> everywhere;
                for (const auto& [kw, slots] : dkm_everywhere_) {
                    for (std::uint32_t slot : slots) {
                        everywhere[kw].push_back(id_of(slot));
                    }
                }
                for (auto& [kw, ids] : everywhere) {
                    os << "u k" << kw << ':';
                    dump_ids(std::move(ids));
                }
                for (std::size_t c = 0; c < dkm_cells_.size(); ++c) {
                    std::map<KeywordId, std::vector<SubscriptionId>> sorted;
                    for (const auto& [kw, slots] : dkm_cells_[c]) {
                        for (std::uint32_t slot : slots) {
                            sorted[kw].push_back(id_of(slot));
                        }
                    }
                    for (auto& [kw, ids] : sorted) {
                        os << 'c' << c << " k" << kw << ':';
                        dump_ids(std::move(ids));
                    }
                }
                break;
            }
        }
        return os.str();
    }

private:
    struct Slot {
        Subscription sub;
        TopKState topk;
        bool live = false;
        std::uint64_t seen_epoch = 0;
        std::size_t sop_subset = 0;
        bool dkm_in_cells = false;  // false: listed in the everywhere list
        GridGeometry::CellRange dkm_range;
    };

    struct SopSubset {
        Rect region;
        std::vector<std::uint32_t> slots;
        std::unordered_map<KeywordId, std::vector<std::uint32_t>> postings;
    };

    using DkmCell = std::unordered_map<KeywordId, std::vector<std::uint32_t>>;

    static void erase_value(std::vector<std::uint32_t>& v, std::uint32_t value) {
        v.erase(std::remove(v.begin(), v.end(), value), v.end());
    }

    static bool contains_value(const std::vector<std::uint32_t>& v, std::uint32_t value) {
        return std::find(v.begin(), v.end(), value) != v.end();
    }

    std::uint32_t allocate_slot(const Subscription& s) {
        if (slot_of_.count(s.id) != 0) {
            throw ConfigError("subscription " + std::to_string(s.id) +
                              " is already registered on worker " + std::to_string(index_));
        }
        std::uint32_t slot;
        if (!free_slots_.empty()) {
            slot = free_slots_.back();
            free_slots_.pop_back();
            slots_[slot] = Slot{};
        } else {
            slot = static_cast<std::uint32_t>(slots_.size());
            slots_.emplace_back();
        }
        Slot& st = slots_[slot];
        st.sub = s;
        st.topk = TopKState(s.k, s.t);
        st.live = true;
        slot_of_.emplace(s.id, slot);
        return slot;
    }

    std::uint32_t checked_slot(SubscriptionId id) const {
        auto it = slot_of_.find(id);
        if (it == slot_of_.end()) {
            throw ConfigError("subscription " + std::to_string(id) +
                              " is not registered on worker " + std::to_string(index_));
        }
        return it->second;
    }

    void visit(std::uint32_t slot, const SKObject& o) {
        Slot& s = slots_[slot];
        if (s.seen_epoch == epoch_) {
            return;  // already offered via another keyword list
        }
        s.seen_epoch = epoch_;
        if (o.t < s.sub.t) {
            return;
        }
        // index lookups guarantee the keyword overlap
        const double d2 = squared_dist(o.p, s.sub.p);
        if (s.topk.offer(o.id, d2)) {
            updated_.push_back(s.sub.id);
            if (algorithm_ == Algorithm::kDkm) {
                refresh_dkm_cells(slot);
            }
        }
    }

    // Eager cleanup: whenever the ball shrinks, the slot leaves exactly
    // the cells its rectangle no longer touches.
    void refresh_dkm_cells(std::uint32_t slot) {
        Slot& s = slots_[slot];
        if (!s.topk.full()) {
            return;  // unbounded: stays in the everywhere list
        }
        const Ball ball{s.sub.p, s.topk.radius()};
        const auto range = grid_.cell_range(ball_bounding_rect(ball, space_));
        if (!s.dkm_in_cells) {
            if (range == full_range_) {
                return;  // still covers every cell
            }
            for (KeywordId kw : s.sub.psi) {
                erase_everywhere(kw, slot);
            }
            for (int cy = range.y0; cy <= range.y1; ++cy) {
                for (int cx = range.x0; cx <= range.x1; ++cx) {
                    DkmCell& cell = dkm_cells_[static_cast<std::size_t>(grid_.flat(cx, cy))];
                    for (KeywordId kw : s.sub.psi) {
                        cell[kw].push_back(slot);
                    }
                }
            }
        } else if (!(range == s.dkm_range)) {
            // the radius never grows, so the new range is contained in the
            // old one: strip the ring
            remove_from_cells(s.dkm_range, range, slot, s.sub.psi);
        } else {
            return;
        }
        s.dkm_in_cells = true;
        s.dkm_range = range;
    }

    // Removes the slot from every cell of `from` that is not in `keep`.
    void remove_from_cells(const GridGeometry::CellRange& from,
                           const GridGeometry::CellRange& keep, std::uint32_t slot,
                           const KeywordSet& psi) {
        auto strip_row = [&](int cy, int x0, int x1) {
            for (int cx = x0; cx <= x1; ++cx) {
                DkmCell& cell = dkm_cells_[static_cast<std::size_t>(grid_.flat(cx, cy))];
                for (KeywordId kw : psi) {
                    auto it = cell.find(kw);
                    if (it != cell.end()) {
                        erase_value(it->second, slot);
                        if (it->second.empty()) {
                            cell.erase(it);
                        }
                    }
                }
            }
        };
        for (int cy = from.y0; cy <= from.y1; ++cy) {
            if (cy < keep.y0 || cy > keep.y1) {
                strip_row(cy, from.x0, from.x1);
                continue;
            }
            if (from.x0 <= keep.x0 - 1) {
                strip_row(cy, from.x0, keep.x0 - 1);
            }
            if (keep.x1 + 1 <= from.x1) {
                strip_row(cy, keep.x1 + 1, from.x1);
            }
        }
    }

    void erase_everywhere(KeywordId kw, std::uint32_t slot) {
        auto it = dkm_everywhere_.find(kw);
        if (it != dkm_everywhere_.end()) {
            erase_value(it->second, slot);
            if (it->second.empty()) {
                dkm_everywhere_.erase(it);
            }
        }
    }

    int index_ = 0;
    Algorithm algorithm_ = Algorithm::kKop;
    Rect space_;
    GridGeometry grid_;
    GridGeometry::CellRange full_range_;

    std::vector<Slot> slots_;
    std::vector<std::uint32_t> free_slots_;
    std::unordered_map<SubscriptionId, std::uint32_t> slot_of_;

    std::unordered_map<KeywordId, std::vector<std::uint32_t>> kop_postings_;
    std::vector<SopSubset> sop_subsets_;
    std::vector<DkmCell> dkm_cells_;
    std::unordered_map<KeywordId, std::vector<std::uint32_t>> dkm_everywhere_;

    std::uint64_t epoch_ = 0;
    std::uint64_t objects_seen_ = 0;
    std::size_t warnings_ = 0;
    std::vector<SubscriptionId> updated_;
    std::vector<std::uint32_t> scratch_;
};

}  // namespace skmon
