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
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "skmon/geometry.hpp"
#include "skmon/types.hpp"

namespace skmon {

/// Returns the bounding box of the warm-up objects, scaled up by
/// `expansion` about its center so slightly-outlying stream objects still
/// fall inside. Degenerate inputs get a unit-sized box.
inline Rect bounding_space(const std::vector<SKObject>& objects, double expansion = 0.01) {
    if (objects.empty()) {
        return {{0.0, 0.0}, {1.0, 1.0}};
    }
    Rect box{objects.front().p, objects.front().p};
    for (const SKObject& o : objects) {
        box.expand(o.p);
    }
    const Point2D c = box.center();
    double hw = box.width() / 2.0;
    double hh = box.height() / 2.0;
    if (hw <= 0.0) {
        hw = 0.5;
    }
    if (hh <= 0.0) {
        hh = 0.5;
    }
    hw *= 1.0 + expansion;
    hh *= 1.0 + expansion;
    return {{c.x - hw, c.y - hh}, {c.x + hw, c.y + hh}};
}

/// Statistics over the warm-up object set: global and per-keyword counts,
/// plus a uniform grid with per-cell object lists and keyword counters.
/// Built once at partition time, then logically immutable (the lazily
/// built per-keyword summed-area tables sit behind a mutex, so concurrent
/// reads are safe). Every count is exact: cells safely interior to a query
/// rectangle are counted wholesale via summed-area tables, and boundary
/// cells fall back to per-point tests.
class InitStats {
public:
    InitStats(std::vector<SKObject> objects, const Rect& space, int grid_resolution)
        : objects_(std::move(objects)), grid_(space, grid_resolution) {
        cells_.resize(static_cast<std::size_t>(grid_.cell_count()));
        for (std::size_t i = 0; i < objects_.size(); ++i) {
            const SKObject& o = objects_[i];
            if (!space.contains(o.p)) {
                throw IngestError("object " + std::to_string(o.id) +
                                  " lies outside the configured data space");
            }
            Cell& cell = cells_[static_cast<std::size_t>(grid_.flat(grid_.cell_of(o.p)))];
            cell.object_idx.push_back(static_cast<std::uint32_t>(i));
            for (KeywordId kw : o.psi) {
                cell.keyword_objects[kw].push_back(static_cast<std::uint32_t>(i));
                keyword_objects_[kw].push_back(static_cast<std::uint32_t>(i));
            }
        }
        // interior-cell classification tolerates float noise well below one cell
        margin_ = std::max(space.width(), space.height()) * 1e-12;
        total_prefix_ = build_prefix([&](const Cell& cell) {
            return static_cast<std::uint32_t>(cell.object_idx.size());
        });
    }

    std::size_t total() const { return objects_.size(); }
    const Rect& space() const { return grid_.space(); }
    const GridGeometry& grid() const { return grid_; }
    const std::vector<SKObject>& objects() const { return objects_; }

    std::size_t keyword_count(KeywordId kw) const {
        auto it = keyword_objects_.find(kw);
        return it == keyword_objects_.end() ? 0 : it->second.size();
    }

    /// Fraction of warm-up objects containing the keyword; 0 for unknown
    /// keywords. Unusable before any warm-up data exists.
    double keyword_probability(KeywordId kw) const {
        if (objects_.empty()) {
            throw ConfigError("keyword probability requested before warm-up data was ingested");
        }
        return static_cast<double>(keyword_count(kw)) / static_cast<double>(total());
    }

    /// Exact number of warm-up objects inside R (closed containment).
    std::size_t region_count(const Rect& r) const {
        if (r.contains(space())) {
            return total();
        }
        return count_region(r, total_prefix_, [&](const Cell& cell, std::size_t& n) {
            for (std::uint32_t idx : cell.object_idx) {
                if (r.contains(objects_[idx].p)) {
                    ++n;
                }
            }
        });
    }

    /// Exact number of warm-up objects inside R that contain the keyword.
    std::size_t region_keyword_count(const Rect& r, KeywordId kw) const {
        if (keyword_count(kw) == 0) {
            return 0;
        }
        if (r.contains(space())) {
            return keyword_count(kw);
        }
        return count_region(r, keyword_prefix(kw), [&](const Cell& cell, std::size_t& n) {
            auto it = cell.keyword_objects.find(kw);
            if (it == cell.keyword_objects.end()) {
                return;
            }
            for (std::uint32_t idx : it->second) {
                if (r.contains(objects_[idx].p)) {
                    ++n;
                }
            }
        });
    }

    /// Exact k nearest warm-up objects sharing a keyword with psi, found by
    /// an expanding ring search over the grid. Returns fewer than k entries
    /// when fewer qualify.
    ResultSet knn(const Point2D& p, const KeywordSet& psi, int k) const {
        ResultSet out;
        if (k <= 0 || objects_.empty()) {
            return out;
        }
        // bounded max-heap keyed by (squared distance, object id)
        std::vector<std::pair<double, ObjectId>> heap;
        heap.reserve(static_cast<std::size_t>(k));
        auto heap_less = [](const auto& a, const auto& b) { return a < b; };
        auto offer = [&](const SKObject& o) {
            const double d2 = squared_dist(p, o.p);
            const std::pair<double, ObjectId> cand{d2, o.id};
            if (heap.size() < static_cast<std::size_t>(k)) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end(), heap_less);
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end(), heap_less);
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end(), heap_less);
            }
        };

        // sparse keywords: scanning their posting lists beats expanding
        // rings through keyword-free cells
        std::size_t posting_total = 0;
        for (KeywordId kw : psi) {
            posting_total += keyword_count(kw);
        }
        if (posting_total <= 2048) {
            std::vector<std::uint32_t> candidates;
            candidates.reserve(posting_total);
            for (KeywordId kw : psi) {
                auto it = keyword_objects_.find(kw);
                if (it != keyword_objects_.end()) {
                    candidates.insert(candidates.end(), it->second.begin(), it->second.end());
                }
            }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()),
                             candidates.end());
            for (std::uint32_t idx : candidates) {
                offer(objects_[idx]);
            }
            std::sort(heap.begin(), heap.end());
            out.entries.reserve(heap.size());
            for (const auto& [d2, id] : heap) {
                out.entries.push_back({id, std::sqrt(d2)});
            }
            return out;
        }

        const GridGeometry::CellIndex origin = grid_.cell_of(p);
        const int g = grid_.resolution();
        const int max_ring =
            std::max({origin.x, g - 1 - origin.x, origin.y, g - 1 - origin.y});
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (heap.size() == static_cast<std::size_t>(k) && ring >= 1) {
                // cells on this ring are at least ring-1 whole cells away
                const double bound =
                    std::max(0.0, (ring - 1) * grid_.min_cell_side() - margin_);
                if (bound * bound > heap.front().first) {
                    break;
                }
            }
            visit_ring(origin, ring, [&](int cx, int cy) {
                const Cell& cell = cells_[static_cast<std::size_t>(grid_.flat(cx, cy))];
                if (cell.object_idx.empty()) {
                    return;
                }
                if (heap.size() == static_cast<std::size_t>(k)) {
                    Rect padded = grid_.cell_rect(cx, cy);
                    padded.min.x -= margin_;
                    padded.min.y -= margin_;
                    padded.max.x += margin_;
                    padded.max.y += margin_;
                    if (min_squared_dist(p, padded) > heap.front().first) {
                        return;  // the whole cell is farther than the current k-th
                    }
                }
                for (std::uint32_t idx : cell.object_idx) {
                    const SKObject& o = objects_[idx];
                    if (keywords_intersect(o.psi, psi)) {
                        offer(o);
                    }
                }
            });
        }

        std::sort(heap.begin(), heap.end());
        out.entries.reserve(heap.size());
        for (const auto& [d2, id] : heap) {
            out.entries.push_back({id, std::sqrt(d2)});
        }
        return out;
    }

private:
    struct Cell {
        std::vector<std::uint32_t> object_idx;
        std::unordered_map<KeywordId, std::vector<std::uint32_t>> keyword_objects;
    };

    using Prefix = std::vector<std::uint32_t>;  // (G+1)^2 summed-area table

    template <typename CellValue>
    Prefix build_prefix(CellValue&& value) const {
        const int g = grid_.resolution();
        Prefix prefix(static_cast<std::size_t>((g + 1) * (g + 1)), 0);
        auto at = [&](int x, int y) -> std::uint32_t& {
            return prefix[static_cast<std::size_t>(y * (g + 1) + x)];
        };
        for (int y = 1; y <= g; ++y) {
            for (int x = 1; x <= g; ++x) {
                at(x, y) = value(cells_[static_cast<std::size_t>(grid_.flat(x - 1, y - 1))]) +
                           at(x - 1, y) + at(x, y - 1) - at(x - 1, y - 1);
            }
        }
        return prefix;
    }

    std::uint32_t prefix_sum(const Prefix& prefix, int x0, int y0, int x1, int y1) const {
        const int g = grid_.resolution();
        auto at = [&](int x, int y) {
            return prefix[static_cast<std::size_t>(y * (g + 1) + x)];
        };
        return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
    }

    const Prefix& keyword_prefix(KeywordId kw) const {
        std::lock_guard<std::mutex> lock(prefix_mutex_);
        auto it = keyword_prefix_.find(kw);
        if (it == keyword_prefix_.end()) {
            it = keyword_prefix_
                     .emplace(kw, build_prefix([&](const Cell& cell) -> std::uint32_t {
                                  auto cit = cell.keyword_objects.find(kw);
                                  return cit == cell.keyword_objects.end()
                                             ? 0
                                             : static_cast<std::uint32_t>(cit->second.size());
                              }))
                     .first;
        }
        return it->second;
    }

    // Counts objects in r as an O(1) summed-area lookup over the interior
    // cells plus exact per-point tests on the boundary ring.
    template <typename PartialCell>
    std::size_t count_region(const Rect& r, const Prefix& prefix, PartialCell&& partial) const {
        if (!r.intersects(grid_.space())) {
            return 0;
        }
        const GridGeometry::CellRange range = grid_.cell_range(r);
        // walk inward from each edge until the cells are safely interior
        auto col_interior = [&](int x) {
            const Rect c = grid_.cell_rect(x, range.y0);
            return c.min.x - margin_ >= r.min.x && c.max.x + margin_ <= r.max.x;
        };
        auto row_interior = [&](int y) {
            const Rect c = grid_.cell_rect(range.x0, y);
            return c.min.y - margin_ >= r.min.y && c.max.y + margin_ <= r.max.y;
        };
        int ix0 = range.x0;
        while (ix0 <= range.x1 && !col_interior(ix0)) {
            ++ix0;
        }
        int ix1 = range.x1;
        while (ix1 >= ix0 && !col_interior(ix1)) {
            --ix1;
        }
        int iy0 = range.y0;
        while (iy0 <= range.y1 && !row_interior(iy0)) {
            ++iy0;
        }
        int iy1 = range.y1;
        while (iy1 >= iy0 && !row_interior(iy1)) {
            --iy1;
        }
        const bool has_interior = ix0 <= ix1 && iy0 <= iy1;

        std::size_t n = has_interior ? prefix_sum(prefix, ix0, iy0, ix1, iy1) : 0;
        for (int cy = range.y0; cy <= range.y1; ++cy) {
            for (int cx = range.x0; cx <= range.x1; ++cx) {
                if (has_interior && cx >= ix0 && cx <= ix1 && cy >= iy0 && cy <= iy1) {
                    continue;  // covered by the summed-area lookup
                }
                const Cell& cell = cells_[static_cast<std::size_t>(grid_.flat(cx, cy))];
                if (cell.object_idx.empty()) {
                    continue;
                }
                partial(cell, n);
            }
        }
        return n;
    }

    template <typename Visit>
    void visit_ring(const GridGeometry::CellIndex& c, int ring, Visit&& visit) const {
        const int g = grid_.resolution();
        auto visit_cell = [&](int cx, int cy) {
            if (cx >= 0 && cx < g && cy >= 0 && cy < g) {
                visit(cx, cy);
            }
        };
        if (ring == 0) {
            visit_cell(c.x, c.y);
            return;
        }
        for (int cx = c.x - ring; cx <= c.x + ring; ++cx) {
            visit_cell(cx, c.y - ring);
            visit_cell(cx, c.y + ring);
        }
        for (int cy = c.y - ring + 1; cy <= c.y + ring - 1; ++cy) {
            visit_cell(c.x - ring, cy);
            visit_cell(c.x + ring, cy);
        }
    }

    std::vector<SKObject> objects_;
    GridGeometry grid_;
    std::vector<Cell> cells_;
    std::unordered_map<KeywordId, std::vector<std::uint32_t>> keyword_objects_;
    double margin_ = 0.0;
    Prefix total_prefix_;
    mutable std::mutex prefix_mutex_;
    mutable std::unordered_map<KeywordId, Prefix> keyword_prefix_;
};

inline InitStats build_init_stats(std::vector<SKObject> objects, const Rect& space,
                                  int grid_resolution) {
    return InitStats(std::move(objects), space, grid_resolution);
}

}  // namespace skmon
