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
#include <cmath>
#include <cstdint>
#include <limits>

namespace skmon {

/// 2-d location in abstract Euclidean units.
struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline bool is_finite(const Point2D& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

inline double squared_dist(const Point2D& a, const Point2D& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Euclidean distance.
inline double dist(const Point2D& a, const Point2D& b) {
    return std::sqrt(squared_dist(a, b));
}

/// Axis-aligned rectangle. contains() is closed on every edge; structures
/// that need each point to land in exactly one tile (grids, quadrants)
/// decide membership by index arithmetic instead.
struct Rect {
    Point2D min;
    Point2D max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }

    Point2D center() const { return {(min.x + max.x) / 2.0, (min.y + max.y) / 2.0}; }

    bool contains(const Point2D& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }

    bool contains(const Rect& r) const {
        return r.min.x >= min.x && r.max.x <= max.x && r.min.y >= min.y && r.max.y <= max.y;
    }

    /// True when `r` expanded by `margin` on every side still fits inside.
    bool contains_with_margin(const Rect& r, double margin) const {
        return r.min.x - margin >= min.x && r.max.x + margin <= max.x &&
               r.min.y - margin >= min.y && r.max.y + margin <= max.y;
    }

    bool intersects(const Rect& r) const {
        return min.x <= r.max.x && r.min.x <= max.x && min.y <= r.max.y && r.min.y <= max.y;
    }

    void expand(const Point2D& p) {
        min.x = std::min(min.x, p.x);
        min.y = std::min(min.y, p.y);
        max.x = std::max(max.x, p.x);
        max.y = std::max(max.y, p.y);
    }

    void expand(const Rect& r) {
        expand(r.min);
        expand(r.max);
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Squared distance from a point to the nearest point of a rectangle; 0
/// when the point lies inside.
inline double min_squared_dist(const Point2D& p, const Rect& r) {
    const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
    const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
    return dx * dx + dy * dy;
}

/// Area of the axis-aligned intersection; 0 when disjoint.
inline double rect_overlap_area(const Rect& a, const Rect& b) {
    const double w = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
    const double h = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
    if (w <= 0.0 || h <= 0.0) {
        return 0.0;
    }
    return w * h;
}

/// Disk around a subscription location. The radius stays kUnbounded until
/// the subscription has accumulated k qualified results.
struct Ball {
    static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

    Point2D center;
    double radius = kUnbounded;

    bool unbounded() const { return std::isinf(radius); }

    friend bool operator==(const Ball&, const Ball&) = default;
};

/// Bounding square of a ball, clipped to the data space. An unbounded ball
/// covers the whole space.
inline Rect ball_bounding_rect(const Ball& b, const Rect& space) {
    if (b.unbounded()) {
        return space;
    }
    Rect r{{b.center.x - b.radius, b.center.y - b.radius},
           {b.center.x + b.radius, b.center.y + b.radius}};
    r.min.x = std::max(r.min.x, space.min.x);
    r.min.y = std::max(r.min.y, space.min.y);
    r.max.x = std::min(r.max.x, space.max.x);
    r.max.y = std::min(r.max.y, space.max.y);
    // a ball entirely outside the space collapses to a sliver on the boundary
    r.max.x = std::max(r.max.x, r.min.x);
    r.max.y = std::max(r.max.y, r.min.y);
    return r;
}

/// Uniform G x G tiling of a rectangle. Membership is by clamped floor
/// index, so every point (even one slightly outside the space) maps to
/// exactly one cell, and cell ranges are monotone under rect containment.
class GridGeometry {
public:
    struct CellIndex {
        int x = 0;
        int y = 0;
        friend bool operator==(const CellIndex&, const CellIndex&) = default;
    };

    struct CellRange {
        int x0 = 0;
        int y0 = 0;
        int x1 = -1;
        int y1 = -1;

        bool contains(const CellIndex& c) const {
            return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
        }
        std::int64_t count() const {
            return static_cast<std::int64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
        }
        friend bool operator==(const CellRange&, const CellRange&) = default;
    };

    GridGeometry() = default;

    GridGeometry(const Rect& space, int resolution)
        : space_(space), resolution_(std::max(1, resolution)) {
        cell_w_ = space_.width() > 0.0 ? space_.width() / resolution_ : 1.0;
        cell_h_ = space_.height() > 0.0 ? space_.height() / resolution_ : 1.0;
    }

    int resolution() const { return resolution_; }
    int cell_count() const { return resolution_ * resolution_; }
    const Rect& space() const { return space_; }

    CellIndex cell_of(const Point2D& p) const {
        return {axis_index(p.x, space_.min.x, cell_w_), axis_index(p.y, space_.min.y, cell_h_)};
    }

    CellRange cell_range(const Rect& r) const {
        return {axis_index(r.min.x, space_.min.x, cell_w_),
                axis_index(r.min.y, space_.min.y, cell_h_),
                axis_index(r.max.x, space_.min.x, cell_w_),
                axis_index(r.max.y, space_.min.y, cell_h_)};
    }

    Rect cell_rect(int cx, int cy) const {
        return {{space_.min.x + cx * cell_w_, space_.min.y + cy * cell_h_},
                {space_.min.x + (cx + 1) * cell_w_, space_.min.y + (cy + 1) * cell_h_}};
    }

    int flat(int cx, int cy) const { return cy * resolution_ + cx; }
    int flat(const CellIndex& c) const { return flat(c.x, c.y); }

    double min_cell_side() const { return std::min(cell_w_, cell_h_); }

private:
    int axis_index(double v, double lo, double cell) const {
        const int i = static_cast<int>(std::floor((v - lo) / cell));
        return std::clamp(i, 0, resolution_ - 1);
    }

    Rect space_{};
    int resolution_ = 1;
    double cell_w_ = 1.0;
    double cell_h_ = 1.0;
};

}  // namespace skmon
