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
#include <gtest/gtest.h>

#include "skmon/geometry.hpp"
#include "skmon/rng.hpp"
#include "skmon/types.hpp"

namespace skmon {
namespace {

TEST(Dist, KnownValues) {
    EXPECT_DOUBLE_EQ(dist({0, 0}, {3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(dist({1, 1}, {1, 1}), 0.0);
    EXPECT_DOUBLE_EQ(dist({0, 0}, {1, 1}), std::sqrt(2.0));
}

TEST(Dist, TriangleInequalityOnRandomTriples) {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Point2D a{rng.in_range(-10, 10), rng.in_range(-10, 10)};
        const Point2D b{rng.in_range(-10, 10), rng.in_range(-10, 10)};
        const Point2D c{rng.in_range(-10, 10), rng.in_range(-10, 10)};
        EXPECT_LE(dist(a, c), dist(a, b) + dist(b, c) + 1e-9);
        EXPECT_DOUBLE_EQ(dist(a, b), dist(b, a));
    }
}

TEST(RectOverlapArea, KnownValues) {
    const Rect unit{{0, 0}, {1, 1}};
    EXPECT_DOUBLE_EQ(rect_overlap_area(unit, unit), 1.0);
    EXPECT_DOUBLE_EQ(rect_overlap_area(unit, {{2, 2}, {3, 3}}), 0.0);
    // interval arithmetic: (min(2,3) - max(0,1))^2 = 1
    EXPECT_DOUBLE_EQ(rect_overlap_area({{0, 0}, {2, 2}}, {{1, 1}, {3, 3}}), 1.0);
}

TEST(RectOverlapArea, SymmetricAndBounded) {
    Rng rng(11);
    const Rect space{{-5, -5}, {5, 5}};
    for (int i = 0; i < 500; ++i) {
        Rect a{{rng.in_range(-5, 5), rng.in_range(-5, 5)},
               {rng.in_range(-5, 5), rng.in_range(-5, 5)}};
        Rect b{{rng.in_range(-5, 5), rng.in_range(-5, 5)},
               {rng.in_range(-5, 5), rng.in_range(-5, 5)}};
        if (a.min.x > a.max.x) std::swap(a.min.x, a.max.x);
        if (a.min.y > a.max.y) std::swap(a.min.y, a.max.y);
        if (b.min.x > b.max.x) std::swap(b.min.x, b.max.x);
        if (b.min.y > b.max.y) std::swap(b.min.y, b.max.y);
        const double ab = rect_overlap_area(a, b);
        EXPECT_EQ(ab, rect_overlap_area(b, a));
        EXPECT_LE(ab, std::min(a.area(), b.area()) + 1e-12);
        EXPECT_TRUE(space.contains(a.min));
    }
}

TEST(BallBoundingRect, KnownValues) {
    const Rect space{{0, 0}, {10, 10}};
    EXPECT_EQ(ball_bounding_rect({{5, 5}, 1.0}, space), (Rect{{4, 4}, {6, 6}}));
    EXPECT_EQ(ball_bounding_rect({{0.5, 0.5}, 2.0}, space), (Rect{{0, 0}, {2.5, 2.5}}));
    EXPECT_EQ(ball_bounding_rect({{3, 7}, Ball::kUnbounded}, space), space);
}

TEST(BallBoundingRect, AlwaysContainedInSpace) {
    Rng rng(3);
    const Rect space{{-2, -2}, {8, 8}};
    for (int i = 0; i < 500; ++i) {
        const Ball b{{rng.in_range(-2, 8), rng.in_range(-2, 8)}, rng.in_range(0, 20)};
        const Rect r = ball_bounding_rect(b, space);
        EXPECT_TRUE(space.contains(r));
        EXPECT_LE(r.min.x, r.max.x);
        EXPECT_LE(r.min.y, r.max.y);
    }
}

TEST(GridGeometry, EveryPointInExactlyOneCell) {
    const Rect space{{0, 0}, {1, 1}};
    const GridGeometry grid(space, 8);
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Point2D p{rng.in_range(-0.2, 1.2), rng.in_range(-0.2, 1.2)};
        const auto c = grid.cell_of(p);
        EXPECT_GE(c.x, 0);
        EXPECT_LT(c.x, 8);
        EXPECT_GE(c.y, 0);
        EXPECT_LT(c.y, 8);
    }
    // the max boundary belongs to the last cell
    EXPECT_EQ(grid.cell_of({1.0, 1.0}), (GridGeometry::CellIndex{7, 7}));
    EXPECT_EQ(grid.cell_of({0.0, 0.0}), (GridGeometry::CellIndex{0, 0}));
}

TEST(GridGeometry, CellRangeIsMonotone) {
    const GridGeometry grid({{0, 0}, {1, 1}}, 16);
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        double x0 = rng.unit(), x1 = rng.unit(), y0 = rng.unit(), y1 = rng.unit();
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        const Rect inner{{x0, y0}, {x1, y1}};
        const Rect outer{{x0 / 2, y0 / 2}, {(x1 + 1) / 2, (y1 + 1) / 2}};
        const auto ri = grid.cell_range(inner);
        const auto ro = grid.cell_range(outer);
        EXPECT_LE(ro.x0, ri.x0);
        EXPECT_LE(ro.y0, ri.y0);
        EXPECT_GE(ro.x1, ri.x1);
        EXPECT_GE(ro.y1, ri.y1);
        // every point of the rect maps into the range
        const auto c = grid.cell_of(inner.min);
        EXPECT_TRUE(ri.contains(c));
    }
}

TEST(KeywordSet, IntersectAndContains) {
    const KeywordSet a = make_keyword_set({3, 1, 2, 3});
    EXPECT_EQ(a, (KeywordSet{1, 2, 3}));
    EXPECT_TRUE(keywords_intersect(a, {3, 9}));
    EXPECT_FALSE(keywords_intersect(a, {4, 9}));
    EXPECT_TRUE(keyword_set_contains(a, 2));
    EXPECT_FALSE(keyword_set_contains(a, 7));
    EXPECT_FALSE(keywords_intersect(a, {}));
}

TEST(Vocabulary, InternIsStableAndCaseSensitive) {
    Vocabulary v;
    const KeywordId coffee = v.intern("coffee");
    const KeywordId tea = v.intern("tea");
    EXPECT_NE(coffee, tea);
    EXPECT_EQ(v.intern("coffee"), coffee);
    EXPECT_NE(v.intern("Coffee"), coffee);
    EXPECT_EQ(v.token(tea), "tea");
    EXPECT_EQ(v.find("nope"), std::nullopt);
}

TEST(Rng, SeedDeterminism) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next(), b.next());
    }
    EXPECT_DOUBLE_EQ(Rng(1).normal(3.0, 0.0), 3.0);
}

}  // namespace
}  // namespace skmon
