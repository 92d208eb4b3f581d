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

#include "skmon/init_stats.hpp"
#include "support/test_util.hpp"

namespace skmon {
namespace {

constexpr KeywordId kA = 0;
constexpr KeywordId kB = 1;
constexpr KeywordId kC = 2;

const Rect kUnit{{0, 0}, {1, 1}};

SKObject obj(ObjectId id, double x, double y, KeywordSet psi, Timestamp t = 0) {
    return {id, {x, y}, std::move(psi), t};
}

TEST(BuildInitStats, CountsMatchInput) {
    const std::vector<SKObject> objects{
        obj(0, 0.1, 0.1, {kA}),
        obj(1, 0.2, 0.9, {kA, kB}),
        obj(2, 0.9, 0.2, {kB}),
        obj(3, 0.7, 0.7, {kC}),
    };
    const InitStats stats(objects, kUnit, 4);
    EXPECT_EQ(stats.total(), 4u);
    EXPECT_EQ(stats.keyword_count(kA), 2u);
    EXPECT_EQ(stats.keyword_count(kB), 2u);
    EXPECT_EQ(stats.keyword_count(kC), 1u);
    EXPECT_EQ(stats.keyword_count(99), 0u);
}

TEST(BuildInitStats, EmptySetIsValidButUnusable) {
    const InitStats stats({}, kUnit, 4);
    EXPECT_EQ(stats.total(), 0u);
    EXPECT_THROW(stats.keyword_probability(kA), ConfigError);
}

TEST(BuildInitStats, AllObjectsInOneCell) {
    std::vector<SKObject> objects;
    for (ObjectId i = 0; i < 10; ++i) {
        objects.push_back(obj(i, 0.05, 0.05, {kA}));
    }
    const InitStats stats(objects, kUnit, 8);
    const Rect first_cell = stats.grid().cell_rect(0, 0);
    EXPECT_EQ(stats.region_count(first_cell), 10u);
}

TEST(BuildInitStats, ObjectOutsideSpaceIsAnIngestError) {
    const std::vector<SKObject> objects{obj(77, 2.0, 0.5, {kA})};
    try {
        const InitStats stats(objects, kUnit, 4);
        FAIL() << "expected IngestError";
    } catch (const IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("77"), std::string::npos);
    }
}

TEST(KeywordProbability, Ratios) {
    const std::vector<SKObject> objects{
        obj(0, 0.1, 0.1, {kA}),
        obj(1, 0.3, 0.3, {kA}),
        obj(2, 0.5, 0.5, {kB}),
        obj(3, 0.7, 0.7, {kB}),
    };
    const InitStats stats(objects, kUnit, 4);
    EXPECT_DOUBLE_EQ(stats.keyword_probability(kA), 0.5);
    EXPECT_DOUBLE_EQ(stats.keyword_probability(kC), 0.0);
    const std::vector<SKObject> all_a{obj(0, 0.1, 0.1, {kA}), obj(1, 0.2, 0.2, {kA})};
    EXPECT_DOUBLE_EQ(InitStats(all_a, kUnit, 4).keyword_probability(kA), 1.0);
}

TEST(RegionCount, WholeSpaceAndDisjoint) {
    Rng rng(21);
    const auto objects = test::random_objects(rng, 1000, kUnit, 6);
    const InitStats stats(objects, kUnit, 16);
    EXPECT_EQ(stats.region_count(kUnit), 1000u);
    EXPECT_EQ(stats.region_count({{2, 2}, {3, 3}}), 0u);
}

TEST(RegionCount, MatchesLinearScanOnRandomRects) {
    Rng rng(22);
    const auto objects = test::random_objects(rng, 1000, kUnit, 6);
    const InitStats stats(objects, kUnit, 16);
    for (int i = 0; i < 300; ++i) {
        const Rect r = test::random_rect(rng, kUnit);
        EXPECT_EQ(stats.region_count(r), test::scan_region_count(objects, r));
    }
}

TEST(RegionKeywordCount, ReducesAndMatchesScan) {
    Rng rng(23);
    const auto objects = test::random_objects(rng, 800, kUnit, 5);
    const InitStats stats(objects, kUnit, 8);
    for (KeywordId kw = 0; kw < 5; ++kw) {
        EXPECT_EQ(stats.region_keyword_count(kUnit, kw), stats.keyword_count(kw));
    }
    EXPECT_EQ(stats.region_keyword_count(kUnit, 1234), 0u);
    for (int i = 0; i < 300; ++i) {
        const Rect r = test::random_rect(rng, kUnit);
        const KeywordId kw = static_cast<KeywordId>(rng.bounded(5));
        EXPECT_EQ(stats.region_keyword_count(r, kw),
                  test::scan_region_keyword_count(objects, r, kw));
    }
}

TEST(RegionCounts, OrderingInvariants) {
    Rng rng(24);
    const auto objects = test::random_objects(rng, 500, kUnit, 4);
    const InitStats stats(objects, kUnit, 8);
    for (int i = 0; i < 200; ++i) {
        const Rect r = test::random_rect(rng, kUnit);
        const KeywordId kw = static_cast<KeywordId>(rng.bounded(4));
        const std::size_t rc = stats.region_count(r);
        EXPECT_LE(stats.region_keyword_count(r, kw), rc);
        EXPECT_LE(rc, stats.total());
        // containment monotonicity
        Rect grown = r;
        grown.expand(Point2D{std::min(r.max.x + 0.1, 1.0), std::min(r.max.y + 0.1, 1.0)});
        EXPECT_LE(rc, stats.region_count(grown));
    }
}

TEST(InitKnn, SingleMatchAndNoMatch) {
    const std::vector<SKObject> objects{
        obj(0, 0.25, 0.25, {kA}),
        obj(1, 0.75, 0.75, {kB}),
    };
    const InitStats stats(objects, kUnit, 4);
    const ResultSet hit = stats.knn({0.5, 0.5}, {kA}, 3);
    ASSERT_EQ(hit.entries.size(), 1u);
    EXPECT_EQ(hit.entries[0].object, 0u);
    EXPECT_DOUBLE_EQ(hit.entries[0].distance, dist({0.5, 0.5}, {0.25, 0.25}));
    EXPECT_TRUE(stats.knn({0.5, 0.5}, {kC}, 3).entries.empty());
}

TEST(InitKnn, MatchesLinearScanOracle) {
    Rng rng(25);
    int checked = 0;
    for (int ds = 0; ds < 10; ++ds) {
        const auto objects = test::random_objects(rng, 500, kUnit, 8);
        const InitStats stats(objects, kUnit, 16);
        for (int q = 0; q < 100; ++q) {
            Subscription s;
            s.id = static_cast<SubscriptionId>(q);
            s.p = {rng.unit(), rng.unit()};
            s.k = static_cast<int>(rng.int_in(1, 8));
            s.t = 0;
            std::vector<KeywordId> kws;
            const int nk = static_cast<int>(rng.int_in(1, 3));
            for (int i = 0; i < nk; ++i) {
                kws.push_back(static_cast<KeywordId>(rng.bounded(8)));
            }
            s.psi = make_keyword_set(std::move(kws));
            const ResultSet got = stats.knn(s.p, s.psi, s.k);
            const ResultSet expected = test::scan_knn(s, objects);
            ASSERT_EQ(got, expected) << "dataset " << ds << " query " << q;
            ++checked;
        }
    }
    EXPECT_EQ(checked, 1000);
}

TEST(BoundingSpace, ExpandsAroundObjects) {
    const std::vector<SKObject> objects{obj(0, 0.0, 0.0, {kA}), obj(1, 10.0, 4.0, {kB})};
    const Rect space = bounding_space(objects);
    EXPECT_LT(space.min.x, 0.0);
    EXPECT_GT(space.max.x, 10.0);
    for (const SKObject& o : objects) {
        EXPECT_TRUE(space.contains(o.p));
    }
    // degenerate: co-located points still get a usable box
    const std::vector<SKObject> point{obj(0, 3.0, 3.0, {kA})};
    const Rect degenerate = bounding_space(point);
    EXPECT_GT(degenerate.width(), 0.0);
    EXPECT_TRUE(degenerate.contains(Point2D{3.0, 3.0}));
}

}  // namespace
}  // namespace skmon
