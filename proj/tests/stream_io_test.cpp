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

#include <sstream>

#include "skmon/generator.hpp"
#include "skmon/stream_io.hpp"

namespace skmon {
namespace {

TEST(ParseStream, BasicRecords) {
    std::istringstream in(
        "O o1 0 0.25 0.5 coffee,tea\n"
        "O o2 0 0.75 0.5 tea\n"
        "S+ q1 0 0.5 0.5 2 coffee\n"
        "O o3 1 0.1 0.1 coffee\n"
        "S+ q2 1 0.2 0.2 1 tea\n"
        "S- q1 1\n"
        "O o4 2 0.3 0.3 tea\n");
    const WorkloadScript script = parse_stream(in, 2);
    EXPECT_EQ(script.warmup.size(), 2u);
    ASSERT_EQ(script.initial_subs.size(), 1u);
    EXPECT_EQ(script.initial_subs[0].k, 2);
    ASSERT_EQ(script.ticks.size(), 2u);
    EXPECT_EQ(script.ticks[0].timestamp, 1);
    EXPECT_EQ(script.ticks[0].objects.size(), 1u);
    EXPECT_EQ(script.ticks[0].inserts.size(), 1u);
    EXPECT_EQ(script.ticks[0].deletes.size(), 1u);
    EXPECT_EQ(script.ticks[1].objects.size(), 1u);
    // the two subscriptions share the interned "tea" keyword with objects
    EXPECT_TRUE(keywords_intersect(script.ticks[0].inserts[0].psi, script.warmup[1].psi));
}

TEST(ParseStream, LineNumberedErrors) {
    auto expect_error_at = [](const std::string& text, std::size_t warmup, std::size_t line) {
        std::istringstream in(text);
        try {
            parse_stream(in, warmup);
            FAIL() << "expected ParseError for: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line_number, line) << e.what();
        }
    };
    expect_error_at("O o1 0 0.5 0.5 a\nX nope\n", 1, 2);                 // unknown kind
    expect_error_at("O o1 0 bad 0.5 a\n", 1, 1);                          // bad coordinate
    expect_error_at("O o1 0 inf 0.5 a\n", 1, 1);                          // non-finite
    expect_error_at("O o1 0 0.5 0.5 a\nO o2 0 0.5 0.5\n", 2, 2);          // missing field
    expect_error_at("O o1 5 0.5 0.5 a\nO o2 4 0.5 0.5 a\n", 2, 2);        // decreasing t
    expect_error_at("O o1 0 0.5 0.5 a,,b\n", 1, 1);                       // empty keyword
    expect_error_at("S- q9 0\nO o1 0 0.5 0.5 a\n", 1, 1);                 // delete in warm-up
    expect_error_at("S+ q1 0 0.5 0.5 0 a\nO o1 0 0.5 0.5 a\n", 1, 1);     // k < 1
}

TEST(ParseStream, ArbitraryTokensGetStableIds) {
    std::istringstream in(
        "O item-A 0 0.1 0.1 x\n"
        "S+ sub:9 0 0.2 0.2 1 x\n"
        "O 42 1 0.3 0.3 x\n"
        "S- sub:9 1\n");
    const WorkloadScript script = parse_stream(in, 1);
    EXPECT_EQ(script.ticks.size(), 1u);
    // the delete resolves to the same internal id as the insert
    ASSERT_EQ(script.initial_subs.size(), 1u);
    ASSERT_EQ(script.ticks[0].deletes.size(), 1u);
    EXPECT_EQ(script.ticks[0].deletes[0], script.initial_subs[0].id);
    // numeric tokens keep their value
    EXPECT_EQ(script.ticks[0].objects[0].id, 42u);
}

TEST(SerializeStream, RoundTripsGeneratedWorkloads) {
    WorkloadShape shape;
    shape.warmup_objects = 50;
    shape.initial_subscriptions = 10;
    shape.timestamps = 3;
    shape.objects_per_tick = 20;
    shape.inserts_per_tick = 4;
    shape.deletes_per_tick = 4;
    shape.k_max = 3;
    StreamSpec spec;
    spec.vocabulary_size = 20;
    spec.min_keywords = 2;
    spec.max_keywords = 4;
    const WorkloadScript script = build_workload(shape, spec, 99);

    std::ostringstream first;
    serialize_stream(script, first);
    std::istringstream back(first.str());
    const WorkloadScript reparsed = parse_stream(back, shape.warmup_objects);
    std::ostringstream second;
    serialize_stream(reparsed, second);
    EXPECT_EQ(first.str(), second.str());

    // structural equality through the numeric ids (generated tokens are
    // decimal, so ids survive the round trip)
    ASSERT_EQ(reparsed.warmup.size(), script.warmup.size());
    for (std::size_t i = 0; i < script.warmup.size(); ++i) {
        EXPECT_EQ(reparsed.warmup[i].id, script.warmup[i].id);
        EXPECT_EQ(reparsed.warmup[i].p, script.warmup[i].p);
        EXPECT_EQ(reparsed.warmup[i].t, script.warmup[i].t);
    }
    ASSERT_EQ(reparsed.ticks.size(), script.ticks.size());
    for (std::size_t i = 0; i < script.ticks.size(); ++i) {
        EXPECT_EQ(reparsed.ticks[i].deletes, script.ticks[i].deletes);
        EXPECT_EQ(reparsed.ticks[i].objects.size(), script.ticks[i].objects.size());
        EXPECT_EQ(reparsed.ticks[i].inserts.size(), script.ticks[i].inserts.size());
    }
}

TEST(SerializeStream, CoordinatesSurviveBitExactly) {
    WorkloadScript script;
    script.vocabulary.intern("k0");
    SKObject o;
    o.id = 1;
    o.t = 0;
    o.p = {0.1234567890123456789, 1.0 / 3.0};
    o.psi = {0};
    script.warmup.push_back(o);
    std::ostringstream out;
    serialize_stream(script, out);
    std::istringstream in(out.str());
    const WorkloadScript back = parse_stream(in, 1);
    ASSERT_EQ(back.warmup.size(), 1u);
    EXPECT_EQ(back.warmup[0].p.x, o.p.x);  // bit-exact
    EXPECT_EQ(back.warmup[0].p.y, o.p.y);
}

TEST(IdTable, NumericAndSyntheticTokens) {
    IdTable table;
    EXPECT_EQ(table.intern("123"), 123u);
    const std::uint64_t a = table.intern("alpha");
    EXPECT_GE(a, 1ull << 63);
    EXPECT_EQ(table.intern("alpha"), a);
    EXPECT_EQ(table.token(a), "alpha");
    EXPECT_EQ(table.token(123), "123");
    // values at or above 2^63 are treated as opaque tokens
    const std::uint64_t big = table.intern("9223372036854775808");
    EXPECT_EQ(table.token(big), "9223372036854775808");
}

}  // namespace
}  // namespace skmon
