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

#include "skmon/runtime.hpp"
#include "support/test_util.hpp"

namespace skmon {
namespace {

WorkloadScript small_script(std::uint64_t seed, int ticks = 5, std::size_t churn = 5) {
    WorkloadShape shape;
    shape.warmup_objects = 500;
    shape.initial_subscriptions = 60;
    shape.timestamps = ticks;
    shape.objects_per_tick = 80;
    shape.inserts_per_tick = churn;
    shape.deletes_per_tick = churn;
    shape.k_max = 4;
    StreamSpec spec;
    spec.vocabulary_size = 30;
    spec.clusters = {{{0.3, 0.3}, 0.12, 0.7}, {{0.75, 0.7}, 0.08, 0.3}};
    return build_workload(shape, spec, seed);
}

ExperimentConfig config_for(const WorkloadScript& script, Algorithm algo, int workers,
                            bool deterministic = true) {
    ExperimentConfig config;
    config.algorithm = algo;
    config.workers = workers;
    config.deterministic = deterministic;
    config.track_history = true;
    config.shape.timestamps = static_cast<int>(script.ticks.size());
    config.stats_grid = 16;
    config.worker_grid = 16;
    return config;
}

const Algorithm kAllAlgorithms[] = {Algorithm::kKop, Algorithm::kSop, Algorithm::kDkm};

TEST(OracleKnn, EmptyHistoryAndBasicOrdering) {
    Subscription s{1, {0.5, 0.5}, {0, 1, 2}, 2, 0};
    EXPECT_TRUE(oracle_knn(s, {}).entries.empty());
}

// A ten-object, one-subscription instance: the subscription asks for two
// results over keywords {a,b,c}; exactly four objects qualify and the two
// nearest win.
TEST(OracleKnn, ToyInstanceMatchesHandComputation) {
    Vocabulary vocab;
    const KeywordId a = vocab.intern("a");
    const KeywordId b = vocab.intern("b");
    const KeywordId c = vocab.intern("c");
    const Subscription s1{1, {0.5, 0.5}, make_keyword_set({a, b, c}), 2, 0};

    std::vector<SKObject> objects;
    auto add = [&](ObjectId id, double dy, KeywordSet psi) {
        objects.push_back({id, {0.5, 0.5 + dy}, std::move(psi), 0});
    };
    add(1, 0.0625, {a});
    add(2, 0.03125, {vocab.intern("d")});
    add(3, -0.03125, {vocab.intern("e")});
    add(4, 0.125, {c});
    add(5, 0.04, {vocab.intern("f")});
    add(6, 0.25, {b});
    add(7, 0.375, {a, b});
    add(8, -0.05, {vocab.intern("g")});
    add(9, -0.06, {vocab.intern("h")});

    // O(s1) = {o1, o4, o6, o7}; the two nearest are o1 and o4
    const ResultSet r = oracle_knn(s1, objects);
    ASSERT_EQ(r.entries.size(), 2u);
    EXPECT_EQ(r.entries[0].object, 1u);
    EXPECT_EQ(r.entries[1].object, 4u);
    EXPECT_DOUBLE_EQ(r.entries[0].distance, 0.0625);
    EXPECT_DOUBLE_EQ(r.entries[1].distance, 0.125);
}

TEST(MeasuredImbalance, KnownValues) {
    EXPECT_DOUBLE_EQ(measured_assignment_imbalance({0.5, 0.5, 0.5}), 0.0);
    EXPECT_DOUBLE_EQ(measured_assignment_imbalance({0.47, 0.48}), 0.48 - 0.47);
    EXPECT_DOUBLE_EQ(measured_assignment_imbalance({3.7}), 0.0);
    EXPECT_DOUBLE_EQ(measured_assignment_imbalance({}), 0.0);
}

TEST(Engine, SingleWorkerHasZeroLoadBalance) {
    const WorkloadScript script = small_script(5);
    Engine engine(config_for(script, Algorithm::kDkm, 1), script);
    engine.run_all();
    ASSERT_EQ(engine.metrics().size(), script.ticks.size());
    for (const TimestampMetrics& m : engine.metrics()) {
        EXPECT_DOUBLE_EQ(m.load_balance_seconds, 0.0);
    }
}

TEST(Engine, ZeroActivityTicksReportZeroMetrics) {
    WorkloadShape shape;
    shape.warmup_objects = 200;
    shape.initial_subscriptions = 20;
    shape.timestamps = 3;
    shape.objects_per_tick = 0;
    shape.inserts_per_tick = 0;
    shape.deletes_per_tick = 0;
    StreamSpec spec;
    spec.vocabulary_size = 10;
    const WorkloadScript script = build_workload(shape, spec, 3);
    Engine engine(config_for(script, Algorithm::kKop, 2), script);
    engine.run_all();
    for (const TimestampMetrics& m : engine.metrics()) {
        EXPECT_DOUBLE_EQ(m.max_update_seconds, 0.0);
        EXPECT_DOUBLE_EQ(m.load_balance_seconds, 0.0);
        EXPECT_DOUBLE_EQ(m.insert_seconds, 0.0);
        EXPECT_DOUBLE_EQ(m.delete_seconds, 0.0);
        EXPECT_EQ(m.result_changes, 0u);
    }
}

TEST(Engine, DeterministicReplayReproducesResults) {
    const WorkloadScript script = small_script(7);
    for (Algorithm algo : kAllAlgorithms) {
        Engine a(config_for(script, algo, 3), script);
        Engine b(config_for(script, algo, 3), script);
        a.run_all();
        b.run_all();
        EXPECT_EQ(a.result_digest(), b.result_digest()) << algorithm_name(algo);
        ASSERT_EQ(a.metrics().size(), b.metrics().size());
        for (std::size_t i = 0; i < a.metrics().size(); ++i) {
            EXPECT_EQ(a.metrics()[i].result_changes, b.metrics()[i].result_changes);
            EXPECT_EQ(a.metrics()[i].unknown_deletes, b.metrics()[i].unknown_deletes);
        }
        EXPECT_EQ(a.ledger().loads(), b.ledger().loads());
    }
}

TEST(Engine, ThreadedModeMatchesDeterministicMode) {
    const WorkloadScript script = small_script(11, /*ticks=*/8);
    for (Algorithm algo : kAllAlgorithms) {
        Engine sequential(config_for(script, algo, 4, /*deterministic=*/true), script);
        Engine threaded(config_for(script, algo, 4, /*deterministic=*/false), script);
        sequential.run_all();
        threaded.run_all();
        EXPECT_EQ(sequential.result_digest(), threaded.result_digest())
            << algorithm_name(algo);
        for (std::size_t i = 0; i < sequential.metrics().size(); ++i) {
            EXPECT_EQ(sequential.metrics()[i].result_changes,
                      threaded.metrics()[i].result_changes);
        }
        EXPECT_EQ(threaded.barrier_violations(), 0u);
    }
}

TEST(Engine, BarrierHoldsUnderThreadedStress) {
    const WorkloadScript script = small_script(13, /*ticks=*/30, /*churn=*/8);
    Engine engine(config_for(script, Algorithm::kDkm, 8, /*deterministic=*/false), script);
    engine.run_all();
    EXPECT_EQ(engine.barrier_violations(), 0u);
    // per-tick verification still passes after the whole threaded run
    EXPECT_TRUE(engine.verify_against_oracle().clean());
}

TEST(Engine, BroadcastReachesEveryWorkerExactlyOnce) {
    const WorkloadScript script = small_script(17);
    std::size_t total = script.warmup.size();
    for (const WorkloadTick& tick : script.ticks) {
        total += tick.objects.size();
    }
    for (bool deterministic : {true, false}) {
        Engine engine(config_for(script, Algorithm::kSop, 3, deterministic), script);
        engine.run_all();
        for (int w = 0; w < 3; ++w) {
            EXPECT_EQ(engine.worker(w).objects_seen(), total);
        }
    }
}

TEST(Engine, RegistryConsistentWithWorkers) {
    const WorkloadScript script = small_script(19);
    for (Algorithm algo : kAllAlgorithms) {
        Engine engine(config_for(script, algo, 3), script);
        engine.run_all();
        std::size_t held = 0;
        for (int w = 0; w < 3; ++w) {
            held += engine.worker(w).live_count();
        }
        const auto live = engine.live_subscriptions();
        EXPECT_EQ(held, live.size());
        for (SubscriptionId id : live) {
            const auto w = engine.ledger().worker_of(id);
            ASSERT_TRUE(w.has_value());
            EXPECT_TRUE(engine.worker(*w).has_subscription(id));
            // exactly one worker holds it
            for (int other = 0; other < 3; ++other) {
                if (other != *w) {
                    EXPECT_FALSE(engine.worker(other).has_subscription(id));
                }
            }
        }
    }
}

TEST(Engine, VerifyCleanAcrossAlgorithmsEveryTick) {
    const WorkloadScript script = small_script(23);
    for (Algorithm algo : kAllAlgorithms) {
        Engine engine(config_for(script, algo, 3), script);
        while (engine.step()) {
            const VerifyReport report = engine.verify_against_oracle();
            EXPECT_GT(report.checked, 0u);
            ASSERT_TRUE(report.clean())
                << algorithm_name(algo) << ": " << report.mismatches.size() << " mismatches";
        }
    }
}

TEST(Engine, CorruptedBufferIsDetected) {
    const WorkloadScript script = small_script(29);
    Engine engine(config_for(script, Algorithm::kDkm, 2), script);
    engine.run_all();
    ASSERT_TRUE(engine.verify_against_oracle().clean());
    // corrupt some live subscription that has results
    bool corrupted = false;
    for (SubscriptionId id : engine.live_subscriptions()) {
        if (engine.corrupt_result(id)) {
            corrupted = true;
            break;
        }
    }
    ASSERT_TRUE(corrupted);
    EXPECT_FALSE(engine.verify_against_oracle().clean());
}

TEST(Engine, FreshSystemVerifiesCleanly) {
    WorkloadShape shape;
    shape.warmup_objects = 100;
    shape.initial_subscriptions = 10;
    shape.timestamps = 0;
    StreamSpec spec;
    spec.vocabulary_size = 8;
    const WorkloadScript script = build_workload(shape, spec, 31);
    Engine engine(config_for(script, Algorithm::kKop, 2), script);
    EXPECT_TRUE(engine.verify_against_oracle().clean());
    EXPECT_FALSE(engine.step());
}

TEST(Engine, TruncationFlagWhenScriptIsShort) {
    const WorkloadScript script = small_script(37, /*ticks=*/3);
    ExperimentConfig config = config_for(script, Algorithm::kKop, 2);
    config.shape.timestamps = 10;  // configured for more ticks than scripted
    Engine engine(config, script);
    engine.run_all();
    EXPECT_TRUE(engine.truncated());
    EXPECT_EQ(engine.metrics().size(), 3u);
}

TEST(Engine, InsertsFirstSeeTheNextTickObjects) {
    // a subscription inserted at tick T must not see tick T's batch
    WorkloadShape shape;
    shape.warmup_objects = 50;
    shape.initial_subscriptions = 5;
    shape.timestamps = 4;
    shape.objects_per_tick = 30;
    shape.inserts_per_tick = 10;
    shape.deletes_per_tick = 0;
    StreamSpec spec;
    spec.vocabulary_size = 6;
    const WorkloadScript script = build_workload(shape, spec, 41);
    Engine engine(config_for(script, Algorithm::kKop, 2), script);
    std::size_t tick_index = 0;
    while (engine.step()) {
        const VerifyReport report = engine.verify_against_oracle();
        ASSERT_TRUE(report.clean()) << "tick " << tick_index;
        ++tick_index;
    }
}

TEST(RunExperiment, ProducesSummary) {
    const WorkloadScript script = small_script(43);
    ExperimentConfig config = config_for(script, Algorithm::kDkm, 2);
    const RunOutcome outcome = run_experiment(config, script);
    EXPECT_EQ(outcome.metrics.size(), script.ticks.size());
    EXPECT_EQ(outcome.summary.ticks, script.ticks.size());
    EXPECT_FALSE(outcome.truncated);
    EXPECT_GT(outcome.summary.total_result_changes, 0u);
}

}  // namespace
}  // namespace skmon
