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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "skmon/rng.hpp"
#include "skmon/stream_io.hpp"
#include "skmon/types.hpp"

namespace skmon {

struct ClusterSpec {
    Point2D center;
    double stddev = 0.1;
    double weight = 1.0;
};

/// Shape of a synthetic object stream: a Gaussian mixture for locations and
/// Zipf-distributed keyword identities.
struct StreamSpec {
    Rect space{{0.0, 0.0}, {1.0, 1.0}};
    std::vector<ClusterSpec> clusters{{{0.5, 0.5}, 0.15, 1.0}};
    int vocabulary_size = 1000;
    double zipf_exponent = 1.0;
    int min_keywords = 3;
    int max_keywords = 6;

    void validate() const {
        if (clusters.empty()) {
            throw ConfigError("stream spec needs at least one location cluster");
        }
        for (const ClusterSpec& c : clusters) {
            if (c.stddev < 0.0 || c.weight <= 0.0) {
                throw ConfigError("cluster stddev must be >= 0 and weight > 0");
            }
        }
        if (zipf_exponent <= 0.0) {
            throw ConfigError("zipf exponent must be positive");
        }
        if (vocabulary_size < 1) {
            throw ConfigError("vocabulary must hold at least one keyword");
        }
        if (min_keywords < 1 || max_keywords < min_keywords) {
            throw ConfigError("keywords-per-object range is invalid");
        }
        if (vocabulary_size < max_keywords) {
            throw ConfigError("vocabulary is smaller than the keywords-per-object maximum");
        }
    }
};

/// Zipf sampler over ranks 0..n-1 (rank 0 most frequent) via CDF inversion.
class ZipfSampler {
public:
    ZipfSampler(int n, double exponent) {
        cdf_.reserve(static_cast<std::size_t>(n));
        double acc = 0.0;
        for (int r = 1; r <= n; ++r) {
            acc += 1.0 / std::pow(static_cast<double>(r), exponent);
            cdf_.push_back(acc);
        }
        for (double& v : cdf_) {
            v /= acc;
        }
    }

    KeywordId draw(Rng& rng) const {
        const double u = rng.unit();
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<KeywordId>(std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1));
    }

private:
    std::vector<double> cdf_;
};

namespace detail {

inline Point2D draw_location(const StreamSpec& spec, Rng& rng) {
    double pick = rng.unit();
    double total = 0.0;
    for (const ClusterSpec& c : spec.clusters) {
        total += c.weight;
    }
    pick *= total;
    const ClusterSpec* cluster = &spec.clusters.back();
    double acc = 0.0;
    for (const ClusterSpec& c : spec.clusters) {
        acc += c.weight;
        if (pick < acc) {
            cluster = &c;
            break;
        }
    }
    Point2D p{rng.normal(cluster->center.x, cluster->stddev),
              rng.normal(cluster->center.y, cluster->stddev)};
    p.x = std::clamp(p.x, spec.space.min.x, spec.space.max.x);
    p.y = std::clamp(p.y, spec.space.min.y, spec.space.max.y);
    return p;
}

inline KeywordSet draw_keywords(const StreamSpec& spec, const ZipfSampler& zipf, Rng& rng) {
    const int want = static_cast<int>(rng.int_in(spec.min_keywords, spec.max_keywords));
    std::vector<KeywordId> ids;
    ids.reserve(static_cast<std::size_t>(want));
    while (static_cast<int>(ids.size()) < want) {
        const KeywordId kw = zipf.draw(rng);
        if (std::find(ids.begin(), ids.end(), kw) == ids.end()) {
            ids.push_back(kw);
        }
    }
    return make_keyword_set(std::move(ids));
}

}  // namespace detail

/// Generates `count` objects with ids starting at `first_id`, all stamped
/// `t`. Fully determined by the Rng state.
inline std::vector<SKObject> generate_object_stream(const StreamSpec& spec, std::size_t count,
                                                    ObjectId first_id, Timestamp t, Rng& rng) {
    spec.validate();
    const ZipfSampler zipf(spec.vocabulary_size, spec.zipf_exponent);
    std::vector<SKObject> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SKObject o;
        o.id = first_id + i;
        o.t = t;
        o.p = detail::draw_location(spec, rng);
        o.psi = detail::draw_keywords(spec, zipf, rng);
        out.push_back(std::move(o));
    }
    return out;
}

inline std::vector<SKObject> generate_object_stream(const StreamSpec& spec, std::size_t count,
                                                    std::uint64_t seed) {
    Rng rng(seed);
    return generate_object_stream(spec, count, 0, 0, rng);
}

/// Generates subscriptions following the object distribution: each copies a
/// uniformly drawn pool object's location and samples 1..min(5, |psi|) of
/// its keywords without replacement; k is uniform in [1, k_max].
inline std::vector<Subscription> generate_subscriptions(std::span<const SKObject> pool,
                                                        std::size_t count, int k_max,
                                                        SubscriptionId first_id, Timestamp t,
                                                        Rng& rng) {
    if (pool.empty()) {
        throw ConfigError("subscription generation needs a non-empty object pool");
    }
    if (k_max < 1) {
        throw ConfigError("k_max must be >= 1");
    }
    std::vector<Subscription> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const SKObject& o = pool[static_cast<std::size_t>(rng.bounded(pool.size()))];
        Subscription s;
        s.id = first_id + i;
        s.t = t;
        s.p = o.p;
        s.k = static_cast<int>(rng.int_in(1, k_max));
        const int bound = static_cast<int>(std::min<std::size_t>(5, o.psi.size()));
        const int want = static_cast<int>(rng.int_in(1, bound));
        std::vector<KeywordId> sample(o.psi.begin(), o.psi.end());
        // partial Fisher-Yates for a uniform draw without replacement
        for (int j = 0; j < want; ++j) {
            const std::size_t pick =
                static_cast<std::size_t>(j) +
                static_cast<std::size_t>(rng.bounded(sample.size() - static_cast<std::size_t>(j)));
            std::swap(sample[static_cast<std::size_t>(j)], sample[pick]);
        }
        sample.resize(static_cast<std::size_t>(want));
        s.psi = make_keyword_set(std::move(sample));
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Subscription> generate_subscriptions(std::span<const SKObject> pool,
                                                        std::size_t count, int k_max,
                                                        std::uint64_t seed) {
    Rng rng(seed);
    return generate_subscriptions(pool, count, k_max, 0, 0, rng);
}

/// Schedule counts for one experiment.
struct WorkloadShape {
    std::size_t warmup_objects = 10000;
    std::size_t initial_subscriptions = 10000;
    int timestamps = 10;
    std::size_t objects_per_tick = 1000;
    std::size_t inserts_per_tick = 100;
    std::size_t deletes_per_tick = 100;
    int k_max = 10;

    void validate() const {
        if (timestamps < 0) {
            throw ConfigError("timestamp count must be >= 0");
        }
        if (k_max < 1) {
            throw ConfigError("k_max must be >= 1");
        }
    }
};

/// Builds a complete seeded workload: warm-up at t=0, initial subscriptions
/// at t=0, then per-tick object batches with subscription churn. Deletes
/// target uniformly random currently-live subscriptions, so every delete in
/// the script references a subscription that is alive when it executes.
inline WorkloadScript build_workload(const WorkloadShape& shape, const StreamSpec& spec,
                                     std::uint64_t seed) {
    shape.validate();
    spec.validate();
    if (shape.warmup_objects == 0 &&
        (shape.initial_subscriptions > 0 || shape.inserts_per_tick > 0)) {
        throw ConfigError("subscription generation needs warm-up objects as its pool");
    }

    Rng rng(seed);
    WorkloadScript script;
    for (int kw = 0; kw < spec.vocabulary_size; ++kw) {
        script.vocabulary.intern("k" + std::to_string(kw));
    }

    ObjectId next_object = 0;
    SubscriptionId next_sub = 0;
    script.warmup = generate_object_stream(spec, shape.warmup_objects, next_object, 0, rng);
    next_object += shape.warmup_objects;
    if (shape.initial_subscriptions > 0) {
        script.initial_subs = generate_subscriptions(
            script.warmup, shape.initial_subscriptions, shape.k_max, next_sub, 0, rng);
        next_sub += shape.initial_subscriptions;
    }

    std::vector<SubscriptionId> live;
    std::unordered_map<SubscriptionId, std::size_t> live_pos;
    auto add_live = [&](SubscriptionId id) {
        live_pos[id] = live.size();
        live.push_back(id);
    };
    auto remove_live = [&](std::size_t pos) {
        live_pos[live.back()] = pos;
        live_pos.erase(live[pos]);
        std::swap(live[pos], live.back());
        live.pop_back();
    };
    for (const Subscription& s : script.initial_subs) {
        add_live(s.id);
    }

    for (int tick = 1; tick <= shape.timestamps; ++tick) {
        WorkloadTick t;
        t.timestamp = tick;
        t.objects = generate_object_stream(spec, shape.objects_per_tick, next_object, tick, rng);
        next_object += shape.objects_per_tick;
        if (shape.inserts_per_tick > 0) {
            t.inserts = generate_subscriptions(script.warmup, shape.inserts_per_tick,
                                               shape.k_max, next_sub, tick, rng);
            next_sub += shape.inserts_per_tick;
            for (const Subscription& s : t.inserts) {
                add_live(s.id);
            }
        }
        for (std::size_t d = 0; d < shape.deletes_per_tick && !live.empty(); ++d) {
            const std::size_t pos = static_cast<std::size_t>(rng.bounded(live.size()));
            t.deletes.push_back(live[pos]);
            remove_live(pos);
        }
        script.ticks.push_back(std::move(t));
    }
    return script;
}

}  // namespace skmon
