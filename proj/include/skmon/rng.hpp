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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace skmon {

/// Deterministic random source. Every draw funnels through one mt19937_64
/// with hand-rolled distributions, so a seed fully determines a workload
/// regardless of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n). n must be >= 1.
    std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform double in [0, 1).
    double unit() { return (engine_() >> 11) * 0x1.0p-53; }

    double in_range(double lo, double hi) { return lo + unit() * (hi - lo); }

    /// Box-Muller normal draw; the spare value is cached.
    double normal(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u = 0.0;
        do {
            u = unit();
        } while (u <= 0.0);
        const double v = unit();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * std::numbers::pi * v);
        has_spare_ = true;
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * v);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace skmon
