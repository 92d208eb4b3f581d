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

#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "skmon/runtime.hpp"

namespace skmon {

/// Tab-separated per-timestamp metrics, times in milliseconds.
inline void write_metrics_table(std::ostream& os, const std::vector<TimestampMetrics>& metrics,
                                int workers) {
    os << "timestamp";
    for (int w = 0; w < workers; ++w) {
        os << "\tupdate_ms_w" << w;
    }
    os << "\tload_balance_ms\tinsert_ms\tdelete_ms\tcombined_ms\tresult_changes\n";
    std::ostringstream row;
    row << std::fixed << std::setprecision(6);
    for (const TimestampMetrics& m : metrics) {
        row.str("");
        row << m.timestamp;
        for (double s : m.update_seconds) {
            row << '\t' << s * 1e3;
        }
        row << '\t' << m.load_balance_seconds * 1e3 << '\t' << m.insert_seconds * 1e3 << '\t'
            << m.delete_seconds * 1e3 << '\t' << m.combined_seconds * 1e3 << '\t'
            << m.result_changes;
        os << row.str() << '\n';
    }
}

/// Machine-readable summary. Deterministic runs omit wall-clock figures so
/// two runs with the same seed emit byte-identical summaries; the digest
/// covers every live result.
inline nlohmann::json summary_json(const Engine& engine) {
    const RunSummary s = summarize(engine.metrics());
    nlohmann::json j;
    j["algorithm"] = algorithm_name(engine.config().algorithm);
    j["workers"] = engine.config().workers;
    j["seed"] = engine.config().seed;
    j["deterministic"] = engine.config().deterministic;
    j["ticks"] = s.ticks;
    j["truncated"] = engine.truncated();
    j["live_subscriptions"] = engine.ledger().live_count();
    j["total_result_changes"] = s.total_result_changes;
    j["total_unknown_deletes"] = s.total_unknown_deletes;
    j["result_digest"] = engine.result_digest();
    j["worker_loads"] = engine.ledger().loads();
    j["load_imbalance_estimate"] = measured_assignment_imbalance(engine.ledger().loads());
    if (!engine.config().deterministic) {
        j["mean_update_ms"] = s.mean_update_seconds * 1e3;
        j["mean_load_balance_ms"] = s.mean_load_balance_seconds * 1e3;
        j["mean_insert_ms"] = s.mean_insert_seconds * 1e3;
        j["mean_delete_ms"] = s.mean_delete_seconds * 1e3;
        j["mean_combined_ms"] = s.mean_combined_seconds * 1e3;
    }
    return j;
}

}  // namespace skmon
