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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skmon/geometry.hpp"

namespace skmon {

using ObjectId = std::uint64_t;
using SubscriptionId = std::uint64_t;
using KeywordId = std::uint32_t;
using Timestamp = std::int64_t;

/// Input data violated an ingest contract (bad record, out-of-space point).
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A run or an operation was configured inconsistently.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sorted, duplicate-free set of interned keyword tokens.
using KeywordSet = std::vector<KeywordId>;

inline KeywordSet make_keyword_set(std::vector<KeywordId> raw) {
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    return raw;
}

inline bool keyword_set_contains(const KeywordSet& s, KeywordId k) {
    return std::binary_search(s.begin(), s.end(), k);
}

inline bool keywords_intersect(const KeywordSet& a, const KeywordSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) {
            return true;
        }
        if (*ia < *ib) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return false;
}

/// Interns case-sensitive keyword tokens to dense ids. Tokens are opaque;
/// no normalization or stemming happens here.
class Vocabulary {
public:
    KeywordId intern(std::string_view token) {
        auto it = ids_.find(std::string(token));
        if (it != ids_.end()) {
            return it->second;
        }
        const KeywordId id = static_cast<KeywordId>(tokens_.size());
        tokens_.emplace_back(token);
        ids_.emplace(tokens_.back(), id);
        return id;
    }

    std::optional<KeywordId> find(std::string_view token) const {
        auto it = ids_.find(std::string(token));
        if (it == ids_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    const std::string& token(KeywordId id) const { return tokens_.at(id); }

    std::size_t size() const { return tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, KeywordId> ids_;
};

/// A timestamped point with a non-empty keyword set.
struct SKObject {
    ObjectId id = 0;
    Point2D p;
    KeywordSet psi;
    Timestamp t = 0;

    friend bool operator==(const SKObject&, const SKObject&) = default;
};

/// A continuous query: location, keyword set, result size k, and the
/// registration timestamp that gates which objects qualify.
struct Subscription {
    SubscriptionId id = 0;
    Point2D p;
    KeywordSet psi;
    int k = 1;
    Timestamp t = 0;

    friend bool operator==(const Subscription&, const Subscription&) = default;
};

struct ResultEntry {
    ObjectId object = 0;
    double distance = 0.0;

    friend bool operator==(const ResultEntry&, const ResultEntry&) = default;
};

/// Top-k snapshot, ascending by (distance, object id). Holds fewer than k
/// entries while fewer than k objects qualify.
struct ResultSet {
    std::vector<ResultEntry> entries;

    friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

enum class Algorithm { kKop, kSop, kDkm };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kKop:
            return "kop";
        case Algorithm::kSop:
            return "sop";
        case Algorithm::kDkm:
            return "dkm";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "kop") {
        return Algorithm::kKop;
    }
    if (name == "sop") {
        return Algorithm::kSop;
    }
    if (name == "dkm") {
        return Algorithm::kDkm;
    }
    return std::nullopt;
}

}  // namespace skmon
