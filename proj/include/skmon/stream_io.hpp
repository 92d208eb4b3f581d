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
#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skmon/types.hpp"

namespace skmon {

/// Parse failure with the 1-based line number of the offending record.
struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_number(line) {}

    std::size_t line_number;
};

/// Maps arbitrary id tokens to 64-bit internal ids. Decimal tokens below
/// 2^63 keep their numeric value (so generated files round-trip exactly);
/// anything else gets a synthetic id from the upper half of the range.
class IdTable {
public:
    std::uint64_t intern(std::string_view token) {
        if (auto numeric = parse_decimal(token)) {
            return *numeric;
        }
        const std::string key(token);
        auto it = ids_.find(key);
        if (it != ids_.end()) {
            return it->second;
        }
        const std::uint64_t id = next_synthetic_++;
        ids_.emplace(key, id);
        tokens_.emplace(id, key);
        return id;
    }

    std::string token(std::uint64_t id) const {
        auto it = tokens_.find(id);
        if (it != tokens_.end()) {
            return it->second;
        }
        return std::to_string(id);
    }

private:
    static std::optional<std::uint64_t> parse_decimal(std::string_view token) {
        if (token.empty()) {
            return std::nullopt;
        }
        std::uint64_t value = 0;
        const char* end = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(token.data(), end, value);
        if (ec != std::errc() || ptr != end || value >= (1ull << 63)) {
            return std::nullopt;
        }
        return value;
    }

    std::unordered_map<std::string, std::uint64_t> ids_;
    std::unordered_map<std::uint64_t, std::string> tokens_;
    std::uint64_t next_synthetic_ = 1ull << 63;
};

/// One simulated timestamp: the object batch, then subscription inserts,
/// then deletes.
struct WorkloadTick {
    Timestamp timestamp = 0;
    std::vector<SKObject> objects;
    std::vector<Subscription> inserts;
    std::vector<SubscriptionId> deletes;
};

/// A full experiment input: warm-up objects, the initial subscription set,
/// and the per-timestamp schedule, together with the token tables needed to
/// serialize it back out.
struct WorkloadScript {
    std::vector<SKObject> warmup;
    std::vector<Subscription> initial_subs;
    std::vector<WorkloadTick> ticks;
    Vocabulary vocabulary;
    IdTable object_ids;
    IdTable subscription_ids;
};

namespace detail {

inline double parse_coord(std::string_view token, std::size_t line) {
    double v = 0.0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError(line, "bad coordinate '" + std::string(token) + "'");
    }
    return v;
}

inline Timestamp parse_timestamp(std::string_view token, std::size_t line) {
    Timestamp v = 0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || v < 0) {
        throw ParseError(line, "bad timestamp '" + std::string(token) + "'");
    }
    return v;
}

inline int parse_k(std::string_view token, std::size_t line) {
    int v = 0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || v < 1) {
        throw ParseError(line, "bad k '" + std::string(token) + "' (must be >= 1)");
    }
    return v;
}

inline KeywordSet parse_keywords(std::string_view field, Vocabulary& vocab, std::size_t line) {
    std::vector<KeywordId> ids;
    std::size_t start = 0;
    while (start <= field.size()) {
        const std::size_t comma = field.find(',', start);
        const std::string_view token =
            field.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                : comma - start);
        if (token.empty()) {
            throw ParseError(line, "empty keyword token");
        }
        ids.push_back(vocab.intern(token));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (ids.empty()) {
        throw ParseError(line, "keyword list must not be empty");
    }
    return make_keyword_set(std::move(ids));
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') {
            ++i;
        }
        if (i > start) {
            fields.push_back(s.substr(start, i - start));
        }
    }
    return fields;
}

inline void append_coord(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace detail

/// Parses the line-delimited stream format:
///   O  <id> <t> <x> <y> <kw1,kw2,...>
///   S+ <id> <t> <x> <y> <k> <kw1,...>
///   S- <id> <t>
/// The first `warmup_objects` object records form the warm-up set;
/// subscriptions stamped no later than the warm-up's last timestamp are the
/// initial set. Everything after the warm-up is grouped into ticks by
/// timestamp. Timestamps must be non-decreasing file-wide.
inline WorkloadScript parse_stream(std::istream& in, std::size_t warmup_objects) {
    WorkloadScript script;
    std::string line;
    std::size_t line_no = 0;
    Timestamp prev_t = 0;
    bool any_record = false;
    Timestamp warmup_end_t = 0;

    struct Pending {
        char kind;  // 'O', '+', '-'
        SKObject object;
        Subscription sub;
        SubscriptionId del_id = 0;
        Timestamp t = 0;
    };
    std::vector<Pending> tail;

    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_fields(line);
        if (fields.empty() || fields[0].front() == '#') {
            continue;
        }
        const std::string_view kind = fields[0];
        Timestamp t = 0;
        Pending rec{};
        if (kind == "O") {
            if (fields.size() != 6) {
                throw ParseError(line_no, "object record needs 6 fields");
            }
            rec.kind = 'O';
            rec.object.id = script.object_ids.intern(fields[1]);
            t = detail::parse_timestamp(fields[2], line_no);
            rec.object.t = t;
            rec.object.p = {detail::parse_coord(fields[3], line_no),
                            detail::parse_coord(fields[4], line_no)};
            rec.object.psi = detail::parse_keywords(fields[5], script.vocabulary, line_no);
        } else if (kind == "S+") {
            if (fields.size() != 7) {
                throw ParseError(line_no, "subscription record needs 7 fields");
            }
            rec.kind = '+';
            rec.sub.id = script.subscription_ids.intern(fields[1]);
            t = detail::parse_timestamp(fields[2], line_no);
            rec.sub.t = t;
            rec.sub.p = {detail::parse_coord(fields[3], line_no),
                         detail::parse_coord(fields[4], line_no)};
            rec.sub.k = detail::parse_k(fields[5], line_no);
            rec.sub.psi = detail::parse_keywords(fields[6], script.vocabulary, line_no);
        } else if (kind == "S-") {
            if (fields.size() != 3) {
                throw ParseError(line_no, "delete record needs 3 fields");
            }
            rec.kind = '-';
            rec.del_id = script.subscription_ids.intern(fields[1]);
            t = detail::parse_timestamp(fields[2], line_no);
        } else {
            throw ParseError(line_no, "unknown record kind '" + std::string(kind) + "'");
        }
        if (any_record && t < prev_t) {
            throw ParseError(line_no, "timestamps must be non-decreasing");
        }
        prev_t = t;
        any_record = true;
        rec.t = t;

        if (script.warmup.size() < warmup_objects) {
            // still ingesting the warm-up prefix
            if (rec.kind == 'O') {
                script.warmup.push_back(std::move(rec.object));
                warmup_end_t = t;
            } else if (rec.kind == '+') {
                script.initial_subs.push_back(std::move(rec.sub));
            } else {
                throw ParseError(line_no, "subscription delete before the warm-up completed");
            }
            continue;
        }
        if (warmup_objects > 0 && rec.kind == '+' && t <= warmup_end_t) {
            script.initial_subs.push_back(std::move(rec.sub));
            continue;
        }
        tail.push_back(std::move(rec));
    }

    for (Pending& rec : tail) {
        if (script.ticks.empty() || script.ticks.back().timestamp != rec.t) {
            script.ticks.push_back(WorkloadTick{rec.t, {}, {}, {}});
        }
        WorkloadTick& tick = script.ticks.back();
        switch (rec.kind) {
            case 'O':
                tick.objects.push_back(std::move(rec.object));
                break;
            case '+':
                tick.inserts.push_back(std::move(rec.sub));
                break;
            default:
                tick.deletes.push_back(rec.del_id);
                break;
        }
    }
    return script;
}

/// Writes a script back out in the stream format, bit-exact for doubles.
inline void serialize_stream(const WorkloadScript& script, std::ostream& out) {
    std::string buf;
    std::vector<std::string> tokens;
    // canonical token order keeps serialization stable across re-parses,
    // where interned ids can permute
    auto write_keywords = [&](const KeywordSet& psi) {
        tokens.clear();
        for (KeywordId id : psi) {
            tokens.push_back(script.vocabulary.token(id));
        }
        std::sort(tokens.begin(), tokens.end());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i > 0) {
                buf += ',';
            }
            buf += tokens[i];
        }
    };
    auto write_object = [&](const SKObject& o) {
        buf += "O ";
        buf += script.object_ids.token(o.id);
        buf += ' ';
        buf += std::to_string(o.t);
        buf += ' ';
        detail::append_coord(buf, o.p.x);
        buf += ' ';
        detail::append_coord(buf, o.p.y);
        buf += ' ';
        write_keywords(o.psi);
        buf += '\n';
    };
    auto write_sub = [&](const Subscription& s) {
        buf += "S+ ";
        buf += script.subscription_ids.token(s.id);
        buf += ' ';
        buf += std::to_string(s.t);
        buf += ' ';
        detail::append_coord(buf, s.p.x);
        buf += ' ';
        detail::append_coord(buf, s.p.y);
        buf += ' ';
        buf += std::to_string(s.k);
        buf += ' ';
        write_keywords(s.psi);
        buf += '\n';
    };

    for (const SKObject& o : script.warmup) {
        write_object(o);
    }
    for (const Subscription& s : script.initial_subs) {
        write_sub(s);
    }
    for (const WorkloadTick& tick : script.ticks) {
        for (const SKObject& o : tick.objects) {
            write_object(o);
        }
        for (const Subscription& s : tick.inserts) {
            write_sub(s);
        }
        for (SubscriptionId id : tick.deletes) {
            buf += "S- ";
            buf += script.subscription_ids.token(id);
            buf += ' ';
            buf += std::to_string(tick.timestamp);
            buf += '\n';
        }
    }
    out << buf;
}

}  // namespace skmon
