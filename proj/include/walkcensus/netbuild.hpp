#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "walkcensus/graph.hpp"
#include "walkcensus/parallel.hpp"

namespace walkcensus {

struct MessageRecord {
    std::string user;
    std::int64_t timestamp = 0; // epoch seconds
    std::string text;
    std::vector<std::string> urls;
};

struct WindowSpec {
    std::int64_t start = 0;
    std::int64_t end = 0;
    std::int64_t duration() const { return end - start; }
    void validate() const {
        if (!(start < end)) throw std::invalid_argument("window: start < end required");
    }
};

namespace detail {

// RFC-style CSV row reader: quoted fields, doubled-quote escapes, embedded
// commas and newlines inside quotes.
inline bool read_csv_row(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false, any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = char(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

} // namespace detail

// CSV columns user,timestamp,text,urls (urls ';'-separated). Output is
// sorted by timestamp; a bad timestamp reports the offending row.
inline std::vector<MessageRecord> ingest_messages(std::istream& in) {
    std::vector<MessageRecord> records;
    std::vector<std::string> fields;
    std::size_t row = 0;
    bool first = true;
    while (detail::read_csv_row(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (first && fields.size() >= 2 && fields[0] == "user" && fields[1] == "timestamp") {
            first = false;
            continue; // header
        }
        first = false;
        if (fields.size() != 4)
            throw parse_error("messages row " + std::to_string(row) + ": expected 4 columns");
        MessageRecord r;
        r.user = fields[0];
        try {
            std::size_t used = 0;
            r.timestamp = std::stoll(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument("trailing");
        } catch (...) {
            throw parse_error("messages row " + std::to_string(row) + ": bad timestamp '" +
                              fields[1] + "'");
        }
        r.text = fields[2];
        std::istringstream us(fields[3]);
        std::string url;
        while (std::getline(us, url, ';'))
            if (!url.empty()) r.urls.push_back(url);
        records.push_back(std::move(r));
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const MessageRecord& a, const MessageRecord& b) { return a.timestamp < b.timestamp; });
    return records;
}

// Users connected whenever they broadcast the same URL anywhere in [t_1, t];
// users without any connection are dropped.
inline Graph aggregate_url_network(const std::vector<MessageRecord>& records, std::int64_t t) {
    std::map<std::string, std::set<std::string>> by_url;
    for (const auto& r : records) {
        if (r.timestamp > t) continue;
        for (const auto& u : r.urls) by_url[u].insert(r.user);
    }
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& [url, users] : by_url) {
        for (auto a = users.begin(); a != users.end(); ++a) {
            auto b = a;
            for (++b; b != users.end(); ++b) edges.emplace(*a, *b);
        }
    }
    std::map<std::string, int> ids;
    std::vector<std::string> labels;
    for (const auto& [a, b] : edges) {
        for (const std::string& u : {a, b})
            if (!ids.count(u)) {
                ids.emplace(u, int(labels.size()));
                labels.push_back(u);
            }
    }
    std::vector<std::pair<int, int>> es;
    for (const auto& [a, b] : edges) es.emplace_back(ids[a], ids[b]);
    return Graph(int(labels.size()), es, labels);
}

// Restricted Damerau-Levenshtein (optimal string alignment): insert, delete,
// substitute, and adjacent transposition, no substring edited twice.
inline int restricted_damerau_levenshtein(std::string_view a, std::string_view b) {
    std::size_t la = a.size(), lb = b.size();
    std::vector<std::vector<int>> d(la + 1, std::vector<int>(lb + 1, 0));
    for (std::size_t i = 0; i <= la; ++i) d[i][0] = int(i);
    for (std::size_t j = 0; j <= lb; ++j) d[0][j] = int(j);
    for (std::size_t i = 1; i <= la; ++i)
        for (std::size_t j = 1; j <= lb; ++j) {
            int cost = a[i - 1] == b[j - 1] ? 0 : 1;
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
                d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
        }
    return d[la][lb];
}

// Banded variant: returns true iff the distance is <= max_edit, visiting
// only cells within max_edit of the diagonal.
inline bool osa_within(std::string_view a, std::string_view b, int max_edit) {
    std::size_t la = a.size(), lb = b.size();
    if (la > lb) {
        std::swap(a, b);
        std::swap(la, lb);
    }
    if (int(lb - la) > max_edit) return false;
    if (max_edit <= 0) return a == b;
    const int INF = max_edit + 1;
    int width = 2 * max_edit + 1;
    std::vector<int> prev2(width, INF), prev(width, INF), cur(width, INF);
    // row i covers columns j in [i - max_edit, i + max_edit]
    for (int off = 0; off < width; ++off) {
        int j = 0 - max_edit + off;
        prev[off] = (j >= 0 && j <= int(lb)) ? j : INF;
    }
    for (int i = 1; i <= int(la); ++i) {
        int best = INF;
        for (int off = 0; off < width; ++off) cur[off] = INF;
        int jlo = std::max(0, i - max_edit), jhi = std::min(int(lb), i + max_edit);
        for (int j = jlo; j <= jhi; ++j) {
            int off = j - i + max_edit;
            int val;
            if (j == 0)
                val = i;
            else {
                int cost = a[i - 1] == b[j - 1] ? 0 : 1;
                val = INF;
                int diag_off = off; // (i-1, j-1) has the same offset
                if (prev[diag_off] < INF) val = std::min(val, prev[diag_off] + cost);
                if (off + 1 < width && prev[off + 1] < INF) val = std::min(val, prev[off + 1] + 1);
                if (off - 1 >= 0 && cur[off - 1] < INF) val = std::min(val, cur[off - 1] + 1);
                if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] &&
                    prev2[off] < INF)
                    val = std::min(val, prev2[off] + 1);
            }
            cur[off] = std::min(val, INF);
            best = std::min(best, cur[off]);
        }
        if (best > max_edit) return false;
        std::swap(prev2, prev);
        std::swap(prev, cur);
    }
    return prev[int(lb) - int(la) + max_edit] <= max_edit;
}

// Users active in the window, joined whenever some message pair sits within
// the edit-distance threshold; isolated users are dropped.
inline Graph windowed_similarity_network(const std::vector<MessageRecord>& records,
                                         const WindowSpec& window, int max_edit = 29,
                                         int threads = 0) {
    window.validate();
    if (max_edit < 0) throw std::invalid_argument("max_edit >= 0");
    std::map<std::string, std::vector<const std::string*>> texts;
    std::size_t total = 0;
    for (const auto& r : records) {
        if (r.timestamp < window.start || r.timestamp >= window.end) continue;
        texts[r.user].push_back(&r.text);
        ++total;
    }
    if (total > 100000) throw std::invalid_argument("similarity window holds more than 1e5 messages");
    std::vector<std::string> users;
    for (auto& [u, msgs] : texts) users.push_back(u);
    std::size_t nu = users.size();
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = i + 1; j < nu; ++j) pairs.emplace_back(int(i), int(j));
    std::vector<char> linked(pairs.size(), 0);
    parallel_for(pairs.size(), threads, [&](std::uint64_t p) {
        auto [i, j] = pairs[p];
        const auto& mi = texts[users[i]];
        const auto& mj = texts[users[j]];
        for (const std::string* x : mi) {
            for (const std::string* y : mj) {
                if (std::llabs(std::int64_t(x->size()) - std::int64_t(y->size())) > max_edit) continue;
                if (osa_within(*x, *y, max_edit)) {
                    linked[p] = 1;
                    return;
                }
            }
        }
    });
    std::vector<std::pair<int, int>> edges;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (linked[p]) edges.push_back(pairs[p]);
    Graph all(int(nu), edges, users);
    return remove_isolated(all);
}

} // namespace walkcensus
