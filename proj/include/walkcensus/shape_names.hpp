#pragma once

#include <map>
#include <mutex>
#include <sstream>
#include <string>

#include "walkcensus/small_graph.hpp"
#include "walkcensus/walk_shapes.hpp"

namespace walkcensus {

// Human-readable names for the shape families the reports talk about;
// anything unrecognized falls back to a degree-sequence descriptor.
inline std::string shape_display_name(const SmallGraph& g) {
    static std::map<CanonicalCode, std::string> table;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (table.empty()) {
        table[canonical_form(path_graph(2))] = "P_2";
        for (int n = 3; n <= 10; ++n) {
            table[canonical_form(path_graph(n))] = "P_" + std::to_string(n);
            table[canonical_form(cycle_graph(n))] = "C_" + std::to_string(n);
        }
        for (int leaves = 3; leaves <= 9; ++leaves)
            table[canonical_form(star_graph(leaves))] = "K_{1," + std::to_string(leaves) + "}";
        for (int c = 3; c <= 9; ++c)
            for (int l = 1; c + l <= 10; ++l)
                table.emplace(canonical_form(tadpole_graph(c, l)),
                              "C_" + std::to_string(c) + "P_" + std::to_string(l + 1));
        for (int a = 3; a <= 7; ++a)
            for (int b = a; a + b - 1 <= 10; ++b)
                table.emplace(canonical_form(lemniscate_graph(a, b)),
                              "C_" + std::to_string(a) + "C_" + std::to_string(b));
        for (int legs = 1; legs <= 7; ++legs)
            table.emplace(canonical_form(triangle_star_graph(legs)),
                          "C_3K_{1," + std::to_string(legs) + "}");
    }
    auto it = table.find(canonical_form(g));
    if (it != table.end()) return it->second;
    std::ostringstream os;
    os << "F(v=" << g.n << ",e=" << g.edge_count() << ",deg=";
    auto ds = g.degree_sequence_sorted();
    for (std::size_t i = 0; i < ds.size(); ++i) os << (i ? "," : "") << ds[i];
    os << ")";
    return os.str();
}

inline std::string shape_display_name(const WalkShape& s) { return shape_display_name(s.rep); }

inline std::string code_hex(CanonicalCode c) {
    static const char* digits = "0123456789abcdef";
    if (c == 0) return "0";
    std::string out;
    while (c > 0) {
        out.push_back(digits[int(c & 0xf)]);
        c >>= 4;
    }
    return {out.rbegin(), out.rend()};
}

} // namespace walkcensus
