#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multiarc {

class Error : public std::runtime_error {
public:
    enum class Code {
        Infeasible,
        InternalInvariantBreach,
        CapExceeded,
    };

    Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// Cyclic tuple (delta_1 .. delta_n) of arc-endpoint counts per polygon edge.
using DegreeTuple = std::vector<int>;

// Marked points on the n-gon boundary with a non-crossing perfect matching.
// Points are numbered globally in cyclic order, edge by edge; point k of edge
// i (0-based) is point_id(i, k).
struct ChordDiagram {
    DegreeTuple degrees;
    std::vector<std::pair<int, int>> chords; // global point ids, first < second

    int edge_count() const { return int(degrees.size()); }
    int point_count() const;
    int point_id(int edge, int k) const;        // global id
    std::pair<int, int> point_edge(int id) const; // (edge, k)
};

// True iff sum(delta) is even and 2*max(delta) <= sum(delta).
bool feasible(const DegreeTuple& t);

// Canonical construction: repeatedly connect the max-count edge (smallest
// index on ties) to the next cyclically nonempty edge, last unmatched point
// against first unmatched point.
ChordDiagram construct(const DegreeTuple& t);

// Matching completeness, same-edge exclusion, per-edge counts, non-crossing.
bool validate(const ChordDiagram& d, const DegreeTuple& t);

inline constexpr int kBruteForceCap = 12;

// Exhaustive backtracking over non-crossing different-edge perfect matchings.
bool brute_force_exists(const DegreeTuple& t, int cap = kBruteForceCap);

// "e1.p2 -- e2.p1" per chord, one per line, deterministic order.
std::string chords_text(const ChordDiagram& d);

} // namespace multiarc
