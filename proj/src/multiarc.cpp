#include "multiarc/multiarc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace multiarc {

int ChordDiagram::point_count() const {
    return std::accumulate(degrees.begin(), degrees.end(), 0);
}

int ChordDiagram::point_id(int edge, int k) const {
    int id = 0;
    for (int i = 0; i < edge; ++i) id += degrees[std::size_t(i)];
    return id + k;
}

std::pair<int, int> ChordDiagram::point_edge(int id) const {
    for (int i = 0; i < edge_count(); ++i) {
        if (id < degrees[std::size_t(i)]) return {i, id};
        id -= degrees[std::size_t(i)];
    }
    throw Error(Error::Code::InternalInvariantBreach, "point id out of range");
}

bool feasible(const DegreeTuple& t) {
    if (t.empty()) return false;
    for (int d : t)
        if (d < 0) return false;
    int sum = std::accumulate(t.begin(), t.end(), 0);
    int mx = *std::max_element(t.begin(), t.end());
    return sum % 2 == 0 && 2 * mx <= sum;
}

ChordDiagram construct(const DegreeTuple& t) {
    if (!feasible(t))
        throw Error(Error::Code::Infeasible, "Infeasible");

    const int n = int(t.size());
    ChordDiagram d;
    d.degrees = t;

    // Per edge, unmatched points form the block [lo, hi); the construction
    // eats from the hi end when the edge plays the max role and from the lo
    // end when it receives.
    std::vector<int> lo(std::size_t(n), 0), hi(t.begin(), t.end());
    auto remaining = [&](int i) { return hi[std::size_t(i)] - lo[std::size_t(i)]; };

    int left = std::accumulate(t.begin(), t.end(), 0) / 2;
    while (left > 0) {
        int j = 0;
        for (int i = 1; i < n; ++i)
            if (remaining(i) > remaining(j)) j = i;
        if (remaining(j) <= 0)
            throw Error(Error::Code::InternalInvariantBreach, "construct stalled");
        int m = -1;
        for (int step = 1; step < n; ++step) {
            int cand = (j + step) % n;
            if (remaining(cand) > 0) { m = cand; break; }
        }
        if (m < 0)
            throw Error(Error::Code::InternalInvariantBreach, "construct stalled");

        int pj = d.point_id(j, --hi[std::size_t(j)]); // last unmatched on j
        int pm = d.point_id(m, lo[std::size_t(m)]++); // first unmatched on m
        d.chords.push_back({std::min(pj, pm), std::max(pj, pm)});
        --left;
    }
    std::sort(d.chords.begin(), d.chords.end());
    return d;
}

namespace {

// Chords (a,b), (c,d) cross iff exactly one of c,d lies strictly inside the
// cyclic arc (a,b).
bool chords_cross(std::pair<int, int> x, std::pair<int, int> y) {
    auto inside = [&](int p) { return x.first < p && p < x.second; };
    return inside(y.first) != inside(y.second);
}

} // namespace

bool validate(const ChordDiagram& d, const DegreeTuple& t) {
    if (d.degrees != t) return false;
    int points = d.point_count();
    std::vector<int> matched(std::size_t(points), 0);
    std::vector<int> per_edge(t.size(), 0);
    for (auto [a, b] : d.chords) {
        if (a < 0 || b < 0 || a >= points || b >= points || a == b) return false;
        ++matched[std::size_t(a)];
        ++matched[std::size_t(b)];
        auto [ea, ka] = d.point_edge(a);
        auto [eb, kb] = d.point_edge(b);
        (void)ka; (void)kb;
        if (ea == eb) return false; // same-edge chord
        ++per_edge[std::size_t(ea)];
        ++per_edge[std::size_t(eb)];
    }
    for (int m : matched)
        if (m != 1) return false;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (per_edge[i] != t[i]) return false;
    for (std::size_t i = 0; i < d.chords.size(); ++i)
        for (std::size_t j = i + 1; j < d.chords.size(); ++j)
            if (chords_cross(d.chords[i], d.chords[j])) return false;
    return true;
}

namespace {

bool backtrack(const ChordDiagram& geom, std::vector<bool>& used,
               std::vector<std::pair<int, int>>& placed, int points) {
    int p = -1;
    for (int i = 0; i < points; ++i)
        if (!used[std::size_t(i)]) { p = i; break; }
    if (p < 0) return true;

    auto [ep, kp] = geom.point_edge(p);
    (void)kp;
    for (int q = p + 1; q < points; ++q) {
        if (used[std::size_t(q)]) continue;
        auto [eq, kq] = geom.point_edge(q);
        (void)kq;
        if (eq == ep) continue;
        std::pair<int, int> chord{p, q};
        bool crossing = false;
        for (const auto& c : placed)
            if (chords_cross(chord, c)) { crossing = true; break; }
        if (crossing) continue;
        used[std::size_t(p)] = used[std::size_t(q)] = true;
        placed.push_back(chord);
        if (backtrack(geom, used, placed, points)) return true;
        placed.pop_back();
        used[std::size_t(p)] = used[std::size_t(q)] = false;
    }
    return false;
}

} // namespace

bool brute_force_exists(const DegreeTuple& t, int cap) {
    if (t.empty()) return false;
    for (int d : t)
        if (d < 0) return false;
    int sum = std::accumulate(t.begin(), t.end(), 0);
    if (sum > cap)
        throw Error(Error::Code::CapExceeded, "CapExceeded");
    if (sum % 2 != 0) return false;
    if (sum == 0) return true; // empty multiarc

    ChordDiagram geom;
    geom.degrees = t;
    std::vector<bool> used(std::size_t(sum), false);
    std::vector<std::pair<int, int>> placed;
    return backtrack(geom, used, placed, sum);
}

std::string chords_text(const ChordDiagram& d) {
    std::ostringstream out;
    for (auto [a, b] : d.chords) {
        auto [ea, ka] = d.point_edge(a);
        auto [eb, kb] = d.point_edge(b);
        out << "e" << ea + 1 << ".p" << ka + 1 << " -- e" << eb + 1 << ".p" << kb + 1 << "\n";
    }
    return out.str();
}

} // namespace multiarc
