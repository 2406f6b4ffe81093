#include "foldgraph/foldgraph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace foldgraph {

std::string to_string(const Label& l) {
    return "g" + std::to_string(l.gen + 1) + (l.sign > 0 ? "+" : "-");
}

bool LabeledGraph::has_vertex(int v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

const LabeledGraph::Edge* LabeledGraph::find_edge(int id) const {
    for (const Edge& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

namespace {

void check_connected(const LabeledGraph& k) {
    if (k.vertices.empty())
        throw Error(Error::Code::NotConnected, "graph has no vertices");
    std::set<int> seen;
    std::queue<int> frontier;
    frontier.push(k.vertices.front());
    seen.insert(k.vertices.front());
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (const LabeledGraph::Edge& e : k.edges) {
            for (int w : {e.from, e.to}) {
                if ((e.from == v || e.to == v) && !seen.count(w)) {
                    seen.insert(w);
                    frontier.push(w);
                }
            }
        }
    }
    if (seen.size() != k.vertices.size())
        throw Error(Error::Code::NotConnected, "NotConnected");
}

} // namespace

LabeledGraph make_graph(int rank, std::vector<int> vertices,
                        std::vector<std::array<int, 4>> edges) {
    if (rank < 1) throw Error(Error::Code::InvalidRank, "InvalidRank");
    LabeledGraph k;
    k.rank = rank;
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw Error(Error::Code::UnknownVertex, "duplicate vertex id");
    k.vertices = std::move(vertices);
    int next_id = 0;
    for (const auto& [from, to, gen, sign] : edges) {
        if (gen < 1 || gen > rank || (sign != 1 && sign != -1))
            throw Error(Error::Code::InvalidLabel,
                        "edge label g" + std::to_string(gen) + " sign " + std::to_string(sign));
        if (!k.has_vertex(from) || !k.has_vertex(to))
            throw Error(Error::Code::UnknownVertex, "edge endpoint not a vertex");
        LabeledGraph::Edge e;
        e.id = next_id++;
        e.gen = gen - 1;
        e.from = sign > 0 ? from : to;
        e.to = sign > 0 ? to : from;
        k.edges.push_back(e);
    }
    check_connected(k);
    return k;
}

LabeledGraph rose(int g) {
    if (g < 1) throw Error(Error::Code::InvalidRank, "InvalidRank");
    std::vector<std::array<int, 4>> edges;
    for (int i = 1; i <= g; ++i) edges.push_back({0, 0, i, +1});
    return make_graph(g, {0}, edges);
}

std::vector<Dart> darts_at(const LabeledGraph& k, int vertex) {
    std::vector<Dart> out;
    for (const LabeledGraph::Edge& e : k.edges) {
        if (e.from == vertex) out.push_back(Dart{vertex, e.id, Label{e.gen, +1}});
        if (e.to == vertex) out.push_back(Dart{vertex, e.id, Label{e.gen, -1}});
    }
    return out;
}

std::vector<FoldablePair> find_foldable_pairs(const LabeledGraph& k) {
    std::vector<FoldablePair> out;
    for (int v : k.vertices) {
        std::vector<Dart> darts = darts_at(k, v);
        std::sort(darts.begin(), darts.end(), [](const Dart& x, const Dart& y) {
            if (!(x.label == y.label)) return x.label < y.label;
            return x.edge_id < y.edge_id;
        });
        for (std::size_t i = 0; i + 1 < darts.size(); ++i) {
            for (std::size_t j = i + 1; j < darts.size() && darts[j].label == darts[i].label; ++j) {
                if (darts[i].edge_id == darts[j].edge_id) continue; // the two ends of a loop differ in sign anyway
                out.push_back(FoldablePair{v, darts[i].edge_id, darts[j].edge_id, darts[i].label});
            }
        }
    }
    return out;
}

std::optional<FoldablePair> find_foldable_pair(const LabeledGraph& k) {
    std::vector<FoldablePair> pairs = find_foldable_pairs(k);
    if (pairs.empty()) return std::nullopt;
    return pairs.front();
}

namespace {

// Far endpoint of the edge as seen from the dart (vertex, label sign).
int far_endpoint(const LabeledGraph::Edge& e, int vertex, int sign) {
    if (e.from == e.to) return vertex; // loop
    return sign > 0 ? e.to : e.from;
}

bool pair_still_valid(const LabeledGraph& k, const FoldablePair& p) {
    if (p.edge_keep == p.edge_drop) return false;
    const LabeledGraph::Edge* ek = k.find_edge(p.edge_keep);
    const LabeledGraph::Edge* ed = k.find_edge(p.edge_drop);
    if (!ek || !ed || !k.has_vertex(p.vertex)) return false;
    auto presents = [&](const LabeledGraph::Edge& e) {
        if (e.gen != p.label.gen) return false;
        return p.label.sign > 0 ? e.from == p.vertex : e.to == p.vertex;
    };
    return presents(*ek) && presents(*ed);
}

} // namespace

std::pair<LabeledGraph, FoldEvent> fold_step(const LabeledGraph& k, const FoldablePair& pair) {
    if (!pair_still_valid(k, pair))
        throw Error(Error::Code::StalePair, "StalePair");

    const LabeledGraph::Edge& ek = *k.find_edge(pair.edge_keep);
    const LabeledGraph::Edge& ed = *k.find_edge(pair.edge_drop);
    int w_keep = far_endpoint(ek, pair.vertex, pair.label.sign);
    int w_drop = far_endpoint(ed, pair.vertex, pair.label.sign);

    LabeledGraph out = k;
    out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                   [&](const LabeledGraph::Edge& e) { return e.id == ed.id; }),
                    out.edges.end());
    if (w_keep != w_drop) {
        for (LabeledGraph::Edge& e : out.edges) {
            if (e.from == w_drop) e.from = w_keep;
            if (e.to == w_drop) e.to = w_keep;
        }
        out.vertices.erase(std::remove(out.vertices.begin(), out.vertices.end(), w_drop),
                           out.vertices.end());
    }
    return {out, FoldEvent{pair.vertex, pair.edge_keep, pair.edge_drop, pair.label}};
}

std::pair<LabeledGraph, FoldTrace> fold_to_completion(const LabeledGraph& k) {
    LabeledGraph cur = k;
    FoldTrace trace;
    while (auto pair = find_foldable_pair(cur)) {
        auto [next, event] = fold_step(cur, *pair);
        cur = std::move(next);
        trace.events.push_back(event);
    }
    return {cur, trace};
}

bool is_rose(const LabeledGraph& k) {
    if (k.vertices.size() != 1 || int(k.edges.size()) != k.rank) return false;
    std::set<int> gens;
    for (const LabeledGraph::Edge& e : k.edges) {
        if (e.from != e.to) return false;
        gens.insert(e.gen);
    }
    return int(gens.size()) == k.rank;
}

DecomposeResult decompose_to_rose(const LabeledGraph& k) {
    auto [folded, trace] = fold_to_completion(k);
    DecomposeResult res;
    res.trace = std::move(trace);
    // Iso needs the rose shape AND rank preservation: a fold of a parallel
    // pair drops E - V + 1, so the composite is no isomorphism even when the
    // end state looks like a rose.
    res.is_iso = is_rose(folded) && folded.euler_rank() == k.euler_rank();
    res.folded = std::move(folded);
    return res;
}

HandlebodySummary handlebody_summary(const LabeledGraph& k) {
    return HandlebodySummary{int(k.vertex_count()), int(k.edge_count()), k.euler_rank()};
}

namespace {

// Iterative 1-WL style refinement; colors are iso-invariant by construction.
std::map<int, int> refine_colors(const LabeledGraph& k) {
    std::map<int, int> color;
    for (int v : k.vertices) color[v] = 0;
    for (std::size_t round = 0; round <= k.vertices.size(); ++round) {
        std::map<int, std::vector<std::pair<Label, int>>> sig;
        for (int v : k.vertices) sig[v] = {};
        for (const LabeledGraph::Edge& e : k.edges) {
            sig[e.from].push_back({Label{e.gen, +1}, color[e.to]});
            sig[e.to].push_back({Label{e.gen, -1}, color[e.from]});
        }
        std::map<std::pair<int, std::vector<std::pair<Label, int>>>, std::vector<int>> classes;
        for (int v : k.vertices) {
            auto s = sig[v];
            std::sort(s.begin(), s.end(), [](const auto& x, const auto& y) {
                if (!(x.first == y.first)) return x.first < y.first;
                return x.second < y.second;
            });
            classes[{color[v], s}].push_back(v);
        }
        std::map<int, int> next;
        int c = 0;
        for (const auto& [key, members] : classes) {
            for (int v : members) next[v] = c;
            ++c;
        }
        if (next == color) break;
        color = next;
    }
    return color;
}

struct CanonSearch {
    const LabeledGraph& k;
    std::map<int, int> color;
    std::vector<int> best;           // best encoding found so far
    bool have_best = false;

    std::vector<int> encode(const std::map<int, int>& number) const {
        std::vector<std::array<int, 3>> rows;
        for (const LabeledGraph::Edge& e : k.edges)
            rows.push_back({number.at(e.from), number.at(e.to), e.gen});
        std::sort(rows.begin(), rows.end());
        std::vector<int> flat;
        for (const auto& r : rows) {
            flat.push_back(r[0]);
            flat.push_back(r[1]);
            flat.push_back(r[2]);
        }
        return flat;
    }

    void search(std::map<int, int>& number, std::vector<int>& unassigned) {
        if (unassigned.empty()) {
            std::vector<int> enc = encode(number);
            if (!have_best || enc < best) {
                best = std::move(enc);
                have_best = true;
            }
            return;
        }
        // Candidates: unassigned vertices of the minimal color class.
        int min_color = color.at(unassigned.front());
        for (int v : unassigned) min_color = std::min(min_color, color.at(v));
        int next_num = int(number.size());
        std::vector<int> rest = unassigned;
        for (int v : unassigned) {
            if (color.at(v) != min_color) continue;
            number[v] = next_num;
            rest.erase(std::remove(rest.begin(), rest.end(), v), rest.end());
            search(number, rest);
            rest = unassigned;
            number.erase(v);
        }
    }
};

} // namespace

std::string canonical_form(const LabeledGraph& k) {
    CanonSearch s{k, refine_colors(k), {}, false};
    std::map<int, int> number;
    std::vector<int> unassigned = k.vertices;
    // Order unassigned by color so the minimal class comes first deterministically.
    std::sort(unassigned.begin(), unassigned.end(),
              [&](int a, int b) { return s.color.at(a) < s.color.at(b); });
    s.search(number, unassigned);

    std::ostringstream out;
    out << "V" << k.vertices.size() << ";R" << k.rank << ";";
    for (std::size_t i = 0; i < s.best.size(); i += 3)
        out << s.best[i] << ">" << s.best[i + 1] << ":" << s.best[i + 2] << ";";
    return out.str();
}

} // namespace foldgraph
