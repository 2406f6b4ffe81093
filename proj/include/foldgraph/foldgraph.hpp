#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace foldgraph {

class Error : public std::runtime_error {
public:
    enum class Code {
        InvalidRank,
        InvalidLabel,
        NotConnected,
        UnknownVertex,
        StalePair,
    };

    Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// Generator letter with sign; edges are stored with sign +1, a reversed
// traversal negates the sign on the fly.
struct Label {
    int gen = 0; // 0-based
    int sign = +1;

    friend bool operator==(const Label& x, const Label& y) {
        return x.gen == y.gen && x.sign == y.sign;
    }
    friend bool operator<(const Label& x, const Label& y) {
        if (x.gen != y.gen) return x.gen < y.gen;
        return x.sign > y.sign; // '+' before '-'
    }
};

std::string to_string(const Label& l); // "g2+", "g2-"

// Directed multigraph with generator-labeled edges, dual to a cellular
// handlebody: vertices are 3-cells, edges are meridian disks.
struct LabeledGraph {
    struct Edge {
        int id = 0;
        int from = 0;
        int to = 0;
        int gen = 0; // stored orientation carries sign +1
    };

    int rank = 0; // size of the generator alphabet
    std::vector<int> vertices;
    std::vector<Edge> edges;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    int euler_rank() const { return int(edges.size()) - int(vertices.size()) + 1; }
    bool has_vertex(int v) const;
    const Edge* find_edge(int id) const;
};

// Validates labels, connectivity and rank; flips sign -1 input edges so the
// stored orientation always carries +1.
LabeledGraph make_graph(int rank, std::vector<int> vertices,
                        std::vector<std::array<int, 4>> edges /* from,to,gen(1-based),sign */);

LabeledGraph rose(int g);

// An oriented edge end ("dart") at a vertex.
struct Dart {
    int vertex = 0;
    int edge_id = 0;
    Label label;
};

std::vector<Dart> darts_at(const LabeledGraph& k, int vertex);

struct FoldablePair {
    int vertex = 0;
    int edge_keep = 0; // smaller edge id
    int edge_drop = 0;
    Label label;
};

// All foldable pairs in deterministic (vertex id, label, edge id) order.
std::vector<FoldablePair> find_foldable_pairs(const LabeledGraph& k);

// First pair under the deterministic order; nullopt when the graph is folded.
std::optional<FoldablePair> find_foldable_pair(const LabeledGraph& k);

struct FoldEvent {
    int vertex = 0;
    int edge_keep = 0;
    int edge_drop = 0;
    Label label;
};

// Ordered fold events; length always equals E_initial - E_final.
struct FoldTrace {
    std::vector<FoldEvent> events;
};

// Identifies the two edges of the pair; the far endpoint of the dropped edge
// merges into the far endpoint of the kept edge when distinct. E drops by 1;
// V drops by 1 exactly when the far endpoints differ (the rank-preserving,
// homotopy-equivalence kind of fold).
std::pair<LabeledGraph, FoldEvent> fold_step(const LabeledGraph& k, const FoldablePair& pair);

std::pair<LabeledGraph, FoldTrace> fold_to_completion(const LabeledGraph& k);

bool is_rose(const LabeledGraph& k); // one vertex, rank loops with distinct labels

struct DecomposeResult {
    bool is_iso = false;
    FoldTrace trace;
    LabeledGraph folded; // the witness when not a rose
};

DecomposeResult decompose_to_rose(const LabeledGraph& k);

struct HandlebodySummary {
    int three_cells = 0; // V
    int two_cells = 0;   // E, meridian disks
    int genus = 0;       // E - V + 1
};

HandlebodySummary handlebody_summary(const LabeledGraph& k);

// Label-isomorphism-invariant encoding: lexicographically minimal edge list
// over vertex renumberings, searched with color refinement + backtracking.
std::string canonical_form(const LabeledGraph& k);

inline bool label_isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    return a.rank == b.rank && canonical_form(a) == canonical_form(b);
}

} // namespace foldgraph
