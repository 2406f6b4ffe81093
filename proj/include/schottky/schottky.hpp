#pragma once

#include "core/exec.hpp"
#include "moebius/moebius.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace schottky {

using moebius::Circle;
using moebius::Complex;
using moebius::GeneralizedCircle;
using moebius::MapClass;
using moebius::MoebiusMap;
using moebius::SpherePoint;

class Error : public std::runtime_error {
public:
    enum class Code {
        InvalidRank,
        CirclesOverlap,
        PairingMismatch,
        NestingViolation,
        CapExceeded,
    };

    Error(Code code, const std::string& what, int i = -1, int j = -1)
        : std::runtime_error(what), code_(code), i_(i), j_(j) {}
    Code code() const { return code_; }
    int index_a() const { return i_; }
    int index_b() const { return j_; }

private:
    Code code_;
    int i_, j_;
};

// One letter of a free-group word: generator index (0-based) and sign.
struct Letter {
    int gen = 0;
    int sign = +1;

    friend bool operator==(const Letter& x, const Letter& y) {
        return x.gen == y.gen && x.sign == y.sign;
    }
    Letter inverse() const { return Letter{gen, -sign}; }
};

// Reduced word in the free group on the generators.
struct GroupWord {
    std::vector<Letter> letters;

    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
    friend bool operator==(const GroupWord& x, const GroupWord& y) {
        return x.letters == y.letters;
    }
};

GroupWord reduce(const GroupWord& word);
GroupWord concat(const GroupWord& u, const GroupWord& v); // reduced concatenation
std::string to_string(const GroupWord& word);             // "g1 g2^-1"; "" for identity
GroupWord parse_word(const std::string& text, int rank);  // inverse of to_string

struct CirclePairing {
    Circle src;
    Circle dst;
};

struct SchottkyGroup {
    int rank = 0;
    std::vector<MoebiusMap> generators;
    std::vector<CirclePairing> pairing;
    bool fuchsian = false;
    double tol = moebius::kDefaultTol;
};

// Builds the group from circle pairs and verifies the ping-pong position:
// all 2g circles pairwise disjoint with gap > tol, generator i carries src_i
// onto dst_i and the exterior of src_i into the interior of dst_i.
SchottkyGroup build(const std::vector<CirclePairing>& pairs, bool fuchsian,
                    double tol = moebius::kDefaultTol);

MoebiusMap evaluate(const SchottkyGroup& g, const GroupWord& word);

inline constexpr std::size_t kDefaultWordCap = 1'000'000;

// All reduced words of length <= max_len in breadth-first lexicographic order
// on (index, sign), identity first. Count 1 + 2g * sum_{k<L} (2g-1)^k.
// Parallel expansion works per level on disjoint prefix subtrees; child slots
// are precomputed, so the order matches the serial run exactly.
std::vector<GroupWord> enumerate_reduced_words(const SchottkyGroup& g, int max_len,
                                               std::size_t cap = kDefaultWordCap,
                                               core::Exec exec = core::Exec::serial);

// Rooted forest of nested disks. Children extend the parent word by one
// non-cancelling letter; node disks are evaluate(prefix)(range disk of the
// last letter). Nodes are stored level by level.
struct DiskTree {
    struct Node {
        std::int32_t parent; // -1 for depth-1 roots
        Letter letter;
        Circle disk;
    };
    std::vector<Node> nodes;
    // depth+1 offsets; level k in [1, depth] occupies [offset[k-1], offset[k]).
    std::vector<std::size_t> level_offset;

    int depth() const { return int(level_offset.size()) - 1; }
    std::size_t level_begin(int k) const { return level_offset[std::size_t(k) - 1]; }
    std::size_t level_end(int k) const { return level_offset[std::size_t(k)]; }
};

struct LimitSetResult {
    DiskTree tree;
    std::vector<SpherePoint> points; // leaf-disk centers at maximal depth
};

// Nested-disk approximation of the limit set. Depth >= 1; throws
// NestingViolation when a child disk escapes its parent beyond `slack`
// and CapExceeded when the tree would exceed `cap` nodes.
LimitSetResult limit_set_approx(const SchottkyGroup& g, int depth,
                                core::Exec exec = core::Exec::parallel,
                                std::size_t cap = kDefaultWordCap,
                                double slack = 1e-9);

// True iff p lies on or outside all 2g pairing circles (closed domain).
bool in_fundamental_domain(const SchottkyGroup& g, const SpherePoint& p);

struct LoxodromicReport {
    std::size_t words_checked = 0; // nonempty words
    struct Violation {
        GroupWord word;
        MapClass cls;
        double dist_tr2; // distance of tr^2 from [0,4]
    };
    std::vector<Violation> violations;
    double min_dist_tr2 = 0.0; // over all checked words

    bool all_loxodromic() const { return violations.empty(); }
};

LoxodromicReport all_loxodromic_check(const SchottkyGroup& g, int max_len,
                                      core::Exec exec = core::Exec::parallel,
                                      std::size_t cap = kDefaultWordCap);

} // namespace schottky
