#include "schottky/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace schottky {

namespace {

using moebius::apply_circle;
using moebius::as_circle;
using moebius::is_circle;

std::size_t tree_size(int rank, int depth) {
    // sum_{k=1..depth} 2g (2g-1)^(k-1); saturates instead of overflowing.
    std::size_t total = 0, level = std::size_t(2 * rank);
    for (int k = 1; k <= depth; ++k) {
        total += level;
        if (total > (std::size_t(1) << 62)) return total;
        level *= std::size_t(2 * rank - 1);
    }
    return total;
}

} // namespace

GroupWord reduce(const GroupWord& word) {
    GroupWord out;
    out.letters.reserve(word.letters.size());
    for (const Letter& l : word.letters) {
        if (!out.letters.empty() && out.letters.back() == l.inverse())
            out.letters.pop_back();
        else
            out.letters.push_back(l);
    }
    return out;
}

GroupWord concat(const GroupWord& u, const GroupWord& v) {
    GroupWord joined = u;
    joined.letters.insert(joined.letters.end(), v.letters.begin(), v.letters.end());
    return reduce(joined);
}

std::string to_string(const GroupWord& word) {
    std::string out;
    for (std::size_t i = 0; i < word.letters.size(); ++i) {
        if (i) out += ' ';
        out += 'g';
        out += std::to_string(word.letters[i].gen + 1);
        if (word.letters[i].sign < 0) out += "^-1";
    }
    return out;
}

GroupWord parse_word(const std::string& text, int rank) {
    GroupWord word;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        int sign = +1;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            sign = -1;
            tok = tok.substr(0, tok.size() - 3);
        }
        if (tok.size() < 2 || tok[0] != 'g')
            throw Error(Error::Code::InvalidRank, "parse_word: bad token '" + tok + "'");
        int gen = 0;
        try {
            gen = std::stoi(tok.substr(1));
        } catch (const std::exception&) {
            throw Error(Error::Code::InvalidRank, "parse_word: bad token '" + tok + "'");
        }
        if (gen < 1 || gen > rank)
            throw Error(Error::Code::InvalidRank,
                        "parse_word: generator index out of range in '" + tok + "'");
        word.letters.push_back(Letter{gen - 1, sign});
    }
    return word;
}

SchottkyGroup build(const std::vector<CirclePairing>& pairs, bool fuchsian, double tol) {
    if (pairs.empty())
        throw Error(Error::Code::InvalidRank, "build: rank must be >= 1");

    SchottkyGroup g;
    g.rank = int(pairs.size());
    g.pairing = pairs;
    g.fuchsian = fuchsian;
    g.tol = tol;

    // Flat circle list in doc order: pair k contributes circles 2k, 2k+1.
    std::vector<Circle> circles;
    for (const CirclePairing& p : pairs) {
        circles.push_back(p.src);
        circles.push_back(p.dst);
    }
    for (std::size_t i = 0; i < circles.size(); ++i) {
        if (circles[i].radius <= tol)
            throw Error(Error::Code::CirclesOverlap, "build: circle " + std::to_string(i) +
                        " has nonpositive radius", int(i), int(i));
        for (std::size_t j = i + 1; j < circles.size(); ++j) {
            double gap = std::abs(circles[i].center - circles[j].center) -
                         circles[i].radius - circles[j].radius;
            if (gap <= tol) {
                std::ostringstream msg;
                msg << "CirclesOverlap(" << i << "," << j << ")";
                throw Error(Error::Code::CirclesOverlap, msg.str(), int(i), int(j));
            }
        }
    }

    for (int i = 0; i < g.rank; ++i) {
        MoebiusMap gen = moebius::from_circle_pairing(pairs[i].src, pairs[i].dst, fuchsian, tol);
        GeneralizedCircle img = apply_circle(gen, GeneralizedCircle{pairs[i].src}, tol);
        double err = is_circle(img)
            ? std::abs(as_circle(img).center - pairs[i].dst.center) +
              std::abs(as_circle(img).radius - pairs[i].dst.radius)
            : 1.0;
        if (err > std::max(tol, 1e-7)) {
            std::ostringstream msg;
            msg << "PairingMismatch(" << i << ")";
            throw Error(Error::Code::PairingMismatch, msg.str(), i, i);
        }
        // Exterior -> interior: infinity must land strictly inside dst.
        SpherePoint far_img = apply(gen, SpherePoint::infinity());
        if (far_img.is_infinity(tol) ||
            std::abs(far_img.to_complex() - pairs[i].dst.center) >= pairs[i].dst.radius) {
            std::ostringstream msg;
            msg << "PairingMismatch(" << i << "): exterior not contracted";
            throw Error(Error::Code::PairingMismatch, msg.str(), i, i);
        }
        g.generators.push_back(gen);
    }
    return g;
}

MoebiusMap evaluate(const SchottkyGroup& g, const GroupWord& word) {
    MoebiusMap m = MoebiusMap::identity();
    for (const Letter& l : word.letters) {
        const MoebiusMap& gen = g.generators.at(std::size_t(l.gen));
        m = compose(m, l.sign > 0 ? gen : gen.inverse());
    }
    return m;
}

std::vector<GroupWord> enumerate_reduced_words(const SchottkyGroup& g, int max_len,
                                               std::size_t cap, core::Exec exec) {
    if (max_len < 0)
        throw Error(Error::Code::InvalidRank, "enumerate_reduced_words: max_len < 0");
    if (max_len > 0 && tree_size(g.rank, max_len) + 1 > cap)
        throw Error(Error::Code::CapExceeded, "CapExceeded");

    // A parent word has 2g children at the root and 2g-1 afterwards, so every
    // child slot is known in advance and levels fill independently.
    auto extend = [&](const GroupWord& parent, GroupWord* out) {
        std::size_t slot = 0;
        for (int gen = 0; gen < g.rank; ++gen) {
            for (int sign : {+1, -1}) {
                Letter l{gen, sign};
                if (!parent.letters.empty() && parent.letters.back() == l.inverse()) continue;
                out[slot] = parent;
                out[slot].letters.push_back(l);
                ++slot;
            }
        }
        return slot;
    };

    std::vector<GroupWord> words;
    words.push_back(GroupWord{}); // identity
    std::size_t level_begin = 0, level_end = 1;
    const bool par = exec == core::Exec::parallel;
    for (int len = 1; len <= max_len; ++len) {
        const std::size_t pcount = level_end - level_begin;
        const std::size_t per_parent = (len == 1) ? std::size_t(2 * g.rank)
                                                  : std::size_t(2 * g.rank - 1);
        words.resize(level_end + pcount * per_parent);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
        for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(pcount); ++p)
            extend(words[level_begin + std::size_t(p)],
                   &words[level_end + std::size_t(p) * per_parent]);
        (void)par;
        level_begin = level_end;
        level_end = words.size();
    }
    return words;
}

LimitSetResult limit_set_approx(const SchottkyGroup& g, int depth, core::Exec exec,
                                std::size_t cap, double slack) {
    if (depth < 1)
        throw Error(Error::Code::InvalidRank, "limit_set_approx: depth < 1");
    if (tree_size(g.rank, depth) > cap)
        throw Error(Error::Code::CapExceeded, "CapExceeded");

    const int n_letters = 2 * g.rank;
    auto letter_at = [&](int idx) { return Letter{idx / 2, idx % 2 == 0 ? +1 : -1}; };
    auto range_disk = [&](const Letter& l) {
        return l.sign > 0 ? g.pairing[std::size_t(l.gen)].dst : g.pairing[std::size_t(l.gen)].src;
    };
    auto gen_map = [&](const Letter& l) {
        const MoebiusMap& gen = g.generators[std::size_t(l.gen)];
        return l.sign > 0 ? gen : gen.inverse();
    };

    LimitSetResult result;
    DiskTree& tree = result.tree;
    tree.level_offset.push_back(0);

    std::vector<MoebiusMap> parent_maps;
    for (int idx = 0; idx < n_letters; ++idx) {
        Letter l = letter_at(idx);
        tree.nodes.push_back(DiskTree::Node{-1, l, range_disk(l)});
        parent_maps.push_back(gen_map(l));
    }
    tree.level_offset.push_back(tree.nodes.size());

    for (int level = 2; level <= depth; ++level) {
        const std::size_t pbegin = tree.level_begin(level - 1);
        const std::size_t pcount = tree.level_end(level - 1) - pbegin;
        const std::size_t per_parent = std::size_t(n_letters - 1);
        const std::size_t cbegin = tree.nodes.size();

        tree.nodes.resize(cbegin + pcount * per_parent);
        std::vector<MoebiusMap> child_maps(pcount * per_parent);
        double worst_slack = 1e300;
        bool degenerate = false;

        const bool par = exec == core::Exec::parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : worst_slack) \
    reduction(|| : degenerate) if (par)
#endif
        for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(pcount); ++p) {
            const DiskTree::Node& parent = tree.nodes[pbegin + std::size_t(p)];
            const MoebiusMap& pm = parent_maps[std::size_t(p)];
            std::size_t slot = std::size_t(p) * per_parent;
            for (int idx = 0; idx < n_letters; ++idx) {
                Letter l = letter_at(idx);
                if (l == parent.letter.inverse()) continue;
                GeneralizedCircle img;
                try {
                    img = apply_circle(pm, GeneralizedCircle{range_disk(l)}, g.tol);
                } catch (const moebius::Error&) {
                    degenerate = true;
                    ++slot;
                    continue;
                }
                if (!is_circle(img)) {
                    degenerate = true;
                    ++slot;
                    continue;
                }
                const Circle& child = as_circle(img);
                double s = parent.disk.radius -
                           (std::abs(child.center - parent.disk.center) + child.radius);
                worst_slack = std::min(worst_slack, s);
                tree.nodes[cbegin + slot] =
                    DiskTree::Node{std::int32_t(pbegin + std::size_t(p)), l, child};
                child_maps[slot] = compose(pm, gen_map(l));
                ++slot;
            }
        }
        (void)par;

        if (degenerate || worst_slack < -slack)
            throw Error(Error::Code::NestingViolation,
                        "NestingViolation at depth " + std::to_string(level) +
                        " (slack " + std::to_string(worst_slack) + "); lower depth");
        parent_maps = std::move(child_maps);
        tree.level_offset.push_back(tree.nodes.size());
    }

    for (std::size_t i = tree.level_begin(depth); i < tree.level_end(depth); ++i)
        result.points.push_back(SpherePoint::from_complex(tree.nodes[i].disk.center));
    return result;
}

bool in_fundamental_domain(const SchottkyGroup& g, const SpherePoint& p) {
    if (p.is_infinity(g.tol)) return true; // exterior to every bounded circle
    Complex z = p.to_complex();
    for (const CirclePairing& pair : g.pairing)
        for (const Circle* c : {&pair.src, &pair.dst})
            if (std::abs(z - c->center) < c->radius - g.tol) return false;
    return true;
}

LoxodromicReport all_loxodromic_check(const SchottkyGroup& g, int max_len, core::Exec exec,
                                      std::size_t cap) {
    std::vector<GroupWord> words = enumerate_reduced_words(g, max_len, cap);

    struct Entry {
        MapClass cls = MapClass::Loxodromic;
        double dist = 0.0;
        bool ambiguous = false;
    };
    std::vector<Entry> entries(words.size());

    const bool par = exec == core::Exec::parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
    for (std::ptrdiff_t i = 1; i < std::ptrdiff_t(words.size()); ++i) {
        MoebiusMap m = evaluate(g, words[std::size_t(i)]);
        Entry& e = entries[std::size_t(i)];
        e.dist = moebius::tr2_interval_distance(m);
        try {
            e.cls = moebius::classify(m, g.tol);
        } catch (const moebius::Error&) {
            e.ambiguous = true;
        }
    }
    (void)par;

    LoxodromicReport report;
    report.words_checked = words.size() - 1;
    report.min_dist_tr2 = words.size() > 1 ? 1e300 : 0.0;
    for (std::size_t i = 1; i < words.size(); ++i) {
        const Entry& e = entries[i];
        report.min_dist_tr2 = std::min(report.min_dist_tr2, e.dist);
        if (e.ambiguous || e.cls != MapClass::Loxodromic)
            report.violations.push_back({words[i], e.cls, e.dist});
    }
    return report;
}

} // namespace schottky
