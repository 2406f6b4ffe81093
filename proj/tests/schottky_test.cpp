#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "schottky/schottky.hpp"
#include "testgen.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace schottky;
using moebius::Circle;
using moebius::MoebiusMap;

namespace {

GroupWord word_of(std::initializer_list<Letter> letters) {
    GroupWord w;
    w.letters = letters;
    return w;
}

} // namespace

TEST_CASE("build: worked rank-2 group") {
    SchottkyGroup g = testgen::rank2_group();
    CHECK(g.rank == 2);
    CHECK(g.fuchsian);
    MoebiusMap gen1 = MoebiusMap::from_entries({-2, 0}, {-13, 0}, {1, 0}, {6, 0});
    MoebiusMap gen2 = MoebiusMap::from_entries({6, 0}, {-13, 0}, {1, 0}, {-2, 0});
    CHECK(g.generators[0].approx_equal(gen1, 1e-12));
    CHECK(g.generators[1].approx_equal(gen2, 1e-12));
}

TEST_CASE("build: rank-1 group and overlap rejection") {
    SchottkyGroup g = testgen::rank1_group();
    CHECK(g.rank == 1);
    CHECK(moebius::classify(g.generators[0]) == moebius::MapClass::Loxodromic);

    CHECK_THROWS_WITH_AS(
        (void)build({{Circle{{0, 0}, 1}, Circle{{1, 0}, 1}}}, false),
        "CirclesOverlap(0,1)", Error);
}

TEST_CASE("reduce") {
    CHECK(reduce(word_of({{0, +1}, {0, -1}})).empty());
    CHECK(reduce(word_of({{0, +1}, {1, +1}, {1, -1}, {0, +1}})) ==
          word_of({{0, +1}, {0, +1}}));
    CHECK(reduce(word_of({{1, -1}, {0, +1}, {0, -1}, {1, +1}, {0, +1}})) ==
          word_of({{0, +1}}));
}

TEST_CASE("word formatting round trip") {
    GroupWord w = word_of({{0, +1}, {1, -1}});
    CHECK(to_string(w) == "g1 g2^-1");
    CHECK(parse_word("g1 g2^-1", 2) == w);
    CHECK(parse_word("", 2).empty());
    CHECK_THROWS_AS(parse_word("g3", 2), Error);
}

TEST_CASE("evaluate") {
    SchottkyGroup g = testgen::rank2_group();
    CHECK(evaluate(g, GroupWord{}).is_identity(1e-12));
    MoebiusMap gen1 = MoebiusMap::from_entries({-2, 0}, {-13, 0}, {1, 0}, {6, 0});
    CHECK(evaluate(g, word_of({{0, +1}})).approx_equal(gen1, 1e-12));
    // Cayley-Hamilton: tr(m^2) = tr(m)^2 - 2 det = 16 - 2 = 14.
    MoebiusMap sq = evaluate(g, word_of({{0, +1}, {0, +1}}));
    CHECK(std::abs(std::abs(sq.trace().real()) - 14.0) < 1e-9);
}

TEST_CASE("enumerate_reduced_words: counts and order") {
    SchottkyGroup g2 = testgen::rank2_group();
    CHECK(enumerate_reduced_words(g2, 1).size() == 5);
    CHECK(enumerate_reduced_words(g2, 2).size() == 17);
    SchottkyGroup g1 = testgen::rank1_group();
    CHECK(enumerate_reduced_words(g1, 3).size() == 7);

    std::vector<GroupWord> words = enumerate_reduced_words(g2, 2);
    CHECK(words[0].empty());
    CHECK(to_string(words[1]) == "g1");
    CHECK(to_string(words[2]) == "g1^-1");
    CHECK(to_string(words[3]) == "g2");
    CHECK(to_string(words[4]) == "g2^-1");
    CHECK(to_string(words[5]) == "g1 g1");
    CHECK(to_string(words[6]) == "g1 g2");
    CHECK(to_string(words[7]) == "g1 g2^-1");
    for (const GroupWord& w : words) CHECK(reduce(w) == w);

    CHECK_THROWS_AS(enumerate_reduced_words(g2, 20), Error); // default cap

    std::vector<GroupWord> serial =
        enumerate_reduced_words(g2, 7, kDefaultWordCap, core::Exec::serial);
    std::vector<GroupWord> parallel =
        enumerate_reduced_words(g2, 7, kDefaultWordCap, core::Exec::parallel);
    CHECK(serial == parallel);
}

TEST_CASE("evaluate is a homomorphism up to sign (property)") {
    SchottkyGroup g = testgen::rank2_group();
    std::vector<GroupWord> words = enumerate_reduced_words(g, 8);
    std::map<std::string, MoebiusMap> table;
    for (const GroupWord& w : words) table.emplace(to_string(w), evaluate(g, w));

    std::size_t checked = 0;
    for (const GroupWord& u : words) {
        if (u.size() > 8) continue;
        for (const GroupWord& v : words) {
            if (u.size() + v.size() > 8) continue;
            MoebiusMap direct = table.at(to_string(concat(u, v)));
            MoebiusMap composed = compose(table.at(to_string(u)), table.at(to_string(v)));
            CHECK(direct.approx_equal(composed, 1e-8));
            ++checked;
        }
    }
    CHECK(checked > 100000);
}

TEST_CASE("limit set: rank-1 converges to the fixed points") {
    SchottkyGroup g = testgen::rank1_group();
    LimitSetResult res = limit_set_approx(g, 12);
    REQUIRE(res.points.size() == 2);
    double s3 = std::sqrt(3.0);
    double d1 = std::abs(res.points[0].to_complex() - moebius::Complex(s3));
    double d2 = std::abs(res.points[1].to_complex() - moebius::Complex(-s3));
    double e1 = std::abs(res.points[0].to_complex() - moebius::Complex(-s3));
    double e2 = std::abs(res.points[1].to_complex() - moebius::Complex(s3));
    CHECK(std::min(d1 + d2, e1 + e2) < 1e-6);
}

TEST_CASE("limit set: depth-1 disks are the pairing circles") {
    SchottkyGroup g = testgen::rank2_group();
    LimitSetResult res = limit_set_approx(g, 1);
    CHECK(res.tree.nodes.size() == 4);
    CHECK(res.points.size() == 4);
    CHECK(std::abs(res.tree.nodes[0].disk.center - moebius::Complex(-2.0)) < 1e-12); // dst_1
    CHECK(std::abs(res.tree.nodes[1].disk.center - moebius::Complex(-6.0)) < 1e-12); // src_1
}

TEST_CASE("limit set: depth-8 tree nesting, counts, fuchsian reality") {
    SchottkyGroup g = testgen::rank2_group();
    LimitSetResult res = limit_set_approx(g, 8);
    const DiskTree& tree = res.tree;
    CHECK(tree.level_end(8) - tree.level_begin(8) == 4 * 2187); // 4 * 3^7 leaves

    // Nesting with slack and per-branch monotone diameters.
    for (int level = 2; level <= 8; ++level) {
        for (std::size_t i = tree.level_begin(level); i < tree.level_end(level); ++i) {
            const DiskTree::Node& child = tree.nodes[i];
            const DiskTree::Node& parent = tree.nodes[std::size_t(child.parent)];
            double slack = parent.disk.radius -
                           (std::abs(child.disk.center - parent.disk.center) + child.disk.radius);
            CHECK(slack >= -1e-9);
            CHECK(child.disk.radius <= parent.disk.radius + 1e-12);
        }
    }
    for (const auto& p : res.points)
        CHECK(std::abs(p.to_complex().imag()) < 1e-8);
}

TEST_CASE("limit set: serial and parallel expansions are identical") {
    SchottkyGroup g = testgen::rank2_group();
    LimitSetResult a = limit_set_approx(g, 7, core::Exec::serial);
    LimitSetResult b = limit_set_approx(g, 7, core::Exec::parallel);
    REQUIRE(a.tree.nodes.size() == b.tree.nodes.size());
    for (std::size_t i = 0; i < a.tree.nodes.size(); ++i) {
        CHECK(a.tree.nodes[i].disk.center == b.tree.nodes[i].disk.center);
        CHECK(a.tree.nodes[i].disk.radius == b.tree.nodes[i].disk.radius);
        CHECK(a.tree.nodes[i].parent == b.tree.nodes[i].parent);
    }
}

TEST_CASE("limit set: caps and nesting diagnostics") {
    SchottkyGroup g = testgen::rank2_group();
    CHECK_THROWS_AS(limit_set_approx(g, 8, core::Exec::parallel, 100), Error); // CapExceeded

    // Overlapping circles forced past build break the nesting.
    SchottkyGroup bad;
    bad.rank = 1;
    bad.fuchsian = true;
    bad.tol = 1e-9;
    bad.pairing = {{Circle{{-0.5, 0.0}, 1.0}, Circle{{0.5, 0.0}, 1.0}}};
    bad.generators = {moebius::from_circle_pairing(bad.pairing[0].src, bad.pairing[0].dst, true)};
    CHECK_THROWS_AS(limit_set_approx(bad, 8), Error);
}

TEST_CASE("in_fundamental_domain") {
    SchottkyGroup g = testgen::rank2_group();
    CHECK(in_fundamental_domain(g, moebius::SpherePoint::from_complex(0.0)));
    CHECK(!in_fundamental_domain(g, moebius::SpherePoint::from_complex(-6.0)));
    CHECK(in_fundamental_domain(g, moebius::SpherePoint::infinity()));
    // Closed domain: boundary points count as inside.
    CHECK(in_fundamental_domain(g, moebius::SpherePoint::from_complex(-1.0)));
}

TEST_CASE("all_loxodromic_check") {
    SchottkyGroup g2 = testgen::rank2_group();
    LoxodromicReport r2 = all_loxodromic_check(g2, 3);
    CHECK(r2.words_checked == 52); // 4 + 12 + 36
    CHECK(r2.violations.empty());

    SchottkyGroup g1 = testgen::rank1_group();
    LoxodromicReport r1 = all_loxodromic_check(g1, 5);
    CHECK(r1.words_checked == 10);
    CHECK(r1.violations.empty());

    LoxodromicReport serial = all_loxodromic_check(g2, 5, core::Exec::serial);
    LoxodromicReport parallel = all_loxodromic_check(g2, 5, core::Exec::parallel);
    CHECK(serial.words_checked == parallel.words_checked);
    CHECK(serial.min_dist_tr2 == parallel.min_dist_tr2);
}

TEST_CASE("higher-rank fuchsian groups build clean") {
    for (int rank : {3, 4}) {
        SchottkyGroup g = testgen::fuchsian_group(rank);
        CHECK(g.rank == rank);
        CHECK(all_loxodromic_check(g, 2).violations.empty());
    }
}
