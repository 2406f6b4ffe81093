#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graftcalc/graftcalc.hpp"
#include "testgen.hpp"

#include <algorithm>
#include <random>

using namespace graftcalc;
using schottky::GroupWord;

namespace {

// The Omega_0 pattern: one 2g-holed sphere self-glued along g meridians,
// marking = rose(g).
GraftingPresentation omega0_presentation(int g) {
    return testgen::presentation_from_graph(foldgraph::rose(g), testgen::fuchsian_group(g));
}

// Two pieces joined by two meridians that carry the same generator label;
// structurally broken (not rose-decomposable) but enough to exercise
// admissibility of trivial words.
GraftingPresentation parallel_label_presentation() {
    GraftingPresentation p;
    p.group = testgen::rank2_group();
    p.genus = 2;
    p.marking = foldgraph::make_graph(2, {0, 1}, {{0, 1, 1, 1}, {0, 1, 1, 1}});
    p.pieces.push_back(make_basic_chart("pA", {"a1", "a2"}));
    p.pieces.push_back(make_basic_chart("pB", {"b1", "b2"}));
    p.gluing = {{{"pA", "a1"}, {"pB", "b1"}}, {{"pA", "a2"}, {"pB", "b2"}}};
    return p;
}

} // namespace

TEST_CASE("graft_arc") {
    HoledSphereChart annulus = make_basic_chart("p", {"b1", "b2"});
    CHECK(annulus.quality == Quality::Basic);
    HoledSphereChart once = graft_arc(annulus, "b1", "b2");
    CHECK(once.boundaries[0].degree == 2);
    CHECK(once.boundaries[1].degree == 2);
    CHECK(once.quality == Quality::Good);

    HoledSphereChart three = make_basic_chart("p", {"b1", "b2", "b3"});
    three.boundaries[0].degree = 2;
    HoledSphereChart grafted = graft_arc(three, "b2", "b3");
    CHECK(grafted.boundaries[0].degree == 2);
    CHECK(grafted.boundaries[1].degree == 2);
    CHECK(grafted.boundaries[2].degree == 2);

    CHECK_THROWS_AS(graft_arc(annulus, "b1", "b1"), Error);
    CHECK_THROWS_AS(graft_arc(annulus, "b1", "nope"), Error);
}

TEST_CASE("graft_multiarc and cover degree") {
    HoledSphereChart three = make_basic_chart("p", {"b1", "b2", "b3"});
    HoledSphereChart same = graft_multiarc(three, multiarc::construct({0, 0, 0}));
    CHECK(same.quality == Quality::Basic);
    CHECK(cover_degree(same) == 1);

    HoledSphereChart grafted = graft_multiarc(three, multiarc::construct({1, 2, 3}));
    CHECK(grafted.boundaries[0].degree == 2);
    CHECK(grafted.boundaries[1].degree == 3);
    CHECK(grafted.boundaries[2].degree == 4);
    CHECK(cover_degree(grafted) == 4);
    CHECK(riemann_hurwitz_check(4, {2, 3, 4}));

    HoledSphereChart annulus = make_basic_chart("p", {"b1", "b2"});
    HoledSphereChart once = graft_multiarc(annulus, multiarc::construct({1, 1}));
    CHECK(cover_degree(once) == 2);

    HoledSphereChart odd = make_basic_chart("p", {"b1", "b2", "b3"});
    for (auto& b : odd.boundaries) b.degree = 2; // sum of (d_i - 1) odd
    CHECK_THROWS_AS(cover_degree(odd), Error);

    CHECK_THROWS_AS(graft_multiarc(annulus, multiarc::construct({1, 2, 3})), Error);
}

TEST_CASE("riemann_hurwitz_check") {
    CHECK(riemann_hurwitz_check(4, {2, 3, 4}));
    CHECK(riemann_hurwitz_check(1, {1, 1, 1}));
    CHECK(!riemann_hurwitz_check(2, {2, 2, 2}));
    CHECK(!riemann_hurwitz_check(2, {3, 1})); // max exceeds degree
}

TEST_CASE("cover_degree = chords + 1 for k up to 20 (property)") {
    for (int k = 0; k <= 20; ++k) {
        HoledSphereChart annulus = make_basic_chart("p", {"b1", "b2"});
        multiarc::ChordDiagram d = multiarc::construct({k, k});
        HoledSphereChart grafted = graft_multiarc(annulus, d);
        CHECK(cover_degree(grafted) == k + 1);
        std::vector<int> degs;
        for (const auto& b : grafted.boundaries) degs.push_back(b.degree);
        CHECK(riemann_hurwitz_check(k + 1, degs));
    }
}

TEST_CASE("omega0 presentation validates; carrier words read the marking") {
    GraftingPresentation p = omega0_presentation(2);
    validate_structure(p);
    CHECK(euler_characteristic(p) == -2);

    // Single-arc loop crossing the g1 meridian forward.
    AdmissibleLoop loop;
    loop.carrier = {{"p0", "e0b", "e0a"}};
    GroupWord w = carrier_word(p, loop.carrier);
    CHECK(schottky::to_string(w) == "g1");
    CHECK(admissible(p, loop));

    // Crossing backward reads g1^-1.
    AdmissibleLoop back;
    back.carrier = {{"p0", "e0a", "e0b"}};
    CHECK(schottky::to_string(carrier_word(p, back.carrier)) == "g1^-1");

    AdmissibleLoop broken;
    broken.carrier = {{"p0", "e0b", "e0b"}};
    CHECK_THROWS_AS(carrier_word(p, broken.carrier), Error);
}

TEST_CASE("admissible rejects trivial words") {
    GraftingPresentation p = parallel_label_presentation();
    AdmissibleLoop trivial;
    trivial.carrier = {{"pA", "a2", "a1"}, {"pB", "b1", "b2"}};
    CHECK(schottky::reduce(carrier_word(p, trivial.carrier)).empty());
    CHECK(!admissible(p, trivial));

    GraftingPresentation q = omega0_presentation(2);
    AdmissibleLoop two;
    two.carrier = {{"p0", "e0b", "e1a"}, {"p0", "e1b", "e0a"}};
    GroupWord w = carrier_word(q, two.carrier);
    CHECK(schottky::to_string(w) == "g2 g1");
    CHECK(admissible(q, two));
}

TEST_CASE("graft_loop bumps degrees and keeps chi") {
    GraftingPresentation p = omega0_presentation(2);
    AdmissibleLoop loop;
    loop.carrier = {{"p0", "e0b", "e0a"}};

    GraftingPresentation once = graft_loop(p, loop);
    CHECK(once.loops.size() == 1);
    CHECK(euler_characteristic(once) == euler_characteristic(p));
    CHECK(once.find_piece("p0")->find_boundary("e0a")->degree == 2);
    CHECK(once.find_piece("p0")->find_boundary("e0b")->degree == 2);
    CHECK(once.find_piece("p0")->find_boundary("e1a")->degree == 1);
    for (const CheckResult& c : verify_presentation(once)) CHECK(c.pass);

    AdmissibleLoop other;
    other.carrier = {{"p0", "e1b", "e1a"}};
    GraftingPresentation ab = graft_loop(graft_loop(p, loop), other);
    GraftingPresentation ba = graft_loop(graft_loop(p, other), loop);
    CHECK(ab.loops.size() == 2);
    for (std::size_t i = 0; i < ab.pieces.size(); ++i)
        for (std::size_t b = 0; b < ab.pieces[i].boundaries.size(); ++b)
            CHECK(ab.pieces[i].boundaries[b].degree == ba.pieces[i].boundaries[b].degree);

    GraftingPresentation bad = parallel_label_presentation();
    AdmissibleLoop trivial;
    trivial.carrier = {{"pA", "a2", "a1"}, {"pB", "b1", "b2"}};
    CHECK_THROWS_AS(graft_loop(bad, trivial), Error);
}

TEST_CASE("assemble: zero arcs, one meridian crossing, endpoint mismatch") {
    GraftingPresentation base = omega0_presentation(2);
    AssemblyInput input;
    input.group = base.group;
    input.genus = 2;
    input.marking = base.marking;
    input.pieces = base.pieces;
    input.gluing = base.gluing;

    input.diagrams = {multiarc::construct({0, 0, 0, 0})};
    GraftingPresentation zero = assemble(input);
    CHECK(zero.loops.empty());
    CHECK(euler_characteristic(zero) == -2);
    for (const CheckResult& c : verify_presentation(zero)) CHECK(c.pass);

    // One chord between the two sides of the g1 meridian chains into a loop.
    input.diagrams = {multiarc::construct({1, 1, 0, 0})};
    GraftingPresentation one = assemble(input);
    CHECK(one.loops.size() == 1);
    CHECK(!schottky::reduce(one.loops[0].word).empty());
    for (const CheckResult& c : verify_presentation(one)) CHECK(c.pass);

    // Counts 2 vs 1 across the g1 meridian.
    input.diagrams = {multiarc::construct({2, 1, 1, 0})};
    CHECK_THROWS_WITH_AS(assemble(input),
                         doctest::Contains("EndpointMismatch"), Error);
}

TEST_CASE("assemble is deterministic and re-verifies (round trip)") {
    std::mt19937_64 rng(testgen::seed_from_env(2100));
    GraftingPresentation base = omega0_presentation(3);
    AssemblyInput input;
    input.group = base.group;
    input.genus = 3;
    input.marking = base.marking;
    input.pieces = base.pieces;
    input.gluing = base.gluing;
    input.diagrams = {multiarc::construct({1, 1, 2, 2, 1, 1})};

    GraftingPresentation a = assemble(input);
    GraftingPresentation b = assemble(input);
    REQUIRE(a.loops.size() == b.loops.size());
    for (std::size_t i = 0; i < a.loops.size(); ++i) {
        CHECK(a.loops[i].word == b.loops[i].word);
        CHECK(a.loops[i].carrier.size() == b.loops[i].carrier.size());
    }
    for (const CheckResult& c : verify_presentation(a)) CHECK(c.pass);
    (void)rng;
}

TEST_CASE("euler characteristic invariance on random presentations (property)") {
    std::mt19937_64 rng(testgen::seed_from_env(2101));
    for (int trial = 0; trial < 20; ++trial) {
        int g = std::uniform_int_distribution<int>(2, 3)(rng);
        foldgraph::LabeledGraph marking = testgen::random_blowup(rng, g, 4);
        GraftingPresentation p =
            testgen::presentation_from_graph(marking, testgen::fuchsian_group(g));
        validate_structure(p);
        CHECK(euler_characteristic(p) == 2 - 2 * g);

        int grafts = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int i = 0; i < grafts; ++i) {
            AdmissibleLoop loop;
            loop.carrier = testgen::random_carrier(p, rng);
            // On a ping-pong group the numeric test agrees with word
            // nonemptiness.
            CHECK(admissible(p, loop) ==
                  !schottky::reduce(carrier_word(p, loop.carrier)).empty());
            p = graft_loop(p, loop);
            CHECK(euler_characteristic(p) == 2 - 2 * g);
        }
        for (const CheckResult& c : verify_presentation(p)) CHECK(c.pass);
    }
}

TEST_CASE("structure validation rejects inconsistent data") {
    GraftingPresentation p = omega0_presentation(2);
    p.genus = 3; // marking rank no longer matches
    CHECK_THROWS_AS(validate_structure(p), Error);

    GraftingPresentation q = omega0_presentation(2);
    q.gluing.pop_back();
    CHECK_THROWS_AS(validate_structure(q), Error);
}
