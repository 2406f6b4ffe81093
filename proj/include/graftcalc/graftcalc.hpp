#pragma once

#include "foldgraph/foldgraph.hpp"
#include "multiarc/multiarc.hpp"
#include "schottky/schottky.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace graftcalc {

class Error : public std::runtime_error {
public:
    enum class Code {
        SameBoundary,
        UnknownBoundary,
        RHViolation,
        NotBasic,
        EdgeCountMismatch,
        TooFewComponents,
        CarrierBroken,
        NotAdmissible,
        CarrierOverlap,
        EndpointMismatch,
        InadmissibleLoopFormed,
        GluingInvalid,
        MarkingMismatch,
        DegreeMismatch,
    };

    Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

enum class Quality { Basic, Good, AlmostGood };

std::string to_string(Quality q);

// Genus-zero projective piece recorded as covering-degree bookkeeping over an
// opaque support region.
struct HoledSphereChart {
    std::string support;
    struct Component {
        std::string id;
        int degree = 1;
    };
    std::vector<Component> boundaries;
    std::vector<Component> punctures;
    Quality quality = Quality::Basic;

    const Component* find_boundary(const std::string& id) const;
    int component_count() const { return int(boundaries.size() + punctures.size()); }
    int euler_characteristic() const { return 2 - component_count(); }
};

// All degrees 1, quality Basic; needs >= 2 boundary-or-puncture components.
HoledSphereChart make_basic_chart(std::string support, std::vector<std::string> boundary_ids);

// Degrees at the two named distinct boundaries grow by 1; Basic becomes Good.
HoledSphereChart graft_arc(const HoledSphereChart& c, const std::string& b1,
                           const std::string& b2);

// Grafts a Basic chart along every chord of the diagram; edge i of the
// diagram corresponds to boundary i of the chart.
HoledSphereChart graft_multiarc(const HoledSphereChart& c, const multiarc::ChordDiagram& d);

// d = 1 + sum(d_i - 1)/2, forced by Riemann-Hurwitz; odd sum is an error.
int cover_degree(const HoledSphereChart& c);

// 2(d-1) == sum(d_i - 1) and max d_i <= d, exact integers.
bool riemann_hurwitz_check(int d, const std::vector<int>& degrees);

struct BoundaryRef {
    std::string piece;
    std::string boundary;

    friend bool operator==(const BoundaryRef& x, const BoundaryRef& y) {
        return x.piece == y.piece && x.boundary == y.boundary;
    }
    friend bool operator<(const BoundaryRef& x, const BoundaryRef& y) {
        if (x.piece != y.piece) return x.piece < y.piece;
        return x.boundary < y.boundary;
    }
    std::string str() const { return piece + "." + boundary; }
};

struct CarrierArc {
    std::string piece;
    std::string b_in;
    std::string b_out;
};

struct AdmissibleLoop {
    schottky::GroupWord word;       // holonomy image via the marking labels
    std::vector<CarrierArc> carrier;
};

// Grafting normal form: basic Schottky structure, rose-decomposable
// marking, glued holed-sphere pieces, and the grafting multiloop A.
struct GraftingPresentation {
    schottky::SchottkyGroup group;
    int genus = 0;
    foldgraph::LabeledGraph marking;
    std::vector<HoledSphereChart> pieces;
    std::vector<std::pair<BoundaryRef, BoundaryRef>> gluing; // meridians
    std::vector<AdmissibleLoop> loops;                       // the multiloop A

    const HoledSphereChart* find_piece(const std::string& id) const;
    int meridian_of(const BoundaryRef& ref) const; // -1 if unglued
    BoundaryRef glued_partner(const BoundaryRef& ref) const;
};

// Structural validation: pieces/marking/gluing shape, perfect boundary
// pairing and marking <-> gluing correspondence. Throws on failure.
void validate_structure(const GraftingPresentation& p);

int euler_characteristic(const GraftingPresentation& p); // sum(2 - n_piece)

// Recomputes the loop word from the carrier through the marking's labels.
schottky::GroupWord carrier_word(const GraftingPresentation& p,
                                 const std::vector<CarrierArc>& carrier);

// Reduced carrier word nonempty AND its holonomy classifies Loxodromic.
bool admissible(const GraftingPresentation& p, const AdmissibleLoop& loop);

// Appends the loop to A and bumps the crossed boundary degrees on both sides
// of every meridian the carrier traverses.
GraftingPresentation graft_loop(const GraftingPresentation& p, const AdmissibleLoop& loop);

struct AssemblyInput {
    schottky::SchottkyGroup group;
    int genus = 0;
    foldgraph::LabeledGraph marking;
    std::vector<HoledSphereChart> pieces; // Basic
    std::vector<std::pair<BoundaryRef, BoundaryRef>> gluing;
    std::vector<multiarc::ChordDiagram> diagrams; // one per piece, edge i = boundary i
};

// Grafts every piece along its multiarc, checks the per-meridian endpoint
// counts ("exactly d_l - 1 arcs" on both sides), chains arc endpoints across
// meridians into closed loops and verifies each one is admissible.
GraftingPresentation assemble(const AssemblyInput& input);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Non-throwing full verification pass, one result per invariant.
std::vector<CheckResult> verify_presentation(const GraftingPresentation& p);

} // namespace graftcalc
