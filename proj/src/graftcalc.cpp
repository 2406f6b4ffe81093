#include "graftcalc/graftcalc.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace graftcalc {

using schottky::GroupWord;
using schottky::Letter;

std::string to_string(Quality q) {
    switch (q) {
        case Quality::Basic:      return "Basic";
        case Quality::Good:       return "Good";
        case Quality::AlmostGood: return "AlmostGood";
    }
    return "?";
}

const HoledSphereChart::Component* HoledSphereChart::find_boundary(const std::string& id) const {
    for (const Component& b : boundaries)
        if (b.id == id) return &b;
    return nullptr;
}

HoledSphereChart make_basic_chart(std::string support, std::vector<std::string> boundary_ids) {
    if (boundary_ids.size() < 2)
        throw Error(Error::Code::TooFewComponents,
                    "chart needs >= 2 boundary-or-puncture components");
    std::set<std::string> seen(boundary_ids.begin(), boundary_ids.end());
    if (seen.size() != boundary_ids.size())
        throw Error(Error::Code::UnknownBoundary, "duplicate boundary id");
    HoledSphereChart c;
    c.support = std::move(support);
    for (std::string& id : boundary_ids)
        c.boundaries.push_back({std::move(id), 1});
    c.quality = Quality::Basic;
    return c;
}

HoledSphereChart graft_arc(const HoledSphereChart& c, const std::string& b1,
                           const std::string& b2) {
    if (b1 == b2)
        throw Error(Error::Code::SameBoundary, "SameBoundary: " + b1);
    HoledSphereChart out = c;
    for (const std::string* id : {&b1, &b2}) {
        bool found = false;
        for (HoledSphereChart::Component& b : out.boundaries) {
            if (b.id == *id) {
                ++b.degree;
                found = true;
                break;
            }
        }
        if (!found)
            throw Error(Error::Code::UnknownBoundary, "UnknownBoundary: " + *id);
    }
    if (out.quality == Quality::Basic) out.quality = Quality::Good;
    return out;
}

HoledSphereChart graft_multiarc(const HoledSphereChart& c, const multiarc::ChordDiagram& d) {
    if (c.quality != Quality::Basic)
        throw Error(Error::Code::NotBasic, "graft_multiarc needs a Basic chart");
    if (d.edge_count() != int(c.boundaries.size()))
        throw Error(Error::Code::EdgeCountMismatch,
                    "diagram has " + std::to_string(d.edge_count()) + " edges, chart has " +
                    std::to_string(c.boundaries.size()) + " boundaries");
    HoledSphereChart out = c;
    for (auto [a, b] : d.chords) {
        auto [ea, ka] = d.point_edge(a);
        auto [eb, kb] = d.point_edge(b);
        (void)ka; (void)kb;
        out = graft_arc(out, out.boundaries[std::size_t(ea)].id,
                        out.boundaries[std::size_t(eb)].id);
    }
    return out;
}

int cover_degree(const HoledSphereChart& c) {
    int sum = 0;
    for (const HoledSphereChart::Component& b : c.boundaries) sum += b.degree - 1;
    for (const HoledSphereChart::Component& p : c.punctures) sum += p.degree - 1;
    if (sum % 2 != 0)
        throw Error(Error::Code::RHViolation,
                    "RHViolation: sum of (d_i - 1) = " + std::to_string(sum) + " is odd");
    return 1 + sum / 2;
}

bool riemann_hurwitz_check(int d, const std::vector<int>& degrees) {
    if (d < 1) return false;
    int sum = 0, mx = 1;
    for (int di : degrees) {
        if (di < 1) return false;
        sum += di - 1;
        mx = std::max(mx, di);
    }
    return 2 * (d - 1) == sum && mx <= d;
}

const HoledSphereChart* GraftingPresentation::find_piece(const std::string& id) const {
    for (const HoledSphereChart& p : pieces)
        if (p.support == id) return &p;
    return nullptr;
}

int GraftingPresentation::meridian_of(const BoundaryRef& ref) const {
    for (std::size_t k = 0; k < gluing.size(); ++k)
        if (gluing[k].first == ref || gluing[k].second == ref) return int(k);
    return -1;
}

BoundaryRef GraftingPresentation::glued_partner(const BoundaryRef& ref) const {
    int k = meridian_of(ref);
    if (k < 0)
        throw Error(Error::Code::GluingInvalid, "unglued boundary " + ref.str());
    const auto& pair = gluing[std::size_t(k)];
    return pair.first == ref ? pair.second : pair.first;
}

namespace {

int vertex_of_piece(const GraftingPresentation& p, const std::string& piece_id) {
    for (std::size_t i = 0; i < p.pieces.size(); ++i)
        if (p.pieces[i].support == piece_id) return p.marking.vertices[i];
    throw Error(Error::Code::MarkingMismatch, "piece id not found: " + piece_id);
}

std::map<BoundaryRef, int> endpoint_counts(const GraftingPresentation& p) {
    std::map<BoundaryRef, int> counts;
    for (const AdmissibleLoop& loop : p.loops) {
        for (const CarrierArc& arc : loop.carrier) {
            ++counts[BoundaryRef{arc.piece, arc.b_in}];
            ++counts[BoundaryRef{arc.piece, arc.b_out}];
        }
    }
    return counts;
}

} // namespace

void validate_structure(const GraftingPresentation& p) {
    if (p.genus < 2)
        throw Error(Error::Code::GluingInvalid, "genus must be >= 2");
    if (p.pieces.empty())
        throw Error(Error::Code::GluingInvalid, "no pieces");

    std::set<std::string> piece_ids;
    std::set<BoundaryRef> all_refs;
    for (const HoledSphereChart& piece : p.pieces) {
        if (!piece_ids.insert(piece.support).second)
            throw Error(Error::Code::GluingInvalid, "duplicate piece id " + piece.support);
        if (piece.component_count() < 2)
            throw Error(Error::Code::TooFewComponents,
                        "piece " + piece.support + " has < 2 components");
        std::set<std::string> ids;
        for (const HoledSphereChart::Component& b : piece.boundaries) {
            if (!ids.insert(b.id).second)
                throw Error(Error::Code::GluingInvalid,
                            "duplicate boundary id in piece " + piece.support);
            if (b.degree < 1)
                throw Error(Error::Code::DegreeMismatch, "degree < 1 at " + piece.support);
            all_refs.insert(BoundaryRef{piece.support, b.id});
        }
    }

    // Perfect pairing of boundary refs.
    std::set<BoundaryRef> glued;
    for (const auto& [a, b] : p.gluing) {
        for (const BoundaryRef* r : {&a, &b}) {
            if (!all_refs.count(*r))
                throw Error(Error::Code::GluingInvalid, "unknown boundary ref " + r->str());
            if (!glued.insert(*r).second)
                throw Error(Error::Code::GluingInvalid, "boundary glued twice: " + r->str());
        }
        if (a == b)
            throw Error(Error::Code::GluingInvalid, "boundary glued to itself: " + a.str());
    }
    if (glued.size() != all_refs.size())
        throw Error(Error::Code::GluingInvalid, "gluing is not a perfect pairing");

    // Marking <-> pieces/gluing correspondence.
    if (p.marking.rank != p.group.rank)
        throw Error(Error::Code::MarkingMismatch, "marking rank != group rank");
    if (p.marking.vertices.size() != p.pieces.size())
        throw Error(Error::Code::MarkingMismatch, "marking vertices != pieces");
    if (p.marking.edges.size() != p.gluing.size())
        throw Error(Error::Code::MarkingMismatch, "marking edges != gluing pairs");
    if (p.marking.euler_rank() != p.genus)
        throw Error(Error::Code::MarkingMismatch, "marking rank E-V+1 != genus");
    for (std::size_t k = 0; k < p.gluing.size(); ++k) {
        const foldgraph::LabeledGraph::Edge& e = p.marking.edges[k];
        if (e.from != vertex_of_piece(p, p.gluing[k].first.piece) ||
            e.to != vertex_of_piece(p, p.gluing[k].second.piece))
            throw Error(Error::Code::MarkingMismatch,
                        "marking edge " + std::to_string(k) + " does not match gluing pair");
    }
}

int euler_characteristic(const GraftingPresentation& p) {
    int chi = 0;
    for (const HoledSphereChart& piece : p.pieces) chi += piece.euler_characteristic();
    return chi;
}

GroupWord carrier_word(const GraftingPresentation& p, const std::vector<CarrierArc>& carrier) {
    if (carrier.empty())
        throw Error(Error::Code::CarrierBroken, "empty carrier");
    GroupWord word;
    for (std::size_t j = 0; j < carrier.size(); ++j) {
        const CarrierArc& arc = carrier[j];
        const CarrierArc& next = carrier[(j + 1) % carrier.size()];
        if (arc.b_in == arc.b_out)
            throw Error(Error::Code::CarrierBroken,
                        "arc joins a boundary to itself: " + arc.piece + "." + arc.b_in);
        const HoledSphereChart* piece = p.find_piece(arc.piece);
        if (!piece || !piece->find_boundary(arc.b_in) || !piece->find_boundary(arc.b_out))
            throw Error(Error::Code::CarrierBroken, "carrier names unknown boundary");

        BoundaryRef out_ref{arc.piece, arc.b_out};
        int k = p.meridian_of(out_ref);
        if (k < 0)
            throw Error(Error::Code::CarrierBroken, "carrier exits unglued boundary");
        BoundaryRef partner = p.glued_partner(out_ref);
        if (!(partner == BoundaryRef{next.piece, next.b_in}))
            throw Error(Error::Code::CarrierBroken,
                        "arcs do not chain at " + out_ref.str());

        // Crossing gluing[k] first->second reads the stored label forward.
        int sign = (p.gluing[std::size_t(k)].first == out_ref) ? +1 : -1;
        word.letters.push_back(Letter{p.marking.edges[std::size_t(k)].gen, sign});
    }
    return word;
}

bool admissible(const GraftingPresentation& p, const AdmissibleLoop& loop) {
    GroupWord word = schottky::reduce(carrier_word(p, loop.carrier));
    if (word.empty()) return false;
    return moebius::classify(schottky::evaluate(p.group, word), p.group.tol) ==
           moebius::MapClass::Loxodromic;
}

GraftingPresentation graft_loop(const GraftingPresentation& p, const AdmissibleLoop& loop) {
    if (!admissible(p, loop))
        throw Error(Error::Code::NotAdmissible, "NotAdmissible");

    GraftingPresentation out = p;
    AdmissibleLoop stored = loop;
    stored.word = schottky::reduce(carrier_word(p, loop.carrier));
    out.loops.push_back(stored);

    for (const CarrierArc& arc : loop.carrier) {
        for (const std::string* b : {&arc.b_in, &arc.b_out}) {
            bool found = false;
            for (HoledSphereChart& piece : out.pieces) {
                if (piece.support != arc.piece) continue;
                for (HoledSphereChart::Component& comp : piece.boundaries) {
                    if (comp.id == *b) {
                        ++comp.degree;
                        if (piece.quality == Quality::Basic) piece.quality = Quality::Good;
                        found = true;
                        break;
                    }
                }
            }
            if (!found)
                throw Error(Error::Code::CarrierBroken, "carrier names unknown boundary");
        }
    }
    return out;
}

GraftingPresentation assemble(const AssemblyInput& input) {
    if (input.diagrams.size() != input.pieces.size())
        throw Error(Error::Code::EdgeCountMismatch, "one diagram per piece required");

    GraftingPresentation p;
    p.group = input.group;
    p.genus = input.genus;
    p.marking = input.marking;
    p.gluing = input.gluing;
    for (std::size_t i = 0; i < input.pieces.size(); ++i)
        p.pieces.push_back(graft_multiarc(input.pieces[i], input.diagrams[i]));
    validate_structure(p);

    auto piece_index = [&](const std::string& id) {
        for (std::size_t i = 0; i < p.pieces.size(); ++i)
            if (p.pieces[i].support == id) return int(i);
        throw Error(Error::Code::GluingInvalid, "unknown piece " + id);
    };
    auto boundary_index = [&](int piece, const std::string& id) {
        const auto& bs = p.pieces[std::size_t(piece)].boundaries;
        for (std::size_t j = 0; j < bs.size(); ++j)
            if (bs[j].id == id) return int(j);
        throw Error(Error::Code::GluingInvalid, "unknown boundary " + id);
    };
    auto count_on = [&](const BoundaryRef& ref) {
        int pi = piece_index(ref.piece);
        int bi = boundary_index(pi, ref.boundary);
        return input.diagrams[std::size_t(pi)].degrees[std::size_t(bi)];
    };

    // "Exactly d_l - 1 arcs" on both sides of every meridian.
    for (std::size_t k = 0; k < p.gluing.size(); ++k) {
        int ca = count_on(p.gluing[k].first);
        int cb = count_on(p.gluing[k].second);
        if (ca != cb) {
            std::ostringstream msg;
            msg << "EndpointMismatch(" << k << "): " << p.gluing[k].first.str() << " has " << ca
                << ", " << p.gluing[k].second.str() << " has " << cb;
            throw Error(Error::Code::EndpointMismatch, msg.str());
        }
    }

    // Endpoint nodes: (piece, global diagram point id). Chords pair nodes
    // inside a piece; the orientation-reversing meridian gluing pairs point t
    // on one side with point (count-1-t) on the other.
    using Node = std::pair<int, int>; // (piece index, diagram point id)
    std::map<Node, Node> chord_partner;
    for (std::size_t i = 0; i < p.pieces.size(); ++i) {
        for (auto [a, b] : input.diagrams[i].chords) {
            chord_partner[Node{int(i), a}] = Node{int(i), b};
            chord_partner[Node{int(i), b}] = Node{int(i), a};
        }
    }
    std::map<Node, Node> meridian_partner;
    for (std::size_t k = 0; k < p.gluing.size(); ++k) {
        const BoundaryRef& ra = p.gluing[k].first;
        const BoundaryRef& rb = p.gluing[k].second;
        int pa = piece_index(ra.piece), pb = piece_index(rb.piece);
        int ba = boundary_index(pa, ra.boundary), bb = boundary_index(pb, rb.boundary);
        int cnt = count_on(ra);
        for (int t = 0; t < cnt; ++t) {
            Node na{pa, input.diagrams[std::size_t(pa)].point_id(ba, t)};
            Node nb{pb, input.diagrams[std::size_t(pb)].point_id(bb, cnt - 1 - t)};
            meridian_partner[na] = nb;
            meridian_partner[nb] = na;
        }
    }

    // Chase chord/meridian alternations into closed loops.
    std::set<Node> visited;
    for (const auto& [start, unused] : chord_partner) {
        (void)unused;
        if (visited.count(start)) continue;
        AdmissibleLoop loop;
        Node cur = start;
        do {
            visited.insert(cur);
            Node exit = chord_partner.at(cur);
            visited.insert(exit);
            const multiarc::ChordDiagram& diag = input.diagrams[std::size_t(cur.first)];
            auto [be_in, k_in] = diag.point_edge(cur.second);
            auto [be_out, k_out] = diag.point_edge(exit.second);
            (void)k_in; (void)k_out;
            const HoledSphereChart& piece = p.pieces[std::size_t(cur.first)];
            loop.carrier.push_back(CarrierArc{piece.support,
                                              piece.boundaries[std::size_t(be_in)].id,
                                              piece.boundaries[std::size_t(be_out)].id});
            cur = meridian_partner.at(exit);
        } while (!(cur == start));

        try {
            loop.word = schottky::reduce(carrier_word(p, loop.carrier));
        } catch (const Error& e) {
            throw Error(Error::Code::InadmissibleLoopFormed,
                        std::string("InadmissibleLoopFormed: ") + e.what());
        }
        if (!admissible(p, loop))
            throw Error(Error::Code::InadmissibleLoopFormed,
                        "InadmissibleLoopFormed: word '" + schottky::to_string(loop.word) + "'");
        p.loops.push_back(std::move(loop));
    }
    return p;
}

std::vector<CheckResult> verify_presentation(const GraftingPresentation& p) {
    std::vector<CheckResult> out;
    auto record = [&](const std::string& name, bool pass, const std::string& detail) {
        out.push_back(CheckResult{name, pass, detail});
    };

    try {
        validate_structure(p);
        record("structure", true,
               std::to_string(p.pieces.size()) + " pieces, " + std::to_string(p.gluing.size()) +
               " meridians");
    } catch (const std::exception& e) {
        record("structure", false, e.what());
        return out; // later checks need the structure
    }

    int chi = euler_characteristic(p);
    record("euler-characteristic", chi == 2 - 2 * p.genus,
           "chi = " + std::to_string(chi) + ", 2-2g = " + std::to_string(2 - 2 * p.genus));

    {
        bool pass = true;
        std::string detail;
        for (std::size_t k = 0; k < p.gluing.size(); ++k) {
            int da = p.find_piece(p.gluing[k].first.piece)
                         ->find_boundary(p.gluing[k].first.boundary)->degree;
            int db = p.find_piece(p.gluing[k].second.piece)
                         ->find_boundary(p.gluing[k].second.boundary)->degree;
            if (da != db) {
                pass = false;
                detail = "meridian " + std::to_string(k) + ": " + std::to_string(da) +
                         " vs " + std::to_string(db);
                break;
            }
        }
        record("meridian-degrees", pass, pass ? std::to_string(p.gluing.size()) + " meridians"
                                             : detail);
    }

    {
        bool pass = true;
        std::string detail;
        for (const HoledSphereChart& piece : p.pieces) {
            std::vector<int> degrees;
            for (const auto& b : piece.boundaries) degrees.push_back(b.degree);
            for (const auto& q : piece.punctures) degrees.push_back(q.degree);
            try {
                int d = cover_degree(piece);
                if (!riemann_hurwitz_check(d, degrees)) {
                    pass = false;
                    detail = "piece " + piece.support;
                    break;
                }
            } catch (const Error& e) {
                pass = false;
                detail = std::string(e.what());
                break;
            }
        }
        record("riemann-hurwitz", pass, pass ? std::to_string(p.pieces.size()) + " pieces"
                                             : detail);
    }

    {
        std::map<BoundaryRef, int> counts = endpoint_counts(p);
        bool pass = true;
        std::string detail;
        for (std::size_t k = 0; k < p.gluing.size() && pass; ++k) {
            for (const BoundaryRef* ref : {&p.gluing[k].first, &p.gluing[k].second}) {
                int deg = p.find_piece(ref->piece)->find_boundary(ref->boundary)->degree;
                int cnt = counts.count(*ref) ? counts[*ref] : 0;
                if (cnt != deg - 1) {
                    pass = false;
                    detail = "EndpointMismatch meridian " + std::to_string(k) + " at " +
                             ref->str() + ": " + std::to_string(cnt) + " arcs, d-1 = " +
                             std::to_string(deg - 1);
                    break;
                }
            }
        }
        record("endpoint-counts", pass,
               pass ? std::to_string(p.loops.size()) + " loops" : detail);
    }

    {
        bool pass = true;
        std::string detail;
        for (std::size_t i = 0; i < p.loops.size(); ++i) {
            try {
                GroupWord w = schottky::reduce(carrier_word(p, p.loops[i].carrier));
                if (!(schottky::reduce(p.loops[i].word) == w)) {
                    pass = false;
                    detail = "loop " + std::to_string(i) + ": stored word '" +
                             schottky::to_string(p.loops[i].word) + "' vs carrier word '" +
                             schottky::to_string(w) + "'";
                    break;
                }
            } catch (const std::exception& e) {
                pass = false;
                detail = "loop " + std::to_string(i) + ": " + e.what();
                break;
            }
        }
        record("loop-words", pass, pass ? std::to_string(p.loops.size()) + " loops" : detail);
    }

    {
        bool pass = true;
        std::string detail;
        for (std::size_t i = 0; i < p.loops.size(); ++i) {
            try {
                if (!admissible(p, p.loops[i])) {
                    pass = false;
                    detail = "NotAdmissible: loop " + std::to_string(i) + " word '" +
                             schottky::to_string(schottky::reduce(p.loops[i].word)) + "'";
                    break;
                }
            } catch (const std::exception& e) {
                pass = false;
                detail = "loop " + std::to_string(i) + ": " + e.what();
                break;
            }
        }
        record("admissibility", pass, pass ? std::to_string(p.loops.size()) + " loops" : detail);
    }

    {
        foldgraph::DecomposeResult dec = foldgraph::decompose_to_rose(p.marking);
        record("marking-rose-decomposable", dec.is_iso,
               dec.is_iso ? std::to_string(dec.trace.events.size()) + " folds"
                          : "folded graph has rank " + std::to_string(dec.folded.euler_rank()));
    }

    return out;
}

} // namespace graftcalc
