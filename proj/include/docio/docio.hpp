#pragma once

#include "foldgraph/foldgraph.hpp"
#include "graftcalc/graftcalc.hpp"
#include "schottky/schottky.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace docio {

// Input-document problem (malformed text, wrong shape): CLI exit code 2.
class DocError : public std::runtime_error {
public:
    explicit DocError(const std::string& what) : std::runtime_error(what) {}
};

struct SchottkyDoc {
    std::vector<schottky::CirclePairing> pairs;
    bool fuchsian = false;
    double tol = moebius::kDefaultTol;
};

// { "rank": g, "pairs": [ { "src": {"cx","cy","r"}, "dst": {...} } ],
//   "fuchsian": bool, "tol": real }
SchottkyDoc parse_schottky_doc(const std::string& text);

// { "rank": g, "vertices": [ids], "edges": [ {"from","to","gen","sign"} ] }
foldgraph::LabeledGraph parse_graph_doc(const std::string& text);

// { "genus", "group": <schottky doc>, "marking": <graph doc>,
//   "pieces": [ {"id","boundaries":[{"id","deg"}]} ],
//   "gluing": [ ["pA.b1","pB.b2"] ],
//   "loops": [ {"word": "g1 g2^-1", "carrier": [ ["piece","b_in","b_out"] ]} ] }
graftcalc::GraftingPresentation parse_presentation_doc(const std::string& text);

std::string read_file(const std::string& path); // throws DocError

} // namespace docio
