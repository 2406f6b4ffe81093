#include "docio/docio.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace docio {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DocError(e.what()); // nlohmann reports line/byte position
    }
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed,
                const std::set<std::string>& required) {
    if (!obj.is_object()) throw DocError(path + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw DocError(path + ": unknown key '" + key + "'");
    }
    for (const std::string& key : required)
        if (!obj.contains(key)) throw DocError(path + ": missing key '" + key + "'");
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.at(key).is_number()) throw DocError(path + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.at(key).is_number_integer())
        throw DocError(path + "." + key + ": expected an integer");
    return obj.at(key).get<int>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.at(key).is_boolean()) throw DocError(path + "." + key + ": expected a boolean");
    return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.at(key).is_string()) throw DocError(path + "." + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

moebius::Circle parse_circle(const json& obj, const std::string& path) {
    check_keys(obj, path, {"cx", "cy", "r"}, {"cx", "cy", "r"});
    moebius::Circle c;
    c.center = {get_number(obj, path, "cx"), get_number(obj, path, "cy")};
    c.radius = get_number(obj, path, "r");
    if (c.radius <= 0.0) throw DocError(path + ".r: radius must be positive");
    return c;
}

SchottkyDoc parse_schottky_json(const json& doc, const std::string& path) {
    check_keys(doc, path, {"rank", "pairs", "fuchsian", "tol"}, {"rank", "pairs"});
    SchottkyDoc out;
    int rank = get_int(doc, path, "rank");
    if (!doc.at("pairs").is_array()) throw DocError(path + ".pairs: expected an array");
    if (doc.contains("fuchsian")) out.fuchsian = get_bool(doc, path, "fuchsian");
    if (doc.contains("tol")) {
        out.tol = get_number(doc, path, "tol");
        if (out.tol <= 0.0) throw DocError(path + ".tol: must be positive");
    }
    int i = 0;
    for (const json& pair : doc.at("pairs")) {
        std::string ppath = path + ".pairs[" + std::to_string(i++) + "]";
        check_keys(pair, ppath, {"src", "dst"}, {"src", "dst"});
        out.pairs.push_back({parse_circle(pair.at("src"), ppath + ".src"),
                             parse_circle(pair.at("dst"), ppath + ".dst")});
    }
    if (rank != int(out.pairs.size()))
        throw DocError(path + ".rank: rank " + std::to_string(rank) + " != " +
                       std::to_string(out.pairs.size()) + " pairs");
    return out;
}

foldgraph::LabeledGraph parse_graph_json(const json& doc, const std::string& path) {
    check_keys(doc, path, {"rank", "vertices", "edges"}, {"rank", "vertices", "edges"});
    int rank = get_int(doc, path, "rank");
    if (!doc.at("vertices").is_array()) throw DocError(path + ".vertices: expected an array");
    if (!doc.at("edges").is_array()) throw DocError(path + ".edges: expected an array");
    std::vector<int> vertices;
    for (const json& v : doc.at("vertices")) {
        if (!v.is_number_integer()) throw DocError(path + ".vertices: expected integer ids");
        vertices.push_back(v.get<int>());
    }
    std::vector<std::array<int, 4>> edges;
    int i = 0;
    for (const json& e : doc.at("edges")) {
        std::string epath = path + ".edges[" + std::to_string(i++) + "]";
        check_keys(e, epath, {"from", "to", "gen", "sign"}, {"from", "to", "gen", "sign"});
        edges.push_back({get_int(e, epath, "from"), get_int(e, epath, "to"),
                         get_int(e, epath, "gen"), get_int(e, epath, "sign")});
    }
    try {
        return foldgraph::make_graph(rank, std::move(vertices), std::move(edges));
    } catch (const foldgraph::Error& err) {
        throw DocError(path + ": " + err.what());
    }
}

graftcalc::BoundaryRef parse_ref(const std::string& text, const std::string& path) {
    std::size_t dot = text.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == text.size())
        throw DocError(path + ": expected \"piece.boundary\", got '" + text + "'");
    return graftcalc::BoundaryRef{text.substr(0, dot), text.substr(dot + 1)};
}

} // namespace

SchottkyDoc parse_schottky_doc(const std::string& text) {
    return parse_schottky_json(parse_json(text), "$");
}

foldgraph::LabeledGraph parse_graph_doc(const std::string& text) {
    return parse_graph_json(parse_json(text), "$");
}

graftcalc::GraftingPresentation parse_presentation_doc(const std::string& text) {
    json doc = parse_json(text);
    check_keys(doc, "$", {"genus", "group", "marking", "pieces", "gluing", "loops"},
               {"genus", "group", "marking", "pieces", "gluing"});

    graftcalc::GraftingPresentation p;
    p.genus = get_int(doc, "$", "genus");

    SchottkyDoc group = parse_schottky_json(doc.at("group"), "$.group");
    try {
        p.group = schottky::build(group.pairs, group.fuchsian, group.tol);
    } catch (const schottky::Error& e) {
        throw DocError(std::string("$.group: ") + e.what());
    }
    p.marking = parse_graph_json(doc.at("marking"), "$.marking");

    if (!doc.at("pieces").is_array()) throw DocError("$.pieces: expected an array");
    int i = 0;
    for (const json& piece : doc.at("pieces")) {
        std::string ppath = "$.pieces[" + std::to_string(i++) + "]";
        check_keys(piece, ppath, {"id", "boundaries"}, {"id", "boundaries"});
        graftcalc::HoledSphereChart chart;
        chart.support = get_string(piece, ppath, "id");
        if (!piece.at("boundaries").is_array())
            throw DocError(ppath + ".boundaries: expected an array");
        int j = 0;
        bool all_one = true;
        for (const json& b : piece.at("boundaries")) {
            std::string bpath = ppath + ".boundaries[" + std::to_string(j++) + "]";
            check_keys(b, bpath, {"id", "deg"}, {"id", "deg"});
            int deg = get_int(b, bpath, "deg");
            if (deg < 1) throw DocError(bpath + ".deg: must be >= 1");
            all_one = all_one && deg == 1;
            chart.boundaries.push_back({get_string(b, bpath, "id"), deg});
        }
        chart.quality = all_one ? graftcalc::Quality::Basic : graftcalc::Quality::Good;
        p.pieces.push_back(std::move(chart));
    }

    if (!doc.at("gluing").is_array()) throw DocError("$.gluing: expected an array");
    i = 0;
    for (const json& pair : doc.at("gluing")) {
        std::string gpath = "$.gluing[" + std::to_string(i++) + "]";
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            throw DocError(gpath + ": expected a pair of boundary refs");
        p.gluing.push_back({parse_ref(pair[0].get<std::string>(), gpath + "[0]"),
                            parse_ref(pair[1].get<std::string>(), gpath + "[1]")});
    }

    if (doc.contains("loops")) {
        if (!doc.at("loops").is_array()) throw DocError("$.loops: expected an array");
        i = 0;
        for (const json& loop : doc.at("loops")) {
            std::string lpath = "$.loops[" + std::to_string(i++) + "]";
            check_keys(loop, lpath, {"word", "carrier"}, {"word", "carrier"});
            graftcalc::AdmissibleLoop al;
            try {
                al.word = schottky::parse_word(get_string(loop, lpath, "word"), p.group.rank);
            } catch (const schottky::Error& e) {
                throw DocError(lpath + ".word: " + e.what());
            }
            if (!loop.at("carrier").is_array())
                throw DocError(lpath + ".carrier: expected an array");
            int j = 0;
            for (const json& arc : loop.at("carrier")) {
                std::string apath = lpath + ".carrier[" + std::to_string(j++) + "]";
                if (!arc.is_array() || arc.size() != 3 || !arc[0].is_string() ||
                    !arc[1].is_string() || !arc[2].is_string())
                    throw DocError(apath + ": expected [piece, b_in, b_out]");
                al.carrier.push_back(graftcalc::CarrierArc{
                    arc[0].get<std::string>(), arc[1].get<std::string>(),
                    arc[2].get<std::string>()});
            }
            p.loops.push_back(std::move(al));
        }
    }
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DocError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace docio
