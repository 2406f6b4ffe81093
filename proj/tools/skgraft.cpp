#include "brancov/brancov.hpp"
#include "brancov/mapexpr.hpp"
#include "docio/docio.hpp"
#include "foldgraph/foldgraph.hpp"
#include "graftcalc/graftcalc.hpp"
#include "multiarc/multiarc.hpp"
#include "render/svg.hpp"
#include "schottky/schottky.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw docio::DocError("cannot write file: " + path);
    out << content;
}

struct GlobalOpts {
    double tol = moebius::kDefaultTol;
    bool tol_set = false;
    std::size_t max_words = schottky::kDefaultWordCap;
    int depth = 8;
    std::string out;
    std::string format = "text";
};

int cmd_verify(const GlobalOpts& g, const std::string& path, int max_len) {
    docio::SchottkyDoc doc = docio::parse_schottky_doc(docio::read_file(path));
    double tol = g.tol_set ? g.tol : doc.tol;

    std::ostringstream report;
    schottky::SchottkyGroup group;
    try {
        group = schottky::build(doc.pairs, doc.fuchsian, tol);
    } catch (const schottky::Error& e) {
        report << "FAIL build: " << e.what() << "\n";
        std::cout << report.str();
        return 1;
    }
    report << "group: rank " << group.rank << (group.fuchsian ? " fuchsian" : "") << "\n";
    report << "PASS build: " << 2 * group.rank << " circles in ping-pong position\n";

    schottky::LoxodromicReport lox =
        schottky::all_loxodromic_check(group, max_len, core::Exec::parallel, g.max_words);
    report << (lox.all_loxodromic() ? "PASS" : "FAIL") << " all-loxodromic: max_len=" << max_len
           << " words=" << lox.words_checked << " violations=" << lox.violations.size()
           << " min_tr2_gap=" << fmt(lox.min_dist_tr2) << "\n";
    for (const auto& v : lox.violations)
        report << "  violation: '" << schottky::to_string(v.word)
               << "' class=" << moebius::to_string(v.cls) << "\n";
    std::cout << report.str();
    return lox.all_loxodromic() ? 0 : 1;
}

int cmd_limitset(const GlobalOpts& g, const std::string& path) {
    docio::SchottkyDoc doc = docio::parse_schottky_doc(docio::read_file(path));
    double tol = g.tol_set ? g.tol : doc.tol;
    schottky::SchottkyGroup group = schottky::build(doc.pairs, doc.fuchsian, tol);
    schottky::LimitSetResult result =
        schottky::limit_set_approx(group, g.depth, core::Exec::parallel, g.max_words);

    if (g.format == "csv") {
        std::ostringstream csv;
        for (const auto& p : result.points) {
            moebius::Complex z = p.to_complex();
            csv << fmt(z.real()) << "," << fmt(z.imag()) << "\n";
        }
        write_output(g.out, csv.str());
        return 0;
    }
    if (g.format == "svg") {
        render::SvgCanvas canvas;
        const schottky::DiskTree& tree = result.tree;
        for (int level = 2; level <= tree.depth(); ++level)
            for (std::size_t i = tree.level_begin(level); i < tree.level_end(level); ++i)
                canvas.circle(tree.nodes[i].disk.center, tree.nodes[i].disk.radius, "none",
                              render::depth_color(level), 0.0, 0.30);
        for (const auto& pair : group.pairing) {
            canvas.circle(pair.src.center, pair.src.radius, "black", "none", 1.5);
            canvas.circle(pair.dst.center, pair.dst.radius, "black", "none", 1.5);
        }
        for (const auto& p : result.points)
            canvas.dot(p.to_complex(), 1.5, "black");
        write_output(g.out, canvas.finish());
        return 0;
    }
    std::ostringstream text;
    text << "rank " << group.rank << " depth " << g.depth << ": " << result.points.size()
         << " limit points, " << result.tree.nodes.size() << " disks\n";
    write_output(g.out, text.str());
    return 0;
}

int cmd_fold(const std::string& path, bool expect_rose) {
    foldgraph::LabeledGraph graph = docio::parse_graph_doc(docio::read_file(path));
    foldgraph::DecomposeResult res = foldgraph::decompose_to_rose(graph);
    std::ostringstream out;
    for (const foldgraph::FoldEvent& e : res.trace.events)
        out << "FOLD v=" << e.vertex << " keep=" << e.edge_keep << " drop=" << e.edge_drop
            << " label=" << foldgraph::to_string(e.label) << "\n";
    if (res.is_iso)
        out << "ISO rose(" << graph.rank << ")\n";
    else
        out << "NOT-ROSE rank=" << graph.euler_rank() << "\n";
    std::cout << out.str();
    return (!res.is_iso && expect_rose) ? 1 : 0;
}

std::string multiarc_svg(const multiarc::ChordDiagram& d) {
    const int n = d.edge_count();
    render::SvgCanvas canvas;
    std::vector<moebius::Complex> corners;
    for (int i = 0; i <= n; ++i) {
        double a = 2.0 * M_PI * double(i) / double(n) + M_PI / 2.0;
        corners.push_back(8.0 * moebius::Complex(std::cos(a), std::sin(a)));
    }
    std::vector<moebius::Complex> marked;
    for (int i = 0; i < n; ++i) {
        canvas.segment(corners[std::size_t(i)], corners[std::size_t(i) + 1], "black", 1.5);
        int delta = d.degrees[std::size_t(i)];
        for (int k = 0; k < delta; ++k) {
            double t = double(k + 1) / double(delta + 1);
            moebius::Complex p =
                corners[std::size_t(i)] + t * (corners[std::size_t(i) + 1] - corners[std::size_t(i)]);
            marked.push_back(p);
            canvas.dot(p, 3.0, "black");
        }
    }
    for (auto [a, b] : d.chords)
        canvas.segment(marked[std::size_t(a)], marked[std::size_t(b)],
                       render::depth_color(1), 1.5);
    return canvas.finish();
}

int cmd_multiarc(const std::string& degrees_arg, const std::string& svg_path) {
    multiarc::DegreeTuple degrees;
    std::istringstream in(degrees_arg);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            degrees.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw docio::DocError("--degrees: bad integer '" + tok + "'");
        }
    }
    if (degrees.empty()) throw docio::DocError("--degrees: empty tuple");

    if (!multiarc::feasible(degrees)) {
        std::cerr << "INFEASIBLE: needs even sum and 2*max <= sum\n";
        return 1;
    }
    multiarc::ChordDiagram d = multiarc::construct(degrees);
    std::cout << "chords: " << d.chords.size() << "\n" << multiarc::chords_text(d);
    if (!svg_path.empty()) write_output(svg_path, multiarc_svg(d));
    return 0;
}

int cmd_graft_verify(const std::string& path) {
    graftcalc::GraftingPresentation p =
        docio::parse_presentation_doc(docio::read_file(path));
    std::vector<graftcalc::CheckResult> checks = graftcalc::verify_presentation(p);
    std::ostringstream out;
    bool all_pass = true;
    for (const graftcalc::CheckResult& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all_pass = all_pass && c.pass;
    }
    out << "genus: " << p.genus << "\n";
    for (const graftcalc::HoledSphereChart& piece : p.pieces) {
        out << "piece " << piece.support << ": degrees [";
        for (std::size_t i = 0; i < piece.boundaries.size(); ++i)
            out << (i ? "," : "") << piece.boundaries[i].degree;
        out << "] " << graftcalc::to_string(piece.quality);
        try {
            out << " cover " << graftcalc::cover_degree(piece);
        } catch (const graftcalc::Error&) {
            out << " cover ?";
        }
        out << "\n";
    }
    out << "|A|: " << p.loops.size() << "\n";
    std::cout << out.str();
    return all_pass ? 0 : 1;
}

std::vector<moebius::SpherePoint> parse_marked(const std::string& arg) {
    std::vector<moebius::SpherePoint> out;
    if (arg.empty()) return out;
    std::istringstream in(arg);
    std::string tok;
    while (std::getline(in, tok, ';')) {
        if (tok == "inf" || tok == "infinity") {
            out.push_back(moebius::SpherePoint::infinity());
            continue;
        }
        std::size_t comma = tok.find(',');
        if (comma == std::string::npos)
            throw docio::DocError("--marked: expected 'x,y' or 'inf', got '" + tok + "'");
        try {
            out.push_back(moebius::SpherePoint::from_complex(
                {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))}));
        } catch (const std::exception&) {
            throw docio::DocError("--marked: bad number in '" + tok + "'");
        }
    }
    return out;
}

int cmd_preimage(const GlobalOpts& g, const std::string& map_expr, const std::string& circle_arg,
                 int samples, const std::string& marked_arg) {
    brancov::RationalMap f = brancov::parse_map(map_expr);

    double cx = 0, cy = 0, r = 1;
    if (std::sscanf(circle_arg.c_str(), "%lf,%lf,%lf", &cx, &cy, &r) != 3 || r <= 0)
        throw docio::DocError("--circle: expected cx,cy,r with r > 0");

    std::vector<moebius::SpherePoint> marked = parse_marked(marked_arg);
    brancov::LoopTrace loop = brancov::circle_trace({cx, cy}, r, samples);
    brancov::PreimageResult res = brancov::preimage_loop(f, loop);
    std::vector<brancov::LoopTrace> essential = brancov::essential_part(res.components, marked);

    std::ostringstream out;
    out << "map degree: " << f.degree() << "\n";
    out << "components: " << res.components.size() << "\n";
    for (std::size_t i = 0; i < res.components.size(); ++i) {
        const brancov::LoopTrace& comp = res.components[i];
        out << "component " << i + 1 << ": samples=" << comp.points.size()
            << " closure=" << fmt(brancov::closure_error(comp));
        bool inside = false, outside = false;
        for (const moebius::SpherePoint& mp : marked) {
            if (mp.is_infinity()) {
                out << " winding(inf)=outside";
                outside = true;
                continue;
            }
            moebius::Complex a = mp.to_complex();
            int w = brancov::winding_number(comp, a);
            out << " winding(" << fmt(a.real()) << "," << fmt(a.imag()) << ")=" << w;
            (w != 0 ? inside : outside) = true;
        }
        if (!marked.empty())
            out << " essential=" << ((inside && outside) ? "yes" : "no");
        out << "\n";
    }
    out << "essential part: " << essential.size() << " of " << res.components.size() << "\n";
    std::cout << out.str();

    if (g.format == "csv") {
        std::ostringstream csv;
        csv << "component,x,y\n";
        for (std::size_t i = 0; i < res.components.size(); ++i)
            for (const moebius::SpherePoint& p : res.components[i].points) {
                moebius::Complex z = p.to_complex();
                csv << i + 1 << "," << fmt(z.real()) << "," << fmt(z.imag()) << "\n";
            }
        write_output(g.out, csv.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schottky groups, foldings, multiarcs, grafting bookkeeping and "
                 "branched-cover preimage checks"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--tol", g.tol, "numeric tolerance")->each([&](const std::string&) {
        g.tol_set = true;
    });
    app.add_option("--max-words", g.max_words, "cap on enumerated words / tree nodes");
    app.add_option("--depth", g.depth, "disk-tree depth");
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--format", g.format, "text|csv|svg")
        ->check(CLI::IsMember({"text", "csv", "svg"}));

    std::string in_path, degrees_arg, svg_path, map_expr, circle_arg, marked_arg;
    int max_len = 4, samples = 256;
    bool expect_rose = false;

    CLI::App* verify = app.add_subcommand("verify", "build a Schottky group and check ping-pong");
    verify->add_option("input", in_path, "schottky document")->required();
    verify->add_option("--max-len", max_len, "word length for the loxodromic sweep");

    CLI::App* limitset = app.add_subcommand("limitset", "nested-disk limit set approximation");
    limitset->add_option("input", in_path, "schottky document")->required();

    CLI::App* fold = app.add_subcommand("fold", "Stallings folding to the rose");
    fold->add_option("input", in_path, "graph document")->required();
    fold->add_flag("--expect-rose", expect_rose, "exit 1 unless the graph folds to the rose");

    CLI::App* arc = app.add_subcommand("multiarc", "non-crossing multiarc construction");
    arc->add_option("--degrees", degrees_arg, "comma-separated arc counts, e.g. 1,2,3")
        ->required();
    arc->add_option("--svg", svg_path, "write the polygon + chords as SVG");

    CLI::App* graft = app.add_subcommand("graft", "grafting presentations");
    CLI::App* graft_verify = graft->add_subcommand("verify", "verify a presentation document");
    graft_verify->add_option("input", in_path, "presentation document")->required();
    graft->require_subcommand(1);

    CLI::App* preimage = app.add_subcommand("preimage", "loop preimages under a rational map");
    preimage->add_option("--map", map_expr, "rational map, e.g. \"z^2\"")->required();
    preimage->add_option("--circle", circle_arg, "base loop cx,cy,r")->required();
    preimage->add_option("--samples", samples, "samples along the loop");
    preimage->add_option("--marked", marked_arg, "marked points \"x,y;inf\"");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(g, in_path, max_len);
        if (limitset->parsed()) return cmd_limitset(g, in_path);
        if (fold->parsed()) return cmd_fold(in_path, expect_rose);
        if (arc->parsed()) return cmd_multiarc(degrees_arg, svg_path);
        if (graft->parsed()) return cmd_graft_verify(in_path);
        if (preimage->parsed()) return cmd_preimage(g, map_expr, circle_arg, samples, marked_arg);
    } catch (const docio::DocError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const brancov::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
