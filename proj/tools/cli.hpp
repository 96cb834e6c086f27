#pragma once

// Subcommand front end. Documents are read from stdin (or --input) and
// results written to stdout; exit 0 on success, 1 on invalid input, 2 on
// usage errors.

#include <sqft/fixtures.hpp>
#include <sqft/heegaard.hpp>
#include <sqft/io.hpp>
#include <sqft/quad_surface.hpp>
#include <sqft/sutures.hpp>
#include <sqft/tape_graph.hpp>
#include <sqft/twisted_module.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sqft::cli {

/// Bad option value detected after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;
    bool json = false;
    bool dot = false;
    std::string sutures;
    std::optional<unsigned> seed;
    std::string edge, a, b, dir, op, name, sign = "+";
    int middle = 1;
    int slot = 0;
    int domain = 0;
};

namespace detail {

inline Slot parse_slot(const std::string& text, const std::string& flag)
{
    Slot s;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> s.square >> comma >> s.side) || comma != ',' || !in.eof()) {
        throw UsageError(flag + " expects square,side (for example 0,2); got '" + text + "'");
    }
    return s;
}

inline int parse_sign(const std::string& text, const std::string& flag)
{
    if (text == "+" || text == "1" || text == "plus") {
        return 1;
    }
    if (text == "-" || text == "0" || text == "minus") {
        return -1;
    }
    throw UsageError(flag + " expects + or -; got '" + text + "'");
}

inline std::string slot_text(const Slot& s) { return "(" + std::to_string(s.square) + "," + std::to_string(s.side) + ")"; }

class Context {
public:
    Context(const Options& o, std::istream& in, std::ostream& out) : opt(o), in_(in), out(out) {}

    io::Json read_json()
    {
        std::string text;
        std::string source = "stdin";
        if (!opt.input.empty()) {
            std::ifstream f(opt.input);
            if (!f) {
                throw UsageError("cannot open " + opt.input);
            }
            text.assign(std::istreambuf_iterator<char>(f), {});
            source = opt.input;
        } else {
            text.assign(std::istreambuf_iterator<char>(in_), {});
        }
        return io::parse_text(text, source);
    }

    io::Document document()
    {
        auto d = io::document_from_json(read_json());
        validate(d.surface).raise_if_failed("invalid quad surface");
        return d;
    }

    QuadSurface surface() { return document().surface; }

    SutureSystem sutures(const io::Document& d) const
    {
        if (opt.sutures.empty()) {
            if (d.sutures.size() == 1) {
                return d.sutures.begin()->second;
            }
            throw UsageError(d.sutures.empty() ? "document carries no sutures"
                                               : "document carries several suture systems; choose one with --sutures");
        }
        auto it = d.sutures.find(opt.sutures);
        if (it == d.sutures.end()) {
            std::string names;
            for (const auto& [n, s] : d.sutures) {
                names += " " + n;
            }
            throw UsageError("no suture system named '" + opt.sutures + "'; available:" + names);
        }
        return it->second;
    }

    void emit(const io::Json& j) { out << j.dump(2) << "\n"; }

    const Options& opt;

private:
    std::istream& in_;

public:
    std::ostream& out;
};

inline void print_stats(Context& c, const OccupiedStats& st, const QuadSurface& qs)
{
    if (c.opt.json) {
        c.emit({{"squares", qs.square_count},
                {"vacua", qs.vacuum_count},
                {"euler_char", st.euler_char},
                {"vertex_pairs", st.vertex_pair_count},
                {"index", st.index},
                {"boundary_components", st.boundary_component_count},
                {"h1_rank", st.h1_rank},
                {"components", st.component_count}});
        return;
    }
    c.out << "squares              " << qs.square_count << "\n"
          << "vacua                " << qs.vacuum_count << "\n"
          << "euler_char           " << st.euler_char << "\n"
          << "vertex_pairs         " << st.vertex_pair_count << "\n"
          << "index                " << st.index << "\n"
          << "boundary_components  " << st.boundary_component_count << "\n"
          << "h1_rank              " << st.h1_rank << "\n"
          << "components           " << st.component_count << "\n";
}

inline int report_diagnostics(Context& c, const Diagnostics& d)
{
    if (d.ok()) {
        c.out << "ok\n";
        return 0;
    }
    c.out << "invalid\n";
    for (const auto& m : d.messages) {
        c.out << "  " << m << "\n";
    }
    return 1;
}

inline std::string walk_text(const BoundaryWalk& w)
{
    if (w.isolated_vertex) {
        return "isolated vertex " + std::to_string(*w.isolated_vertex);
    }
    std::string s;
    for (const auto& st : w.steps) {
        s += (s.empty() ? "" : " ") + std::to_string(st.from_halfedge) + "->" + std::to_string(st.to_halfedge) +
             (st.breakpoint ? "*" : "");
    }
    return s;
}

inline std::string region_text(const HeegaardDiagram& h, std::size_t r)
{
    const auto& reg = h.regions[r];
    return "v" + std::to_string(h.spine.vertices[reg.vertex].id) + ".w" + std::to_string(reg.position);
}

inline io::Json coef_json(const HeegaardDiagram& h, const std::vector<Integer>& coef)
{
    io::Json j = io::Json::object();
    for (std::size_t r = 0; r < coef.size(); ++r) {
        if (coef[r] != 0) {
            j[region_text(h, r)] = coef[r].str();
        }
    }
    return j;
}

inline std::string coef_text(const HeegaardDiagram& h, const std::vector<Integer>& coef)
{
    std::string s;
    for (std::size_t r = 0; r < coef.size(); ++r) {
        if (coef[r] != 0) {
            s += (s.empty() ? "" : " ") + region_text(h, r) + "=" + coef[r].str();
        }
    }
    return s.empty() ? "0" : s;
}

// ---- surface

inline int surface_cmd(Context& c, const std::string& sub)
{
    if (sub == "reconstruct") {
        auto g = io::tape_graph_from_json(c.read_json());
        c.emit(io::to_json(reconstruct(g)));
        return 0;
    }
    if (sub == "validate") {
        return report_diagnostics(c, validate(io::document_from_json(c.read_json()).surface));
    }
    auto qs = c.surface();
    if (sub == "stats") {
        print_stats(c, stats(qs), qs);
    } else if (sub == "spine") {
        auto g = spine(qs, parse_sign(c.opt.sign, "--sign"));
        if (c.opt.dot) {
            c.out << to_dot(g);
        } else {
            c.emit(io::to_json(g));
        }
    } else if (sub == "slide") {
        if (c.opt.dir != "cw" && c.opt.dir != "ccw") {
            throw UsageError("--dir expects cw or ccw");
        }
        auto r = diagonal_slide(qs, parse_slot(c.opt.edge, "--edge"),
                                c.opt.dir == "cw" ? SlideDirection::cw : SlideDirection::ccw);
        c.emit(io::to_json(r.surface));
    } else if (sub == "glue") {
        c.emit(io::to_json(standard_glue(qs, parse_slot(c.opt.a, "--a"), parse_slot(c.opt.b, "--b"))));
    } else if (sub == "cut") {
        c.emit(io::to_json(cut_internal_edge(qs, parse_slot(c.opt.edge, "--edge"))));
    }
    return 0;
}

// ---- tape

inline int tape_cmd(Context& c, const std::string& sub)
{
    auto g = io::tape_graph_from_json(c.read_json());
    validate(g).raise_if_failed("invalid tape graph");
    if (sub == "boundary") {
        auto walks = boundary_components(g);
        if (c.opt.json) {
            io::Json arr = io::Json::array();
            for (const auto& w : walks) {
                arr.push_back({{"walk", walk_text(w)}, {"breakpoints", w.breakpoint_count()}});
            }
            c.emit(arr);
        } else {
            for (std::size_t i = 0; i < walks.size(); ++i) {
                c.out << "component " << i << ": " << walk_text(walks[i]) << "  (breakpoints "
                      << walks[i].breakpoint_count() << ")\n";
            }
        }
        if (c.opt.dot) {
            c.out << to_dot(g);
        }
    } else if (sub == "spine-check") {
        auto r = check_spine(g);
        if (r.is_spine) {
            c.out << "spine\n";
            return 0;
        }
        c.out << "not a spine\n";
        if (!r.oriented) {
            c.out << "  tape graph has flipped edges\n";
        }
        if (r.witness) {
            c.out << "  boundary component " << *r.witness << " has no breakpoint: " << walk_text(r.walks[*r.witness])
                  << "\n";
        }
        return 1;
    } else if (sub == "canon") {
        c.out << canonical_signature(g) << "\n";
    }
    return 0;
}

// ---- suture

inline int suture_cmd(Context& c, const std::string& sub)
{
    auto d = c.document();
    auto s = c.sutures(d);
    if (sub == "validate") {
        return report_diagnostics(c, validate(s));
    }
    validate(s).raise_if_failed("invalid suture system");
    if (sub == "euler") {
        long e = euler_class(s);
        if (c.opt.json) {
            c.emit({{"euler_class", e}, {"trivial", is_trivial(s)}, {"confining", is_confining(s)}});
        } else {
            c.out << e << "\n";
        }
    } else if (sub == "element" || sub == "reduce") {
        SutureReducer r(c.opt.seed);
        auto v = r.element(s);
        if (c.opt.json) {
            auto j = io::to_json(v);
            if (sub == "reduce") {
                j["bypasses"] = r.bypass_count();
                j["cache_hits"] = r.cache_hits();
            }
            c.emit(j);
        } else {
            c.out << to_string(v) << "\n";
            if (sub == "reduce") {
                c.out << "bypasses " << r.bypass_count() << ", cache hits " << r.cache_hits() << "\n";
            }
        }
    } else if (sub == "bypass") {
        BypassDirection dir;
        if (c.opt.dir == "up") {
            dir = BypassDirection::up;
        } else if (c.opt.dir == "down") {
            dir = BypassDirection::down;
        } else {
            throw UsageError("--dir expects up or down");
        }
        auto t = bypass(s, {parse_slot(c.opt.edge, "--edge"), c.opt.middle}, dir);
        io::Document outd{d.name, d.surface, {}};
        std::string base = c.opt.sutures.empty() ? d.sutures.begin()->first : c.opt.sutures;
        outd.sutures.emplace(c.opt.name.empty() ? base + "-" + c.opt.dir : c.opt.name, t);
        c.emit(io::to_json(outd));
    }
    return 0;
}

// ---- sqft

inline int sqft_cmd(Context& c, const std::string& sub)
{
    if (sub == "module") {
        auto qs = c.surface();
        auto m = module_of(qs);
        if (c.opt.json) {
            io::Json graded = io::Json::object();
            for (int e = -m.index; e <= m.index; e += 2) {
                graded[std::to_string(e)] = m.graded_rank(e).str();
            }
            c.emit({{"index", m.index}, {"rank", m.rank().str()}, {"lattice", m.lattice->labels()}, {"graded_ranks", graded}});
        } else {
            c.out << "index " << m.index << "\nrank " << m.rank() << "\nlattice rank " << m.lattice->rank() << "\n";
            c.out << "graded ranks";
            for (int e = -m.index; e <= m.index; e += 2) {
                c.out << " " << e << ":" << m.graded_rank(e);
            }
            c.out << "\n";
        }
        return 0;
    }
    auto j = c.read_json();
    if (sub == "op" && j.is_object() && j.contains("support")) {
        // mod-2 input, as printed by `suture element --json`
        auto v = io::mod2_from_json(j);
        int sign = parse_sign(c.opt.sign, "--sign");
        Mod2Vector r;
        if (c.opt.op == "create") {
            r = create(v, sign);
        } else if (c.opt.op == "annihilate") {
            r = annihilate(v, sign > 0 ? 1 : 0, c.opt.slot);
        } else {
            throw UsageError("--op expects create or annihilate");
        }
        if (c.opt.json) {
            c.emit(io::to_json(r));
        } else {
            c.out << to_string(r) << "\n";
        }
        return 0;
    }
    auto v = io::vector_from_json(j);
    if (sub == "reduce") {
        auto r = reduce_module(v);
        if (c.opt.json) {
            c.emit(io::to_json(r));
        } else {
            c.out << to_string(r) << "\n";
        }
    } else if (sub == "op") {
        int sign = parse_sign(c.opt.sign, "--sign");
        if (c.opt.op == "create") {
            c.emit(io::to_json(create(v, sign)));
        } else if (c.opt.op == "annihilate") {
            auto r = annihilate(v, sign > 0 ? 1 : 0, c.opt.slot);
            if (c.opt.json) {
                c.emit(io::to_json(r));
            } else {
                c.out << to_string(r) << "\n";
            }
        } else {
            throw UsageError("--op expects create or annihilate");
        }
    }
    return 0;
}

// ---- heegaard

inline int heegaard_cmd(Context& c, const std::string& sub)
{
    auto qs = c.surface();
    auto h = synth(qs);
    if (sub == "synth") {
        auto st = diagram_stats(h);
        auto internal = h.internal_regions();
        if (c.opt.json) {
            c.emit({{"genus", st.genus},
                    {"euler_char", st.euler_char},
                    {"boundary_components", st.boundary_components},
                    {"curves", h.curve_count},
                    {"intersection_points", st.intersection_points},
                    {"regions", h.regions.size()},
                    {"internal_regions", internal.size()}});
        } else {
            c.out << "genus " << st.genus << "\nboundary components " << st.boundary_components << "\ncurves "
                  << h.curve_count << " alpha, " << h.curve_count << " beta\nintersection points "
                  << st.intersection_points << "\nregions " << h.regions.size() << " (" << internal.size()
                  << " internal)\n";
        }
        if (c.opt.dot) {
            c.out << to_dot(h.spine);
        }
    } else if (sub == "domains") {
        auto domains = periodic_basis(h, h1_basis(qs));
        if (c.opt.dot) {
            if (c.opt.domain < 0 || c.opt.domain >= static_cast<int>(domains.size())) {
                throw UsageError("--domain out of range; the basis has " + std::to_string(domains.size()) + " domains");
            }
            std::map<std::pair<std::size_t, std::size_t>, long> labels;
            for (std::size_t r = 0; r < h.regions.size(); ++r) {
                labels[{h.regions[r].vertex, h.regions[r].position}] =
                    static_cast<long>(domains[c.opt.domain].coef[r]);
            }
            c.out << to_dot(h.spine, labels);
        } else if (c.opt.json) {
            io::Json arr = io::Json::array();
            for (const auto& d : domains) {
                arr.push_back({{"edge", d.loop_edge}, {"periodic", is_periodic(h, d.coef)}, {"coef", coef_json(h, d.coef)}});
            }
            c.emit(arr);
        } else {
            c.out << domains.size() << " periodic domains\n";
            for (const auto& d : domains) {
                c.out << "D_e" << d.loop_edge << ": " << coef_text(h, d.coef) << "\n";
            }
        }
    } else if (sub == "admissible") {
        auto r = is_admissible_raw(h, periodic_basis(h, h1_basis(qs)));
        if (c.opt.json) {
            c.emit({{"admissible", r.admissible}, {"witness", coef_json(h, r.witness)}});
        } else if (r.admissible) {
            c.out << "admissible\n";
        } else {
            c.out << "inadmissible\nwitness " << coef_text(h, r.witness) << "\n";
        }
    } else if (sub == "zeta") {
        auto arcs = zeta_arcs(h);
        auto cert = admissibility_certificate(h, arcs);
        c.out << arcs.size() << " zeta arcs\n";
        for (const auto& a : arcs) {
            c.out << "  half-edge " << a.halfedge << " at v" << h.spine.vertices[a.vertex].id << " position "
                  << a.position << ", ends in w" << a.terminal_wedge << "\n";
        }
        c.out << "disjoint wedge " << (disjoint_wedge(h, arcs) ? "yes" : "no") << "\ncertificate "
              << (cert.ok ? "ok" : "failed") << "\n";
        for (const auto& f : cert.failures) {
            c.out << "  " << f << "\n";
        }
        c.out << "intersections after isotopy " << perturbed_intersections(h, arcs) << "\n";
    } else if (sub == "decompose" || sub == "sfh") {
        auto r = sfh(qs);
        if (sub == "decompose") {
            for (std::size_t k = 0; k < r.trace.size(); ++k) {
                const auto& s = r.trace[k];
                c.out << "step " << k << ": cut " << slot_text(s.edge) << " at vertex " << s.vertex << " (degree "
                      << s.degree << "), iota " << (s.direct_summand ? "direct summand" : "not a direct summand")
                      << ", certificate " << (s.certificate.ok ? "ok" : "failed") << "\n";
            }
            c.out << "terminal surface " << io::to_json(r.terminal).dump() << "\n";
        } else if (c.opt.json) {
            io::Json graded = io::Json::object();
            for (const auto& [e, n] : r.graded_ranks) {
                graded[std::to_string(e)] = n.str();
            }
            c.emit({{"rank", r.module.rank().str()}, {"graded_ranks", graded}, {"steps", r.trace.size()}});
        } else {
            c.out << "rank " << r.module.rank() << "\ngraded ranks";
            for (const auto& [e, n] : r.graded_ranks) {
                c.out << " " << e << ":" << n;
            }
            c.out << "\n";
        }
    }
    return 0;
}

inline int fixture_cmd(Context& c, const std::string& sub, const std::string& name)
{
    if (sub == "list") {
        for (const auto& n : fixture_names()) {
            c.out << n << "\n";
        }
        return 0;
    }
    if (name.empty()) {
        throw UsageError("fixture show needs a fixture name");
    }
    try {
        c.emit(io::to_json(fixture(name)));
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    return 0;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quadrangulated surfaces, sutures and Heegaard diagrams", "sqft"};
    app.require_subcommand(1);
    Options o;
    app.add_option("-i,--input", o.input, "read the input document from a file instead of stdin");

    std::function<int(detail::Context&)> action;
    auto leaf = [&](CLI::App* group, const std::string& sub, const std::string& help,
                    std::function<int(detail::Context&, const std::string&)> fn) {
        auto* cmd = group->add_subcommand(sub, help);
        cmd->add_flag("--json", o.json, "JSON output");
        cmd->callback([&action, fn, sub]() { action = [fn, sub](detail::Context& c) { return fn(c, sub); }; });
        return cmd;
    };

    auto* surf = app.add_subcommand("surface", "quad surfaces")->require_subcommand(1);
    leaf(surf, "validate", "check a quad surface", detail::surface_cmd);
    leaf(surf, "stats", "chi, N, I, boundary and H1 ranks", detail::surface_cmd);
    auto* sp = leaf(surf, "spine", "tape-graph spine", detail::surface_cmd);
    sp->add_flag("--dot", o.dot, "emit DOT");
    sp->add_option("--sign", o.sign, "+ or - spine");
    leaf(surf, "reconstruct", "quad surface from a tape-graph spine", detail::surface_cmd);
    auto* sl = leaf(surf, "slide", "diagonal slide", detail::surface_cmd);
    sl->add_option("--edge", o.edge, "one slot of the internal edge, square,side")->required();
    sl->add_option("--dir", o.dir, "cw or ccw")->required();
    auto* gl = leaf(surf, "glue", "standard gluing of two boundary sides", detail::surface_cmd);
    gl->add_option("--a", o.a, "first slot")->required();
    gl->add_option("--b", o.b, "second slot")->required();
    auto* ct = leaf(surf, "cut", "cut an internal edge", detail::surface_cmd);
    ct->add_option("--edge", o.edge, "one slot of the edge")->required();

    auto* tape = app.add_subcommand("tape", "tape graphs")->require_subcommand(1);
    leaf(tape, "boundary", "boundary components of the thickening", detail::tape_cmd)
        ->add_flag("--dot", o.dot, "also emit DOT");
    leaf(tape, "spine-check", "whether the graph is a spine", detail::tape_cmd);
    leaf(tape, "canon", "canonical signature", detail::tape_cmd);

    auto* sut = app.add_subcommand("suture", "suture systems")->require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> suture_subs = {
        {"validate", "check a suture system"},
        {"euler", "Euler class"},
        {"element", "mod-2 suture element"},
        {"reduce", "mod-2 suture element with reduction counters"},
        {"bypass", "bypass surgery"},
    };
    for (const auto& [sub, help] : suture_subs) {
        auto* cmd = leaf(sut, sub, help, detail::suture_cmd);
        cmd->add_option("--sutures", o.sutures, "name of the suture system in the document");
        if (sub == "element" || sub == "reduce") {
            cmd->add_option_function<unsigned>("--seed", [&o](unsigned v) { o.seed = v; }, "randomized reduction order");
        }
        if (sub == "bypass") {
            cmd->add_option("--edge", o.edge, "one slot of the internal edge")->required();
            cmd->add_option("--middle", o.middle, "middle crossing index");
            cmd->add_option("--dir", o.dir, "up or down")->required();
            cmd->add_option("--name", o.name, "name of the resulting system");
        }
    }

    auto* sq = app.add_subcommand("sqft", "twisted SQFT modules")->require_subcommand(1);
    leaf(sq, "module", "module of a quad surface", detail::sqft_cmd);
    auto* op = leaf(sq, "op", "creation and annihilation", detail::sqft_cmd);
    op->add_option("--op", o.op, "create or annihilate")->required();
    op->add_option("--sign", o.sign, "+ or -");
    op->add_option("--slot", o.slot, "bit slot for annihilation");
    leaf(sq, "reduce", "mod-2 reduction of a vector", detail::sqft_cmd);

    auto* hg = app.add_subcommand("heegaard", "Heegaard diagrams")->require_subcommand(1);
    leaf(hg, "synth", "diagram statistics", detail::heegaard_cmd)->add_flag("--dot", o.dot, "also emit DOT");
    auto* dm = leaf(hg, "domains", "periodic domain basis", detail::heegaard_cmd);
    dm->add_flag("--dot", o.dot, "DOT of the spine with one domain's coefficients");
    dm->add_option("--domain", o.domain, "domain shown with --dot");
    leaf(hg, "admissible", "admissibility of the synthesized diagram", detail::heegaard_cmd);
    leaf(hg, "zeta", "isotoped beta curves and the admissibility certificate", detail::heegaard_cmd);
    leaf(hg, "decompose", "decomposition sequence", detail::heegaard_cmd);
    leaf(hg, "sfh", "sutured Floer homology module", detail::heegaard_cmd);

    std::string fixture_name;
    auto* fx = app.add_subcommand("fixture", "named fixtures")->require_subcommand(1);
    leaf(fx, "list", "list fixtures", [&](detail::Context& c, const std::string& s) {
        return detail::fixture_cmd(c, s, fixture_name);
    });
    leaf(fx, "show", "print a fixture document", [&](detail::Context& c, const std::string& s) {
        return detail::fixture_cmd(c, s, fixture_name);
    })->add_option("name", fixture_name, "fixture name")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    detail::Context ctx(o, in, out);
    try {
        return action(ctx);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace sqft::cli
