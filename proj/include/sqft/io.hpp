#pragma once

// JSON reading and writing for every library type. Readers report the JSON
// pointer of the first offending value.

#include <sqft/error.hpp>
#include <sqft/group_ring.hpp>
#include <sqft/quad_surface.hpp>
#include <sqft/sutures.hpp>
#include <sqft/tape_graph.hpp>
#include <sqft/twisted_module.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sqft::io {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what)
{
    throw ParseError((path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        fail(path, "missing field '" + key + "'");
    }
    return *it;
}

inline const Json& array(const Json& j, const std::string& path)
{
    if (!j.is_array()) {
        fail(path, "expected an array");
    }
    return j;
}

inline long long integer(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return j.get<long long>();
}

inline std::string text(const Json& j, const std::string& path)
{
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

inline std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }
inline std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }

inline std::pair<int, int> int_pair(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) {
        fail(path, "expected a pair [a, b]");
    }
    return {static_cast<int>(integer(j[0], at(path, 0))), static_cast<int>(integer(j[1], at(path, 1)))};
}

} // namespace detail

/// Parse text, reporting syntax errors by byte offset.
inline Json parse_text(const std::string& text, const std::string& source = "input")
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(source + ": byte " + std::to_string(e.byte) + ": malformed JSON");
    }
}

// ---- group-ring elements

inline Json to_json(const GroupRingElement& a)
{
    Json terms = Json::array();
    for (const auto& [exp, coef] : a.terms()) {
        Json c;
        if (coef >= std::numeric_limits<long long>::min() && coef <= std::numeric_limits<long long>::max()) {
            c = static_cast<long long>(coef);
        } else {
            c = coef.str();
        }
        terms.push_back({{"exp", exp}, {"coef", c}});
    }
    return {{"lattice", a.lattice()->labels()}, {"terms", terms}};
}

/// Reuses `lattice` when the labels agree, so that parsed elements share it.
inline GroupRingElement group_ring_from_json(const Json& j, const std::string& path = "",
                                             LatticePtr lattice = nullptr)
{
    std::vector<std::string> labels;
    const auto& lj = detail::array(detail::field(j, "lattice", path), detail::at(path, "lattice"));
    for (std::size_t i = 0; i < lj.size(); ++i) {
        labels.push_back(detail::text(lj[i], detail::at(detail::at(path, "lattice"), i)));
    }
    if (!lattice || lattice->labels() != labels) {
        lattice = make_lattice(labels);
    }
    GroupRingElement a(lattice);
    const std::string tp = detail::at(path, "terms");
    const auto& tj = detail::array(detail::field(j, "terms", path), tp);
    for (std::size_t i = 0; i < tj.size(); ++i) {
        const std::string p = detail::at(tp, i);
        const auto& ej = detail::array(detail::field(tj[i], "exp", p), detail::at(p, "exp"));
        if (ej.size() != labels.size()) {
            detail::fail(detail::at(p, "exp"), "exponent length differs from lattice rank");
        }
        Exponent e;
        for (std::size_t k = 0; k < ej.size(); ++k) {
            e.push_back(detail::integer(ej[k], detail::at(detail::at(p, "exp"), k)));
        }
        const auto& cj = detail::field(tj[i], "coef", p);
        Integer c;
        if (cj.is_string()) {
            try {
                c = Integer(cj.get<std::string>());
            } catch (const std::exception&) {
                detail::fail(detail::at(p, "coef"), "expected an integer");
            }
        } else {
            c = detail::integer(cj, detail::at(p, "coef"));
        }
        a.add_term(e, c);
    }
    return a;
}

// ---- tape graphs

inline Json to_json(const TapeGraph& g)
{
    Json vs = Json::array();
    for (const auto& v : g.vertices) {
        vs.push_back({{"id", v.id}, {"halfedges", v.halfedges}});
    }
    Json es = Json::array();
    for (const auto& [a, b] : g.edges) {
        es.push_back({a, b});
    }
    Json fs = Json::array();
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        fs.push_back(g.flipped(e));
    }
    return {{"vertices", vs}, {"edges", es}, {"flips", fs}};
}

inline TapeGraph tape_graph_from_json(const Json& j, const std::string& path = "")
{
    TapeGraph g;
    const std::string vp = detail::at(path, "vertices");
    const auto& vj = detail::array(detail::field(j, "vertices", path), vp);
    for (std::size_t i = 0; i < vj.size(); ++i) {
        const std::string p = detail::at(vp, i);
        TapeVertex v;
        v.id = static_cast<int>(detail::integer(detail::field(vj[i], "id", p), detail::at(p, "id")));
        const auto& hj = detail::array(detail::field(vj[i], "halfedges", p), detail::at(p, "halfedges"));
        for (std::size_t k = 0; k < hj.size(); ++k) {
            v.halfedges.push_back(static_cast<int>(detail::integer(hj[k], detail::at(detail::at(p, "halfedges"), k))));
        }
        g.vertices.push_back(std::move(v));
    }
    const std::string ep = detail::at(path, "edges");
    const auto& ej = detail::array(detail::field(j, "edges", path), ep);
    for (std::size_t i = 0; i < ej.size(); ++i) {
        g.edges.push_back(detail::int_pair(ej[i], detail::at(ep, i)));
    }
    if (j.contains("flips")) {
        const std::string fp = detail::at(path, "flips");
        const auto& fj = detail::array(j["flips"], fp);
        for (std::size_t i = 0; i < fj.size(); ++i) {
            if (!fj[i].is_boolean()) {
                detail::fail(detail::at(fp, i), "expected a boolean");
            }
            g.flips.push_back(fj[i].get<bool>());
        }
        if (std::none_of(g.flips.begin(), g.flips.end(), [](bool b) { return b; })) {
            g.flips.clear();
        }
    }
    return g;
}

// ---- quad surfaces

inline Json slot_json(const Slot& s) { return {s.square, s.side}; }

inline Json to_json(const QuadSurface& qs)
{
    Json gs = Json::array();
    for (const auto& [a, b] : qs.gluings) {
        gs.push_back({slot_json(a), slot_json(b)});
    }
    return {{"squares", qs.square_count}, {"gluings", gs}, {"vacua", qs.vacuum_count}};
}

inline Slot slot_from_json(const Json& j, const std::string& path)
{
    auto [a, b] = detail::int_pair(j, path);
    return {a, b};
}

inline QuadSurface quad_surface_from_json(const Json& j, const std::string& path = "")
{
    QuadSurface qs;
    qs.square_count = static_cast<int>(detail::integer(detail::field(j, "squares", path), detail::at(path, "squares")));
    if (j.contains("vacua")) {
        qs.vacuum_count = static_cast<int>(detail::integer(j["vacua"], detail::at(path, "vacua")));
    }
    if (qs.square_count < 0 || qs.vacuum_count < 0) {
        detail::fail(path, "square and vacuum counts must be non-negative");
    }
    if (j.contains("gluings")) {
        const std::string gp = detail::at(path, "gluings");
        const auto& gj = detail::array(j["gluings"], gp);
        for (std::size_t i = 0; i < gj.size(); ++i) {
            const std::string p = detail::at(gp, i);
            if (!gj[i].is_array() || gj[i].size() != 2) {
                detail::fail(p, "expected a pair of slots");
            }
            qs.gluings.push_back({slot_from_json(gj[i][0], detail::at(p, 0)), slot_from_json(gj[i][1], detail::at(p, 1))});
        }
    }
    return qs;
}

// ---- suture systems (cells only; the surface travels separately)

inline Json point_json(const PointRef& p) { return {p.side, p.index}; }

inline Json cell_json(const CellSutures& c, bool vacuum)
{
    Json loops = Json::array();
    for (const auto& l : c.loops) {
        if (l.parent < 0) {
            loops.push_back({{"parent", -1}, {"gap", point_json(l.gap)}});
        } else {
            loops.push_back({{"parent", l.parent}});
        }
    }
    if (vacuum) {
        return {{"loops", loops}};
    }
    Json m = Json::array();
    for (const auto& [a, b] : c.matching) {
        m.push_back({point_json(a), point_json(b)});
    }
    return {{"crossings", c.crossings}, {"matching", m}, {"loops", loops}};
}

inline Json to_json(const SutureSystem& s)
{
    Json sq = Json::array(), va = Json::array();
    for (const auto& c : s.squares) {
        sq.push_back(cell_json(c, false));
    }
    for (const auto& c : s.vacua) {
        va.push_back(cell_json(c, true));
    }
    return {{"squares", sq}, {"vacua", va}};
}

inline CellSutures cell_from_json(const Json& j, const std::string& path, bool vacuum)
{
    CellSutures c = vacuum ? vacuum_sutures() : CellSutures{};
    if (!vacuum) {
        const std::string cp = detail::at(path, "crossings");
        const auto& cj = detail::array(detail::field(j, "crossings", path), cp);
        if (cj.size() != 4) {
            detail::fail(cp, "expected four crossing counts");
        }
        for (std::size_t i = 0; i < 4; ++i) {
            c.crossings.push_back(static_cast<int>(detail::integer(cj[i], detail::at(cp, i))));
        }
        const std::string mp = detail::at(path, "matching");
        const auto& mj = detail::array(detail::field(j, "matching", path), mp);
        for (std::size_t i = 0; i < mj.size(); ++i) {
            const std::string p = detail::at(mp, i);
            if (!mj[i].is_array() || mj[i].size() != 2) {
                detail::fail(p, "expected a pair of points");
            }
            auto [s0, i0] = detail::int_pair(mj[i][0], detail::at(p, 0));
            auto [s1, i1] = detail::int_pair(mj[i][1], detail::at(p, 1));
            c.matching.push_back({{s0, i0}, {s1, i1}});
        }
    } else if (!j.is_object()) {
        detail::fail(path, "expected an object");
    }
    if (j.contains("loops")) {
        const std::string lp = detail::at(path, "loops");
        const auto& lj = detail::array(j["loops"], lp);
        for (std::size_t i = 0; i < lj.size(); ++i) {
            const std::string p = detail::at(lp, i);
            SutureLoop l;
            l.parent = static_cast<int>(detail::integer(detail::field(lj[i], "parent", p), detail::at(p, "parent")));
            if (l.parent < 0) {
                auto [side, idx] = detail::int_pair(detail::field(lj[i], "gap", p), detail::at(p, "gap"));
                l.gap = {side, idx};
            }
            c.loops.push_back(l);
        }
    }
    return c;
}

inline SutureSystem sutures_from_json(const Json& j, const QuadSurface& qs, const std::string& path = "")
{
    SutureSystem s{normalized(qs), {}, {}};
    const std::string sp = detail::at(path, "squares");
    const auto& sj = detail::array(detail::field(j, "squares", path), sp);
    for (std::size_t i = 0; i < sj.size(); ++i) {
        s.squares.push_back(cell_from_json(sj[i], detail::at(sp, i), false));
    }
    if (j.contains("vacua")) {
        const std::string vp = detail::at(path, "vacua");
        const auto& vj = detail::array(j["vacua"], vp);
        for (std::size_t i = 0; i < vj.size(); ++i) {
            s.vacua.push_back(cell_from_json(vj[i], detail::at(vp, i), true));
        }
    }
    return normalized(s);
}

// ---- module vectors

inline Json to_json(const SqftVector& v)
{
    Json terms = Json::array();
    for (const auto& [b, c] : v.terms()) {
        terms.push_back({{"basis", b}, {"coef", to_json(c)}});
    }
    return {{"index", v.module().index}, {"lattice", v.module().lattice->labels()}, {"terms", terms}};
}

inline SqftVector vector_from_json(const Json& j, const std::string& path = "")
{
    const std::string tp = detail::at(path, "terms");
    const auto& tj = detail::array(detail::field(j, "terms", path), tp);
    std::optional<int> index;
    if (j.contains("index")) {
        index = static_cast<int>(detail::integer(j["index"], detail::at(path, "index")));
    }
    LatticePtr lattice;
    if (j.contains("lattice")) {
        lattice = group_ring_from_json({{"lattice", j["lattice"]}, {"terms", Json::array()}}, path).lattice();
    }
    std::vector<std::pair<Bitstring, GroupRingElement>> parsed;
    for (std::size_t i = 0; i < tj.size(); ++i) {
        const std::string p = detail::at(tp, i);
        auto b = detail::text(detail::field(tj[i], "basis", p), detail::at(p, "basis"));
        if (b.find_first_not_of("01") != std::string::npos) {
            detail::fail(detail::at(p, "basis"), "basis labels are strings of 0 and 1");
        }
        if (!index) {
            index = static_cast<int>(b.size());
        } else if (static_cast<int>(b.size()) != *index) {
            detail::fail(detail::at(p, "basis"), "basis label length differs from the index");
        }
        auto c = group_ring_from_json(detail::field(tj[i], "coef", p), detail::at(p, "coef"), lattice);
        if (!lattice) {
            lattice = c.lattice();
        } else if (!same_lattice(lattice, c.lattice())) {
            detail::fail(detail::at(p, "coef"), "coefficient lattice differs from the vector's");
        }
        parsed.emplace_back(std::move(b), std::move(c));
    }
    if (!index) {
        detail::fail(path, "an empty vector needs an 'index' field");
    }
    SqftVector v(SqftModule{lattice ? lattice : make_lattice(), *index});
    for (auto& [b, c] : parsed) {
        v.add(b, c);
    }
    return v;
}

inline Json to_json(const Mod2Vector& v)
{
    return {{"index", v.index}, {"support", std::vector<std::string>(v.support.begin(), v.support.end())}};
}

inline Mod2Vector mod2_from_json(const Json& j, const std::string& path = "")
{
    Mod2Vector v;
    v.index = static_cast<int>(detail::integer(detail::field(j, "index", path), detail::at(path, "index")));
    const std::string sp = detail::at(path, "support");
    const auto& sj = detail::array(detail::field(j, "support", path), sp);
    for (std::size_t i = 0; i < sj.size(); ++i) {
        auto b = detail::text(sj[i], detail::at(sp, i));
        if (static_cast<int>(b.size()) != v.index || b.find_first_not_of("01") != std::string::npos) {
            detail::fail(detail::at(sp, i), "expected a bit string of length " + std::to_string(v.index));
        }
        v.flip(b);
    }
    return v;
}

// ---- documents: a surface with optional named sutures

struct Document {
    std::string name;
    QuadSurface surface;
    std::map<std::string, SutureSystem> sutures;
};

inline Json to_json(const Document& d)
{
    Json j;
    if (!d.name.empty()) {
        j["name"] = d.name;
    }
    j["surface"] = to_json(d.surface);
    if (!d.sutures.empty()) {
        Json s = Json::object();
        for (const auto& [name, sys] : d.sutures) {
            s[name] = to_json(sys);
        }
        j["sutures"] = s;
    }
    return j;
}

/// Accepts a full document or a bare surface.
inline Document document_from_json(const Json& j, const std::string& path = "")
{
    Document d;
    if (!j.is_object()) {
        detail::fail(path, "expected an object");
    }
    if (!j.contains("surface")) {
        d.surface = quad_surface_from_json(j, path);
        return d;
    }
    if (j.contains("name")) {
        d.name = detail::text(j["name"], detail::at(path, "name"));
    }
    d.surface = quad_surface_from_json(j["surface"], detail::at(path, "surface"));
    if (j.contains("sutures")) {
        const std::string sp = detail::at(path, "sutures");
        if (!j["sutures"].is_object()) {
            detail::fail(sp, "expected an object of named suture systems");
        }
        for (const auto& [name, sj] : j["sutures"].items()) {
            d.sutures.emplace(name, sutures_from_json(sj, d.surface, detail::at(sp, name)));
        }
    }
    return d;
}

} // namespace sqft::io
