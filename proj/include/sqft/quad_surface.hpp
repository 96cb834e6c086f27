#pragma once

// Occupied surfaces presented as squares glued along sides.
//
// Square corners c0..c3 run anticlockwise with signs +,-,+,-; side s_i runs
// from c_i to c_{i+1}. A gluing identifies two sides reversing orientation,
// so it must pair an even side with an odd side.

#include <sqft/error.hpp>
#include <sqft/group_ring.hpp>
#include <sqft/tape_graph.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sqft {

struct Slot {
    int square = 0;
    int side = 0;

    friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct QuadSurface {
    int square_count = 0;
    std::vector<std::pair<Slot, Slot>> gluings;
    int vacuum_count = 0;

    friend bool operator==(const QuadSurface&, const QuadSurface&) = default;
};

inline int corner_sign(int corner) { return corner % 2 == 0 ? 1 : -1; }
inline int mod4(int x) { return ((x % 4) + 4) % 4; }

/// Gluings with the smaller slot first, sorted.
inline QuadSurface normalized(QuadSurface qs)
{
    for (auto& [a, b] : qs.gluings) {
        if (b < a) {
            std::swap(a, b);
        }
    }
    std::sort(qs.gluings.begin(), qs.gluings.end());
    return qs;
}

struct Corner {
    int square = 0;
    int corner = 0;

    friend auto operator<=>(const Corner&, const Corner&) = default;
};

/// Structural checks that do not need the derived vertex classes.
inline Diagnostics validate_slots(const QuadSurface& qs)
{
    Diagnostics d;
    if (qs.square_count < 0 || qs.vacuum_count < 0) {
        d.add("square and vacuum counts must be non-negative");
        return d;
    }
    std::set<Slot> seen;
    for (const auto& [a, b] : qs.gluings) {
        for (const Slot& s : {a, b}) {
            if (s.square < 0 || s.square >= qs.square_count || s.side < 0 || s.side > 3) {
                d.addf("slot (", s.square, ",", s.side, ") out of range");
            } else if (!seen.insert(s).second) {
                d.addf("slot (", s.square, ",", s.side, ") glued twice");
            }
        }
        if (a == b) {
            d.addf("slot (", a.square, ",", a.side, ") glued to itself");
        } else if ((a.side + b.side) % 2 == 0) {
            d.addf("gluing (", a.square, ",", a.side, ")-(", b.square, ",", b.side,
                   ") identifies a + corner with a - corner");
        }
    }
    return d;
}

/// Derived combinatorics of a valid surface: partners, vertex classes, fans.
class SurfaceIndex {
public:
    explicit SurfaceIndex(const QuadSurface& qs) : qs_(qs)
    {
        auto d = validate_slots(qs);
        d.raise_if_failed("invalid quad surface");
        const int n = qs.square_count;
        partner_.assign(4 * n, -1);
        for (const auto& [a, b] : qs.gluings) {
            partner_[id(a)] = id(b);
            partner_[id(b)] = id(a);
        }
        std::vector<int> parent(4 * n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) {
                x = parent[x] = parent[parent[x]];
            }
            return x;
        };
        auto unite = [&](int x, int y) {
            x = find(x);
            y = find(y);
            if (x != y) {
                parent[std::max(x, y)] = std::min(x, y);
            }
        };
        for (const auto& [a, b] : qs.gluings) {
            unite(4 * a.square + a.side, 4 * b.square + mod4(b.side + 1));
            unite(4 * a.square + mod4(a.side + 1), 4 * b.square + b.side);
        }
        class_of_.assign(4 * n, -1);
        std::map<int, int> root_class;
        for (int c = 0; c < 4 * n; ++c) {
            auto [it, fresh] = root_class.try_emplace(find(c), static_cast<int>(class_sign_.size()));
            if (fresh) {
                class_sign_.push_back(corner_sign(c % 4));
            }
            class_of_[c] = it->second;
        }
        fans_.resize(class_sign_.size());
        for (int c = 0; c < 4 * n; ++c) {
            // a fan starts at the corner whose outgoing side is on the boundary
            if (partner_[c] == -1) {
                auto& fan = fans_[class_of_[c]];
                Corner k{c / 4, c % 4};
                while (true) {
                    fan.push_back(k);
                    int incoming = 4 * k.square + mod4(k.corner - 1);
                    int p = partner_[incoming];
                    if (p == -1) {
                        break;
                    }
                    k = Corner{p / 4, p % 4};
                    if (fan.size() > static_cast<std::size_t>(4 * n)) {
                        break;
                    }
                }
            }
        }
    }

    const QuadSurface& surface() const { return qs_; }
    static int id(const Slot& s) { return 4 * s.square + s.side; }
    static Slot slot(int id) { return {id / 4, id % 4}; }

    std::optional<Slot> partner(const Slot& s) const
    {
        int p = partner_.at(id(s));
        if (p < 0) {
            return std::nullopt;
        }
        return slot(p);
    }
    bool glued(const Slot& s) const { return partner_.at(id(s)) >= 0; }

    std::size_t class_count() const { return class_sign_.size(); }
    int class_sign(std::size_t k) const { return class_sign_[k]; }
    int class_of(const Corner& c) const { return class_of_[4 * c.square + c.corner]; }
    /// Corners around a vertex class, anticlockwise; empty for an interior vertex.
    const std::vector<Corner>& fan(std::size_t k) const { return fans_[k]; }

    /// Vertex classes at the start and end of a side.
    std::pair<int, int> endpoints(const Slot& s) const
    {
        return {class_of({s.square, s.side}), class_of({s.square, mod4(s.side + 1)})};
    }

private:
    QuadSurface qs_;
    std::vector<int> partner_;
    std::vector<int> class_of_;
    std::vector<int> class_sign_;
    std::vector<std::vector<Corner>> fans_;
};

inline Diagnostics validate(const QuadSurface& qs)
{
    Diagnostics d = validate_slots(qs);
    if (!d.ok()) {
        return d;
    }
    SurfaceIndex idx(qs);
    for (int c = 0; c < 4 * qs.square_count; ++c) {
        if (idx.class_sign(idx.class_of({c / 4, c % 4})) != corner_sign(c % 4)) {
            d.addf("vertex class of corner (", c / 4, ",", c % 4, ") mixes signs");
        }
    }
    std::size_t covered = 0;
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        const auto& fan = idx.fan(k);
        if (fan.empty()) {
            d.addf("vertex class ", k, " lies in the interior (no boundary side)");
        }
        covered += fan.size();
    }
    if (covered != static_cast<std::size_t>(4 * qs.square_count) && d.ok()) {
        d.add("corner fans do not cover every corner");
    }
    // connected components of squares must meet the boundary
    std::vector<int> parent(qs.square_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (const auto& [a, b] : qs.gluings) {
        parent[find(a.square)] = find(b.square);
    }
    std::set<int> open;
    for (int s = 0; s < qs.square_count; ++s) {
        for (int side = 0; side < 4; ++side) {
            if (!idx.glued({s, side})) {
                open.insert(find(s));
            }
        }
    }
    for (int s = 0; s < qs.square_count; ++s) {
        if (!open.count(find(s))) {
            d.addf("square ", s, " lies in a closed component");
            break;
        }
    }
    return d;
}

struct OccupiedStats {
    long euler_char = 0;
    long vertex_pair_count = 0; // N
    long index = 0;             // I
    long boundary_component_count = 0;
    long h1_rank = 0;
    long component_count = 0;
    bool valid_move = true; // cleared by fold_zip_stats when the move is impossible

    friend bool operator==(const OccupiedStats&, const OccupiedStats&) = default;
};

/// Unglued sides, each followed by the next one along the boundary orientation.
inline std::map<Slot, Slot> boundary_successor(const SurfaceIndex& idx)
{
    std::map<Slot, Slot> next;
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        const auto& fan = idx.fan(k);
        if (fan.empty()) {
            continue;
        }
        Slot in{fan.back().square, mod4(fan.back().corner - 1)};
        Slot out{fan.front().square, fan.front().corner};
        next[in] = out;
    }
    return next;
}

inline long surface_components(const QuadSurface& qs)
{
    std::vector<int> parent(qs.square_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (const auto& [a, b] : qs.gluings) {
        parent[find(a.square)] = find(b.square);
    }
    std::set<int> roots;
    for (int s = 0; s < qs.square_count; ++s) {
        roots.insert(find(s));
    }
    return static_cast<long>(roots.size()) + qs.vacuum_count;
}

inline OccupiedStats stats(const QuadSurface& qs)
{
    validate(qs).raise_if_failed("invalid quad surface");
    SurfaceIndex idx(qs);
    OccupiedStats st;
    long side_classes = 4L * qs.square_count - static_cast<long>(qs.gluings.size());
    long classes = static_cast<long>(idx.class_count());
    st.euler_char = classes - side_classes + qs.square_count + qs.vacuum_count;
    long positive = 0;
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        positive += idx.class_sign(k) > 0 ? 1 : 0;
    }
    st.vertex_pair_count = positive + qs.vacuum_count;
    st.index = st.vertex_pair_count - st.euler_char;
    auto next = boundary_successor(idx);
    std::set<Slot> seen;
    for (const auto& [s, t] : next) {
        if (seen.count(s)) {
            continue;
        }
        ++st.boundary_component_count;
        Slot cur = s;
        int sign = idx.class_sign(idx.endpoints(cur).first);
        while (seen.insert(cur).second) {
            auto [from, to] = idx.endpoints(cur);
            if (idx.class_sign(from) != sign || idx.class_sign(to) != -sign) {
                throw ValidationError("boundary circle does not alternate in sign");
            }
            sign = -sign;
            cur = next.at(cur);
        }
    }
    st.boundary_component_count += qs.vacuum_count;
    st.component_count = surface_components(qs);
    // spine: one vertex per positive class and vacuum, one edge per square
    st.h1_rank = qs.square_count - st.vertex_pair_count + st.component_count;
    return st;
}

/// Spine joining the corners of the given sign by one diagonal per square.
/// Square k contributes half-edges 2k (at c0, or c1) and 2k+1 (at c2, or c3).
inline TapeGraph spine(const QuadSurface& qs, int sign = 1)
{
    validate(qs).raise_if_failed("invalid quad surface");
    SurfaceIndex idx(qs);
    TapeGraph g;
    int next_id = 0;
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        if (idx.class_sign(k) != sign) {
            continue;
        }
        TapeVertex v{next_id++, {}};
        for (const auto& c : idx.fan(k)) {
            int low = sign > 0 ? 0 : 1;
            v.halfedges.push_back(2 * c.square + (c.corner == low ? 0 : 1));
        }
        g.vertices.push_back(std::move(v));
    }
    for (int k = 0; k < qs.vacuum_count; ++k) {
        g.vertices.push_back({next_id++, {}});
    }
    for (int s = 0; s < qs.square_count; ++s) {
        g.edges.push_back({2 * s, 2 * s + 1});
    }
    g.flips.assign(g.edges.size(), false);
    return g;
}

/// Triangle-fan reconstruction of a surface from one of its spines.
///
/// Square k has c0 at the first half-edge of edge k and c2 at the second.
/// The walk step leaving the first half-edge runs along triangle c0 c1 c2
/// (sides s0 then s1), the step leaving the second along c2 c3 c0 (s2, s3).
/// Consecutive steps without a breakpoint share a fan edge.
inline QuadSurface reconstruct(const TapeGraph& g)
{
    auto check = check_spine(g);
    if (!check.is_spine) {
        if (!check.oriented) {
            throw ValidationError("tape graph is not oriented, so it is not a spine");
        }
        std::string trace;
        for (const auto& s : check.walks[*check.witness].steps) {
            trace += " " + std::to_string(s.from_halfedge) + "->" + std::to_string(s.to_halfedge);
        }
        throw ValidationError("tape graph is not a spine: boundary component without breakpoint:" + trace);
    }
    std::map<int, std::pair<int, bool>> edge_of; // half-edge -> (edge, is first)
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        edge_of[g.edges[e].first] = {static_cast<int>(e), true};
        edge_of[g.edges[e].second] = {static_cast<int>(e), false};
    }
    auto departure = [&](int h) {
        auto [e, first] = edge_of.at(h);
        return Slot{e, first ? 0 : 2};
    };
    auto arrival = [&](int h) {
        auto [e, first] = edge_of.at(h);
        return Slot{e, first ? 1 : 3};
    };
    QuadSurface qs;
    qs.square_count = static_cast<int>(g.edges.size());
    for (const auto& w : check.walks) {
        if (w.isolated_vertex) {
            ++qs.vacuum_count;
            continue;
        }
        for (std::size_t t = 0; t < w.steps.size(); ++t) {
            if (w.steps[t].breakpoint) {
                continue;
            }
            const auto& nx = w.steps[(t + 1) % w.steps.size()];
            qs.gluings.push_back({arrival(w.steps[t].from_halfedge), departure(nx.from_halfedge)});
        }
    }
    qs = normalized(std::move(qs));
    validate(qs).raise_if_failed("reconstruction produced an invalid surface");
    return qs;
}

enum class SlideDirection { cw, ccw };

struct SlideResult {
    QuadSurface surface;
    Slot diagonal; // one side of the new internal edge
};

/// Re-split the hexagon formed by the two squares meeting along `edge`.
inline SlideResult diagonal_slide(const QuadSurface& qs, const Slot& edge, SlideDirection dir)
{
    validate(qs).raise_if_failed("invalid quad surface");
    SurfaceIndex idx(qs);
    auto other = idx.partner(edge);
    if (!other) {
        throw ValidationError("diagonal slide needs an internal edge");
    }
    const int A = edge.square, i = edge.side;
    const int B = other->square, j = other->side;
    if (A == B) {
        throw ValidationError("the two sides of the edge belong to one square; no hexagon");
    }
    // hexagon sides H0..H5 from v0 = A.c_{i+1}, anticlockwise
    std::array<Slot, 6> hex{Slot{A, mod4(i + 1)}, Slot{A, mod4(i + 2)}, Slot{A, mod4(i + 3)},
                            Slot{B, mod4(j + 1)}, Slot{B, mod4(j + 2)}, Slot{B, mod4(j + 3)}};
    const int sign0 = corner_sign(mod4(i + 1));
    const int start = dir == SlideDirection::ccw ? 1 : 2;
    std::map<Slot, Slot> remap;
    std::array<Slot, 2> diag;
    std::array<int, 2> targets{A, B};
    for (int part = 0; part < 2; ++part) {
        int k = start + 3 * part;
        int sq = targets[part];
        int sign_k = (k % 2 == 0) ? sign0 : -sign0;
        if (sign_k > 0) {
            for (int t = 0; t < 3; ++t) {
                remap[hex[(k + t) % 6]] = Slot{sq, t};
            }
            diag[part] = Slot{sq, 3};
        } else {
            remap[hex[k % 6]] = Slot{sq, 3};
            remap[hex[(k + 1) % 6]] = Slot{sq, 0};
            remap[hex[(k + 2) % 6]] = Slot{sq, 1};
            diag[part] = Slot{sq, 2};
        }
    }
    auto map_slot = [&](const Slot& s) {
        auto it = remap.find(s);
        return it == remap.end() ? s : it->second;
    };
    QuadSurface out;
    out.square_count = qs.square_count;
    out.vacuum_count = qs.vacuum_count;
    for (const auto& [a, b] : qs.gluings) {
        if ((a == edge && b == *other) || (b == edge && a == *other)) {
            continue;
        }
        out.gluings.push_back({map_slot(a), map_slot(b)});
    }
    out.gluings.push_back({diag[0], diag[1]});
    out = normalized(std::move(out));
    validate(out).raise_if_failed("diagonal slide produced an invalid surface");
    return {out, diag[0]};
}

inline QuadSurface create_square(QuadSurface qs)
{
    ++qs.square_count;
    return qs;
}

inline QuadSurface standard_glue(const QuadSurface& qs, const Slot& a, const Slot& b)
{
    validate(qs).raise_if_failed("invalid quad surface");
    SurfaceIndex idx(qs);
    for (const Slot& s : {a, b}) {
        if (s.square < 0 || s.square >= qs.square_count || s.side < 0 || s.side > 3) {
            throw ValidationError("slot out of range");
        }
        if (idx.glued(s)) {
            throw ValidationError("slot (" + std::to_string(s.square) + "," + std::to_string(s.side) +
                                  ") is already glued");
        }
    }
    if (a == b) {
        throw ValidationError("cannot glue a side to itself");
    }
    if ((a.side + b.side) % 2 == 0) {
        throw ValidationError("sign mismatch: gluing would identify a + corner with a - corner");
    }
    auto [a0, a1] = idx.endpoints(a);
    auto [b0, b1] = idx.endpoints(b);
    if (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) {
        throw ValidationError("sides are consecutive (they share a vertex)");
    }
    QuadSurface out = qs;
    out.gluings.push_back({a, b});
    out = normalized(std::move(out));
    validate(out).raise_if_failed("standard gluing produced an invalid surface");
    return out;
}

inline QuadSurface cut_internal_edge(const QuadSurface& qs, const Slot& s)
{
    validate(qs).raise_if_failed("invalid quad surface");
    QuadSurface out = qs;
    auto it = std::find_if(out.gluings.begin(), out.gluings.end(),
                           [&](const auto& p) { return p.first == s || p.second == s; });
    if (it == out.gluings.end()) {
        throw ValidationError("slot (" + std::to_string(s.square) + "," + std::to_string(s.side) +
                              ") is not glued");
    }
    out.gluings.erase(it);
    return normalized(std::move(out));
}

struct LoopStep {
    std::size_t edge;
    int from_halfedge;
    int to_halfedge;
    std::size_t from_vertex;
    std::size_t to_vertex;
};

/// Simple closed loop in a tape graph, starting at its defining edge.
struct SpineLoop {
    std::size_t edge;
    std::vector<LoopStep> steps;

    /// +1 / -1 per traversal of an edge from its first / second half-edge.
    std::vector<std::int64_t> edge_vector(const TapeGraph& g) const
    {
        std::vector<std::int64_t> z(g.edges.size(), 0);
        for (const auto& s : steps) {
            z[s.edge] += g.edges[s.edge].first == s.from_halfedge ? 1 : -1;
        }
        return z;
    }
};

struct H1Basis {
    TapeGraph spine;
    std::vector<std::size_t> forest;
    std::vector<SpineLoop> loops;
    LatticePtr lattice;
};

/// Fundamental loops of the lowest-id greedy spanning forest.
inline H1Basis h1_basis(const TapeGraph& g)
{
    TapeIndex idx(g);
    const auto& hs = idx.halfedges();
    H1Basis out;
    out.spine = g;
    std::vector<std::size_t> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    std::vector<bool> in_forest(g.edges.size(), false);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.vertices.size()); // (edge, half-edge index)
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto a = idx.index_of(g.edges[e].first);
        auto b = idx.index_of(g.edges[e].second);
        auto ra = find(hs[a].vertex);
        auto rb = find(hs[b].vertex);
        if (ra != rb) {
            parent[ra] = rb;
            in_forest[e] = true;
            out.forest.push_back(e);
            adj[hs[a].vertex].push_back({e, a});
            adj[hs[b].vertex].push_back({e, b});
        }
    }
    std::vector<std::string> labels;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (in_forest[e]) {
            continue;
        }
        auto a = idx.index_of(g.edges[e].first);
        auto b = idx.index_of(g.edges[e].second);
        SpineLoop loop{e, {}};
        loop.steps.push_back({e, hs[a].id, hs[b].id, hs[a].vertex, hs[b].vertex});
        // forest path from the far end back to the start
        std::size_t src = hs[b].vertex, dst = hs[a].vertex;
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> came; // vertex -> (from vertex, half-edge used to leave)
        std::vector<std::size_t> queue{src};
        came[src] = {src, 0};
        for (std::size_t q = 0; q < queue.size() && !came.count(dst); ++q) {
            std::size_t v = queue[q];
            for (auto [fe, h] : adj[v]) {
                std::size_t w = hs[hs[h].partner].vertex;
                if (!came.count(w)) {
                    came[w] = {v, h};
                    queue.push_back(w);
                }
            }
        }
        std::vector<LoopStep> path;
        for (std::size_t v = dst; v != src;) {
            auto [u, h] = came.at(v);
            path.push_back({hs[h].edge, hs[h].id, hs[hs[h].partner].id, u, v});
            v = u;
        }
        std::reverse(path.begin(), path.end());
        loop.steps.insert(loop.steps.end(), path.begin(), path.end());
        out.loops.push_back(std::move(loop));
        labels.push_back("l" + std::to_string(e));
    }
    out.lattice = make_lattice(std::move(labels));
    return out;
}

inline H1Basis h1_basis(const QuadSurface& qs) { return h1_basis(spine(qs, 1)); }

/// Map on H1 induced by including `sub` into `super`, where `super` has the
/// same squares and a superset of the gluings.
inline RingMap inclusion_map(const QuadSurface& sub, const QuadSurface& super)
{
    if (sub.square_count != super.square_count) {
        throw ValidationError("square mismatch between surfaces");
    }
    std::set<std::pair<Slot, Slot>> big;
    for (const auto& p : normalized(super).gluings) {
        big.insert(p);
    }
    for (const auto& p : normalized(sub).gluings) {
        if (!big.count(p)) {
            throw ValidationError("surfaces are not related by gluing");
        }
    }
    auto small_basis = h1_basis(sub);
    auto big_basis = h1_basis(super);
    IntMatrix m(big_basis.loops.size(), std::vector<std::int64_t>(small_basis.loops.size(), 0));
    for (std::size_t c = 0; c < small_basis.loops.size(); ++c) {
        auto z = small_basis.loops[c].edge_vector(small_basis.spine);
        // a cycle is the sum of the fundamental loops of its non-forest edges
        for (std::size_t r = 0; r < big_basis.loops.size(); ++r) {
            m[r][c] = z[big_basis.loops[r].edge];
        }
    }
    return RingMap(small_basis.lattice, big_basis.lattice, std::move(m));
}

enum class FoldZip { fold, zip };

/// Statistics after a fold or zip, without transporting the quadrangulation.
inline OccupiedStats fold_zip_stats(OccupiedStats st, FoldZip move)
{
    st.vertex_pair_count -= 1;
    if (move == FoldZip::fold) {
        st.index -= 1;
    } else {
        st.euler_char += 1;
        st.index -= 2;
        st.boundary_component_count -= 1;
    }
    st.h1_rank = st.component_count - st.euler_char;
    st.valid_move = st.vertex_pair_count >= st.component_count && st.index >= 0 &&
                    st.boundary_component_count >= st.component_count;
    return st;
}

} // namespace sqft
