#pragma once

// Graphs with a total order on the half-edges at each vertex, their
// thickenings and boundary walks.

#include <sqft/error.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sqft {

struct TapeVertex {
    int id = 0;
    std::vector<int> halfedges; // increasing order

    friend bool operator==(const TapeVertex&, const TapeVertex&) = default;
};

struct TapeGraph {
    std::vector<TapeVertex> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<bool> flips; // one per edge; empty means all false

    bool flipped(std::size_t e) const { return e < flips.size() && flips[e]; }
    std::size_t degree(std::size_t v) const { return vertices[v].halfedges.size(); }

    friend bool operator==(const TapeGraph&, const TapeGraph&) = default;
};

inline Diagnostics validate(const TapeGraph& g)
{
    Diagnostics d;
    std::map<int, int> in_vertex;
    std::map<int, int> in_edge;
    std::set<int> ids;
    for (const auto& v : g.vertices) {
        if (!ids.insert(v.id).second) {
            d.addf("duplicate vertex id ", v.id);
        }
        for (int h : v.halfedges) {
            if (++in_vertex[h] == 2) {
                d.addf("half-edge ", h, " appears in more than one vertex position");
            }
        }
    }
    for (const auto& [a, b] : g.edges) {
        if (a == b) {
            d.addf("edge joins half-edge ", a, " to itself");
        }
        for (int h : {a, b}) {
            if (++in_edge[h] == 2) {
                d.addf("half-edge ", h, " appears in more than one edge");
            }
            if (!in_vertex.count(h)) {
                d.addf("half-edge ", h, " is not attached to any vertex");
            }
        }
    }
    for (const auto& [h, n] : in_vertex) {
        if (!in_edge.count(h)) {
            d.addf("half-edge ", h, " is not part of any edge");
        }
    }
    if (!g.flips.empty() && g.flips.size() != g.edges.size()) {
        d.addf("flip list has ", g.flips.size(), " entries for ", g.edges.size(), " edges");
    }
    return d;
}

inline bool is_oriented(const TapeGraph& g)
{
    return std::none_of(g.flips.begin(), g.flips.end(), [](bool f) { return f; });
}

/// Lookup tables for a validated tape graph.
class TapeIndex {
public:
    struct HalfEdge {
        int id;
        std::size_t vertex;
        std::size_t position;
        std::size_t edge;
        std::size_t partner; // index into halfedges()
    };

    explicit TapeIndex(const TapeGraph& g) : graph_(&g)
    {
        validate(g).raise_if_failed("invalid tape graph");
        std::map<int, std::size_t> slot;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            const auto& hs = g.vertices[v].halfedges;
            for (std::size_t p = 0; p < hs.size(); ++p) {
                slot[hs[p]] = half_.size();
                half_.push_back({hs[p], v, p, 0, 0});
            }
        }
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            auto a = slot.at(g.edges[e].first);
            auto b = slot.at(g.edges[e].second);
            half_[a].edge = half_[b].edge = e;
            half_[a].partner = b;
            half_[b].partner = a;
        }
        by_id_ = std::move(slot);
        first_.resize(g.vertices.size());
        std::size_t acc = 0;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            first_[v] = acc;
            acc += g.vertices[v].halfedges.size();
        }
    }

    const TapeGraph& graph() const { return *graph_; }
    const std::vector<HalfEdge>& halfedges() const { return half_; }
    std::size_t index_of(int id) const { return by_id_.at(id); }
    /// Half-edge at a given vertex position.
    std::size_t at(std::size_t v, std::size_t pos) const { return first_[v] + pos; }
    std::size_t degree(std::size_t v) const { return graph_->vertices[v].halfedges.size(); }

private:
    const TapeGraph* graph_;
    std::vector<HalfEdge> half_;
    std::map<int, std::size_t> by_id_;
    std::vector<std::size_t> first_;
};

struct WalkStep {
    std::size_t edge;
    int from_halfedge;
    int to_halfedge;
    std::size_t arrival_vertex; // index into vertices
    bool breakpoint;
    bool reversed = false; // departed along the + half-side (only with flips)
};

struct BoundaryWalk {
    std::vector<WalkStep> steps;
    /// Set for the empty walk of a degree-0 vertex.
    std::optional<std::size_t> isolated_vertex;

    bool has_breakpoint() const
    {
        return isolated_vertex.has_value() ||
               std::any_of(steps.begin(), steps.end(), [](const WalkStep& s) { return s.breakpoint; });
    }

    std::size_t breakpoint_count() const
    {
        if (isolated_vertex) {
            return 1;
        }
        return static_cast<std::size_t>(
            std::count_if(steps.begin(), steps.end(), [](const WalkStep& s) { return s.breakpoint; }));
    }

    std::set<std::size_t> vertices() const
    {
        std::set<std::size_t> out;
        if (isolated_vertex) {
            out.insert(*isolated_vertex);
        }
        for (const auto& s : steps) {
            out.insert(s.arrival_vertex);
        }
        return out;
    }
};

/// Boundary components of the thickening, as walks on half-sides.
///
/// A state is a half-edge together with the half-side the walk leaves it on.
/// Leaving h on its lower half-side arrives at the upper half-side of the
/// partner (lower, if the edge is flipped); arriving on an upper half-side
/// continues at the successor, wrapping from the maximal to the minimal
/// half-edge at a breakpoint. Arrivals on a lower half-side mirror this.
inline std::vector<BoundaryWalk> boundary_components(const TapeGraph& g)
{
    TapeIndex idx(g);
    const auto& hs = idx.halfedges();
    const std::size_t n = hs.size();
    auto state = [](std::size_t h, bool upper) { return 2 * h + (upper ? 1 : 0); };

    struct Next {
        std::size_t state;
        WalkStep step;
    };
    auto advance = [&](std::size_t s) -> Next {
        std::size_t h = s / 2;
        bool leave_upper = s % 2 == 1;
        std::size_t p = hs[h].partner;
        // Unflipped: lower departure arrives upper. Flipped: lower departure arrives lower.
        bool arrive_upper = g.flipped(hs[h].edge) ? leave_upper : !leave_upper;
        std::size_t v = hs[p].vertex;
        std::size_t d = idx.degree(v);
        std::size_t pos = hs[p].position;
        WalkStep step{hs[h].edge, hs[h].id, hs[p].id, v, false, leave_upper};
        std::size_t next;
        bool next_upper;
        if (arrive_upper) {
            if (pos + 1 < d) {
                next = idx.at(v, pos + 1);
            } else {
                next = idx.at(v, 0);
                step.breakpoint = true;
            }
            next_upper = false;
        } else {
            if (pos > 0) {
                next = idx.at(v, pos - 1);
            } else {
                next = idx.at(v, d - 1);
                step.breakpoint = true;
            }
            next_upper = true;
        }
        return {state(next, next_upper), step};
    };

    const bool oriented = is_oriented(g);
    std::vector<bool> used(2 * n, false);
    std::set<std::pair<std::size_t, bool>> covered_sides;
    std::vector<BoundaryWalk> walks;
    std::size_t scan = 0;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (idx.degree(v) == 0) {
            BoundaryWalk w;
            w.isolated_vertex = v;
            walks.push_back(std::move(w));
            continue;
        }
        for (std::size_t k = 0; k < idx.degree(v); ++k, ++scan) {
            for (bool upper : {false, true}) {
                if (oriented && upper) {
                    continue; // the reverse traversals carry no new information
                }
                std::size_t s0 = state(scan, upper);
                if (used[s0]) {
                    continue;
                }
                BoundaryWalk w;
                std::set<std::pair<std::size_t, bool>> sides;
                std::size_t s = s0;
                do {
                    used[s] = true;
                    sides.insert({s / 2, s % 2 == 1});
                    auto nx = advance(s);
                    std::size_t arrived = idx.index_of(nx.step.to_halfedge);
                    bool arrived_upper = g.flipped(nx.step.edge) ? nx.step.reversed : !nx.step.reversed;
                    sides.insert({arrived, arrived_upper});
                    w.steps.push_back(nx.step);
                    s = nx.state;
                } while (s != s0);
                if (covered_sides.count(*sides.begin())) {
                    continue; // the same circle traversed backwards
                }
                covered_sides.insert(sides.begin(), sides.end());
                walks.push_back(std::move(w));
            }
        }
    }
    return walks;
}

/// Connected components as lists of vertex indices, ordered by least vertex.
inline std::vector<std::vector<std::size_t>> connected_components(const TapeGraph& g)
{
    TapeIndex idx(g);
    std::vector<std::size_t> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (const auto& h : idx.halfedges()) {
        auto a = find(h.vertex);
        auto b = find(idx.halfedges()[h.partner].vertex);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        groups[find(v)].push_back(v);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, vs] : groups) {
        out.push_back(std::move(vs));
    }
    return out;
}

struct ComponentStats {
    std::vector<std::size_t> vertices;
    long euler_char = 0;
    long boundary_count = 0;
    long genus = 0;
    bool consistent = true; // false if the genus came out negative or fractional
};

inline std::vector<ComponentStats> surface_stats(const TapeGraph& g)
{
    if (!is_oriented(g)) {
        throw ValidationError("surface statistics need an oriented tape graph");
    }
    TapeIndex idx(g);
    auto comps = connected_components(g);
    std::vector<std::size_t> comp_of(g.vertices.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        for (auto v : comps[c]) {
            comp_of[v] = c;
        }
    }
    std::vector<ComponentStats> out(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        out[c].vertices = comps[c];
        out[c].euler_char = static_cast<long>(comps[c].size());
    }
    for (const auto& [a, b] : g.edges) {
        out[comp_of[idx.halfedges()[idx.index_of(a)].vertex]].euler_char -= 1;
    }
    for (const auto& w : boundary_components(g)) {
        out[comp_of[*w.vertices().begin()]].boundary_count += 1;
    }
    for (auto& s : out) {
        long twice = 2 - s.euler_char - s.boundary_count;
        s.consistent = twice >= 0 && twice % 2 == 0;
        s.genus = twice / 2;
    }
    return out;
}

struct SpineCheck {
    bool is_spine = false;
    bool oriented = false;
    std::vector<BoundaryWalk> walks;
    std::optional<std::size_t> witness; // walk without breakpoint
};

inline SpineCheck check_spine(const TapeGraph& g)
{
    SpineCheck r;
    r.oriented = is_oriented(g);
    r.walks = boundary_components(g);
    for (std::size_t i = 0; i < r.walks.size(); ++i) {
        if (!r.walks[i].has_breakpoint()) {
            r.witness = i;
            break;
        }
    }
    r.is_spine = r.oriented && !r.witness;
    return r;
}

inline bool is_spine(const TapeGraph& g) { return check_spine(g).is_spine; }

/// Isomorphism invariant that is complete for order-preserving isomorphisms.
inline std::string canonical_signature(const TapeGraph& g)
{
    TapeIndex idx(g);
    const auto& hs = idx.halfedges();
    auto encode_from = [&](std::size_t start) {
        std::vector<long> code;
        std::map<std::size_t, long> label{{start, 0}};
        std::vector<std::size_t> order{start};
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::size_t v = order[i];
            code.push_back(static_cast<long>(idx.degree(v)));
            for (std::size_t p = 0; p < idx.degree(v); ++p) {
                const auto& h = hs[idx.at(v, p)];
                const auto& q = hs[h.partner];
                auto [it, fresh] = label.try_emplace(q.vertex, static_cast<long>(order.size()));
                if (fresh) {
                    order.push_back(q.vertex);
                }
                code.push_back(it->second);
                code.push_back(static_cast<long>(q.position));
                code.push_back(g.flipped(h.edge) ? 1 : 0);
            }
        }
        return code;
    };
    std::vector<std::vector<long>> parts;
    for (const auto& comp : connected_components(g)) {
        std::vector<long> best;
        for (std::size_t k = 0; k < comp.size(); ++k) {
            auto code = encode_from(comp[k]);
            if (k == 0 || code < best) {
                best = std::move(code);
            }
        }
        parts.push_back(std::move(best));
    }
    std::sort(parts.begin(), parts.end());
    std::ostringstream os;
    for (const auto& part : parts) {
        os << '(';
        for (std::size_t i = 0; i < part.size(); ++i) {
            os << (i ? "," : "") << part[i];
        }
        os << ')';
    }
    return os.str();
}

struct WedgeIndex {
    std::size_t vertex;
    std::size_t position; // 0..degree
    bool barrier;
};

/// Wedges w_0..w_d at every vertex; w_j sits between half-edges j-1 and j.
inline std::vector<WedgeIndex> wedges(const TapeGraph& g)
{
    if (!is_oriented(g)) {
        throw ValidationError("wedges need an oriented tape graph");
    }
    std::vector<WedgeIndex> out;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        std::size_t d = g.degree(v);
        for (std::size_t j = 0; j <= d; ++j) {
            out.push_back({v, j, j == 0 || j == d});
        }
    }
    return out;
}

/// DOT rendering; vertices are records whose ports follow the half-edge order.
inline std::string to_dot(const TapeGraph& g, const std::map<std::pair<std::size_t, std::size_t>, long>& wedge_labels = {})
{
    auto walks = boundary_components(g);
    std::ostringstream os;
    os << "graph tape {\n  node [shape=record];\n";
    for (std::size_t i = 0; i < walks.size(); ++i) {
        if (!walks[i].has_breakpoint()) {
            os << "  // boundary component " << i << " has no breakpoint:";
            for (const auto& s : walks[i].steps) {
                os << " " << s.from_halfedge << "->" << s.to_halfedge;
            }
            os << "\n";
        }
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& vx = g.vertices[v];
        os << "  v" << vx.id << " [label=\"";
        std::size_t d = vx.halfedges.size();
        for (std::size_t j = 0; j <= d; ++j) {
            auto it = wedge_labels.find({v, j});
            if (it != wedge_labels.end()) {
                os << "w" << j << "=" << it->second << "|";
            }
            if (j < d) {
                os << "<h" << vx.halfedges[j] << "> " << vx.halfedges[j] << "|";
            }
        }
        os << "v" << vx.id << "\"];\n";
    }
    std::map<int, int> owner;
    for (const auto& vx : g.vertices) {
        for (int h : vx.halfedges) {
            owner[h] = vx.id;
        }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [a, b] = g.edges[e];
        os << "  v" << owner[a] << ":h" << a << " -- v" << owner[b] << ":h" << b;
        if (g.flipped(e)) {
            os << " [style=dashed]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace sqft
