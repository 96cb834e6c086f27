#pragma once

// Heegaard diagrams of Sigma x S^1 assembled from one block per square:
// regions are the wedges of the + spine, each alpha_e split into two arcs
// by half-edge and each beta_e into two arcs by side.

#include <sqft/linalg.hpp>
#include <sqft/quad_surface.hpp>
#include <sqft/tape_graph.hpp>
#include <sqft/twisted_module.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sqft {

enum class CurveKind { alpha, beta };

/// alpha part 0/1 = arc at the first/second half-edge of the edge;
/// beta part 0/1 = arc on the right/left side of first -> second.
struct ArcId {
    CurveKind kind;
    std::size_t edge;
    int part;

    friend auto operator<=>(const ArcId&, const ArcId&) = default;
};

inline std::string to_string(const ArcId& a)
{
    std::string s = a.kind == CurveKind::alpha ? "alpha" : "beta";
    s += std::to_string(a.edge);
    if (a.kind == CurveKind::alpha) {
        s += a.part == 0 ? "^a" : "^b";
    } else {
        s += a.part == 0 ? "^R" : "^L";
    }
    return s;
}

struct Region {
    std::size_t vertex;
    std::size_t position; // wedge w_position at the vertex
    bool barrier;
    int boundary_circles; // components of the boundary of S inside the region
    std::vector<std::pair<ArcId, int>> boundary;
};

struct DiagramStats {
    long euler_char = 0;
    long boundary_components = 0;
    long genus = 0;
    long components = 0;
    long intersection_points = 0;
};

struct HeegaardDiagram {
    TapeGraph spine;
    std::vector<Region> regions;
    std::size_t curve_count = 0;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> region_at; // (vertex, position) -> region

    /// |alpha_i cap beta_j|; each block contributes two points on its own pair.
    long intersections(std::size_t i, std::size_t j) const { return i == j && i < curve_count ? 2 : 0; }

    std::vector<std::size_t> internal_regions() const
    {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < regions.size(); ++r) {
            if (!regions[r].barrier) {
                out.push_back(r);
            }
        }
        return out;
    }
};

/// Contribution of the half-side (h, upper) to the boundary of the wedge it
/// faces, for the edge e = (a, b) containing h.
inline std::vector<std::pair<ArcId, int>> half_side_boundary(const TapeGraph& g, std::size_t e, int h, bool upper)
{
    const bool first = g.edges[e].first == h;
    ArcId alpha{CurveKind::alpha, e, first ? 0 : 1};
    ArcId right{CurveKind::beta, e, 0};
    ArcId left{CurveKind::beta, e, 1};
    if (first) {
        return upper ? std::vector<std::pair<ArcId, int>>{{alpha, -1}, {left, 1}}
                     : std::vector<std::pair<ArcId, int>>{{alpha, 1}, {right, 1}};
    }
    return upper ? std::vector<std::pair<ArcId, int>>{{alpha, 1}, {right, -1}}
                 : std::vector<std::pair<ArcId, int>>{{alpha, -1}, {left, -1}};
}

inline HeegaardDiagram synth(const QuadSurface& qs)
{
    HeegaardDiagram h;
    h.spine = spine(qs, 1);
    h.curve_count = h.spine.edges.size();
    TapeIndex idx(h.spine);
    const auto& hs = idx.halfedges();
    for (std::size_t v = 0; v < h.spine.vertices.size(); ++v) {
        std::size_t d = h.spine.degree(v);
        for (std::size_t j = 0; j <= d; ++j) {
            Region r{v, j, j == 0 || j == d, 0, {}};
            if (d == 0) {
                r.boundary_circles = 2;
            } else if (r.barrier) {
                r.boundary_circles = 1;
            }
            if (j >= 1) {
                const auto& he = hs[idx.at(v, j - 1)];
                for (auto c : half_side_boundary(h.spine, he.edge, he.id, true)) {
                    r.boundary.push_back(c);
                }
            }
            if (j < d) {
                const auto& he = hs[idx.at(v, j)];
                for (auto c : half_side_boundary(h.spine, he.edge, he.id, false)) {
                    r.boundary.push_back(c);
                }
            }
            h.region_at[{v, j}] = h.regions.size();
            h.regions.push_back(std::move(r));
        }
    }
    return h;
}

/// Euler characteristic, boundary, genus and components of S. Regions are
/// annuli; each block adds two intersection points and four arcs.
inline DiagramStats diagram_stats(const HeegaardDiagram& h)
{
    std::vector<std::size_t> parent(h.regions.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    std::map<ArcId, std::size_t> seen;
    for (std::size_t r = 0; r < h.regions.size(); ++r) {
        for (const auto& [arc, sign] : h.regions[r].boundary) {
            auto [it, fresh] = seen.try_emplace(arc, r);
            if (!fresh) {
                parent[find(r)] = find(it->second);
            }
        }
    }
    struct Acc {
        long points = 0, arcs = 0, circles = 0;
    };
    std::map<std::size_t, Acc> comp;
    for (std::size_t r = 0; r < h.regions.size(); ++r) {
        comp[find(r)].circles += h.regions[r].boundary_circles;
    }
    for (std::size_t e = 0; e < h.spine.edges.size(); ++e) {
        auto& a = comp[find(seen.at(ArcId{CurveKind::alpha, e, 0}))];
        a.points += 2;
        a.arcs += 4;
    }
    DiagramStats st;
    for (const auto& [root, a] : comp) {
        long chi = a.points - a.arcs;
        st.euler_char += chi;
        st.boundary_components += a.circles;
        st.genus += (2 - chi - a.circles) / 2;
        st.intersection_points += a.points;
        ++st.components;
    }
    return st;
}

/// Signed sum of region boundaries weighted by coefficients (indexed by region).
inline std::map<ArcId, Integer> boundary_of(const HeegaardDiagram& h, const std::vector<Integer>& coef)
{
    if (coef.size() != h.regions.size()) {
        throw ValidationError("domain has wrong number of coefficients");
    }
    std::map<ArcId, Integer> out;
    for (std::size_t r = 0; r < h.regions.size(); ++r) {
        if (coef[r] == 0) {
            continue;
        }
        for (const auto& [arc, sign] : h.regions[r].boundary) {
            out[arc] += coef[r] * sign;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second == 0 ? out.erase(it) : std::next(it);
    }
    return out;
}

/// Zero on regions meeting the boundary of S, and a boundary made of whole curves.
inline bool is_periodic(const HeegaardDiagram& h, const std::vector<Integer>& coef)
{
    for (std::size_t r = 0; r < h.regions.size(); ++r) {
        if (h.regions[r].boundary_circles > 0 && coef[r] != 0) {
            return false;
        }
    }
    auto b = boundary_of(h, coef);
    auto get = [&](const ArcId& a) {
        auto it = b.find(a);
        return it == b.end() ? Integer(0) : it->second;
    };
    for (std::size_t e = 0; e < h.curve_count; ++e) {
        for (auto kind : {CurveKind::alpha, CurveKind::beta}) {
            if (get({kind, e, 0}) != get({kind, e, 1})) {
                return false;
            }
        }
    }
    return true;
}

struct PeriodicDomain {
    std::size_t loop_edge;
    std::vector<Integer> coef; // per region
    std::vector<int> vertex_sides; // +1 right, -1 left, per loop vertex in walk order
};

/// D_e = (wedges at right vertices) - (wedges at left vertices) along l_e.
inline std::vector<PeriodicDomain> periodic_basis(const HeegaardDiagram& h, const H1Basis& basis)
{
    TapeIndex idx(h.spine);
    std::vector<PeriodicDomain> out;
    for (const auto& loop : basis.loops) {
        PeriodicDomain d{loop.edge, std::vector<Integer>(h.regions.size(), 0), {}};
        const std::size_t k = loop.steps.size();
        for (std::size_t t = 0; t < k; ++t) {
            const auto& in = loop.steps[t];
            const auto& out_step = loop.steps[(t + 1) % k];
            std::size_t pin = idx.halfedges()[idx.index_of(in.to_halfedge)].position;
            std::size_t pout = idx.halfedges()[idx.index_of(out_step.from_halfedge)].position;
            int side = pin < pout ? 1 : -1;
            d.vertex_sides.push_back(side);
            for (std::size_t w = std::min(pin, pout) + 1; w <= std::max(pin, pout); ++w) {
                d.coef[h.region_at.at({in.to_vertex, w})] += side;
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

struct AdmissibilityResult {
    bool admissible = true;
    std::vector<Integer> witness;     // one-signed periodic domain, per region
    std::vector<Integer> combination; // coefficients on the periodic basis
};

/// Inadmissible iff the span of the domains contains a nonzero vector with
/// all coordinates of one sign; decided by exact phase-one simplex.
inline AdmissibilityResult is_admissible_raw(const HeegaardDiagram& h, const std::vector<PeriodicDomain>& domains)
{
    AdmissibilityResult res;
    auto internal = h.internal_regions();
    const std::size_t k = domains.size();
    const std::size_t w = internal.size();
    if (k == 0 || w == 0) {
        return res;
    }
    for (int sign : {1, -1}) {
        // variables: lambda+ (k), lambda- (k), slack (w)
        // rows: M lambda - s = 0 per internal region, sum(M lambda) = 1
        RatMatrix a(w + 1, std::vector<Rational>(2 * k + w, 0));
        std::vector<Rational> b(w + 1, 0);
        for (std::size_t r = 0; r < w; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                Rational m = Rational(domains[c].coef[internal[r]]) * sign;
                a[r][c] = m;
                a[r][k + c] = -m;
                a[w][c] += m;
                a[w][k + c] -= m;
            }
            a[r][2 * k + r] = -1;
        }
        b[w] = 1;
        auto y = feasible_point(a, b);
        if (!y) {
            continue;
        }
        std::vector<Rational> lambda(k);
        for (std::size_t c = 0; c < k; ++c) {
            lambda[c] = ((*y)[c] - (*y)[k + c]) * sign;
        }
        auto ints = clear_denominators(lambda);
        res.admissible = false;
        res.combination = ints;
        res.witness.assign(h.regions.size(), 0);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t r = 0; r < h.regions.size(); ++r) {
                res.witness[r] += ints[c] * domains[c].coef[r];
            }
        }
        return res;
    }
    return res;
}

struct ZetaArc {
    std::size_t vertex;
    std::size_t position; // of the half-edge whose beta side is served
    int halfedge;
    std::vector<std::size_t> swept_wedges;       // positions p, ..., 0
    std::vector<int> crossed_alpha_halfedges;    // half-edges at positions p-1, ..., 0
    std::size_t terminal_wedge = 0;
};

/// One finger per half-edge whose two flanking wedges are both internal.
inline std::vector<ZetaArc> zeta_arcs(const HeegaardDiagram& h)
{
    std::vector<ZetaArc> out;
    for (std::size_t v = 0; v < h.spine.vertices.size(); ++v) {
        const auto& hes = h.spine.vertices[v].halfedges;
        const std::size_t d = hes.size();
        for (std::size_t p = 1; p + 2 <= d; ++p) {
            ZetaArc z{v, p, hes[p], {}, {}, 0};
            for (std::size_t w = p + 1; w-- > 0;) {
                z.swept_wedges.push_back(w);
            }
            for (std::size_t q = p; q-- > 0;) {
                z.crossed_alpha_halfedges.push_back(hes[q]);
            }
            out.push_back(std::move(z));
        }
    }
    return out;
}

/// No finger sweeps the wedge w_{d-1} at a vertex of degree d >= 2.
inline bool disjoint_wedge(const HeegaardDiagram& h, const std::vector<ZetaArc>& arcs)
{
    for (const auto& z : arcs) {
        std::size_t d = h.spine.degree(z.vertex);
        for (auto w : z.swept_wedges) {
            if (d >= 2 && w == d - 1) {
                return false;
            }
        }
    }
    return true;
}

struct CertificateEntry {
    int halfedge;
    std::size_t vertex;
    std::size_t position;
    std::size_t barrier_wedge; // adjacent barrier wedge at the vertex
    bool via_zeta;
};

struct AdmissibilityCertificate {
    bool ok = true;
    std::vector<CertificateEntry> entries;
    std::vector<std::string> failures;
};

/// Every beta side must touch a barrier wedge, directly or through a finger.
inline AdmissibilityCertificate admissibility_certificate(const HeegaardDiagram& h, const std::vector<ZetaArc>& arcs)
{
    std::map<int, const ZetaArc*> finger;
    for (const auto& z : arcs) {
        finger[z.halfedge] = &z;
    }
    AdmissibilityCertificate cert;
    for (std::size_t v = 0; v < h.spine.vertices.size(); ++v) {
        const auto& hes = h.spine.vertices[v].halfedges;
        const std::size_t d = hes.size();
        for (std::size_t p = 0; p < d; ++p) {
            if (p == 0) {
                cert.entries.push_back({hes[p], v, p, 0, false});
            } else if (p == d - 1) {
                cert.entries.push_back({hes[p], v, p, d, false});
            } else if (auto it = finger.find(hes[p]); it != finger.end() && h.regions[h.region_at.at(
                                                                                {v, it->second->terminal_wedge})].barrier) {
                cert.entries.push_back({hes[p], v, p, it->second->terminal_wedge, true});
            } else {
                cert.ok = false;
                cert.failures.push_back("beta side at half-edge " + std::to_string(hes[p]) +
                                        " reaches no boundary region");
            }
        }
    }
    return cert;
}

/// Intersection count including the finger-created pairs.
inline long perturbed_intersections(const HeegaardDiagram& h, const std::vector<ZetaArc>& arcs)
{
    long crossings = 0;
    for (const auto& z : arcs) {
        crossings += static_cast<long>(z.crossed_alpha_halfedges.size());
    }
    return 2 * static_cast<long>(h.curve_count) + 2 * crossings;
}

/// Q-edge of each wedge at a + vertex; vacuum wedges have none.
struct RegionEdge {
    std::size_t region;
    std::optional<Slot> side; // one slot of the Q-edge
    bool internal_edge;
};

inline std::vector<RegionEdge> region_edge_bijection(const QuadSurface& qs, const HeegaardDiagram& h)
{
    SurfaceIndex idx(qs);
    std::vector<RegionEdge> out;
    std::size_t v = 0;
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        if (idx.class_sign(k) < 0) {
            continue;
        }
        const auto& fan = idx.fan(k);
        const std::size_t d = fan.size();
        for (std::size_t j = 0; j <= d; ++j) {
            Slot s = j == 0 ? Slot{fan[0].square, fan[0].corner}
                            : Slot{fan[j - 1].square, mod4(fan[j - 1].corner - 1)};
            out.push_back({h.region_at.at({v, j}), s, idx.glued(s)});
        }
        ++v;
    }
    for (; v < h.spine.vertices.size(); ++v) {
        out.push_back({h.region_at.at({v, 0}), std::nullopt, false});
    }
    return out;
}

struct DecompositionStep {
    std::size_t vertex;
    std::size_t degree;
    std::size_t wedge; // w_{d-1}
    Slot edge;         // the internal Q-edge that is cut
    RingMap iota;
    bool direct_summand;
    AdmissibilityCertificate certificate;
    QuadSurface before;
    QuadSurface after;
};

/// Cut the lowest-id + vertex of degree >= 2 at its wedge w_{d-1}.
inline DecompositionStep decompose_step(const QuadSurface& qs)
{
    validate(qs).raise_if_failed("invalid quad surface");
    auto h = synth(qs);
    std::optional<std::size_t> chosen;
    for (std::size_t v = 0; v < h.spine.vertices.size(); ++v) {
        if (h.spine.degree(v) >= 2) {
            chosen = v;
            break;
        }
    }
    if (!chosen) {
        throw ValidationError("no spine vertex of degree >= 2; nothing to decompose");
    }
    const std::size_t d = h.spine.degree(*chosen);
    std::optional<Slot> edge;
    for (const auto& re : region_edge_bijection(qs, h)) {
        const auto& r = h.regions[re.region];
        if (r.vertex == *chosen && r.position == d - 1) {
            edge = re.side;
        }
    }
    if (!edge) {
        throw Error("wedge has no Q-edge");
    }
    auto after = cut_internal_edge(qs, *edge);
    auto iota = inclusion_map(after, qs);
    bool summand = is_direct_summand_injection(iota.matrix, iota.source->rank());
    auto cert = admissibility_certificate(h, zeta_arcs(h));
    return {*chosen, d, d - 1, *edge, std::move(iota), summand, std::move(cert), qs, std::move(after)};
}

struct SfhResult {
    SqftModule module;
    std::vector<DecompositionStep> trace;
    QuadSurface terminal;
    std::map<int, Integer> graded_ranks;
    /// Generators of the terminal diagram: one intersection point per block.
    std::vector<Bitstring> generators;
};

inline SfhResult sfh(const QuadSurface& qs)
{
    validate(qs).raise_if_failed("invalid quad surface");
    SfhResult res{module_of(qs), {}, qs, {}, {}};
    while (true) {
        auto g = spine(res.terminal, 1);
        bool reducible = false;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            reducible = reducible || g.degree(v) >= 2;
        }
        if (!reducible) {
            break;
        }
        res.trace.push_back(decompose_step(res.terminal));
        res.terminal = res.trace.back().after;
    }
    auto terminal_h = synth(res.terminal);
    if (!terminal_h.internal_regions().empty()) {
        throw Error("terminal diagram still has internal regions");
    }
    // squares keep their indices through every cut, so bit i is square i
    const int n = res.module.index;
    for (int e = -n; e <= n; e += 2) {
        res.graded_ranks[e] = res.module.graded_rank(e);
    }
    if (n <= 16) {
        res.generators = res.module.basis();
    }
    return res;
}

} // namespace sqft
