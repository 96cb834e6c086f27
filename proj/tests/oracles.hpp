#pragma once

// Independent reference computations used to pin expected values.

#include <sqft/quad_surface.hpp>
#include <sqft/tape_graph.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

/// (length, breakpoints) of each boundary circle, from the undirected graph
/// on half-sides: side edges join the half-sides bounding one side of an
/// edge, vertex edges join consecutive half-sides, and the wrap from the top
/// half-side back to the bottom one counts as a breakpoint.
inline std::vector<std::pair<std::size_t, std::size_t>> boundary_profile(const sqft::TapeGraph& g)
{
    std::map<int, std::size_t> slot;
    std::size_t n = 0;
    for (const auto& v : g.vertices) {
        for (int h : v.halfedges) {
            slot[h] = n++;
        }
    }
    auto node = [&](int h, bool upper) { return 2 * slot.at(h) + (upper ? 1 : 0); };
    struct Link {
        std::size_t a, b;
        bool side;
        bool wrap;
    };
    std::vector<Link> links;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [a, b] = g.edges[e];
        bool f = g.flipped(e);
        links.push_back({node(a, false), node(b, !f), true, false});
        links.push_back({node(a, true), node(b, f), true, false});
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& v : g.vertices) {
        std::size_t d = v.halfedges.size();
        if (d == 0) {
            out.push_back({0, 1});
            continue;
        }
        for (std::size_t i = 0; i + 1 < d; ++i) {
            links.push_back({node(v.halfedges[i], true), node(v.halfedges[i + 1], false), false, false});
        }
        links.push_back({node(v.halfedges[d - 1], true), node(v.halfedges[0], false), false, true});
    }
    std::vector<std::size_t> parent(2 * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (const auto& l : links) {
        parent[find(l.a)] = find(l.b);
    }
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> per;
    for (const auto& l : links) {
        auto& p = per[find(l.a)];
        p.first += l.side ? 1 : 0;
        p.second += l.wrap ? 1 : 0;
    }
    for (auto& [r, p] : per) {
        out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Order- and flip-preserving isomorphism by trying every vertex bijection.
inline bool brute_isomorphic(const sqft::TapeGraph& g1, const sqft::TapeGraph& g2)
{
    if (g1.vertices.size() != g2.vertices.size() || g1.edges.size() != g2.edges.size()) {
        return false;
    }
    auto position = [](const sqft::TapeGraph& g) {
        std::map<int, std::pair<std::size_t, std::size_t>> pos;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            for (std::size_t p = 0; p < g.vertices[v].halfedges.size(); ++p) {
                pos[g.vertices[v].halfedges[p]] = {v, p};
            }
        }
        return pos;
    };
    auto p1 = position(g1);
    auto p2 = position(g2);
    using Key = std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>;
    std::map<Key, int> target; // unordered edge (as ordered pair both ways) -> flip
    for (std::size_t e = 0; e < g2.edges.size(); ++e) {
        auto a = p2[g2.edges[e].first];
        auto b = p2[g2.edges[e].second];
        int f = g2.flipped(e) ? 1 : 0;
        target[{a, b}] += 1 + 2 * f;
        if (a != b) {
            target[{b, a}] += 1 + 2 * f;
        }
    }
    std::vector<std::size_t> perm(g1.vertices.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t v = 0; v < perm.size() && ok; ++v) {
            ok = g1.vertices[v].halfedges.size() == g2.vertices[perm[v]].halfedges.size();
        }
        if (!ok) {
            continue;
        }
        std::map<Key, int> image;
        for (std::size_t e = 0; e < g1.edges.size(); ++e) {
            auto a = p1[g1.edges[e].first];
            auto b = p1[g1.edges[e].second];
            a.first = perm[a.first];
            b.first = perm[b.first];
            int f = g1.flipped(e) ? 1 : 0;
            image[{a, b}] += 1 + 2 * f;
            if (a != b) {
                image[{b, a}] += 1 + 2 * f;
            }
        }
        if (image == target) {
            return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Vertex classes of a quad surface by label propagation to a fixed point.
inline std::size_t quad_vertex_count(const sqft::QuadSurface& qs)
{
    std::vector<int> label(4 * qs.square_count);
    std::iota(label.begin(), label.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : qs.gluings) {
            std::pair<int, int> pairs[2] = {{4 * a.square + a.side, 4 * b.square + (b.side + 1) % 4},
                                            {4 * a.square + (a.side + 1) % 4, 4 * b.square + b.side}};
            for (auto [x, y] : pairs) {
                int m = std::min(label[x], label[y]);
                if (label[x] != m || label[y] != m) {
                    label[x] = label[y] = m;
                    changed = true;
                }
            }
        }
    }
    std::sort(label.begin(), label.end());
    return static_cast<std::size_t>(std::unique(label.begin(), label.end()) - label.begin());
}

inline long quad_euler_char(const sqft::QuadSurface& qs)
{
    long v = static_cast<long>(quad_vertex_count(qs));
    long e = 4L * qs.square_count - static_cast<long>(qs.gluings.size());
    return v - e + qs.square_count + qs.vacuum_count;
}

/// Rank of an integer matrix, computed modulo a large prime.
inline std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows)
{
    const std::int64_t p = 1000000007;
    for (auto& r : rows) {
        for (auto& x : r) {
            x = ((x % p) + p) % p;
        }
    }
    auto inv = [&](std::int64_t a) {
        std::int64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) {
            ++piv;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[piv], rows[rank]);
        std::int64_t iv = inv(rows[rank][c]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && rows[r][c] != 0) {
                std::int64_t f = rows[r][c] * iv % p;
                for (std::size_t k = 0; k < cols; ++k) {
                    rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % p + p) % p;
                }
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace oracle
