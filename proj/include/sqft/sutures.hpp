#pragma once

// Suture systems on quadrangulated occupied surfaces: chord diagrams per
// cell, Euler class, confinement and triviality, bypass surgery and the
// mod-2 suture element.
//
// A cell is a square (four sides) or a vacuum (two sides, each crossed once).
// Points on side i are numbered from its start corner; globally they run
// side 0 first. Gap g is the boundary stretch after global point g, and its
// colour is (-1)^(i+t+1) for the point (i, t); corners sit in gaps of their
// own sign.

#include <sqft/error.hpp>
#include <sqft/quad_surface.hpp>
#include <sqft/twisted_module.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sqft {

struct PointRef {
    int side = 0;
    int index = 0;

    friend auto operator<=>(const PointRef&, const PointRef&) = default;
};

/// Closed loop inside a cell. Top-level loops (parent -1) sit in the face
/// containing `gap`; nested loops sit inside their parent.
struct SutureLoop {
    int parent = -1;
    PointRef gap;

    friend bool operator==(const SutureLoop&, const SutureLoop&) = default;
};

struct CellSutures {
    std::vector<int> crossings;
    std::vector<std::pair<PointRef, PointRef>> matching;
    std::vector<SutureLoop> loops;

    int point_count() const { return std::accumulate(crossings.begin(), crossings.end(), 0); }

    int global(const PointRef& p) const
    {
        int g = 0;
        for (int s = 0; s < p.side; ++s) {
            g += crossings[s];
        }
        return g + p.index;
    }

    PointRef local(int g) const
    {
        for (int s = 0; s < static_cast<int>(crossings.size()); ++s) {
            if (g < crossings[s]) {
                return {s, g};
            }
            g -= crossings[s];
        }
        throw ValidationError("point index out of range");
    }

    /// Partner of each global point under the matching.
    std::vector<int> partners() const
    {
        std::vector<int> p(point_count(), -1);
        for (const auto& [a, b] : matching) {
            p.at(global(a)) = global(b);
            p.at(global(b)) = global(a);
        }
        return p;
    }

    int gap_color(int g) const
    {
        auto p = local(g);
        return (p.side + p.index + 1) % 2 == 0 ? 1 : -1;
    }

    friend bool operator==(const CellSutures&, const CellSutures&) = default;
};

/// Canonical form: each chord with the smaller point first, chords sorted.
inline CellSutures normalized(CellSutures c)
{
    for (auto& [a, b] : c.matching) {
        if (b < a) {
            std::swap(a, b);
        }
    }
    std::sort(c.matching.begin(), c.matching.end());
    return c;
}

struct SutureSystem {
    QuadSurface surface;
    std::vector<CellSutures> squares;
    std::vector<CellSutures> vacua;

    friend bool operator==(const SutureSystem&, const SutureSystem&) = default;
};

inline SutureSystem normalized(SutureSystem s)
{
    for (auto& c : s.squares) {
        c = normalized(std::move(c));
    }
    for (auto& c : s.vacua) {
        c = normalized(std::move(c));
    }
    return s;
}

/// The single arc of a vacuum.
inline CellSutures vacuum_sutures() { return {{1, 1}, {{{0, 0}, {1, 0}}}, {}}; }

/// Gamma_+ cuts off the + corners, Gamma_- the - corners.
inline CellSutures basic_square(int sign)
{
    if (sign > 0) {
        return normalized(CellSutures{{1, 1, 1, 1}, {{{3, 0}, {0, 0}}, {{1, 0}, {2, 0}}}, {}});
    }
    return normalized(CellSutures{{1, 1, 1, 1}, {{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}}, {}});
}

/// One sign per square.
inline SutureSystem basic(const QuadSurface& qs, const std::vector<int>& signs)
{
    validate(qs).raise_if_failed("invalid quad surface");
    if (static_cast<int>(signs.size()) != qs.square_count) {
        throw ValidationError("basic assignment must give one sign per square");
    }
    SutureSystem s{normalized(qs), {}, {}};
    for (int sign : signs) {
        s.squares.push_back(basic_square(sign));
    }
    for (int v = 0; v < qs.vacuum_count; ++v) {
        s.vacua.push_back(vacuum_sutures());
    }
    return s;
}

/// Faces of a cell cut by its chords: orbits of gap -> gap after the partner
/// of the next point. Returns the face id of every gap.
inline std::vector<int> gap_faces(const CellSutures& c, int* face_count = nullptr)
{
    const int n = c.point_count();
    auto partner = c.partners();
    std::vector<int> face(n, -1);
    int faces = 0;
    for (int g = 0; g < n; ++g) {
        if (face[g] >= 0) {
            continue;
        }
        int x = g;
        while (face[x] < 0) {
            face[x] = faces;
            x = partner[(x + 1) % n];
        }
        ++faces;
    }
    if (face_count) {
        *face_count = faces;
    }
    return face;
}

inline Diagnostics validate_cell(const CellSutures& c, std::size_t sides, const std::string& where)
{
    Diagnostics d;
    if (c.crossings.size() != sides) {
        d.addf(where, ": expected ", sides, " crossing counts");
        return d;
    }
    for (std::size_t s = 0; s < sides; ++s) {
        if (c.crossings[s] < 1 || c.crossings[s] % 2 == 0) {
            d.addf(where, ": side ", s, " has crossing count ", c.crossings[s], ", which must be odd");
        }
    }
    if (!d.ok()) {
        return d;
    }
    const int n = c.point_count();
    std::vector<int> seen(n, 0);
    for (const auto& [a, b] : c.matching) {
        for (const auto& p : {a, b}) {
            if (p.side < 0 || p.side >= static_cast<int>(sides) || p.index < 0 || p.index >= c.crossings[p.side]) {
                d.addf(where, ": point (", p.side, ",", p.index, ") out of range");
                return d;
            }
            ++seen[c.global(p)];
        }
        if (a == b) {
            d.addf(where, ": chord joins a point to itself");
        }
    }
    for (int g = 0; g < n; ++g) {
        if (seen[g] != 1) {
            auto p = c.local(g);
            d.addf(where, ": point (", p.side, ",", p.index, ") is used ", seen[g], " times");
        }
    }
    if (!d.ok()) {
        return d;
    }
    for (std::size_t x = 0; x < c.matching.size(); ++x) {
        for (std::size_t y = x + 1; y < c.matching.size(); ++y) {
            int a = c.global(c.matching[x].first), b = c.global(c.matching[x].second);
            int p = c.global(c.matching[y].first), q = c.global(c.matching[y].second);
            if (a > b) {
                std::swap(a, b);
            }
            if (p > q) {
                std::swap(p, q);
            }
            if ((a < p && p < b && b < q) || (p < a && a < q && q < b)) {
                d.addf(where, ": chords ", x, " and ", y, " cross");
            }
        }
    }
    if (!d.ok()) {
        return d;
    }
    // every face has a single colour
    auto face = gap_faces(c);
    std::map<int, int> color;
    for (int g = 0; g < n; ++g) {
        auto [it, fresh] = color.try_emplace(face[g], c.gap_color(g));
        if (!fresh && it->second != c.gap_color(g)) {
            d.addf(where, ": region colouring is inconsistent");
            break;
        }
    }
    for (std::size_t k = 0; k < c.loops.size(); ++k) {
        const auto& l = c.loops[k];
        if (l.parent >= static_cast<int>(k) || l.parent < -1) {
            d.addf(where, ": loop ", k, " must have an earlier parent");
        } else if (l.parent == -1) {
            if (l.gap.side < 0 || l.gap.side >= static_cast<int>(sides) || l.gap.index < 0 ||
                l.gap.index >= c.crossings[l.gap.side]) {
                d.addf(where, ": loop ", k, " sits at a gap that does not exist");
            }
        }
    }
    return d;
}

inline Diagnostics validate(const SutureSystem& s)
{
    Diagnostics d = validate(s.surface);
    if (!d.ok()) {
        return d;
    }
    if (static_cast<int>(s.squares.size()) != s.surface.square_count) {
        d.addf("suture system has ", s.squares.size(), " squares, surface has ", s.surface.square_count);
    }
    if (static_cast<int>(s.vacua.size()) != s.surface.vacuum_count) {
        d.addf("suture system has ", s.vacua.size(), " vacua, surface has ", s.surface.vacuum_count);
    }
    if (!d.ok()) {
        return d;
    }
    for (std::size_t k = 0; k < s.squares.size(); ++k) {
        auto dc = validate_cell(s.squares[k], 4, "square " + std::to_string(k));
        d.messages.insert(d.messages.end(), dc.messages.begin(), dc.messages.end());
    }
    for (std::size_t k = 0; k < s.vacua.size(); ++k) {
        auto dc = validate_cell(s.vacua[k], 2, "vacuum " + std::to_string(k));
        d.messages.insert(d.messages.end(), dc.messages.begin(), dc.messages.end());
        if (dc.ok() && (s.vacua[k].crossings != std::vector<int>{1, 1})) {
            d.addf("vacuum ", k, ": each side is crossed exactly once");
        }
    }
    if (!d.ok()) {
        return d;
    }
    SurfaceIndex idx(s.surface);
    for (int sq = 0; sq < s.surface.square_count; ++sq) {
        for (int side = 0; side < 4; ++side) {
            auto p = idx.partner({sq, side});
            int c = s.squares[sq].crossings[side];
            if (!p && c != 1) {
                d.addf("square ", sq, " side ", side, " is a boundary side crossed ", c, " times; must be 1");
            }
            if (p && s.squares[p->square].crossings[p->side] != c) {
                d.addf("glued sides (", sq, ",", side, ") and (", p->square, ",", p->side,
                       ") have different crossing counts");
            }
        }
    }
    return d;
}

namespace detail {

/// Faces of every cell, with loop interiors as extra faces, and the side
/// segments that join them.
struct FaceComplex {
    struct Face {
        int cell; // squares first, then vacua
        int color;
        int holes;     // top-level loops (or child loops) inside
        bool interior; // inside a loop
    };
    std::vector<Face> faces;
    std::vector<std::vector<int>> gap_face; // per cell: gap -> face id
    std::vector<int> loop_face;             // per cell offset + loop -> interior face id
    std::vector<int> loop_offset;
};

inline int segment_gap(const CellSutures& c, int side, int seg)
{
    if (seg >= 1) {
        return c.global({side, seg - 1});
    }
    int g = c.global({side, 0}) - 1;
    return (g + c.point_count()) % c.point_count();
}

inline const CellSutures& cell_at(const SutureSystem& s, int cell)
{
    return cell < static_cast<int>(s.squares.size()) ? s.squares[cell] : s.vacua[cell - s.squares.size()];
}

inline FaceComplex build_faces(const SutureSystem& s)
{
    FaceComplex fc;
    const int cells = static_cast<int>(s.squares.size() + s.vacua.size());
    for (int cell = 0; cell < cells; ++cell) {
        const auto& c = cell_at(s, cell);
        int count = 0;
        auto gf = gap_faces(c, &count);
        const int base = static_cast<int>(fc.faces.size());
        for (int f = 0; f < count; ++f) {
            fc.faces.push_back({cell, 0, 0, false});
        }
        for (int g = 0; g < c.point_count(); ++g) {
            gf[g] += base;
            fc.faces[gf[g]].color = c.gap_color(g);
        }
        fc.loop_offset.push_back(static_cast<int>(fc.loop_face.size()));
        for (const auto& l : c.loops) {
            int container = l.parent < 0 ? gf[c.global(l.gap)] : fc.loop_face[fc.loop_offset.back() + l.parent];
            fc.faces[container].holes += 1;
            fc.loop_face.push_back(static_cast<int>(fc.faces.size()));
            fc.faces.push_back({cell, -fc.faces[container].color, 0, true});
        }
        fc.gap_face.push_back(std::move(gf));
    }
    return fc;
}

/// Side segments of squares, with glued pairs identified: (cell, side, seg).
struct SegmentClass {
    int cell, side, seg;
    bool boundary;
};

inline std::vector<SegmentClass> segment_classes(const SutureSystem& s, const SurfaceIndex& idx)
{
    std::vector<SegmentClass> out;
    for (int sq = 0; sq < s.surface.square_count; ++sq) {
        for (int side = 0; side < 4; ++side) {
            auto p = idx.partner({sq, side});
            if (p && Slot{sq, side} > *p) {
                continue;
            }
            for (int seg = 0; seg <= s.squares[sq].crossings[side]; ++seg) {
                out.push_back({sq, side, seg, !p});
            }
        }
    }
    for (std::size_t v = 0; v < s.vacua.size(); ++v) {
        for (int side = 0; side < 2; ++side) {
            for (int seg = 0; seg <= 1; ++seg) {
                out.push_back({static_cast<int>(s.squares.size() + v), side, seg, true});
            }
        }
    }
    return out;
}

} // namespace detail

/// e = chi(R+) - chi(R-) from colour-signed cell counts: corners (vertex
/// classes), identified side segments and faces with their holes.
inline long euler_class(const SutureSystem& s)
{
    validate(s).raise_if_failed("invalid suture system");
    SurfaceIndex idx(s.surface);
    long e = 0;
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        e += idx.class_sign(k);
    }
    // each vacuum has one corner of each sign
    auto fc = detail::build_faces(s);
    for (const auto& seg : detail::segment_classes(s, idx)) {
        const auto& c = detail::cell_at(s, seg.cell);
        e -= c.gap_color(detail::segment_gap(c, seg.side, seg.seg));
    }
    for (const auto& f : fc.faces) {
        e += f.color * (1 - f.holes);
    }
    return e;
}

struct RegionInfo {
    int color;
    bool touches_boundary;
    std::vector<int> faces;
};

/// Components of the complement of the sutures, glued across side segments.
inline std::vector<RegionInfo> regions(const SutureSystem& s)
{
    validate(s).raise_if_failed("invalid suture system");
    SurfaceIndex idx(s.surface);
    auto fc = detail::build_faces(s);
    std::vector<int> parent(fc.faces.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    std::vector<bool> boundary(fc.faces.size(), false);
    for (const auto& seg : detail::segment_classes(s, idx)) {
        const auto& c = detail::cell_at(s, seg.cell);
        int f = fc.gap_face[seg.cell][detail::segment_gap(c, seg.side, seg.seg)];
        if (seg.boundary) {
            boundary[f] = true;
            continue;
        }
        auto p = *idx.partner({seg.cell, seg.side});
        const auto& pc = s.squares[p.square];
        int pf = fc.gap_face[p.square][detail::segment_gap(pc, p.side, c.crossings[seg.side] - seg.seg)];
        parent[find(f)] = find(pf);
    }
    std::map<int, RegionInfo> by_root;
    for (int f = 0; f < static_cast<int>(fc.faces.size()); ++f) {
        auto& r = by_root.try_emplace(find(f), RegionInfo{fc.faces[f].color, false, {}}).first->second;
        r.faces.push_back(f);
        r.touches_boundary = r.touches_boundary || boundary[f];
    }
    std::vector<RegionInfo> out;
    for (auto& [root, r] : by_root) {
        out.push_back(std::move(r));
    }
    return out;
}

inline bool is_confining(const SutureSystem& s)
{
    auto rs = regions(s);
    return std::any_of(rs.begin(), rs.end(), [](const RegionInfo& r) { return !r.touches_boundary; });
}

/// Point of a square side, as seen from the glued neighbour.
struct SurfacePoint {
    int square;
    int side;
    int index;

    friend auto operator<=>(const SurfacePoint&, const SurfacePoint&) = default;
};

/// Closed suture components that cross square sides, as sets of chords
/// (square, chord index).
inline std::vector<std::vector<std::pair<int, int>>> closed_components(const SutureSystem& s)
{
    SurfaceIndex idx(s.surface);
    std::map<SurfacePoint, std::pair<int, int>> chord_at;
    for (int sq = 0; sq < s.surface.square_count; ++sq) {
        const auto& c = s.squares[sq];
        for (int k = 0; k < static_cast<int>(c.matching.size()); ++k) {
            chord_at[{sq, c.matching[k].first.side, c.matching[k].first.index}] = {sq, k};
            chord_at[{sq, c.matching[k].second.side, c.matching[k].second.index}] = {sq, k};
        }
    }
    std::set<std::pair<int, int>> visited;
    auto across = [&](const SurfacePoint& p) -> std::optional<SurfacePoint> {
        auto q = idx.partner({p.square, p.side});
        if (!q) {
            return std::nullopt;
        }
        int c = s.squares[p.square].crossings[p.side];
        return SurfacePoint{q->square, q->side, c - 1 - p.index};
    };
    auto other_end = [&](std::pair<int, int> chord, const SurfacePoint& p) {
        const auto& m = s.squares[chord.first].matching[chord.second];
        SurfacePoint a{chord.first, m.first.side, m.first.index};
        SurfacePoint b{chord.first, m.second.side, m.second.index};
        return a == p ? b : a;
    };
    // arcs start on boundary sides
    for (const auto& [p, chord] : chord_at) {
        if (across(p) || visited.count(chord)) {
            continue;
        }
        SurfacePoint cur = p;
        auto ch = chord;
        while (true) {
            visited.insert(ch);
            SurfacePoint end = other_end(ch, cur);
            auto nx = across(end);
            if (!nx) {
                break;
            }
            cur = *nx;
            ch = chord_at.at(cur);
        }
    }
    std::vector<std::vector<std::pair<int, int>>> out;
    for (const auto& [p, chord] : chord_at) {
        if (visited.count(chord)) {
            continue;
        }
        std::vector<std::pair<int, int>> comp;
        SurfacePoint cur = p;
        auto ch = chord;
        while (!visited.count(ch)) {
            visited.insert(ch);
            comp.push_back(ch);
            cur = *across(other_end(ch, cur));
            ch = chord_at.at(cur);
        }
        out.push_back(std::move(comp));
    }
    return out;
}

namespace detail {

/// Whether cutting the surface along the chords of C leaves a disc that
/// avoids the boundary.
inline bool bounds_disc(const SutureSystem& s, const std::vector<std::pair<int, int>>& comp)
{
    SurfaceIndex idx(s.surface);
    const int n = s.surface.square_count;
    // points of C on every side, sorted by position
    std::vector<std::vector<std::vector<int>>> on_side(n, std::vector<std::vector<int>>(4));
    std::vector<std::vector<std::pair<PointRef, PointRef>>> chords(n);
    for (auto [sq, k] : comp) {
        const auto& m = s.squares[sq].matching[k];
        chords[sq].push_back(m);
        on_side[sq][m.first.side].push_back(m.first.index);
        on_side[sq][m.second.side].push_back(m.second.index);
    }
    // a reduced cell containing only the points of C, reusing the face machinery
    std::vector<CellSutures> cut(n);
    std::vector<std::vector<std::map<int, int>>> rank(n, std::vector<std::map<int, int>>(4));
    for (int sq = 0; sq < n; ++sq) {
        cut[sq].crossings.assign(4, 0);
        for (int side = 0; side < 4; ++side) {
            auto& v = on_side[sq][side];
            std::sort(v.begin(), v.end());
            cut[sq].crossings[side] = static_cast<int>(v.size());
            for (int r = 0; r < static_cast<int>(v.size()); ++r) {
                rank[sq][side][v[r]] = r;
            }
        }
        for (const auto& [a, b] : chords[sq]) {
            cut[sq].matching.push_back({{a.side, rank[sq][a.side][a.index]}, {b.side, rank[sq][b.side][b.index]}});
        }
    }
    // faces per square; a square without points of C is one face
    std::vector<std::vector<int>> face_of_gap(n);
    std::vector<int> base(n);
    int total = 0;
    for (int sq = 0; sq < n; ++sq) {
        base[sq] = total;
        if (cut[sq].point_count() == 0) {
            total += 1;
            continue;
        }
        int count = 0;
        face_of_gap[sq] = gap_faces(cut[sq], &count);
        total += count;
    }
    auto face_of_segment = [&](int sq, int side, int seg) {
        if (cut[sq].point_count() == 0) {
            return base[sq];
        }
        return base[sq] + face_of_gap[sq][segment_gap(cut[sq], side, seg)];
    };
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    std::vector<long> chi(total, 1); // each face is a disc
    std::vector<bool> boundary(total, false);
    std::vector<std::pair<int, int>> seg_faces; // (face, -1) for the Euler count
    for (int sq = 0; sq < n; ++sq) {
        for (int side = 0; side < 4; ++side) {
            auto p = idx.partner({sq, side});
            if (p && Slot{sq, side} > *p) {
                continue;
            }
            int c = cut[sq].crossings[side];
            for (int seg = 0; seg <= c; ++seg) {
                int f = face_of_segment(sq, side, seg);
                if (!p) {
                    boundary[f] = true;
                } else {
                    int g = face_of_segment(p->square, p->side, c - seg);
                    parent[find(f)] = find(g);
                }
                seg_faces.push_back({f, -1});
            }
        }
    }
    std::map<int, long> piece_chi;
    std::map<int, bool> piece_boundary;
    for (int f = 0; f < total; ++f) {
        piece_chi[find(f)] += 1;
        piece_boundary[find(f)] = piece_boundary[find(f)] || boundary[f];
    }
    for (auto [f, w] : seg_faces) {
        piece_chi[find(f)] += w;
    }
    for (std::size_t k = 0; k < idx.class_count(); ++k) {
        const auto& fan = idx.fan(k);
        // the corner c_i lies on the segment (i, 0)
        int f = face_of_segment(fan[0].square, fan[0].corner, 0);
        piece_chi[find(f)] += 1;
    }
    for (const auto& [root, x] : piece_chi) {
        if (x == 1 && !piece_boundary[root]) {
            return true;
        }
    }
    return false;
}

} // namespace detail

/// A loop inside a cell, or a closed component bounding a disc.
inline bool is_trivial(const SutureSystem& s)
{
    validate(s).raise_if_failed("invalid suture system");
    for (const auto& c : s.squares) {
        if (!c.loops.empty()) {
            return true;
        }
    }
    for (const auto& c : s.vacua) {
        if (!c.loops.empty()) {
            return true;
        }
    }
    for (const auto& comp : closed_components(s)) {
        if (detail::bounds_disc(s, comp)) {
            return true;
        }
    }
    return false;
}

enum class BypassDirection { up, down };

struct AttachingArc {
    Slot edge;  // one side of an internal edge
    int middle; // middle crossing index on that side
};

namespace detail {

/// Replace points first, first+1, first+2 on one side by a single point.
/// cap_low joins the first two by a cap and runs the third to the new point;
/// otherwise the last two are capped and the first runs to the new point.
inline void surger_side(CellSutures& c, int side, int first, bool cap_low)
{
    const int n = c.point_count();
    auto partner = c.partners();
    const int g0 = c.global({side, first});
    std::vector<int> link(n, -2); // -2: ordinary point; -1: joined to the new point
    if (cap_low) {
        link[g0] = g0 + 1;
        link[g0 + 1] = g0;
        link[g0 + 2] = -1;
    } else {
        link[g0 + 1] = g0 + 2;
        link[g0 + 2] = g0 + 1;
        link[g0] = -1;
    }
    const int fresh = n; // id of the new point
    // new global numbering
    auto renumber = [&](int g) {
        if (g == fresh) {
            return g0;
        }
        return g < g0 ? g : g - 2;
    };
    // old face of every gap, for relocating loops
    auto old_face = gap_faces(c);
    CellSutures out;
    out.crossings = c.crossings;
    out.crossings[side] -= 2;
    std::vector<bool> used(n, false);
    auto walk = [&](int start) {
        // from an ordinary point or the new point, follow chords and local links
        int x = start == fresh ? -1 : start;
        int y;
        if (start == fresh) {
            // the new point is linked to one special point
            int s = link[g0] == -1 ? g0 : g0 + 2;
            used[s] = true;
            y = partner[s];
        } else {
            used[x] = true;
            y = partner[x];
        }
        while (link[y] != -2) {
            used[y] = true;
            if (link[y] == -1) {
                return fresh;
            }
            int z = link[y];
            used[z] = true;
            y = partner[z];
        }
        used[y] = true;
        return y;
    };
    std::set<std::pair<int, int>> chords;
    for (int g = 0; g < n; ++g) {
        if (link[g] == -2 && !used[g]) {
            int end = walk(g);
            chords.insert({std::min(renumber(g), renumber(end)), std::max(renumber(g), renumber(end))});
        }
    }
    if (!std::any_of(chords.begin(), chords.end(),
                     [&](auto p) { return p.first == g0 || p.second == g0; })) {
        int end = walk(fresh);
        chords.insert({std::min(g0, renumber(end)), std::max(g0, renumber(end))});
    }
    for (auto [a, b] : chords) {
        out.matching.push_back({out.local(a), out.local(b)});
    }
    // the two capped points closing up on themselves leave a loop
    int cap_a = cap_low ? g0 : g0 + 1;
    std::optional<int> new_loop_gap;
    const int m = out.point_count();
    const int before_new = (g0 - 1 + m) % m;
    const int after_new = g0;
    if (partner[cap_a] == cap_a + 1) {
        new_loop_gap = cap_low ? before_new : after_new;
    }
    // gaps inside the surgery disc: after g0 and after g0+1
    const int inside_cap = cap_low ? g0 : g0 + 1;
    const int merged = cap_low ? g0 + 1 : g0;
    auto map_gap = [&](int g) -> std::optional<int> {
        if (g == merged) {
            return cap_low ? before_new : after_new;
        }
        if (g == inside_cap) {
            return std::nullopt; // inside the new cap
        }
        if (g == g0 + 2) {
            return after_new;
        }
        return renumber(g);
    };
    std::vector<SutureLoop> loops;
    int created = -1;
    if (new_loop_gap) {
        created = 0;
        loops.push_back({-1, out.local(*new_loop_gap)});
    }
    const int shift = static_cast<int>(loops.size());
    for (const auto& l : c.loops) {
        if (l.parent >= 0) {
            loops.push_back({l.parent + shift, {}});
            continue;
        }
        int g = c.global(l.gap);
        int face = old_face[g];
        // prefer a gap of the same face away from the surgery disc
        std::optional<int> target;
        for (int h = 0; h < n && !target; ++h) {
            if (old_face[h] == face && h != g0 && h != g0 + 1) {
                target = map_gap(h);
            }
        }
        if (!target) {
            target = map_gap(g);
        }
        if (target) {
            loops.push_back({-1, out.local(*target)});
        } else {
            // the face was the sliver closed into the new loop
            loops.push_back({created, {}});
        }
    }
    out.loops = std::move(loops);
    c = normalized(std::move(out));
}

} // namespace detail

/// Bypass surgery along the arc through crossings middle-1, middle, middle+1.
inline SutureSystem bypass(const SutureSystem& s, const AttachingArc& arc, BypassDirection dir)
{
    validate(s).raise_if_failed("invalid suture system");
    SurfaceIndex idx(s.surface);
    auto other = idx.partner(arc.edge);
    if (!other) {
        throw ValidationError("attaching arc must lie on an internal edge");
    }
    const int c = s.squares[arc.edge.square].crossings[arc.edge.side];
    if (c < 3) {
        throw ValidationError("attaching arc needs at least 3 crossings on the edge; found " + std::to_string(c));
    }
    if (arc.middle < 1 || arc.middle > c - 2) {
        throw ValidationError("middle crossing index must lie in 1.." + std::to_string(c - 2));
    }
    SutureSystem out = s;
    const bool cap_low = dir == BypassDirection::up;
    if (other->square == arc.edge.square) {
        // both sides on one square: apply the two halves in turn, higher side first
        auto& cell = out.squares[arc.edge.square];
        int first_a = arc.middle - 1;
        int first_b = c - arc.middle - 2;
        if (cell.global({other->side, first_b}) > cell.global({arc.edge.side, first_a})) {
            detail::surger_side(cell, other->side, first_b, cap_low);
            detail::surger_side(cell, arc.edge.side, first_a, cap_low);
        } else {
            detail::surger_side(cell, arc.edge.side, first_a, cap_low);
            detail::surger_side(cell, other->side, first_b, cap_low);
        }
    } else {
        detail::surger_side(out.squares[arc.edge.square], arc.edge.side, arc.middle - 1, cap_low);
        detail::surger_side(out.squares[other->square], other->side, c - arc.middle - 2, cap_low);
    }
    return normalized(out);
}

/// Sutures carried along standard_glue: both sides are boundary sides, each
/// crossed once, so the cells are unchanged.
inline SutureSystem glue_sutures(const SutureSystem& s, const Slot& a, const Slot& b)
{
    validate(s).raise_if_failed("invalid suture system");
    SutureSystem out = s;
    out.surface = standard_glue(s.surface, a, b);
    validate(out).raise_if_failed("glued suture system");
    return out;
}

/// Sutures carried along create_square, with Gamma_+ or Gamma_- on the new square.
inline SutureSystem add_square(const SutureSystem& s, int sign)
{
    SutureSystem out = s;
    out.surface = create_square(s.surface);
    out.squares.push_back(basic_square(sign));
    return out;
}

/// Whether every square carries Gamma_+ or Gamma_-; the bit string has a
/// 1 for each Gamma_+.
inline std::optional<Bitstring> basic_bits(const SutureSystem& s)
{
    Bitstring bits;
    for (const auto& c : s.squares) {
        auto n = normalized(c);
        if (n == basic_square(1)) {
            bits.push_back('1');
        } else if (n == basic_square(-1)) {
            bits.push_back('0');
        } else {
            return std::nullopt;
        }
    }
    for (const auto& c : s.vacua) {
        if (!c.loops.empty()) {
            return std::nullopt;
        }
    }
    return bits;
}

/// Cache capacity from SQFT_SUTURE_CACHE_SIZE; 0 disables the cache.
inline std::size_t suture_cache_capacity()
{
    const char* env = std::getenv("SQFT_SUTURE_CACHE_SIZE");
    if (!env || !*env) {
        return 1u << 16;
    }
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(env, &used);
        if (used == std::string(env).size()) {
            return static_cast<std::size_t>(v);
        }
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string("SQFT_SUTURE_CACHE_SIZE must be a non-negative integer, got '") + env + "'");
}

/// Mod-2 suture elements by bypass reduction. Without a seed the lowest
/// edge carrying at least three crossings is reduced at its lowest middle
/// index; with a seed the edge and index are drawn at random.
class SutureReducer {
public:
    explicit SutureReducer(std::optional<unsigned> seed = std::nullopt, std::size_t capacity = suture_cache_capacity())
        : capacity_(capacity)
    {
        if (seed) {
            rng_.emplace(*seed);
        }
    }

    Mod2Vector element(const SutureSystem& s)
    {
        validate(s).raise_if_failed("invalid suture system");
        const int index = static_cast<int>(stats(s.surface).index);
        return reduce(normalized(s), index);
    }

    std::size_t cache_size() const { return cache_.size(); }
    std::size_t cache_hits() const { return hits_; }
    std::size_t bypass_count() const { return bypasses_; }

private:
    static std::string key(const SutureSystem& s)
    {
        std::ostringstream out;
        for (const auto& [a, b] : s.surface.gluings) {
            out << a.square << a.side << b.square << b.side << ';';
        }
        out << '|';
        for (const auto& c : s.squares) {
            for (int x : c.crossings) {
                out << x << ',';
            }
            for (const auto& [a, b] : c.matching) {
                out << a.side << '.' << a.index << '-' << b.side << '.' << b.index << ',';
            }
            out << '/';
        }
        return out.str();
    }

    Mod2Vector reduce(const SutureSystem& s, int index)
    {
        // loops are trivial and never enter the cache
        if (is_trivial(s) || is_confining(s)) {
            return Mod2Vector{index, {}};
        }
        std::string k;
        if (capacity_ > 0) {
            k = key(s);
            if (auto it = cache_.find(k); it != cache_.end()) {
                ++hits_;
                return it->second;
            }
        }
        Mod2Vector result{index, {}};
        if (auto bits = basic_bits(s)) {
            result = Mod2Vector::basis_vector(*bits);
        } else {
            auto arc = choose_arc(s);
            ++bypasses_;
            result = reduce(bypass(s, arc, BypassDirection::up), index) +
                     reduce(bypass(s, arc, BypassDirection::down), index);
        }
        if (capacity_ > 0) {
            if (cache_.size() >= capacity_) {
                cache_.clear();
            }
            cache_.emplace(std::move(k), result);
        }
        return result;
    }

    AttachingArc choose_arc(const SutureSystem& s)
    {
        std::vector<AttachingArc> options;
        for (const auto& [a, b] : s.surface.gluings) {
            int c = s.squares[a.square].crossings[a.side];
            if (c < 3) {
                continue;
            }
            if (!rng_) {
                return {a, 1};
            }
            for (int m = 1; m <= c - 2; ++m) {
                options.push_back({a, m});
            }
        }
        if (options.empty()) {
            throw ValidationError("suture system is not basic but has no edge with three crossings");
        }
        return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(*rng_)];
    }

    std::size_t capacity_;
    std::optional<std::mt19937> rng_;
    std::unordered_map<std::string, Mod2Vector> cache_;
    std::size_t hits_ = 0;
    std::size_t bypasses_ = 0;
};

inline Mod2Vector suture_element_mod2(const SutureSystem& s, std::optional<unsigned> seed = std::nullopt)
{
    return SutureReducer(seed).element(s);
}

} // namespace sqft
