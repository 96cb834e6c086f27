#pragma once

// Named surfaces with named suture systems.

#include <sqft/error.hpp>
#include <sqft/io.hpp>
#include <sqft/quad_surface.hpp>
#include <sqft/sutures.hpp>

#include <string>
#include <vector>

namespace sqft {

/// Every basic system, named basic-<bits> with bit 1 for Gamma_+.
inline void add_basic_sutures(io::Document& d)
{
    const int n = d.surface.square_count;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> signs;
        std::string bits;
        for (int k = 0; k < n; ++k) {
            bool plus = mask & (1u << (n - 1 - k));
            signs.push_back(plus ? 1 : -1);
            bits.push_back(plus ? '1' : '0');
        }
        d.sutures.emplace("basic-" + bits, basic(d.surface, signs));
    }
}

inline std::vector<std::string> fixture_names() { return {"square", "vacuum", "disc6", "annulus", "punctured-torus"}; }

inline io::Document fixture(const std::string& name)
{
    io::Document d;
    d.name = name;
    if (name == "square") {
        d.surface = {1, {}, 0};
        add_basic_sutures(d);
    } else if (name == "vacuum") {
        d.surface = {0, {}, 1};
        auto empty = basic(d.surface, {});
        d.sutures.emplace("empty", empty);
        // gap 0 lies in the - region
        for (int sign : {1, -1}) {
            auto s = empty;
            s.vacua[0].loops.push_back({-1, sign > 0 ? PointRef{0, 0} : PointRef{1, 0}});
            d.sutures.emplace(sign > 0 ? "loop-plus" : "loop-minus", s);
        }
    } else if (name == "disc6") {
        d.surface = {2, {{{0, 2}, {1, 3}}}, 0};
        add_basic_sutures(d);
        // three strands across the middle edge
        SutureSystem pm{d.surface, {CellSutures{{1, 1, 3, 1}, {}, {}}, CellSutures{{1, 1, 1, 3}, {}, {}}}, {}};
        pm.squares[0].matching = {{{1, 0}, {2, 0}}, {{0, 0}, {2, 1}}, {{2, 2}, {3, 0}}};
        pm.squares[1].matching = {{{2, 0}, {3, 0}}, {{1, 0}, {3, 1}}, {{0, 0}, {3, 2}}};
        d.sutures.emplace("gamma-pm", normalized(pm));
    } else if (name == "annulus") {
        d.surface = {2, {{{0, 1}, {1, 2}}, {{0, 3}, {1, 0}}}, 0};
        add_basic_sutures(d);
    } else if (name == "punctured-torus") {
        d.surface = {2, {{{0, 1}, {1, 2}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 0}}}, 0};
        add_basic_sutures(d);
    } else {
        throw ValidationError("unknown fixture '" + name + "'");
    }
    d.surface = normalized(d.surface);
    for (auto& [n, s] : d.sutures) {
        s.surface = d.surface;
    }
    return d;
}

} // namespace sqft
