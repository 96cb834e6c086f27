// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <sqft/fixtures.hpp>
#include <sqft/group_ring.hpp>
#include <sqft/heegaard.hpp>
#include <sqft/quad_surface.hpp>
#include <sqft/sutures.hpp>
#include <sqft/tape_graph.hpp>
#include <sqft/twisted_module.hpp>

#include "fixture_graphs.hpp"
#include "oracles.hpp"
#include "random_objects.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace sqft;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what)
    {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

/// Pascal's triangle.
Integer choose(int n, int k)
{
    std::vector<Integer> row{1};
    for (int i = 0; i < n; ++i) {
        std::vector<Integer> next(row.size() + 1, 0);
        for (std::size_t j = 0; j < row.size(); ++j) {
            next[j] += row[j];
            next[j + 1] += row[j];
        }
        row = std::move(next);
    }
    return k < 0 || k > n ? Integer(0) : row[k];
}

std::vector<QuadSurface> corpus()
{
    std::vector<QuadSurface> out;
    for (const auto& n : fixture_names()) {
        out.push_back(fixture(n).surface);
    }
    return out;
}

Outcome index_formula()
{
    Outcome o;
    std::mt19937 rng(1001);
    for (int t = 0; t < 250 && o.pass; ++t) {
        auto qs = testgen::random_quad_surface(rng, 5);
        auto st = stats(qs);
        o.check(st.index == st.vertex_pair_count - st.euler_char, "I != N - chi");
        o.check(st.euler_char == oracle::quad_euler_char(qs), "chi differs from the vertex-count oracle");
    }
    o.detail = o.pass ? "250 random surfaces" : o.detail;
    return o;
}

Outcome spine_round_trips()
{
    Outcome o;
    std::mt19937 rng(1002);
    for (int t = 0; t < 250 && o.pass; ++t) {
        auto g = testgen::random_spine(rng, 4, 5);
        o.check(canonical_signature(spine(reconstruct(g))) == canonical_signature(g), "spine(reconstruct(g)) != g");
    }
    for (const auto& qs : corpus()) {
        auto a = stats(qs), b = stats(reconstruct(spine(qs)));
        o.check(a.euler_char == b.euler_char && a.vertex_pair_count == b.vertex_pair_count && a.index == b.index &&
                    a.boundary_component_count == b.boundary_component_count,
                "reconstruct(spine(Q)) changes the statistics");
    }
    o.detail = o.pass ? "250 random spines, 5 fixtures" : o.detail;
    return o;
}

Outcome non_spine_rejection()
{
    Outcome o;
    auto r = check_spine(graphs::non_spine());
    o.check(!r.is_spine, "accepted as a spine");
    o.check(r.witness.has_value() && !r.walks[*r.witness].has_breakpoint(), "no breakpoint-free witness");
    o.check(is_spine(graphs::annulus_spine()), "the consistent ordering is rejected");
    bool threw = false;
    try {
        reconstruct(graphs::non_spine());
    } catch (const ValidationError&) {
        threw = true;
    }
    o.check(threw, "reconstruct did not refuse");
    o.detail = o.pass ? "witness component " + std::to_string(*r.witness) : o.detail;
    return o;
}

Outcome heegaard_stats()
{
    Outcome o;
    auto surfaces = corpus();
    int connected = 0;
    std::mt19937 rng(1004);
    for (int t = 0; t < 100; ++t) {
        surfaces.push_back(testgen::random_quad_surface(rng, 4));
    }
    for (const auto& qs : surfaces) {
        auto st = stats(qs);
        auto h = synth(qs);
        auto ds = diagram_stats(h);
        // genus is additive over components, so 1 - chi holds per component
        o.check(ds.genus == st.component_count - st.euler_char, "genus != sum of 1 - chi over components");
        if (st.component_count == 1) {
            o.check(ds.genus == 1 - st.euler_char, "genus != 1 - chi");
            ++connected;
        }
        o.check(ds.boundary_components == 2 * st.vertex_pair_count, "boundary count != 2N");
        for (std::size_t i = 0; i < h.curve_count; ++i) {
            for (std::size_t j = 0; j < h.curve_count; ++j) {
                o.check(h.intersections(i, j) == (i == j ? 2 : 0), "alpha/beta intersections");
            }
        }
    }
    o.detail = o.pass ? std::to_string(surfaces.size()) + " surfaces, " + std::to_string(connected) + " connected" : o.detail;
    return o;
}

Outcome periodic_domains()
{
    Outcome o;
    using clock = std::chrono::steady_clock;
    std::mt19937 rng(1005);
    auto surfaces = corpus();
    for (int t = 0; t < 50; ++t) {
        surfaces.push_back(reconstruct(testgen::random_spine(rng, 3, 4)));
    }
    for (const auto& qs : surfaces) {
        auto start = clock::now();
        auto h = synth(qs);
        auto domains = periodic_basis(h, h1_basis(qs));
        o.check(static_cast<long>(domains.size()) == stats(qs).h1_rank, "basis size != h1 rank");
        for (const auto& d : domains) {
            o.check(is_periodic(h, d.coef), "a basis domain is not periodic");
        }
        is_admissible_raw(h, domains);
        o.check(clock::now() - start < std::chrono::seconds(1), "over 1 s for one surface");
    }
    auto torus = fixture("punctured-torus").surface;
    auto th = synth(torus);
    auto tr = is_admissible_raw(th, periodic_basis(th, h1_basis(torus)));
    o.check(!tr.admissible, "punctured torus admissible");
    bool one_signed = !tr.witness.empty();
    bool nonzero = false;
    for (const auto& c : tr.witness) {
        one_signed = one_signed && c >= 0;
        nonzero = nonzero || c != 0;
    }
    o.check(one_signed && nonzero && is_periodic(th, tr.witness), "witness is not a one-signed periodic domain");
    auto disc = fixture("disc6").surface;
    auto dh = synth(disc);
    o.check(is_admissible_raw(dh, periodic_basis(dh, h1_basis(disc))).admissible, "6-disc inadmissible");
    o.detail = o.pass ? "55 surfaces; torus witness one-signed" : o.detail;
    return o;
}

Outcome admissibility_after_isotopy()
{
    Outcome o;
    std::mt19937 rng(1006);
    for (int t = 0; t < 120 && o.pass; ++t) {
        auto qs = reconstruct(testgen::random_spine(rng, 4, 5));
        auto h = synth(qs);
        auto arcs = zeta_arcs(h);
        o.check(disjoint_wedge(h, arcs), "zeta arcs meet the last wedge");
        auto cert = admissibility_certificate(h, arcs);
        o.check(cert.ok, cert.failures.empty() ? "certificate failed" : cert.failures.front());
    }
    o.detail = o.pass ? "120 random spine surfaces" : o.detail;
    return o;
}

Outcome sfh_computation()
{
    Outcome o;
    std::mt19937 rng(1007);
    auto surfaces = corpus();
    for (int t = 0; t < 60; ++t) {
        surfaces.push_back(testgen::random_quad_surface(rng, 4));
    }
    for (const auto& qs : surfaces) {
        auto r = sfh(qs);
        const int n = static_cast<int>(stats(qs).index);
        o.check(r.module.rank() == Integer(1) << n, "rank != 2^I");
        for (int e = -n; e <= n; e += 2) {
            o.check(r.graded_ranks[e] == choose(n, (n + e) / 2), "graded rank != binomial");
        }
        for (const auto& s : r.trace) {
            o.check(s.direct_summand, "inclusion is not a direct-summand injection");
        }
        auto g = spine(r.terminal, 1);
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            o.check(g.degree(v) <= 1, "terminal spine has a vertex of degree >= 2");
        }
    }
    auto d = sfh(fixture("disc6").surface);
    o.check(d.module.rank() == 4 && d.graded_ranks[0] == 2, "6-disc module is not rank 4 with rank-2 middle");
    o.detail = o.pass ? "65 surfaces; 6-disc rank 4, middle rank 2" : o.detail;
    return o;
}

Outcome mod2_elements()
{
    Outcome o;
    auto disc = fixture("disc6");
    o.check(suture_element_mod2(disc.sutures.at("basic-01")) == Mod2Vector::basis_vector("01"), "c(G-+) != |01>");
    o.check(suture_element_mod2(disc.sutures.at("basic-10")) == Mod2Vector::basis_vector("10"), "c(G+-) != |10>");
    o.check(suture_element_mod2(disc.sutures.at("gamma-pm")) == Mod2Vector{2, {"01", "10"}},
            "c(G+/-) != |01> + |10>");
    std::mt19937 rng(1008);
    int triples = 0, zeros = 0, live = 0;
    SutureReducer reducer;
    while (triples < 120 && o.pass) {
        auto qs = testgen::random_quad_surface(rng, 3);
        auto s = testgen::random_sutures(rng, qs, 5, 10);
        std::vector<AttachingArc> arcs;
        for (const auto& [a, b] : s.surface.gluings) {
            for (int m = 1; m <= s.squares[a.square].crossings[a.side] - 2; ++m) {
                arcs.push_back({a, m});
            }
        }
        auto c = reducer.element(s);
        if (is_trivial(s) || is_confining(s)) {
            o.check(c.support.empty(), "trivial or confining system with nonzero element");
            ++zeros;
        }
        for (unsigned seed = 1; seed <= 5; ++seed) {
            o.check(suture_element_mod2(s, 97 * seed + triples) == c, "reduction order changes the element");
        }
        if (arcs.empty()) {
            continue;
        }
        auto arc = arcs[testgen::uniform(rng, 0, static_cast<int>(arcs.size()) - 1)];
        auto up = reducer.element(bypass(s, arc, BypassDirection::up));
        auto down = reducer.element(bypass(s, arc, BypassDirection::down));
        o.check((c + up + down).support.empty(), "bypass triple does not sum to 0");
        live += c.support.empty() && up.support.empty() && down.support.empty() ? 0 : 1;
        ++triples;
    }
    o.check(live >= 20, "too few triples with a nonzero member");
    for (int sign : {1, -1}) {
        auto loop = fixture("vacuum").sutures.at(sign > 0 ? "loop-plus" : "loop-minus");
        o.check(suture_element_mod2(loop).support.empty(), "vacuum loop has nonzero element");
    }
    o.detail = o.pass ? std::to_string(triples) + " triples (" + std::to_string(live) + " nonzero), 5 strategies each, " +
                            std::to_string(zeros) + " trivial or confining"
                      : o.detail;
    return o;
}

Outcome euler_suite()
{
    Outcome o;
    auto sq = fixture("square");
    auto vac = fixture("vacuum");
    o.check(euler_class(sq.sutures.at("basic-1")) == 1, "e(G+) != 1");
    o.check(euler_class(sq.sutures.at("basic-0")) == -1, "e(G-) != -1");
    o.check(euler_class(vac.sutures.at("empty")) == 0, "e(G0) != 0");
    o.check(euler_class(vac.sutures.at("loop-plus")) == 2, "e(Go+) != 2");
    o.check(euler_class(vac.sutures.at("loop-minus")) == -2, "e(Go-) != -2");
    std::mt19937 rng(1009);
    int surgeries = 0, checked = 0;
    while (surgeries < 120 && o.pass) {
        auto qs = testgen::random_quad_surface(rng, 3);
        auto s = testgen::random_sutures(rng, qs, 5, 10);
        long e = euler_class(s);
        long index = stats(qs).index;
        if (!is_trivial(s)) {
            o.check(std::abs(e) <= index && (e - index) % 2 == 0, "|e| <= I or parity fails");
            ++checked;
        }
        for (const auto& [a, b] : s.surface.gluings) {
            if (s.squares[a.square].crossings[a.side] >= 3) {
                for (auto dir : {BypassDirection::up, BypassDirection::down}) {
                    o.check(euler_class(bypass(s, {a, 1}, dir)) == e, "bypass changes the Euler class");
                    ++surgeries;
                }
                break;
            }
        }
    }
    o.detail = o.pass ? std::to_string(surgeries) + " surgeries, " + std::to_string(checked) + " parity checks"
                      : o.detail;
    return o;
}

Outcome group_ring_suite()
{
    Outcome o;
    std::mt19937 rng(1010);
    for (int t = 0; t < 1200 && o.pass; ++t) {
        auto lat = make_lattice(static_cast<std::size_t>(testgen::uniform(rng, 0, 3)));
        auto a = testgen::random_element(rng, lat, 3);
        auto b = testgen::random_element(rng, lat, 3);
        bool monomial = a.terms().size() == 1 && abs(a.terms().begin()->second) == 1;
        o.check(is_unit(a) == monomial, "unit test disagrees with the monomial criterion");
        auto u = testgen::random_unit(rng, lat);
        o.check(is_unit(u) && reduce_mod2(u) == 1, "unit does not reduce to 1");
        o.check(reduce_mod2(a + b) == (reduce_mod2(a) + reduce_mod2(b)) % 2, "reduction not additive");
        o.check(reduce_mod2(a * b) == reduce_mod2(a) * reduce_mod2(b), "reduction not multiplicative");
        auto mid = make_lattice(static_cast<std::size_t>(testgen::uniform(rng, 0, 3)));
        auto tgt = make_lattice(static_cast<std::size_t>(testgen::uniform(rng, 0, 3)));
        auto f = testgen::random_ring_map(rng, lat, mid);
        auto g = testgen::random_ring_map(rng, mid, tgt);
        o.check(pushforward(compose(g, f), a) == pushforward(g, pushforward(f, a)), "pushforward not functorial");
    }
    o.detail = o.pass ? "1200 random cases" : o.detail;
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int number;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "index formula", 5, index_formula},
        {2, "spine round trips", 5, spine_round_trips},
        {3, "non-spine rejection", 1, non_spine_rejection},
        {4, "Heegaard statistics", 10, heegaard_stats},
        {5, "periodic domains", 60, periodic_domains},
        {6, "admissibility after isotopy", 10, admissibility_after_isotopy},
        {7, "SFH computation", 30, sfh_computation},
        {8, "mod-2 suture elements", 60, mod2_elements},
        {9, "Euler class suite", 30, euler_suite},
        {10, "group-ring suite", 5, group_ring_suite},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s) {
            o.pass = false;
            o.detail = "took longer than " + std::to_string(static_cast<int>(c.limit_s)) + " s";
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %2d %-30s %s  (%s; %.3f s, limit %.0f s)\n", c.number, c.name, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.limit_s);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
