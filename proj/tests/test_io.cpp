#include <catch_amalgamated.hpp>

#include <sqft/fixtures.hpp>
#include <sqft/io.hpp>

#include "fixture_graphs.hpp"
#include "random_objects.hpp"

using namespace sqft;

TEST_CASE("group-ring elements round-trip")
{
    std::mt19937 rng(91);
    auto lat = make_lattice(2);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = testgen::random_element(rng, lat, 4);
        auto j = io::to_json(a);
        auto b = io::group_ring_from_json(io::parse_text(j.dump()));
        REQUIRE(to_string(b) == to_string(a));
        REQUIRE(b.lattice()->labels() == lat->labels());
    }
    auto big = GroupRingElement::constant(lat, Integer("123456789012345678901234567890"));
    REQUIRE(io::group_ring_from_json(io::to_json(big)).terms() == big.terms());
    // terms sorted by exponent
    auto q = GroupRingElement::generator(lat, 0);
    auto j = io::to_json(q + GroupRingElement::generator(lat, 0, -1));
    REQUIRE(j["terms"][0]["exp"][0] == -1);
}

TEST_CASE("tape graphs and surfaces round-trip")
{
    for (const auto& g : {graphs::single_edge(), graphs::non_spine(), graphs::torus_spine()}) {
        REQUIRE(io::tape_graph_from_json(io::to_json(g)) == g);
    }
    TapeGraph flipped = graphs::annulus_spine();
    flipped.flips = {true, false};
    REQUIRE(io::tape_graph_from_json(io::to_json(flipped)) == flipped);

    std::mt19937 rng(92);
    for (int trial = 0; trial < 100; ++trial) {
        auto qs = testgen::random_quad_surface(rng, 4);
        REQUIRE(io::quad_surface_from_json(io::parse_text(io::to_json(qs).dump())) == qs);
    }
}

TEST_CASE("suture systems and vectors round-trip")
{
    std::mt19937 rng(93);
    for (int trial = 0; trial < 100; ++trial) {
        auto qs = testgen::random_quad_surface(rng, 3);
        auto s = testgen::random_sutures(rng, qs, 5, 50);
        REQUIRE(io::sutures_from_json(io::to_json(s), qs) == s);
    }
    auto lat = make_lattice(1);
    SqftModule m{lat, 3};
    auto v = GroupRingElement::generator(lat, 0) * SqftVector::basis_vector(m, "011") +
             SqftVector::basis_vector(m, "101");
    REQUIRE(io::vector_from_json(io::to_json(v)) == v);
    REQUIRE(io::vector_from_json(io::to_json(SqftVector(m))) == SqftVector(m));
    Mod2Vector w{2, {"01", "10"}};
    REQUIRE(io::mod2_from_json(io::to_json(w)) == w);
}

TEST_CASE("every fixture validates and round-trips")
{
    for (const auto& name : fixture_names()) {
        auto d = fixture(name);
        REQUIRE(validate(d.surface).ok());
        REQUIRE_FALSE(d.sutures.empty());
        for (const auto& [n, s] : d.sutures) {
            INFO(name << " / " << n);
            REQUIRE(validate(s).ok());
        }
        auto back = io::document_from_json(io::parse_text(io::to_json(d).dump()));
        REQUIRE(back.name == d.name);
        REQUIRE(back.surface == d.surface);
        REQUIRE(back.sutures == d.sutures);
    }
    REQUIRE(fixture("disc6").sutures.size() == 5);
    REQUIRE_THROWS_AS(fixture("klein-bottle"), ValidationError);
}

TEST_CASE("malformed documents name the location")
{
    auto msg = [](const std::string& text) {
        try {
            io::document_from_json(io::parse_text(text));
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    REQUIRE(msg(R"({"squares": 2, "gluings": [[[0, 2], [1]]]})") == "/gluings/0/1: expected a pair [a, b]");
    REQUIRE(msg(R"({"surface": {"squares": 1}, "sutures": {"x": {"squares": [{"crossings": [1, 1, 1]}]}}})") ==
            "/sutures/x/squares/0/crossings: expected four crossing counts");
    REQUIRE(msg(R"({"gluings": []})") == "/: missing field 'squares'");
    REQUIRE(msg(R"([1, 2])") == "/: expected an object");
    REQUIRE(msg("{\n \"squares\": ") .find("byte") != std::string::npos);
    REQUIRE_THROWS_AS(io::vector_from_json(io::parse_text(R"({"terms": []})")), ParseError);
    REQUIRE_THROWS_AS(io::vector_from_json(io::parse_text(
                          R"({"terms": [{"basis": "012", "coef": {"lattice": [], "terms": []}}]})")),
                      ParseError);
}
