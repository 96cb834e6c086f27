#include <catch_amalgamated.hpp>

#include "cli.hpp"

#include <sqft/fixtures.hpp>

using namespace sqft;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::string& line, const std::string& input = "")
{
    std::vector<std::string> args;
    std::istringstream words(line);
    for (std::string w; words >> w;) {
        args.push_back(w);
    }
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string show(const std::string& name) { return run("fixture show " + name).out; }

} // namespace

TEST_CASE("fixture commands")
{
    auto list = run("fixture list");
    REQUIRE(list.code == 0);
    REQUIRE(list.out == "square\nvacuum\ndisc6\nannulus\npunctured-torus\n");
    REQUIRE(run("fixture show nowhere").code == 2);
    REQUIRE(run("fixture show").code == 2);
}

TEST_CASE("documented pipelines")
{
    auto adm = run("heegaard admissible", show("punctured-torus"));
    REQUIRE(adm.code == 0);
    REQUIRE(adm.out.rfind("inadmissible\nwitness ", 0) == 0);
    REQUIRE(run("heegaard admissible", show("disc6")).out == "admissible\n");

    auto el = run("suture element --sutures gamma-pm", show("disc6"));
    REQUIRE(el.code == 0);
    REQUIRE(el.out == "|01> + |10>\n");
    REQUIRE(run("suture element --sutures gamma-pm --seed 5", show("disc6")).out == el.out);

    auto sfh = run("heegaard sfh", show("square"));
    REQUIRE(sfh.code == 0);
    REQUIRE(sfh.out == "rank 2\ngraded ranks -1:1 1:1\n");
}

TEST_CASE("surface commands")
{
    auto st = run("surface stats --json", show("annulus"));
    REQUIRE(st.code == 0);
    auto j = io::parse_text(st.out);
    REQUIRE(j["index"] == 2);
    REQUIRE(j["h1_rank"] == 1);
    REQUIRE(run("surface validate", show("disc6")).out == "ok\n");
    auto bad = run("surface validate", R"({"squares": 2, "gluings": [[[0, 2], [1, 0]]]})");
    REQUIRE(bad.code == 1);
    REQUIRE(bad.out.rfind("invalid\n", 0) == 0);

    // spine then reconstruct returns to the same statistics
    auto sp = run("surface spine", show("punctured-torus"));
    REQUIRE(sp.code == 0);
    auto rec = run("surface reconstruct", sp.out);
    REQUIRE(rec.code == 0);
    REQUIRE(run("surface stats", rec.out).out == run("surface stats", show("punctured-torus")).out);
    REQUIRE(run("surface spine --dot", show("disc6")).out.rfind("graph tape {", 0) == 0);

    REQUIRE(run("surface cut --edge 0,2", show("disc6")).code == 0);
    REQUIRE(run("surface cut --edge 0,0", show("disc6")).code == 1);
    REQUIRE(run("surface cut --edge zero", show("disc6")).code == 2);
    REQUIRE(run("surface slide --edge 0,2 --dir ccw", show("disc6")).code == 0);
    REQUIRE(run("surface slide --edge 0,2 --dir sideways", show("disc6")).code == 2);
    auto glued = run("surface glue --a 0,2 --b 1,3", R"({"squares": 2})");
    REQUIRE(glued.code == 0);
    REQUIRE(io::quad_surface_from_json(io::parse_text(glued.out)) == fixture("disc6").surface);
}

TEST_CASE("tape commands")
{
    auto non_spine = R"({"vertices": [{"id": 1, "halfedges": [1, 2]}, {"id": 2, "halfedges": [4, 3]}],
                         "edges": [[1, 3], [2, 4]]})";
    auto r = run("tape spine-check", non_spine);
    REQUIRE(r.code == 1);
    REQUIRE(r.out.find("has no breakpoint") != std::string::npos);
    auto spine = run("surface spine", show("annulus")).out;
    REQUIRE(run("tape spine-check", spine).out == "spine\n");
    REQUIRE(run("tape boundary", spine).code == 0);
    REQUIRE(run("tape canon", spine).out == run("tape canon", spine).out);
}

TEST_CASE("suture commands")
{
    REQUIRE(run("suture euler --sutures loop-plus", show("vacuum")).out == "2\n");
    REQUIRE(run("suture euler --sutures loop-minus", show("vacuum")).out == "-2\n");
    REQUIRE(run("suture element --sutures loop-plus", show("vacuum")).out == "0\n");
    REQUIRE(run("suture euler", show("vacuum")).code == 2); // three systems, none chosen
    REQUIRE(run("suture euler --sutures nope", show("vacuum")).code == 2);

    auto up = run("suture bypass --sutures gamma-pm --edge 0,2 --middle 1 --dir up", show("disc6"));
    REQUIRE(up.code == 0);
    auto d = io::document_from_json(io::parse_text(up.out));
    REQUIRE(d.sutures.count("gamma-pm-up") == 1);
    auto down = run("suture bypass --sutures gamma-pm --edge 0,2 --dir down --name other", show("disc6"));
    auto e_up = run("suture element", up.out).out;
    auto e_down = run("suture element", down.out).out;
    REQUIRE(std::set<std::string>{e_up, e_down} == std::set<std::string>{"|01>\n", "|10>\n"});
    REQUIRE(run("suture bypass --sutures basic-01 --edge 0,2 --dir up", show("disc6")).code == 1);
    REQUIRE(run("suture validate --sutures gamma-pm", show("disc6")).out == "ok\n");
    auto reduce = run("suture reduce --sutures gamma-pm", show("disc6"));
    REQUIRE(reduce.out == "|01> + |10>\nbypasses 1, cache hits 0\n");
}

TEST_CASE("sqft commands")
{
    auto m = run("sqft module", show("disc6"));
    REQUIRE(m.out == "index 2\nrank 4\nlattice rank 0\ngraded ranks -2:1 0:2 2:1\n");
    std::string v = R"({"terms": [{"basis": "01", "coef": {"lattice": [], "terms": [{"exp": [], "coef": 3}]}}]})";
    auto created = run("sqft op --op create --sign +", v);
    REQUIRE(created.code == 0);
    REQUIRE(run("sqft reduce", created.out).out == "|011>\n");
    REQUIRE(run("sqft op --op annihilate --sign + --slot 1", v).out == "|0>\n");
    REQUIRE(run("sqft op --op twist", v).code == 2);

    auto el = run("suture element --sutures gamma-pm --json", show("disc6")).out;
    REQUIRE(run("sqft op --op create --sign -", el).out == "|010> + |100>\n");
    REQUIRE(run("sqft op --op annihilate --sign + --slot 0", el).out == "0\n");
    auto basic = run("suture element --sutures basic-01 --json", show("disc6")).out;
    REQUIRE(run("sqft op --op annihilate --sign + --slot 1", basic).out == "|0>\n");
    REQUIRE(run("sqft reduce", R"({"terms": [{"basis": 5}]})").code == 1);
}

TEST_CASE("heegaard commands")
{
    auto synth = run("heegaard synth --json", show("punctured-torus"));
    auto j = io::parse_text(synth.out);
    REQUIRE(j["genus"] == 2);
    REQUIRE(run("heegaard domains", show("annulus")).out.rfind("1 periodic domains\n", 0) == 0);
    REQUIRE(run("heegaard domains --dot --domain 0", show("annulus")).out.find("=1") != std::string::npos);
    REQUIRE(run("heegaard domains --dot --domain 3", show("annulus")).code == 2);
    REQUIRE(run("heegaard zeta", show("punctured-torus")).out.find("certificate ok") != std::string::npos);
    REQUIRE(run("heegaard decompose", show("disc6")).out.find("direct summand") != std::string::npos);
}

TEST_CASE("usage errors and determinism")
{
    REQUIRE(run("").code == 2);
    REQUIRE(run("surface").code == 2);
    REQUIRE(run("surface stats --bogus").code == 2);
    REQUIRE(run("--help").code == 0);
    REQUIRE(run("surface stats", "{").code == 1);
    REQUIRE(run("surface stats -i /nonexistent/file.json").code == 2);
    auto a = run("heegaard domains --json", show("punctured-torus"));
    auto b = run("heegaard domains --json", show("punctured-torus"));
    REQUIRE(a.out == b.out);
}
