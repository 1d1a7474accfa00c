#include <doctest.h>

#include <cstring>
#include <random>

#include "commands.hpp"

using namespace varjac;
using namespace varjac::cli;
using nlohmann::json;

TEST_CASE("complex literals")
{
    CHECK(parse_complex("-1.1+0.1i") == Complex{-1.1, 0.1});
    CHECK(parse_complex("1-2i") == Complex{1.0, -2.0});
    CHECK(parse_complex("3") == Complex{3.0, 0.0});
    CHECK(parse_complex("+3") == Complex{3.0, 0.0});
    CHECK(parse_complex("2i") == Complex{0.0, 2.0});
    CHECK(parse_complex("-2.5i") == Complex{0.0, -2.5});
    CHECK(parse_complex("i") == Complex{0.0, 1.0});
    CHECK(parse_complex("-i") == Complex{0.0, -1.0});
    CHECK(parse_complex("1e-3+2e-1i") == Complex{1e-3, 0.2});
    CHECK(parse_complex("1-i") == Complex{1.0, -1.0});
    for (const char* bad : {"", "1+", "1 +2i", " 1", "abc", "1+2j", "1+2i3", "ii", "1+2ii", "--1", "1..2", "+", "i2"})
        CHECK_THROWS_AS(parse_complex(bad), UsageError);
}

TEST_CASE("formatting round-trips exactly")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 1000; ++k) {
        const Complex z{u(rng) * std::pow(10.0, k % 7 - 3), u(rng)};
        CHECK(parse_complex(format_complex(z)) == z);
    }
    CHECK(format_complex({-1.1, 0.1}) == "-1.1+0.1i");
    CHECK(format_complex({2.0, -0.5}) == "2-0.5i");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("run configuration JSON")
{
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(from_json(to_json(c)) == c);

    c.A = {-1.2, 0.08};
    c.degrees = {20, 40};
    c.nodes = 512;
    c.criteria = {1, 5};
    c.zeros_svg = false;
    c.sweep.steps = 3;
    const json j = to_json(c);
    CHECK(from_json(j) == c);
    CHECK(to_json(from_json(j)) == j);

    // missing keys keep the base value
    const RunConfig partial = from_json(json{{"nodes", 64}});
    CHECK(partial.nodes == 64);
    CHECK(partial.A == RunConfig{}.A);

    CHECK_THROWS_AS(from_json(json{{"colour", "red"}}), UsageError);
    CHECK_THROWS_AS(from_json(json{{"A", "1+"}}), UsageError);
    CHECK_THROWS_AS(from_json(json{{"nodes", "many"}}), UsageError);

    RunConfig bad;
    bad.B = -1.0;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = RunConfig{};
    bad.nodes = 4;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = RunConfig{};
    bad.criteria = {12};
    CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("emitted documents validate; broken ones do not")
{
    RunConfig c;
    c.A = 1.0;
    c.B = 1.0;
    const GraphRun g = compute_graph(c);
    const json doc = graph_json(c, g);
    CHECK(validate_document(doc).empty());
    CHECK(doc["schema"] == kGraphSchema);
    CHECK(doc["shape"] == "real_limit");

    json broken = doc;
    broken.erase("arcs");
    CHECK_FALSE(validate_document(broken).empty());
    broken = doc;
    broken["arcs"][0]["points"][0] = "x";
    CHECK_FALSE(validate_document(broken).empty());
    broken = doc;
    broken["schema"] = "varjac.graph/9";
    CHECK_FALSE(validate_document(broken).empty());
    CHECK_FALSE(validate_document(json::array()).empty());

    verify::CriterionResult r;
    r.id = 1;
    r.title = "t";
    r.pass = false;
    r.time_limit = 5.0;
    r.metrics.push_back({"x", 1.0, 2.0, verify::Relation::Less, true});
    const json v = verify_json(c, {r});
    const auto vp = validate_document(v);
    for (const auto& msg : vp) MESSAGE(msg);
    CHECK(vp.empty());
    CHECK(v["all_pass"] == false);
    json lying = v;
    lying["all_pass"] = true;
    CHECK_FALSE(validate_document(lying).empty());

    SweepCell cell;
    cell.A = {-1.1, 0.1};
    cell.status = "ok";
    cell.matches = true;
    CHECK(validate_document(sweep_json(c, {cell})).empty());

    ZerosRun z;
    z.n = 2;
    z.roots.roots = {0.1, -0.1};
    json zd = zeros_json(c, g, {z});
    CHECK(validate_document(zd).empty());
    zd["results"][0]["roots"].erase(0);
    CHECK_FALSE(validate_document(zd).empty());
}

TEST_CASE("SVG output is deterministic")
{
    RunConfig c;
    c.A = 1.0;
    c.B = 1.0;
    const GraphRun g1 = compute_graph(c), g2 = compute_graph(c);
    const std::vector<Complex> zs{0.1, -0.1};
    const std::string a = graph_svg(g1, &zs, "title & more"), b = graph_svg(g2, &zs, "title & more");
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("&amp;") != std::string::npos);
    CHECK(graph_json(c, g1).dump(2) == graph_json(c, g2).dump(2));
}
