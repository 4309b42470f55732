#include <catch_amalgamated.hpp>

#include "corpus.hpp"

#include <kgraph/checks.hpp>
#include <kgraph/json_io.hpp>

#include <filesystem>

using namespace kgraph;
using io::json;

namespace {

bool throws_code(errc want, const std::function<void()>& f)
{
    try {
        f();
    } catch (const error& e) {
        return e.code() == want;
    }
    return false;
}

json two_loop_file()
{
    return json::parse(R"({
        "k": 2, "vertices": ["v"],
        "edges": [{"id": "e", "color": 1, "range": "v", "source": "v"},
                  {"id": "f", "color": 2, "range": "v", "source": "v"}],
        "squares": [{"outer": ["e", "f"], "inner": ["f", "e"]}]})");
}

} // namespace

TEST_CASE("skeleton round trip")
{
    auto all = corpus::graphs();
    for (auto& x : corpus::extra_graphs()) all.push_back(std::move(x));
    for (const auto& [name, g] : all) {
        INFO(name);
        auto h = io::graph_from_json(json::parse(io::skeleton_to_json(g).dump()));
        REQUIRE(h.rank() == g.rank());
        REQUIRE(h.vertex_count() == g.vertex_count());
        REQUIRE(h.edge_count() == g.edge_count());
        REQUIRE(h.locally_convex() == g.locally_convex());
        REQUIRE(io::skeleton_to_json(h) == io::skeleton_to_json(g));
        for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v)
            for_each_in_box(g.zero(), Degree::constant(g.rank(), 1),
                            [&](const Degree& n) { REQUIRE(h.lambda_le(v, n).size() == g.lambda_le(v, n).size()); });
    }

    auto g = io::graph_from_json(two_loop_file());
    REQUIRE(g.vertex_count() == 1);
    REQUIRE(g.no_sinks());

    const auto path = std::filesystem::temp_directory_path() / "kgraph_roundtrip.json";
    io::save_graph(build_lambda_n(2, 1), path.string());
    REQUIRE(io::load_graph(path.string()).vertex_count() == build_lambda_n(2, 1).vertex_count());
    std::filesystem::remove(path);
}

TEST_CASE("skeleton parse errors")
{
    REQUIRE(throws_code(errc::parse_error, [] { io::graph_from_json(json::parse(R"({"k": 1})")); }));
    REQUIRE(throws_code(errc::parse_error, [] { io::graph_from_json(json::parse(R"({"k": "two", "vertices": [], "edges": []})")); }));
    REQUIRE(throws_code(errc::parse_error, [] { io::load_graph("/nonexistent/graph.json"); }));
    auto bad = two_loop_file();
    bad["squares"][0]["outer"] = {"e"};
    REQUIRE(throws_code(errc::parse_error, [&] { io::graph_from_json(bad); }));
    // structural errors come from validation, not the parser
    auto missing = two_loop_file();
    missing["squares"] = json::array();
    REQUIRE(throws_code(errc::missing_square, [&] { io::graph_from_json(missing); }));
    auto unknown = two_loop_file();
    unknown["edges"][0]["range"] = "x";
    REQUIRE(throws_code(errc::unknown_vertex, [&] { io::graph_from_json(unknown); }));
}

TEST_CASE("algebra element round trip")
{
    std::mt19937_64 rng(21);
    for (const auto& [name, g] : corpus::graphs()) {
        INFO(name);
        const auto gens = generators_upto(g, Degree::constant(g.rank(), 1));
        for (int s = 0; s < 20; ++s) {
            auto a = random_element(g, rng, gens, 4);
            auto j = json::parse(io::element_to_json(a).dump());
            auto b = io::element_from_json(g, j);
            REQUIRE(b.terms() == a.terms());
            for (const auto& t : j) {
                for (const char* key : {"re", "im"}) REQUIRE(t.at(key).get<std::string>().find('/') != std::string::npos);
                REQUIRE(t.at("mu").is_array());
                REQUIRE(t.at("nu").is_array());
            }
        }
    }
    auto g = build_omega(2, {1, 1});
    auto p = AlgebraElement::generator(g, g.vertex_path(0), g.vertex_path(0), GaussianRational(Rational(-3, 2), Rational(1, 4)));
    auto j = io::element_to_json(p);
    REQUIRE(j[0]["re"] == "-3/2");
    REQUIRE(j[0]["im"] == "1/4");
    REQUIRE(j[0]["mu"].empty());
    j[0].erase("source");
    REQUIRE(throws_code(errc::parse_error, [&] { io::element_from_json(g, j); }));
    REQUIRE(io::element_from_json(g, json::array()).empty());
}

TEST_CASE("trace report")
{
    auto f = build_figure2(Figure2Regime::A);
    auto r = io::trace_report_json(f, find_faithful_graph_trace(f));
    REQUIRE(r["faithful_trace"].is_null());
    bool w_forced = false;
    for (const auto& o : r["obstructions"]) {
        REQUIRE(o["replays"] == true);
        if (o["kind"] == "ForcedZeroVertex")
            for (const auto& v : o["vertices"]) w_forced |= v == "w";
    }
    REQUIRE(w_forced);

    auto l = build_lambda_n(3, 2);
    auto t = io::trace_report_json(l, find_faithful_graph_trace(l));
    REQUIRE(t["faithful_trace"].size() == l.vertex_count());
    Rational sum = 0;
    for (const auto& [v, x] : t["faithful_trace"].items()) {
        REQUIRE(parse_rational(x.get<std::string>()) > 0);
        sum += parse_rational(x.get<std::string>());
    }
    REQUIRE(sum == 1);
    REQUIRE(t["obstructions"].empty());
    REQUIRE(t["ends"].size() == 1);
    REQUIRE(t["ends"][0]["rank"] == 2);
    REQUIRE(t["ends"][0]["class"] == 0);
}

TEST_CASE("K-theory and spectral reports")
{
    auto k = io::ktheory_json(build_lambda_n(2, 0), k_theory(build_lambda_n(2, 0)));
    REQUIRE(k["K0_rank"] == 2);
    REQUIRE(k["K1_rank"] == 2);
    REQUIRE(k["morita"] == "K⊗C(T^2)");
    REQUIRE(k["classes"][0]["rank"] == 2);
    REQUIRE(k["classes"][0]["group_basis"] == json::parse("[[1,1],[0,2]]"));

    auto u = disjoint_union(build_lambda_n(2, 0), build_omega(2, {1, 1}));
    auto ku = io::ktheory_json(u, k_theory(u));
    REQUIRE(ku["K0_rank"] == 3);
    REQUIRE(ku["morita"].get<std::string>().find(" ⊕ ") != std::string::npos);

    auto d = io::dixmier_json(spectral::dixmier_estimate(2, spectral::default_dixmier_list(100)));
    for (const char* key : {"C_k", "fitted", "rel_err"}) REQUIRE(d[key].is_number_float());
    REQUIRE(d["samples"].size() == 4);

    auto p = io::pairing_json(1, 1, -3);
    REQUIRE(p == json{{"chern", 1}, {"index", 1}, {"pairing", -3}});

    auto e = io::error_json(error(errc::missing_square, "x"));
    REQUIRE(e["error"] == "MissingSquare");
}
