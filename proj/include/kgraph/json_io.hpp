#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktheory.hpp"
#include "spectral.hpp"
#include "trace_analysis.hpp"

namespace kgraph::io {

using json = nlohmann::json;

// ---------------------------------------------------------------- skeleton files

struct SkeletonFile {
    Skeleton skeleton;
    FactorizationRegime regime;
};

inline SkeletonFile skeleton_from_json(const json& j)
{
    try {
        SkeletonFile f;
        f.skeleton.k = j.at("k").get<std::size_t>();
        f.skeleton.vertices = j.at("vertices").get<std::vector<std::string>>();
        for (const auto& e : j.at("edges"))
            f.skeleton.edges.push_back(
                {e.at("id").get<std::string>(), e.at("color").get<int>(), e.at("range").get<std::string>(),
                 e.at("source").get<std::string>()});
        if (j.contains("squares"))
            for (const auto& s : j.at("squares")) {
                auto o = s.at("outer").get<std::vector<std::string>>();
                auto i = s.at("inner").get<std::vector<std::string>>();
                if (o.size() != 2 || i.size() != 2) fail(errc::parse_error, "a square needs two outer and two inner edges");
                f.regime.squares.push_back({{o[0], o[1]}, {i[0], i[1]}});
            }
        return f;
    } catch (const json::exception& e) {
        fail(errc::parse_error, e.what());
    }
}

inline json skeleton_to_json(const KGraph& g)
{
    const auto& sk = g.skeleton();
    json edges = json::array(), squares = json::array();
    for (const auto& e : sk.edges)
        edges.push_back({{"id", e.id}, {"color", e.color}, {"range", e.range}, {"source", e.source}});
    for (const auto& s : g.regime().squares)
        squares.push_back({{"outer", {s.outer[0], s.outer[1]}}, {"inner", {s.inner[0], s.inner[1]}}});
    return {{"k", sk.k}, {"vertices", sk.vertices}, {"edges", edges}, {"squares", squares}};
}

inline KGraph graph_from_json(const json& j)
{
    auto f = skeleton_from_json(j);
    return validate(f.skeleton, f.regime);
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(errc::parse_error, path + ": " + e.what());
    }
}

inline KGraph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

inline void save_graph(const KGraph& g, const std::string& path)
{
    std::ofstream out(path);
    if (!out) fail(errc::invalid_argument, "cannot write " + path);
    out << skeleton_to_json(g).dump(2) << '\n';
}

// ---------------------------------------------------------------- algebra elements

// [{"mu": [ids], "nu": [ids], "re": "p/q", "im": "p/q", "source": vertex}]; "source"
// is written always and read only when both paths are vertices.
inline json element_to_json(const AlgebraElement& a)
{
    const KGraph& g = a.graph();
    json out = json::array();
    for (const auto& [gen, c] : a.terms()) {
        const auto& [mu, nu] = gen;
        out.push_back({{"mu", g.path_names(mu)},
                       {"nu", g.path_names(nu)},
                       {"re", to_string(c.re())},
                       {"im", to_string(c.im())},
                       {"source", g.vertex_name(mu.source())}});
    }
    return out;
}

inline AlgebraElement element_from_json(const KGraph& g, const json& j)
{
    AlgebraElement a(g);
    try {
        for (const auto& t : j) {
            auto mun = t.at("mu").get<std::vector<std::string>>();
            auto nun = t.at("nu").get<std::vector<std::string>>();
            std::optional<vertex_id> src;
            if (t.contains("source")) src = g.vertex(t.at("source").get<std::string>());
            auto path = [&](const std::vector<std::string>& names) {
                if (!names.empty()) return g.path_from_names(names);
                if (!src) fail(errc::parse_error, "vertex term without \"source\"");
                return g.vertex_path(*src);
            };
            Path mu = path(mun), nu = path(nun);
            if (src && mu.source() != *src) fail(errc::parse_error, "\"source\" disagrees with the paths");
            a.add_term(mu, nu,
                       GaussianRational(parse_rational(t.at("re").get<std::string>()),
                                        parse_rational(t.at("im").get<std::string>())));
        }
    } catch (const json::exception& e) {
        fail(errc::parse_error, e.what());
    }
    return a;
}

// ---------------------------------------------------------------- reports

inline json error_json(const error& e)
{
    return {{"error", std::string(errc_name(e.code()))}, {"message", e.what()}};
}

inline json trace_json(const KGraph& g, const GraphTrace& t)
{
    json out = json::object();
    for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v) out[g.vertex_name(v)] = to_string(t(v));
    return out;
}

inline json rationals_json(const lp::Vec& v)
{
    json out = json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

inline json obstruction_json(const KGraph& g, const ObstructionReport& r)
{
    json o{{"kind", obstruction_name(r.kind)}, {"replays", replay(r, g)}};
    switch (r.kind) {
    case ObstructionKind::LoopWithEntrance:
        o["loop"] = g.path_names(*r.loop);
        o["vertex"] = g.vertex_name(r.loop->range());
        o["entrance"] = g.edge(*r.entrance).id;
        o["color"] = r.color + 1;
        break;
    case ObstructionKind::LinearInfeasibility: o["farkas"] = rationals_json(r.farkas); break;
    case ObstructionKind::ForcedZeroVertex: {
        json vs = json::array(), cs = json::array();
        for (std::size_t j = 0; j < r.vertices.size(); ++j) {
            vs.push_back(g.vertex_name(r.vertices[j]));
            cs.push_back(rationals_json(r.certificates[j]));
        }
        o["vertices"] = vs;
        o["certificates"] = cs;
        break;
    }
    }
    return o;
}

inline json vertex_names(const KGraph& g, const std::vector<vertex_id>& vs)
{
    json out = json::array();
    for (auto v : vs) out.push_back(g.vertex_name(v));
    return out;
}

// "rank" is null when the end group of a class cannot be pinned down
inline json ends_json(const KGraph& g)
{
    const auto ends = find_ends(g);
    const auto classes = end_classes(ends);
    json out = json::array();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        json rank = nullptr;
        for (std::size_t j : classes[c].members)
            if (ends[j].rep == classes[c].rep) {
                try {
                    rank = end_group(ends[j]).rank;
                } catch (const error&) {
                }
            }
        out.push_back({{"class", c}, {"image", vertex_names(g, classes[c].image)}, {"rank", rank}});
    }
    return out;
}

inline json trace_report_json(const KGraph& g, const TraceSearch& s)
{
    json obs = json::array();
    for (const auto& r : s.obstructions) obs.push_back(obstruction_json(g, r));
    return {{"faithful_trace", s.trace ? trace_json(g, *s.trace) : json(nullptr)},
            {"obstructions", obs},
            {"ends", ends_json(g)}};
}

inline json ktheory_json(const KGraph& g, const KTheorySummary& s)
{
    json classes = json::array();
    for (const auto& c : s.classes)
        classes.push_back({{"rep", g.vertex_name(c.rep)}, {"rank", c.rank}, {"group_basis", c.group.hermite_basis}});
    return {{"classes", classes}, {"K0_rank", s.k0_rank}, {"K1_rank", s.k1_rank}, {"morita", s.morita_description()}};
}

inline json dixmier_json(const spectral::DixmierEstimate& e)
{
    json samples = json::array();
    for (const auto& s : e.samples) samples.push_back({{"N", s.n}, {"eigencount", s.eigencount}, {"raw_sum", s.raw_sum}});
    return {{"k", e.k}, {"C_k", e.target}, {"fitted", e.fitted}, {"rel_err", e.rel_err()}, {"samples", samples}};
}

inline json pairing_json(int chern, int index, int pairing)
{
    return {{"chern", chern}, {"index", index}, {"pairing", pairing}};
}

} // namespace kgraph::io
