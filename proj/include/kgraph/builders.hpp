#pragma once

#include <string>
#include <vector>

#include "kgraph.hpp"

namespace kgraph {

inline std::string point_name(const Degree& p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.rank(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

inline std::string omega_edge_name(const Degree& p, const Degree& q) { return point_name(p) + "-" + point_name(q); }

// Ω_{k,m}: vertices p <= m, edge (p, p+e_i) with range p and source p+e_i.
inline KGraph build_omega(std::size_t k, const Degree& m)
{
    if (m.rank() != k || !m.nonnegative()) fail(errc::invalid_argument, "bad Ω bound " + m.str());
    Skeleton sk;
    sk.k = k;
    FactorizationRegime reg;
    for_each_in_box(Degree::zero(k), m, [&](const Degree& p) { sk.vertices.push_back(point_name(p)); });
    for_each_in_box(Degree::zero(k), m, [&](const Degree& p) {
        for (std::size_t i = 0; i < k; ++i) {
            Degree q = p + Degree::unit(k, i);
            if (!q.leq(m)) continue;
            sk.edges.push_back({omega_edge_name(p, q), static_cast<int>(i + 1), point_name(p), point_name(q)});
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                Degree pi = p + Degree::unit(k, i), pj = p + Degree::unit(k, j), pij = pi + Degree::unit(k, j);
                if (!pij.leq(m)) continue;
                reg.squares.push_back({{omega_edge_name(p, pi), omega_edge_name(pi, pij)},
                                       {omega_edge_name(p, pj), omega_edge_name(pj, pij)}});
            }
    });
    return validate(sk, reg);
}

// Cycle v1..vn with solid e_i and dashed f_i, r(e_i) = v_i, s(e_i) = v_{i-1},
// squares e_{i+1} f_i = f_{i+1} e_i, and a tail v_{n+1}, ..., v_{n+tail}
// hanging off v_n. The last tail vertex emits no edges.
inline KGraph build_lambda_n(int n, int tail)
{
    if (n < 1 || tail < 0) fail(errc::invalid_argument, "need n >= 1 and tail >= 0");
    Skeleton sk;
    sk.k = 2;
    FactorizationRegime reg;
    auto v = [](int i) { return "v" + std::to_string(i); };
    auto e = [](int i) { return "e" + std::to_string(i); };
    auto f = [](int i) { return "f" + std::to_string(i); };
    auto prev = [n](int i) { return i == 1 ? n : i - 1; };
    for (int i = 1; i <= n + tail; ++i) sk.vertices.push_back(v(i));
    for (int i = 1; i <= n + tail; ++i) {
        int src = i <= n ? prev(i) : i - 1;
        sk.edges.push_back({e(i), 1, v(i), v(src)});
        sk.edges.push_back({f(i), 2, v(i), v(src)});
    }
    // at each vertex u the in-edges into u and out-edges from u meet in one square per pair
    for (int i = 1; i <= n + tail; ++i) {
        int src = i <= n ? prev(i) : i - 1; // edges into v_i come from v_src
        reg.squares.push_back({{e(i), f(src)}, {f(i), e(src)}});
    }
    KGraph g = validate(sk, reg);
    if (tail > 0) g.set_truncation_vertex(g.vertex(v(n + tail)));
    return g;
}

enum class Figure2Regime { A, B };
enum class Figure2Cap { folded, open };

// The ladder x_0 = v, x_1 = w, x_2, ...: cell i has solid e_i, f_i and dashed g_i,
// all with range x_i and source x_{i+1}. Regime A: g_i e_{i+1} = e_i g_{i+1},
// g_i f_{i+1} = f_i g_{i+1}; regime B crosses the pairing. The folded cap is the
// quotient of the remaining infinite ladder: one vertex with solid loops a, b and a
// dashed loop c. The open cap stops at a vertex receiving nothing (not locally convex).
inline KGraph build_figure2(Figure2Regime regime, int cells = 2, Figure2Cap cap = Figure2Cap::folded)
{
    if (cells < 1) fail(errc::invalid_argument, "need at least one cell");
    auto x = [](int i) {
        if (i == 0) return std::string("v");
        if (i == 1) return std::string("w");
        return "x" + std::to_string(i);
    };
    auto nm = [](const char* base, int i) { return i == 0 ? std::string(base) : base + std::to_string(i); };
    const bool A = regime == Figure2Regime::A;
    Skeleton sk;
    sk.k = 2;
    FactorizationRegime reg;
    for (int i = 0; i <= cells; ++i) sk.vertices.push_back(x(i));
    for (int i = 0; i < cells; ++i) {
        sk.edges.push_back({nm("e", i), 1, x(i), x(i + 1)});
        sk.edges.push_back({nm("f", i), 1, x(i), x(i + 1)});
        sk.edges.push_back({nm("g", i), 2, x(i), x(i + 1)});
    }
    for (int i = 0; i + 1 < cells; ++i) {
        reg.squares.push_back({{nm("g", i), nm("e", i + 1)}, {nm(A ? "e" : "f", i), nm("g", i + 1)}});
        reg.squares.push_back({{nm("g", i), nm("f", i + 1)}, {nm(A ? "f" : "e", i), nm("g", i + 1)}});
    }
    if (cap == Figure2Cap::folded) {
        const std::string c = x(cells);
        const int last = cells - 1;
        sk.edges.push_back({"a", 1, c, c});
        sk.edges.push_back({"b", 1, c, c});
        sk.edges.push_back({"c", 2, c, c});
        reg.squares.push_back({{nm("g", last), "a"}, {nm(A ? "e" : "f", last), "c"}});
        reg.squares.push_back({{nm("g", last), "b"}, {nm(A ? "f" : "e", last), "c"}});
        reg.squares.push_back({{"c", "a"}, {A ? "a" : "b", "c"}});
        reg.squares.push_back({{"c", "b"}, {A ? "b" : "a", "c"}});
    }
    KGraph g = validate(sk, reg);
    g.set_truncation_vertex(g.vertex(x(cells)));
    return g;
}

// Two vertices u, v; solid e, k: u -> v and g: v -> u; dashed loops f at u, h at v.
// Regime A: ef = he, kf = hk, gh = fg. Regime B: ef = hk, kf = he, gh = fg.
inline KGraph build_factorisation_example(Figure2Regime regime)
{
    Skeleton sk;
    sk.k = 2;
    sk.vertices = {"u", "v"};
    sk.edges = {{"e", 1, "v", "u"}, {"k", 1, "v", "u"}, {"g", 1, "u", "v"}, {"f", 2, "u", "u"}, {"h", 2, "v", "v"}};
    FactorizationRegime reg;
    if (regime == Figure2Regime::A)
        reg.squares = {{{"e", "f"}, {"h", "e"}}, {{"k", "f"}, {"h", "k"}}, {{"g", "h"}, {"f", "g"}}};
    else
        reg.squares = {{{"e", "f"}, {"h", "k"}}, {{"k", "f"}, {"h", "e"}}, {{"g", "h"}, {"f", "g"}}};
    return validate(sk, reg);
}

// 1-graph cycle c1..cn with a_i: r = c_i, s = c_{i-1}.
inline KGraph build_cycle(int n)
{
    if (n < 1) fail(errc::invalid_argument, "need n >= 1");
    Skeleton sk;
    sk.k = 1;
    for (int i = 1; i <= n; ++i) sk.vertices.push_back("c" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        sk.edges.push_back({"a" + std::to_string(i), 1, "c" + std::to_string(i), "c" + std::to_string(i == 1 ? n : i - 1)});
    return validate(sk, {});
}

inline KGraph build_single_vertex(std::size_t k)
{
    Skeleton sk;
    sk.k = k;
    sk.vertices = {"v"};
    return validate(sk, {});
}

// Same skeleton viewed as a k-graph of higher rank with no edges in the new colors.
inline KGraph with_rank(const KGraph& g, std::size_t k)
{
    if (k < g.rank()) fail(errc::invalid_argument, "cannot lower the rank");
    Skeleton sk = g.skeleton();
    sk.k = k;
    KGraph out = validate(sk, g.regime());
    if (g.truncation_vertex()) out.set_truncation_vertex(*g.truncation_vertex());
    return out;
}

inline KGraph disjoint_union(const KGraph& a, const KGraph& b, const std::string& pa = "L.",
                             const std::string& pb = "R.")
{
    if (a.rank() != b.rank()) fail(errc::graph_mismatch, "ranks differ");
    Skeleton sk;
    sk.k = a.rank();
    FactorizationRegime reg;
    for (auto [g, p] : {std::pair{&a, &pa}, std::pair{&b, &pb}}) {
        for (const auto& v : g->skeleton().vertices) sk.vertices.push_back(*p + v);
        for (auto e : g->skeleton().edges) {
            e.id = *p + e.id;
            e.range = *p + e.range;
            e.source = *p + e.source;
            sk.edges.push_back(e);
        }
        for (auto s : g->regime().squares) {
            for (auto& id : s.outer) id = *p + id;
            for (auto& id : s.inner) id = *p + id;
            reg.squares.push_back(s);
        }
    }
    return validate(sk, reg);
}

} // namespace kgraph
