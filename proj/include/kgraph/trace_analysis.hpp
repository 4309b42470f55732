#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "graph_trace.hpp"
#include "kgraph.hpp"
#include "lp.hpp"

namespace kgraph {

// ---------------------------------------------------------------- the trace LP

// One row per (v, i) with vΛ^{e_i} nonempty: g(v) - Σ_{e∈vΛ^{e_i}} g(s(e)) = 0.
struct TraceEquations {
    std::vector<std::pair<vertex_id, std::size_t>> rows;
    lp::Mat m; // rows × |Λ⁰|
};

inline TraceEquations trace_equations(const KGraph& g)
{
    TraceEquations te;
    const std::size_t nv = g.vertex_count();
    for (vertex_id v = 0; v < static_cast<vertex_id>(nv); ++v)
        for (std::size_t i = 0; i < g.rank(); ++i) {
            const auto& in = g.in_edges(v, i);
            if (in.empty()) continue;
            lp::Vec row(nv, Rational(0));
            row[static_cast<std::size_t>(v)] += 1;
            for (edge_id e : in) row[static_cast<std::size_t>(g.edge(e).source)] -= 1;
            te.rows.emplace_back(v, i);
            te.m.push_back(std::move(row));
        }
    return te;
}

// Variables (g_v, t, s_v): trace equations, Σ g = 1, g_v - t - s_v = 0; minimise -t.
struct TraceLP {
    lp::Mat a;
    lp::Vec b, c;
    std::size_t nv = 0;
};

inline TraceLP trace_lp(const KGraph& g)
{
    TraceLP p;
    p.nv = g.vertex_count();
    const std::size_t cols = 2 * p.nv + 1;
    for (const auto& r : trace_equations(g).m) {
        lp::Vec row(cols, Rational(0));
        std::copy(r.begin(), r.end(), row.begin());
        p.a.push_back(std::move(row));
        p.b.push_back(0);
    }
    lp::Vec norm(cols, Rational(0));
    for (std::size_t v = 0; v < p.nv; ++v) norm[v] = 1;
    p.a.push_back(std::move(norm));
    p.b.push_back(1);
    for (std::size_t v = 0; v < p.nv; ++v) {
        lp::Vec row(cols, Rational(0));
        row[v] = 1;
        row[p.nv] = -1;
        row[p.nv + 1 + v] = -1;
        p.a.push_back(std::move(row));
        p.b.push_back(0);
    }
    p.c.assign(cols, Rational(0));
    p.c[p.nv] = -1;
    return p;
}

// ---------------------------------------------------------------- obstructions

enum class ObstructionKind { LoopWithEntrance, LinearInfeasibility, ForcedZeroVertex };

inline const char* obstruction_name(ObstructionKind k)
{
    switch (k) {
    case ObstructionKind::LoopWithEntrance: return "LoopWithEntrance";
    case ObstructionKind::LinearInfeasibility: return "LinearInfeasibility";
    case ObstructionKind::ForcedZeroVertex: return "ForcedZeroVertex";
    }
    return "?";
}

struct ObstructionReport {
    ObstructionKind kind = ObstructionKind::LinearInfeasibility;
    // LoopWithEntrance
    std::optional<Path> loop;
    std::optional<edge_id> entrance;
    std::size_t color = 0;
    // LinearInfeasibility: one multiplier per row of trace_lp
    lp::Vec farkas;
    // ForcedZeroVertex: vertices[j] with y = certificates[j] over the trace equations,
    // M^T y >= e_v, so g(v) <= y^T M g = 0 for every g >= 0 solving M g = 0
    std::vector<vertex_id> vertices;
    std::vector<lp::Vec> certificates;
};

inline bool replay(const ObstructionReport& r, const KGraph& g)
{
    switch (r.kind) {
    case ObstructionKind::LoopWithEntrance: {
        if (!r.loop || !r.entrance) return false;
        const Path& l = *r.loop;
        const std::size_t i = r.color;
        if (l.range() != l.source() || i >= g.rank() || l.degree()[i] < 1) return false;
        const Edge& e = g.edge(*r.entrance);
        if (e.color != i || e.range != l.range()) return false;
        // λ must be a genuine path: re-normalise its edges
        if (!(g.path_from_edges(l.edges()) == l)) return false;
        const Path first = g.factor(l, g.zero(), g.unit(i));
        return first.edges().front() != *r.entrance;
    }
    case ObstructionKind::LinearInfeasibility: {
        auto p = trace_lp(g);
        return lp::replay_farkas(p.a, p.b, r.farkas);
    }
    case ObstructionKind::ForcedZeroVertex: {
        if (r.vertices.empty() || r.vertices.size() != r.certificates.size()) return false;
        auto te = trace_equations(g);
        for (std::size_t j = 0; j < r.vertices.size(); ++j) {
            if (r.certificates[j].size() != te.m.size()) return false;
            auto lhs = lp::transpose_times(te.m, r.certificates[j], g.vertex_count());
            for (std::size_t w = 0; w < lhs.size(); ++w) {
                Rational need = static_cast<vertex_id>(w) == r.vertices[j] ? 1 : 0;
                if (lhs[w] < need) return false;
            }
        }
        return true;
    }
    }
    return false;
}

// λ with r(λ) = s(λ), d(λ)_i >= 1 and an edge e ∈ r(λ)Λ^{e_i} different from λ(0, e_i).
// Degrees are searched in increasing total order up to `bound`.
inline std::optional<ObstructionReport> detect_loop_with_entrance(const KGraph& g, std::optional<Degree> bound = {})
{
    const Degree lim = bound ? *bound : Degree::constant(g.rank(), static_cast<std::int64_t>(g.vertex_count()));
    std::vector<Degree> degs = box(g.zero(), lim);
    std::stable_sort(degs.begin(), degs.end(), [](const Degree& a, const Degree& b) { return a.total() < b.total(); });
    for (const auto& d : degs) {
        if (d.is_zero()) continue;
        for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v)
            for (const auto& l : g.paths_with_range(v, d)) {
                if (l.source() != v) continue;
                for (std::size_t i = 0; i < g.rank(); ++i) {
                    if (d[i] < 1) continue;
                    const edge_id first = g.factor(l, g.zero(), g.unit(i)).edges().front();
                    for (edge_id e : g.in_edges(v, i))
                        if (e != first) {
                            ObstructionReport r;
                            r.kind = ObstructionKind::LoopWithEntrance;
                            r.loop = l;
                            r.entrance = e;
                            r.color = i;
                            return r;
                        }
                }
            }
    }
    return std::nullopt;
}

// Certificates that g(v) = 0 in every graph trace: maximise g(v) with g(v) <= 1 over
// M g = 0, g >= 0. An optimum of 0 has a dual y with M^T y >= e_v.
inline ObstructionReport forced_zero_vertices(const KGraph& g)
{
    auto te = trace_equations(g);
    const std::size_t nv = g.vertex_count();
    ObstructionReport r;
    r.kind = ObstructionKind::ForcedZeroVertex;
    for (vertex_id v = 0; v < static_cast<vertex_id>(nv); ++v) {
        lp::Mat a;
        lp::Vec b;
        for (const auto& row : te.m) {
            lp::Vec x(row);
            x.push_back(0);
            a.push_back(std::move(x));
            b.push_back(0);
        }
        lp::Vec cap(nv + 1, Rational(0));
        cap[static_cast<std::size_t>(v)] = 1;
        cap[nv] = 1;
        a.push_back(std::move(cap));
        b.push_back(1);
        lp::Vec c(nv + 1, Rational(0));
        c[static_cast<std::size_t>(v)] = -1;
        auto res = lp::solve(a, b, c);
        if (res.status != lp::Status::optimal || res.value != 0) continue;
        // A^T y <= c with the cap row's multiplier z <= 0 and b^T y = z = 0
        lp::Vec y(te.m.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = -res.dual[i];
        r.vertices.push_back(v);
        r.certificates.push_back(std::move(y));
    }
    return r;
}

struct TraceSearch {
    std::optional<GraphTrace> trace;     // faithful, Σ g = 1, maximal minimum value
    std::optional<GraphTrace> nonfaithful; // feasible optimum with t = 0
    std::vector<ObstructionReport> obstructions;
};

inline TraceSearch find_faithful_graph_trace(const KGraph& g)
{
    if (!g.locally_convex()) fail(errc::not_locally_convex, "trace LP needs a locally convex graph");
    TraceSearch out;
    auto p = trace_lp(g);
    auto res = lp::solve(p.a, p.b, p.c);
    if (res.status == lp::Status::infeasible) {
        ObstructionReport r;
        r.kind = ObstructionKind::LinearInfeasibility;
        r.farkas = res.farkas;
        out.obstructions.push_back(std::move(r));
    } else if (res.status == lp::Status::optimal) {
        GraphTrace t(std::vector<Rational>(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(p.nv)));
        if (-res.value > 0)
            out.trace = std::move(t);
        else
            out.nonfaithful = std::move(t);
    } else {
        fail(errc::invalid_argument, "trace LP unbounded");
    }
    if (!out.trace) {
        auto fz = forced_zero_vertices(g);
        if (!fz.vertices.empty()) out.obstructions.push_back(std::move(fz));
        if (auto loop = detect_loop_with_entrance(g)) out.obstructions.push_back(std::move(*loop));
    }
    return out;
}

// ---------------------------------------------------------------- ends

struct EndDescriptor {
    vertex_id rep = 0;
    std::vector<vertex_id> image; // sorted
    // successor[i][w] for w in image, -1 where direction i terminates
    std::vector<std::map<vertex_id, vertex_id>> successor;
    // d(x)_i from rep, nullopt for an infinite direction
    std::vector<std::optional<std::int64_t>> extent;

    std::optional<vertex_id> sigma(std::size_t i, vertex_id w) const
    {
        auto it = successor[i].find(w);
        if (it == successor[i].end() || it->second < 0) return std::nullopt;
        return it->second;
    }
    std::size_t infinite_directions() const
    {
        return static_cast<std::size_t>(std::count(extent.begin(), extent.end(), std::nullopt));
    }
};

// σ_i(v) = s(e) for the unique e ∈ vΛ^{e_i}
inline std::optional<vertex_id> unique_successor(const KGraph& g, vertex_id v, std::size_t i)
{
    const auto& in = g.in_edges(v, i);
    if (in.size() != 1) return std::nullopt;
    return g.edge(in.front()).source;
}

// Greatest S ⊂ Λ⁰ with |vΛ^{e_i}| <= 1 for all i and σ_i(S) ⊂ S.
inline std::vector<vertex_id> end_vertices(const KGraph& g)
{
    const std::size_t nv = g.vertex_count();
    std::vector<char> in(nv, 1);
    for (vertex_id v = 0; v < static_cast<vertex_id>(nv); ++v)
        for (std::size_t i = 0; i < g.rank(); ++i)
            if (g.in_edges(v, i).size() > 1) in[static_cast<std::size_t>(v)] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (vertex_id v = 0; v < static_cast<vertex_id>(nv); ++v) {
            if (!in[static_cast<std::size_t>(v)]) continue;
            for (std::size_t i = 0; i < g.rank(); ++i) {
                auto s = unique_successor(g, v, i);
                if (s && !in[static_cast<std::size_t>(*s)]) {
                    in[static_cast<std::size_t>(v)] = 0;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<vertex_id> out;
    for (vertex_id v = 0; v < static_cast<vertex_id>(nv); ++v)
        if (in[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

// v lies on an end iff |vΛ^{≤n}| = 1 for every n; checked for n <= bound.
inline bool on_end_oracle(const KGraph& g, vertex_id v, const Degree& bound)
{
    bool ok = true;
    for_each_in_box(g.zero(), bound, [&](const Degree& n) {
        if (ok && g.lambda_le(v, n).size() != 1) ok = false;
    });
    return ok;
}

// The fixed point agrees with the oracle at every vertex.
inline bool ends_agree_with_oracle(const KGraph& g, const Degree& bound)
{
    auto s = end_vertices(g);
    std::set<vertex_id> on(s.begin(), s.end());
    for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v)
        if (on_end_oracle(g, v, bound) != (on.count(v) != 0)) return false;
    return true;
}

inline EndDescriptor end_at(const KGraph& g, vertex_id v)
{
    EndDescriptor d;
    d.rep = v;
    d.successor.resize(g.rank());
    std::set<vertex_id> seen{v};
    std::vector<vertex_id> stack{v};
    while (!stack.empty()) {
        vertex_id u = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < g.rank(); ++i) {
            auto s = unique_successor(g, u, i);
            d.successor[i][u] = s ? *s : -1;
            if (s && seen.insert(*s).second) stack.push_back(*s);
        }
    }
    d.image.assign(seen.begin(), seen.end());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        std::set<vertex_id> walked{v};
        vertex_id cur = v;
        std::int64_t steps = 0;
        std::optional<std::int64_t> ext;
        for (;;) {
            auto s = unique_successor(g, cur, i);
            if (!s) {
                ext = steps;
                break;
            }
            ++steps;
            cur = *s;
            if (!walked.insert(cur).second) break; // revisits: infinite
        }
        d.extent.push_back(ext);
    }
    return d;
}

// One descriptor per distinct image; the representative is the least vertex whose
// end has that image.
inline std::vector<EndDescriptor> find_ends(const KGraph& g)
{
    std::map<std::vector<vertex_id>, EndDescriptor> by_image;
    for (vertex_id v : end_vertices(g)) {
        auto d = end_at(g, v);
        by_image.try_emplace(d.image, std::move(d));
    }
    std::vector<EndDescriptor> out;
    for (auto& [img, d] : by_image) out.push_back(std::move(d));
    std::sort(out.begin(), out.end(), [](const EndDescriptor& a, const EndDescriptor& b) { return a.rep < b.rep; });
    return out;
}

struct EndClass {
    vertex_id rep = 0;
    std::vector<std::size_t> members; // indices into the descriptor list
    std::vector<vertex_id> image;     // union of member images
};

// Union-find over descriptors with intersecting images.
inline std::vector<EndClass> end_classes(const std::vector<EndDescriptor>& ends)
{
    std::vector<std::size_t> parent(ends.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<vertex_id, std::size_t> owner;
    for (std::size_t j = 0; j < ends.size(); ++j)
        for (vertex_id w : ends[j].image) {
            auto [it, fresh] = owner.try_emplace(w, j);
            if (!fresh) parent[find(j)] = find(it->second);
        }
    std::map<std::size_t, EndClass> classes;
    for (std::size_t j = 0; j < ends.size(); ++j) {
        auto& c = classes[find(j)];
        c.members.push_back(j);
        c.image.insert(c.image.end(), ends[j].image.begin(), ends[j].image.end());
    }
    std::vector<EndClass> out;
    for (auto& [root, c] : classes) {
        std::sort(c.image.begin(), c.image.end());
        c.image.erase(std::unique(c.image.begin(), c.image.end()), c.image.end());
        c.rep = ends[c.members.front()].rep;
        for (std::size_t j : c.members) c.rep = std::min(c.rep, ends[j].rep);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const EndClass& a, const EndClass& b) { return a.rep < b.rep; });
    return out;
}

// class index of every vertex on an end, -1 elsewhere
inline std::vector<int> end_class_of(const KGraph& g, const std::vector<EndClass>& classes)
{
    std::vector<int> out(g.vertex_count(), -1);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (vertex_id w : classes[c].image) out[static_cast<std::size_t>(w)] = static_cast<int>(c);
    return out;
}

// ---------------------------------------------------------------- sufficient condition

struct SufficientCondition {
    std::map<vertex_id, Degree> n_map;
    std::vector<vertex_id> exhausted; // vertices with no n_v within the bound
    bool ok() const noexcept { return exhausted.empty(); }
};

// For each v the least n (by total degree, then lexicographically) with
// s(vΛ^{≤n}) ⊂ Ends⁰.
inline SufficientCondition check_sufficient_condition(const KGraph& g, std::optional<Degree> bound = {})
{
    if (!g.locally_convex()) fail(errc::not_locally_convex, "sufficient condition needs a locally convex graph");
    const Degree lim = bound ? *bound : Degree::constant(g.rank(), static_cast<std::int64_t>(g.vertex_count()));
    auto ends = end_vertices(g);
    std::set<vertex_id> on(ends.begin(), ends.end());
    std::vector<Degree> degs = box(g.zero(), lim);
    std::stable_sort(degs.begin(), degs.end(), [](const Degree& a, const Degree& b) { return a.total() < b.total(); });
    SufficientCondition out;
    for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v) {
        bool found = false;
        for (const auto& n : degs) {
            auto ps = g.lambda_le(v, n);
            if (std::all_of(ps.begin(), ps.end(), [&](const Path& p) { return on.count(p.source()) != 0; })) {
                out.n_map.emplace(v, n);
                found = true;
                break;
            }
        }
        if (!found) out.exhausted.push_back(v);
    }
    return out;
}

namespace detail {

inline std::vector<Rational> end_formula(const KGraph& g, const std::vector<Degree>& n, const std::vector<int>& cls,
                                         const std::vector<Rational>& weights)
{
    std::vector<Rational> out(g.vertex_count(), Rational(0));
    for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v)
        for (const auto& p : g.lambda_le(v, n[static_cast<std::size_t>(v)])) {
            int c = cls[static_cast<std::size_t>(p.source())];
            if (c < 0) fail(errc::sufficient_condition_unmet, "s(λ) = " + g.vertex_name(p.source()) + " is not on an end");
            out[static_cast<std::size_t>(v)] += weights.at(static_cast<std::size_t>(c));
        }
    return out;
}

} // namespace detail

// g(v) = Σ_{λ∈vΛ^{≤n_v}} g([x_{s(λ)}]) with one positive weight per end class. The value
// is recomputed with every n_v replaced by n_v ∨ e_i and by n_v + e_i.
inline GraphTrace trace_from_end_assignment(const KGraph& g, const SufficientCondition& sc,
                                            const std::vector<Rational>& class_weights)
{
    if (!sc.ok()) fail(errc::sufficient_condition_unmet, "sufficient condition failed at some vertex");
    auto classes = end_classes(find_ends(g));
    if (class_weights.size() != classes.size())
        fail(errc::invalid_argument, "need one weight per end class (" + std::to_string(classes.size()) + ")");
    for (const auto& w : class_weights)
        if (w <= 0) fail(errc::invalid_argument, "end-class weights must be positive");
    auto cls = end_class_of(g, classes);
    std::vector<Degree> n;
    for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v) n.push_back(sc.n_map.at(v));
    auto values = detail::end_formula(g, n, cls, class_weights);
    for (std::size_t i = 0; i < g.rank(); ++i)
        for (int mode = 0; mode < 2; ++mode) {
            auto m = n;
            for (auto& x : m) x = mode == 0 ? x.join(g.unit(i)) : x + g.unit(i);
            if (detail::end_formula(g, m, cls, class_weights) != values)
                fail(errc::not_a_graph_trace, "formula depends on the choice of n_v");
        }
    GraphTrace t(std::move(values));
    if (!t.faithful() || !is_graph_trace(t, g)) fail(errc::not_a_graph_trace, "end assignment did not give a faithful trace");
    return t;
}

// ---------------------------------------------------------------- heuristic

// |vΛ^{≤(j,…,j)}| for j = 1..levels. Distinct elements are mutually orthogonal, so
// growth hints at an infinite orthogonal family. Not a decision procedure.
inline std::vector<std::size_t> orthogonal_family_growth(const KGraph& g, vertex_id v, std::size_t levels)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j <= levels; ++j)
        out.push_back(g.lambda_le(v, Degree::constant(g.rank(), static_cast<std::int64_t>(j))).size());
    return out;
}

} // namespace kgraph
