#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "degree.hpp"
#include "error.hpp"

namespace kgraph {

using vertex_id = int;
using edge_id = int;

struct SkeletonEdge {
    std::string id;
    int color = 1; // 1-based, as in the file format
    std::string range;
    std::string source;
};

struct Skeleton {
    std::size_t k = 1;
    std::vector<std::string> vertices;
    std::vector<SkeletonEdge> edges;
};

// ef = f'e' with e, f composable (s(e) = r(f)) of distinct colors.
struct Square {
    std::array<std::string, 2> outer;
    std::array<std::string, 2> inner;
};

struct FactorizationRegime {
    std::vector<Square> squares;
};

struct Edge {
    std::string id;
    std::size_t color; // 0-based
    vertex_id range;
    vertex_id source;
};

// A morphism in normal form: edges sorted into color blocks, color 0 first,
// edges[0] has range equal to range().
class Path {
public:
    Path() = default;
    Path(vertex_id r, vertex_id s, Degree d, std::vector<edge_id> edges)
        : range_(r), source_(s), degree_(std::move(d)), edges_(std::move(edges))
    {
    }

    vertex_id range() const noexcept { return range_; }
    vertex_id source() const noexcept { return source_; }
    const Degree& degree() const noexcept { return degree_; }
    const std::vector<edge_id>& edges() const noexcept { return edges_; }
    std::size_t length() const noexcept { return edges_.size(); }
    bool is_vertex() const noexcept { return edges_.empty(); }

    friend bool operator==(const Path& a, const Path& b)
    {
        return a.range_ == b.range_ && a.edges_ == b.edges_;
    }
    friend bool operator<(const Path& a, const Path& b)
    {
        if (a.range_ != b.range_) return a.range_ < b.range_;
        return a.edges_ < b.edges_;
    }

private:
    vertex_id range_ = -1;
    vertex_id source_ = -1;
    Degree degree_;
    std::vector<edge_id> edges_;
};

class KGraph;
KGraph validate(const Skeleton& skeleton, const FactorizationRegime& regime);

class KGraph {
public:
    std::size_t rank() const noexcept { return k_; }
    std::size_t vertex_count() const noexcept { return vnames_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::string& vertex_name(vertex_id v) const { return vnames_.at(static_cast<std::size_t>(v)); }
    vertex_id vertex(const std::string& name) const
    {
        auto it = vindex_.find(name);
        if (it == vindex_.end()) fail(errc::unknown_vertex, "no vertex '" + name + "'");
        return it->second;
    }
    bool has_vertex(const std::string& name) const { return vindex_.count(name) != 0; }
    const Edge& edge(edge_id e) const { return edges_.at(static_cast<std::size_t>(e)); }
    edge_id edge_by_name(const std::string& name) const
    {
        auto it = eindex_.find(name);
        if (it == eindex_.end()) fail(errc::unknown_edge, "no edge '" + name + "'");
        return it->second;
    }

    // vΛ^{e_i} and Λ^{e_i}v
    const std::vector<edge_id>& in_edges(vertex_id v, std::size_t color) const
    {
        check_vertex(v);
        return in_[static_cast<std::size_t>(v) * k_ + color];
    }
    const std::vector<edge_id>& out_edges(vertex_id v, std::size_t color) const
    {
        check_vertex(v);
        return out_[static_cast<std::size_t>(v) * k_ + color];
    }

    bool locally_convex() const noexcept { return locally_convex_; }
    bool no_sinks() const noexcept { return no_sinks_; }
    bool no_sources() const noexcept { return no_sources_; }
    bool locally_finite() const noexcept { return true; }

    // Builders record where an infinite tail was cut off.
    const std::optional<vertex_id>& truncation_vertex() const noexcept { return truncation_; }
    void set_truncation_vertex(vertex_id v)
    {
        check_vertex(v);
        truncation_ = v;
    }

    const Skeleton& skeleton() const noexcept { return skeleton_; }
    const FactorizationRegime& regime() const noexcept { return regime_; }

    Degree zero() const { return Degree::zero(k_); }
    Degree unit(std::size_t i) const { return Degree::unit(k_, i); }

    Path vertex_path(vertex_id v) const
    {
        check_vertex(v);
        return Path(v, v, zero(), {});
    }
    Path edge_path(edge_id e) const
    {
        const Edge& x = edge(e);
        return Path(x.range, x.source, unit(x.color), {e});
    }

    // The unique square partner: for composable (x, y) of distinct colors
    // returns (y', x') with xy = y'x', color(y') = color(y).
    std::pair<edge_id, edge_id> swap(edge_id x, edge_id y) const
    {
        auto it = swap_.find(key(x, y));
        if (it == swap_.end())
            fail(errc::missing_square, "no square for (" + edge(x).id + "," + edge(y).id + ")");
        return it->second;
    }

    // Normal form of an arbitrary composable edge sequence (leftmost edge has the range).
    Path path_from_edges(std::vector<edge_id> seq) const
    {
        if (seq.empty()) fail(errc::invalid_argument, "empty edge sequence needs an explicit vertex");
        for (std::size_t i = 0; i + 1 < seq.size(); ++i)
            if (edge(seq[i]).source != edge(seq[i + 1]).range)
                fail(errc::not_composable, edge(seq[i]).id + " then " + edge(seq[i + 1]).id);
        Degree d = zero();
        for (edge_id e : seq) d[edge(e).color] += 1;
        vertex_id r = edge(seq.front()).range, s = edge(seq.back()).source;
        sort_colors(seq);
        return Path(r, s, std::move(d), std::move(seq));
    }

    Path path_from_names(const std::vector<std::string>& names) const
    {
        std::vector<edge_id> seq;
        for (const auto& n : names) seq.push_back(edge_by_name(n));
        return path_from_edges(std::move(seq));
    }

    Path compose(const Path& a, const Path& b) const
    {
        if (a.source() != b.range())
            fail(errc::not_composable,
                 "s(λ)=" + vertex_name(a.source()) + " but r(μ)=" + vertex_name(b.range()));
        if (a.is_vertex()) return b;
        if (b.is_vertex()) return a;
        std::vector<edge_id> seq = a.edges();
        seq.insert(seq.end(), b.edges().begin(), b.edges().end());
        sort_colors(seq);
        return Path(a.range(), b.source(), a.degree() + b.degree(), std::move(seq));
    }

    // λ(m, n)
    Path factor(const Path& p, const Degree& m, const Degree& n) const
    {
        if (m.rank() != k_ || n.rank() != k_ || !m.nonnegative() || !m.leq(n) || !n.leq(p.degree()))
            fail(errc::degree_out_of_range,
                 "need 0 <= " + m.str() + " <= " + n.str() + " <= " + p.degree().str());
        if (p.is_vertex()) return p;
        std::vector<std::size_t> target;
        for (std::size_t i = 0; i < k_; ++i) target.insert(target.end(), static_cast<std::size_t>(m[i]), i);
        for (std::size_t i = 0; i < k_; ++i)
            target.insert(target.end(), static_cast<std::size_t>(n[i] - m[i]), i);
        for (std::size_t i = 0; i < k_; ++i)
            target.insert(target.end(), static_cast<std::size_t>(p.degree()[i] - n[i]), i);

        std::vector<edge_id> cur = p.edges();
        for (std::size_t pos = 0; pos < cur.size(); ++pos) {
            std::size_t q = pos;
            while (edge(cur[q]).color != target[pos]) ++q;
            for (; q > pos; --q) {
                auto [a, b] = swap(cur[q - 1], cur[q]);
                cur[q - 1] = a;
                cur[q] = b;
            }
        }
        const auto lo = static_cast<std::size_t>(m.total());
        const auto hi = static_cast<std::size_t>(n.total());
        vertex_id r = lo == 0 ? p.range() : edge(cur[lo - 1]).source;
        if (lo == hi) return Path(r, r, zero(), {});
        std::vector<edge_id> seg(cur.begin() + static_cast<std::ptrdiff_t>(lo),
                                 cur.begin() + static_cast<std::ptrdiff_t>(hi));
        vertex_id s = edge(seg.back()).source;
        return Path(r, s, n - m, std::move(seg));
    }

    // vΛ^n
    std::vector<Path> paths_with_range(vertex_id v, const Degree& n) const
    {
        check_vertex(v);
        check_degree(n);
        std::vector<Path> out;
        std::vector<edge_id> seq;
        grow_from_range(v, v, n, 0, 0, seq, out);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Λ^n v
    std::vector<Path> paths_with_source(vertex_id v, const Degree& n) const
    {
        check_vertex(v);
        check_degree(n);
        std::vector<Path> out;
        std::vector<edge_id> rev;
        grow_from_source(v, v, n, k_, 0, rev, out);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::size_t count_paths_with_source(vertex_id v, const Degree& n) const
    {
        return paths_with_source(v, n).size();
    }

    // every path with range v and degree <= n
    std::vector<Path> paths_with_range_upto(vertex_id v, const Degree& n) const
    {
        std::vector<Path> out;
        for_each_in_box(zero(), n, [&](const Degree& m) {
            auto ps = paths_with_range(v, m);
            out.insert(out.end(), ps.begin(), ps.end());
        });
        return out;
    }

    // vΛ^{≤n} by the edge-level criterion.
    std::vector<Path> lambda_le(vertex_id v, const Degree& n) const
    {
        check_vertex(v);
        check_degree(n);
        std::vector<Path> out;
        for (auto& p : paths_with_range_upto(v, n)) {
            bool maximal = true;
            for (std::size_t i = 0; i < k_ && maximal; ++i)
                if (p.degree()[i] < n[i] && !in_edges(p.source(), i).empty()) maximal = false;
            if (maximal) out.push_back(std::move(p));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // vΛ^{≤n} straight from the definition: no nontrivial μ with d(λμ) <= n.
    std::vector<Path> lambda_le_literal(vertex_id v, const Degree& n) const
    {
        check_vertex(v);
        check_degree(n);
        std::vector<Path> out;
        for (auto& p : paths_with_range_upto(v, n)) {
            bool extendable = false;
            for_each_in_box(zero(), n - p.degree(), [&](const Degree& m) {
                if (extendable || m.is_zero()) return;
                if (!paths_with_range(p.source(), m).empty()) extendable = true;
            });
            if (!extendable) out.push_back(std::move(p));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Vertices s(λ) for λ ∈ vΛ, found by walking edges from range to source.
    std::vector<vertex_id> hereditary_closure(vertex_id v) const
    {
        check_vertex(v);
        std::vector<char> seen(vertex_count(), 0);
        std::vector<vertex_id> stack{v}, out;
        seen[static_cast<std::size_t>(v)] = 1;
        while (!stack.empty()) {
            vertex_id u = stack.back();
            stack.pop_back();
            out.push_back(u);
            for (std::size_t i = 0; i < k_; ++i)
                for (edge_id e : in_edges(u, i)) {
                    vertex_id w = edge(e).source;
                    if (!seen[static_cast<std::size_t>(w)]) {
                        seen[static_cast<std::size_t>(w)] = 1;
                        stack.push_back(w);
                    }
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string path_string(const Path& p) const
    {
        if (p.is_vertex()) return vertex_name(p.range());
        std::string s;
        for (edge_id e : p.edges()) {
            if (!s.empty()) s += " ";
            s += edge(e).id;
        }
        return s;
    }

    std::vector<std::string> path_names(const Path& p) const
    {
        std::vector<std::string> out;
        for (edge_id e : p.edges()) out.push_back(edge(e).id);
        return out;
    }

private:
    friend KGraph validate(const Skeleton&, const FactorizationRegime&);
    KGraph() = default;

    std::uint64_t key(edge_id x, edge_id y) const
    {
        return static_cast<std::uint64_t>(x) * edges_.size() + static_cast<std::uint64_t>(y);
    }

    void check_vertex(vertex_id v) const
    {
        if (v < 0 || static_cast<std::size_t>(v) >= vnames_.size())
            fail(errc::unknown_vertex, "vertex index " + std::to_string(v));
    }
    void check_degree(const Degree& n) const
    {
        if (n.rank() != k_ || !n.nonnegative())
            fail(errc::degree_out_of_range, "bad degree " + n.str());
    }

    // adjacent-transposition rewriting; each swap removes one color inversion
    void sort_colors(std::vector<edge_id>& seq) const
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
                if (edge(seq[i]).color > edge(seq[i + 1]).color) {
                    auto [a, b] = swap(seq[i], seq[i + 1]);
                    seq[i] = a;
                    seq[i + 1] = b;
                    changed = true;
                }
            }
        }
    }

    void grow_from_range(vertex_id r, vertex_id cur, const Degree& n, std::size_t color, std::int64_t used,
                         std::vector<edge_id>& seq, std::vector<Path>& out) const
    {
        while (color < k_ && used == n[color]) {
            ++color;
            used = 0;
        }
        if (color == k_) {
            out.emplace_back(r, cur, n, seq);
            return;
        }
        for (edge_id e : in_edges(cur, color)) {
            seq.push_back(e);
            grow_from_range(r, edge(e).source, n, color, used + 1, seq, out);
            seq.pop_back();
        }
    }

    void grow_from_source(vertex_id s, vertex_id cur, const Degree& n, std::size_t color, std::int64_t used,
                          std::vector<edge_id>& rev, std::vector<Path>& out) const
    {
        // color counts down from k; the block being filled is color - 1
        while (color > 0 && used == n[color - 1]) {
            --color;
            used = 0;
        }
        if (color == 0) {
            std::vector<edge_id> seq(rev.rbegin(), rev.rend());
            out.emplace_back(cur, s, n, std::move(seq));
            return;
        }
        for (edge_id e : out_edges(cur, color - 1)) {
            rev.push_back(e);
            grow_from_source(s, edge(e).range, n, color, used + 1, rev, out);
            rev.pop_back();
        }
    }

    std::size_t k_ = 1;
    std::vector<std::string> vnames_;
    std::unordered_map<std::string, vertex_id> vindex_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, edge_id> eindex_;
    std::vector<std::vector<edge_id>> in_, out_;
    std::unordered_map<std::uint64_t, std::pair<edge_id, edge_id>> swap_;
    bool locally_convex_ = false, no_sinks_ = false, no_sources_ = false;
    std::optional<vertex_id> truncation_;
    Skeleton skeleton_;
    FactorizationRegime regime_;
};

inline KGraph validate(const Skeleton& sk, const FactorizationRegime& regime)
{
    if (sk.k < 1) fail(errc::invalid_argument, "rank must be at least 1");
    KGraph g;
    g.k_ = sk.k;
    g.skeleton_ = sk;
    g.regime_ = regime;
    for (const auto& name : sk.vertices) {
        if (!g.vindex_.emplace(name, static_cast<vertex_id>(g.vnames_.size())).second)
            fail(errc::invalid_argument, "duplicate vertex '" + name + "'");
        g.vnames_.push_back(name);
    }
    const std::size_t nv = g.vnames_.size();
    g.in_.assign(nv * g.k_, {});
    g.out_.assign(nv * g.k_, {});
    for (const auto& se : sk.edges) {
        if (se.color < 1 || static_cast<std::size_t>(se.color) > g.k_)
            fail(errc::invalid_argument, "edge '" + se.id + "' has color " + std::to_string(se.color));
        auto r = g.vindex_.find(se.range), s = g.vindex_.find(se.source);
        if (r == g.vindex_.end()) fail(errc::unknown_vertex, "edge '" + se.id + "' range '" + se.range + "'");
        if (s == g.vindex_.end()) fail(errc::unknown_vertex, "edge '" + se.id + "' source '" + se.source + "'");
        auto id = static_cast<edge_id>(g.edges_.size());
        if (!g.eindex_.emplace(se.id, id).second) fail(errc::invalid_argument, "duplicate edge '" + se.id + "'");
        g.edges_.push_back({se.id, static_cast<std::size_t>(se.color - 1), r->second, s->second});
        g.in_[static_cast<std::size_t>(r->second) * g.k_ + static_cast<std::size_t>(se.color - 1)].push_back(id);
        g.out_[static_cast<std::size_t>(s->second) * g.k_ + static_cast<std::size_t>(se.color - 1)].push_back(id);
    }

    std::set<std::pair<edge_id, edge_id>> seen;
    for (const auto& sq : regime.squares) {
        edge_id a = g.edge_by_name(sq.outer[0]), b = g.edge_by_name(sq.outer[1]);
        edge_id c = g.edge_by_name(sq.inner[0]), d = g.edge_by_name(sq.inner[1]);
        const Edge &ea = g.edge(a), &eb = g.edge(b), &ec = g.edge(c), &ed = g.edge(d);
        const std::string label = sq.outer[0] + sq.outer[1] + " = " + sq.inner[0] + sq.inner[1];
        if (ea.source != eb.range || ec.source != ed.range)
            fail(errc::mismatched_endpoints, label + ": a side is not composable");
        if (ea.color == eb.color || ea.color != ed.color || eb.color != ec.color)
            fail(errc::mismatched_endpoints, label + ": colors do not cross");
        if (ea.range != ec.range || eb.source != ed.source)
            fail(errc::mismatched_endpoints, label + ": endpoints differ");
        for (auto pr : {std::pair{a, b}, std::pair{c, d}})
            if (!seen.insert(pr).second)
                fail(errc::duplicate_square,
                     "pair (" + g.edge(pr.first).id + "," + g.edge(pr.second).id + ") appears twice");
        g.swap_[g.key(a, b)] = {c, d};
        g.swap_[g.key(c, d)] = {a, b};
    }
    for (edge_id x = 0; x < static_cast<edge_id>(g.edges_.size()); ++x)
        for (std::size_t j = 0; j < g.k_; ++j) {
            if (j == g.edge(x).color) continue;
            for (edge_id y : g.in_edges(g.edge(x).source, j))
                if (!seen.count({x, y}))
                    fail(errc::missing_square, "no rule for (" + g.edge(x).id + "," + g.edge(y).id + ")");
        }

    if (g.k_ >= 3) {
        // Sort each tricolored composable triple by always resolving the leftmost
        // inversion and by always resolving the rightmost; the results must agree.
        auto route = [&](std::array<edge_id, 3> t, bool leftmost) {
            for (;;) {
                int pos = -1;
                for (int i = 0; i < 2; ++i) {
                    int j = leftmost ? i : 1 - i;
                    if (g.edge(t[j]).color > g.edge(t[j + 1]).color) {
                        pos = j;
                        break;
                    }
                }
                if (pos < 0) return t;
                auto [a, b] = g.swap(t[pos], t[pos + 1]);
                t[pos] = a;
                t[pos + 1] = b;
            }
        };
        for (edge_id x = 0; x < static_cast<edge_id>(g.edges_.size()); ++x)
            for (std::size_t cy = 0; cy < g.k_; ++cy) {
                if (cy == g.edge(x).color) continue;
                for (edge_id y : g.in_edges(g.edge(x).source, cy))
                    for (std::size_t cz = 0; cz < g.k_; ++cz) {
                        if (cz == g.edge(x).color || cz == cy) continue;
                        for (edge_id z : g.in_edges(g.edge(y).source, cz)) {
                            auto l = route({x, y, z}, true), r = route({x, y, z}, false);
                            if (l != r)
                                fail(errc::associativity_failure, "triple (" + g.edge(x).id + "," + g.edge(y).id +
                                                                      "," + g.edge(z).id + ")");
                        }
                    }
            }
    }

    g.locally_convex_ = true;
    g.no_sinks_ = true;
    g.no_sources_ = true;
    for (vertex_id v = 0; v < static_cast<vertex_id>(nv); ++v)
        for (std::size_t i = 0; i < g.k_; ++i) {
            if (g.paths_with_source(v, g.unit(i)).empty()) g.no_sinks_ = false;
            if (g.paths_with_range(v, g.unit(i)).empty()) g.no_sources_ = false;
        }
    for (const Edge& e : g.edges_)
        for (std::size_t j = 0; j < g.k_; ++j)
            if (j != e.color && g.in_edges(e.source, j).empty() && !g.in_edges(e.range, j).empty())
                g.locally_convex_ = false;
    return g;
}

} // namespace kgraph
