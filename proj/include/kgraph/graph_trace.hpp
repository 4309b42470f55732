#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgraph.hpp"
#include "rational.hpp"

namespace kgraph {

class GraphTrace {
public:
    GraphTrace() = default;
    explicit GraphTrace(std::vector<Rational> values) : values_(std::move(values))
    {
        for (const auto& x : values_)
            if (x < 0) fail(errc::invalid_argument, "graph trace values must be nonnegative");
    }

    static GraphTrace constant(const KGraph& g, const Rational& c)
    {
        return GraphTrace(std::vector<Rational>(g.vertex_count(), c));
    }

    std::size_t size() const noexcept { return values_.size(); }
    const Rational& operator()(vertex_id v) const { return values_.at(static_cast<std::size_t>(v)); }
    const std::vector<Rational>& values() const noexcept { return values_; }
    bool faithful() const
    {
        for (const auto& x : values_)
            if (x <= 0) return false;
        return !values_.empty();
    }

    GraphTrace scaled(const Rational& c) const
    {
        auto v = values_;
        for (auto& x : v) x *= c;
        return GraphTrace(std::move(v));
    }

    friend bool operator==(const GraphTrace&, const GraphTrace&) = default;

private:
    std::vector<Rational> values_;
};

struct EdgeLevel {};
struct FullUpTo {
    Degree n;
};

// Per-color equation at every (v, i) with vΛ^{e_i} nonempty.
inline bool is_graph_trace(const GraphTrace& g, const KGraph& graph, EdgeLevel = {})
{
    if (g.size() != graph.vertex_count())
        fail(errc::missing_vertex_value, "trace has " + std::to_string(g.size()) + " values for " +
                                             std::to_string(graph.vertex_count()) + " vertices");
    for (vertex_id v = 0; v < static_cast<vertex_id>(graph.vertex_count()); ++v)
        for (std::size_t i = 0; i < graph.rank(); ++i) {
            const auto& in = graph.in_edges(v, i);
            if (in.empty()) continue;
            Rational sum = 0;
            for (edge_id e : in) sum += g(graph.edge(e).source);
            if (sum != g(v)) return false;
        }
    return true;
}

// g(v) = Σ_{λ∈vΛ^{≤m}} g(s(λ)) for every m <= n.
inline bool is_graph_trace(const GraphTrace& g, const KGraph& graph, const FullUpTo& mode)
{
    if (g.size() != graph.vertex_count())
        fail(errc::missing_vertex_value, "trace has " + std::to_string(g.size()) + " values for " +
                                             std::to_string(graph.vertex_count()) + " vertices");
    bool ok = true;
    for (vertex_id v = 0; v < static_cast<vertex_id>(graph.vertex_count()) && ok; ++v)
        for_each_in_box(graph.zero(), mode.n, [&](const Degree& m) {
            if (!ok) return;
            Rational sum = 0;
            for (const auto& p : graph.lambda_le(v, m)) sum += g(p.source());
            if (sum != g(v)) ok = false;
        });
    return ok;
}

} // namespace kgraph
