#pragma once

#include <map>
#include <utility>
#include <vector>

#include "graph_trace.hpp"
#include "kgraph.hpp"
#include "rational.hpp"

namespace kgraph {

using Generator = std::pair<Path, Path>; // (μ, ν) standing for s_μ s_ν*

// Finite combination of s_μ s_ν* with Gaussian rational coefficients. The graph
// is referenced, not owned.
class AlgebraElement {
public:
    using term_map = std::map<Generator, GaussianRational>;

    explicit AlgebraElement(const KGraph& g) : g_(&g) {}

    static AlgebraElement generator(const KGraph& g, const Path& mu, const Path& nu, const GaussianRational& c = 1)
    {
        AlgebraElement a(g);
        a.add_term(mu, nu, c);
        return a;
    }
    static AlgebraElement vertex(const KGraph& g, vertex_id v)
    {
        return generator(g, g.vertex_path(v), g.vertex_path(v));
    }
    static AlgebraElement path(const KGraph& g, const Path& l)
    {
        return generator(g, l, g.vertex_path(l.source()));
    }
    static AlgebraElement path_adjoint(const KGraph& g, const Path& l)
    {
        return generator(g, g.vertex_path(l.source()), l);
    }

    const KGraph& graph() const noexcept { return *g_; }
    const term_map& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    void add_term(const Path& mu, const Path& nu, const GaussianRational& c)
    {
        if (mu.source() != nu.source())
            fail(errc::invalid_argument, "s(μ) != s(ν) for " + g_->path_string(mu) + ", " + g_->path_string(nu));
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(Generator{mu, nu}, c);
        if (fresh) return;
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    GaussianRational coefficient(const Path& mu, const Path& nu) const
    {
        auto it = terms_.find(Generator{mu, nu});
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    void check_same_graph(const AlgebraElement& o) const
    {
        if (g_ != o.g_) fail(errc::graph_mismatch, "elements live over different graphs");
    }

    AlgebraElement& operator+=(const AlgebraElement& o)
    {
        check_same_graph(o);
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }
    AlgebraElement& operator-=(const AlgebraElement& o)
    {
        check_same_graph(o);
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(const GaussianRational& c, const AlgebraElement& a)
    {
        AlgebraElement r(*a.g_);
        for (const auto& [k, x] : a.terms_) r.add_term(k.first, k.second, c * x);
        return r;
    }

private:
    const KGraph* g_;
    term_map terms_;
};

// Pairs (σ, ρ) with μσ = νρ and d(μσ) = d(μ) ∨ d(ν).
inline std::vector<std::pair<Path, Path>> minimal_common_extensions(const KGraph& g, const Path& mu, const Path& nu)
{
    std::vector<std::pair<Path, Path>> out;
    if (mu.range() != nu.range()) return out;
    const Degree j = mu.degree().join(nu.degree());
    for (const auto& sigma : g.paths_with_range(mu.source(), j - mu.degree())) {
        Path l = g.compose(mu, sigma);
        if (g.factor(l, g.zero(), nu.degree()) == nu) out.emplace_back(sigma, g.factor(l, nu.degree(), j));
    }
    return out;
}

inline bool have_common_extension(const KGraph& g, const Path& mu, const Path& nu)
{
    if (mu.range() != nu.range())
        fail(errc::range_mismatch, "r(μ)=" + g.vertex_name(mu.range()) + ", r(ν)=" + g.vertex_name(nu.range()));
    return !minimal_common_extensions(g, mu, nu).empty();
}

inline AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) { return a + b; }
inline AlgebraElement scale(const GaussianRational& c, const AlgebraElement& a) { return c * a; }

inline AlgebraElement adjoint(const AlgebraElement& a)
{
    AlgebraElement r(a.graph());
    for (const auto& [k, c] : a.terms()) r.add_term(k.second, k.first, c.conj());
    return r;
}

// (s_μ s_ν*)(s_α s_β*) = Σ_{νσ = αρ minimal} s_{μσ} s_{βρ}*
inline AlgebraElement star_mult(const AlgebraElement& a, const AlgebraElement& b)
{
    a.check_same_graph(b);
    const KGraph& g = a.graph();
    AlgebraElement r(g);
    std::map<std::pair<Path, Path>, std::vector<std::pair<Path, Path>>> memo;
    for (const auto& [x, cx] : a.terms())
        for (const auto& [y, cy] : b.terms()) {
            const Path& nu = x.second;
            const Path& alpha = y.first;
            if (nu.range() != alpha.range()) continue;
            auto key = std::make_pair(nu, alpha);
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, minimal_common_extensions(g, nu, alpha)).first;
            const GaussianRational c = cx * cy;
            for (const auto& [sigma, rho] : it->second)
                r.add_term(g.compose(x.first, sigma), g.compose(y.second, rho), c);
        }
    return r;
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return star_mult(a, b); }

// s_μ s_ν* ↦ Σ_{λ∈s(μ)Λ^{≤level}} s_{μλ} s_{νλ}*
inline AlgebraElement ck4_expand(const AlgebraElement& a, const Degree& level)
{
    const KGraph& g = a.graph();
    AlgebraElement r(g);
    for (const auto& [k, c] : a.terms())
        for (const auto& l : g.lambda_le(k.first.source(), level))
            r.add_term(g.compose(k.first, l), g.compose(k.second, l), c);
    return r;
}

namespace detail {

// Expands every term of graded component δ = d(μ) - d(ν) so that its ν-side lands in
// Λ^{≤N_δ}. There the s_α s_β* with α ∈ Λ^{≤N_δ+δ}, β ∈ Λ^{≤N_δ} are linearly
// independent, so comparing coefficients is sound. N_δ is the join of d(ν), or of
// d(μ) ∨ d(ν) when `top` is set.
inline AlgebraElement expand_components(const AlgebraElement& a, bool top)
{
    const KGraph& g = a.graph();
    std::map<DegreeDiff, Degree> level;
    for (const auto& [k, c] : a.terms()) {
        Degree n = top ? k.first.degree().join(k.second.degree()) : k.second.degree();
        auto [it, fresh] = level.try_emplace(k.first.degree() - k.second.degree(), n);
        if (!fresh) it->second = it->second.join(n);
    }
    AlgebraElement r(g);
    for (const auto& [k, c] : a.terms()) {
        const Degree& n = level.at(k.first.degree() - k.second.degree());
        for (const auto& l : g.lambda_le(k.first.source(), n - k.second.degree()))
            r.add_term(g.compose(k.first, l), g.compose(k.second, l), c);
    }
    return r;
}

} // namespace detail

// Normal form with N_δ the join of d(ν). Idempotent: a second pass only meets
// ν-sides that are already maximal.
inline AlgebraElement canonical_form(const AlgebraElement& a) { return detail::expand_components(a, false); }

inline bool is_zero(const AlgebraElement& a) { return canonical_form(a).empty(); }

// Compares at the join of d(μ) ∨ d(ν) per graded component.
inline bool equals(const AlgebraElement& a, const AlgebraElement& b)
{
    a.check_same_graph(b);
    return detail::expand_components(a - b, true).empty();
}

// Φ_n
inline AlgebraElement graded_part(const AlgebraElement& a, const DegreeDiff& n)
{
    AlgebraElement r(a.graph());
    for (const auto& [k, c] : a.terms())
        if (k.first.degree() - k.second.degree() == n) r.add_term(k.first, k.second, c);
    return r;
}

// Φ
inline AlgebraElement gauge_expectation(const AlgebraElement& a)
{
    return graded_part(a, DegreeDiff::zero(a.graph().rank()));
}

// Ψ. Term-wise δ_{μ,ν} is well defined on A_c; the input is canonicalised first so
// the output is in normal form.
inline AlgebraElement diagonal_expectation(const AlgebraElement& a)
{
    AlgebraElement r(a.graph());
    const AlgebraElement canon = canonical_form(a);
    for (const auto& [k, c] : canon.terms())
        if (k.first == k.second) r.add_term(k.first, k.second, c);
    return r;
}

inline std::vector<DegreeDiff> graded_degrees(const AlgebraElement& a)
{
    std::vector<DegreeDiff> out;
    for (const auto& [k, c] : a.terms()) out.push_back(k.first.degree() - k.second.degree());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// τ_g(s_μ s_ν*) = δ_{μ,ν} g(s(μ))
inline GaussianRational tau_g(const AlgebraElement& a, const GraphTrace& g)
{
    if (g.size() != a.graph().vertex_count() || !is_graph_trace(g, a.graph(), EdgeLevel{}))
        fail(errc::not_a_graph_trace, "values fail the graph-trace equation");
    GaussianRational sum;
    for (const auto& [k, c] : a.terms())
        if (k.first == k.second) sum += c * GaussianRational(g(k.first.source()));
    return sum;
}

} // namespace kgraph
