#pragma once

#include <optional>
#include <vector>

#include "algebra.hpp"
#include "clifford.hpp"

namespace kgraph {

// Element of X_c = C^{2^[k/2]} ⊗ A_c.
class ModuleElement {
public:
    explicit ModuleElement(const KGraph& g) : comps_(spinor_dimension(g.rank()), AlgebraElement(g)) {}

    static ModuleElement single(const AlgebraElement& a, std::size_t j = 0)
    {
        ModuleElement x(a.graph());
        x.at(j) = a;
        return x;
    }

    const KGraph& graph() const { return comps_.front().graph(); }
    std::size_t size() const noexcept { return comps_.size(); }
    AlgebraElement& at(std::size_t j)
    {
        check_index(j);
        return comps_[j];
    }
    const AlgebraElement& at(std::size_t j) const
    {
        check_index(j);
        return comps_[j];
    }
    const std::vector<AlgebraElement>& components() const noexcept { return comps_; }

    ModuleElement& operator+=(const ModuleElement& o)
    {
        for (std::size_t j = 0; j < size(); ++j) comps_[j] += o.comps_[j];
        return *this;
    }
    friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
    friend ModuleElement operator-(ModuleElement a, const ModuleElement& b)
    {
        for (std::size_t j = 0; j < a.size(); ++j) a.comps_[j] -= b.comps_[j];
        return a;
    }
    friend ModuleElement operator*(const GaussianRational& c, ModuleElement a)
    {
        for (auto& x : a.comps_) x = c * x;
        return a;
    }

    // right A_c-action
    ModuleElement operator*(const AlgebraElement& a) const
    {
        ModuleElement r(graph());
        for (std::size_t j = 0; j < size(); ++j) r.comps_[j] = star_mult(comps_[j], a);
        return r;
    }

private:
    void check_index(std::size_t j) const
    {
        if (j >= comps_.size()) fail(errc::invalid_argument, "spinor index " + std::to_string(j));
    }
    std::vector<AlgebraElement> comps_;
};

inline bool equals(const ModuleElement& x, const ModuleElement& y)
{
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!equals(x.at(j), y.at(j))) return false;
    return true;
}

inline bool is_zero(const ModuleElement& x)
{
    for (const auto& c : x.components())
        if (!is_zero(c)) return false;
    return true;
}

inline ModuleElement graded_part(const ModuleElement& x, const DegreeDiff& n)
{
    ModuleElement r(x.graph());
    for (std::size_t j = 0; j < x.size(); ++j) r.at(j) = graded_part(x.at(j), n);
    return r;
}

inline ModuleElement left_mult(const AlgebraElement& a, const ModuleElement& x)
{
    ModuleElement r(x.graph());
    for (std::size_t j = 0; j < x.size(); ++j) r.at(j) = star_mult(a, x.at(j));
    return r;
}

// (x|y)_R = Σ_j Φ(x_j* y_j)
inline AlgebraElement inner_product_F(const ModuleElement& x, const ModuleElement& y)
{
    x.at(0).check_same_graph(y.at(0));
    AlgebraElement r(x.graph());
    for (std::size_t j = 0; j < x.size(); ++j) r += gauge_expectation(star_mult(adjoint(x.at(j)), y.at(j)));
    return r;
}

// Θ_{x,y} z = x·(y|z)_R
inline ModuleElement theta_apply(const ModuleElement& x, const ModuleElement& y, const ModuleElement& z)
{
    return x * inner_product_F(y, z);
}

// |w|_m: number of paths of degree m with source w
inline std::size_t source_count(const KGraph& g, vertex_id w, const Degree& m)
{
    return g.count_paths_with_source(w, m);
}

// T_{v,n1,n2} z = Σ_{α,β,j} |s(α)|_{n2}^{-1} Θ_{s_αs_β*⊗e_j, s_αs_β*⊗e_j} z over d(α) = n1,
// d(β) = n2, r(α) = v, s(α) = s(β).
inline ModuleElement finite_rank_operator(const KGraph& g, vertex_id v, const Degree& n1, const Degree& n2,
                                          const ModuleElement& z)
{
    ModuleElement out(g);
    for (const auto& alpha : g.paths_with_range(v, n1)) {
        auto betas = g.paths_with_source(alpha.source(), n2);
        if (betas.empty()) continue;
        const GaussianRational w(Rational(1, static_cast<long>(betas.size())));
        for (const auto& beta : betas)
            for (std::size_t j = 0; j < out.size(); ++j) {
                auto x = ModuleElement::single(AlgebraElement::generator(g, alpha, beta), j);
                out += w * theta_apply(x, x, z);
            }
    }
    return out;
}

// A split n = n1 - n2 with n1, n2 >= 0 is admissible at v when vΛ^{n1} = vΛ^{≤n1} and
// every α ∈ vΛ^{n1} has s(α) = s(β) for some β of degree n2. Both together make
// Σ_{α,β} |s(α)|_{n2}^{-1} s_α s_β* s_β s_α* = p_v.
inline bool split_admissible(const KGraph& g, vertex_id v, const Degree& n1, const Degree& n2)
{
    if (!n1.nonnegative() || !n2.nonnegative()) return false;
    auto full = g.paths_with_range(v, n1);
    if (full.size() != g.lambda_le(v, n1).size()) return false;
    for (const auto& alpha : full)
        if (source_count(g, alpha.source(), n2) == 0) return false;
    return true;
}

// Splits n1 = n⁺ + t, n2 = n⁻ + t with 0 <= t <= slack that pass split_admissible.
inline std::vector<std::pair<Degree, Degree>> admissible_splits(const KGraph& g, vertex_id v, const DegreeDiff& n,
                                                                const Degree& slack)
{
    std::vector<std::pair<Degree, Degree>> out;
    for_each_in_box(g.zero(), slack, [&](const Degree& t) {
        Degree n1 = n.positive_part() + t, n2 = -n.negative_part() + t;
        if (split_admissible(g, v, n1, n2)) out.emplace_back(n1, n2);
    });
    return out;
}

// D x = Σ_n γ(in) Φ_n x, γ(in) = Σ_l i n_l γ^l acting on the spinor index.
inline ModuleElement dirac_apply(const ModuleElement& x, const CliffordGenerators<GaussianRational>& gammas)
{
    const KGraph& g = x.graph();
    if (gammas.k != g.rank()) fail(errc::invalid_argument, "Clifford rank differs from graph rank");
    ModuleElement out(g);
    const GaussianRational i = GaussianRational::i();
    for (std::size_t j = 0; j < x.size(); ++j)
        for (const auto& [key, c] : x.at(j).terms()) {
            const DegreeDiff d = key.first.degree() - key.second.degree();
            for (std::size_t row = 0; row < x.size(); ++row) {
                GaussianRational m;
                for (std::size_t l = 0; l < gammas.k; ++l)
                    if (d[l] != 0) m += GaussianRational(Rational(d[l])) * gammas.gammas[l](row, j);
                m *= i;
                if (!m.is_zero()) out.at(row).add_term(key.first, key.second, m * c);
            }
        }
    return out;
}

// ⟨x, y⟩ = Σ_j τ_g(x_j* y_j)
inline GaussianRational module_inner(const ModuleElement& x, const ModuleElement& y, const GraphTrace& g)
{
    GaussianRational s;
    for (std::size_t j = 0; j < x.size(); ++j) s += tau_g(star_mult(adjoint(x.at(j)), y.at(j)), g);
    return s;
}

inline bool has_cycle(const KGraph& g)
{
    // Kahn's algorithm on the skeleton
    std::vector<std::size_t> indeg(g.vertex_count(), 0);
    for (std::size_t e = 0; e < g.edge_count(); ++e) ++indeg[static_cast<std::size_t>(g.edge(static_cast<edge_id>(e)).source)];
    std::vector<vertex_id> ready;
    for (std::size_t v = 0; v < indeg.size(); ++v)
        if (indeg[v] == 0) ready.push_back(static_cast<vertex_id>(v));
    std::size_t seen = 0;
    while (!ready.empty()) {
        vertex_id u = ready.back();
        ready.pop_back();
        ++seen;
        for (std::size_t i = 0; i < g.rank(); ++i)
            for (edge_id e : g.in_edges(u, i))
                if (--indeg[static_cast<std::size_t>(g.edge(e).source)] == 0) ready.push_back(g.edge(e).source);
    }
    return seen != g.vertex_count();
}

// Σ over (α,β) ∈ Λ×_s^min Λ and spinor j of |s(α)|_{d(β)}^{-1} ⟨s_αs_β*⊗e_j, Θ_{x,y} s_αs_β*⊗e_j⟩.
// Acyclic graphs give a finite sum. Otherwise a degree bound on α and β is required.
inline GaussianRational tau_tilde_rank_one(const ModuleElement& x, const ModuleElement& y, const GraphTrace& g,
                                           std::optional<Degree> bound = std::nullopt)
{
    const KGraph& gr = x.graph();
    if (!bound) {
        if (has_cycle(gr))
            fail(errc::not_finitely_summable, "graph has a cycle; pass a truncation bound");
        bound = Degree::constant(gr.rank(), static_cast<std::int64_t>(gr.vertex_count()));
    }
    GaussianRational sum;
    for (vertex_id w = 0; w < static_cast<vertex_id>(gr.vertex_count()); ++w) {
        std::vector<Path> from_w;
        for_each_in_box(gr.zero(), *bound, [&](const Degree& m) {
            auto ps = gr.paths_with_source(w, m);
            from_w.insert(from_w.end(), ps.begin(), ps.end());
        });
        for (const auto& alpha : from_w)
            for (const auto& beta : from_w) {
                if (!alpha.degree().meet(beta.degree()).is_zero()) continue;
                const GaussianRational weight(Rational(1, static_cast<long>(source_count(gr, w, beta.degree()))));
                for (std::size_t j = 0; j < x.size(); ++j) {
                    auto e = ModuleElement::single(AlgebraElement::generator(gr, alpha, beta), j);
                    sum += weight * module_inner(e, theta_apply(x, y, e), g);
                }
            }
    }
    return sum;
}

} // namespace kgraph
