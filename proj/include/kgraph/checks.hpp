#pragma once

#include <random>
#include <string>
#include <vector>

#include "module.hpp"

namespace kgraph {

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first_failure;

    bool ok() const noexcept { return failed == 0 && checked > 0; }
    void record(bool pass, const std::string& what)
    {
        ++checked;
        if (pass) return;
        if (failed++ == 0) first_failure = what;
    }
};

inline std::vector<Path> all_paths_upto(const KGraph& g, const Degree& cap)
{
    std::vector<Path> out;
    for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v) {
        auto ps = g.paths_with_range_upto(v, cap);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

// all (μ, ν) with s(μ) = s(ν) and d(μ), d(ν) <= cap
inline std::vector<Generator> generators_upto(const KGraph& g, const Degree& cap)
{
    std::vector<std::vector<Path>> by_source(g.vertex_count());
    for (auto& p : all_paths_upto(g, cap)) by_source[static_cast<std::size_t>(p.source())].push_back(p);
    std::vector<Generator> out;
    for (const auto& ps : by_source)
        for (const auto& mu : ps)
            for (const auto& nu : ps) out.emplace_back(mu, nu);
    return out;
}

inline GaussianRational random_coefficient(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    GaussianRational c;
    while (c.is_zero()) c = GaussianRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    return c;
}

inline AlgebraElement random_element(const KGraph& g, std::mt19937_64& rng, const std::vector<Generator>& gens,
                                     std::size_t terms)
{
    AlgebraElement a(g);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    while (a.size() < terms) {
        const auto& [mu, nu] = gens[pick(rng)];
        a.add_term(mu, nu, random_coefficient(rng));
    }
    return a;
}

inline ModuleElement random_module_element(const KGraph& g, std::mt19937_64& rng, const std::vector<Generator>& gens,
                                           std::size_t terms)
{
    ModuleElement x(g);
    std::uniform_int_distribution<std::size_t> slot(0, x.size() - 1);
    for (std::size_t t = 0; t < terms; ++t) {
        const auto& [mu, nu] = gens[std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng)];
        x.at(slot(rng)).add_term(mu, nu, random_coefficient(rng));
    }
    return x;
}

// (CK1)-(CK4) on every vertex pair, composable path pair, path and level up to cap.
inline SuiteResult ck_axioms_suite(const KGraph& g, const Degree& cap)
{
    SuiteResult r{"ck_axioms", 0, 0, {}};
    const auto nv = static_cast<vertex_id>(g.vertex_count());
    for (vertex_id u = 0; u < nv; ++u)
        for (vertex_id v = 0; v < nv; ++v) {
            auto lhs = AlgebraElement::vertex(g, u) * AlgebraElement::vertex(g, v);
            auto rhs = u == v ? AlgebraElement::vertex(g, v) : AlgebraElement(g);
            r.record(equals(lhs, rhs), "CK1 at " + g.vertex_name(u) + "," + g.vertex_name(v));
        }
    const auto paths = all_paths_upto(g, cap);
    for (const auto& mu : paths) {
        auto smu = AlgebraElement::path(g, mu);
        r.record(equals(adjoint(smu) * smu, AlgebraElement::vertex(g, mu.source())), "CK3 at " + g.path_string(mu));
        for (const auto& nu : paths) {
            if (mu.source() != nu.range()) continue;
            r.record(equals(smu * AlgebraElement::path(g, nu), AlgebraElement::path(g, g.compose(mu, nu))),
                     "CK2 at " + g.path_string(mu) + " | " + g.path_string(nu));
        }
    }
    for (vertex_id v = 0; v < nv; ++v)
        for_each_in_box(g.zero(), cap, [&](const Degree& n) {
            AlgebraElement sum(g);
            for (const auto& l : g.lambda_le(v, n)) sum += AlgebraElement::generator(g, l, l);
            r.record(equals(AlgebraElement::vertex(g, v), sum), "CK4 at " + g.vertex_name(v) + " level " + n.str());
        });
    return r;
}

// Φ, Ψ and Φ_n identities on every generator up to cap and on random elements.
inline SuiteResult expectation_suite(const KGraph& g, const Degree& cap, std::mt19937_64& rng, std::size_t samples)
{
    SuiteResult r{"expectations", 0, 0, {}};
    const auto gens = generators_upto(g, cap);
    std::vector<AlgebraElement> elems;
    for (const auto& [mu, nu] : gens) elems.push_back(AlgebraElement::generator(g, mu, nu));
    for (std::size_t s = 0; s < samples; ++s) elems.push_back(random_element(g, rng, gens, 4));

    for (const auto& a : elems) {
        auto phi = gauge_expectation(a), psi = diagonal_expectation(a);
        r.record(equals(gauge_expectation(phi), phi), "Φ∘Φ = Φ");
        r.record(equals(diagonal_expectation(psi), psi), "Ψ∘Ψ = Ψ");
        r.record(equals(diagonal_expectation(phi), psi), "Ψ∘Φ = Ψ");
        r.record(equals(gauge_expectation(adjoint(a)), adjoint(phi)), "Φ is *-preserving");
        r.record(equals(diagonal_expectation(adjoint(a)), adjoint(psi)), "Ψ is *-preserving");
        auto degs = graded_degrees(a);
        degs.push_back(DegreeDiff::unit(g.rank(), 0));
        for (const auto& n : degs)
            for (const auto& m : degs) {
                auto lhs = graded_part(graded_part(a, m), n);
                auto rhs = n == m ? graded_part(a, n) : AlgebraElement(g);
                r.record(equals(lhs, rhs), "Φ_nΦ_m at n=" + n.str() + " m=" + m.str());
            }
        AlgebraElement total(g);
        for (const auto& n : graded_degrees(a)) total += graded_part(a, n);
        r.record(equals(total, a), "Σ_n Φ_n = id");
    }
    return r;
}

// τ_g(ab) = τ_g(ba), τ_g∘Φ = τ_g, and τ_g(a*a) > 0 when g is faithful.
inline SuiteResult trace_property_suite(const KGraph& g, const GraphTrace& tr, const Degree& cap,
                                        std::mt19937_64& rng, std::size_t pairs)
{
    SuiteResult r{"trace_property", 0, 0, {}};
    const auto gens = generators_upto(g, cap);
    for (std::size_t s = 0; s < pairs; ++s) {
        auto a = random_element(g, rng, gens, 3), b = random_element(g, rng, gens, 3);
        r.record(tau_g(a * b, tr) == tau_g(b * a, tr), "τ(ab) = τ(ba)");
        r.record(tau_g(a, tr) == tau_g(gauge_expectation(a), tr), "τ∘Φ = τ");
        if (tr.faithful() && !is_zero(a)) {
            auto v = tau_g(adjoint(a) * a, tr);
            r.record(v.is_real() && v.re() > 0, "τ(a*a) > 0");
        }
    }
    return r;
}

// T_{v,n1,n2} z = p_v Φ_n z on every generator z up to cap, with every admissible split
// of slack <= cap compared against each other.
inline SuiteResult finite_rank_suite(const KGraph& g, const Degree& cap, std::size_t max_splits = 2)
{
    SuiteResult r{"finite_rank", 0, 0, {}};
    std::map<std::pair<vertex_id, DegreeDiff>, std::vector<std::pair<Degree, Degree>>> memo;
    for (const auto& [mu, nu] : generators_upto(g, cap)) {
        const DegreeDiff n = mu.degree() - nu.degree();
        const vertex_id v = mu.range();
        auto it = memo.find({v, n});
        if (it == memo.end()) it = memo.emplace(std::make_pair(v, n), admissible_splits(g, v, n, cap)).first;
        const std::string where = g.path_string(mu) + " ; " + g.path_string(nu);
        if (it->second.empty()) {
            r.record(false, "no admissible split at " + g.vertex_name(v) + " for " + where);
            continue;
        }
        auto z = ModuleElement::single(AlgebraElement::generator(g, mu, nu));
        auto expect = left_mult(AlgebraElement::vertex(g, v), graded_part(z, n));
        for (std::size_t s = 0; s < std::min(max_splits, it->second.size()); ++s) {
            const auto& [n1, n2] = it->second[s];
            r.record(equals(finite_rank_operator(g, v, n1, n2, z), expect),
                     "T_{v," + n1.str() + "," + n2.str() + "} on " + where);
        }
        // off-degree inputs are annihilated
        const auto& [n1, n2] = it->second.front();
        for (vertex_id u = 0; u < static_cast<vertex_id>(g.vertex_count()); ++u) {
            if (u == v) continue;
            r.record(is_zero(finite_rank_operator(g, u, n1, n2, z)), "T at other vertex on " + where);
        }
    }
    return r;
}

// ω-sum of Θ_{x,y} against τ_g(y*x) summed over spinor components.
inline SuiteResult tau_tilde_suite(const KGraph& g, const GraphTrace& tr, const Degree& cap, std::mt19937_64& rng,
                                   std::size_t pairs)
{
    SuiteResult r{"tau_tilde", 0, 0, {}};
    const auto gens = generators_upto(g, cap);
    for (std::size_t s = 0; s < pairs; ++s) {
        auto x = random_module_element(g, rng, gens, 3), y = random_module_element(g, rng, gens, 3);
        r.record(tau_tilde_rank_one(x, y, tr) == module_inner(y, x, tr), "τ̃(Θ_{x,y}) = ⟨y,x⟩");
    }
    return r;
}

} // namespace kgraph
