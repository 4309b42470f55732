#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "builders.hpp"
#include "trace_analysis.hpp"

namespace kgraph {

using IntVec = std::vector<std::int64_t>;

// ---------------------------------------------------------------- integer lattices

// Row-style Hermite normal form of the lattice spanned by `rows` in Z^k: upper
// echelon, positive pivots, entries above each pivot reduced into [0, pivot).
inline std::vector<IntVec> hermite_normal_form(std::vector<IntVec> rows, std::size_t k)
{
    for (const auto& r : rows)
        if (r.size() != k) fail(errc::invalid_argument, "lattice vector of the wrong length");
    std::vector<IntVec> basis;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < k; ++c) {
        for (;;) {
            // smallest nonzero |entry| in column c becomes the pivot candidate
            std::size_t best = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[best][c]))) best = i;
            if (best == rows.size()) break;
            bool done = true;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == best || rows[i][c] == 0) continue;
                const std::int64_t q = rows[i][c] / rows[best][c];
                for (std::size_t j = 0; j < k; ++j) rows[i][j] -= q * rows[best][j];
                if (rows[i][c] != 0) done = false;
            }
            if (!done) continue;
            IntVec p = rows[best];
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
            if (p[c] < 0)
                for (auto& x : p) x = -x;
            for (auto& b : basis) {
                std::int64_t q = b[c] / p[c];
                if (b[c] - q * p[c] < 0) --q;
                for (std::size_t j = 0; j < k; ++j) b[j] -= q * p[j];
            }
            basis.push_back(std::move(p));
            pivots.push_back(c);
            break;
        }
    }
    return basis;
}

// a ∈ span_Z(basis) for a basis in Hermite normal form
inline bool lattice_contains(const std::vector<IntVec>& hnf, IntVec a)
{
    for (const auto& b : hnf) {
        std::size_t c = 0;
        while (b[c] == 0) ++c;
        for (std::size_t j = 0; j < c; ++j)
            if (a[j] != 0) return false;
        if (a[c] % b[c] != 0) return false;
        const std::int64_t q = a[c] / b[c];
        for (std::size_t j = 0; j < a.size(); ++j) a[j] -= q * b[j];
    }
    return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

struct EndGroup {
    std::vector<IntVec> generators;
    std::vector<IntVec> hermite_basis;
    std::size_t rank = 0;
};

inline std::size_t torus_rank(const EndGroup& g) { return g.hermite_basis.size(); }

inline std::size_t lattice_rank(const std::vector<IntVec>& gens, std::size_t k)
{
    return hermite_normal_form(gens, k).size();
}

// ---------------------------------------------------------------- end groups

// x(p) = σ^p(rep), or nullopt where some direction runs out
inline std::optional<vertex_id> end_point(const EndDescriptor& d, const IntVec& p)
{
    vertex_id cur = d.rep;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::int64_t s = 0; s < p[i]; ++s) {
            auto nxt = d.sigma(i, cur);
            if (!nxt) return std::nullopt;
            cur = *nxt;
        }
    return cur;
}

namespace detail {

inline std::vector<IntVec> end_differences(const EndDescriptor& d, std::int64_t bound)
{
    const std::size_t k = d.extent.size();
    std::vector<std::size_t> dirs;
    for (std::size_t i = 0; i < k; ++i)
        if (!d.extent[i]) dirs.push_back(i);
    std::vector<IntVec> out;
    if (dirs.empty()) return out;
    std::map<vertex_id, IntVec> first;
    IntVec idx(dirs.size(), 0);
    for (;;) {
        IntVec p(k, 0);
        for (std::size_t j = 0; j < dirs.size(); ++j) p[dirs[j]] = idx[j];
        if (auto x = end_point(d, p)) {
            auto [it, fresh] = first.try_emplace(*x, p);
            if (!fresh) {
                IntVec diff(k);
                for (std::size_t i = 0; i < k; ++i) diff[i] = p[i] - it->second[i];
                out.push_back(std::move(diff));
            }
        }
        std::size_t j = 0;
        while (j < idx.size() && idx[j] == bound) idx[j++] = 0;
        if (j == idx.size()) break;
        ++idx[j];
    }
    return out;
}

} // namespace detail

// G = {p - q : x(p) = x(q)} over the infinite directions, collected in [0, 2m]^k and
// confirmed in [0, 4m]^k with m = |image|.
inline EndGroup end_group(const EndDescriptor& d)
{
    const std::size_t k = d.extent.size();
    const auto m = static_cast<std::int64_t>(d.image.size());
    EndGroup g;
    g.generators = detail::end_differences(d, 2 * m);
    g.hermite_basis = hermite_normal_form(g.generators, k);
    if (hermite_normal_form(detail::end_differences(d, 4 * m), k) != g.hermite_basis)
        fail(errc::unsaturated_lattice, "end group at vertex " + std::to_string(d.rep) + " changed when the box doubled");
    g.rank = g.hermite_basis.size();
    return g;
}

// ---------------------------------------------------------------- K-theory

struct ClassK {
    vertex_id rep = 0;
    std::size_t rank = 0;
    EndGroup group;
};

struct KTheorySummary {
    std::vector<ClassK> classes;
    std::size_t k0_rank = 0;
    std::size_t k1_rank = 0;
    std::vector<std::size_t> morita; // torus dimension per class
    std::string morita_description() const
    {
        std::string s;
        for (std::size_t l : morita) {
            if (!s.empty()) s += " ⊕ ";
            s += l == 0 ? std::string("K") : "K⊗C(T^" + std::to_string(l) + ")";
        }
        return s.empty() ? "0" : s;
    }
};

inline KTheorySummary k_theory(const KGraph& g)
{
    if (!check_sufficient_condition(g).ok())
        fail(errc::sufficient_condition_unmet, "some vertex never reaches an end");
    auto ends = find_ends(g);
    auto classes = end_classes(ends);
    KTheorySummary out;
    for (const auto& c : classes) {
        const EndDescriptor* rep = nullptr;
        for (std::size_t j : c.members)
            if (ends[j].rep == c.rep) rep = &ends[j];
        ClassK ck;
        ck.rep = c.rep;
        ck.group = end_group(*rep);
        ck.rank = ck.group.rank;
        if (ck.rank == 0) {
            out.k0_rank += 1;
        } else {
            out.k0_rank += std::size_t{1} << (ck.rank - 1);
            out.k1_rank += std::size_t{1} << (ck.rank - 1);
        }
        out.morita.push_back(ck.rank);
        out.classes.push_back(std::move(ck));
    }
    return out;
}

// ---------------------------------------------------------------- Λ_n core

// θ_{i,j} on build_lambda_n: for i > j the solid path e_i ⋯ e_{j+1} from v_j to v_i,
// for i < j its adjoint, p_{v_i} on the diagonal.
inline AlgebraElement lambda_n_theta(const KGraph& g, int i, int j)
{
    if (i == j) return AlgebraElement::vertex(g, g.vertex("v" + std::to_string(i)));
    const int hi = std::max(i, j), lo = std::min(i, j);
    std::vector<std::string> names;
    for (int t = hi; t > lo; --t) names.push_back("e" + std::to_string(t));
    auto p = g.path_from_names(names);
    return i > j ? AlgebraElement::path(g, p) : AlgebraElement::path_adjoint(g, p);
}

// Summands of the core: vertices are identified when two solid paths of equal length
// leave a common source and end at them. Computed on a truncation with tail n.
inline std::size_t lambda_n_core_multiplicity(int n)
{
    if (n < 1) fail(errc::invalid_argument, "need n >= 1");
    auto g = build_lambda_n(n, n);
    const std::size_t nv = g.vertex_count();
    std::vector<std::size_t> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (vertex_id s = 0; s < static_cast<vertex_id>(nv); ++s)
        for (std::int64_t c = 1; c <= static_cast<std::int64_t>(nv); ++c) {
            auto ps = g.paths_with_source(s, Degree{c, 0});
            for (std::size_t a = 1; a < ps.size(); ++a)
                parent[find(static_cast<std::size_t>(ps[a].range()))] = find(static_cast<std::size_t>(ps[0].range()));
        }
    std::size_t classes = 0;
    for (std::size_t v = 0; v < nv; ++v)
        if (find(v) == v) ++classes;
    return classes;
}

} // namespace kgraph
