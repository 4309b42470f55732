#include <catch_amalgamated.hpp>

#include "corpus.hpp"

#include <kgraph/checks.hpp>
#include <kgraph/clifford.hpp>

using namespace kgraph;

namespace {

using Mat = SquareMatrix<GaussianRational>;

// Ω_{k,m} is finite with the single "terminal" vertex m, so C*(Ω) is M_N over the
// vertices and s_μ s_ν* is the matrix unit E_{r(μ), r(ν)}. A path is its endpoint pair.
struct OmegaOracle {
    const KGraph& g;

    Mat matrix(const AlgebraElement& a) const
    {
        Mat m(g.vertex_count());
        for (const auto& [k, c] : a.terms())
            m(static_cast<std::size_t>(k.first.range()), static_cast<std::size_t>(k.second.range())) += c;
        return m;
    }

    Degree point(vertex_id v) const { return corpus::parse_point(g.vertex_name(v)); }
    Path path(const Degree& p, const Degree& q) const { return corpus::omega_path(g, p, q); }

    // (s_{(a,b)} s_{(c,b)}*)(s_{(c',d)} s_{(e,d)}*) = δ_{c,c'} s_{(a,b∨d)} s_{(e,b∨d)}*
    AlgebraElement product(const AlgebraElement& x, const AlgebraElement& y) const
    {
        AlgebraElement r(g);
        for (const auto& [kx, cx] : x.terms())
            for (const auto& [ky, cy] : y.terms()) {
                if (kx.second.range() != ky.first.range()) continue;
                Degree top = point(kx.first.source()).join(point(ky.first.source()));
                r.add_term(path(point(kx.first.range()), top), path(point(ky.second.range()), top), cx * cy);
            }
        return r;
    }
};

Mat mat_adjoint(const Mat& m) { return m.adjoint(); }

} // namespace

TEST_CASE("CK3 and the worked Ω product")
{
    auto g = build_omega(2, {1, 1});
    for (const auto& l : all_paths_upto(g, {1, 1})) {
        auto s = AlgebraElement::path(g, l);
        auto prod = adjoint(s) * s;
        REQUIRE(prod.terms() == AlgebraElement::vertex(g, l.source()).terms());
    }
    auto mu = corpus::omega_path(g, {0, 0}, {1, 0});
    auto nu = corpus::omega_path(g, {0, 0}, {0, 1});
    auto alpha = corpus::omega_path(g, {1, 0}, {1, 1});
    auto beta = corpus::omega_path(g, {0, 1}, {1, 1});
    auto prod = AlgebraElement::path_adjoint(g, mu) * AlgebraElement::path(g, nu);
    REQUIRE(prod.terms() == AlgebraElement::generator(g, alpha, beta).terms());
}

TEST_CASE("p_u multiplies generators by range")
{
    for (auto& [name, g] : corpus::graphs()) {
        for (const auto& [mu, nu] : generators_upto(g, Degree::constant(g.rank(), 1))) {
            auto x = AlgebraElement::generator(g, mu, nu);
            for (vertex_id u = 0; u < static_cast<vertex_id>(g.vertex_count()); ++u) {
                auto prod = AlgebraElement::vertex(g, u) * x;
                if (u == mu.range())
                    REQUIRE(prod.terms() == x.terms());
                else
                    REQUIRE(prod.empty());
            }
        }
    }
}

TEST_CASE("star_mult against the Ω endpoint oracle")
{
    std::mt19937_64 rng(11);
    for (auto m : {Degree{1, 1}, Degree{2, 1}, Degree{2, 2}, Degree{1, 1, 1}}) {
        auto g = build_omega(m.rank(), m);
        OmegaOracle o{g};
        auto gens = generators_upto(g, m);
        // every pair of generators, exact term maps
        for (const auto& [a, b] : gens)
            for (const auto& [c, d] : gens) {
                auto x = AlgebraElement::generator(g, a, b), y = AlgebraElement::generator(g, c, d);
                REQUIRE((x * y).terms() == o.product(x, y).terms());
            }
        for (int s = 0; s < 50; ++s) {
            auto x = random_element(g, rng, gens, 4), y = random_element(g, rng, gens, 4);
            REQUIRE(o.matrix(x * y) == o.matrix(x) * o.matrix(y));
            REQUIRE(o.matrix(adjoint(x)) == mat_adjoint(o.matrix(x)));
        }
    }
}

TEST_CASE("equals agrees with the Ω matrix oracle")
{
    std::mt19937_64 rng(5);
    for (auto m : {Degree{1, 1}, Degree{2, 1}, Degree{1, 1, 1}}) {
        auto g = build_omega(m.rank(), m);
        OmegaOracle o{g};
        auto gens = generators_upto(g, m);
        for (int s = 0; s < 200; ++s) {
            auto x = random_element(g, rng, gens, 3);
            // a second representative: CK4-expand x at a random level
            Degree lvl = Degree::zero(m.rank());
            for (std::size_t i = 0; i < m.rank(); ++i) lvl[i] = static_cast<std::int64_t>(rng() % 3);
            auto y = ck4_expand(x, lvl);
            REQUIRE(equals(x, y));
            REQUIRE(o.matrix(x) == o.matrix(y));
            auto z = random_element(g, rng, gens, 3);
            REQUIRE(equals(x, z) == (o.matrix(x) == o.matrix(z)));
            REQUIRE(is_zero(x) == (o.matrix(x) == Mat(g.vertex_count())));
        }
    }
}

TEST_CASE("adjoint add scale")
{
    auto g = build_lambda_n(3, 2);
    std::mt19937_64 rng(2);
    auto gens = generators_upto(g, {1, 1});
    for (int s = 0; s < 30; ++s) {
        auto a = random_element(g, rng, gens, 4);
        REQUIRE(adjoint(adjoint(a)).terms() == a.terms());
        REQUIRE(is_zero(add(a, scale(-1, a))));
    }
    auto pv = AlgebraElement::vertex(g, 0);
    REQUIRE(adjoint(pv).terms() == pv.terms());
    const auto& [mu, nu] = gens[gens.size() / 2];
    auto x = AlgebraElement::generator(g, mu, nu, GaussianRational::i());
    auto expect = AlgebraElement::generator(g, nu, mu, -GaussianRational::i());
    REQUIRE(adjoint(x).terms() == expect.terms());

    auto other = build_lambda_n(3, 2);
    REQUIRE_THROWS_MATCHES(pv + AlgebraElement::vertex(other, 0), error,
                           Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::graph_mismatch; }));
    REQUIRE_THROWS_MATCHES(pv * AlgebraElement::vertex(other, 0), error,
                           Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::graph_mismatch; }));
}

TEST_CASE("ck4_expand")
{
    for (auto& [name, g] : corpus::graphs()) {
        for (vertex_id v = 0; v < static_cast<vertex_id>(g.vertex_count()); ++v) {
            auto pv = AlgebraElement::vertex(g, v);
            REQUIRE(ck4_expand(pv, g.zero()).terms() == pv.terms());
            for_each_in_box(g.zero(), Degree::constant(g.rank(), 2), [&](const Degree& n) {
                AlgebraElement sum(g);
                for (const auto& l : g.lambda_le_literal(v, n)) sum.add_term(l, l, 1);
                REQUIRE(ck4_expand(pv, n).terms() == sum.terms());
                REQUIRE(equals(pv, sum));
            });
        }
    }
    auto f2 = build_figure2(Figure2Regime::A);
    auto pv = AlgebraElement::vertex(f2, f2.vertex("v"));
    REQUIRE(ck4_expand(pv, f2.unit(0)).size() == 2);
    REQUIRE(ck4_expand(pv, f2.unit(1)).size() == 1);
}

TEST_CASE("equals on the ladder and trivial inequality")
{
    auto g = build_figure2(Figure2Regime::A);
    auto gen = [&](const char* e) {
        auto p = g.edge_path(g.edge_by_name(e));
        return AlgebraElement::generator(g, p, p);
    };
    REQUIRE(equals(gen("g"), gen("e") + gen("f")));
    REQUIRE(equals(gen("g"), AlgebraElement::vertex(g, g.vertex("v"))));
    REQUIRE_FALSE(equals(gen("e"), gen("f")));
    std::mt19937_64 rng(9);
    auto gens = generators_upto(g, {1, 1});
    for (int s = 0; s < 50; ++s) {
        auto a = random_element(g, rng, gens, 3);
        const auto& [mu, nu] = gens[rng() % gens.size()];
        REQUIRE_FALSE(equals(a, a + AlgebraElement::generator(g, mu, mu)));
        REQUIRE_FALSE(equals(a, a + AlgebraElement::generator(g, mu, nu)));
    }
}

TEST_CASE("canonical form is idempotent and value preserving")
{
    std::mt19937_64 rng(4);
    for (auto& [name, g] : corpus::graphs()) {
        auto gens = generators_upto(g, Degree::constant(g.rank(), 1));
        for (int s = 0; s < 20; ++s) {
            auto a = random_element(g, rng, gens, 4);
            auto c = canonical_form(a);
            REQUIRE(canonical_form(c).terms() == c.terms());
            REQUIRE(equals(a, c));
        }
    }
}

TEST_CASE("graded parts and expectations")
{
    auto g = build_omega(2, {2, 1});
    for (const auto& [mu, nu] : generators_upto(g, {2, 1})) {
        auto x = AlgebraElement::generator(g, mu, nu);
        REQUIRE(graded_part(x, mu.degree() - nu.degree()).terms() == x.terms());
        if (mu.degree() == nu.degree() && !(mu == nu)) REQUIRE(is_zero(diagonal_expectation(x)));
        if (mu == nu) REQUIRE(equals(diagonal_expectation(x), x));
        if (mu.degree() != nu.degree()) REQUIRE(gauge_expectation(x).empty());
    }
    auto pv = AlgebraElement::vertex(g, 0);
    REQUIRE(graded_part(pv, DegreeDiff{1, -1}).empty());
    REQUIRE(graded_part(pv, DegreeDiff{0, 1}).empty());

    std::mt19937_64 rng(8);
    for (auto& [name, gr] : corpus::graphs()) {
        auto cap = Degree::constant(gr.rank(), gr.rank() == 3 ? 1 : 2);
        auto res = expectation_suite(gr, cap, rng, 30);
        INFO(name << ": " << res.first_failure);
        REQUIRE(res.ok());
    }
}

TEST_CASE("CK axioms on the corpus")
{
    for (auto& [name, g] : corpus::graphs()) {
        auto res = ck_axioms_suite(g, Degree::constant(g.rank(), 2));
        INFO(name << ": " << res.first_failure);
        REQUIRE(res.ok());
    }
    for (auto& [name, g] : corpus::extra_graphs()) {
        if (!g.locally_convex()) continue;
        auto res = ck_axioms_suite(g, Degree::constant(g.rank(), 2));
        INFO(name << ": " << res.first_failure);
        REQUIRE(res.ok());
    }
}

TEST_CASE("common extensions")
{
    auto g = build_omega(2, {1, 1});
    auto e1 = corpus::omega_path(g, {0, 0}, {1, 0});
    auto e2 = corpus::omega_path(g, {0, 0}, {0, 1});
    REQUIRE(have_common_extension(g, e1, e1));
    REQUIRE(have_common_extension(g, e1, e2));
    REQUIRE_THROWS_MATCHES(have_common_extension(g, e1, corpus::omega_path(g, {1, 0}, {1, 1})), error,
                           Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::range_mismatch; }));

    for (auto& [name, gr] : corpus::graphs())
        for (vertex_id v = 0; v < static_cast<vertex_id>(gr.vertex_count()); ++v)
            for_each_in_box(gr.zero(), Degree::constant(gr.rank(), 2), [&](const Degree& n) {
                auto ps = gr.lambda_le(v, n);
                for (const auto& a : ps)
                    for (const auto& b : ps) REQUIRE(have_common_extension(gr, a, b) == (a == b));
            });
}

TEST_CASE("τ_g basics")
{
    auto g = build_omega(2, {1, 1});
    auto tr = GraphTrace::constant(g, 1);
    for (vertex_id v = 0; v < 4; ++v) REQUIRE(tau_g(AlgebraElement::vertex(g, v), tr) == GaussianRational(1));

    auto f2 = build_figure2(Figure2Regime::A);
    REQUIRE_THROWS_MATCHES(tau_g(AlgebraElement::vertex(f2, 0), GraphTrace::constant(f2, 1)), error,
                           Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::not_a_graph_trace; }));
    REQUIRE_THROWS_MATCHES(tau_g(AlgebraElement::vertex(f2, 0), GraphTrace(std::vector<Rational>{1})), error,
                           Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::not_a_graph_trace; }));

    // the zero trace is the only one on the ladder; it does not see p_w
    auto zero = GraphTrace::constant(f2, 0);
    REQUIRE(tau_g(AlgebraElement::vertex(f2, f2.vertex("w")), zero).is_zero());
    REQUIRE_FALSE(zero.faithful());
}

TEST_CASE("trace property with constant traces on Ω")
{
    std::mt19937_64 rng(21);
    for (auto m : {Degree{1, 1}, Degree{2, 1}, Degree{1, 1, 1}}) {
        auto g = build_omega(m.rank(), m);
        auto tr = GraphTrace::constant(g, Rational(3, 2));
        REQUIRE(is_graph_trace(tr, g, FullUpTo{Degree::constant(g.rank(), 2)}));
        auto res = trace_property_suite(g, tr, m, rng, 100);
        INFO(res.first_failure);
        REQUIRE(res.ok());
    }
}
