#include <catch_amalgamated.hpp>

#include <kgraph/spectral.hpp>

#include <random>

using namespace kgraph;
using namespace kgraph::spectral;
using Catch::Approx;

namespace {

bool throws_code(errc want, const std::function<void()>& f)
{
    try {
        f();
    } catch (const error& e) {
        return e.code() == want;
    }
    return false;
}

CMat conj_bott(double p, double t) { return CMat(bott_closed_form(p, t)).conjugate(); }

// brute-force Σ over the box, the definition of raw_sum
double raw_sum_direct(std::size_t k, std::int64_t n)
{
    std::vector<std::int64_t> idx(k, -n);
    double s = 0;
    for (;;) {
        std::int64_t r2 = 0;
        for (auto x : idx) r2 += x * x;
        if (r2 <= n * n) s += std::pow(1.0 + static_cast<double>(r2), -static_cast<double>(k) / 2);
        std::size_t j = 0;
        while (j < k && idx[j] == n) idx[j++] = -n;
        if (j == k) break;
        ++idx[j];
    }
    return static_cast<double>(spinor_dimension(k)) * s;
}

} // namespace

TEST_CASE("gamma matrices")
{
    for (std::size_t k = 1; k <= 6; ++k) {
        auto c = gamma_matrices(k);
        REQUIRE(c.gammas.size() == k);
        REQUIRE(c.gammas[0].rows() == static_cast<Eigen::Index>(spinor_dimension(k)));
        REQUIRE(clifford_defect(c) < 1e-12);
    }
    auto c1 = gamma_matrices(1);
    REQUIRE(std::abs((c1.gammas[0] * c1.gammas[0])(0, 0) + 1.0) < 1e-15);
    REQUIRE(std::abs(std::abs(c1.gammas[0](0, 0).imag()) - 1.0) < 1e-15);
    auto c2 = gamma_matrices(2);
    for (const auto& g : c2.gammas) REQUIRE((c2.omega * g + g * c2.omega).norm() < 1e-12);
    REQUIRE((c2.omega * c2.omega - CMat::Identity(2, 2)).norm() < 1e-12);
    auto c3 = gamma_matrices(3);
    REQUIRE((c3.omega - CMat::Identity(2, 2)).norm() < 1e-12);
    REQUIRE(throws_code(errc::invalid_argument, [] { gamma_matrices(0); }));
    REQUIRE(throws_code(errc::invalid_argument, [] { gamma_matrices(7); }));
}

TEST_CASE("D² is n² on each graded block")
{
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> e(-7, 7);
    for (std::size_t k = 1; k <= 6; ++k) {
        auto c = gamma_matrices(k);
        const auto d = static_cast<Eigen::Index>(spinor_dimension(k));
        for (int s = 0; s < 40; ++s) {
            std::vector<std::int64_t> n(k);
            double n2 = 0;
            for (auto& x : n) {
                x = e(rng);
                n2 += static_cast<double>(x * x);
            }
            CMat b = dirac_block(c, n);
            REQUIRE((b.adjoint() - b).norm() < 1e-12);
            REQUIRE((b * b - n2 * CMat::Identity(d, d)).norm() < 1e-12);
        }
    }
}

TEST_CASE("Dixmier constants")
{
    REQUIRE(dixmier_constant(1) == Approx(2.0).epsilon(1e-14));
    REQUIRE(dixmier_constant(2) == Approx(2 * std::numbers::pi).epsilon(1e-14));
    REQUIRE(dixmier_constant(3) == Approx(8 * std::numbers::pi / 3).epsilon(1e-14));
    // k = 4: 4 · 2π² / 4
    REQUIRE(dixmier_constant(4) == Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("Dixmier estimate")
{
    auto e1 = dixmier_estimate(1, default_dixmier_list(2000));
    REQUIRE(e1.rel_err() < 0.02);
    auto e2 = dixmier_estimate(2, default_dixmier_list(300));
    REQUIRE(e2.rel_err() < 0.02);
    auto e3 = dixmier_estimate(3, default_dixmier_list(60));
    REQUIRE(e3.rel_err() < 0.02);

    for (const auto& e : {e1, e2, e3}) {
        for (std::size_t i = 1; i < e.samples.size(); ++i) REQUIRE(e.samples[i].raw_sum > e.samples[i - 1].raw_sum);
        for (const auto& s : e.samples) REQUIRE(s.raw_sum == Approx(raw_sum_direct(e.k, s.n)).epsilon(1e-10));
    }
    // eigencount is the number of lattice points times the spinor dimension
    auto small = dixmier_estimate(2, {1, 2});
    REQUIRE(small.samples[0].eigencount == 5 * 2);
    REQUIRE(small.samples[1].eigencount == 13 * 2);

    // the error shrinks as the sample window moves out
    double prev = 1;
    for (std::int64_t n : {40, 80, 160, 320}) {
        const double err = dixmier_estimate(2, default_dixmier_list(n)).rel_err();
        REQUIRE(err < prev);
        prev = err;
    }
    REQUIRE(throws_code(errc::invalid_argument, [] { dixmier_estimate(2, {5, 3}); }));
    // power growth is not logarithmic
    REQUIRE(throws_code(errc::divergence_detected, [] { fit_log_growth({1, 2, 3, 4, 5}, {1, 4, 9, 16, 100}); }));
    REQUIRE_NOTHROW(fit_log_growth({1, 2, 3}, {2, 4, 6}));
}

TEST_CASE("Bott projector")
{
    auto f = bott_projector(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            const auto& p = f.at(i, j);
            REQUIRE(projector_defect(p) < 1e-12);
            REQUIRE(std::abs(p.trace() - cplx(1, 0)) < 1e-12);
        }
    for (double t : {0.0, 1.0, 2.5, 5.0}) {
        Mat2 p = bott_closed_form(0, t);
        REQUIRE((p - Mat2(Mat2::Identity() - Mat2::Identity() * 0 - Mat2{{0, 0}, {0, 1}})).norm() < 1e-15);
    }
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
    for (int s = 0; s < 200; ++s) {
        Mat2 p = bott_closed_form(u(rng), u(rng));
        REQUIRE(projector_defect(CMat(p)) < 1e-12);
        // the constructive form is also a rank-one projection
        Mat2 q = bott_constructive(u(rng), u(rng));
        REQUIRE(projector_defect(CMat(q)) < 1e-12);
    }
    // the two descriptions do not agree on the grid
    REQUIRE(throws_code(errc::projector_mismatch, [] { bott_projector(8, 8, true); }));
    REQUIRE(throws_code(errc::invalid_argument, [] { bott_projector(3, 8); }));
}

TEST_CASE("Chern numbers")
{
    auto bott = [](std::size_t g) { return bott_projector(g, g); };
    REQUIRE(chern_number_stable(bott, {32, 64, 128}) == 1);
    REQUIRE(std::abs(chern_raw(bott_projector(64, 64)) - 1) < 1e-6);
    auto conj = [](std::size_t g) { return sample_field(g, g, conj_bott); };
    REQUIRE(chern_number_stable(conj, {32, 64, 128}) == -1);
    auto constant = sample_field(32, 32, [](double, double) {
        CMat p = CMat::Zero(2, 2);
        p(0, 0) = 1;
        return p;
    });
    REQUIRE(chern_number(constant) == 0);
    // the constructive family, sampled over a period of its own, carries no charge
    auto cons = sample_field(64, 64, [](double p, double t) { return CMat(bott_constructive(2 * p, t)); });
    REQUIRE(chern_number(cons) == 0);
    // rank changes are rejected
    auto jump = sample_field(8, 8, [](double p, double) {
        CMat m = CMat::Zero(2, 2);
        if (p < 3) m(0, 0) = 1;
        return m;
    });
    REQUIRE(throws_code(errc::not_quantized, [&] { chern_number(jump); }));
    // a 2×2 grid is too coarse for the Bott family
    REQUIRE_THROWS(chern_number(sample_field(2, 2, [](double p, double t) { return CMat(bott_closed_form(p, t)); })));
}

TEST_CASE("truncated index")
{
    auto bott = [](double p, double t) { return CMat(bott_closed_form(p, t)); };
    auto r = truncated_index(bott, 8);
    REQUIRE(r.index == 1);
    REQUIRE(r.kernel == 1);
    REQUIRE(r.cokernel == 0);
    REQUIRE(r.index == chern_number(bott_projector(64, 64)));
    auto rc = truncated_index(conj_bott, 8);
    REQUIRE(rc.index == -1);
    REQUIRE(rc.index == chern_number(sample_field(64, 64, conj_bott)));

    auto id = truncated_index([](double, double) { return CMat(CMat::Identity(2, 2)); }, 8);
    REQUIRE(id.index == 0);
    REQUIRE(id.kernel == 2);
    auto zero = truncated_index([](double, double) { return CMat(CMat::Zero(2, 2)); }, 8);
    REQUIRE(zero.index == 0);
    REQUIRE(zero.kernel == 0);
    // below the truncation error of the kernel vector the count depends on the box
    REQUIRE(throws_code(errc::unstable_kernel, [&] { truncated_index(bott, 8, 0.002); }));
    REQUIRE(throws_code(errc::invalid_argument, [&] { truncated_index(bott, 4); }));
}

TEST_CASE("Λ_n pairing")
{
    for (int n = 1; n <= 5; ++n) REQUIRE(lambda_n_pairing(n) == -n);
    for (int n = 1; n <= 5; ++n)
        for (int m = 1; m <= 5; ++m)
            if (n != m) REQUIRE(lambda_n_pairing(n, 32) != lambda_n_pairing(m, 32));
}

TEST_CASE("Kasparov remainder decay")
{
    REQUIRE(kasparov_remainder_decay({0}, 100) == 0);
    REQUIRE(kasparov_remainder_decay({0, 0}, 50) == 0);
    REQUIRE(kasparov_remainder_decay({1}, 100) < 0.02);
    // the largest value sits at n = N, moving away from the origin
    const double n = 100;
    const double expect = (std::sqrt(1 + (n + 1) * (n + 1)) - std::sqrt(1 + n * n)) / std::sqrt(1 + n * n);
    REQUIRE(kasparov_remainder_decay({1}, 100) == Approx(std::abs(expect)).epsilon(1e-12));
    for (const auto& d : std::vector<std::vector<std::int64_t>>{{1}, {2, -1}, {3, 1}, {1, 1, 1}}) {
        const std::int64_t base = d.size() == 3 ? 10 : 100;
        const double a = kasparov_remainder_decay(d, base), b = kasparov_remainder_decay(d, 2 * base),
                     c = kasparov_remainder_decay(d, 4 * base);
        REQUIRE(a > b);
        REQUIRE(b > c);
    }
    REQUIRE(throws_code(errc::invalid_argument, [] { kasparov_remainder_decay({}, 10); }));
}
