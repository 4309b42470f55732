#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "clifford.hpp"
#include "error.hpp"
#include "ktheory.hpp"

namespace kgraph::spectral {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// ---------------------------------------------------------------- Clifford

struct CliffordRep {
    std::size_t k = 0;
    std::vector<CMat> gammas;
    CMat omega;
};

inline CMat to_eigen(const SquareMatrix<cplx>& m)
{
    CMat r(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return r;
}

// max deviation over all Clifford identities
inline double clifford_defect(const CliffordRep& c)
{
    const auto d = static_cast<Eigen::Index>(spinor_dimension(c.k));
    const CMat id = CMat::Identity(d, d);
    double err = 0;
    for (std::size_t l = 0; l < c.k; ++l) {
        err = std::max(err, (c.gammas[l].adjoint() + c.gammas[l]).norm());
        for (std::size_t j = 0; j < c.k; ++j) {
            CMat ac = c.gammas[l] * c.gammas[j] + c.gammas[j] * c.gammas[l];
            if (l == j) ac += 2.0 * id;
            err = std::max(err, ac.norm());
        }
    }
    err = std::max(err, (c.omega.adjoint() - c.omega).norm());
    err = std::max(err, (c.omega * c.omega - id).norm());
    for (const auto& g : c.gammas) {
        CMat x = c.k % 2 == 0 ? CMat(c.omega * g + g * c.omega) : CMat(c.omega * g - g * c.omega);
        err = std::max(err, x.norm());
    }
    if (c.k % 2 == 1) err = std::max(err, (c.omega - id).norm());
    return err;
}

inline CliffordRep gamma_matrices(std::size_t k)
{
    if (k < 1 || k > 6) fail(errc::invalid_argument, "gamma_matrices supports 1 <= k <= 6");
    auto g = clifford_generators<cplx>(k);
    CliffordRep out;
    out.k = k;
    for (const auto& m : g.gammas) out.gammas.push_back(to_eigen(m));
    out.omega = to_eigen(g.omega);
    if (clifford_defect(out) > 1e-12) fail(errc::invalid_argument, "Clifford identities failed");
    return out;
}

// D on the graded block Φ_n: i Σ_l n_l γ^l
inline CMat dirac_block(const CliffordRep& c, const std::vector<std::int64_t>& n)
{
    if (n.size() != c.k) fail(errc::invalid_argument, "degree difference of the wrong rank");
    const auto d = static_cast<Eigen::Index>(spinor_dimension(c.k));
    CMat out = CMat::Zero(d, d);
    for (std::size_t l = 0; l < c.k; ++l) out += cplx(0, static_cast<double>(n[l])) * c.gammas[l];
    return out;
}

// ---------------------------------------------------------------- Dixmier constant

inline double dixmier_constant(std::size_t k)
{
    // vol(S^{k-1}) = 2π^{k/2} / Γ(k/2)
    const double vol = 2 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
    return static_cast<double>(spinor_dimension(k)) * vol / static_cast<double>(k);
}

struct DixmierSample {
    std::int64_t n = 0;
    std::uint64_t eigencount = 0;
    double raw_sum = 0;
};

struct DixmierEstimate {
    std::size_t k = 0;
    std::vector<DixmierSample> samples;
    double fitted = 0;
    double intercept = 0;
    double target = 0;
    double rel_err() const { return std::abs(fitted - target) / target; }
};

struct LineFit {
    double slope = 0, intercept = 0, max_residual = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i)
        f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.slope * x[i] - f.intercept));
    return f;
}

// Fits y ≈ a·x + b and rejects the fit when the worst residual exceeds `tol` times
// the spread of y: the data are not logarithmic in the eigenvalue count.
inline LineFit fit_log_growth(const std::vector<double>& x, const std::vector<double>& y, double tol = 0.02)
{
    if (x.size() < 2 || x.size() != y.size()) fail(errc::invalid_argument, "need at least two samples");
    auto f = fit_line(x, y);
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (!(f.max_residual <= tol * (*hi - *lo))) fail(errc::divergence_detected, "residual too large for a logarithmic fit");
    return f;
}

inline std::vector<std::int64_t> default_dixmier_list(std::int64_t nmax)
{
    std::vector<std::int64_t> out;
    for (std::int64_t q : {1, 2, 3, 4}) out.push_back(std::max<std::int64_t>(1, nmax * q / 4));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// raw_sum(N) = 2^[k/2] Σ_{n∈Z^k, |n|<=N} (1+|n|²)^{-k/2}, fitted against log(eigencount).
inline DixmierEstimate dixmier_estimate(std::size_t k, std::vector<std::int64_t> n_list)
{
    if (k < 1 || k > 6) fail(errc::invalid_argument, "dixmier_estimate supports 1 <= k <= 6");
    if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) ||
        std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end() || n_list.front() < 1)
        fail(errc::invalid_argument, "N_list must be strictly increasing and positive");
    const std::int64_t nmax = n_list.back();
    // histogram of |n|² over the box, then cumulative sums in increasing radius
    std::vector<std::uint64_t> count(static_cast<std::size_t>(nmax * nmax) + 1, 0);
    std::vector<std::int64_t> idx(k, -nmax);
    for (;;) {
        std::int64_t r2 = 0;
        for (auto x : idx) r2 += x * x;
        if (r2 <= nmax * nmax) ++count[static_cast<std::size_t>(r2)];
        std::size_t j = 0;
        while (j < k && idx[j] == nmax) idx[j++] = -nmax;
        if (j == k) break;
        ++idx[j];
    }
    const double mult = static_cast<double>(spinor_dimension(k));
    DixmierEstimate est;
    est.k = k;
    est.target = dixmier_constant(k);
    std::uint64_t cnt = 0;
    double sum = 0;
    std::size_t next = 0;
    for (std::int64_t r2 = 0; r2 <= nmax * nmax && next < n_list.size(); ++r2) {
        const auto c = count[static_cast<std::size_t>(r2)];
        cnt += c;
        sum += static_cast<double>(c) * std::pow(1.0 + static_cast<double>(r2), -static_cast<double>(k) / 2);
        while (next < n_list.size() && (r2 == n_list[next] * n_list[next])) {
            est.samples.push_back({n_list[next], cnt * spinor_dimension(k), mult * sum});
            ++next;
        }
    }
    std::vector<double> xs, ys;
    for (const auto& s : est.samples) {
        xs.push_back(std::log(static_cast<double>(s.eigencount)));
        ys.push_back(s.raw_sum);
    }
    if (xs.size() < 2) fail(errc::invalid_argument, "need at least two sample points");
    auto f = fit_log_growth(xs, ys);
    est.fitted = f.slope;
    est.intercept = f.intercept;
    return est;
}

// ---------------------------------------------------------------- Bott projector

using Mat2 = Eigen::Matrix2cd;

inline Mat2 bott_closed_form(double phi, double theta)
{
    const double s2 = std::sin(phi / 2), c2 = std::cos(theta / 2);
    const double a = s2 * s2 * c2 * c2;
    const cplx off_i = cplx(0, 0.5 * std::sin(phi) * c2 * c2);
    const double off_r = -0.5 * s2 * std::sin(theta);
    Mat2 p;
    p << 1 - a, off_i + off_r, -off_i + off_r, a;
    return p;
}

// Y*diag(1,0)Y with Y = exp(iφK(θ)/4) exp(iS/4), K(θ) = [[0, z], [z̄, 0]], S = [[0,1],[1,0]].
// K² = S² = 1, so exp(itK) = cos t + i sin t K.
inline Mat2 bott_constructive(double phi, double theta)
{
    const cplx z = std::polar(1.0, theta);
    Mat2 K, S, id = Mat2::Identity();
    K << 0, z, std::conj(z), 0;
    S << 0, 1, 1, 0;
    const cplx i(0, 1);
    Mat2 y = (std::cos(phi / 4) * id + i * std::sin(phi / 4) * K) * (std::cos(0.25) * id + i * std::sin(0.25) * S);
    Mat2 e = Mat2::Zero();
    e(0, 0) = 1;
    return y.adjoint() * e * y;
}

// n_φ × n_θ samples of a 2π-periodic family, P[i][j] = P(2πi/n_φ, 2πj/n_θ)
struct ProjectorField {
    std::size_t n_phi = 0, n_theta = 0;
    std::vector<CMat> values;
    const CMat& at(std::size_t i, std::size_t j) const { return values[(i % n_phi) * n_theta + (j % n_theta)]; }
};

inline ProjectorField sample_field(std::size_t n_phi, std::size_t n_theta, const std::function<CMat(double, double)>& f)
{
    ProjectorField out;
    out.n_phi = n_phi;
    out.n_theta = n_theta;
    for (std::size_t i = 0; i < n_phi; ++i)
        for (std::size_t j = 0; j < n_theta; ++j)
            out.values.push_back(f(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_phi),
                                   2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta)));
    return out;
}

inline double projector_defect(const CMat& p) { return std::max((p - p.adjoint()).norm(), (p * p - p).norm()); }

// The closed form on the grid, checked to be a projection to 1e-12. With
// `check_constructive` every point is also compared against Y*diag(1,0)Y.
inline ProjectorField bott_projector(std::size_t n_phi, std::size_t n_theta, bool check_constructive = false)
{
    if (n_phi < 4 || n_theta < 4) fail(errc::invalid_argument, "grid sizes must be at least 4");
    auto field = sample_field(n_phi, n_theta, [](double p, double t) { return CMat(bott_closed_form(p, t)); });
    for (std::size_t i = 0; i < n_phi; ++i)
        for (std::size_t j = 0; j < n_theta; ++j) {
            const auto& p = field.at(i, j);
            if (projector_defect(p) > 1e-12) fail(errc::projector_mismatch, "closed form is not a projection");
            if (check_constructive) {
                const double ph = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_phi);
                const double th = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta);
                if ((CMat(bott_constructive(ph, th)) - p).norm() > 1e-9)
                    fail(errc::projector_mismatch, "closed form and Y*diag(1,0)Y differ at a grid point");
            }
        }
    return field;
}

// ---------------------------------------------------------------- Chern number

// Lattice field strength: link variables det(U_a* U_b) between orthonormal frames of
// neighbouring ranges; the plaquette phases sum to an integer multiple of 2π. Sign
// fixed so the closed-form Bott family gives +1, which is -(1/2πi)∬ tr P[∂_φP, ∂_θP].
inline double chern_raw(const ProjectorField& f)
{
    const std::size_t n1 = f.n_phi, n2 = f.n_theta;
    std::vector<CMat> frame(n1 * n2);
    Eigen::Index rank = -1;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            Eigen::SelfAdjointEigenSolver<CMat> es(f.at(i, j));
            const auto& w = es.eigenvalues();
            Eigen::Index r = 0;
            for (Eigen::Index a = 0; a < w.size(); ++a)
                if (w(a) > 0.5) ++r;
            if (rank < 0) rank = r;
            if (r != rank) fail(errc::not_quantized, "projector rank changes across the grid");
            frame[i * n2 + j] = es.eigenvectors().rightCols(r);
        }
    if (rank == 0) return 0;
    auto link = [&](std::size_t a, std::size_t b) {
        cplx d = (frame[a].adjoint() * frame[b]).determinant();
        if (std::abs(d) < 1e-8) fail(errc::not_quantized, "grid too coarse: neighbouring ranges are orthogonal");
        return d / std::abs(d);
    };
    double total = 0;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t a = i * n2 + j, b = ((i + 1) % n1) * n2 + j, c = ((i + 1) % n1) * n2 + (j + 1) % n2,
                              d = i * n2 + (j + 1) % n2;
            total += std::arg(link(a, b) * link(b, c) * link(c, d) * link(d, a));
        }
    return -total / (2 * std::numbers::pi);
}

inline int chern_number(const ProjectorField& f)
{
    const double c = chern_raw(f);
    const double r = std::round(c);
    if (!(std::abs(c - r) < 1e-6)) fail(errc::not_quantized, "Chern sum " + std::to_string(c) + " is not an integer");
    return static_cast<int>(r);
}

// Same integer on every listed grid, or NotQuantized.
inline int chern_number_stable(const std::function<ProjectorField(std::size_t)>& make, const std::vector<std::size_t>& grids)
{
    int first = 0;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        const int c = chern_number(make(grids[g]));
        if (g == 0)
            first = c;
        else if (c != first)
            fail(errc::not_quantized, "Chern number changes with the grid");
    }
    return first;
}

// ---------------------------------------------------------------- truncated index

namespace detail {

struct ModeBox {
    std::int64_t n;
    std::size_t size() const { return static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)); }
    std::size_t index(std::int64_t a, std::int64_t b) const { return static_cast<std::size_t>((a + n) * (2 * n + 1) + (b + n)); }
};

// Fourier coefficients ĉ(m) of a d×d family on a G×G grid, e^{i(m_1φ + m_2θ)}.
struct FourierField {
    std::size_t g = 0, d = 0;
    std::vector<CMat> coef; // index (m1 mod g)·g + (m2 mod g)

    const CMat& at(std::int64_t m1, std::int64_t m2) const
    {
        const auto G = static_cast<std::int64_t>(g);
        return coef[static_cast<std::size_t>(((m1 % G) + G) % G) * g + static_cast<std::size_t>(((m2 % G) + G) % G)];
    }
};

inline FourierField fourier(const std::function<CMat(double, double)>& f, std::size_t g)
{
    FourierField out;
    out.g = g;
    std::vector<CMat> vals;
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
            vals.push_back(f(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(g),
                             2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(g)));
    out.d = static_cast<std::size_t>(vals.front().rows());
    const auto D = static_cast<Eigen::Index>(out.d);
    // separable DFT: rows then columns
    std::vector<cplx> w(g);
    for (std::size_t t = 0; t < g; ++t) w[t] = std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(g));
    std::vector<CMat> half(g * g, CMat::Zero(D, D));
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t m2 = 0; m2 < g; ++m2)
            for (std::size_t j = 0; j < g; ++j) half[i * g + m2] += w[(m2 * j) % g] * vals[i * g + j];
    out.coef.assign(g * g, CMat::Zero(D, D));
    const double norm = 1.0 / static_cast<double>(g * g);
    for (std::size_t m1 = 0; m1 < g; ++m1)
        for (std::size_t m2 = 0; m2 < g; ++m2) {
            for (std::size_t i = 0; i < g; ++i) out.coef[m1 * g + m2] += w[(m1 * i) % g] * half[i * g + m2];
            out.coef[m1 * g + m2] *= norm;
        }
    return out;
}

// Multiplication by the family, compressed to the mode box, as a Hermitian matrix.
inline CMat multiplication(const FourierField& p, const ModeBox& box)
{
    const auto D = static_cast<Eigen::Index>(p.d);
    const auto n = static_cast<Eigen::Index>(box.size()) * D;
    CMat m(n, n);
    for (std::int64_t a = -box.n; a <= box.n; ++a)
        for (std::int64_t b = -box.n; b <= box.n; ++b)
            for (std::int64_t x = -box.n; x <= box.n; ++x)
                for (std::int64_t y = -box.n; y <= box.n; ++y)
                    m.block(static_cast<Eigen::Index>(box.index(x, y)) * D, static_cast<Eigen::Index>(box.index(a, b)) * D, D, D) =
                        p.at(x - a, y - b);
    return (m + m.adjoint()) / 2.0;
}

// Kernel dimensions of P D_+ P and P D_+^* P on P H, restricted to inputs in the box.
// s lies in such a kernel iff (1 - P)s = 0 and P D s = 0, so the count is the number of
// small eigenvalues of the Gram matrix 1 - P + D^* P D compressed to the box. D is
// diagonal in modes, so the compression is exact given the compressed P.
inline std::pair<std::size_t, std::size_t> kernel_dims(const FourierField& p, std::int64_t n, double gap)
{
    const ModeBox box{n};
    const CMat m = multiplication(p, box);
    const auto D = static_cast<Eigen::Index>(p.d);
    const auto dim = m.rows();
    std::pair<std::size_t, std::size_t> dims{0, 0};
    for (int sign : {1, -1}) {
        // D_+ has symbol i m_1 - m_2, its adjoint -i m_1 - m_2
        Eigen::VectorXcd sym(dim);
        for (std::int64_t a = -n; a <= n; ++a)
            for (std::int64_t b = -n; b <= n; ++b)
                sym.segment(static_cast<Eigen::Index>(box.index(a, b)) * D, D).setConstant(
                    cplx(-static_cast<double>(b), sign * static_cast<double>(a)));
        CMat gram = CMat::Identity(dim, dim) - m + sym.conjugate().asDiagonal() * m * sym.asDiagonal();
        // Sylvester inertia: negative pivots of gram - gap² counts eigenvalues below gap²
        gram.diagonal().array() -= gap * gap;
        Eigen::LDLT<CMat> ldlt(gram);
        std::size_t ker = 0;
        for (Eigen::Index a = 0; a < dim; ++a)
            if (ldlt.vectorD()(a).real() < 0) ++ker;
        (sign == 1 ? dims.first : dims.second) = ker;
    }
    return dims;
}

} // namespace detail

struct IndexResult {
    int index = 0;
    std::size_t kernel = 0, cokernel = 0;
};

// dim ker - dim coker of the compression of D_+ = ∂_φ + i∂_θ by the multiplication
// operator P, on Fourier modes |m_i| <= n_modes. Kernel dimensions must agree at
// n_modes and n_modes + 4.
inline IndexResult truncated_index(const std::function<CMat(double, double)>& p, std::int64_t n_modes, double gap = 0.05,
                                   std::size_t grid = 128)
{
    if (n_modes < 8) fail(errc::invalid_argument, "need at least eight Fourier modes per direction");
    auto fp = detail::fourier(p, grid);
    auto a = detail::kernel_dims(fp, n_modes, gap);
    auto b = detail::kernel_dims(fp, n_modes + 4, gap);
    if (a != b) fail(errc::unstable_kernel, "kernel dimensions change between truncations");
    return {static_cast<int>(a.first) - static_cast<int>(a.second), a.first, a.second};
}

// ---------------------------------------------------------------- pairings

inline int bott_chern(std::size_t grid = 64) { return chern_number(bott_projector(grid, grid)); }

// Core multiplicity times the torus pairing, with the product-formula sign: each of
// the n summands pairs the Bott class with the flat Dirac operator on T².
inline int lambda_n_pairing(int n, std::size_t grid = 64)
{
    const auto mult = static_cast<int>(lambda_n_core_multiplicity(n));
    return -mult * bott_chern(grid);
}

// ---------------------------------------------------------------- remainder decay

// max of |f(n)| over N <= |n| <= 2N, f(n) = (√(1+|δ+n|²) - √(1+|n|²)) / √(1+|n|²)
inline double kasparov_remainder_decay(const std::vector<std::int64_t>& delta, std::int64_t n)
{
    const std::size_t k = delta.size();
    if (k == 0 || n < 1) fail(errc::invalid_argument, "need a rank and N >= 1");
    const std::int64_t hi = 2 * n;
    std::vector<std::int64_t> idx(k, -hi);
    double best = 0;
    for (;;) {
        std::int64_t r2 = 0, s2 = 0;
        for (std::size_t l = 0; l < k; ++l) {
            r2 += idx[l] * idx[l];
            s2 += (idx[l] + delta[l]) * (idx[l] + delta[l]);
        }
        if (r2 >= n * n && r2 <= hi * hi) {
            const double base = std::sqrt(1.0 + static_cast<double>(r2));
            best = std::max(best, std::abs(std::sqrt(1.0 + static_cast<double>(s2)) - base) / base);
        }
        std::size_t j = 0;
        while (j < k && idx[j] == hi) idx[j++] = -hi;
        if (j == k) break;
        ++idx[j];
    }
    return best;
}

} // namespace kgraph::spectral
