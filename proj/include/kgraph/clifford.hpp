#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace kgraph {

inline GaussianRational conj_scalar(const GaussianRational& z) { return z.conj(); }
inline std::complex<double> conj_scalar(const std::complex<double>& z) { return std::conj(z); }

// Small dense square matrix, row-major. Enough for Clifford generators over an
// exact or a floating scalar.
template <class T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, T(0)) {}

    static SquareMatrix identity(std::size_t n)
    {
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    friend SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y)
    {
        SquareMatrix r(x.n_);
        for (std::size_t i = 0; i < x.n_; ++i)
            for (std::size_t l = 0; l < x.n_; ++l) {
                if (x(i, l) == T(0)) continue;
                for (std::size_t j = 0; j < x.n_; ++j) r(i, j) += x(i, l) * y(l, j);
            }
        return r;
    }
    friend SquareMatrix operator+(SquareMatrix x, const SquareMatrix& y)
    {
        for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
        return x;
    }
    friend SquareMatrix operator*(const T& c, SquareMatrix x)
    {
        for (auto& v : x.a_) v = c * v;
        return x;
    }
    friend bool operator==(const SquareMatrix& x, const SquareMatrix& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

    SquareMatrix adjoint() const
    {
        SquareMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = conj_scalar((*this)(i, j));
        return r;
    }

    SquareMatrix kron(const SquareMatrix& y) const
    {
        SquareMatrix r(n_ * y.n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t p = 0; p < y.n_; ++p)
                    for (std::size_t q = 0; q < y.n_; ++q) r(i * y.n_ + p, j * y.n_ + q) = (*this)(i, j) * y(p, q);
        return r;
    }

private:
    std::size_t n_ = 0;
    std::vector<T> a_;
};

inline std::size_t spinor_dimension(std::size_t k) { return std::size_t{1} << (k / 2); }

template <class T>
struct CliffordGenerators {
    std::size_t k = 0;
    std::vector<SquareMatrix<T>> gammas; // γ^1..γ^k, (γ^j)² = -1
    SquareMatrix<T> omega;               // i^[(k+1)/2] γ^1⋯γ^k
};

// Jordan–Wigner construction. Hermitian Γ_j squaring to 1 are built from Pauli
// matrices and γ^j = iΓ_j. For odd k the last generator's sign is chosen so that
// ω = 1.
template <class T>
CliffordGenerators<T> clifford_generators(std::size_t k)
{
    if (k < 1) fail(errc::invalid_argument, "Clifford rank must be positive");
    SquareMatrix<T> s1(2), s2(2), s3(2), id2 = SquareMatrix<T>::identity(2);
    s1(0, 1) = T(1);
    s1(1, 0) = T(1);
    s2(0, 1) = T(0, -1);
    s2(1, 0) = T(0, 1);
    s3(0, 0) = T(1);
    s3(1, 1) = T(-1);

    const std::size_t m = k / 2;
    auto tensor = [&](std::size_t slot, const SquareMatrix<T>& at) {
        SquareMatrix<T> r = SquareMatrix<T>::identity(1);
        for (std::size_t j = 0; j < m; ++j) r = r.kron(j < slot ? s3 : (j == slot ? at : id2));
        return r;
    };

    CliffordGenerators<T> out;
    out.k = k;
    const T i(0, 1);
    for (std::size_t j = 0; j < m; ++j) {
        out.gammas.push_back(i * tensor(j, s1));
        out.gammas.push_back(i * tensor(j, s2));
    }
    if (k % 2 == 1) out.gammas.push_back(i * tensor(m, s3)); // slot m: σ3 on every factor

    auto product = [&] {
        SquareMatrix<T> w = SquareMatrix<T>::identity(spinor_dimension(k));
        for (const auto& g : out.gammas) w = w * g;
        T phase(1);
        for (std::size_t j = 0; j < (k + 1) / 2; ++j) phase = phase * i;
        return phase * w;
    };
    out.omega = product();
    if (k % 2 == 1 && !(out.omega == SquareMatrix<T>::identity(spinor_dimension(k)))) {
        out.gammas.back() = T(-1) * out.gammas.back();
        out.omega = product();
    }
    return out;
}

} // namespace kgraph
