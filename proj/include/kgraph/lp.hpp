#pragma once

#include <optional>
#include <vector>

#include "rational.hpp"

namespace kgraph::lp {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>; // row-major, every row the same length

enum class Status { optimal, infeasible, unbounded };

struct Result {
    Status status = Status::infeasible;
    Vec x;      // primal solution (optimal)
    Rational value;
    Vec dual;   // y with A^T y <= c and b^T y = value (optimal)
    Vec farkas; // y with A^T y >= 0 and b^T y < 0 (infeasible)
};

inline Rational dot(const Vec& a, const Vec& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// A^T y
inline Vec transpose_times(const Mat& a, const Vec& y, std::size_t cols)
{
    Vec out(cols, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (y[i] == 0) continue;
        for (std::size_t j = 0; j < cols; ++j)
            if (a[i][j] != 0) out[j] += a[i][j] * y[i];
    }
    return out;
}

inline Vec times(const Mat& a, const Vec& x)
{
    Vec out(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot(a[i], x);
    return out;
}

namespace detail {

// Tableau [B^{-1}A | B^{-1}] with rhs B^{-1}b. The identity block of the artificial
// columns is kept so the duals can be read off at any time.
struct Tableau {
    std::size_t m, n;
    Mat t;
    Vec rhs;
    std::vector<std::size_t> basis;

    Tableau(const Mat& a, const Vec& b) : m(a.size()), n(m ? a[0].size() : 0), t(m, Vec(n + m, Rational(0))), rhs(b), basis(m)
    {
        for (std::size_t i = 0; i < m; ++i) {
            const bool flip = rhs[i] < 0;
            for (std::size_t j = 0; j < n; ++j) t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
            if (flip) rhs[i] = -rhs[i];
            t[i][n + i] = 1;
            basis[i] = n + i;
        }
    }

    void pivot(std::size_t r, std::size_t c)
    {
        const Rational p = t[r][c];
        for (auto& x : t[r]) x /= p;
        rhs[r] /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || t[i][c] == 0) continue;
            const Rational f = t[i][c];
            for (std::size_t j = 0; j < n + m; ++j)
                if (t[r][j] != 0) t[i][j] -= f * t[r][j];
            rhs[i] -= f * rhs[r];
        }
        basis[r] = c;
    }

    // y^T = c_B^T B^{-1}, in the row signs of the (possibly flipped) tableau
    Vec duals(const Vec& cost) const
    {
        Vec y(m, Rational(0));
        for (std::size_t i = 0; i < m; ++i) {
            const Rational& cb = cost[basis[i]];
            if (cb == 0) continue;
            for (std::size_t r = 0; r < m; ++r) y[r] += cb * t[i][n + r];
        }
        return y;
    }

    // Bland's rule. Columns with allowed[j] false never enter.
    Status run(const Vec& cost, const std::vector<char>& allowed)
    {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < n + m && !enter; ++j) {
                if (!allowed[j]) continue;
                Rational reduced = cost[j];
                for (std::size_t i = 0; i < m; ++i) reduced -= cost[basis[i]] * t[i][j];
                if (reduced < 0) enter = j;
            }
            if (!enter) return Status::optimal;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][*enter] <= 0) continue;
                Rational ratio = rhs[i] / t[i][*enter];
                if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return Status::unbounded;
            pivot(*leave, *enter);
        }
    }
};

} // namespace detail

// minimize c^T x subject to A x = b, x >= 0
inline Result solve(const Mat& a, const Vec& b, const Vec& c)
{
    const std::size_t m = a.size();
    const std::size_t n = c.size();
    detail::Tableau tab(a, b);
    std::vector<Rational> sign(m, Rational(1));
    for (std::size_t i = 0; i < m; ++i)
        if (b[i] < 0) sign[i] = -1;

    Result res;
    // phase 1: minimize the sum of artificials
    Vec c1(n + m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) c1[n + i] = 1;
    std::vector<char> allowed(n + m, 1);
    tab.run(c1, allowed);
    Rational infeas = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= n) infeas += tab.rhs[i];
    if (infeas > 0) {
        // phase-1 duals y1 satisfy A'^T y1 <= 0 and b'^T y1 = infeas > 0
        Vec y1 = tab.duals(c1);
        res.status = Status::infeasible;
        res.farkas.resize(m);
        for (std::size_t i = 0; i < m; ++i) res.farkas[i] = -sign[i] * y1[i];
        return res;
    }
    // drive zero-level artificials out where an original column allows it
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (tab.t[i][j] != 0) {
                tab.pivot(i, j);
                break;
            }
    }
    // phase 2
    Vec c2(n + m, Rational(0));
    for (std::size_t j = 0; j < n; ++j) c2[j] = c[j];
    for (std::size_t j = n; j < n + m; ++j) allowed[j] = 0;
    res.status = tab.run(c2, allowed);
    if (res.status != Status::optimal) return res;
    res.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.rhs[i];
    res.value = dot(c, res.x);
    Vec y = tab.duals(c2);
    res.dual.resize(m);
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = sign[i] * y[i];
    return res;
}

// A^T y >= 0 and b^T y < 0 rule out any x >= 0 with A x = b.
inline bool replay_farkas(const Mat& a, const Vec& b, const Vec& y)
{
    if (y.size() != a.size()) return false;
    const std::size_t n = a.empty() ? 0 : a[0].size();
    for (const auto& v : transpose_times(a, y, n))
        if (v < 0) return false;
    return dot(b, y) < 0;
}

} // namespace kgraph::lp
