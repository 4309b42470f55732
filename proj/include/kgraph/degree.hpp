#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace kgraph {

// Element of N^k (Signed = false in spirit) or Z^k. Both use signed storage so
// differences stay representable; Degree is only ever built nonnegative.
template <class Int>
class basic_degree {
public:
    using value_type = Int;

    basic_degree() = default;
    explicit basic_degree(std::size_t k) : c_(k, Int{0}) {}
    basic_degree(std::initializer_list<Int> xs) : c_(xs) {}
    explicit basic_degree(std::vector<Int> xs) : c_(std::move(xs)) {}

    static basic_degree zero(std::size_t k) { return basic_degree(k); }
    static basic_degree unit(std::size_t k, std::size_t i)
    {
        basic_degree d(k);
        d.c_[i] = 1;
        return d;
    }
    static basic_degree constant(std::size_t k, Int v)
    {
        basic_degree d(k);
        std::fill(d.c_.begin(), d.c_.end(), v);
        return d;
    }

    std::size_t rank() const noexcept { return c_.size(); }
    Int operator[](std::size_t i) const { return c_[i]; }
    Int& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Int>& coords() const noexcept { return c_; }

    Int total() const { return std::accumulate(c_.begin(), c_.end(), Int{0}); }
    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [](Int x) { return x == 0; });
    }
    bool nonnegative() const
    {
        return std::all_of(c_.begin(), c_.end(), [](Int x) { return x >= 0; });
    }

    basic_degree& operator+=(const basic_degree& o)
    {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    basic_degree& operator-=(const basic_degree& o)
    {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend basic_degree operator+(basic_degree a, const basic_degree& b) { return a += b; }
    friend basic_degree operator-(basic_degree a, const basic_degree& b) { return a -= b; }
    friend basic_degree operator-(basic_degree a)
    {
        for (auto& x : a.c_) x = -x;
        return a;
    }

    friend bool operator==(const basic_degree&, const basic_degree&) = default;
    friend auto operator<=>(const basic_degree&, const basic_degree&) = default;

    // componentwise partial order; operator<=> above is only a total order for containers
    bool leq(const basic_degree& o) const
    {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] > o.c_[i]) return false;
        return true;
    }

    basic_degree meet(const basic_degree& o) const
    {
        check(o);
        basic_degree r(*this);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = std::min(c_[i], o.c_[i]);
        return r;
    }
    basic_degree join(const basic_degree& o) const
    {
        check(o);
        basic_degree r(*this);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = std::max(c_[i], o.c_[i]);
        return r;
    }
    basic_degree positive_part() const { return join(zero(rank())); }
    basic_degree negative_part() const { return meet(zero(rank())); }

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

private:
    void check(const basic_degree& o) const
    {
        if (o.c_.size() != c_.size())
            fail(errc::invalid_argument, "degree rank mismatch " + str() + " vs " + o.str());
    }

    std::vector<Int> c_;
};

using Degree = basic_degree<std::int64_t>;
using DegreeDiff = basic_degree<std::int64_t>;

// Visit every n with lo <= n <= hi in lexicographic order.
template <class Int, class F>
void for_each_in_box(const basic_degree<Int>& lo, const basic_degree<Int>& hi, F&& f)
{
    if (!lo.leq(hi)) return;
    basic_degree<Int> n = lo;
    const std::size_t k = lo.rank();
    for (;;) {
        f(static_cast<const basic_degree<Int>&>(n));
        std::size_t i = k;
        while (i > 0 && n[i - 1] == hi[i - 1]) --i;
        if (i == 0) return;
        ++n[i - 1];
        for (std::size_t j = i; j < k; ++j) n[j] = lo[j];
    }
}

template <class Int>
std::vector<basic_degree<Int>> box(const basic_degree<Int>& lo, const basic_degree<Int>& hi)
{
    std::vector<basic_degree<Int>> out;
    for_each_in_box(lo, hi, [&](const basic_degree<Int>& n) { out.push_back(n); });
    return out;
}

} // namespace kgraph
