#pragma once

// Test-only brute-force oracles over dense K^n arrays. Nothing here reuses
// the symmetric-storage code paths it is used to check.

#include "exotic/symmetric_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using exotic::cplx;

struct Dense {
    std::size_t n = 0;
    std::size_t K = 1;
    std::vector<cplx> data; // row-major, last index fastest

    Dense(std::size_t n_, std::size_t K_) : n(n_), K(K_)
    {
        std::size_t total = 1;
        for (std::size_t j = 0; j < n; ++j) total *= K;
        data.assign(total, cplx{});
    }

    std::size_t size() const { return data.size(); }

    std::vector<std::size_t> unflatten(std::size_t off) const
    {
        std::vector<std::size_t> idx(n);
        for (std::size_t j = n; j-- > 0;) {
            idx[j] = off % K;
            off /= K;
        }
        return idx;
    }

    std::size_t flatten(const std::vector<std::size_t>& idx) const
    {
        std::size_t off = 0;
        for (auto k : idx) off = off * K + k;
        return off;
    }
};

inline Dense expand(const exotic::SymTensor& t)
{
    Dense d(t.degree(), t.dim());
    for (std::size_t off = 0; off < d.size(); ++off) d.data[off] = t.at(d.unflatten(off));
    return d;
}

inline Dense outer(const std::vector<std::vector<cplx>>& factors, std::size_t K)
{
    Dense d(factors.size(), K);
    for (std::size_t off = 0; off < d.size(); ++off) {
        const auto idx = d.unflatten(off);
        cplx v = 1.0;
        for (std::size_t j = 0; j < idx.size(); ++j) v *= factors[j][idx[j]];
        d.data[off] = v;
    }
    return d;
}

inline Dense power(const std::vector<cplx>& xi, std::size_t n)
{
    return outer(std::vector<std::vector<cplx>>(n, xi), xi.size());
}

inline double norm(const Dense& d, const std::vector<double>& lambda, double p)
{
    long double s = 0.0L;
    for (std::size_t off = 0; off < d.size(); ++off) {
        const auto idx = d.unflatten(off);
        long double w = 1.0L;
        for (auto k : idx) w *= std::pow(static_cast<long double>(lambda[k]), 2.0L * p);
        s += w * std::norm(d.data[off]);
    }
    return static_cast<double>(std::sqrt(s));
}

inline cplx full_pair(const Dense& a, const Dense& b)
{
    cplx s = 0.0;
    for (std::size_t off = 0; off < a.size(); ++off) s += a.data[off] * b.data[off];
    return s;
}

/// Contract the last slot with v.
inline Dense contract_last(const Dense& a, const std::vector<cplx>& v)
{
    Dense out(a.n - 1, a.K);
    for (std::size_t off = 0; off < a.size(); ++off) out.data[off / a.K] += a.data[off] * v[off % a.K];
    return out;
}

/// Contract the last two slots with a K×K matrix tau[i*K+j].
inline Dense contract_last_two(const Dense& a, const std::vector<cplx>& tau)
{
    Dense out(a.n - 2, a.K);
    const std::size_t KK = a.K * a.K;
    for (std::size_t off = 0; off < a.size(); ++off) out.data[off / KK] += a.data[off] * tau[off % KK];
    return out;
}

/// Average over all n! slot permutations.
inline Dense symmetrize(const Dense& a)
{
    Dense out(a.n, a.K);
    std::vector<std::size_t> perm(a.n);
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0.0;
    do {
        for (std::size_t off = 0; off < a.size(); ++off) {
            const auto idx = a.unflatten(off);
            std::vector<std::size_t> p(a.n);
            for (std::size_t j = 0; j < a.n; ++j) p[j] = idx[perm[j]];
            out.data[out.flatten(p)] += a.data[off];
        }
        count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& x : out.data) x /= count;
    return out;
}

inline double max_abs_diff(const Dense& a, const Dense& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

inline std::vector<cplx> random_vector(std::size_t K, std::mt19937_64& eng, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<cplx> v(K);
    for (auto& x : v) x = {u(eng), u(eng)};
    return v;
}

/// Random symmetric tensor built by symmetrizing a random dense array.
inline exotic::SymTensor random_sym(std::size_t n, std::size_t K, std::mt19937_64& eng, double scale = 1.0)
{
    exotic::SymTensor t(n, K);
    std::uniform_real_distribution<double> u(-scale, scale);
    for (auto& c : t.coeffs()) c = {u(eng), u(eng)};
    return t;
}

inline std::vector<double> standard_lambdas(std::size_t K)
{
    std::vector<double> l(K);
    for (std::size_t k = 0; k < K; ++k) l[k] = static_cast<double>(k) + 2.0;
    return l;
}

} // namespace oracle
