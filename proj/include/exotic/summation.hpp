#pragma once

// Neumaier-compensated accumulation. Every reduction in the library goes
// through these accumulators in ascending index order so results are
// bit-reproducible run to run.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>

namespace exotic {

using cplx = std::complex<double>;

class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(cplx z) noexcept
    {
        re_.add(z.real());
        im_.add(z.imag());
    }

    CompensatedComplexSum& operator+=(cplx z) noexcept
    {
        add(z);
        return *this;
    }

    [[nodiscard]] cplx value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

inline double compensated_sum(std::span<const double> xs) noexcept
{
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline cplx compensated_sum(std::span<const cplx> xs) noexcept
{
    CompensatedComplexSum s;
    for (cplx x : xs) s.add(x);
    return s.value();
}

/// Uniform double in [0,1) from the top 53 bits of a 64-bit engine draw.
/// Used instead of std::uniform_real_distribution so seeded probes are
/// identical across standard library implementations.
template <class Engine>
double uniform01(Engine& eng)
{
    return static_cast<double>(static_cast<std::uint64_t>(eng()) >> 11) * 0x1.0p-53;
}

template <class Engine>
double uniform(Engine& eng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(eng);
}

} // namespace exotic
