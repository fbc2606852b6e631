#include "tabmeas/rng.hpp"

#include "tabmeas/error.hpp"

#include <cmath>

namespace tabmeas::rng {

namespace {

constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;

// Stateless SplitMix64 finalizer (bijective 64-bit mix).
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t splitmix64(std::uint64_t& state) { return mix64(state += GOLDEN); }

stream stream::from_words(std::uint64_t w0, std::uint64_t w1, std::uint64_t w2,
                          std::uint64_t w3) {
    // Absorb: each word is folded in through a bijective finalizer, so
    // tuples differing in any single word hash to different values.
    std::uint64_t h = GOLDEN;
    h = mix64(h ^ w0);
    h = mix64(h ^ w1);
    h = mix64(h ^ w2);
    h = mix64(h ^ w3);
    // Squeeze four state words from a SplitMix64 stream seeded at h.
    stream out;
    out.s_[0] = splitmix64(h);
    out.s_[1] = splitmix64(h);
    out.s_[2] = splitmix64(h);
    out.s_[3] = splitmix64(h);
    // xoshiro256++ requires a nonzero state; unreachable in practice.
    if ((out.s_[0] | out.s_[1] | out.s_[2] | out.s_[3]) == 0) out.s_[0] = GOLDEN;
    return out;
}

std::uint64_t stream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double stream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double stream::uniform01_pos() {
    while (true) {
        double u = uniform01();
        if (u > 0.0) return u;
    }
}

double stream::normal() {
    while (true) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double stream::gamma(double shape) {
    if (!(shape > 0.0)) raise(errc::non_positive_parameter, "gamma shape must be positive");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
        const double u = uniform01_pos();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        const double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01_pos();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace {

// Inversion (small n*p): walk the CDF from 0.
std::uint64_t binomial_inversion(std::uint64_t n, double p, stream& rs) {
    const double q = 1.0 - p;
    const double s = p / q;
    double r = std::pow(q, static_cast<double>(n)); // >= e^-30 in this regime
    double u = rs.uniform01();
    std::uint64_t x = 0;
    while (u > r) {
        u -= r;
        if (x >= n) return n; // guards accumulated rounding
        ++x;
        r *= (static_cast<double>(n - x + 1) / static_cast<double>(x)) * s;
    }
    return x;
}

// Transformed rejection with squeeze (valid for n*min(p,1-p) >= 10;
// used only above the inversion cutoff of 30). p must be in (0, 1/2].
std::uint64_t binomial_btrs(std::uint64_t n, double p, stream& rs) {
    const double nd = static_cast<double>(n);
    const double spq = std::sqrt(nd * p * (1.0 - p));
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = nd * p + 0.5;
    const double vr = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(p / (1.0 - p));
    const double m = std::floor((nd + 1.0) * p);
    const double h = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);
    while (true) {
        const double u = rs.uniform01() - 0.5;
        double v = rs.uniform01();
        const double us = 0.5 - std::fabs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + c);
        // Squeeze: inside this region the bounding box is tight and kd is
        // guaranteed in range.
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kd);
        if (kd < 0.0 || kd > nd) continue;
        // Full acceptance test against the log pmf ratio f(k)/f(m).
        v = std::log(v * alpha / (a / (us * us) + b));
        if (v <= h - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + (kd - m) * lpq)
            return static_cast<std::uint64_t>(kd);
    }
}

} // namespace

std::uint64_t stream::binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);
    if (static_cast<double>(n) * p <= 30.0) return binomial_inversion(n, p, *this);
    return binomial_btrs(n, p, *this);
}

void multinomial(const double* p, std::size_t k, std::uint64_t n, stream& rs, double* counts) {
    std::uint64_t remaining_n = n;
    double remaining_p = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (j + 1 == k) {
            counts[j] = static_cast<double>(remaining_n);
            break;
        }
        if (remaining_n == 0) {
            counts[j] = 0.0;
            continue;
        }
        double q = remaining_p > 0.0 ? p[j] / remaining_p : 1.0;
        if (q < 0.0) q = 0.0;
        if (q > 1.0) q = 1.0;
        const std::uint64_t c = rs.binomial(remaining_n, q);
        counts[j] = static_cast<double>(c);
        remaining_n -= c;
        remaining_p -= p[j];
    }
}

void dirichlet(const double* shapes, std::size_t k, stream& rs, double* out) {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        out[j] = shapes[j] > 0.0 ? rs.gamma(shapes[j]) : 0.0;
        total += out[j];
    }
    if (total <= 0.0)
        raise(errc::non_positive_parameter, "Dirichlet draw requires a positive total shape");
    for (std::size_t j = 0; j < k; ++j) out[j] /= total;
}

} // namespace tabmeas::rng
