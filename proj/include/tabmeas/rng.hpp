#pragma once

#include <cstddef>
#include <cstdint>

// ---------------------------------------------------------------------------
// random streams
//
// Deterministic, splittable randomness for the simulation and posterior
// layers. A stream is a xoshiro256++ generator whose state is derived from
// four 64-bit words via SplitMix64 hashing, so (seed, purpose-tag, index...)
// tuples give reproducible, independent-looking substreams no matter which
// thread runs them. All distribution samples are pure functions of the
// stream state — no hidden spare values are cached — which is what makes
// replication-indexed substreams bit-reproducible.
// ---------------------------------------------------------------------------

namespace tabmeas::rng {

// Purpose tags keep substreams for different jobs disjoint even at equal
// seeds and indices.
inline constexpr std::uint64_t TAG_SIM = 0x53494D; // experiment replications
inline constexpr std::uint64_t TAG_CI = 0x4349;    // posterior draws
inline constexpr std::uint64_t TAG_EXP = 0x455850; // expansion-validation replications

// SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

class stream {
  public:
    // Derives a generator state by absorbing the four words through
    // SplitMix64 finalizers, then squeezing four state words. Distinct
    // tuples yield distinct, well-mixed states.
    static stream from_words(std::uint64_t w0, std::uint64_t w1, std::uint64_t w2,
                             std::uint64_t w3);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01();
    // Uniform on (0, 1): rejects exact zeros.
    double uniform01_pos();

    // Standard normal via the Marsaglia polar method. The paired second
    // variate is deliberately discarded (see file header).
    double normal();

    // Gamma(shape, 1) via Marsaglia–Tsang, with the power-of-uniform boost
    // for shape < 1. Requires shape > 0.
    double gamma(double shape);

    // Binomial(n, p) count. Inversion for small np, transformed rejection
    // otherwise; exact edge handling for p <= 0 and p >= 1.
    std::uint64_t binomial(std::uint64_t n, double p);

  private:
    std::uint64_t s_[4] = {0, 0, 0, 0};
};

// One multinomial draw: fills counts[0..k) (as integer-valued doubles)
// summing to n, cell j ~ Binomial(n, p[j]) marginally. Sequential
// conditional binomials, O(k).
void multinomial(const double* p, std::size_t k, std::uint64_t n, stream& rs, double* counts);

// One Dirichlet draw into out[0..k): independent Gamma(shapes[j]) variates
// normalized by their sum. Shapes <= 0 are treated as exact zero mass (used
// for posterior draws at alpha = 0 with empty cells); at least one shape
// must be positive.
void dirichlet(const double* shapes, std::size_t k, stream& rs, double* out);

} // namespace tabmeas::rng
