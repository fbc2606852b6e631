#pragma once

#include "tabmeas/estimators.hpp"
#include "tabmeas/measures.hpp"
#include "tabmeas/rng.hpp"
#include "tabmeas/table.hpp"

#include <cstdint>
#include <vector>

// ---------------------------------------------------------------------------
// posterior sampling and credible intervals
//
// Observing counts n under a symmetric Dirichlet(alpha) prior makes the
// posterior of the cell probabilities Dirichlet(n_ij + alpha). A credible
// interval for a measure is read off the empirical quantiles of the measure
// over posterior draws. alpha is resolved once from the chosen rule and
// then held fixed (plug-in): no hyperprior over alpha.
// ---------------------------------------------------------------------------

namespace tabmeas {

struct CredibleInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    std::uint64_t draws = 0;
    // Posterior-mean plug-in value of the measure (the point estimate).
    double point = 0.0;
    double alpha_used = 0.0;
};

// One draw from Dirichlet(params) as normalized independent gamma variates.
// Strict public entry: every parameter must be > 0.
ProbTable sample_dirichlet(Dims dims, const std::vector<double>& params, rng::stream& rs);

// Equal-tailed credible interval from `draws` posterior samples of the
// measure. Quantiles interpolate linearly between closest order statistics.
// Draw s uses a substream derived from (seed, s), so the result is a pure
// function of the arguments. Requires 0 < level < 1 and draws >= 100.
CredibleInterval credible_interval(const MeasureSpec& spec, const CountTable& t,
                                   const AlphaRule& rule, double level, std::uint64_t draws,
                                   std::uint64_t seed, double alpha_max);
CredibleInterval credible_interval(const MeasureSpec& spec, const CountTable& t,
                                   const AlphaRule& rule, double level, std::uint64_t draws,
                                   std::uint64_t seed);

} // namespace tabmeas
