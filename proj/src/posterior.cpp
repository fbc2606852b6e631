#include "tabmeas/posterior.hpp"

#include "tabmeas/error.hpp"

#include <algorithm>
#include <cmath>

namespace tabmeas {

namespace {

// Linear interpolation between closest order statistics of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double prob) {
    const std::size_t n = sorted.size();
    const double pos = prob * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

ProbTable sample_dirichlet(Dims dims, const std::vector<double>& params, rng::stream& rs) {
    validate_dims(dims);
    if (params.size() != dims.cells())
        raise(errc::bad_argument, "Dirichlet parameter length does not match dimensions");
    for (double a : params) {
        if (!(a > 0.0))
            raise(errc::non_positive_parameter, "Dirichlet parameters must be positive");
    }
    std::vector<double> draw(params.size());
    rng::dirichlet(params.data(), params.size(), rs, draw.data());
    return ProbTable::from_simplex(dims, std::move(draw));
}

CredibleInterval credible_interval(const MeasureSpec& spec, const CountTable& t,
                                   const AlphaRule& rule, double level, std::uint64_t draws,
                                   std::uint64_t seed, double alpha_max) {
    if (!(level > 0.0 && level < 1.0))
        raise(errc::bad_argument, "credible level must lie strictly between 0 and 1");
    if (draws < 100) raise(errc::bad_argument, "need at least 100 posterior draws");

    // Point estimate and resolved alpha come from the ordinary pipeline.
    EstimateResult point = estimate(spec, t, rule, alpha_max);

    const Dims dims = t.dims();
    const std::size_t k = dims.cells();
    std::vector<double> shapes(k);
    for (std::size_t i = 0; i < k; ++i) shapes[i] = t.counts()[i] + point.alpha_used;

    std::vector<double> values(draws);
    std::vector<double> buf(k);
    for (std::uint64_t s = 0; s < draws; ++s) {
        rng::stream rs = rng::stream::from_words(seed, rng::TAG_CI, s, 0);
        rng::dirichlet(shapes.data(), k, rs, buf.data());
        // Zero-count cells at alpha = 0 keep zero mass; the measure's
        // zero-cell conventions (and errors) apply exactly as on data.
        values[s] = std::clamp(measure_value_raw(spec, buf.data(), dims), 0.0, 1.0);
    }
    std::sort(values.begin(), values.end());

    CredibleInterval out;
    out.level = level;
    out.draws = draws;
    out.point = point.estimate;
    out.alpha_used = point.alpha_used;
    out.lower = quantile_sorted(values, (1.0 - level) / 2.0);
    out.upper = quantile_sorted(values, (1.0 + level) / 2.0);
    return out;
}

CredibleInterval credible_interval(const MeasureSpec& spec, const CountTable& t,
                                   const AlphaRule& rule, double level, std::uint64_t draws,
                                   std::uint64_t seed) {
    return credible_interval(spec, t, rule, level, draws, seed, default_alpha_max(t));
}

} // namespace tabmeas
