#include "tabmeas/montecarlo.hpp"

#include "tabmeas/calculus.hpp"
#include "tabmeas/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace tabmeas {

namespace {

// Compensated (Kahan) accumulator; reductions run sequentially in
// replication order so the result is independent of how replications were
// partitioned across threads.
struct kahan {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, count) across `threads` workers in static
// contiguous partitions.
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, const Fn& fn) {
    if (threads <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::uint64_t per = (count + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = static_cast<std::uint64_t>(t) * per;
        const std::uint64_t hi = std::min(count, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::uint64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

void append_double(std::string& out, double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    out.append(buf, ptr);
}

void append_u64(std::string& out, std::uint64_t value) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    out.append(buf, ptr);
}

} // namespace

CountTable sample_multinomial(const ProbTable& truth, std::uint64_t n, rng::stream& rs) {
    if (n < 1) raise(errc::bad_argument, "multinomial sample size must be >= 1");
    const std::size_t k = truth.dims().cells();
    std::vector<double> counts(k);
    rng::multinomial(truth.probs().data(), k, n, rs, counts.data());
    return CountTable(truth.dims(), std::move(counts));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_spec(config.spec, config.truth.dims());
    if (config.replications < 1) raise(errc::bad_argument, "need at least one replication");
    if (config.rules.empty()) raise(errc::bad_argument, "need at least one rule");
    if (config.gammas.empty()) raise(errc::bad_argument, "need at least one gamma");
    for (std::uint64_t g : config.gammas)
        if (g < 1) raise(errc::bad_argument, "gamma values must be >= 1");

    const Dims dims = config.truth.dims();
    const std::size_t k = dims.cells();
    const std::size_t n_rules = config.rules.size();
    const std::uint64_t S = config.replications;
    const unsigned threads = resolve_threads(config.threads);
    const double truth_value = measure_value(config.spec, config.truth);

    ExperimentResult result;
    result.spec = config.spec;
    result.truth_id = config.truth_id;
    result.replications = S;
    result.seed = config.seed;
    result.truth_value = truth_value;

    // cells indexed [rule][gamma]; flattened rule-outer at the end.
    std::vector<std::vector<ExperimentCell>> grid(
        n_rules, std::vector<ExperimentCell>(config.gammas.size()));

    std::vector<std::vector<double>> values(n_rules, std::vector<double>(S));
    std::vector<std::vector<std::uint8_t>> failed(n_rules, std::vector<std::uint8_t>(S));

    for (std::size_t gi = 0; gi < config.gammas.size(); ++gi) {
        const std::uint64_t gamma = config.gammas[gi];
        const std::uint64_t n = gamma * static_cast<std::uint64_t>(k);
        const double alpha_max =
            config.alpha_max >= 0.0 ? config.alpha_max
                                    : static_cast<double>(n) / static_cast<double>(k);

        parallel_for(S, threads, [&](std::uint64_t i) {
            rng::stream rs = rng::stream::from_words(config.seed, rng::TAG_SIM, gamma, i);
            std::vector<double> counts(k);
            rng::multinomial(config.truth.probs().data(), k, n, rs, counts.data());
            // The same sampled table feeds every rule (common random numbers).
            CountTable t(dims, std::move(counts));
            for (std::size_t ri = 0; ri < n_rules; ++ri) {
                try {
                    values[ri][i] = estimate(config.spec, t, config.rules[ri], alpha_max).estimate;
                    failed[ri][i] = 0;
                } catch (const error&) {
                    values[ri][i] = 0.0;
                    failed[ri][i] = 1;
                }
            }
        });

        for (std::size_t ri = 0; ri < n_rules; ++ri) {
            kahan err_sum, sq_sum;
            std::uint64_t failures = 0;
            for (std::uint64_t i = 0; i < S; ++i) {
                if (failed[ri][i]) {
                    ++failures;
                    continue;
                }
                const double e = values[ri][i] - truth_value;
                err_sum.add(e);
                sq_sum.add(e * e);
            }
            const std::uint64_t kept = S - failures;
            ExperimentCell& cell = grid[ri][gi];
            cell.rule = config.rules[ri];
            cell.gamma = gamma;
            cell.n = n;
            cell.failures = failures;
            if (kept > 0) {
                cell.bias = err_sum.sum / static_cast<double>(kept);
                cell.abs_bias = std::fabs(cell.bias);
                cell.mse = sq_sum.sum / static_cast<double>(kept);
            }
        }
    }

    result.cells.reserve(n_rules * config.gammas.size());
    for (std::size_t ri = 0; ri < n_rules; ++ri)
        for (std::size_t gi = 0; gi < config.gammas.size(); ++gi)
            result.cells.push_back(grid[ri][gi]);
    return result;
}

std::string experiment_csv(const ExperimentResult& result) {
    std::string out = "measure,lambda,truth_table_id,rule,gamma,n,S,bias,abs_bias,mse,"
                      "failures,seed\n";
    for (const ExperimentCell& cell : result.cells) {
        out += measure_name(result.spec.kind);
        out.push_back(',');
        append_double(out, result.spec.lambda);
        out.push_back(',');
        out += result.truth_id;
        out.push_back(',');
        out += rule_name(cell.rule);
        out.push_back(',');
        append_u64(out, cell.gamma);
        out.push_back(',');
        append_u64(out, cell.n);
        out.push_back(',');
        append_u64(out, result.replications);
        out.push_back(',');
        append_double(out, cell.bias);
        out.push_back(',');
        append_double(out, cell.abs_bias);
        out.push_back(',');
        append_double(out, cell.mse);
        out.push_back(',');
        append_u64(out, cell.failures);
        out.push_back(',');
        append_u64(out, result.seed);
        out.push_back('\n');
    }
    return out;
}

std::vector<ExpansionRow> validate_expansion(const MeasureSpec& spec, const ProbTable& truth,
                                             const std::vector<double>& alphas,
                                             std::uint64_t n, std::uint64_t replications,
                                             std::uint64_t seed) {
    validate_spec(spec, truth.dims());
    if (replications < 2) raise(errc::bad_argument, "need at least two replications");
    for (double a : alphas)
        if (!(a >= 0.0)) raise(errc::bad_argument, "expansion alphas must be >= 0");

    const Dims dims = truth.dims();
    const std::size_t k = dims.cells();
    const double truth_value = measure_value(spec, truth);
    const MseCoefficients coeff = mse_coefficients(spec, truth);
    const double nd = static_cast<double>(n);

    // Accumulate, per alpha, the mean and variance of the per-replication
    // difference d_i = err(alpha)^2 - err(0)^2 on common random numbers.
    const std::size_t m = alphas.size();
    std::vector<kahan> d_sum(m), d_sqsum(m);
    std::vector<double> counts(k), smoothed(k);

    for (std::uint64_t i = 0; i < replications; ++i) {
        rng::stream rs = rng::stream::from_words(seed, rng::TAG_EXP, i, 0);
        rng::multinomial(truth.probs().data(), k, n, rs, counts.data());

        const double err0 = [&] {
            for (std::size_t x = 0; x < k; ++x) smoothed[x] = counts[x] / nd;
            return std::clamp(measure_value_raw(spec, smoothed.data(), dims), 0.0, 1.0) -
                   truth_value;
        }();
        for (std::size_t ai = 0; ai < m; ++ai) {
            const double a = alphas[ai];
            const double denom = nd + static_cast<double>(k) * a;
            for (std::size_t x = 0; x < k; ++x) smoothed[x] = (counts[x] + a) / denom;
            const double err =
                std::clamp(measure_value_raw(spec, smoothed.data(), dims), 0.0, 1.0) -
                truth_value;
            const double d = err * err - err0 * err0;
            d_sum[ai].add(d);
            d_sqsum[ai].add(d * d);
        }
    }

    std::vector<ExpansionRow> rows(m);
    const double S = static_cast<double>(replications);
    for (std::size_t ai = 0; ai < m; ++ai) {
        const double a = alphas[ai];
        const double mean = d_sum[ai].sum / S;
        const double var = std::max(0.0, d_sqsum[ai].sum / S - mean * mean);
        const double se = nd * nd * std::sqrt(var / S);
        ExpansionRow& row = rows[ai];
        row.alpha = a;
        row.simulated = nd * nd * mean;
        row.predicted = coeff.a1 * a * a - 2.0 * coeff.a2 * a;
        const double diff = row.simulated - row.predicted;
        row.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    return rows;
}

} // namespace tabmeas
