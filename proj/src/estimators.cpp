#include "tabmeas/estimators.hpp"

#include "tabmeas/error.hpp"
#include "tabmeas/kernels.hpp"

#include <charconv>
#include <system_error>

namespace tabmeas {

AlphaRule parse_rule(const std::string& text) {
    if (text == "optimal") return AlphaRule::optimal();
    if (text == "fhm") return AlphaRule::fhm();
    if (text.rfind("fixed:", 0) == 0) {
        const char* begin = text.data() + 6;
        const char* end = text.data() + text.size();
        double a = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, a);
        if (ec != std::errc() || ptr != end || !(a >= 0.0))
            raise(errc::bad_argument, "fixed rule needs a nonnegative alpha, got '" + text + "'");
        return AlphaRule::fixed(a);
    }
    raise(errc::bad_argument,
          "unknown rule '" + text + "' (expected fixed:X, fhm, or optimal)");
}

std::string rule_name(const AlphaRule& rule) {
    switch (rule.kind) {
        case RuleKind::fienberg_holland: return "fhm";
        case RuleKind::optimal: return "optimal";
        case RuleKind::fixed: {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), rule.alpha);
            (void)ec;
            return "fixed:" + std::string(buf, ptr);
        }
    }
    return "unknown";
}

double fienberg_holland_alpha(const CountTable& t, double alpha_max) {
    const double k = static_cast<double>(t.dims().cells());
    const double n = t.n();
    const double sumsq =
        kernels::dot(t.counts().data(), t.counts().data(), t.counts().size());
    // Exactly uniform counts: k * sum(n_ij^2) == n^2 holds in exact integer
    // arithmetic (both sides are integers below 2^53 for any realistic n).
    if (k * sumsq == n * n) return alpha_max;
    const double khat = (n * n - sumsq) / (sumsq - n * n / k);
    const double alpha = khat / k;
    return alpha < 0.0 ? 0.0 : alpha;
}

double fienberg_holland_alpha(const CountTable& t) {
    return fienberg_holland_alpha(t, default_alpha_max(t));
}

EstimateResult estimate(const MeasureSpec& spec, const CountTable& t, const AlphaRule& rule,
                        double alpha_max) {
    validate_spec(spec, t.dims());
    double alpha = 0.0;
    OptimalAlphaResult diag{};
    switch (rule.kind) {
        case RuleKind::fixed:
            if (!(rule.alpha >= 0.0)) raise(errc::bad_argument, "fixed alpha must be >= 0");
            alpha = rule.alpha;
            break;
        case RuleKind::fienberg_holland:
            alpha = fienberg_holland_alpha(t, alpha_max);
            break;
        case RuleKind::optimal:
            diag = optimal_alpha(spec, t, alpha_max);
            alpha = diag.alpha;
            break;
    }
    ProbTable smoothed = posterior_mean(t, alpha);
    const double value = measure_value(spec, smoothed);
    return EstimateResult{rule, alpha, std::move(smoothed), value, diag};
}

EstimateResult estimate(const MeasureSpec& spec, const CountTable& t, const AlphaRule& rule) {
    return estimate(spec, t, rule, default_alpha_max(t));
}

} // namespace tabmeas
