#pragma once

#include "tabmeas/calculus.hpp"
#include "tabmeas/measures.hpp"
#include "tabmeas/table.hpp"

#include <string>

// ---------------------------------------------------------------------------
// estimation pipeline
//
// An estimate of a measure is produced in three steps: resolve a smoothing
// parameter alpha from a rule, smooth the observed counts through the
// Dirichlet posterior mean, and evaluate the measure on the smoothed table.
// Because the smoothed table is a genuine probability table, every estimate
// inherits the measure's [0, 1] range — no out-of-range values are
// possible under any rule.
//
// Rules:
//   fixed:X   constant alpha = X (0 = plain sample proportions,
//             0.5 = Jeffreys prior, 1 = uniform prior)
//   fhm       cell-probability-MSE-optimal alpha (Fienberg–Holland style),
//             mapped into the symmetric Dirichlet family
//   optimal   measure-MSE-optimal data-driven alpha (calculus module)
// ---------------------------------------------------------------------------

namespace tabmeas {

enum class RuleKind { fixed, fienberg_holland, optimal };

struct AlphaRule {
    RuleKind kind = RuleKind::optimal;
    double alpha = 0.0; // used only by RuleKind::fixed

    static AlphaRule fixed(double a) { return {RuleKind::fixed, a}; }
    static AlphaRule fhm() { return {RuleKind::fienberg_holland, 0.0}; }
    static AlphaRule optimal() { return {RuleKind::optimal, 0.0}; }
};

// Parses "fixed:X" (X >= 0), "fhm", or "optimal".
AlphaRule parse_rule(const std::string& text);

// Canonical spelling, e.g. "fixed:0.5", "fhm", "optimal". Fixed alphas use
// shortest round-trip formatting, so parse_rule(rule_name(r)) == r.
std::string rule_name(const AlphaRule& rule);

// Smoothing parameter that asymptotically minimizes the total MSE of the
// smoothed cell probabilities themselves (not of a measure):
// alpha = K/(rc) with K = (n^2 - sum n_ij^2) / (sum n_ij^2 - n^2/(rc)).
// Exactly uniform counts make the denominator vanish; the configured cap is
// returned there (maximal shrinkage is harmless at the uniform table).
double fienberg_holland_alpha(const CountTable& t, double alpha_max);
double fienberg_holland_alpha(const CountTable& t);

struct EstimateResult {
    AlphaRule rule;
    double alpha_used = 0.0;
    ProbTable p_smoothed;
    double estimate = 0.0;
    // Populated when rule.kind == optimal (a1/a2/clamped diagnostics).
    OptimalAlphaResult diagnostics{};
};

// Resolve alpha, smooth, evaluate. alpha_max caps the data-driven rules
// (default n/(rc)). Measure-domain errors propagate (possible only at
// alpha = 0, where zero cells can survive smoothing).
EstimateResult estimate(const MeasureSpec& spec, const CountTable& t, const AlphaRule& rule,
                        double alpha_max);
EstimateResult estimate(const MeasureSpec& spec, const CountTable& t, const AlphaRule& rule);

} // namespace tabmeas
