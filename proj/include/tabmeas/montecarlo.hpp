#pragma once

#include "tabmeas/estimators.hpp"
#include "tabmeas/measures.hpp"
#include "tabmeas/rng.hpp"
#include "tabmeas/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

// ---------------------------------------------------------------------------
// bias/MSE experiments
//
// Draw S multinomial tables of size n = gamma * rc from a known truth,
// estimate the measure under several alpha-rules on the SAME tables
// (common random numbers), and report Bias = mean(estimate - truth) and
// MSE = mean((estimate - truth)^2) per (rule, gamma).
//
// Determinism contract: replication i at a given gamma uses the substream
// (seed, TAG_SIM, gamma, i). Per-replication values are stored and reduced
// sequentially in replication order, so results are bit-identical for any
// thread count.
// ---------------------------------------------------------------------------

namespace tabmeas {

struct ExperimentConfig {
    ProbTable truth;
    std::string truth_id;          // label echoed into the CSV
    MeasureSpec spec;
    std::vector<AlphaRule> rules;
    std::vector<std::uint64_t> gammas; // n = gamma * rc each
    std::uint64_t replications = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;     // 0 = hardware concurrency
    double alpha_max = -1.0;  // < 0 = default n/(rc) at each gamma
};

struct ExperimentCell {
    AlphaRule rule;
    std::uint64_t gamma = 0;
    std::uint64_t n = 0;
    double bias = 0.0;
    double abs_bias = 0.0;
    double mse = 0.0;
    // Replications where estimation errored (possible only at alpha = 0);
    // they are excluded from the moments and counted here.
    std::uint64_t failures = 0;
};

struct ExperimentResult {
    MeasureSpec spec;
    std::string truth_id;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
    double truth_value = 0.0;
    // Ordered rule-outer, gamma-inner (the CSV row order).
    std::vector<ExperimentCell> cells;
};

// One multinomial draw of size n from the truth table.
CountTable sample_multinomial(const ProbTable& truth, std::uint64_t n, rng::stream& rs);

ExperimentResult run_experiment(const ExperimentConfig& config);

// Tidy CSV with header:
// measure,lambda,truth_table_id,rule,gamma,n,S,bias,abs_bias,mse,failures,seed
std::string experiment_csv(const ExperimentResult& result);

// ---- asymptotic-expansion validation ----------------------------------------
// Checks the predicted quadratic a1*alpha^2 - 2*a2*alpha against simulation:
// on common random numbers, n^2 * (MSE(fixed alpha) - MSE(fixed 0)) should
// match the prediction within Monte Carlo noise. Replication i uses the
// substream (seed, TAG_EXP, i).

struct ExpansionRow {
    double alpha = 0.0;
    double simulated = 0.0; // n^2 * (MSE(alpha) - MSE(0))
    double predicted = 0.0; // a1*alpha^2 - 2*a2*alpha at the truth
    double z = 0.0;         // (simulated - predicted) / MC standard error
};

std::vector<ExpansionRow> validate_expansion(const MeasureSpec& spec, const ProbTable& truth,
                                             const std::vector<double>& alphas,
                                             std::uint64_t n, std::uint64_t replications,
                                             std::uint64_t seed);

} // namespace tabmeas
