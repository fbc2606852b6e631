#pragma once

#include <cstddef>
#include <string>
#include <vector>

// ---------------------------------------------------------------------------
// contingency-table types
//
// CountTable holds observed nonnegative integer counts; ProbTable holds a
// probability vector on the simplex. Both flatten row-major: cell (i, j) of
// an r-by-c table lives at index i*c + j. Every gradient/Hessian index in
// the calculus layer relies on this single flattening convention.
//
// All types are immutable after construction and safe to share across
// threads.
// ---------------------------------------------------------------------------

namespace tabmeas {

struct Dims {
    std::size_t r = 0;
    std::size_t c = 0;

    std::size_t cells() const noexcept { return r * c; }
    bool operator==(const Dims&) const = default;
};

// Raises bad_argument unless r >= 2 and c >= 2.
void validate_dims(Dims dims);

// Observed counts. Entries are stored as doubles but validated to be
// nonnegative integers; the total n is at least 1.
class CountTable {
  public:
    CountTable(Dims dims, std::vector<double> counts);

    Dims dims() const noexcept { return dims_; }
    const std::vector<double>& counts() const noexcept { return counts_; }
    double n() const noexcept { return n_; }

    double at(std::size_t i, std::size_t j) const { return counts_[i * dims_.c + j]; }

  private:
    Dims dims_;
    std::vector<double> counts_;
    double n_ = 0.0;
};

// Probability table on the simplex.
class ProbTable {
  public:
    // Accepts entries >= 0 whose sum is within 1e-6 of 1 and divides by the
    // sum, so 3-decimal fixtures land exactly on the simplex.
    static ProbTable normalized(Dims dims, std::vector<double> probs);

    // Accepts entries >= 0 already summing to 1 within 1e-12 and stores them
    // unchanged. Used where bit-identity matters (posterior_mean output).
    static ProbTable from_simplex(Dims dims, std::vector<double> probs);

    Dims dims() const noexcept { return dims_; }
    const std::vector<double>& probs() const noexcept { return probs_; }

    double at(std::size_t i, std::size_t j) const { return probs_[i * dims_.c + j]; }

    // p_i. for each row i / p_.j for each column j.
    std::vector<double> row_marginals() const;
    std::vector<double> col_marginals() const;

  private:
    ProbTable(Dims dims, std::vector<double> probs)
        : dims_(dims), probs_(std::move(probs)) {}

    Dims dims_;
    std::vector<double> probs_;
};

// ---- CSV I/O --------------------------------------------------------------
// Format: one table row per line, comma-separated, no header, optional
// trailing newline.

CountTable parse_count_table(const std::string& text);
ProbTable parse_prob_table(const std::string& text);

// Counts serialize as plain integers, so parse -> to_csv -> parse
// round-trips bit-identically. Probabilities use shortest round-trip
// formatting.
std::string to_csv(const CountTable& t);
std::string to_csv(const ProbTable& p);

// ---- smoothing ------------------------------------------------------------

// Dirichlet posterior mean: entry (i, j) = (n_ij + alpha) / (n + rc*alpha).
// alpha must be >= 0. At alpha = 0 this is exactly the sample proportions.
ProbTable posterior_mean(const CountTable& t, double alpha);

// Sample proportions n_ij / n; literally posterior_mean(t, 0).
ProbTable sample_proportions(const CountTable& t);

} // namespace tabmeas
