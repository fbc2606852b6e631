#pragma once

#include <stdexcept>
#include <string>

namespace tabmeas {

// ---------------------------------------------------------------------------
// error codes
//
// Every failure the library can signal carries one of these codes so callers
// (and the CLI exit-code mapping) can distinguish input problems from
// measure-domain problems without parsing messages.
// ---------------------------------------------------------------------------
enum class errc {
    bad_argument,          // malformed request: bad flag value, unreadable file, dims < 2
    ragged_rows,           // CSV rows of unequal length
    negative_entry,        // negative count or probability
    non_integer_entry,     // count table entry is not an integer
    all_zero_table,        // count table with n = 0
    sum_out_of_tolerance,  // probability grid does not sum to 1 within 1e-6
    divergence_undefined,  // power divergence with p > 0 where q = 0
    degenerate_marginals,  // association coefficient with fewer than two nonzero rows
    not_square,            // symmetry measure on a non-square table
    all_diagonal,          // symmetry measure with zero off-diagonal mass
    boundary_point,        // derivatives requested at a point with a required zero cell
    non_positive_parameter // Dirichlet sampler given a parameter <= 0
};

const char* errc_name(errc code);

// Library exception type. `code()` is the machine-readable classification;
// what() carries a human-readable sentence.
class error : public std::runtime_error {
  public:
    error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

    // True for errors caused by malformed input (CLI exit 2) as opposed to
    // mathematically undefined requests on valid input (CLI exit 3).
    bool is_input_error() const noexcept {
        switch (code_) {
            case errc::bad_argument:
            case errc::ragged_rows:
            case errc::negative_entry:
            case errc::non_integer_entry:
            case errc::all_zero_table:
            case errc::sum_out_of_tolerance: return true;
            default: return false;
        }
    }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw error(code, message);
}

} // namespace tabmeas
