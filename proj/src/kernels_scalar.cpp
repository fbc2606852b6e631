#include "tabmeas/kernels.hpp"

#include <cmath>

// ---------------------------------------------------------------------------
// scalar reference backend
//
// Straight loops, no tricks. This is the semantic definition of every kernel;
// the AVX2 backend must agree with it (bit-exactly for `smooth`, to rounding
// for the reductions).
// ---------------------------------------------------------------------------

namespace tabmeas::kernels {
namespace {

double sum_(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double weighted_dot_(const double* w, const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
    return acc;
}

void smooth_(const double* x, double add, double denom, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] + add) / denom;
}

double sum_sq_over_(const double* p, const double* q, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (q[i] > 0.0) acc += p[i] * p[i] / q[i];
    }
    return acc;
}

void matvec_(const double* h, const double* x, double* out, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
        const double* row = h + i * k;
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

double quad_form_(const double* h, const double* x, std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double* row = h + i * k;
        double rowdot = 0.0;
        for (std::size_t j = 0; j < k; ++j) rowdot += row[j] * x[j];
        acc += x[i] * rowdot;
    }
    return acc;
}

double diag_weighted_(const double* h, const double* w, std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += h[i * k + i] * w[i];
    return acc;
}

double max_abs_diff_(const double* x, const double* y, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::fabs(x[i] - y[i]));
    return best;
}

} // namespace

const ops& scalar_ops() {
    static const ops table = {
        sum_,     dot_,       weighted_dot_, smooth_,        sum_sq_over_,
        matvec_,  quad_form_, diag_weighted_, max_abs_diff_,
    };
    return table;
}

} // namespace tabmeas::kernels
