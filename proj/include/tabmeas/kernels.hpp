#pragma once

#include <cstddef>

// ---------------------------------------------------------------------------
// numeric kernels
//
// Dense double-precision primitives used by the measure, calculus, and
// simulation layers. Two interchangeable backends exist: a scalar reference
// implementation and an AVX2+FMA implementation compiled in its own
// translation unit. The active backend is picked once at startup from CPU
// capabilities; tests can pin either backend via force_backend to check
// agreement.
//
// Equivalence contract: `smooth` (elementwise (x + add) / denom) is
// bit-identical across backends because both use one IEEE division per
// element. Reductions (sum/dot/...) may differ by reassociation-level
// rounding only; the test suite bounds the relative gap at 1e-13.
// ---------------------------------------------------------------------------

namespace tabmeas::kernels {

enum class backend { scalar, avx2 };

// Table of operations one backend provides.
struct ops {
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i w[i] * x[i] * y[i]
    double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
    // out[i] = (x[i] + add) / denom
    void (*smooth)(const double* x, double add, double denom, double* out, std::size_t n);
    // sum over i with q[i] > 0 of p[i]^2 / q[i] (p[i] = 0 contributes 0 there too)
    double (*sum_sq_over)(const double* p, const double* q, std::size_t n);
    // out = H x for row-major k-by-k H
    void (*matvec)(const double* h, const double* x, double* out, std::size_t k);
    // x^T H x for row-major k-by-k H
    double (*quad_form)(const double* h, const double* x, std::size_t k);
    // sum_i H[i][i] * w[i]
    double (*diag_weighted)(const double* h, const double* w, std::size_t k);
    // max_i |x[i] - y[i]|
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
};

const ops& scalar_ops();
// Null when this build or this CPU cannot run AVX2+FMA code.
const ops* avx2_ops();

// Backend currently in effect (auto-detected unless forced).
backend active_backend();
const char* backend_name(backend b);

// Test hook: pin a backend. Forcing avx2 on a CPU without it is an error.
void force_backend(backend b);
// Test hook: return to auto-detection.
void reset_backend();

// ---- dispatching wrappers (the API the rest of the library calls) ----
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double weighted_dot(const double* w, const double* x, const double* y, std::size_t n);
void smooth(const double* x, double add, double denom, double* out, std::size_t n);
double sum_sq_over(const double* p, const double* q, std::size_t n);
void matvec(const double* h, const double* x, double* out, std::size_t k);
double quad_form(const double* h, const double* x, std::size_t k);
double diag_weighted(const double* h, const double* w, std::size_t k);
double max_abs_diff(const double* x, const double* y, std::size_t n);

} // namespace tabmeas::kernels
