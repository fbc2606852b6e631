#pragma once

#include "tabmeas/derivatives.hpp"
#include "tabmeas/measures.hpp"
#include "tabmeas/table.hpp"

// ---------------------------------------------------------------------------
// asymptotic MSE coefficients and the optimal smoothing parameter
//
// For an estimator that plugs the Dirichlet posterior mean into a smooth
// measure f, the leading alpha-dependent part of n^2 * MSE is the quadratic
//
//     a1 * alpha^2 - 2 * a2 * alpha,
//
// with, writing g and H for the gradient and Hessian of f at p,
// v = rc*p - 1, and Sigma = diag(p) - p p^T:
//
//     a1 = (g^T v)^2
//     a2 = (1/2)(v^T g) tr(H Sigma) + rc * g^T Sigma g + v^T H Sigma g.
//
// When a1 > 0 the quadratic is minimized at alpha* = a2 / a1. The
// data-driven rule plugs the observed table into the same expressions and
// clamps the ratio to [0, alpha_max].
// ---------------------------------------------------------------------------

namespace tabmeas {

struct MseCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    // clamp(a2/a1, 0, alpha_max); 0 when degenerate.
    double alpha_star = 0.0;
    // True when a1 <= 1e-12 (no interior minimizer; e.g. p exactly uniform).
    bool degenerate = false;
};

// Coefficients from an existing derivative bundle at the point p. This
// engine-level entry exists so tests can feed shifted or hand-built bundles.
MseCoefficients mse_coefficients(const DerivativeBundle& d, const double* p, Dims dims,
                                 double alpha_max);

// Coefficients of the measure at p. Raises boundary_point via derivatives
// when a required cell is zero.
MseCoefficients mse_coefficients(const MeasureSpec& spec, const ProbTable& p,
                                 double alpha_max);
MseCoefficients mse_coefficients(const MeasureSpec& spec, const ProbTable& p);

struct OptimalAlphaResult {
    double alpha = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    bool clamped = false;    // ratio fell outside [0, alpha_max]
    bool degenerate = false; // a1 vanished; alpha fell back to 0
};

// Default cap on the data-driven alpha: n/(rc), i.e. prior pseudo-counts
// never exceed the observed count.
double default_alpha_max(const CountTable& t);

// Data-driven smoothing parameter for the measure on the observed table:
// the a2/a1 ratio evaluated at the sample proportions, clamped to
// [0, alpha_max]. Total function: a degenerate a1 falls back to alpha = 0
// rather than erroring.
//
// When a cell the measure needs is zero in the sample proportions the
// coefficients are undefined there; the evaluation point then moves to
// posterior_mean(t, 1/(rc)) — a single pseudo-observation spread over the
// table — which is the smallest smoothing that keeps the point interior
// without drowning the data.
OptimalAlphaResult optimal_alpha(const MeasureSpec& spec, const CountTable& t,
                                 double alpha_max);
OptimalAlphaResult optimal_alpha(const MeasureSpec& spec, const CountTable& t);

} // namespace tabmeas
