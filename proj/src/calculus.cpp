#include "tabmeas/calculus.hpp"

#include "tabmeas/error.hpp"
#include "tabmeas/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tabmeas {

namespace {

constexpr double DEGENERATE_TOL = 1e-12;

struct coeff_ws {
    DerivativeBundle bundle;
    std::vector<double> v;      // rc*p - 1
    std::vector<double> sg;     // Sigma g
    std::vector<double> hsg;    // H Sigma g
    std::vector<double> point;  // evaluation point for the data-driven rule
};

coeff_ws& tls_ws() {
    static thread_local coeff_ws w;
    return w;
}

// a1/a2 from a bundle, using only matrix-free products:
//   tr(H Sigma)  = sum_i H_ii p_i - p^T H p
//   g^T Sigma g  = sum_i p_i g_i^2 - (p^T g)^2
//   Sigma g      = p .* g - p (p^T g)
void coefficients(const DerivativeBundle& d, const double* p, std::size_t k, double& a1,
                  double& a2) {
    coeff_ws& w = tls_ws();
    const double* g = d.gradient.data();
    const double* H = d.hessian.data();

    w.v.resize(k);
    for (std::size_t i = 0; i < k; ++i) w.v[i] = static_cast<double>(k) * p[i] - 1.0;

    const double gv = kernels::dot(g, w.v.data(), k);
    a1 = gv * gv;

    const double pg = kernels::dot(p, g, k);
    const double tr_hs = kernels::diag_weighted(H, p, k) - kernels::quad_form(H, p, k);
    const double gsg = kernels::weighted_dot(p, g, g, k) - pg * pg;

    w.sg.resize(k);
    for (std::size_t i = 0; i < k; ++i) w.sg[i] = p[i] * g[i] - p[i] * pg;
    w.hsg.resize(k);
    kernels::matvec(H, w.sg.data(), w.hsg.data(), k);
    const double vhsg = kernels::dot(w.v.data(), w.hsg.data(), k);

    a2 = 0.5 * gv * tr_hs + static_cast<double>(k) * gsg + vhsg;
}

} // namespace

namespace {

void validate_alpha_max(double alpha_max) {
    if (!(alpha_max >= 0.0))
        raise(errc::bad_argument, "alpha_max must be nonnegative");
}

} // namespace

MseCoefficients mse_coefficients(const DerivativeBundle& d, const double* p, Dims dims,
                                 double alpha_max) {
    validate_alpha_max(alpha_max);
    MseCoefficients out;
    coefficients(d, p, dims.cells(), out.a1, out.a2);
    if (out.a1 <= DEGENERATE_TOL) {
        out.degenerate = true;
        out.alpha_star = 0.0;
        return out;
    }
    out.alpha_star = std::clamp(out.a2 / out.a1, 0.0, alpha_max);
    return out;
}

MseCoefficients mse_coefficients(const MeasureSpec& spec, const ProbTable& p,
                                 double alpha_max) {
    DerivativeBundle d = derivatives(spec, p);
    return mse_coefficients(d, p.probs().data(), p.dims(), alpha_max);
}

MseCoefficients mse_coefficients(const MeasureSpec& spec, const ProbTable& p) {
    return mse_coefficients(spec, p, std::numeric_limits<double>::infinity());
}

double default_alpha_max(const CountTable& t) {
    return t.n() / static_cast<double>(t.dims().cells());
}

OptimalAlphaResult optimal_alpha(const MeasureSpec& spec, const CountTable& t,
                                 double alpha_max) {
    validate_spec(spec, t.dims());
    validate_alpha_max(alpha_max);
    const Dims dims = t.dims();
    const std::size_t k = dims.cells();
    coeff_ws& w = tls_ws();

    // Evaluate at the sample proportions when they are interior for this
    // measure; otherwise back off to the one-pseudo-observation point.
    w.point.resize(k);
    kernels::smooth(t.counts().data(), 0.0, t.n(), w.point.data(), k);
    bool interior = true;
    for (std::size_t i = 0; i < dims.r && interior; ++i) {
        for (std::size_t j = 0; j < dims.c; ++j) {
            if (spec.kind == MeasureKind::symmetry_phi && i == j) continue;
            if (w.point[i * dims.c + j] <= 1e-12) {
                interior = false;
                break;
            }
        }
    }
    if (!interior) {
        const double alpha0 = 1.0 / static_cast<double>(k);
        kernels::smooth(t.counts().data(), alpha0, t.n() + 1.0, w.point.data(), k);
    }

    derivatives_raw(spec, w.point.data(), dims, w.bundle);

    OptimalAlphaResult out;
    coefficients(w.bundle, w.point.data(), k, out.a1, out.a2);
    if (out.a1 <= DEGENERATE_TOL) {
        out.degenerate = true;
        out.alpha = 0.0;
        return out;
    }
    const double ratio = out.a2 / out.a1;
    out.alpha = std::clamp(ratio, 0.0, alpha_max);
    out.clamped = (out.alpha != ratio);
    return out;
}

OptimalAlphaResult optimal_alpha(const MeasureSpec& spec, const CountTable& t) {
    return optimal_alpha(spec, t, default_alpha_max(t));
}

} // namespace tabmeas
