#include "tabmeas/measures.hpp"

#include "tabmeas/error.hpp"
#include "tabmeas/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tabmeas {

namespace {

// Scratch buffers for marginals and the independence table; thread-local so
// simulation replications can evaluate measures concurrently.
struct scratch {
    std::vector<double> row;
    std::vector<double> col;
    std::vector<double> indep;
};

scratch& tls_scratch() {
    static thread_local scratch s;
    return s;
}

// Termwise power divergence with the 0*log(0) = 0 convention. `total_p` is
// sum(p), needed by the lambda > 0 branch. Raises when p > 0 meets q = 0.
double power_div_terms(const double* p, const double* q, std::size_t k, double lambda) {
    if (lambda == 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (p[i] <= 0.0) continue;
            if (q[i] <= 0.0)
                raise(errc::divergence_undefined, "divergence undefined: p > 0 where q = 0");
            acc += p[i] * std::log(p[i] / q[i]);
        }
        return acc;
    }
    const double cl = 1.0 / (lambda * (lambda + 1.0));
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0)
            raise(errc::divergence_undefined, "divergence undefined: p > 0 where q = 0");
        // p * ((p/q)^lambda - 1), written through expm1 for stability when
        // p/q is near 1.
        acc += p[i] * std::expm1(lambda * std::log(p[i] / q[i]));
    }
    return cl * acc;
}

// Normalizer of the association coefficient: for lambda > 0,
// (1/(lambda(lambda+1))) (sum_i a_i^(1-lambda) - 1) over positive row
// marginals; for lambda = 0 the entropy limit -sum a_i log a_i. Rows with
// zero marginal contribute 0 (continuity convention).
double cramer_normalizer(const double* row, std::size_t r, double lambda) {
    if (lambda == 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            if (row[i] > 0.0) acc -= row[i] * std::log(row[i]);
        }
        return acc;
    }
    const double cl = 1.0 / (lambda * (lambda + 1.0));
    // a^(1-lambda) = a + a*expm1(-lambda*log(a)); splitting out the linear
    // part keeps the sum stable for lambda near 0.
    double bent = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        if (row[i] <= 0.0) continue;
        bent += row[i] * std::expm1(-lambda * std::log(row[i]));
        mass += row[i];
    }
    return cl * (bent + (mass - 1.0));
}

double cramer_v_raw(const double* p, Dims dims, double lambda) {
    const std::size_t r = dims.r, c = dims.c, k = dims.cells();
    scratch& s = tls_scratch();
    s.row.assign(r, 0.0);
    s.col.assign(c, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double v = p[i * c + j];
            s.row[i] += v;
            s.col[j] += v;
        }
    }

    const double denom = cramer_normalizer(s.row.data(), r, lambda);
    if (denom <= 0.0)
        raise(errc::degenerate_marginals,
              "association coefficient undefined: fewer than two nonzero row marginals");

    s.indep.resize(k);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) s.indep[i * c + j] = s.row[i] * s.col[j];

    double numer;
    if (lambda == 1.0) {
        // (1/2)(sum p^2/(a b) - sum p); cells with zero marginals have p = 0
        // and are skipped by the kernel.
        numer = 0.5 * (kernels::sum_sq_over(p, s.indep.data(), k) - kernels::sum(p, k));
    } else {
        numer = power_div_terms(p, s.indep.data(), k, lambda);
    }
    return numer / denom;
}

// Contribution of one off-diagonal pair (u, v): t * phi where t = u + v and
// phi is the pair's divergence from a 50/50 split. Derivation folds the
// normalizing constant through expm1(lambda*log 2) for stability near
// lambda = 0.
double pair_w(double u, double v, double lambda) {
    const double t = u + v;
    if (lambda == 0.0) {
        double acc = 0.0;
        if (u > 0.0) acc += u * std::log(u / t);
        if (v > 0.0) acc += v * std::log(v / t);
        return t + acc / std::log(2.0);
    }
    const double C = std::exp2(lambda) / std::expm1(lambda * std::log(2.0));
    double acc = 0.0;
    if (u > 0.0) acc += u * std::expm1(lambda * std::log(u / t));
    if (v > 0.0) acc += v * std::expm1(lambda * std::log(v / t));
    return t + C * acc;
}

double symmetry_phi_raw(const double* p, Dims dims, double lambda) {
    const std::size_t r = dims.r, c = dims.c;
    double delta = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (i != j) delta += p[i * c + j];
    if (delta <= 0.0)
        raise(errc::all_diagonal, "symmetry measure undefined: no off-diagonal mass");

    double w_total = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < c; ++j) {
            const double u = p[i * c + j];
            const double v = p[j * c + i];
            if (u + v <= 0.0) continue; // zero-weight pair
            w_total += pair_w(u, v, lambda);
        }
    }
    return w_total / delta;
}

} // namespace

void validate_spec(const MeasureSpec& spec, Dims dims) {
    validate_dims(dims);
    switch (spec.kind) {
        case MeasureKind::cramer_v:
            if (!(spec.lambda >= 0.0))
                raise(errc::bad_argument, "association coefficient requires lambda >= 0");
            return;
        case MeasureKind::symmetry_phi:
            if (!(spec.lambda > -1.0))
                raise(errc::bad_argument, "symmetry measure requires lambda > -1");
            if (dims.r != dims.c)
                raise(errc::not_square, "symmetry measure requires a square table");
            return;
    }
    raise(errc::bad_argument, "unknown measure kind");
}

const char* measure_name(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::cramer_v: return "cramer-v";
        case MeasureKind::symmetry_phi: return "symmetry-phi";
    }
    return "unknown";
}

MeasureKind parse_measure(const std::string& text) {
    if (text == "cramer-v") return MeasureKind::cramer_v;
    if (text == "symmetry-phi") return MeasureKind::symmetry_phi;
    raise(errc::bad_argument,
          "unknown measure '" + text + "' (expected cramer-v or symmetry-phi)");
}

double power_divergence(const ProbTable& p, const ProbTable& q, double lambda) {
    if (!(p.dims() == q.dims()))
        raise(errc::bad_argument, "power divergence requires matching dimensions");
    if (!(lambda >= 0.0)) raise(errc::bad_argument, "power divergence requires lambda >= 0");
    return power_div_terms(p.probs().data(), q.probs().data(), p.dims().cells(), lambda);
}

double cramer_v(const ProbTable& p, double lambda) {
    validate_spec({MeasureKind::cramer_v, lambda}, p.dims());
    const double v = cramer_v_raw(p.probs().data(), p.dims(), lambda);
    return std::clamp(v, 0.0, 1.0);
}

double symmetry_phi(const ProbTable& p, double lambda) {
    validate_spec({MeasureKind::symmetry_phi, lambda}, p.dims());
    const double v = symmetry_phi_raw(p.probs().data(), p.dims(), lambda);
    return std::clamp(v, 0.0, 1.0);
}

double measure_value(const MeasureSpec& spec, const ProbTable& p) {
    switch (spec.kind) {
        case MeasureKind::cramer_v: return cramer_v(p, spec.lambda);
        case MeasureKind::symmetry_phi: return symmetry_phi(p, spec.lambda);
    }
    raise(errc::bad_argument, "unknown measure kind");
}

double measure_value_raw(const MeasureSpec& spec, const double* p, Dims dims) {
    validate_spec(spec, dims);
    switch (spec.kind) {
        case MeasureKind::cramer_v: return cramer_v_raw(p, dims, spec.lambda);
        case MeasureKind::symmetry_phi: return symmetry_phi_raw(p, dims, spec.lambda);
    }
    raise(errc::bad_argument, "unknown measure kind");
}

} // namespace tabmeas
