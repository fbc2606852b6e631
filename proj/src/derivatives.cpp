#include "tabmeas/derivatives.hpp"

#include "tabmeas/error.hpp"

#include <cmath>
#include <vector>

namespace tabmeas {

namespace {

constexpr double BOUNDARY_TOL = 1e-12;

void check_interior(const MeasureSpec& spec, const double* p, Dims dims) {
    const std::size_t r = dims.r, c = dims.c;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            if (spec.kind == MeasureKind::symmetry_phi && i == j) continue;
            if (p[i * c + j] <= BOUNDARY_TOL)
                raise(errc::boundary_point,
                      "derivatives undefined: a required cell is at the boundary");
        }
    }
}

// Thread-local workspace for the association-coefficient derivatives.
struct cramer_ws {
    std::vector<double> a, b;     // marginals
    std::vector<double> A, B;     // a^-lam, b^-lam
    std::vector<double> Aa, Bb;   // A/a, B/b
    std::vector<double> R, C;     // partial power sums per row / column
    std::vector<double> Pl;       // p^lam per cell
    std::vector<double> gN, gD;   // numerator / denominator gradients
    std::vector<double> HN, HD;   // numerator / denominator Hessians
};

cramer_ws& tls_cramer_ws() {
    static thread_local cramer_ws w;
    return w;
}

// Assembles the bundle for a quotient f = N/D given parts and their
// derivatives. HD enters only through its diagonal-block structure; it is
// passed as a full matrix for uniformity.
void quotient_assemble(double N, double D, const std::vector<double>& gN,
                       const std::vector<double>& gD, const std::vector<double>& HN,
                       const std::vector<double>& HD, std::size_t k, DerivativeBundle& out) {
    out.value = N / D;
    out.gradient.resize(k);
    out.hessian.resize(k * k);
    const double nd2 = N / (D * D);
    for (std::size_t x = 0; x < k; ++x) out.gradient[x] = gN[x] / D - nd2 * gD[x];
    const double invD = 1.0 / D;
    const double invD2 = 1.0 / (D * D);
    const double two_n_d3 = 2.0 * N / (D * D * D);
    for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t y = 0; y < k; ++y) {
            out.hessian[x * k + y] = HN[x * k + y] * invD -
                                     (gN[x] * gD[y] + gD[x] * gN[y]) * invD2 -
                                     nd2 * HD[x * k + y] + two_n_d3 * gD[x] * gD[y];
        }
    }
}

void cramer_derivs(const double* P, Dims dims, double lam, DerivativeBundle& out) {
    const std::size_t r = dims.r, c = dims.c, k = dims.cells();
    cramer_ws& w = tls_cramer_ws();
    w.a.assign(r, 0.0);
    w.b.assign(c, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            w.a[i] += P[i * c + j];
            w.b[j] += P[i * c + j];
        }
    w.gN.resize(k);
    w.gD.resize(k);
    w.HN.assign(k * k, 0.0);
    w.HD.assign(k * k, 0.0);

    double N, D;
    if (lam == 0.0) {
        // Kullback–Leibler numerator, entropy denominator.
        N = 0.0;
        D = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            D -= w.a[i] * std::log(w.a[i]);
            for (std::size_t j = 0; j < c; ++j) {
                const double p = P[i * c + j];
                const double ratio = std::log(p / (w.a[i] * w.b[j]));
                N += p * ratio;
                w.gN[i * c + j] = ratio - 1.0;
                w.gD[i * c + j] = -(std::log(w.a[i]) + 1.0);
            }
        }
        for (std::size_t kk = 0; kk < r; ++kk) {
            for (std::size_t ll = 0; ll < c; ++ll) {
                const std::size_t x = kk * c + ll;
                for (std::size_t mm = 0; mm < r; ++mm) {
                    for (std::size_t nn = 0; nn < c; ++nn) {
                        const std::size_t y = mm * c + nn;
                        double v = 0.0;
                        if (kk == mm && ll == nn) v += 1.0 / P[x];
                        if (kk == mm) v -= 1.0 / w.a[kk];
                        if (ll == nn) v -= 1.0 / w.b[ll];
                        w.HN[x * k + y] = v;
                        if (kk == mm) w.HD[x * k + y] = -1.0 / w.a[kk];
                    }
                }
            }
        }
    } else {
        const double cl = 1.0 / (lam * (lam + 1.0));
        w.A.resize(r);
        w.Aa.resize(r);
        w.B.resize(c);
        w.Bb.resize(c);
        w.Pl.resize(k);
        w.R.assign(r, 0.0);
        w.C.assign(c, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            w.A[i] = std::pow(w.a[i], -lam);
            w.Aa[i] = w.A[i] / w.a[i];
        }
        for (std::size_t j = 0; j < c; ++j) {
            w.B[j] = std::pow(w.b[j], -lam);
            w.Bb[j] = w.B[j] / w.b[j];
        }
        double T = 0.0, mass = 0.0, Dsum = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            Dsum += w.a[i] * w.A[i]; // a^(1-lam)
            for (std::size_t j = 0; j < c; ++j) {
                const double p = P[i * c + j];
                const double pl = std::pow(p, lam);
                w.Pl[i * c + j] = pl;
                const double p1l = p * pl;
                w.R[i] += p1l * w.B[j];
                w.C[j] += p1l * w.A[i];
                T += p1l * w.A[i] * w.B[j];
                mass += p;
            }
        }
        N = cl * (T - mass);
        D = cl * (Dsum - 1.0);
        for (std::size_t kk = 0; kk < r; ++kk) {
            for (std::size_t ll = 0; ll < c; ++ll) {
                const std::size_t x = kk * c + ll;
                const double gT = (1.0 + lam) * w.Pl[x] * w.A[kk] * w.B[ll] -
                                  lam * w.Aa[kk] * w.R[kk] - lam * w.Bb[ll] * w.C[ll];
                w.gN[x] = cl * (gT - 1.0);
                w.gD[x] = cl * (1.0 - lam) * w.A[kk];
            }
        }
        const double l1l = lam * (1.0 + lam);
        const double l2 = lam * lam;
        for (std::size_t kk = 0; kk < r; ++kk) {
            for (std::size_t ll = 0; ll < c; ++ll) {
                const std::size_t x = kk * c + ll;
                for (std::size_t mm = 0; mm < r; ++mm) {
                    for (std::size_t nn = 0; nn < c; ++nn) {
                        const std::size_t y = mm * c + nn;
                        double h = 0.0;
                        if (kk == mm && ll == nn)
                            h += l1l * (w.Pl[x] / P[x]) * w.A[kk] * w.B[ll];
                        if (kk == mm)
                            h += -l1l * w.Pl[x] * w.Aa[kk] * w.B[ll] +
                                 l1l * (w.Aa[kk] / w.a[kk]) * w.R[kk] -
                                 l1l * w.Aa[kk] * w.Pl[kk * c + nn] * w.B[nn];
                        if (ll == nn)
                            h += -l1l * w.Pl[x] * w.A[kk] * w.Bb[ll] +
                                 l1l * (w.Bb[ll] / w.b[ll]) * w.C[ll] -
                                 l1l * w.Bb[ll] * w.Pl[mm * c + ll] * w.A[mm];
                        h += l2 * (w.Aa[kk] * P[kk * c + nn] * w.Pl[kk * c + nn] * w.Bb[nn] +
                                   w.Bb[ll] * P[mm * c + ll] * w.Pl[mm * c + ll] * w.Aa[mm]);
                        w.HN[x * k + y] = cl * h;
                        if (kk == mm) w.HD[x * k + y] = -cl * lam * (1.0 - lam) * w.Aa[kk];
                    }
                }
            }
        }
    }
    quotient_assemble(N, D, w.gN, w.gD, w.HN, w.HD, k, out);
}

// Derivatives of one pair contribution w(u, v) = (u+v) * phi(u/(u+v)).
struct pair_d {
    double w, wu, wuu, wuv;
};

pair_d phi_pair(double u, double v, double lam) {
    const double t = u + v;
    const double x = u / t;
    const double y = v / t;
    pair_d d;
    if (lam == 0.0) {
        const double ln2 = std::log(2.0);
        d.w = t + (u * std::log(x) + v * std::log(y)) / ln2;
        d.wu = 1.0 + std::log(x) / ln2;
        d.wuu = (1.0 / u - 1.0 / t) / ln2;
        d.wuv = -1.0 / (t * ln2);
        return d;
    }
    const double C = std::exp2(lam) / std::expm1(lam * std::log(2.0));
    const double xl = std::pow(x, lam);
    const double yl = std::pow(y, lam);
    const double xl1 = x * xl;
    const double yl1 = y * yl;
    d.w = t + C * (u * std::expm1(lam * std::log(x)) + v * std::expm1(lam * std::log(y)));
    d.wu = (1.0 - C) + C * ((lam + 1.0) * xl - lam * (xl1 + yl1));
    const double scale = C * lam * (lam + 1.0) / t;
    d.wuu = scale * (xl / x - 2.0 * xl + xl1 + yl1);
    d.wuv = scale * (-xl - yl + xl1 + yl1);
    return d;
}

void phi_derivs(const double* P, Dims dims, double lam, DerivativeBundle& out) {
    const std::size_t r = dims.r, c = dims.c, k = dims.cells();
    double delta = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (i != j) delta += P[i * c + j];

    static thread_local std::vector<double> gW;
    static thread_local std::vector<double> HW;
    gW.assign(k, 0.0);
    HW.assign(k * k, 0.0);
    double W = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < c; ++j) {
            const double u = P[i * c + j];
            const double v = P[j * c + i];
            const pair_d duv = phi_pair(u, v, lam);
            const pair_d dvu = phi_pair(v, u, lam);
            W += duv.w;
            const std::size_t xu = i * c + j;
            const std::size_t xv = j * c + i;
            gW[xu] = duv.wu;
            gW[xv] = dvu.wu;
            HW[xu * k + xu] = duv.wuu;
            HW[xv * k + xv] = dvu.wuu;
            HW[xu * k + xv] = duv.wuv;
            HW[xv * k + xu] = duv.wuv;
        }
    }

    out.value = W / delta;
    out.gradient.resize(k);
    out.hessian.resize(k * k);
    const double wd2 = W / (delta * delta);
    const double invd = 1.0 / delta;
    const double invd2 = invd * invd;
    const double two_w_d3 = 2.0 * W * invd2 * invd;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const std::size_t x = i * c + j;
            const double ind_x = (i == j) ? 0.0 : 1.0;
            out.gradient[x] = gW[x] * invd - wd2 * ind_x;
        }
    }
    for (std::size_t x = 0; x < k; ++x) {
        const double ind_x = (x / c == x % c) ? 0.0 : 1.0;
        for (std::size_t y = 0; y < k; ++y) {
            const double ind_y = (y / c == y % c) ? 0.0 : 1.0;
            out.hessian[x * k + y] = HW[x * k + y] * invd -
                                     (gW[x] * ind_y + ind_x * gW[y]) * invd2 +
                                     two_w_d3 * ind_x * ind_y;
        }
    }
}

} // namespace

void derivatives_raw(const MeasureSpec& spec, const double* p, Dims dims,
                     DerivativeBundle& out) {
    validate_spec(spec, dims);
    check_interior(spec, p, dims);
    switch (spec.kind) {
        case MeasureKind::cramer_v: cramer_derivs(p, dims, spec.lambda, out); return;
        case MeasureKind::symmetry_phi: phi_derivs(p, dims, spec.lambda, out); return;
    }
    raise(errc::bad_argument, "unknown measure kind");
}

DerivativeBundle derivatives(const MeasureSpec& spec, const ProbTable& p) {
    DerivativeBundle out;
    derivatives_raw(spec, p.probs().data(), p.dims(), out);
    return out;
}

// ---- finite-difference oracle ----------------------------------------------

std::vector<double> fd_gradient(const RawFn& f, const double* p, Dims dims, double h) {
    const std::size_t k = dims.cells();
    std::vector<double> buf(p, p + k);
    std::vector<double> g(k);
    for (std::size_t x = 0; x < k; ++x) {
        const double orig = buf[x];
        buf[x] = orig + h;
        const double fp = f(buf.data(), dims);
        buf[x] = orig - h;
        const double fm = f(buf.data(), dims);
        buf[x] = orig;
        g[x] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::vector<double> fd_hessian(const RawFn& f, const double* p, Dims dims, double h) {
    const std::size_t k = dims.cells();
    std::vector<double> buf(p, p + k);
    std::vector<double> H(k * k);
    const double f0 = f(buf.data(), dims);
    for (std::size_t a = 0; a < k; ++a) {
        const double oa = buf[a];
        buf[a] = oa + h;
        const double fpa = f(buf.data(), dims);
        buf[a] = oa - h;
        const double fma = f(buf.data(), dims);
        buf[a] = oa;
        H[a * k + a] = (fpa - 2.0 * f0 + fma) / (h * h);
        for (std::size_t b = a + 1; b < k; ++b) {
            const double ob = buf[b];
            buf[a] = oa + h;
            buf[b] = ob + h;
            const double fpp = f(buf.data(), dims);
            buf[b] = ob - h;
            const double fpm = f(buf.data(), dims);
            buf[a] = oa - h;
            buf[b] = ob + h;
            const double fmp = f(buf.data(), dims);
            buf[b] = ob - h;
            const double fmm = f(buf.data(), dims);
            buf[a] = oa;
            buf[b] = ob;
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            H[a * k + b] = v;
            H[b * k + a] = v;
        }
    }
    return H;
}

std::vector<double> fd_gradient(const MeasureSpec& spec, const ProbTable& p, double h) {
    RawFn f = [&spec](const double* q, Dims d) { return measure_value_raw(spec, q, d); };
    return fd_gradient(f, p.probs().data(), p.dims(), h);
}

std::vector<double> fd_hessian(const MeasureSpec& spec, const ProbTable& p, double h) {
    RawFn f = [&spec](const double* q, Dims d) { return measure_value_raw(spec, q, d); };
    return fd_hessian(f, p.probs().data(), p.dims(), h);
}

} // namespace tabmeas
