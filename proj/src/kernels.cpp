#include "tabmeas/kernels.hpp"

#include "tabmeas/error.hpp"

#include <atomic>

namespace tabmeas::kernels {

// Defined in kernels_avx2.cpp; nullptr when that TU was built without AVX2.
const ops* avx2_table();

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const ops* detect() {
    if (const ops* t = avx2_table(); t != nullptr && cpu_has_avx2_fma()) return t;
    return &scalar_ops();
}

std::atomic<const ops*> current{nullptr};

const ops& active() {
    const ops* t = current.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = detect();
        current.store(t, std::memory_order_release);
    }
    return *t;
}

} // namespace

const ops* avx2_ops() {
    const ops* t = avx2_table();
    return (t != nullptr && cpu_has_avx2_fma()) ? t : nullptr;
}

backend active_backend() {
    return &active() == avx2_table() ? backend::avx2 : backend::scalar;
}

const char* backend_name(backend b) {
    switch (b) {
        case backend::scalar: return "scalar";
        case backend::avx2: return "avx2";
    }
    return "unknown";
}

void force_backend(backend b) {
    if (b == backend::avx2) {
        const ops* t = avx2_ops();
        if (t == nullptr)
            raise(errc::bad_argument, "avx2 backend is not available on this build or CPU");
        current.store(t, std::memory_order_release);
        return;
    }
    current.store(&scalar_ops(), std::memory_order_release);
}

void reset_backend() { current.store(detect(), std::memory_order_release); }

double sum(const double* x, std::size_t n) { return active().sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
    return active().weighted_dot(w, x, y, n);
}

void smooth(const double* x, double add, double denom, double* out, std::size_t n) {
    active().smooth(x, add, denom, out, n);
}

double sum_sq_over(const double* p, const double* q, std::size_t n) {
    return active().sum_sq_over(p, q, n);
}

void matvec(const double* h, const double* x, double* out, std::size_t k) {
    active().matvec(h, x, out, k);
}

double quad_form(const double* h, const double* x, std::size_t k) {
    return active().quad_form(h, x, k);
}

double diag_weighted(const double* h, const double* w, std::size_t k) {
    return active().diag_weighted(h, w, k);
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
    return active().max_abs_diff(x, y, n);
}

} // namespace tabmeas::kernels
