#include "kplab/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace kplab::kernels::reference {

// Serial twins of the OpenMP kernels; keep the arithmetic identical.

using idx = std::ptrdiff_t;

void scale(std::span<double> v, double s) {
    const idx n = idx(v.size());
    for (idx i = 0; i < n; ++i) v[i] *= s;
}

void scale_separable(std::span<const cplx> in, std::span<cplx> out, std::span<const cplx> mx,
                     std::span<const cplx> my) {
    const idx rows = idx(mx.size()), cols = idx(my.size());
    for (idx j = 0; j < rows; ++j) {
        const cplx a = mx[j];
        for (idx k = 0; k < cols; ++k) out[j * cols + k] = in[j * cols + k] * a * my[k];
    }
}

void row_sum_products(std::span<const double> a, std::span<const double> b, int rows, int cols,
                      std::span<double> out) {
    for (idx r = 0; r < rows; ++r) {
        double s = 0;
        const double* pa = a.data() + r * cols;
        const double* pb = b.data() + r * cols;
        for (idx c = 0; c < cols; ++c) s += pa[c] * pb[c];
        out[r] = s;
    }
}

double max_abs(std::span<const double> v) {
    const idx n = idx(v.size());
    double m = 0;
    bool finite = true;
    for (idx i = 0; i < n; ++i) {
        const double a = std::abs(v[i]);
        finite = finite && std::isfinite(a);
        m = a > m ? a : m;
    }
    return finite ? m : INFINITY;
}

void power_flux(std::span<const double> u, std::span<double> out, int p) {
    const idx n = idx(u.size());
    const double inv = 1.0 / (p + 1);
    for (idx i = 0; i < n; ++i) {
        double t = u[i];
        for (int q = 0; q < p; ++q) t *= u[i];
        out[i] = t * inv;
    }
}

void multiply(std::span<const cplx> a, std::span<const cplx> m, std::span<cplx> out) {
    const idx n = idx(a.size());
    for (idx i = 0; i < n; ++i) out[i] = a[i] * m[i];
}

void absorb(std::span<const double> u, std::span<const double> sigma, int rows, int cols,
            std::span<double> out) {
    double total = 0;
    for (idx r = 0; r < rows; ++r) total += sigma[r];
    if (total == 0.0) return;
    std::vector<double> m(cols, 0.0);
    for (idx c = 0; c < cols; ++c) {
        double acc = 0;
        for (idx r = 0; r < rows; ++r) acc += sigma[r] * u[r * cols + c];
        m[c] = acc / total;
    }
    for (idx r = 0; r < rows; ++r) {
        const double s = sigma[r];
        if (s == 0.0) continue;
        for (idx c = 0; c < cols; ++c) out[r * cols + c] -= s * (u[r * cols + c] - m[c]);
    }
}

void if_stage(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> k, double c,
              std::span<cplx> out) {
    const idx n = idx(u.size());
    for (idx i = 0; i < n; ++i) out[i] = e[i] * (u[i] + c * k[i]);
}

void exp_axpy(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> k, double c,
              std::span<cplx> out) {
    const idx n = idx(u.size());
    for (idx i = 0; i < n; ++i) out[i] = e[i] * u[i] + c * k[i];
}

void if_final(std::span<cplx> u, std::span<const cplx> e, std::span<const cplx> e2, std::span<const cplx> k1,
              std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4) {
    const idx n = idx(u.size());
    for (idx i = 0; i < n; ++i)
        u[i] = e2[i] * u[i] + (e2[i] * k1[i] + 2.0 * e[i] * (k2[i] + k3[i]) + k4[i]) / 6.0;
}

void etd_stage(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> q,
               std::span<const cplx> n, std::span<cplx> out) {
    const idx m = idx(u.size());
    for (idx i = 0; i < m; ++i) out[i] = e[i] * u[i] + q[i] * n[i];
}

void etd_final(std::span<cplx> u, std::span<const cplx> e, std::span<const cplx> f1, std::span<const cplx> f2,
               std::span<const cplx> f3, std::span<const cplx> nu, std::span<const cplx> na,
               std::span<const cplx> nb, std::span<const cplx> nc) {
    const idx m = idx(u.size());
    for (idx i = 0; i < m; ++i)
        u[i] = e[i] * u[i] + f1[i] * nu[i] + 2.0 * f2[i] * (na[i] + nb[i]) + f3[i] * nc[i];
}

} // namespace kplab::kernels::reference
