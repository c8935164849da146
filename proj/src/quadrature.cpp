#include "kplab/quadrature.hpp"

#include "kplab/errors.hpp"
#include "kplab/kernels.hpp"
#include "kplab/spectral.hpp"

#include <cmath>
#include <numbers>

namespace kplab {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

std::vector<double> x_padded_values(const Field& f, int factor) {
    const Grid& g = f.grid();
    const int nxp = factor * g.nx();
    std::vector<cplx> s = resize_x(f.spectral(), g, nxp);
    std::vector<double> v(std::size_t(nxp) * g.ny());
    fft::plan2d(nxp, g.ny())->inverse(s.data(), v.data());
    kernels::scale(v, 1.0 / double(g.size()));
    return v;
}

XProfile profile_from_rows(const Grid& g, std::vector<double> rows) {
    const int n = 2 * g.nx();
    std::vector<cplx> c(g.nx() + 1);
    fft::plan1d(n)->forward(rows.data(), c.data());
    for (int m = 0; m <= g.nx(); ++m) c[m] *= (m % 2 ? -1.0 : 1.0) / n;  // phase to x = 0
    return XProfile{g, std::move(c)};
}

// Accumulates Re(c_m z_m) with the full-spectrum multiplicities.
template <class F>
double spectral_sum(const XProfile& p, F&& term) {
    const int nx = p.grid.nx();
    double s = std::real(term(0, p.c[0]));
    for (int m = 1; m < nx; ++m) s += 2 * std::real(term(m, p.c[m]));
    return s + std::real(term(nx, p.c[nx]));
}

} // namespace

XProfile& XProfile::operator+=(const XProfile& o) {
    if (c.empty()) return *this = o;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}

XProfile y_profile(const Field& a) {
    const Grid& g = a.grid();
    const std::vector<double> v = x_padded_values(a, 2);
    std::vector<double> rows(2 * g.nx());
    kernels::row_sum_products(v, v, 2 * g.nx(), g.ny(), rows);
    kernels::scale(rows, g.dy());
    return profile_from_rows(g, std::move(rows));
}

XProfile y_profile(const Field& a, const Field& b) {
    const Grid& g = a.grid();
    if (!(g == b.grid())) throw InvalidGrid("profile of fields on different grids");
    const std::vector<double> va = x_padded_values(a, 2), vb = x_padded_values(b, 2);
    std::vector<double> rows(2 * g.nx());
    kernels::row_sum_products(va, vb, 2 * g.nx(), g.ny(), rows);
    kernels::scale(rows, g.dy());
    return profile_from_rows(g, std::move(rows));
}

double box_integral(const XProfile& p) { return p.grid.lx() * p.c[0].real(); }

double window_integral(const XProfile& p, double a) {
    const Grid& g = p.grid;
    if (a <= g.x_min()) return box_integral(p);
    if (a >= g.x_max()) return 0.0;
    const double k0 = two_pi / g.lx();
    return spectral_sum(p, [&](int m, cplx c) -> cplx {
        if (m == 0) return c * (g.x_max() - a);
        const double k = k0 * m;
        const cplx e_max = (m % 2) ? -1.0 : 1.0;
        return c * (e_max - std::exp(cplx(0, k * a))) / cplx(0, k);
    });
}

std::vector<double> profile_samples(const XProfile& p, int refine) {
    const int nx = p.grid.nx();
    const int n = refine * 2 * nx;
    std::vector<cplx> c(n / 2 + 1, 0.0);
    for (int m = 0; m <= nx; ++m) c[m] = p.c[m] * (m % 2 ? -1.0 : 1.0);  // phase back to x_min
    if (refine > 1) c[nx] *= 0.5;
    std::vector<double> out(n);
    fft::plan1d(n)->inverse(c.data(), out.data());
    return out;
}

WeightedValue weighted_integral(const XProfile& p, const WeightSpec& w, int d, double t, QuadRoute route,
                                int refine) {
    return weighted_integral_shift(p, w, d, w.nu * t, route, refine);
}

WeightedValue weighted_integral_shift(const XProfile& p, const WeightSpec& w, int d, double shift, QuadRoute route,
                                      int refine) {
    const Grid& g = p.grid;
    WeightedValue out;
    out.wrapped = w.eps - shift < g.x_min() || w.b - shift > g.x_max();
    const bool can_exact = !out.wrapped && w.mollifier == Mollifier::polynomial;
    if (route == QuadRoute::exact && !can_exact)
        throw InvalidWeight("closed-form quadrature needs an unwrapped polynomial-bump weight");
    if (route == QuadRoute::trapezoid || !can_exact) {
        const std::vector<double> f = profile_samples(p, refine);
        const double h = g.lx() / double(f.size());
        double s = 0;
        for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * eval_weight(w, g.x_min() + i * h + shift, d);
        out.value = s * h;
        return out;
    }
    const double k0 = two_pi / g.lx();
    if (d == 0) {
        const double mean = weight_first_moment(w) - shift;
        out.value = spectral_sum(p, [&](int m, cplx c) -> cplx {
            if (m == 0) return c * (g.x_max() - mean);
            const double k = k0 * m;
            const cplx e_max = (m % 2) ? -1.0 : 1.0;
            const cplx phi = std::exp(cplx(0, -k * shift)) * weight_transform(w, k, 1);
            return c * (e_max - phi) / cplx(0, k);
        });
        return out;
    }
    out.value = spectral_sum(p, [&](int m, cplx c) -> cplx {
        const double k = k0 * m;
        return c * std::exp(cplx(0, -k * shift)) * weight_transform(w, k, d);
    });
    return out;
}

XProfile sobolev_profile(const Field& f, int n) {
    XProfile p;
    for (int a1 = 0; a1 <= n; ++a1)
        for (int a2 = 0; a1 + a2 <= n; ++a2) p += y_profile(partial_deriv(f, {a1, a2}));
    return p;
}

std::vector<double> padded_values(const Field& f, int fx, int fy) {
    const Grid& g = f.grid();
    const int nxp = fx * g.nx(), nyp = fy * g.ny();
    const std::vector<cplx> rows = resize_x(f.spectral(), g, nxp);
    const int nky = g.nky(), nkyp = nyp / 2 + 1;
    std::vector<cplx> s(std::size_t(nxp) * nkyp, 0.0);
    for (int j = 0; j < nxp; ++j)
        for (int k = 0; k < nky; ++k) {
            cplx v = rows[std::size_t(j) * nky + k];
            if (fy > 1 && k == g.ny() / 2) v *= 0.5;
            s[std::size_t(j) * nkyp + k] = v;
        }
    std::vector<double> out(std::size_t(nxp) * nyp);
    fft::plan2d(nxp, nyp)->inverse(s.data(), out.data());
    kernels::scale(out, 1.0 / double(g.size()));
    return out;
}

} // namespace kplab
