#include "kplab/spectral.hpp"

#include "kplab/errors.hpp"
#include "kplab/kernels.hpp"

#include <cmath>

namespace kplab {

cplx deriv_multiplier(double k, int order, bool nyquist) {
    if (order == 0) return 1.0;
    if (order < 0) {
        if (order != -1) throw NegativeXOrder("only a single antiderivative is supported");
        if (k == 0.0 || nyquist) return 0.0;
        return cplx(0.0, -1.0 / k);
    }
    if (nyquist && order % 2) return 0.0;
    // (i k)^order = i^order k^order
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ipow[order % 4] * std::pow(k, order);
}

namespace {

Field apply_multipliers(const Field& f, int ax, int ay) {
    const Grid& g = f.grid();
    std::vector<cplx> mx(g.nx()), my(g.nky());
    for (int j = 0; j < g.nx(); ++j) mx[j] = deriv_multiplier(g.xi(j), ax, g.x_nyquist(j));
    for (int k = 0; k < g.nky(); ++k) my[k] = deriv_multiplier(g.eta(k), ay, g.y_nyquist(k));
    std::vector<cplx> out(g.spectral_size());
    kernels::scale_separable(f.spectral(), out, mx, my);
    return Field::from_spectral(g, std::move(out));
}

double spectral_energy(const Grid& g, const std::vector<cplx>& fhat, int j_begin, int j_end) {
    double s = 0;
    for (int j = j_begin; j < j_end; ++j)
        for (int k = 0; k < g.nky(); ++k) s += column_weight(g, k) * std::norm(fhat[std::size_t(j) * g.nky() + k]);
    return s;
}

} // namespace

Field partial_deriv(const Field& f, MultiIndex a) {
    if (a.a1 < 0) throw NegativeXOrder("partial_deriv needs a1 >= 0; use apply_alpha for a1 = -1");
    if (a.a2 < 0) throw NegativeXOrder("negative y order");
    if (a.a1 == 0 && a.a2 == 0) return f;
    return apply_multipliers(f, a.a1, a.a2);
}

void require_zero_x_mean(const Field& f, double rel_tol) {
    const Grid& g = f.grid();
    const auto& fhat = f.spectral();
    const double mean_part = spectral_energy(g, fhat, 0, 1);
    const double total = spectral_energy(g, fhat, 0, g.nx());
    if (std::sqrt(mean_part) > rel_tol * std::sqrt(total)) {
        double m = 0;
        for (int k = 0; k < g.nky(); ++k) m = std::max(m, std::abs(fhat[k]) / double(g.size()));
        throw NonZeroXMean(m);
    }
}

Field antiderivative_x(const Field& f) {
    require_zero_x_mean(f);
    return apply_multipliers(f, -1, 0);
}

Field apply_alpha(const Field& f, MultiIndex a) {
    if (a.a1 < -1) throw NegativeXOrder("x order below -1 in " + a.str());
    if (a.a1 >= 0) return partial_deriv(f, a);
    return antiderivative_x(partial_deriv(f, {0, a.a2}));
}

bool dealias_keeps(const Grid& g, int j, int k) {
    return 3 * std::abs(g.mode_x(j)) < g.nx() && 3 * k < g.ny();
}

void dealias(std::vector<cplx>& fhat, const Grid& g) {
    for (int j = 0; j < g.nx(); ++j)
        for (int k = 0; k < g.nky(); ++k)
            if (!dealias_keeps(g, j, k)) fhat[std::size_t(j) * g.nky() + k] = 0.0;
}

Field dealias(const Field& f) {
    std::vector<cplx> s = f.spectral();
    dealias(s, f.grid());
    return Field::from_spectral(f.grid(), std::move(s));
}

void smooth_filter(std::vector<cplx>& fhat, const Grid& g, double cut_x, double cut_y) {
    std::vector<double> fx(g.nx()), fy(g.nky());
    for (int j = 0; j < g.nx(); ++j) fx[j] = std::exp(-36.0 * std::pow(std::abs(g.mode_x(j)) / cut_x, 36));
    for (int k = 0; k < g.nky(); ++k) fy[k] = std::exp(-36.0 * std::pow(k / cut_y, 36));
    for (int j = 0; j < g.nx(); ++j)
        for (int k = 0; k < g.nky(); ++k) fhat[std::size_t(j) * g.nky() + k] *= fx[j] * fy[k];
}

double sobolev_norm(const Field& f, double s) {
    const Grid& g = f.grid();
    const auto& fhat = f.spectral();
    std::vector<double> rows(g.nx());
    for (int j = 0; j < g.nx(); ++j) {
        const double xi2 = g.xi(j) * g.xi(j);
        double r = 0;
        for (int k = 0; k < g.nky(); ++k) {
            const double w = s == 0.0 ? 1.0 : std::pow(1.0 + xi2 + g.eta(k) * g.eta(k), s);
            r += column_weight(g, k) * w * std::norm(fhat[std::size_t(j) * g.nky() + k]);
        }
        rows[j] = r;
    }
    double sum = 0;
    for (double r : rows) sum += r;
    const double n = double(g.size());
    return std::sqrt(sum * g.lx() * g.ly() / (n * n));
}

std::vector<cplx> resize_x(const std::vector<cplx>& fhat, const Grid& g, int nx_new) {
    if (nx_new == g.nx()) return fhat;
    const int nky = g.nky();
    std::vector<cplx> out(std::size_t(nx_new) * nky, 0.0);
    const int half = std::min(g.nx(), nx_new) / 2;
    for (int j = 0; j < g.nx(); ++j) {
        const int m = g.mode_x(j);
        if (std::abs(m) > half) continue;
        const cplx* src = &fhat[std::size_t(j) * nky];
        if (std::abs(m) == half) {
            // Nyquist row of the smaller grid.
            if (nx_new < g.nx()) continue;
            if (m != g.nx() / 2) continue;
            cplx* a = &out[std::size_t(half) * nky];
            cplx* b = &out[std::size_t(nx_new - half) * nky];
            for (int k = 0; k < nky; ++k) a[k] = b[k] = 0.5 * src[k];
            continue;
        }
        const int jn = m >= 0 ? m : nx_new + m;
        std::copy(src, src + nky, &out[std::size_t(jn) * nky]);
    }
    return out;
}

Field resample(const Field& f, const Grid& target) {
    const Grid& g = f.grid();
    if (g.lx() != target.lx() || g.ly() != target.ly()) throw InvalidGrid("resample needs the same box");
    const std::vector<cplx> rows = resize_x(f.spectral(), g, target.nx());
    const int nky_src = g.nky(), nky_dst = target.nky();
    const int kmax = std::min(g.ny(), target.ny()) / 2;
    const double factor = double(target.size()) / double(g.size());
    std::vector<cplx> out(target.spectral_size(), 0.0);
    for (int j = 0; j < target.nx(); ++j)
        for (int k = 0; k < kmax; ++k)
            out[std::size_t(j) * nky_dst + k] = factor * rows[std::size_t(j) * nky_src + k];
    return Field::from_spectral(target, std::move(out));
}

} // namespace kplab
