#include "kplab/datagen.hpp"

#include "kplab/errors.hpp"
#include "kplab/quadrature.hpp"
#include "kplab/spectral.hpp"

#include <cmath>

namespace kplab {

std::string to_string(DataKind k) { return k == DataKind::smooth_packet ? "smooth_packet" : "one_sided_rough"; }

DataKind data_kind_from_string(const std::string& s) {
    if (s == "smooth_packet" || s == "smooth-packet") return DataKind::smooth_packet;
    if (s == "one_sided_rough" || s == "one-sided-rough") return DataKind::one_sided_rough;
    throw InvalidConfig("unknown data kind '" + s + "'");
}

void DataSpec::validate() const {
    if (n_target < 3) throw InvalidConfig("n_target must be >= 3");
    if (kind == DataKind::one_sided_rough) {
        if (!(gamma > 2)) throw InvalidConfig("gamma must exceed 2");
        if (!(x_singular < x0)) throw SpecInfeasible("singular line must lie left of x0");
        if (!(width_x > 0) || !(width_y > 0)) throw InvalidConfig("envelope widths must be positive");
    }
}

namespace {

// u0 = d/dx [ gx(x) gy(y) ] assembled spectrally. gx is sampled `over` times finer
// than the grid before truncation so the singular profile is not aliased.
template <class GX, class GY>
Field separable_derivative(const Grid& g, GX&& gx, GY&& gy, int over) {
    const int nxf = over * g.nx();
    std::vector<double> sx(nxf), sy(g.ny());
    for (int i = 0; i < nxf; ++i) sx[i] = gx(g.x_min() + i * g.lx() / nxf);
    for (int j = 0; j < g.ny(); ++j) sy[j] = gy(g.y(j));
    std::vector<cplx> cx(nxf / 2 + 1), cy(g.nky());
    fft::plan1d(nxf)->forward(sx.data(), cx.data());
    fft::plan1d(g.ny())->forward(sy.data(), cy.data());

    std::vector<cplx> s(g.spectral_size(), 0.0);
    const double scale = double(g.nx()) / nxf;  // raw 2-D coefficient = nx ny * (X/nxf) * (Y/ny)
    for (int j = 0; j < g.nx(); ++j) {
        const int m = g.mode_x(j);
        if (g.x_nyquist(j)) continue;
        const cplx xm = m >= 0 ? cx[m] : std::conj(cx[-m]);
        const cplx dx = deriv_multiplier(g.xi(j), 1, false);
        for (int k = 0; k < g.nky(); ++k)
            if (!g.y_nyquist(k)) s[std::size_t(j) * g.nky() + k] = dx * scale * xm * cy[k];
    }
    return Field::from_spectral(g, std::move(s));
}

} // namespace

Field smooth_packet(const Grid& g, const PacketParams& p) {
    auto gx = [&](double x) {
        const double z = (x - p.x_center) / p.width_x;
        return p.amplitude * std::exp(-z * z) * std::cos(p.carrier * (x - p.x_center));
    };
    auto gy = [&](double y) {
        const double z = (y - p.y_center) / p.width_y;
        return std::exp(-z * z);
    };
    Field f = separable_derivative(g, gx, gy, 1);
    std::vector<cplx> s = f.spectral();
    dealias(s, g);
    return Field::from_spectral(g, std::move(s));
}

Field one_sided_rough(const Grid& g, const DataSpec& spec) {
    spec.validate();
    if (spec.x0 - spec.x_singular < 4 * g.dx())
        throw SpecInfeasible("singular line closer than 4 grid cells to x0");
    if (spec.x_singular <= g.x_min() || spec.x0 >= g.x_max()) throw SpecInfeasible("singular line or x0 outside the box");
    auto gx = [&](double x) {
        const double z = x - spec.x_singular;
        const double e = z / spec.width_x;
        return spec.amplitude * std::pow(std::abs(z), spec.gamma) * std::exp(-e * e);
    };
    auto gy = [&](double y) {
        const double e = y / spec.width_y;
        return std::exp(-e * e);
    };
    Field f = separable_derivative(g, gx, gy, 4);
    std::vector<cplx> s = f.spectral();
    smooth_filter(s, g, g.nx() / 3.0, g.ny() / 3.0);
    dealias(s, g);
    return Field::from_spectral(g, std::move(s));
}

Field make_data(const Grid& g, const DataSpec& spec) {
    spec.validate();
    return spec.kind == DataKind::smooth_packet ? smooth_packet(g, spec.packet) : one_sided_rough(g, spec);
}

double radial_bump_transform(int k, double s) {
    s = std::abs(s);
    const double kf1 = std::tgamma(k + 2.0);  // (k+1)!
    if (s < 10.0) {
        const double q = s * s / 4;
        double term = 1.0 / std::tgamma(k + 2.0), sum = term;
        for (int m = 1; m < 200; ++m) {
            term *= -q / (m * double(m + k + 1));
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum)) break;
        }
        return kf1 * sum;
    }
    return std::pow(2.0, k + 1) * kf1 * std::cyl_bessel_j(double(k + 1), s) / std::pow(s, k + 1);
}

Field mollify_data(const Field& u0, double tau, int k) {
    if (!(tau > 0)) throw InvalidConfig("mollification radius must be positive");
    const Grid& g = u0.grid();
    std::vector<cplx> s = u0.spectral();
    for (int j = 0; j < g.nx(); ++j)
        for (int kk = 0; kk < g.nky(); ++kk) {
            const double r = std::hypot(g.xi(j), g.eta(kk));
            s[std::size_t(j) * g.nky() + kk] *= radial_bump_transform(k, tau * r);
        }
    return Field::from_spectral(g, std::move(s));
}

Field half_band(const Field& f) {
    const Grid& g = f.grid();
    std::vector<cplx> s = f.spectral();
    smooth_filter(s, g, g.nx() / 6.0, g.ny() / 6.0);
    return Field::from_spectral(g, std::move(s));
}

namespace {

RefinementCheck refinement(double value, double coarse, double tol) {
    RefinementCheck r;
    r.value = value;
    r.coarse = coarse;
    r.ratio = coarse != 0 ? value / coarse : (value == 0 ? 1.0 : INFINITY);
    r.stable = std::isfinite(r.ratio) && std::abs(r.ratio - 1) <= tol;
    return r;
}

} // namespace

double windowed_sobolev_sum(const Field& f, int n, double a) { return window_integral(sobolev_profile(f, n), a); }

double interval_sobolev_sum(const Field& f, int n, double a, double b) {
    const XProfile p = sobolev_profile(f, n);
    return window_integral(p, a) - window_integral(p, b);
}

std::vector<std::string> HypothesisReport::failures() const {
    std::vector<std::string> f;
    if (!xs_norm.stable) f.push_back("H^s norm of u0");
    if (!xs_antiderivative.stable) f.push_back("H^s norm of dx^-1 u0");
    if (!windowed_hn.stable) f.push_back("windowed H^n sum on (x0, inf)");
    if (dy3_required && !windowed_dy3.stable) f.push_back("dx^-1 dy^3 u0 in L2((x0, inf))");
    return f;
}

HypothesisReport check_hypotheses(const Field& u0, double x0, int n, double s, double tol) {
    HypothesisReport r;
    r.x0 = x0;
    r.n = n;
    r.s = s;
    r.tolerance = tol;
    const Field coarse = half_band(u0);

    r.xs_norm = refinement(sobolev_norm(u0, s), sobolev_norm(coarse, s), tol);
    r.xs_antiderivative = refinement(sobolev_norm(antiderivative_x(u0), s), sobolev_norm(antiderivative_x(coarse), s), tol);

    const XProfile fine_p = sobolev_profile(u0, n), coarse_p = sobolev_profile(coarse, n);
    r.windowed_hn = refinement(window_integral(fine_p, x0), window_integral(coarse_p, x0), tol);
    r.global_hn = refinement(box_integral(fine_p), box_integral(coarse_p), tol);

    const MultiIndex dy3{-1, 3};
    r.windowed_dy3 = refinement(window_integral(y_profile(apply_alpha(u0, dy3)), x0),
                                window_integral(y_profile(apply_alpha(coarse, dy3)), x0), tol);
    r.dy3_required = s < 3;
    r.passed = r.failures().empty();
    return r;
}

void require_hypotheses(const HypothesisReport& r) {
    const auto f = r.failures();
    if (f.empty()) return;
    std::string msg = "hypotheses not refinement-stable:";
    for (const auto& s : f) msg += " [" + s + "]";
    throw HypothesisFailed(msg);
}

} // namespace kplab
