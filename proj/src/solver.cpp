#include "kplab/solver.hpp"

#include "kplab/errors.hpp"
#include "kplab/kernels.hpp"
#include "kplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kplab {

std::string to_string(Scheme s) { return s == Scheme::IFRK4 ? "IFRK4" : "ETDRK4"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "IFRK4" || s == "ifrk4") return Scheme::IFRK4;
    if (s == "ETDRK4" || s == "etdrk4") return Scheme::ETDRK4;
    throw InvalidConfig("unknown scheme '" + s + "'");
}

void SolverConfig::validate() const {
    if (!(dt > 0)) throw InvalidConfig("dt must be positive");
    if (!(t_end >= 0)) throw InvalidConfig("t_end must be nonnegative");
    if (p < 1) throw InvalidConfig("nonlinearity power p must be >= 1");
    if (absorber.enabled && (!(absorber.width > 0) || !(absorber.strength >= 0) || absorber.width > 0.5 * grid.lx()))
        throw InvalidConfig("absorber needs 0 < width <= lx/2 and strength >= 0");
    if (!(blowup_factor > 0)) throw InvalidConfig("blowup factor must be positive");
}

std::vector<cplx> linear_symbol(const Grid& g) {
    std::vector<cplx> w(g.spectral_size(), 0.0);
    for (int j = 0; j < g.nx(); ++j) {
        if (j == 0 || g.x_nyquist(j)) continue;
        const double xi = g.xi(j);
        for (int k = 0; k < g.nky(); ++k) {
            const double eta = g.eta(k);
            w[std::size_t(j) * g.nky() + k] = cplx(0.0, xi * xi * xi - eta * eta / xi);
        }
    }
    return w;
}

Field nonlinear_rhs(const Field& u, int p, bool dealias_on) {
    SolverConfig cfg;
    cfg.grid = u.grid();
    cfg.p = p;
    cfg.dealias = dealias_on;
    Stepper s(cfg);
    std::vector<cplx> out;
    s.explicit_term(u.spectral(), out);
    return Field::from_spectral(u.grid(), std::move(out));
}

double max_group_speed(const Field& u, double rel_threshold) {
    const Grid& g = u.grid();
    const auto& s = u.spectral();
    double peak = 0;
    for (const auto& z : s) peak = std::max(peak, std::abs(z));
    if (peak == 0) return 0.0;
    double v = 0;
    for (int j = 1; j < g.nx(); ++j) {
        const double xi = g.xi(j);
        for (int k = 0; k < g.nky(); ++k)
            if (std::abs(s[std::size_t(j) * g.nky() + k]) > rel_threshold * peak)
                v = std::max(v, 3 * xi * xi + std::pow(g.eta(k) / xi, 2));
    }
    return v;
}

double first_wrap_time(const Field& u, double rel_threshold) {
    const double v = max_group_speed(u, rel_threshold);
    return v > 0 ? u.grid().lx() / v : INFINITY;
}

double suggested_dt(const Grid& g) {
    double m = 0;
    for (int j = 1; j < g.nx(); ++j)
        for (int k = 0; k < g.nky(); ++k) {
            const double xi = g.xi(j), eta = g.eta(k);
            m = std::max(m, std::abs(xi * xi * xi - eta * eta / xi));
        }
    return 0.5 / m;
}

namespace {

// Contour-integral evaluation of the ETDRK4 coefficients for z = L h.
struct EtdCoefficients {
    cplx q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(cplx z, double h) {
    constexpr int M = 32;
    cplx q = 0, f1 = 0, f2 = 0, f3 = 0;
    for (int m = 0; m < M; ++m) {
        const cplx r = std::exp(cplx(0.0, 2 * std::numbers::pi * (m + 0.5) / M));
        const cplx w = z + r;
        const cplx ew = std::exp(w), w3 = w * w * w;
        q += (std::exp(0.5 * w) - 1.0) / w;
        f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
        f2 += (2.0 + w + ew * (w - 2.0)) / w3;
        f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
    }
    return {h * q / double(M), h * f1 / double(M), h * f2 / double(M), h * f3 / double(M)};
}

} // namespace

Stepper::Stepper(const SolverConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const Grid& g = cfg_.grid;
    const double h = cfg_.signed_dt();
    const std::vector<cplx> omega = linear_symbol(g);
    const std::size_t n = g.spectral_size();
    e_half_.resize(n);
    e_full_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        e_half_[i] = std::exp(0.5 * h * omega[i]);
        e_full_[i] = std::exp(h * omega[i]);
    }
    if (cfg_.scheme == Scheme::ETDRK4) {
        q_.resize(n);
        f1_.resize(n);
        f2_.resize(n);
        f3_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = etd_coefficients(h * omega[i], h);
            q_[i] = c.q;
            f1_[i] = c.f1;
            f2_[i] = c.f2;
            f3_[i] = c.f3;
        }
    }
    flux_mult_.resize(g.nx());
    for (int j = 0; j < g.nx(); ++j) flux_mult_[j] = -deriv_multiplier(g.xi(j), 1, g.x_nyquist(j));
    keep_.resize(n, 1);
    if (cfg_.dealias)
        for (int j = 0; j < g.nx(); ++j)
            for (int k = 0; k < g.nky(); ++k) keep_[std::size_t(j) * g.nky() + k] = dealias_keeps(g, j, k);
    if (cfg_.absorber.enabled) {
        sigma_.assign(g.nx(), 0.0);
        const double w = cfg_.absorber.width;
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.x(i);
            const double d = std::min(x - g.x_min(), g.x_max() - x);
            if (d < w) sigma_[i] = cfg_.absorber.strength / cfg_.dt * 0.5 * (1 + std::cos(std::numbers::pi * d / w));
            // Damp in the direction of stepping.
            if (cfg_.backward) sigma_[i] = -sigma_[i];
        }
    }
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &a_, &b_, &c_}) v->resize(n);
}

void Stepper::rhs(const std::vector<cplx>& uhat, std::vector<cplx>& out, double t, bool check) const {
    const Grid& g = cfg_.grid;
    const std::size_t n = g.spectral_size();
    out.assign(n, 0.0);
    if (!cfg_.nonlinear && sigma_.empty()) return;

    spec_scratch_ = uhat;
    for (std::size_t i = 0; i < n; ++i)
        if (!keep_[i]) spec_scratch_[i] = 0.0;
    phys_.resize(g.size());
    flux_.resize(g.size());
    fft::plan2d(g.nx(), g.ny())->inverse(spec_scratch_.data(), phys_.data());
    kernels::scale(phys_, 1.0 / double(g.size()));

    if (check && blowup_threshold_ > 0) {
        const double m = kernels::max_abs(phys_);
        if (!(m <= blowup_threshold_)) throw BlowupDetected(t);
    }

    if (cfg_.nonlinear) {
        kernels::power_flux(phys_, flux_, cfg_.p);
        fft::plan2d(g.nx(), g.ny())->forward(flux_.data(), out.data());
        const std::vector<cplx> ones(g.nky(), 1.0);
        kernels::scale_separable(out, out, flux_mult_, ones);
    }
    if (!sigma_.empty()) {
        // -sigma (u - m(y)) with m the sigma-weighted column mean: confined to the layer
        // and free of x-mean, so nothing is fed back outside it.
        std::fill(flux_.begin(), flux_.end(), 0.0);
        kernels::absorb(phys_, sigma_, g.nx(), g.ny(), flux_);
        fft::plan2d(g.nx(), g.ny())->forward(flux_.data(), spec_scratch_.data());
        for (std::size_t i = 0; i < n; ++i) out[i] += spec_scratch_[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!keep_[i]) out[i] = 0.0;
    for (int k = 0; k < g.nky(); ++k) out[k] = 0.0;
}

void Stepper::explicit_term(const std::vector<cplx>& uhat, std::vector<cplx>& out) const {
    rhs(uhat, out, 0.0, false);
}

void Stepper::step(std::vector<cplx>& u, double t) {
    const double h = cfg_.signed_dt();
    auto scaled_rhs = [&](const std::vector<cplx>& v, std::vector<cplx>& k, bool check) {
        rhs(v, k, t, check);
        for (auto& z : k) z *= h;
    };
    if (cfg_.scheme == Scheme::IFRK4) {
        scaled_rhs(u, k1_, true);
        kernels::if_stage(e_half_, u, k1_, 0.5, a_);
        scaled_rhs(a_, k2_, false);
        kernels::exp_axpy(e_half_, u, k2_, 0.5, b_);
        scaled_rhs(b_, k3_, false);
        kernels::multiply(e_half_, u, c_);
        kernels::if_stage(e_half_, c_, k3_, 1.0, c_);
        scaled_rhs(c_, k4_, false);
        kernels::if_final(u, e_half_, e_full_, k1_, k2_, k3_, k4_);
    } else {
        rhs(u, k1_, t, true);
        kernels::etd_stage(e_half_, u, q_, k1_, a_);
        rhs(a_, k2_, t, false);
        kernels::etd_stage(e_half_, u, q_, k2_, b_);
        rhs(b_, k3_, t, false);
        for (std::size_t i = 0; i < k4_.size(); ++i) k4_[i] = 2.0 * k3_[i] - k1_[i];
        kernels::etd_stage(e_half_, a_, q_, k4_, c_);
        rhs(c_, k4_, t, false);
        kernels::etd_final(u, e_full_, f1_, f2_, f3_, k1_, k2_, k3_, k4_);
    }
    const Grid& g = cfg_.grid;
    for (int k = 0; k < g.nky(); ++k)
        if (u[k] != 0.0) throw Error("zero x-mean lost during a step");
}

Field step(const Field& u, const SolverConfig& cfg) {
    Stepper s(cfg);
    require_zero_x_mean(u);
    std::vector<cplx> v = u.spectral();
    for (int k = 0; k < u.grid().nky(); ++k) v[k] = 0.0;
    s.set_blowup_threshold(cfg.blowup_factor * max_abs(u));
    s.step(v, 0.0);
    return Field::from_spectral(u.grid(), std::move(v));
}

int Trajectory::find(double t, double tol) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= tol) return int(i);
    return -1;
}

std::vector<long> sample_steps(long n_steps, int count, double grading) {
    if (!(grading >= 1.0)) throw InvalidConfig("sample grading must be >= 1");
    count = std::max(2, count);
    if (n_steps < count - 1 && grading > 1.0) throw InvalidConfig("graded sampling needs at least one step per sample");
    std::vector<long> s{0};
    for (int i = 1; i < count; ++i) {
        const long k = std::lround(n_steps * std::pow(double(i) / (count - 1), grading));
        s.push_back(grading > 1.0 ? std::max(k, s.back() + 1) : k);
    }
    if (grading > 1.0) {
        // the forced increments may overshoot; pull the tail back below n_steps
        s.back() = n_steps;
        for (int i = count - 2; i > 0 && s[i] >= s[i + 1]; --i) s[i] = s[i + 1] - 1;
    }
    return s;
}

Trajectory evolve(const Field& u0, const SolverConfig& cfg_in, const EvolveOptions& opts) {
    cfg_in.validate();
    if (!(u0.grid() == cfg_in.grid)) throw InvalidConfig("initial field grid differs from solver grid");
    require_zero_x_mean(u0);

    SolverConfig cfg = cfg_in;
    const long n_steps = cfg.t_end > 0 ? std::max(1L, std::lround(cfg.t_end / cfg.dt)) : 0;
    if (n_steps > 0) cfg.dt = cfg.t_end / double(n_steps);
    const double sign = cfg.backward ? -1.0 : 1.0;

    std::vector<long> sample_steps = kplab::sample_steps(n_steps, opts.sample_count, opts.grading);
    for (double t : opts.extra_times) {
        const long s = n_steps > 0 ? std::lround(std::abs(t) / cfg.dt) : 0;
        if (s < 0 || s > n_steps) throw InvalidConfig("extra sample time outside the run");
        sample_steps.push_back(s);
    }
    std::sort(sample_steps.begin(), sample_steps.end());
    sample_steps.erase(std::unique(sample_steps.begin(), sample_steps.end()), sample_steps.end());

    Trajectory traj;
    traj.grid = cfg.grid;
    traj.config = cfg;
    traj.wrap_time = first_wrap_time(u0);

    std::vector<cplx> u = u0.spectral();
    for (int k = 0; k < cfg.grid.nky(); ++k) u[k] = 0.0;
    const double l2_0 = sobolev_norm(u0, 0.0);

    auto record = [&](long s) {
        Field f = Field::from_spectral(cfg.grid, u);
        const double t = sign * s * cfg.dt;
        if (opts.observer) opts.observer(t, f);
        traj.times.push_back(t);
        traj.l2.push_back(sobolev_norm(f, 0.0));
        traj.fields.push_back(std::move(f));
    };

    std::size_t next = 0;
    if (sample_steps[next] == 0) {
        record(0);
        ++next;
    }
    if (n_steps > 0) {
        Stepper stepper(cfg);
        stepper.set_blowup_threshold(cfg.blowup_factor * max_abs(u0));
        for (long s = 1; s <= n_steps; ++s) {
            stepper.step(u, sign * (s - 1) * cfg.dt);
            if (next < sample_steps.size() && sample_steps[next] == s) {
                record(s);
                ++next;
            }
        }
    }
    if (cfg.backward) {
        std::reverse(traj.times.begin(), traj.times.end());
        std::reverse(traj.fields.begin(), traj.fields.end());
        std::reverse(traj.l2.begin(), traj.l2.end());
    }
    const double l2_end = cfg.backward ? traj.l2.front() : traj.l2.back();
    traj.l2_drift = l2_0 > 0 ? std::abs(l2_end / l2_0 - 1.0) : 0.0;
    return traj;
}

Field reflect_x(const Field& u) {
    const Grid& g = u.grid();
    const auto& v = u.values();
    std::vector<double> r(v.size());
    for (int i = 0; i < g.nx(); ++i) {
        const int src = (g.nx() - i) % g.nx();
        std::copy_n(&v[std::size_t(src) * g.ny()], g.ny(), &r[std::size_t(i) * g.ny()]);
    }
    return Field::from_values(g, std::move(r));
}

Field evolve_backward_reflected(const Field& u0, SolverConfig cfg) {
    cfg.backward = false;
    const Trajectory t = evolve(reflect_x(u0), cfg);
    return reflect_x(t.fields.back());
}

} // namespace kplab
