#include "kplab/diagnostics.hpp"

#include "kplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kplab {

std::string to_string(BracketKind k) {
    switch (k) {
    case BracketKind::plain: return "plain";
    case BracketKind::prime: return "prime";
    default: return "dprime";
    }
}

BracketKind bracket_kind_from_string(const std::string& s) {
    if (s == "plain") return BracketKind::plain;
    if (s == "prime") return BracketKind::prime;
    if (s == "dprime" || s == "double_prime") return BracketKind::double_prime;
    throw InvalidConfig("unknown bracket kind '" + s + "'");
}

MultiIndex BracketSpec::field_index() const {
    switch (kind) {
    case BracketKind::plain: return alpha;
    case BracketKind::prime: return {alpha.a1 + 1, alpha.a2};
    default:
        if (alpha.a1 - 1 < -1) throw NegativeXOrder("double-prime bracket of " + alpha.str() + " needs dx^-2");
        return {alpha.a1 - 1, alpha.a2 + 1};
    }
}

std::string BracketSpec::label() const {
    const char* suffix = kind == BracketKind::plain ? "" : (kind == BracketKind::prime ? "p" : "pp");
    return "bracket_" + std::to_string(alpha.a1) + "_" + std::to_string(alpha.a2) + suffix;
}

WeightedValue bracket(const Field& u, const BracketSpec& spec, double t, QuadRoute route) {
    const Field v = apply_alpha(u, spec.field_index());
    return weighted_integral(y_profile(v), spec.weight, spec.weight_derivative(), t, route);
}

bool BracketSeries::contaminated() const { return std::any_of(wrapped.begin(), wrapped.end(), [](bool b) { return b; }); }

BracketSeries bracket_series(const Trajectory& traj, const BracketSpec& spec) {
    BracketSeries s;
    s.spec = spec;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto v = bracket(traj.fields[i], spec, traj.times[i]);
        s.times.push_back(traj.times[i]);
        s.values.push_back(v.value);
        s.wrapped.push_back(v.wrapped);
    }
    return s;
}

EnergyTerms energy_terms(const Field& u, MultiIndex alpha, const WeightSpec& w, double t, const SolverConfig& cfg) {
    if (alpha.a1 < 0) throw NegativeXOrder("energy identity needs a1 >= 0");
    EnergyTerms e;
    e.t = t;
    const Field v = partial_deriv(u, alpha);
    const XProfile pv = y_profile(v);
    const auto w1 = weighted_integral(pv, w, 1, t);
    e.a1 = -0.5 * w.nu * w1.value;
    e.a2 = -0.5 * weighted_integral(pv, w, 3, t).value;
    e.a3 = weighted_integral(y_profile(partial_deriv(v, {1, 0})), w, 1, t).value;
    e.a4 = weighted_integral(y_profile(apply_alpha(u, {alpha.a1 - 1, alpha.a2 + 1})), w, 1, t).value;
    e.wrapped = w1.wrapped;
    if (cfg.nonlinear || cfg.absorber.enabled) {
        SolverConfig c = cfg;
        c.grid = u.grid();
        Stepper s(c);
        std::vector<cplx> r;
        s.explicit_term(u.spectral(), r);
        const Field dr = partial_deriv(Field::from_spectral(u.grid(), std::move(r)), alpha);
        e.a5 = -weighted_integral(y_profile(dr, v), w, 0, t).value;
    }
    return e;
}

EnergyTerms energy_identity_residual(const Trajectory& traj, MultiIndex alpha, const WeightSpec& w, double t,
                                     double dt_probe, bool include_nonlinear) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    const int i0 = traj.find(t, tol), im = traj.find(t - dt_probe, tol), ip = traj.find(t + dt_probe, tol);
    if (i0 < 0 || im < 0 || ip < 0 || !(dt_probe > 0))
        throw ProbeOutOfRange("trajectory lacks samples at t and t +- dt_probe");
    SolverConfig cfg = traj.config;
    cfg.grid = traj.grid;
    cfg.nonlinear = cfg.nonlinear && include_nonlinear;
    if (!include_nonlinear) cfg.absorber.enabled = false;
    EnergyTerms e = energy_terms(traj.fields[i0], alpha, w, t, cfg);
    e.dt_probe = dt_probe;
    const BracketSpec plain{alpha, BracketKind::plain, w};
    const auto bp = bracket(traj.fields[ip], plain, t + dt_probe);
    const auto bm = bracket(traj.fields[im], plain, t - dt_probe);
    e.wrapped = e.wrapped || bp.wrapped || bm.wrapped;
    e.ddt_bracket = (bp.value - bm.value) / (2 * dt_probe);
    const double terms[] = {0.5 * e.ddt_bracket, e.a1, e.a2, 1.5 * e.a3, 0.5 * e.a4, e.a5};
    double scale = 0;
    for (double x : terms) {
        e.residual += x;
        scale = std::max(scale, std::abs(x));
    }
    e.relative = scale > 0 ? std::abs(e.residual) / scale : 0.0;
    return e;
}

namespace {

GnResult make_ratio(double lhs, double rhs) {
    GnResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    if (rhs > 0) r.ratio = lhs / rhs;
    else if (lhs > 0) {
        r.ratio = INFINITY;
        r.violation = true;
    }
    return r;
}

} // namespace

GnResult gn_check(const Field& f, const WeightSpec& w) {
    const Grid& g = f.grid();
    constexpr int over = 4;
    const std::vector<double> v = padded_values(f, over, over);
    const int nxf = over * g.nx(), nyf = over * g.ny();
    const double hx = g.lx() / nxf, hy = g.ly() / nyf;
    std::vector<double> rows(nxf);
    for (int i = 0; i < nxf; ++i) {
        double s = 0;
        for (int j = 0; j < nyf; ++j) {
            const double a = v[std::size_t(i) * nyf + j];
            const double a2 = a * a;
            s += a2 * a2;
        }
        rows[i] = s;
    }
    double quartic = 0;
    for (int i = 0; i < nxf; ++i) {
        const double c = eval_weight(w, g.x_min() + i * hx, 0);
        quartic += rows[i] * c * c;
    }
    quartic *= hx * hy;

    const XProfile pf = y_profile(f);
    XProfile p0 = pf;
    p0 += y_profile(partial_deriv(f, {1, 0}));
    p0 += y_profile(partial_deriv(f, {0, 1}));
    const double rhs = weighted_integral(p0, w, 0, 0.0).value + weighted_integral(pf, w, 1, 0.0).value;
    return make_ratio(std::sqrt(std::max(quartic, 0.0)), rhs);
}

GnResult gn6_check(const Field& f) {
    const Grid& g = f.grid();
    constexpr int over = 4;
    const std::vector<double> v = padded_values(f, over, over);
    const int nxf = over * g.nx(), nyf = over * g.ny();
    std::vector<double> rows(nxf);
    for (int i = 0; i < nxf; ++i) {
        double s = 0;
        for (int j = 0; j < nyf; ++j) {
            const double a = v[std::size_t(i) * nyf + j];
            s += a * a * a * a * a * a;
        }
        rows[i] = s;
    }
    double sixth = 0;
    for (double r : rows) sixth += r;
    sixth *= (g.lx() / nxf) * (g.ly() / nyf);
    const double l2 = std::pow(sobolev_norm(f, 0.0), 2);
    const double grad = std::pow(sobolev_norm(partial_deriv(f, {1, 0}), 0.0), 2) +
                        std::pow(sobolev_norm(partial_deriv(f, {0, 1}), 0.0), 2);
    return make_ratio(sixth, l2 * grad * grad);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
    double s = 0;
    for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
    return s;
}

namespace {

double half_sampled(const std::vector<double>& t, const std::vector<double>& v) {
    std::vector<double> th, vh;
    for (std::size_t i = 0; i < t.size(); i += 2) {
        th.push_back(t[i]);
        vh.push_back(v[i]);
    }
    if ((t.size() - 1) % 2) {
        th.push_back(t.back());
        vh.push_back(v.back());
    }
    return trapezoid(th, vh);
}

double rel_change(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

} // namespace

SmoothingIntegrals smoothing_integrals(const BracketSeries& prime, const BracketSeries* dprime, double tol) {
    if (prime.times.size() < 20) throw InvalidConfig("smoothing integrals need at least 20 samples");
    SmoothingIntegrals r;
    r.prime = trapezoid(prime.times, prime.values);
    r.prime_half = half_sampled(prime.times, prime.values);
    r.drift = rel_change(r.prime, r.prime_half);
    r.wrapped = prime.contaminated();
    r.dprime_defined = dprime != nullptr;
    if (dprime) {
        r.dprime = trapezoid(dprime->times, dprime->values);
        r.dprime_half = half_sampled(dprime->times, dprime->values);
        r.drift = std::max(r.drift, rel_change(r.dprime, r.dprime_half));
        r.wrapped = r.wrapped || dprime->contaminated();
    }
    r.stable = std::isfinite(r.prime) && std::isfinite(r.dprime) && r.drift <= tol;
    return r;
}

SmoothingIntegrals smoothing_integrals(const Trajectory& traj, MultiIndex alpha, const WeightSpec& w, double tol) {
    const BracketSeries p = bracket_series(traj, {alpha, BracketKind::prime, w});
    if (alpha.a1 - 1 < -1) return smoothing_integrals(p, nullptr, tol);
    const BracketSeries pp = bracket_series(traj, {alpha, BracketKind::double_prime, w});
    return smoothing_integrals(p, &pp, tol);
}

double chained_a1_integral(const Trajectory& traj, MultiIndex alpha, const WeightSpec& w) {
    if (!(w.nu > 0)) throw InvalidWeight("chaining through A1 needs nu > 0");
    SolverConfig cfg = traj.config;
    cfg.nonlinear = false;
    cfg.absorber.enabled = false;
    std::vector<double> vals;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const EnergyTerms e = energy_terms(traj.fields[i], {alpha.a1 + 1, alpha.a2}, w, traj.times[i], cfg);
        vals.push_back(std::abs(e.a1) / (0.5 * w.nu));
    }
    return trapezoid(traj.times, vals);
}

bool FunctionalSeries::contaminated() const { return std::any_of(wrapped.begin(), wrapped.end(), [](bool b) { return b; }); }

namespace {

void finish(FunctionalSeries& f) {
    f.sup = f.values.empty() ? 0.0 : *std::max_element(f.values.begin(), f.values.end());
    // Value at t = 0 (the first sample of a forward run).
    for (std::size_t i = 0; i < f.times.size(); ++i)
        if (std::abs(f.times[i]) < 1e-12) f.initial = f.values[i];
}

} // namespace

FunctionalSeries theorem1_functional(const Trajectory& traj, int n, double x0, double eps, double nu) {
    if (n < 3) throw InvalidOrder("functional needs n >= 3");
    FunctionalSeries f;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double a = x0 + eps - nu * t;
        f.times.push_back(t);
        f.wrapped.push_back(a < traj.grid.x_min());
        f.values.push_back(a >= traj.grid.x_max() ? 0.0 : window_integral(sobolev_profile(traj.fields[i], n), a));
    }
    finish(f);
    return f;
}

FunctionalSeries smooth_functional(const Trajectory& traj, int n, double x0, double eps, double nu) {
    if (n < 3) throw InvalidOrder("functional needs n >= 3");
    const WeightSpec w = make_weight(eps / 5, eps, nu);
    FunctionalSeries f;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const auto v = weighted_integral_shift(sobolev_profile(traj.fields[i], n), w, 0, nu * t - x0);
        f.times.push_back(t);
        f.values.push_back(v.value);
        f.wrapped.push_back(v.wrapped);
    }
    finish(f);
    return f;
}

GronwallFit gronwall_fit(const std::vector<double>& t, const std::vector<double>& s) {
    GronwallFit g;
    if (t.size() < 2 || !(s.front() > 0)) {
        g.bounded = !t.empty() && std::all_of(s.begin(), s.end(), [](double v) { return v == 0; });
        return g;
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(s[i] > 0) || !(s[i - 1] > 0)) continue;
        g.c = std::max(g.c, (std::log(s[i]) - std::log(s[i - 1])) / (t[i] - t[i - 1]));
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        g.max_excess = std::max(g.max_excess, s[i] / (s.front() * std::exp(g.c * (t[i] - t.front()))) - 1);
    g.bounded = std::isfinite(g.c);
    return g;
}

} // namespace kplab
