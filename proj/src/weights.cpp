#include "kplab/weights.hpp"

#include "kplab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace kplab {

std::string to_string(Mollifier m) { return m == Mollifier::polynomial ? "polynomial" : "exponential"; }

Mollifier mollifier_from_string(const std::string& s) {
    if (s == "polynomial") return Mollifier::polynomial;
    if (s == "exponential") return Mollifier::exponential;
    throw InvalidWeight("unknown mollifier '" + s + "'");
}

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double double_factorial_odd(int m) { // m!! for odd m
    double r = 1;
    for (int i = m; i > 1; i -= 2) r *= i;
    return r;
}

double gk(auto&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-14);
}

double exp_bump_raw(double z) { return std::abs(z) < 1 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0; }

double exp_bump_constant() {
    static const double c = 1.0 / gk(exp_bump_raw, -1.0, 1.0);
    return c;
}

// Antiderivatives of the polynomial bump: R(z) = int_{-1}^z rho, S(z) = int_{-1}^z R.
struct BumpPrimitives {
    int k;
    double c;

    double odd_part(double z) const { // R(z) - 1/2 on (-1, 1)
        const double z2 = z * z;
        double s = 0;
        for (int i = k; i >= 0; --i) s = s * z2 + ((i % 2) ? -1.0 : 1.0) * binom(k, i) / (2 * i + 1);
        return c * z * s;
    }
    double even_part(double z) const { // Q(z), with Q' = odd_part
        const double z2 = z * z;
        double s = 0;
        for (int i = k; i >= 0; --i)
            s = s * z2 + ((i % 2) ? -1.0 : 1.0) * binom(k, i) / ((2 * i + 1) * (2.0 * i + 2));
        return c * z2 * s;
    }
    double R(double z) const {
        if (z <= -1) return 0.0;
        if (z >= 1) return 1.0;
        return 0.5 + odd_part(z);
    }
    double S(double z) const {
        if (z <= -1) return 0.0;
        if (z >= 1) return z;
        return 0.5 * (z + 1) + even_part(z) - even_part(1.0);
    }
};

} // namespace

WeightSpec make_weight(double eps, double b, double nu, int order, Mollifier mollifier) {
    if (!(eps > 0)) throw InvalidWeight("eps must be positive");
    if (!(b >= 5 * eps)) throw InvalidWeight("weight needs b >= 5 eps");
    if (!(nu >= 0)) throw InvalidWeight("speed nu must be nonnegative");
    if (order < 4) throw InvalidWeight("mollifier order must be at least 4");
    return WeightSpec{eps, b, nu, order, mollifier};
}

double bump_constant(int k) { return double_factorial_odd(2 * k + 1) / (std::pow(2.0, k + 1) * std::tgamma(k + 1.0)); }

double bump(const WeightSpec& w, double z, int m) {
    if (std::abs(z) >= 1) return 0.0;
    const double q = 1 - z * z;
    if (w.mollifier == Mollifier::exponential) {
        const double r = exp_bump_constant() * std::exp(-1.0 / q);
        const double g1 = -2 * z / (q * q);
        if (m == 0) return r;
        if (m == 1) return r * g1;
        return r * (g1 * g1 - (2 + 6 * z * z) / (q * q * q));
    }
    const int k = w.order;
    const double c = bump_constant(k);
    if (m == 0) return c * std::pow(q, k);
    if (m == 1) return -2.0 * k * c * z * std::pow(q, k - 1);
    return c * (-2.0 * k * std::pow(q, k - 1) + 4.0 * k * (k - 1) * z * z * std::pow(q, k - 2));
}

double eval_weight_quadrature(const WeightSpec& w, double x, int d) {
    const double e = w.eps, L = w.ramp_length();
    const double t_lo = (x - (w.b - e)) / e, t_hi = (x - 2 * e) / e;  // kinks in t = (x - s)/eps
    if (d == 0) {
        auto ramp = [&](double t) {
            const double s = x - e * t;
            return s <= 2 * e ? 0.0 : (s >= w.b - e ? 1.0 : (s - 2 * e) / L);
        };
        auto f = [&](double t) { return bump(w, t) * ramp(t); };
        const double a = std::max(-1.0, std::min(1.0, t_lo)), b = std::max(-1.0, std::min(1.0, t_hi));
        return gk(f, -1.0, a) + gk(f, a, b) + gk(f, b, 1.0);
    }
    if (d < 0 || d > 3) throw InvalidWeight("derivative order must be 0..3");
    const int m = d - 1;
    auto f = [&](double t) { return bump(w, t, m); };
    const double a = std::max(-1.0, t_lo), b = std::min(1.0, t_hi);
    return gk(f, a, b) / (L * std::pow(e, m));
}

double eval_weight(const WeightSpec& w, double x, int d) {
    if (w.mollifier == Mollifier::exponential) return eval_weight_quadrature(w, x, d);
    const double e = w.eps, L = w.ramp_length();
    const double z1 = (x - 2 * e) / e, z2 = (x - (w.b - e)) / e;
    const BumpPrimitives p{w.order, bump_constant(w.order)};
    switch (d) {
    case 0:
        if (z2 >= 1) return 1.0;
        return e / L * (p.S(z1) - p.S(z2));
    case 1:
        return (p.R(z1) - p.R(z2)) / L;
    case 2:
        return (bump(w, z1) - bump(w, z2)) / (e * L);
    case 3:
        return (bump(w, z1, 1) - bump(w, z2, 1)) / (e * e * L);
    default:
        throw InvalidWeight("derivative order must be 0..3");
    }
}

bool weight_wraps(const WeightSpec& w, const Grid& grid, double t) {
    return w.eps - w.nu * t < grid.x_min() || w.b - w.nu * t > grid.x_max();
}

WeightProfile weight_profile(const WeightSpec& w, const Grid& grid, double t) {
    WeightProfile p;
    p.x.resize(grid.nx());
    for (auto& v : p.d) v.resize(grid.nx());
    for (int i = 0; i < grid.nx(); ++i) {
        p.x[i] = grid.x(i);
        for (int d = 0; d < 4; ++d) p.d[d][i] = eval_weight(w, p.x[i] + w.nu * t, d);
    }
    p.wrapped = weight_wraps(w, grid, t);
    return p;
}

double bump_transform(int k, double s) {
    s = std::abs(s);
    const double dfac = double_factorial_odd(2 * k + 1);
    if (s < 8.0) {
        // (2k+1)!! j_k(s)/s^k = sum_m (-1)^m s^{2m} (2k+1)!! / (2^m m! (2k+2m+1)!!)
        double term = 1.0, sum = 1.0;
        for (int m = 1; m < 80; ++m) {
            term *= -s * s / (2.0 * m * (2 * k + 2 * m + 1));
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return sum;
    }
    return dfac * std::sph_bessel(unsigned(k), s) / std::pow(s, k);
}

cplx weight_transform(const WeightSpec& w, double kappa, int d) {
    if (w.mollifier != Mollifier::polynomial)
        throw InvalidWeight("closed-form transform needs the polynomial bump");
    if (d < 1 || d > 3) throw InvalidWeight("transform defined for d = 1..3");
    const double L = w.ramp_length();
    const double h = 0.5 * kappa * L;
    const double sinc = h == 0.0 ? 1.0 : std::sin(h) / h;
    const double centre = 0.5 * (w.b + w.eps);
    cplx phi = bump_transform(w.order, w.eps * kappa) * sinc * std::exp(cplx(0.0, kappa * centre));
    if (d >= 2) phi *= cplx(0.0, -kappa);
    if (d == 3) phi *= cplx(0.0, -kappa);
    return phi;
}

WeightFacts check_weight_facts(const WeightSpec& w, int samples, double tol) {
    const WeightSpec nested = make_weight(w.eps / 5, w.eps, 0.0, w.order, w.mollifier);
    const WeightSpec wide = make_weight(w.eps / 5, w.b + w.eps, 0.0, w.order, w.mollifier);
    const double inv_len = 1.0 / w.ramp_length();
    const double lo = -0.5 * w.b, hi = 1.5 * w.b + w.eps;

    WeightFacts f;
    f.samples = samples;
    f.zero_left = f.one_right = f.derivative_bound = f.plateau_bound = f.support = f.nested_one = true;
    auto fail = [&](bool& flag, const char* name, double x, double amount) {
        flag = false;
        f.max_violation = std::max(f.max_violation, amount);
        throw FactViolation(name, x);
    };
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * i / (samples - 1);
        const double c0 = eval_weight(w, x, 0), c1 = eval_weight(w, x, 1);
        const double c2 = eval_weight(w, x, 2), c3 = eval_weight(w, x, 3);
        if (x <= w.eps && std::abs(c0) > tol) fail(f.zero_left, "chi vanishes left of eps", x, std::abs(c0));
        if (x >= w.b && std::abs(c0 - 1) > tol) fail(f.one_right, "chi equals one right of b", x, std::abs(c0 - 1));
        if (c1 < -tol || c1 > inv_len + tol)
            fail(f.derivative_bound, "0 <= chi' <= 1/(b-3eps)", x, std::max(-c1, c1 - inv_len));
        if (x > 3 * w.eps && x < w.b - 2 * w.eps && c1 < inv_len - tol)
            fail(f.plateau_bound, "chi' >= 1/(b-3eps) on (3eps, b-2eps)", x, inv_len - c1);
        if ((x < w.eps || x > w.b) && std::abs(c1) > tol) fail(f.support, "supp chi' within [eps, b]", x, std::abs(c1));
        if (c0 > 0 && std::abs(eval_weight(nested, x, 0) - 1) > tol)
            fail(f.nested_one, "chi_{eps/5,eps} = 1 on supp chi_{eps,b}", x, 1.0);
        const double dom = eval_weight(wide, x, 1);
        for (auto [val, c] : {std::pair{c2, &f.c_second}, std::pair{c3, &f.c_third}}) {
            if (std::abs(val) <= tol) continue;
            if (dom <= 0) throw FactViolation("|chi^(k)| <= c chi'_{eps/5,b+eps}", x);
            *c = std::max(*c, std::abs(val) / dom);
        }
    }
    return f;
}

} // namespace kplab
