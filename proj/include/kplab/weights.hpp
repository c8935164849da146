#pragma once

#include "kplab/fft.hpp"
#include "kplab/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace kplab {

enum class Mollifier {
    polynomial,  ///< C (1 - x^2)^k, exact piecewise-polynomial evaluation
    exponential  ///< C exp(-1 / (1 - x^2)), quadrature evaluation only
};

std::string to_string(Mollifier m);
Mollifier mollifier_from_string(const std::string& s);

/// Cutoff chi_{eps,b}(x + nu t): mollified ramp that is 0 for x <= eps and 1 for x >= b.
struct WeightSpec {
    double eps = 0.1;
    double b = 1.0;
    double nu = 0.0;
    int order = 4;
    Mollifier mollifier = Mollifier::polynomial;

    double ramp_length() const { return b - 3 * eps; }
};

WeightSpec make_weight(double eps, double b, double nu, int order = 4,
                       Mollifier mollifier = Mollifier::polynomial);

/// Normalization of the polynomial bump: 1 / int_{-1}^{1} (1 - x^2)^k dx.
double bump_constant(int k);
/// The unit bump rho and its derivatives (m = 0, 1, 2) on (-1, 1).
double bump(const WeightSpec& w, double z, int m = 0);

/// chi^(d)(x) for d in 0..3; exact for the polynomial bump, quadrature otherwise.
double eval_weight(const WeightSpec& w, double x, int d);
/// Reference path: adaptive Gauss-Kronrod on the convolution integral.
double eval_weight_quadrature(const WeightSpec& w, double x, int d);

/// Samples of chi^(d)(x + nu t) on the grid's x nodes.
struct WeightProfile {
    std::vector<double> x;
    std::array<std::vector<double>, 4> d;
    bool wrapped = false;
};
WeightProfile weight_profile(const WeightSpec& w, const Grid& grid, double t);

/// True when the transition [eps - nu t, b - nu t] is not inside the box.
bool weight_wraps(const WeightSpec& w, const Grid& grid, double t);

/// int e^{i kappa x} chi^(d)(x) dx for d in 1..3 (polynomial bump only).
cplx weight_transform(const WeightSpec& w, double kappa, int d);
/// Fourier transform of the unit bump at s: int e^{i s z} rho(z) dz.
double bump_transform(int k, double s);
/// int x chi'(x) dx
inline double weight_first_moment(const WeightSpec& w) { return 0.5 * (w.b + w.eps); }

struct WeightFacts {
    int samples = 0;
    bool zero_left = false;       ///< chi = 0 for x <= eps
    bool one_right = false;       ///< chi = 1 for x >= b
    bool derivative_bound = false; ///< 0 <= chi' <= 1/(b - 3 eps)
    bool plateau_bound = false;   ///< chi' >= 1/(b - 3 eps) on (3 eps, b - 2 eps)
    bool support = false;         ///< supp chi' within [eps, b]
    bool nested_one = false;      ///< chi_{eps/5, eps} = 1 where chi_{eps,b} > 0
    double c_second = 0;          ///< smallest sampled c with |chi''| <= c chi'_{eps/5, b+eps}
    double c_third = 0;           ///< same for chi'''
    double max_violation = 0;
    bool all() const {
        return zero_left && one_right && derivative_bound && plateau_bound && support && nested_one;
    }
};

/// Checks the support, bound and nesting facts on `samples` points; throws FactViolation.
WeightFacts check_weight_facts(const WeightSpec& w, int samples = 10000, double tol = 1e-10);

} // namespace kplab
