#pragma once

#include "kplab/field.hpp"
#include "kplab/weights.hpp"

#include <vector>

namespace kplab {

/// y-integrated product F(x) = int a(x,y) b(x,y) dy of two band-limited fields,
/// held as Fourier coefficients on the box: F(x) = sum_m c_m e^{i kappa_m x},
/// kappa_m = 2 pi m / lx, m = -nx..nx-1. Only m = 0..nx is stored (F is real).
/// The product is formed on a grid padded 2x in x, so F is exact up to round-off.
struct XProfile {
    Grid grid;
    std::vector<cplx> c;

    XProfile& operator+=(const XProfile& o);
};

XProfile y_profile(const Field& a);
XProfile y_profile(const Field& a, const Field& b);

/// int over the whole box of F.
double box_integral(const XProfile& p);
/// int_a^{x_max} F dx; a is clamped to the box.
double window_integral(const XProfile& p, double a);

enum class QuadRoute {
    automatic, ///< closed-form moments when the weight sits inside the box, else refined trapezoid
    exact,
    trapezoid
};

struct WeightedValue {
    double value = 0;
    bool wrapped = false;
};

/// int F(x) chi^(d)(x + nu t) dx over the box. The closed-form route uses the
/// Fourier transform of the weight; the trapezoid route samples F `refine` times
/// finer than the padded grid.
WeightedValue weighted_integral(const XProfile& p, const WeightSpec& w, int d, double t,
                                QuadRoute route = QuadRoute::automatic, int refine = 4);

/// Same with the weight evaluated at x + shift.
WeightedValue weighted_integral_shift(const XProfile& p, const WeightSpec& w, int d, double shift,
                                      QuadRoute route = QuadRoute::automatic, int refine = 4);

/// Sum over |a| <= n, a1 >= 0 of the profiles of d^a f.
XProfile sobolev_profile(const Field& f, int n);

/// F on refine * 2 nx equispaced points starting at x_min.
std::vector<double> profile_samples(const XProfile& p, int refine);

/// Physical samples of f on a grid refined by (fx, fy); band-limited interpolation.
std::vector<double> padded_values(const Field& f, int fx, int fy);

} // namespace kplab
