#pragma once

#include "kplab/quadrature.hpp"
#include "kplab/solver.hpp"
#include "kplab/spectral.hpp"
#include "kplab/weights.hpp"

#include <string>
#include <vector>

namespace kplab {

enum class BracketKind { plain, prime, double_prime };

std::string to_string(BracketKind k);
BracketKind bracket_kind_from_string(const std::string& s);

/// [a]   = int (d^a u)^2 chi(x + nu t)
/// [a]'  = int (dx d^a u)^2 chi'(x + nu t)
/// [a]'' = int (dx^-1 dy d^a u)^2 chi'(x + nu t)
struct BracketSpec {
    MultiIndex alpha;
    BracketKind kind = BracketKind::plain;
    WeightSpec weight;

    /// Index of the field that is squared.
    MultiIndex field_index() const;
    int weight_derivative() const { return kind == BracketKind::plain ? 0 : 1; }
    std::string label() const;
};

WeightedValue bracket(const Field& u, const BracketSpec& spec, double t, QuadRoute route = QuadRoute::automatic);

struct BracketSeries {
    BracketSpec spec;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<bool> wrapped;

    bool contaminated() const;
};

BracketSeries bracket_series(const Trajectory& traj, const BracketSpec& spec);

/// Terms of the weighted energy identity
///   (1/2) d/dt[a] + A1 + A2 + (3/2) A3 + (1/2) A4 + A5 = 0
/// with A5 = -int d^a(R(u)) d^a u chi, R the explicit (nonlinear and damping) part
/// of the solver, so the identity is the one satisfied by the semi-discrete flow.
struct EnergyTerms {
    double t = 0;
    double dt_probe = 0;
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0;
    double ddt_bracket = 0;
    double residual = 0;
    double relative = 0;
    bool wrapped = false;
};

/// A1..A5 at one time; ddt_bracket and residual are left at zero.
EnergyTerms energy_terms(const Field& u, MultiIndex alpha, const WeightSpec& w, double t, const SolverConfig& cfg);

/// Centered-difference residual at time t from samples at t and t +- dt_probe.
/// With include_nonlinear = false the explicit part is dropped (linear runs).
EnergyTerms energy_identity_residual(const Trajectory& traj, MultiIndex alpha, const WeightSpec& w, double t,
                                     double dt_probe, bool include_nonlinear = true);

struct GnResult {
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;
    bool violation = false;  ///< zero denominator with nonzero numerator
};

/// (int f^4 chi^2)^(1/2) / [int f^2 chi + int fx^2 chi + int fy^2 chi + int f^2 chi']
GnResult gn_check(const Field& f, const WeightSpec& w);
/// int f^6 / [int f^2 (int |grad f|^2)^2]
GnResult gn6_check(const Field& f);

struct SmoothingIntegrals {
    double prime = 0;       ///< int [a]' dt
    double dprime = 0;      ///< int [a]'' dt
    double prime_half = 0;  ///< same from every other sample
    double dprime_half = 0;
    bool dprime_defined = true;
    double drift = 0;       ///< largest relative change between full and half sampling
    bool stable = false;    ///< drift within tolerance
    bool wrapped = false;
};

/// Needs at least 20 samples.
SmoothingIntegrals smoothing_integrals(const Trajectory& traj, MultiIndex alpha, const WeightSpec& w,
                                       double tol = 0.02);
SmoothingIntegrals smoothing_integrals(const BracketSeries& prime, const BracketSeries* dprime, double tol = 0.02);

/// int |A1| dt / (nu/2) for the index (a1 + 1, a2), evaluated through energy_terms.
double chained_a1_integral(const Trajectory& traj, MultiIndex alpha, const WeightSpec& w);

/// Trapezoid rule over (possibly nonuniform) samples.
double trapezoid(const std::vector<double>& t, const std::vector<double>& v);

struct FunctionalSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<bool> wrapped;  ///< window start left of the box
    double sup = 0;
    double initial = 0;
    bool contaminated() const;
};

/// Sharp-window sums sum_{|a|<=n, a1>=0} int_{x0+eps-nu t}^{inf} (d^a u)^2.
FunctionalSeries theorem1_functional(const Trajectory& traj, int n, double x0, double eps, double nu);
/// Smooth counterpart with chi_{eps/5, eps}(x - x0 + nu t), which dominates the sharp one.
FunctionalSeries smooth_functional(const Trajectory& traj, int n, double x0, double eps, double nu);

struct GronwallFit {
    double c = 0;           ///< largest sampled slope of log S (>= 0)
    double max_excess = 0;  ///< max of S(t)/(S(0) e^{c t}) - 1
    bool bounded = false;
};

GronwallFit gronwall_fit(const std::vector<double>& t, const std::vector<double>& s);

} // namespace kplab
