#pragma once

#include "kplab/field.hpp"

#include <functional>
#include <string>
#include <vector>

namespace kplab {

enum class Scheme { IFRK4, ETDRK4 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Damping layer -sigma(x) u next to the periodic seam in x (x-mean removed so the
/// zero-mean constraint survives). sigma = strength / dt at the seam, with a smooth
/// cos^2 profile over `width`. Used only by forward runs that must not let content
/// wrap around the box.
struct AbsorberConfig {
    bool enabled = false;
    double width = 6.0;
    double strength = 0.5;
};

struct SolverConfig {
    Grid grid{256, 256, 32.0, 32.0};
    double dt = 2.5e-4;
    double t_end = 1.0;
    Scheme scheme = Scheme::IFRK4;
    int p = 1;
    bool dealias = true;
    bool nonlinear = true;
    bool backward = false;  ///< step with -dt; sample times are then <= 0
    AbsorberConfig absorber;
    double blowup_factor = 1e6;

    void validate() const;
    double signed_dt() const { return backward ? -dt : dt; }
};

/// omega(xi, eta) = i (xi^3 - eta^2/xi), 0 on xi = 0 and on the x-Nyquist row.
std::vector<cplx> linear_symbol(const Grid& grid);

/// -d/dx(u^(p+1)/(p+1)) with dealiased input and output when `dealias` is set.
Field nonlinear_rhs(const Field& u, int p, bool dealias = true);

/// Largest x group speed 3 xi^2 + eta^2/xi^2 over modes carrying more than
/// rel_threshold of the peak amplitude, and the corresponding wrap time lx / speed.
double max_group_speed(const Field& u, double rel_threshold = 1e-8);
double first_wrap_time(const Field& u, double rel_threshold = 1e-8);

/// dt <= 0.5 / max |xi^3 - eta^2/xi| (explicit-stability scale; IF schemes may exceed it).
double suggested_dt(const Grid& grid);

/// One-step integrator holding the precomputed exponentials and scratch buffers.
/// Not thread-safe; each evolution owns its own stepper.
class Stepper {
public:
    explicit Stepper(const SolverConfig& cfg);

    /// Advances uhat by signed_dt(). `t` is only used for error reporting.
    void step(std::vector<cplx>& uhat, double t);

    /// Explicit part R(u) = -P d/dx(u^(p+1)/(p+1)) - P0(sigma u), where P is the
    /// dealiasing projection and P0 removes the x-mean.
    void explicit_term(const std::vector<cplx>& uhat, std::vector<cplx>& out) const;

    void set_blowup_threshold(double v) { blowup_threshold_ = v; }
    const SolverConfig& config() const { return cfg_; }

private:
    void rhs(const std::vector<cplx>& uhat, std::vector<cplx>& out, double t, bool check) const;

    SolverConfig cfg_;
    std::vector<cplx> e_half_, e_full_;
    std::vector<cplx> q_, f1_, f2_, f3_;
    std::vector<cplx> flux_mult_;  // -(i xi), x-Nyquist zero
    std::vector<double> sigma_;
    std::vector<unsigned char> keep_;
    double blowup_threshold_ = 0;
    mutable std::vector<cplx> spec_scratch_;
    mutable std::vector<double> phys_, flux_;
    std::vector<cplx> k1_, k2_, k3_, k4_, a_, b_, c_;
};

Field step(const Field& u, const SolverConfig& cfg);

struct Trajectory {
    Grid grid;
    SolverConfig config;
    std::vector<double> times;  ///< increasing
    std::vector<Field> fields;
    std::vector<double> l2;
    double l2_drift = 0;
    double wrap_time = 0;

    /// Index of the sample at time t (within tol); -1 if absent.
    int find(double t, double tol = 1e-9) const;
};

/// Sample steps t_i = T (i / (count - 1))^grading rounded to steps, forced strictly
/// increasing (so the first samples of a graded set are consecutive steps).
std::vector<long> sample_steps(long n_steps, int count, double grading = 1.0);

struct EvolveOptions {
    int sample_count = 2;              ///< samples including both ends
    double grading = 1.0;              ///< 1: equispaced; > 1: clustered near t = 0
    std::vector<double> extra_times;   ///< additional sample times (rounded to steps)
    std::function<void(double, const Field&)> observer;
};

/// Evolves u0 over [0, t_end] (or [-t_end, 0] when backward). The step is adjusted to
/// t_end / round(t_end / dt) so the end point is hit exactly.
Trajectory evolve(const Field& u0, const SolverConfig& cfg, const EvolveOptions& opts = {});

/// Backward evolution through the reflection u(x,y,-t) = v(-x,y,t), v solving the
/// same equation forward from u0(-x,y). Cross-check for negative-dt stepping.
Field reflect_x(const Field& u);
Field evolve_backward_reflected(const Field& u0, SolverConfig cfg);

} // namespace kplab
