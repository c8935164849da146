#pragma once

#include "kplab/field.hpp"

#include <string>
#include <vector>

namespace kplab {

enum class DataKind { smooth_packet, one_sided_rough };

std::string to_string(DataKind k);
DataKind data_kind_from_string(const std::string& s);

/// u0 = d/dx [ A exp(-((x-xc)/wx)^2 - ((y-yc)/wy)^2) cos(k0 (x - xc)) ].
struct PacketParams {
    double amplitude = 0.05;
    double x_center = 5.0;
    double y_center = 0.0;
    double width_x = 3.0;
    double width_y = 3.0;
    double carrier = 0.0;  ///< k0; a carrier pushes content away from xi = 0
};

/// One-sided rough datum
///   u0 = d/dx [ A |x - x_s|^gamma exp(-((x-x_s)/wx)^2) exp(-(y/wy)^2) ],
/// so u0 ~ |x - x_s|^(gamma-1) near the singular line and lies in H^s for
/// s < gamma - 1/2 only, while it is smooth on (x0, inf) x R.
struct DataSpec {
    DataKind kind = DataKind::one_sided_rough;
    double x0 = 0.0;
    double x_singular = -2.0;
    double gamma = 2.6;
    int n_target = 3;
    double amplitude = 0.2;
    double width_x = 2.0;
    double width_y = 2.0;
    PacketParams packet;

    void validate() const;
    /// Global Sobolev exponent of the rough profile, gamma - 1/2.
    double regularity() const { return gamma - 0.5; }
};

Field smooth_packet(const Grid& grid, const PacketParams& params);
Field one_sided_rough(const Grid& grid, const DataSpec& spec);
Field make_data(const Grid& grid, const DataSpec& spec);

/// Convolution with the radial bump rho_tau = tau^-2 ((k+1)/pi)(1 - |z/tau|^2)^k.
Field mollify_data(const Field& u0, double tau, int k = 4);
/// Fourier transform of the unit radial bump at |kappa| = s.
double radial_bump_transform(int k, double s);

/// A quantity evaluated on the full band and on a half-band smooth truncation of the
/// same field; "stable" means the relative change is within tolerance.
struct RefinementCheck {
    double value = 0;
    double coarse = 0;
    double ratio = 1;
    bool stable = true;
};

struct HypothesisReport {
    double x0 = 0;
    int n = 0;
    double s = 0;
    double tolerance = 0.1;
    RefinementCheck xs_norm;          ///< ||u0||_{H^s}
    RefinementCheck xs_antiderivative; ///< ||dx^-1 u0||_{H^s}
    RefinementCheck windowed_hn;      ///< sum_{|a|<=n} ||d^a u0||^2 on (x0, inf)
    RefinementCheck windowed_dy3;     ///< ||dx^-1 dy^3 u0||^2 on (x0, inf)
    RefinementCheck global_hn;        ///< sum_{|a|<=n} ||d^a u0||^2 on the box
    bool dy3_required = true;         ///< only needed when s < 3
    bool passed = false;

    /// Names of the required items that are not refinement-stable.
    std::vector<std::string> failures() const;
};

/// Refinement compares the full field with its smooth half-band truncation.
HypothesisReport check_hypotheses(const Field& u0, double x0, int n, double s, double tol = 0.1);
/// Throws HypothesisFailed listing the unstable items.
void require_hypotheses(const HypothesisReport& r);

/// Half-band smooth truncation used by the refinement checks.
Field half_band(const Field& f);

/// sum over |a| <= n, a1 >= 0 of int_a^{x_max} (d^a f)^2 (sharp window).
double windowed_sobolev_sum(const Field& f, int n, double a);
/// Same over the interval [a, b].
double interval_sobolev_sum(const Field& f, int n, double a, double b);

} // namespace kplab
