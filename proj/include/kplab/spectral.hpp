#pragma once

#include "kplab/field.hpp"

#include <string>
#include <vector>

namespace kplab {

/// Derivative orders (a1, a2); a1 = -1 stands for one x-antiderivative.
struct MultiIndex {
    int a1 = 0;
    int a2 = 0;

    int order() const { return a1 + a2; }
    bool operator==(const MultiIndex&) const = default;
    auto operator<=>(const MultiIndex&) const = default;
    std::string str() const { return "(" + std::to_string(a1) + "," + std::to_string(a2) + ")"; }
};

inline MultiIndex operator+(MultiIndex a, MultiIndex b) { return {a.a1 + b.a1, a.a2 + b.a2}; }

/// Fourier multiplier of d^order/dz^order at wavenumber k. Odd orders vanish on the
/// Nyquist mode (its derivative is not representable as a real field); order -1
/// gives -i/k with 0 at k = 0.
cplx deriv_multiplier(double k, int order, bool nyquist);

Field partial_deriv(const Field& f, MultiIndex a);
Field antiderivative_x(const Field& f);
Field apply_alpha(const Field& f, MultiIndex a);

/// Zero-x-mean test used by antiderivative_x: the L2 norm of the x-mean part of f
/// must not exceed rel_tol * ||f||. Throws NonZeroXMean otherwise.
void require_zero_x_mean(const Field& f, double rel_tol = 1e-8);

/// 2/3-rule mask: modes with 3|m_x| >= nx or 3 k >= ny are set to zero.
void dealias(std::vector<cplx>& fhat, const Grid& grid);
Field dealias(const Field& f);
bool dealias_keeps(const Grid& grid, int j, int k);

/// Smooth exponential filter exp(-36 (|m|/cut)^36) applied along both axes,
/// with cut measured in mode numbers.
void smooth_filter(std::vector<cplx>& fhat, const Grid& grid, double cut_x, double cut_y);

/// (sum over the full spectrum of (1 + xi^2 + eta^2)^s |f^|^2 * lx ly / (nx ny)^2)^(1/2)
double sobolev_norm(const Field& f, double s);

/// Full-spectrum weight of a half-spectrum column (1 for k = 0 and the y-Nyquist, else 2).
inline double column_weight(const Grid& g, int k) { return (k == 0 || g.y_nyquist(k)) ? 1.0 : 2.0; }

/// Spectrum zero-padded (or truncated) in x to nx_new rows; the x-Nyquist row is split
/// evenly between +/- when padding so real-valuedness is preserved. Coefficients are
/// copied unscaled; multiply by nx_new / nx to keep physical values.
std::vector<cplx> resize_x(const std::vector<cplx>& fhat, const Grid& grid, int nx_new);

/// Spectral interpolation of a field to another resolution on the same box.
Field resample(const Field& f, const Grid& target);

} // namespace kplab
