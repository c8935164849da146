#pragma once

#include <cstddef>
#include <vector>

namespace kplab {

/// Uniform periodic grid on the centred box [-lx/2, lx/2) x [-ly/2, ly/2).
/// Values are stored row-major with x as the slow index: v[ix * ny + iy].
/// Spectra use the real-to-complex layout over y: nx x (ny/2 + 1).
class Grid {
public:
    Grid() = default;
    Grid(int nx, int ny, double lx, double ly);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    int nky() const { return ny_ / 2 + 1; }

    std::size_t size() const { return std::size_t(nx_) * ny_; }
    std::size_t spectral_size() const { return std::size_t(nx_) * nky(); }

    double dx() const { return lx_ / nx_; }
    double dy() const { return ly_ / ny_; }
    double x_min() const { return -0.5 * lx_; }
    double x_max() const { return 0.5 * lx_; }
    double x(int i) const { return x_min() + i * dx(); }
    double y(int j) const { return -0.5 * ly_ + j * dy(); }

    /// Signed mode number of spectral row j (the Nyquist row maps to +nx/2).
    int mode_x(int j) const { return j <= nx_ / 2 ? j : j - nx_; }
    double xi(int j) const;
    double eta(int k) const;
    bool x_nyquist(int j) const { return j == nx_ / 2; }
    bool y_nyquist(int k) const { return k == ny_ / 2; }

    /// Full wavenumber arrays in FFT order (nx and ny entries).
    std::vector<double> wavenumbers_x() const;
    std::vector<double> wavenumbers_y() const;

    bool operator==(const Grid&) const = default;

private:
    int nx_ = 0, ny_ = 0;
    double lx_ = 0, ly_ = 0;
};

} // namespace kplab
