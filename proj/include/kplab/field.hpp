#pragma once

#include "kplab/fft.hpp"
#include "kplab/grid.hpp"

#include <memory>
#include <mutex>
#include <vector>

namespace kplab {

/// Real periodic field with a lazily synchronized spectral view.
/// Concurrent reads are safe (materialization is guarded); mutation is not.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& grid);
    Field(const Field& other);
    Field& operator=(const Field& other);
    Field(Field&& other) noexcept;
    Field& operator=(Field&& other) noexcept;

    static Field from_values(const Grid& grid, std::vector<double> values);
    static Field from_spectral(const Grid& grid, std::vector<cplx> spectral);

    template <class F>
    static Field from_function(const Grid& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (int i = 0; i < grid.nx(); ++i)
            for (int j = 0; j < grid.ny(); ++j) v[std::size_t(i) * grid.ny() + j] = f(grid.x(i), grid.y(j));
        return from_values(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const;
    const std::vector<cplx>& spectral() const;

    /// Mutable access invalidates the other view.
    std::vector<double>& mutable_values();
    std::vector<cplx>& mutable_spectral();

    double at(int ix, int iy) const { return values()[std::size_t(ix) * grid_.ny() + iy]; }

private:
    Grid grid_;
    mutable std::vector<double> values_;
    mutable std::vector<cplx> spectral_;
    mutable bool has_values_ = false;
    mutable bool has_spectral_ = false;
    mutable std::unique_ptr<std::mutex> sync_ = std::make_unique<std::mutex>();
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

/// Trapezoid L2 norm from the physical samples.
double l2_norm(const Field& f);
double max_abs(const Field& f);
/// Largest |a - b| over the physical samples.
double max_abs_diff(const Field& a, const Field& b);

} // namespace kplab
