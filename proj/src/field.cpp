#include "kplab/field.hpp"

#include "kplab/errors.hpp"
#include "kplab/kernels.hpp"

#include <cmath>
#include <numbers>

namespace kplab {

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 8 || ny < 8 || nx % 2 || ny % 2)
        throw InvalidGrid("grid sizes must be even and >= 8");
    if (!(lx > 0) || !(ly > 0)) throw InvalidGrid("box lengths must be positive");
}

double Grid::xi(int j) const { return 2 * std::numbers::pi / lx_ * mode_x(j); }
double Grid::eta(int k) const { return 2 * std::numbers::pi / ly_ * k; }

std::vector<double> Grid::wavenumbers_x() const {
    std::vector<double> w(nx_);
    for (int j = 0; j < nx_; ++j) w[j] = xi(j);
    return w;
}

std::vector<double> Grid::wavenumbers_y() const {
    std::vector<double> w(ny_);
    for (int k = 0; k < ny_; ++k) w[k] = 2 * std::numbers::pi / ly_ * (k <= ny_ / 2 ? k : k - ny_);
    return w;
}

Field::Field(const Grid& grid)
    : grid_(grid), values_(grid.size(), 0.0), spectral_(grid.spectral_size(), 0.0),
      has_values_(true), has_spectral_(true) {}

Field::Field(const Field& o) : grid_(o.grid_) {
    std::lock_guard<std::mutex> lock(*o.sync_);
    values_ = o.values_;
    spectral_ = o.spectral_;
    has_values_ = o.has_values_;
    has_spectral_ = o.has_spectral_;
}

Field& Field::operator=(const Field& o) {
    if (this != &o) {
        Field tmp(o);
        *this = std::move(tmp);
    }
    return *this;
}

Field::Field(Field&& o) noexcept
    : grid_(o.grid_), values_(std::move(o.values_)), spectral_(std::move(o.spectral_)),
      has_values_(o.has_values_), has_spectral_(o.has_spectral_) {
    o.has_values_ = o.has_spectral_ = false;
}

Field& Field::operator=(Field&& o) noexcept {
    grid_ = o.grid_;
    values_ = std::move(o.values_);
    spectral_ = std::move(o.spectral_);
    has_values_ = o.has_values_;
    has_spectral_ = o.has_spectral_;
    o.has_values_ = o.has_spectral_ = false;
    return *this;
}

Field Field::from_values(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw InvalidGrid("value array does not match grid");
    Field f;
    f.grid_ = grid;
    f.values_ = std::move(values);
    f.has_values_ = true;
    return f;
}

Field Field::from_spectral(const Grid& grid, std::vector<cplx> spectral) {
    if (spectral.size() != grid.spectral_size()) throw InvalidGrid("spectral array does not match grid");
    Field f;
    f.grid_ = grid;
    f.spectral_ = std::move(spectral);
    f.has_spectral_ = true;
    return f;
}

const std::vector<double>& Field::values() const {
    std::lock_guard<std::mutex> lock(*sync_);
    if (!has_values_ && grid_.nx() > 0) {
        std::vector<cplx> tmp = spectral_;
        values_.resize(grid_.size());
        fft::plan2d(grid_.nx(), grid_.ny())->inverse(tmp.data(), values_.data());
        kernels::scale(values_, 1.0 / double(grid_.size()));
        has_values_ = true;
    }
    return values_;
}

const std::vector<cplx>& Field::spectral() const {
    std::lock_guard<std::mutex> lock(*sync_);
    if (!has_spectral_ && grid_.nx() > 0) {
        spectral_.resize(grid_.spectral_size());
        fft::plan2d(grid_.nx(), grid_.ny())->forward(values_.data(), spectral_.data());
        has_spectral_ = true;
    }
    return spectral_;
}

std::vector<double>& Field::mutable_values() {
    values();
    has_spectral_ = false;
    return values_;
}

std::vector<cplx>& Field::mutable_spectral() {
    spectral();
    has_values_ = false;
    return spectral_;
}

namespace {

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw InvalidGrid("fields live on different grids");
}

} // namespace

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<cplx> s = a.spectral();
    const auto& t = b.spectral();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += t[i];
    return Field::from_spectral(a.grid(), std::move(s));
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<cplx> s = a.spectral();
    const auto& t = b.spectral();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= t[i];
    return Field::from_spectral(a.grid(), std::move(s));
}

Field operator*(double c, const Field& a) {
    std::vector<cplx> s = a.spectral();
    for (auto& z : s) z *= c;
    return Field::from_spectral(a.grid(), std::move(s));
}

double l2_norm(const Field& f) {
    const auto& v = f.values();
    std::vector<double> rows(f.grid().nx());
    kernels::row_sum_products(v, v, f.grid().nx(), f.grid().ny(), rows);
    double s = 0;
    for (double r : rows) s += r;
    return std::sqrt(s * f.grid().dx() * f.grid().dy());
}

double max_abs(const Field& f) { return kernels::max_abs(f.values()); }

double max_abs_diff(const Field& a, const Field& b) {
    require_same_grid(a, b);
    const auto& u = a.values();
    const auto& v = b.values();
    double m = 0;
    for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

} // namespace kplab
