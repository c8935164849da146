#include "kplab/quadrature.hpp"
#include "kplab/spectral.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace kplab;
using kplab::test::pi;

namespace {

constexpr double wx = 1.5, wy = 2.0, xc = 0.5;

// F(x) = int f^2 dy for f = gauss_dx(xc, wx, wy), in closed form.
double profile_exact(double x) {
    const double z = (x - xc) / wx;
    return 4 * z * z / (wx * wx) * std::exp(-2 * z * z) * wy * std::sqrt(pi / 2);
}

template <class F>
double simpson(F&& f, double a, double b, int n = 40000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
    return s * h / 3;
}

const Grid kGrid(128, 64, 32, 24);

} // namespace

TEST_CASE("box integral equals the squared L2 norm") {
    const Field f = test::random_modes(kGrid, 40, 20, 4);
    const double n = l2_norm(f);
    CHECK(box_integral(y_profile(f)) == doctest::Approx(n * n).epsilon(1e-12));
    const Field g = test::random_modes(kGrid, 40, 20, 5);
    double dot = 0;
    for (std::size_t i = 0; i < kGrid.size(); ++i) dot += f.values()[i] * g.values()[i];
    CHECK(box_integral(y_profile(f, g)) == doctest::Approx(dot * kGrid.dx() * kGrid.dy()).epsilon(1e-11));
}

TEST_CASE("sharp windows match direct integration of the exact profile") {
    const XProfile p = y_profile(test::gauss_dx(kGrid, xc, wx, wy));
    for (double a : {-3.0, -0.2, 0.5, 1.7, 4.0}) {
        const double direct = simpson(profile_exact, a, kGrid.x_max());
        CHECK(window_integral(p, a) == doctest::Approx(direct).epsilon(1e-10));
    }
    CHECK(window_integral(p, kGrid.x_min() - 5) == doctest::Approx(box_integral(p)).epsilon(1e-13));
}

TEST_CASE("weighted integrals: closed form matches direct integration") {
    const XProfile p = y_profile(test::gauss_dx(kGrid, xc, wx, wy));
    const WeightSpec w = make_weight(0.25, 1.25, 1.0);
    for (double t : {0.0, 0.4, 1.0}) {
        for (int d = 0; d <= 3; ++d) {
            const auto ex = weighted_integral(p, w, d, t, QuadRoute::exact);
            const double direct = simpson([&](double x) { return profile_exact(x) * eval_weight(w, x + w.nu * t, d); },
                                          kGrid.x_min(), kGrid.x_max(), 200000);
            CHECK(std::abs(ex.value - direct) < 1e-10 * std::max(1.0, std::abs(direct)));
            CHECK_FALSE(ex.wrapped);
            CHECK(weighted_integral(p, w, d, t).value == ex.value);
        }
    }
}

TEST_CASE("trapezoid fallback converges to the closed form") {
    const XProfile p = y_profile(test::gauss_dx(kGrid, xc, wx, wy));
    const WeightSpec w = make_weight(0.25, 1.25, 1.0);
    for (double t : {0.0, 0.4}) {
        for (int d = 0; d <= 3; ++d) {
            const double ex = weighted_integral(p, w, d, t, QuadRoute::exact).value;
            const double e32 = std::abs(weighted_integral(p, w, d, t, QuadRoute::trapezoid, 32).value - ex);
            // chi''' has a jump in its fourth derivative, which limits the rule there.
            CHECK(e32 < (d < 3 ? 1e-9 : 1e-6) * std::abs(ex));
        }
    }
}

TEST_CASE("weights crossing the left edge are flagged") {
    const XProfile p = y_profile(test::gauss_dx(kGrid, xc, wx, wy));
    const WeightSpec w = make_weight(0.25, 1.25, 1.0);
    CHECK(weighted_integral(p, w, 1, 16.5).wrapped);
    CHECK_FALSE(weighted_integral(p, w, 1, 14.0).wrapped);
}

TEST_CASE("Sobolev profile sums the derivative profiles") {
    const Field f = test::random_modes(kGrid, 20, 10, 8);
    double sum = 0;
    for (int a1 = 0; a1 <= 3; ++a1)
        for (int a2 = 0; a1 + a2 <= 3; ++a2) {
            const double n = l2_norm(partial_deriv(f, {a1, a2}));
            sum += n * n;
        }
    CHECK(box_integral(sobolev_profile(f, 3)) == doctest::Approx(sum).epsilon(1e-11));
}

TEST_CASE("padded values interpolate band-limited fields exactly") {
    const Grid g(32, 32, 2 * pi, 2 * pi);
    const Field f = Field::from_function(g, [](double x, double y) { return std::sin(3 * x) * std::cos(5 * y) + std::cos(x); });
    const auto v = padded_values(f, 2, 3);
    double worst = 0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 96; ++j) {
            const double x = -pi + i * pi / 32, y = -pi + j * 2 * pi / 96;
            worst = std::max(worst, std::abs(v[std::size_t(i) * 96 + j] - (std::sin(3 * x) * std::cos(5 * y) + std::cos(x))));
        }
    CHECK(worst < 1e-13);
}

TEST_CASE("profile samples reproduce the profile") {
    const XProfile p = y_profile(test::gauss_dx(kGrid, xc, wx, wy));
    const auto s = profile_samples(p, 2);
    REQUIRE(s.size() == std::size_t(4 * kGrid.nx()));
    const double h = kGrid.lx() / s.size();
    double worst = 0;
    for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - profile_exact(kGrid.x_min() + i * h)));
    CHECK(worst < 1e-12);
}
