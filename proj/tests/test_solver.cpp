#include "kplab/errors.hpp"
#include "kplab/solver.hpp"
#include "kplab/spectral.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace kplab;
using kplab::test::pi;

namespace {

SolverConfig small_config(Scheme scheme = Scheme::IFRK4) {
    SolverConfig c;
    c.grid = Grid(64, 64, 16, 16);
    c.dt = 1e-3;
    c.t_end = 0.2;
    c.scheme = scheme;
    return c;
}

double rel_diff(const Field& a, const Field& b) { return max_abs_diff(a, b) / max_abs(b); }

Field packet(const Grid& g, double amp) { return dealias(test::gauss_dx(g, 0.0, 1.2, 1.5, amp)); }

} // namespace

TEST_CASE("configuration validation") {
    SolverConfig c = small_config();
    c.dt = 0;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c = small_config();
    c.p = 0;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c = small_config();
    c.t_end = -1;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    CHECK_THROWS_AS(scheme_from_string("RK45"), InvalidConfig);
    CHECK(scheme_from_string(to_string(Scheme::ETDRK4)) == Scheme::ETDRK4);
    c = small_config();
    CHECK_THROWS_AS(evolve(test::gauss_dx(Grid(32, 32, 16, 16)), c), InvalidConfig);
}

TEST_CASE("linear symbol vanishes on the x-mean and x-Nyquist rows") {
    const Grid g(32, 32, 8, 8);
    const auto w = linear_symbol(g);
    for (int k = 0; k < g.nky(); ++k) {
        CHECK(w[k] == cplx(0, 0));
        CHECK(w[std::size_t(g.nx() / 2) * g.nky() + k] == cplx(0, 0));
    }
    const double xi = g.xi(3), eta = g.eta(2);
    CHECK(std::abs(w[3 * g.nky() + 2] - cplx(0, xi * xi * xi - eta * eta / xi)) < 1e-12);
}

TEST_CASE("single linear mode follows the exact phase") {
    for (Scheme s : {Scheme::IFRK4, Scheme::ETDRK4}) {
        SolverConfig c = small_config(s);
        c.nonlinear = false;
        c.t_end = 1.0;
        c.dt = 0.01;
        const Grid& g = c.grid;
        const double xi = g.xi(3), eta = g.eta(2);
        const double w = xi * xi * xi - eta * eta / xi;
        const Field u0 = Field::from_function(g, [&](double x, double y) { return std::cos(xi * x + eta * y); });
        const auto tr = evolve(u0, c);
        const Field exact = Field::from_function(g, [&](double x, double y) { return std::cos(xi * x + eta * y + w); });
        CHECK(max_abs_diff(tr.fields.back(), exact) < 1e-12);
    }
}

TEST_CASE("conservative and direct nonlinear forms agree") {
    const Grid g(64, 64, 16, 16);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Field u = dealias(test::random_modes(g, 21, 21, seed));
        const Field rhs = nonlinear_rhs(u, 1, true);
        // direct form -u u_x, formed on a grid fine enough to be exact, then masked
        const Grid big(128, 128, 16, 16);
        const Field U = resample(u, big), Ux = resample(partial_deriv(u, {1, 0}), big);
        std::vector<double> prod(big.size());
        for (std::size_t i = 0; i < big.size(); ++i) prod[i] = -U.values()[i] * Ux.values()[i];
        const Field direct = dealias(resample(Field::from_values(big, prod), g));
        CHECK(rel_diff(rhs, direct) < 1e-10);
        for (int k = 0; k < g.nky(); ++k) CHECK(rhs.spectral()[k] == cplx(0, 0));
    }
}

TEST_CASE("self-convergence is fourth order") {
    for (Scheme s : {Scheme::IFRK4, Scheme::ETDRK4}) {
        SolverConfig c = small_config(s);
        c.t_end = 0.4;
        const Field u0 = packet(c.grid, 3.0);
        std::vector<Field> ends;
        for (double dt : {0.005, 0.0025, 0.00125}) {
            c.dt = dt;
            ends.push_back(evolve(u0, c).fields.back());
        }
        const double order = std::log2(max_abs_diff(ends[0], ends[1]) / max_abs_diff(ends[1], ends[2]));
        MESSAGE(to_string(s), " order ", order);
        CHECK(order >= 3.7);
    }
}

TEST_CASE("L2 norm is conserved") {
    SolverConfig c = small_config();
    const Field u0 = packet(c.grid, 2.0);
    const auto tr = evolve(u0, c, EvolveOptions{5});
    CHECK(tr.times.size() == 5u);
    CHECK(tr.l2_drift < 1e-8);
    for (double l : tr.l2) CHECK(std::abs(l / tr.l2.front() - 1) < 1e-8);
}

TEST_CASE("backward stepping returns to the data and matches the reflection") {
    SolverConfig c = small_config();
    const Field u0 = packet(c.grid, 1.0);
    const auto fwd = evolve(u0, c);
    SolverConfig b = c;
    b.backward = true;
    const auto back = evolve(fwd.fields.back(), b);
    CHECK(back.times.front() == doctest::Approx(-0.2));
    CHECK(back.times.back() == 0.0);
    CHECK(rel_diff(back.fields.front(), u0) < 1e-9);

    const auto neg = evolve(u0, b);
    const Field refl = evolve_backward_reflected(u0, b);
    CHECK(rel_diff(refl, neg.fields.front()) < 1e-12);
    CHECK(rel_diff(reflect_x(reflect_x(u0)), u0) == 0.0);
}

TEST_CASE("evolution is deterministic and keeps the x-mean row zero") {
    SolverConfig c = small_config(Scheme::ETDRK4);
    c.absorber.enabled = true;
    c.absorber.width = 3;
    const Field u0 = packet(c.grid, 1.0);
    const auto a = evolve(u0, c), b = evolve(u0, c);
    CHECK(max_abs_diff(a.fields.back(), b.fields.back()) == 0.0);
    for (int k = 0; k < c.grid.nky(); ++k) CHECK(a.fields.back().spectral()[k] == cplx(0, 0));
}

TEST_CASE("absorber damps content at the seam much more than inside") {
    SolverConfig c = small_config();
    c.nonlinear = false;
    c.absorber.enabled = true;
    c.absorber.width = 3;
    c.absorber.strength = 0.5;
    const auto ti = evolve(packet(c.grid, 1.0), c);
    const auto ts = evolve(dealias(test::gauss_dx(c.grid, 6.5, 0.3, 1.5)), c);
    const double inner_loss = 1 - ti.l2.back() / ti.l2.front();
    const double seam_loss = 1 - ts.l2.back() / ts.l2.front();
    CHECK(inner_loss >= 0);
    CHECK(seam_loss > 0.5);
    CHECK(inner_loss < 0.02 * seam_loss);
    c.absorber.enabled = false;
    CHECK(evolve(packet(c.grid, 1.0), c).l2_drift < 1e-12);
}

TEST_CASE("sample times and t_end = 0") {
    SolverConfig c = small_config();
    const Field u0 = packet(c.grid, 1.0);
    EvolveOptions o;
    o.sample_count = 3;
    o.extra_times = {0.05};
    const auto tr = evolve(u0, c, o);
    REQUIRE(tr.times.size() == 4u);
    CHECK(tr.find(0.05) == 1);
    CHECK(tr.find(0.1) == 2);
    CHECK(tr.find(0.07) == -1);
    c.t_end = 0;
    const auto z = evolve(u0, c);
    CHECK(z.times.size() == 1u);
    o.extra_times = {0.5};
    c.t_end = 0.2;
    CHECK_THROWS_AS(evolve(u0, c, o), InvalidConfig);
}

TEST_CASE("blowup is detected") {
    SolverConfig c = small_config();
    c.p = 3;
    c.dt = 0.05;
    c.t_end = 5;
    c.blowup_factor = 10;
    const Field u0 = packet(c.grid, 40.0);
    CHECK_THROWS_AS(evolve(u0, c), BlowupDetected);
}

TEST_CASE("group speed and wrap time of a single mode") {
    const Grid g(64, 64, 16, 16);
    const double xi = g.xi(2), eta = g.eta(3);
    const Field u = Field::from_function(g, [&](double x, double y) { return std::cos(xi * x) * std::cos(eta * y); });
    const double v = 3 * xi * xi + eta * eta / (xi * xi);
    CHECK(max_group_speed(u) == doctest::Approx(v).epsilon(1e-12));
    CHECK(first_wrap_time(u) == doctest::Approx(g.lx() / v).epsilon(1e-12));
    CHECK(suggested_dt(g) > 0);
}
