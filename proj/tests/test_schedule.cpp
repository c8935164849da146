#include "kplab/errors.hpp"
#include "kplab/schedule.hpp"
#include "test_util.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

using namespace kplab;

namespace {

using Members = std::vector<MultiIndex>;

std::vector<Members> members(const std::vector<CaseGroup>& g) {
    std::vector<Members> out;
    for (const auto& c : g) out.push_back(c.members);
    return out;
}

bool has_dep(const std::vector<CaseGroup>& groups, MultiIndex consumer, MultiIndex source, BracketKind kind) {
    for (const auto& g : groups)
        for (const auto& d : g.dependencies)
            if (d.consumer == consumer && d.source == source && d.kind == kind) return true;
    return false;
}

std::map<std::pair<MultiIndex, MultiIndex>, long> as_map(const std::vector<LeibnizTerm>& t) {
    std::map<std::pair<MultiIndex, MultiIndex>, long> m;
    for (const auto& x : t) m[{x.beta, x.gamma}] += x.coef;
    return m;
}

long choose(int n, int k) {
    // Pascal triangle, independent of the library's multiplicative formula
    std::vector<std::vector<long>> c(n + 1, std::vector<long>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        c[i][0] = 1;
        for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c[n][k];
}

} // namespace

TEST_CASE("order 3 and 4 groups") {
    const auto g3 = case_schedule(3);
    CHECK(members(g3) == std::vector<Members>{{{2, 0}}, {{1, 1}}, {{0, 2}}, {{-1, 3}}, {{3, 0}}, {{2, 1}, {1, 2}, {0, 3}}});
    CHECK(g3.back().gronwall_joint);
    for (std::size_t i = 0; i + 1 < g3.size(); ++i) CHECK_FALSE(g3[i].gronwall_joint);

    const auto g4 = case_schedule(4);
    REQUIRE(g4.size() == 9);
    CHECK(g4[6].members == Members{{4, 0}});
    CHECK(g4[7].members == Members{{3, 1}, {2, 2}, {1, 3}});
    CHECK(g4[7].gronwall_joint);
    CHECK(g4[8].members == Members{{0, 4}});

    const auto j4 = case_schedule(4, {true});
    CHECK(j4[6].members == Members{{4, 0}, {3, 1}, {2, 2}, {1, 3}});
    CHECK(dependency_closure(4, {true}).closed);

    const auto g6 = case_schedule(6);
    CHECK(g6[g6.size() - 2].members == Members{{6, 0}, {5, 1}, {4, 2}, {3, 3}, {2, 4}, {1, 5}});
    CHECK(g6[g6.size() - 2].gronwall_joint);
    CHECK(g6.back().members == Members{{0, 6}});
    CHECK_THROWS_AS(case_schedule(2), InvalidOrder);
}

TEST_CASE("named dependencies") {
    const auto g = case_schedule(4);
    CHECK(has_dep(g, {3, 0}, {2, 0}, BracketKind::prime));
    CHECK(has_dep(g, {0, 3}, {-1, 3}, BracketKind::prime));
    CHECK(has_dep(g, {0, 3}, {1, 1}, BracketKind::double_prime));
    CHECK(has_dep(g, {2, 1}, {1, 1}, BracketKind::prime));
    CHECK(has_dep(g, {4, 0}, {3, 0}, BracketKind::prime));
    CHECK(has_dep(g, {0, 4}, {1, 3}, BracketKind::double_prime));
}

TEST_CASE("dependency closure") {
    for (int n = 3; n <= 10; ++n) {
        const auto groups = case_schedule(n);
        const auto r = dependency_closure(n);
        CHECK(r.closed);
        CHECK(r.n == n);
        for (const auto& c : groups)
            for (const auto& m : c.members) {
                CHECK(m.a1 >= -1);
                if (m.a1 == -1) CHECK(m == MultiIndex{-1, 3});
                if (!(m == MultiIndex{-1, 3}) && c.order > 2) CHECK(m.order() == c.order);
            }
        // topological order: sources strictly earlier
        std::map<MultiIndex, std::size_t> pos;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (const auto& m : groups[i].members) pos[m] = i;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (const auto& d : groups[i].dependencies) CHECK(pos.at(d.source) < i);
    }
    auto g = case_schedule(3);
    g.erase(g.begin() + 3);
    assign_dependencies(g);
    try {
        dependency_closure(g);
        FAIL("expected BrokenChain");
    } catch (const BrokenChain& e) {
        CHECK(std::string(e.what()).find("(0,3)") != std::string::npos);
    }
    CHECK_THROWS_AS(dependency_closure(2), InvalidOrder);
}

TEST_CASE("grouped Leibniz coefficients of the explicit cases") {
    using T = std::map<std::pair<MultiIndex, MultiIndex>, long>;
    // keys: {first factor index, gamma}; the second factor is dx d^gamma u
    CHECK(as_map(grouped_leibniz_terms({2, 0})) == T{{{{0, 0}, {2, 0}}, 1}, {{{1, 0}, {1, 0}}, 3}});
    CHECK(as_map(grouped_leibniz_terms({1, 1})) ==
          T{{{{0, 0}, {1, 1}}, 1}, {{{1, 0}, {0, 1}}, 2}, {{{0, 1}, {1, 0}}, 1}});
    CHECK(as_map(grouped_leibniz_terms({3, 0})) ==
          T{{{{0, 0}, {3, 0}}, 1}, {{{1, 0}, {2, 0}}, 4}, {{{2, 0}, {1, 0}}, 3}});
    CHECK(as_map(grouped_leibniz_terms({4, 0})) ==
          T{{{{0, 0}, {4, 0}}, 1}, {{{1, 0}, {3, 0}}, 5}, {{{2, 0}, {2, 0}}, 10}});
    CHECK(as_map(grouped_leibniz_terms({0, 3})) ==
          T{{{{0, 3}, {0, 0}}, 1}, {{{0, 2}, {0, 1}}, 3}, {{{0, 1}, {0, 2}}, 3}, {{{0, 0}, {0, 3}}, 1}});
    CHECK_THROWS_AS(leibniz_terms({-1, 3}), NegativeXOrder);
}

TEST_CASE("full expansion is the product of binomials") {
    for (int a1 = 0; a1 <= 8; ++a1)
        for (int a2 = 0; a1 + a2 <= 8; ++a2) {
            long sum = 0, grouped = 0;
            for (const auto& t : leibniz_terms({a1, a2})) {
                CHECK(t.coef == choose(a1, t.beta.a1) * choose(a2, t.beta.a2));
                CHECK(t.beta.order() + t.gamma.order() == a1 + a2);
                sum += t.coef;
            }
            for (const auto& t : grouped_leibniz_terms({a1, a2})) grouped += t.coef;
            CHECK(sum == (1L << (a1 + a2)));
            CHECK(grouped == sum);
        }
}

TEST_CASE("expansion reproduces the derivative of u ux on a band-limited field") {
    // u has modes |m|, |k| <= 4 so u ux is exactly representable on 32^2.
    const Grid g(32, 32, 2 * test::pi, 2 * test::pi);
    const Field u = test::random_modes(g, 4, 4, 11);
    const Field ux = partial_deriv(u, {1, 0});
    std::vector<double> prod(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) prod[i] = u.values()[i] * ux.values()[i];
    const Field uux = Field::from_values(g, prod);
    for (MultiIndex a : {MultiIndex{2, 0}, MultiIndex{1, 1}, MultiIndex{0, 3}, MultiIndex{3, 1}, MultiIndex{2, 2}}) {
        const Field lhs = partial_deriv(uux, a);
        std::vector<double> rhs(g.size(), 0.0);
        for (const auto& t : grouped_leibniz_terms(a)) {
            const Field b = partial_deriv(u, t.beta), c = partial_deriv(u, t.gamma + MultiIndex{1, 0});
            for (std::size_t i = 0; i < g.size(); ++i) rhs[i] += t.coef * b.values()[i] * c.values()[i];
        }
        double worst = 0, scale = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            worst = std::max(worst, std::abs(lhs.values()[i] - rhs[i]));
            scale = std::max(scale, std::abs(rhs[i]));
        }
        CHECK(worst < 1e-11 * scale);
    }
}

TEST_CASE("schedule output formats") {
    const auto g = case_schedule(4);
    const auto j = nlohmann::json::parse(schedule_json(g));
    REQUIRE(j.size() == g.size());
    CHECK(j[5]["gronwall_joint"] == true);
    CHECK(j[5]["members"][2] == nlohmann::json::array({0, 3}));
    bool found = false;
    for (const auto& d : j[5]["dependencies"])
        if (d["case"] == nlohmann::json::array({0, 3}) && d["source"] == nlohmann::json::array({-1, 3})) found = true;
    CHECK(found);
    const std::string dot = schedule_dot(g);
    CHECK(dot.rfind("digraph schedule {", 0) == 0);
    CHECK(dot.find("\"[2,0]\" -> \"[3,0]\"") != std::string::npos);
}
