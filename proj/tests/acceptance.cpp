// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: kplab_acceptance [criterion numbers...]   (all when none are given)

#include "kplab/datagen.hpp"
#include "kplab/diagnostics.hpp"
#include "kplab/errors.hpp"
#include "kplab/experiments.hpp"
#include "kplab/schedule.hpp"
#include "kplab/spectral.hpp"
#include "kplab/weights.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

using namespace kplab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

double rel_diff(const Field& a, const Field& b) { return max_abs_diff(a, b) / max_abs(b); }

const fs::path kScenarioDir = KPLAB_SCENARIO_DIR;
const fs::path kOutDir = KPLAB_ACCEPTANCE_OUT;

// ---- 1: weight facts ----

Outcome weight_facts() {
    Outcome o{true, ""};
    for (auto [eps, b] : {std::pair{0.1, 1.0}, {0.05, 0.5}, {0.2, 1.5}}) {
        const WeightSpec w = make_weight(eps, b, 0.0);
        WeightFacts f;
        try {
            f = check_weight_facts(w, 10000, 1e-10);
        } catch (const FactViolation& e) {
            return {false, e.what()};
        }
        const bool ok = f.all() && f.samples == 10000 && std::isfinite(f.c_second) && f.c_second > 0;
        o.pass = o.pass && ok;
        o.detail += "(" + fmt(eps) + "," + fmt(b) + "): c=" + fmt(f.c_second) + (ok ? " " : " VIOLATED ");
    }
    return o;
}

// ---- 2: spectral core at 256^2 ----

Field fd4_dx(const Field& f) {
    const Grid& g = f.grid();
    const int nx = g.nx(), ny = g.ny();
    std::vector<double> out(g.size());
    const auto& v = f.values();
    auto at = [&](int i, int j) { return v[std::size_t((i + nx) % nx) * ny + j]; };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out[std::size_t(i) * ny + j] =
                (-at(i + 2, j) + 8 * at(i + 1, j) - 8 * at(i - 1, j) + at(i - 2, j)) / (12 * g.dx());
    return Field::from_values(g, out);
}

Outcome spectral_core() {
    const Grid g(256, 256, 32, 32);
    const Field f = test::random_modes(g, 80, 80, 11);
    const double inv = std::max(rel_diff(partial_deriv(antiderivative_x(f), {1, 0}), f),
                                rel_diff(antiderivative_x(partial_deriv(f, {1, 0})), f));
    const double pars = std::abs(sobolev_norm(f, 0) / l2_norm(f) - 1);
    double err[2];
    int i = 0;
    for (int n : {128, 256}) {
        const Field h = test::gauss_dx(Grid(n, n, 32, 32));
        err[i++] = max_abs_diff(fd4_dx(h), partial_deriv(h, {1, 0}));
    }
    const double order = std::log2(err[0] / err[1]);
    return {inv <= 1e-12 && pars <= 1e-10 && order >= 3.7 && order <= 4.3,
            "inverse pair " + fmt(inv) + ", Parseval " + fmt(pars) + ", FD order " + fmt(order)};
}

// ---- 3: solver ----

Outcome solver() {
    double phase = 0;
    {
        SolverConfig c;
        c.grid = Grid(256, 256, 32, 32);
        c.nonlinear = false;
        c.dt = 0.01;
        c.t_end = 1.0;
        const Grid& g = c.grid;
        const double xi = g.xi(5), eta = g.eta(3);
        const double w = xi * xi * xi - eta * eta / xi;
        const Field u0 = Field::from_function(g, [&](double x, double y) { return std::cos(xi * x + eta * y); });
        const Field exact = Field::from_function(g, [&](double x, double y) { return std::cos(xi * x + eta * y + w); });
        phase = max_abs_diff(evolve(u0, c).fields.back(), exact);
    }
    double order = 0;
    {
        SolverConfig c;
        c.grid = Grid(64, 64, 16, 16);
        c.t_end = 0.4;
        const Field u0 = dealias(test::gauss_dx(c.grid, 0.0, 1.2, 1.5, 3.0));
        std::vector<Field> ends;
        for (double dt : {0.005, 0.0025, 0.00125}) {
            c.dt = dt;
            ends.push_back(evolve(u0, c).fields.back());
        }
        order = std::log2(max_abs_diff(ends[0], ends[1]) / max_abs_diff(ends[1], ends[2]));
    }
    double drift = 0;
    {
        SolverConfig c;
        c.grid = Grid(256, 256, 32, 32);
        c.dt = 2.5e-4;
        c.t_end = 1.0;
        drift = evolve(make_data(c.grid, DataSpec{}), c, EvolveOptions{11}).l2_drift;
    }
    return {phase <= 1e-12 && order >= 3.7 && drift <= 1e-6,
            "phase error " + fmt(phase) + ", order " + fmt(order) + ", L2 drift " + fmt(drift)};
}

// ---- 4: energy identity ----

Outcome energy_identity() {
    SolverConfig c;
    c.grid = Grid(256, 256, 32, 32);
    c.dt = 2.5e-4;
    const double tc = 0.25;
    c.t_end = tc + 0.01;
    PacketParams p;
    p.amplitude = 0.5;
    p.x_center = 3;
    p.width_x = p.width_y = 3;
    p.carrier = 1;
    EvolveOptions o;
    o.extra_times = {tc - 0.01, tc - 0.005, tc, tc + 0.005};
    const Trajectory tr = evolve(smooth_packet(c.grid, p), c, o);
    const WeightSpec w = make_weight(0.25, 1.25, 1.0);
    Outcome out{true, ""};
    for (MultiIndex a : {MultiIndex{0, 0}, MultiIndex{2, 0}, MultiIndex{1, 1}}) {
        const auto coarse = energy_identity_residual(tr, a, w, tc, 0.01);
        const auto fine = energy_identity_residual(tr, a, w, tc, 0.005);
        const double gain = coarse.relative / fine.relative;
        out.pass = out.pass && fine.relative <= 1e-3 && gain >= 3 && !fine.wrapped;
        out.detail += "(" + std::to_string(a.a1) + "," + std::to_string(a.a2) + "): " + fmt(fine.relative) + " x" +
                      fmt(gain) + " ";
    }
    return out;
}

// ---- 5: GN certifiers ----

// The same band-limited field sampled on any grid of the box.
Field band_limited(const Grid& g, int modes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    std::map<std::pair<int, int>, cplx> coef;
    for (int m = 1; m <= modes; ++m)
        for (int k = -modes; k <= modes; ++k) coef[{m, k}] = cplx(n01(rng), n01(rng)) / (1.0 + m * m + k * k);
    std::vector<cplx> s(g.spectral_size(), 0.0);
    const double scale = double(g.size());
    for (int j = 0; j < g.nx(); ++j) {
        const int m = g.mode_x(j);
        if (m == 0 || std::abs(m) > modes) continue;
        for (int k = 0; k <= modes; ++k) {
            // real field sum c e^{i(mx+ky)} + conj: the half-spectrum entry at (m,k) is c(m,k) for m > 0
            // and conj c(-m,-k) for m < 0
            const cplx v = m > 0 ? coef.at({m, k}) : std::conj(coef.at({-m, -k}));
            s[std::size_t(j) * g.nky() + k] = scale * v;
        }
    }
    return Field::from_spectral(g, std::move(s));
}

Outcome gn_certifiers() {
    const WeightSpec w = make_weight(0.25, 1.25, 0.0);
    const Grid coarse(128, 128, 16, 16), fine(256, 256, 16, 16);
    double worst_gn = 0, worst_gn6 = 0, max_gn = 0, max_gn6 = 0;
    bool finite = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const int modes = 4 + int(seed % 9);
        const Field fc = band_limited(coarse, modes, seed), ff = band_limited(fine, modes, seed);
        const GnResult a = gn_check(fc, w), b = gn_check(ff, w), a6 = gn6_check(fc), b6 = gn6_check(ff);
        for (const GnResult* r : {&a, &b, &a6, &b6})
            finite = finite && !r->violation && std::isfinite(r->ratio) && r->ratio > 0;
        worst_gn = std::max(worst_gn, std::abs(b.ratio / a.ratio - 1));
        worst_gn6 = std::max(worst_gn6, std::abs(b6.ratio / a6.ratio - 1));
        max_gn = std::max(max_gn, b.ratio);
        max_gn6 = std::max(max_gn6, b6.ratio);
    }
    return {finite && worst_gn <= 0.1 && worst_gn6 <= 0.1,
            "max ratios gn " + fmt(max_gn) + " gn6 " + fmt(max_gn6) + ", refinement change gn " + fmt(worst_gn) +
                " gn6 " + fmt(worst_gn6)};
}

// ---- 6: schedule ----

long choose(int n, int k) {
    std::vector<std::vector<long>> c(n + 1, std::vector<long>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        c[i][0] = 1;
        for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c[n][k];
}

Outcome schedule() {
    using Members = std::vector<MultiIndex>;
    auto members = [](const std::vector<CaseGroup>& g) {
        std::vector<Members> out;
        for (const auto& c : g) out.push_back(c.members);
        return out;
    };
    std::vector<std::string> bad;
    if (members(case_schedule(3)) != std::vector<Members>{{{2, 0}}, {{1, 1}}, {{0, 2}}, {{-1, 3}}, {{3, 0}},
                                                           {{2, 1}, {1, 2}, {0, 3}}})
        bad.push_back("groups n=3");
    const auto g4 = members(case_schedule(4));
    if (g4.size() != 9 || g4[6] != Members{{4, 0}} || g4[7] != Members{{3, 1}, {2, 2}, {1, 3}} ||
        g4[8] != Members{{0, 4}})
        bad.push_back("groups n=4");
    for (int n = 3; n <= 10; ++n) {
        try {
            if (!dependency_closure(n).closed) bad.push_back("closure n=" + std::to_string(n));
        } catch (const BrokenChain& e) {
            bad.push_back(e.what());
        }
    }
    using T = std::map<std::pair<MultiIndex, MultiIndex>, long>;
    auto as_map = [](const std::vector<LeibnizTerm>& t) {
        T m;
        for (const auto& x : t) m[{x.beta, x.gamma}] += x.coef;
        return m;
    };
    const std::vector<std::pair<MultiIndex, T>> explicit_cases{
        {{2, 0}, {{{{0, 0}, {2, 0}}, 1}, {{{1, 0}, {1, 0}}, 3}}},
        {{1, 1}, {{{{0, 0}, {1, 1}}, 1}, {{{1, 0}, {0, 1}}, 2}, {{{0, 1}, {1, 0}}, 1}}},
        {{3, 0}, {{{{0, 0}, {3, 0}}, 1}, {{{1, 0}, {2, 0}}, 4}, {{{2, 0}, {1, 0}}, 3}}},
        {{4, 0}, {{{{0, 0}, {4, 0}}, 1}, {{{1, 0}, {3, 0}}, 5}, {{{2, 0}, {2, 0}}, 10}}},
        {{0, 3}, {{{{0, 3}, {0, 0}}, 1}, {{{0, 2}, {0, 1}}, 3}, {{{0, 1}, {0, 2}}, 3}, {{{0, 0}, {0, 3}}, 1}}}};
    for (const auto& [a, expected] : explicit_cases)
        if (as_map(grouped_leibniz_terms(a)) != expected)
            bad.push_back("coefficients (" + std::to_string(a.a1) + "," + std::to_string(a.a2) + ")");
    for (int a1 = 0; a1 <= 8; ++a1)
        for (int a2 = 0; a1 + a2 <= 8; ++a2)
            for (const auto& t : leibniz_terms({a1, a2}))
                if (t.coef != choose(a1, t.beta.a1) * choose(a2, t.beta.a2) || !(t.beta + t.gamma == MultiIndex{a1, a2}))
                    bad.push_back("binomial (" + std::to_string(a1) + "," + std::to_string(a2) + ")");
    std::string d = "groups n=3,4; closure n<=10; 5 explicit expansions; binomial |a|<=8";
    for (const auto& b : bad) d += "; mismatch: " + b;
    return {bad.empty(), d};
}

// ---- 7-10: scenarios ----

ScenarioConfig scenario(const std::string& file, const std::string& tag) {
    ScenarioConfig c = load_scenario((kScenarioDir / file).string());
    c.output_dir = (kOutDir / tag / c.name).string();
    fs::remove_all(c.output_dir);
    return c;
}

Report run_one(const ScenarioConfig& c) { return sweep({c}, 1).front(); }

std::string summary(const Report& r) {
    if (!r.error.empty()) return r.name + ": error " + r.error;
    std::string s = r.name + ":";
    for (const auto& v : r.verdicts) s += std::string(" ") + (v.pass ? "" : "!") + v.criterion;
    return s;
}

std::string verdict_detail(const Report& r, const std::string& criterion) {
    const Verdict* v = r.find(criterion);
    return v ? v->detail : "missing";
}

Outcome propagation() {
    const Report rough = run_one(scenario("theorem1_rough.json", "j1"));
    const Report control = run_one(scenario("theorem1_control.json", "j1"));
    bool ok = rough.all_pass() && control.all_pass();
    for (const char* c : {"hypotheses", "functional_bounded", "smoothing_finite"}) ok = ok && rough.find(c);
    ok = ok && control.find("functional_near_constant");
    return {ok, summary(rough) + " [" + verdict_detail(rough, "functional_bounded") + "; " +
                    verdict_detail(rough, "smoothing_finite") + "]; " + summary(control) + " [" +
                    verdict_detail(control, "functional_near_constant") + "]"};
}

Outcome backward() {
    const Report r = run_one(scenario("backward_contrast.json", "j1"));
    const bool ok = r.all_pass() && r.find("backward_refinement_unstable") && r.find("forward_refinement_stable");
    return {ok, summary(r) + " [" + verdict_detail(r, "backward_refinement_unstable") + "]"};
}

Outcome mollification() {
    const Report r = run_one(scenario("mollification_sweep.json", "j1"));
    return {r.all_pass() && r.find("uniform_in_tau"), summary(r) + " [" + verdict_detail(r, "uniform_in_tau") + "]"};
}

const std::vector<std::string> kScenarioFiles{"theorem1_rough.json", "theorem1_control.json", "backward_contrast.json",
                                              "mollification_sweep.json"};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    // Reuses the parallelism-1 outputs of criteria 7-9 when present.
    std::vector<ScenarioConfig> j1, j4;
    for (const auto& f : kScenarioFiles) {
        ScenarioConfig a = load_scenario((kScenarioDir / f).string());
        a.output_dir = (kOutDir / "j1" / a.name).string();
        if (!fs::exists(fs::path(a.output_dir) / "report.json")) {
            fs::remove_all(a.output_dir);
            j1.push_back(a);
        }
        j4.push_back(scenario(f, "j4"));
    }
    if (!j1.empty()) sweep(j1, 1);
    sweep(j4, 4);
    std::size_t compared = 0;
    std::vector<std::string> diff;
    for (const auto& c : j4) {
        const fs::path d4 = c.output_dir, d1 = kOutDir / "j1" / c.name;
        for (const auto& e : fs::directory_iterator(d4)) {
            if (e.path().extension() != ".csv") continue;
            ++compared;
            const fs::path other = d1 / e.path().filename();
            if (!fs::exists(other) || slurp(other) != slurp(e.path()))
                diff.push_back(c.name + "/" + e.path().filename().string());
        }
    }
    std::string d = std::to_string(compared) + " CSV files compared";
    for (const auto& x : diff) d += "; differs: " + x;
    return {compared > 0 && diff.empty(), d};
}

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "weight facts", 5, weight_facts},
        {2, "spectral core", 10, spectral_core},
        {3, "solver", 300, solver},
        {4, "energy identity", 120, energy_identity},
        {5, "GN certifiers", 120, gn_certifiers},
        {6, "schedule", 1, schedule},
        {7, "propagation of regularity", 600, propagation},
        {8, "backward contrast", 600, backward},
        {9, "mollification uniformity", 900, mollification},
        {10, "sweep determinism", std::numeric_limits<double>::infinity(), determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
    bool all_pass = true;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = secs <= c.budget_s;
        const bool pass = o.pass && in_budget;
        all_pass = all_pass && pass;
        std::cout << "[" << c.id << "] " << (pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail << " ("
                  << fmt(secs) << " s" << (in_budget ? "" : ", over the " + fmt(c.budget_s) + " s budget") << ")"
                  << std::endl;
    }
    return all_pass ? 0 : 1;
}
