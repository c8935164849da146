#include "kplab/experiments.hpp"

#include "kplab/errors.hpp"
#include "kplab/io.hpp"
#include "kplab/quadrature.hpp"
#include "kplab/schedule.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace kplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kRefinementTol = 0.1;   // |fine/coarse - 1| for "stable"
constexpr double kUnstableRatio = 1.5;   // fine/coarse for "unstable"
constexpr double kNearConstantTol = 0.2;
constexpr double kSmoothingDrift = 0.02;
constexpr double kBoxTol = 0.05;         // max |F - F_big| / sup F_big
constexpr double kUniformFactor = 2.0;
constexpr double kTauIndependentTol = 0.01;
constexpr double kRoundTripTol = 1e-12;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Verdict make_verdict(std::string criterion, bool pass, std::string detail) {
    return Verdict{std::move(criterion), pass, std::move(detail)};
}

SeriesData to_series(const std::vector<double>& t, const std::vector<double>& v, const std::vector<bool>& w) {
    return SeriesData{t, v, w};
}

SeriesData to_series(const FunctionalSeries& f) { return to_series(f.times, f.values, f.wrapped); }
SeriesData to_series(const BracketSeries& b) { return to_series(b.times, b.values, b.wrapped); }

bool any_wrapped(const SeriesData& s) { return std::any_of(s.wrapped.begin(), s.wrapped.end(), [](bool b) { return b; }); }

double series_max(const SeriesData& s) {
    double m = 0;
    for (double v : s.value) m = std::max(m, v);
    return m;
}

BracketSeries as_bracket(const SeriesData& s) {
    BracketSeries b;
    b.times = s.t;
    b.values = s.value;
    b.wrapped = s.wrapped;
    return b;
}

// Hypothesis table rows: item, value, coarse, ratio, stable, required.
struct HypRow {
    std::string item;
    double value = 0, coarse = 0, ratio = 1;
    bool stable = true, required = true;
};

std::vector<HypRow> hyp_rows(const HypothesisReport& r) {
    auto row = [](const char* name, const RefinementCheck& c, bool req) {
        return HypRow{name, c.value, c.coarse, c.ratio, c.stable, req};
    };
    return {row("xs_norm", r.xs_norm, true), row("xs_antiderivative", r.xs_antiderivative, true),
            row("windowed_hn", r.windowed_hn, true), row("windowed_dy3", r.windowed_dy3, r.dy3_required),
            row("global_hn", r.global_hn, false)};
}

std::string hyp_csv(const std::vector<HypRow>& rows) {
    std::string s = "item,value,coarse,ratio,stable,required\n";
    for (const auto& r : rows)
        s += r.item + "," + num(r.value) + "," + num(r.coarse) + "," + num(r.ratio) + "," + (r.stable ? "1" : "0") +
             "," + (r.required ? "1" : "0") + "\n";
    return s;
}

std::vector<HypRow> read_hyp_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot read " + path);
    std::string line;
    std::getline(in, line);
    std::vector<HypRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[6];
        for (auto& x : f) std::getline(ss, x, ',');
        rows.push_back(HypRow{f[0], std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), f[4] == "1", f[5] == "1"});
    }
    return rows;
}

// ---- verdict rules; each consumes exactly what the CSV files hold ----

Verdict v_hypotheses(const std::vector<HypRow>& rows) {
    std::string failed;
    for (const auto& r : rows)
        if (r.required && !r.stable) failed += (failed.empty() ? "" : ",") + r.item;
    return make_verdict("hypotheses", failed.empty(),
                        failed.empty() ? "all required items refinement-stable" : "unstable: " + failed);
}

// Largest gap between the functional and its counterpart on the longer box, relative to
// the counterpart's sup; infinite when the samples do not line up.
double box_gap(const SeriesData& f, const SeriesData& big) {
    if (f.value.size() != big.value.size() || f.value.empty()) return INFINITY;
    double gap = 0;
    for (std::size_t i = 0; i < f.value.size(); ++i) gap = std::max(gap, std::abs(f.value[i] - big.value[i]));
    const double sup = series_max(big);
    return sup > 0 ? gap / sup : (gap == 0 ? 0.0 : INFINITY);
}

// `big` is empty when no box check was configured.
Verdict v_functional_bounded(const SeriesData& f, const SeriesData& big, double k) {
    const double v0 = f.value.empty() ? 0 : f.value.front();
    const double sup = series_max(f);
    const bool checked = !big.value.empty();
    const double gap = checked ? box_gap(f, big) : 0.0;
    const bool clean = !any_wrapped(f) && !(checked && any_wrapped(big)) && gap <= kBoxTol;
    const bool pass = clean && std::isfinite(sup) && v0 > 0 && sup <= k * v0;
    std::string detail = "sup/initial=" + num(v0 > 0 ? sup / v0 : INFINITY) + " K=" + num(k);
    if (checked) detail += " box_gap=" + num(gap);
    if (any_wrapped(f)) detail += " wrapped";
    return make_verdict("functional_bounded", pass, detail);
}

Verdict v_refinement_stable(const std::string& criterion, const SeriesData& fine, const SeriesData& coarse) {
    if (fine.value.size() != coarse.value.size() || fine.value.empty())
        return make_verdict(criterion, false, "sample mismatch");
    double worst = 0;
    for (std::size_t i = 0; i < fine.value.size(); ++i) {
        const double c = coarse.value[i];
        const double r = c > 0 ? fine.value[i] / c : (fine.value[i] == 0 ? 1.0 : INFINITY);
        worst = std::max(worst, std::abs(r - 1));
    }
    const bool pass = worst <= kRefinementTol && !any_wrapped(fine) && !any_wrapped(coarse);
    return make_verdict(criterion, pass, "max |fine/coarse-1|=" + num(worst));
}

Verdict v_near_constant(const SeriesData& f) {
    const double v0 = f.value.empty() ? 0 : f.value.front();
    double worst = 0;
    for (double v : f.value) worst = std::max(worst, v0 > 0 ? std::abs(v / v0 - 1) : INFINITY);
    return make_verdict("functional_near_constant", worst <= kNearConstantTol && !any_wrapped(f),
                        "max |F/F0-1|=" + num(worst));
}

struct SmoothingInput {
    std::string label;
    SeriesData prime;
    std::optional<SeriesData> dprime;
};

Verdict v_smoothing(const std::vector<SmoothingInput>& in) {
    double worst = 0;
    int used = 0, skipped = 0;
    bool finite = true;
    for (const auto& s : in) {
        const BracketSeries p = as_bracket(s.prime);
        const BracketSeries d = s.dprime ? as_bracket(*s.dprime) : BracketSeries{};
        const auto r = smoothing_integrals(p, s.dprime ? &d : nullptr, kSmoothingDrift);
        if (r.wrapped) {
            ++skipped;
            continue;
        }
        ++used;
        finite = finite && std::isfinite(r.prime) && std::isfinite(r.dprime);
        worst = std::max(worst, r.drift);
    }
    const bool pass = used > 0 && finite && worst <= kSmoothingDrift;
    return make_verdict("smoothing_finite", pass,
                        "series=" + std::to_string(used) + " excluded=" + std::to_string(skipped) +
                            " max drift=" + num(worst));
}

double final_ratio(const SeriesData& fine, const SeriesData& coarse) {
    if (fine.value.empty() || coarse.value.empty()) return NAN;
    // Backward series are stored with increasing (negative) times, so t = -T is first.
    return coarse.value.front() > 0 ? fine.value.front() / coarse.value.front() : INFINITY;
}

Verdict v_backward(const SeriesData& fine, const SeriesData& coarse, bool rough) {
    const double r = final_ratio(fine, coarse);
    if (rough)
        return make_verdict("backward_refinement_unstable", r >= kUnstableRatio,
                            "fine/coarse at t=" + num(fine.t.empty() ? 0 : fine.t.front()) + " is " + num(r));
    return make_verdict("backward_refinement_stable", std::abs(r - 1) <= kRefinementTol,
                        "fine/coarse at t=" + num(fine.t.empty() ? 0 : fine.t.front()) + " is " + num(r));
}

Verdict v_round_trip(const SeriesData& rt) {
    // single row: t = 0, value = max|u(0) - u0| / max|u0|
    const double v = rt.value.empty() ? INFINITY : rt.value.front();
    return make_verdict("round_trip", v <= kRoundTripTol, "relative max diff=" + num(v));
}

std::vector<Verdict> v_tau(const std::vector<SeriesData>& per_tau, bool smooth) {
    std::vector<double> sups;
    int skipped = 0;
    for (const auto& s : per_tau) {
        if (any_wrapped(s)) {
            ++skipped;
            continue;
        }
        sups.push_back(series_max(s));
    }
    std::vector<Verdict> out;
    if (sups.empty()) {
        out.push_back(make_verdict("uniform_in_tau", false, "no clean series"));
        return out;
    }
    std::vector<double> sorted = sups;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    const double mx = sorted.back(), mn = sorted.front();
    out.push_back(make_verdict("uniform_in_tau", std::isfinite(mx) && mx <= kUniformFactor * median,
                               "max/median=" + num(mx / median) + " excluded=" + std::to_string(skipped)));
    if (smooth)
        out.push_back(make_verdict("tau_independent", mn > 0 && mx / mn - 1 <= kTauIndependentTol,
                                   "max/min-1=" + num(mn > 0 ? mx / mn - 1 : INFINITY)));
    return out;
}

// ---- output plumbing ----

struct Sink {
    std::string dir;
    Report* report;

    void write(const std::string& name, const std::string& content) const {
        report->files.push_back(name);
        if (dir.empty()) return;
        atomic_write((fs::path(dir) / name).string(), content);
    }
    void series(const std::string& name, const SeriesData& s) const { write(name, series_csv(s.t, s.value, s.wrapped)); }
};

Sink open_sink(const ScenarioConfig& cfg, Report& r) {
    if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);
    return Sink{cfg.output_dir, &r};
}

std::string bracket_file(int wi, const BracketSpec& s) { return "w" + std::to_string(wi) + "_" + s.label() + ".csv"; }

json hyp_json(const HypothesisReport& h) {
    json j = json::object();
    j["x0"] = h.x0;
    j["n"] = h.n;
    j["s"] = h.s;
    j["passed"] = h.passed;
    for (const auto& r : hyp_rows(h))
        j["items"][r.item] = {{"value", r.value}, {"coarse", r.coarse}, {"ratio", r.ratio},
                              {"stable", r.stable}, {"required", r.required}};
    return j;
}

SolverConfig on_grid(SolverConfig c, const Grid& g) {
    c.grid = g;
    return c;
}

Grid coarse_grid(const ScenarioConfig& cfg) {
    if (cfg.refine_grid) return *cfg.refine_grid;
    const Grid& g = cfg.solver.grid;
    return Grid(g.nx() / 2, g.ny() / 2, g.lx(), g.ly());
}

// Gate shared by all scenario kinds; returns false (with a failing verdict) when refused.
bool gate(const ScenarioConfig& cfg, const Field& u0, Report& r, const Sink& sink) {
    const auto h = check_hypotheses(u0, cfg.window_x0(), cfg.monitor_n, cfg.hypothesis_s);
    r.details["hypotheses"] = hyp_json(h);
    const auto rows = hyp_rows(h);
    sink.write("hypotheses.csv", hyp_csv(rows));
    r.details["csv"]["hypotheses"] = "hypotheses.csv";
    r.verdicts.push_back(v_hypotheses(rows));
    if (!h.passed) r.details["refused"] = "data fails the hypothesis checks; no propagation claim is made";
    return h.passed;
}

Report start(const ScenarioConfig& cfg) {
    cfg.validate();
    Report r;
    r.name = cfg.name;
    r.kind = cfg.kind;
    r.details["config"] = scenario_to_json(cfg);
    return r;
}

using DataOn = std::function<Field(const Grid&)>;

void propagate(const ScenarioConfig& cfg, const Field& u0, const DataOn& data_on, Report& r, const Sink& sink) {
    const WeightSpec& w0 = cfg.weights.front();
    const double t_end = cfg.solver.t_end;

    EvolveOptions opts;
    opts.sample_count = cfg.sample_count;
    opts.grading = cfg.sample_grading;
    std::vector<double> probe_centres;
    double probe = 0;
    if (cfg.energy_probe > 0 && t_end > 0) {
        // probe times are snapped to the step grid so the identity sees exact samples
        const long n_steps = std::max(1L, std::lround(t_end / cfg.solver.dt));
        const double dt = t_end / n_steps;
        probe = std::max(1L, std::lround(cfg.energy_probe / dt)) * dt;
        for (double f : {0.25, 0.5, 0.75}) {
            const double tc = std::lround(f * n_steps) * dt;
            probe_centres.push_back(tc);
            opts.extra_times.push_back(tc - probe);
            opts.extra_times.push_back(tc + probe);
        }
    }
    const Trajectory traj = evolve(u0, cfg.solver, opts);
    r.details["l2_drift"] = traj.l2_drift;
    r.details["wrap_time"] = traj.wrap_time;

    // Drop the probe-only samples so the recorded series keep the configured sampling.
    Trajectory uniform = traj;
    if (!opts.extra_times.empty()) {
        uniform.times.clear();
        uniform.fields.clear();
        uniform.l2.clear();
        const double dt = traj.config.dt;
        const long n_steps = std::lround(t_end / dt);
        for (long step : sample_steps(n_steps, cfg.sample_count, cfg.sample_grading)) {
            const int k = traj.find(step * dt, 1e-9 * std::max(1.0, t_end));
            if (k < 0) throw ReportIncomplete("missing uniform sample");
            uniform.times.push_back(traj.times[k]);
            uniform.fields.push_back(traj.fields[k]);
            uniform.l2.push_back(traj.l2[k]);
        }
    }

    // Main functional and its smooth dominating counterpart.
    const auto func = theorem1_functional(uniform, cfg.monitor_n, cfg.window_x0(), w0.eps, w0.nu);
    if (func.contaminated()) throw ReportIncomplete("functional window left the box");
    const auto sfunc = smooth_functional(uniform, cfg.monitor_n, cfg.window_x0(), w0.eps, w0.nu);
    const SeriesData fdata = to_series(func);
    sink.series("theorem1_functional.csv", fdata);
    sink.series("smooth_functional.csv", to_series(sfunc));
    r.details["csv"]["functional"] = "theorem1_functional.csv";
    r.details["functional"] = {{"initial", func.initial}, {"sup", func.sup},
                               {"smooth_initial", sfunc.initial}, {"smooth_sup", sfunc.sup}};

    // Wrap-around check: the same run on a box `box_check` times longer in x at equal
    // resolution. Content that crossed the seam is the only difference the window sees.
    SeriesData bdata;
    if (cfg.box_check > 0) {
        const Grid& g = cfg.solver.grid;
        const Grid gb(g.nx() * cfg.box_check, g.ny(), g.lx() * cfg.box_check, g.ly());
        EvolveOptions bopts;
        bopts.sample_count = cfg.sample_count;
        bopts.grading = cfg.sample_grading;
        const auto btraj = evolve(data_on(gb), on_grid(cfg.solver, gb), bopts);
        const auto bf = theorem1_functional(btraj, cfg.monitor_n, cfg.window_x0(), w0.eps, w0.nu);
        bdata = to_series(bf);
        sink.series("theorem1_functional_box.csv", bdata);
        r.details["csv"]["functional_box"] = "theorem1_functional_box.csv";
    }
    r.details["contamination"] = {{"functional_wrapped", func.contaminated()},
                                  {"smooth_functional_wrapped", sfunc.contaminated()},
                                  {"box_check", cfg.box_check}};
    if (cfg.box_check > 0) r.details["contamination"]["box_gap"] = box_gap(fdata, bdata);
    r.verdicts.push_back(v_functional_bounded(fdata, bdata, cfg.growth_factor));
    if (cfg.data.kind == DataKind::smooth_packet) r.verdicts.push_back(v_near_constant(fdata));

    // Schedule-driven brackets, smoothing integrals and Gronwall fits.
    const auto groups = case_schedule(cfg.monitor_n);
    std::vector<SmoothingInput> smoothing;
    json brackets = json::array(), smooth_j = json::array(), gron = json::array(), excluded = json::array();
    for (std::size_t wi = 0; wi < cfg.weights.size(); ++wi) {
        const WeightSpec& w = cfg.weights[wi];
        for (const auto& g : groups) {
            std::vector<double> sum(uniform.times.size(), 0.0);
            bool group_clean = true;
            for (const auto& a : g.members) {
                SmoothingInput si;
                si.label = "w" + std::to_string(wi) + "_" + a.str();
                for (BracketKind k : {BracketKind::plain, BracketKind::prime, BracketKind::double_prime}) {
                    if (k == BracketKind::double_prime && a.a1 - 1 < -1) continue;
                    const BracketSpec spec{a, k, w};
                    const auto series = bracket_series(uniform, spec);
                    const std::string file = bracket_file(static_cast<int>(wi), spec);
                    sink.series(file, to_series(series));
                    brackets.push_back({{"alpha", a.str()}, {"kind", to_string(k)}, {"weight", wi},
                                        {"file", file}, {"sup", *std::max_element(series.values.begin(), series.values.end())},
                                        {"contaminated", series.contaminated()}});
                    if (series.contaminated()) excluded.push_back(file);
                    if (k == BracketKind::plain) {
                        group_clean = group_clean && !series.contaminated();
                        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += series.values[i];
                    } else if (k == BracketKind::prime) {
                        si.prime = to_series(series);
                    } else {
                        si.dprime = to_series(series);
                    }
                }
                const BracketSeries p = as_bracket(si.prime), d = si.dprime ? as_bracket(*si.dprime) : BracketSeries{};
                const auto integ = smoothing_integrals(p, si.dprime ? &d : nullptr, kSmoothingDrift);
                smooth_j.push_back({{"label", si.label}, {"prime", integ.prime}, {"dprime", integ.dprime},
                                    {"dprime_defined", integ.dprime_defined}, {"drift", integ.drift},
                                    {"wrapped", integ.wrapped},
                                    {"prime_file", bracket_file(static_cast<int>(wi), {a, BracketKind::prime, w})},
                                    {"dprime_file", si.dprime ? json(bracket_file(static_cast<int>(wi),
                                                                                  {a, BracketKind::double_prime, w}))
                                                              : json(nullptr)}});
                smoothing.push_back(std::move(si));
            }
            if (group_clean) {
                const auto fit = gronwall_fit(uniform.times, sum);
                json members = json::array();
                for (const auto& a : g.members) members.push_back(a.str());
                gron.push_back({{"weight", wi}, {"members", members}, {"c", fit.c},
                                {"max_excess", fit.max_excess}, {"bounded", fit.bounded}});
            }
        }
    }
    r.details["brackets"] = brackets;
    r.details["smoothing_integrals"] = smooth_j;
    r.details["gronwall"] = gron;
    r.details["excluded_series"] = excluded;
    json sm_files = json::array();
    for (const auto& s : smooth_j) sm_files.push_back({s["prime_file"], s["dprime_file"]});
    r.details["csv"]["smoothing"] = sm_files;
    r.verdicts.push_back(v_smoothing(smoothing));

    // Energy identity samples.
    if (!probe_centres.empty()) {
        json e = json::array();
        for (double tc : probe_centres)
            for (MultiIndex a : {MultiIndex{0, 0}, MultiIndex{2, 0}, MultiIndex{1, 1}}) {
                const auto et = energy_identity_residual(traj, a, w0, tc, probe, cfg.solver.nonlinear);
                e.push_back({{"t", tc}, {"alpha", a.str()}, {"residual", et.residual}, {"relative", et.relative},
                             {"a1", et.a1}, {"a2", et.a2}, {"a3", et.a3}, {"a4", et.a4}, {"a5", et.a5},
                             {"ddt_bracket", et.ddt_bracket}, {"wrapped", et.wrapped}});
            }
        r.details["energy_samples"] = e;
    }

    // Grid refinement of the functional.
    if (cfg.refine_grid) {
        const Grid& gc = *cfg.refine_grid;
        const Field uc = data_on(gc);
        EvolveOptions copts;
        copts.sample_count = cfg.sample_count;
        copts.grading = cfg.sample_grading;
        const auto ctraj = evolve(uc, on_grid(cfg.solver, gc), copts);
        const auto cf = theorem1_functional(ctraj, cfg.monitor_n, cfg.window_x0(), w0.eps, w0.nu);
        const SeriesData cdata = to_series(cf);
        sink.series("theorem1_functional_coarse.csv", cdata);
        r.details["csv"]["functional_coarse"] = "theorem1_functional_coarse.csv";
        r.verdicts.push_back(v_refinement_stable("functional_refinement_stable", fdata, cdata));
    }
}

std::string tau_file(std::size_t i, MultiIndex a) {
    return "tau" + std::to_string(i) + "_bracket_" + std::to_string(a.a1) + "_" + std::to_string(a.a2) + ".csv";
}

} // namespace

// ---- names and config ----

std::string to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::propagation: return "propagation";
    case ScenarioKind::backward: return "backward";
    case ScenarioKind::mollification: return "mollification";
    }
    return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "propagation") return ScenarioKind::propagation;
    if (s == "backward") return ScenarioKind::backward;
    if (s == "mollification") return ScenarioKind::mollification;
    throw InvalidConfig("unknown scenario kind '" + s + "'");
}

void ScenarioConfig::validate() const {
    if (monitor_n < 3) throw InvalidConfig("monitor_n must be >= 3");
    if (sample_count < 20) throw InvalidConfig("sample_count must be >= 20");
    if (!(sample_grading >= 1.0)) throw InvalidConfig("sample_grading must be >= 1");
    if (box_check == 1 || box_check < 0) throw InvalidConfig("box_check must be 0 (off) or >= 2");
    if (weights.empty()) throw InvalidConfig("at least one weight is required");
    for (const auto& w : weights) make_weight(w.eps, w.b, w.nu, w.order, w.mollifier);
    if (!(growth_factor > 0)) throw InvalidConfig("K must be positive");
    if (!(hypothesis_s > 0)) throw InvalidConfig("hypothesis_s must be positive");
    if (energy_probe < 0) throw InvalidConfig("energy_probe must be >= 0");
    if (!(backward_time > 0)) throw InvalidConfig("backward time must be positive");
    data.validate();
    solver.validate();
    if (solver.backward) throw InvalidConfig("scenario solvers run forward; use kind 'backward'");
    if (refine_grid && (refine_grid->lx() != solver.grid.lx() || refine_grid->ly() != solver.grid.ly()))
        throw InvalidConfig("refine grid must cover the same box");
    if (kind == ScenarioKind::mollification) {
        if (taus.empty()) throw InvalidConfig("mollification needs taus");
        for (std::size_t i = 0; i < taus.size(); ++i) {
            if (!(taus[i] > 0)) throw InvalidConfig("taus must be positive");
            if (i && !(taus[i] < taus[i - 1])) throw InvalidConfig("taus must be decreasing");
        }
    }
}

namespace {

// Every key of the input must appear in the canonical form of the parsed config.
void reject_unknown_keys(const json& in, const json& known, const std::string& where) {
    if (!in.is_object() || !known.is_object()) return;
    for (const auto& [key, value] : in.items()) {
        if (!known.contains(key)) throw InvalidConfig("config: unknown key '" + where + key + "'");
        const json& k = known[key];
        if (value.is_array() && k.is_array() && !k.empty())
            for (const auto& item : value) reject_unknown_keys(item, k.front(), where + key + "[].");
        else
            reject_unknown_keys(value, k, where + key + ".");
    }
}

} // namespace

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig c;
    try {
        c.name = j.value("name", c.name);
        c.kind = scenario_kind_from_string(j.value("kind", to_string(c.kind)));
        if (j.contains("data")) {
            const auto& d = j["data"];
            c.data.kind = data_kind_from_string(d.value("kind", to_string(c.data.kind)));
            c.data.x0 = d.value("x0", c.data.x0);
            c.data.x_singular = d.value("x_singular", c.data.x_singular);
            c.data.gamma = d.value("gamma", c.data.gamma);
            c.data.n_target = d.value("n_target", c.data.n_target);
            c.data.amplitude = d.value("amplitude", c.data.amplitude);
            c.data.width_x = d.value("width_x", c.data.width_x);
            c.data.width_y = d.value("width_y", c.data.width_y);
            if (d.contains("packet")) {
                const auto& p = d["packet"];
                auto& q = c.data.packet;
                q.amplitude = p.value("amplitude", q.amplitude);
                q.x_center = p.value("x_center", q.x_center);
                q.y_center = p.value("y_center", q.y_center);
                q.width_x = p.value("width_x", q.width_x);
                q.width_y = p.value("width_y", q.width_y);
                q.carrier = p.value("carrier", q.carrier);
            }
        }
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            auto& v = c.solver;
            v.grid = Grid(s.value("nx", v.grid.nx()), s.value("ny", v.grid.ny()), s.value("lx", v.grid.lx()),
                          s.value("ly", v.grid.ly()));
            v.dt = s.value("dt", v.dt);
            v.t_end = s.value("t_end", v.t_end);
            v.scheme = scheme_from_string(s.value("scheme", to_string(v.scheme)));
            v.p = s.value("p", v.p);
            v.dealias = s.value("dealias", v.dealias);
            v.nonlinear = s.value("nonlinear", v.nonlinear);
            v.blowup_factor = s.value("blowup_factor", v.blowup_factor);
            if (s.contains("absorber")) {
                const auto& a = s["absorber"];
                v.absorber.enabled = a.value("enabled", v.absorber.enabled);
                v.absorber.width = a.value("width", v.absorber.width);
                v.absorber.strength = a.value("strength", v.absorber.strength);
            }
        }
        if (j.contains("weights")) {
            c.weights.clear();
            for (const auto& w : j["weights"]) {
                WeightSpec ws;
                ws.eps = w.at("eps").get<double>();
                ws.b = w.at("b").get<double>();
                ws.nu = w.value("nu", 0.0);
                ws.order = w.value("order", 4);
                ws.mollifier = mollifier_from_string(w.value("mollifier", to_string(Mollifier::polynomial)));
                c.weights.push_back(ws);
            }
        }
        c.monitor_n = j.value("monitor_n", c.monitor_n);
        c.sample_count = j.value("sample_count", c.sample_count);
        c.sample_grading = j.value("sample_grading", c.sample_grading);
        c.box_check = j.value("box_check", c.box_check);
        if (j.contains("window_x0")) c.window = j["window_x0"].get<double>();
        c.hypothesis_s = j.value("hypothesis_s", c.hypothesis_s);
        c.growth_factor = j.value("K", c.growth_factor);
        if (j.contains("refine")) {
            const auto& r = j["refine"];
            c.refine_grid = Grid(r.at("nx").get<int>(), r.at("ny").get<int>(), c.solver.grid.lx(), c.solver.grid.ly());
        }
        c.energy_probe = j.value("energy_probe", c.energy_probe);
        if (j.contains("backward")) {
            c.backward_time = j["backward"].value("time", c.backward_time);
            c.backward_window = j["backward"].value("window", c.backward_window);
        }
        if (j.contains("taus")) c.taus = j["taus"].get<std::vector<double>>();
        if (j.contains("mollify_alpha")) {
            const auto a = j["mollify_alpha"].get<std::vector<int>>();
            if (a.size() != 2) throw InvalidConfig("mollify_alpha needs two entries");
            c.mollify_alpha = {a[0], a[1]};
        }
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config: ") + e.what());
    }
    c.validate();
    reject_unknown_keys(j, scenario_to_json(c), "");
    return c;
}

json scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["kind"] = to_string(c.kind);
    const auto& d = c.data;
    j["data"] = {{"kind", to_string(d.kind)}, {"x0", d.x0}, {"x_singular", d.x_singular}, {"gamma", d.gamma},
                 {"n_target", d.n_target}, {"amplitude", d.amplitude}, {"width_x", d.width_x},
                 {"width_y", d.width_y},
                 {"packet", {{"amplitude", d.packet.amplitude}, {"x_center", d.packet.x_center},
                             {"y_center", d.packet.y_center}, {"width_x", d.packet.width_x},
                             {"width_y", d.packet.width_y}, {"carrier", d.packet.carrier}}}};
    const auto& s = c.solver;
    j["solver"] = {{"nx", s.grid.nx()}, {"ny", s.grid.ny()}, {"lx", s.grid.lx()}, {"ly", s.grid.ly()}, {"dt", s.dt},
                   {"t_end", s.t_end}, {"scheme", to_string(s.scheme)}, {"p", s.p}, {"dealias", s.dealias},
                   {"nonlinear", s.nonlinear}, {"blowup_factor", s.blowup_factor},
                   {"absorber", {{"enabled", s.absorber.enabled}, {"width", s.absorber.width},
                                 {"strength", s.absorber.strength}}}};
    j["weights"] = json::array();
    for (const auto& w : c.weights)
        j["weights"].push_back({{"eps", w.eps}, {"b", w.b}, {"nu", w.nu}, {"order", w.order},
                                {"mollifier", to_string(w.mollifier)}});
    j["monitor_n"] = c.monitor_n;
    j["sample_count"] = c.sample_count;
    j["sample_grading"] = c.sample_grading;
    j["box_check"] = c.box_check;
    if (c.window) j["window_x0"] = *c.window;
    j["hypothesis_s"] = c.hypothesis_s;
    j["K"] = c.growth_factor;
    if (c.refine_grid) j["refine"] = {{"nx", c.refine_grid->nx()}, {"ny", c.refine_grid->ny()}};
    j["energy_probe"] = c.energy_probe;
    j["backward"] = {{"time", c.backward_time}, {"window", c.backward_window}};
    j["taus"] = c.taus;
    j["mollify_alpha"] = {c.mollify_alpha.a1, c.mollify_alpha.a2};
    j["output_dir"] = c.output_dir;
    return j;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidConfig(path + ": " + e.what());
    }
    if (j.contains("output_dir")) {
        fs::path out = j["output_dir"].get<std::string>();
        if (out.is_relative()) j["output_dir"] = (fs::path(path).parent_path() / out).lexically_normal().string();
    }
    return scenario_from_json(j);
}

// ---- reports ----

bool Report::all_pass() const {
    return error.empty() && !verdicts.empty() &&
           std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict* Report::find(const std::string& criterion) const {
    for (const auto& v : verdicts)
        if (v.criterion == criterion) return &v;
    return nullptr;
}

json Report::to_json() const {
    json j;
    j["name"] = name;
    j["kind"] = kplab::to_string(kind);
    j["verdicts"] = json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back({{"criterion", v.criterion}, {"pass", v.pass}, {"detail", v.detail}});
    j["all_pass"] = all_pass();
    j["error"] = error;
    j["files"] = files;
    j["details"] = details;
    return j;
}

std::string series_csv(const std::vector<double>& t, const std::vector<double>& v, const std::vector<bool>& wrapped) {
    std::string s = "t,value,wrapped_flag\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        s += num(t[i]) + "," + num(v[i]) + "," + (i < wrapped.size() && wrapped[i] ? "1" : "0") + "\n";
    return s;
}

SeriesData read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot read " + path);
    SeriesData s;
    std::string line;
    std::getline(in, line);
    if (line != "t,value,wrapped_flag") throw InvalidConfig(path + ": unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        s.t.push_back(std::stod(a));
        s.value.push_back(std::stod(b));
        s.wrapped.push_back(c == "1");
    }
    return s;
}

// ---- scenarios ----

Report run_propagation(const ScenarioConfig& cfg) {
    Report r = start(cfg);
    const Sink sink = open_sink(cfg, r);
    const Field u0 = make_data(cfg.solver.grid, cfg.data);
    if (gate(cfg, u0, r, sink))
        propagate(cfg, u0, [&](const Grid& g) { return make_data(g, cfg.data); }, r, sink);
    return r;
}

Report run_backward_contrast(const ScenarioConfig& cfg) {
    Report r = start(cfg);
    const Sink sink = open_sink(cfg, r);
    const Grid& gf = cfg.solver.grid;
    const Grid gc = coarse_grid(cfg);
    const Field u0 = make_data(gf, cfg.data);
    if (!gate(cfg, u0, r, sink)) return r;
    const Field u0c = make_data(gc, cfg.data);
    const bool rough = cfg.data.kind == DataKind::one_sided_rough;
    const WeightSpec& w0 = cfg.weights.front();

    // Backward: periodic negative-dt stepping, right half-plane window.
    SolverConfig back = cfg.solver;
    back.backward = true;
    back.t_end = cfg.backward_time;
    back.absorber.enabled = false;
    EvolveOptions opts;
    opts.sample_count = cfg.sample_count;
    opts.grading = cfg.sample_grading;
    auto windowed = [&](const Trajectory& tr) {
        SeriesData s;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            s.t.push_back(tr.times[i]);
            s.value.push_back(windowed_sobolev_sum(tr.fields[i], cfg.monitor_n, cfg.backward_window));
            s.wrapped.push_back(false);
        }
        return s;
    };
    const auto bf = evolve(u0, back, opts);
    const auto bc = evolve(u0c, on_grid(back, gc), opts);
    const SeriesData sbf = windowed(bf), sbc = windowed(bc);
    sink.series("backward_fine.csv", sbf);
    sink.series("backward_coarse.csv", sbc);
    r.details["csv"]["backward_fine"] = "backward_fine.csv";
    r.details["csv"]["backward_coarse"] = "backward_coarse.csv";
    r.details["backward"] = {{"time", -cfg.backward_time}, {"window", cfg.backward_window},
                             {"ratio", final_ratio(sbf, sbc)}, {"l2_drift_fine", bf.l2_drift}};
    r.verdicts.push_back(v_backward(sbf, sbc, rough));

    // t = 0 slice of the backward run against the data.
    SeriesData rt;
    rt.t = {0.0};
    rt.value = {max_abs_diff(bf.fields.back(), u0) / max_abs(u0)};
    rt.wrapped = {false};
    sink.series("round_trip.csv", rt);
    r.details["csv"]["round_trip"] = "round_trip.csv";
    r.verdicts.push_back(v_round_trip(rt));

    // Reflection cross-check on the coarse grid.
    {
        const Field refl = evolve_backward_reflected(u0c, on_grid(back, gc));
        r.details["reflection_cross_check"] = max_abs_diff(refl, bc.fields.front()) / max_abs(bc.fields.front());
    }

    // Forward: the moving functional window on both grids.
    SolverConfig fwd = cfg.solver;
    fwd.t_end = cfg.backward_time;
    const auto ff = evolve(u0, fwd, opts);
    const auto fc = evolve(u0c, on_grid(fwd, gc), opts);
    const SeriesData sff = to_series(theorem1_functional(ff, cfg.monitor_n, cfg.window_x0(), w0.eps, w0.nu));
    const SeriesData sfc = to_series(theorem1_functional(fc, cfg.monitor_n, cfg.window_x0(), w0.eps, w0.nu));
    sink.series("forward_fine.csv", sff);
    sink.series("forward_coarse.csv", sfc);
    r.details["csv"]["forward_fine"] = "forward_fine.csv";
    r.details["csv"]["forward_coarse"] = "forward_coarse.csv";
    r.verdicts.push_back(v_refinement_stable("forward_refinement_stable", sff, sfc));
    return r;
}

Report run_mollification_limit(const ScenarioConfig& cfg_in, const std::vector<double>& taus) {
    ScenarioConfig cfg = cfg_in;
    cfg.kind = ScenarioKind::mollification;
    if (!taus.empty()) cfg.taus = taus;
    Report r = start(cfg);
    const Sink sink = open_sink(cfg, r);
    const Field u0 = make_data(cfg.solver.grid, cfg.data);
    if (!gate(cfg, u0, r, sink)) return r;

    if (cfg.taus.size() == 1) {
        const double tau = cfg.taus.front();
        const Field ut = mollify_data(u0, tau);
        const DataOn data_on = [&](const Grid& g) {
            // same box: spectral truncation of the mollified datum; longer box: rebuild
            if (g.lx() == ut.grid().lx() && g.ly() == ut.grid().ly()) return resample(ut, g);
            return mollify_data(make_data(g, cfg.data), tau);
        };
        propagate(cfg, ut, data_on, r, sink);
        return r;
    }

    const WeightSpec& w0 = cfg.weights.front();
    const BracketSpec spec{cfg.mollify_alpha, BracketKind::plain, w0};
    EvolveOptions opts;
    opts.sample_count = cfg.sample_count;
    opts.grading = cfg.sample_grading;
    std::vector<SeriesData> per_tau;
    json taus_j = json::array(), files = json::array();
    for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
        const double tau = cfg.taus[i];
        const Field ut = mollify_data(u0, tau);
        const auto traj = evolve(ut, cfg.solver, opts);
        const SeriesData s = to_series(bracket_series(traj, spec));
        const std::string file = tau_file(i, cfg.mollify_alpha);
        sink.series(file, s);
        files.push_back(file);
        taus_j.push_back({{"tau", tau}, {"file", file}, {"sup", series_max(s)}, {"wrapped", any_wrapped(s)},
                          {"data_change_h2", sobolev_norm(ut - u0, 2.0)}, {"l2_drift", traj.l2_drift}});
        per_tau.push_back(s);
    }
    r.details["taus"] = taus_j;
    r.details["csv"]["taus"] = files;
    for (auto& v : v_tau(per_tau, cfg.data.kind == DataKind::smooth_packet)) r.verdicts.push_back(std::move(v));
    return r;
}

Report run_scenario(const ScenarioConfig& cfg) {
    Report r;
    try {
        switch (cfg.kind) {
        case ScenarioKind::propagation: r = run_propagation(cfg); break;
        case ScenarioKind::backward: r = run_backward_contrast(cfg); break;
        case ScenarioKind::mollification: r = run_mollification_limit(cfg, cfg.taus); break;
        }
    } catch (const std::exception& e) {
        r = Report{};
        r.name = cfg.name;
        r.kind = cfg.kind;
        r.error = e.what();
    }
    if (!cfg.output_dir.empty()) {
        fs::create_directories(cfg.output_dir);
        atomic_write((fs::path(cfg.output_dir) / "report.json").string(), r.to_json().dump(2) + "\n");
    }
    return r;
}

std::vector<Report> sweep(const std::vector<ScenarioConfig>& configs, int parallelism) {
    if (parallelism < 1) throw InvalidConfig("parallelism must be >= 1");
    std::vector<Report> out(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) out[i] = run_scenario(configs[i]);
    };
    const int nthreads = static_cast<int>(std::min<std::size_t>(parallelism, std::max<std::size_t>(configs.size(), 1)));
    std::vector<std::thread> pool;
    for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

std::vector<Verdict> recompute_verdicts(const std::string& dir, const json& report) {
    const fs::path d(dir);
    const json& det = report.at("details");
    const json& csv = det.at("csv");
    const json& cfg = det.at("config");
    auto series = [&](const std::string& name) { return read_series_csv((d / name).string()); };
    std::vector<Verdict> out;
    for (const auto& v : report.at("verdicts")) {
        const std::string c = v.at("criterion").get<std::string>();
        if (c == "hypotheses") {
            out.push_back(v_hypotheses(read_hyp_csv((d / csv.at("hypotheses").get<std::string>()).string())));
        } else if (c == "functional_bounded") {
            out.push_back(v_functional_bounded(series(csv.at("functional")),
                                               csv.contains("functional_box") ? series(csv.at("functional_box")) : SeriesData{},
                                               cfg.at("K").get<double>()));
        } else if (c == "functional_near_constant") {
            out.push_back(v_near_constant(series(csv.at("functional"))));
        } else if (c == "functional_refinement_stable") {
            out.push_back(v_refinement_stable(c, series(csv.at("functional")), series(csv.at("functional_coarse"))));
        } else if (c == "smoothing_finite") {
            std::vector<SmoothingInput> in;
            for (const auto& pr : csv.at("smoothing")) {
                SmoothingInput si;
                si.prime = series(pr[0]);
                if (!pr[1].is_null()) si.dprime = series(pr[1]);
                in.push_back(std::move(si));
            }
            out.push_back(v_smoothing(in));
        } else if (c == "backward_refinement_unstable" || c == "backward_refinement_stable") {
            out.push_back(v_backward(series(csv.at("backward_fine")), series(csv.at("backward_coarse")),
                                     c == "backward_refinement_unstable"));
        } else if (c == "round_trip") {
            out.push_back(v_round_trip(series(csv.at("round_trip"))));
        } else if (c == "forward_refinement_stable") {
            out.push_back(v_refinement_stable(c, series(csv.at("forward_fine")), series(csv.at("forward_coarse"))));
        } else if (c == "uniform_in_tau" || c == "tau_independent") {
            std::vector<SeriesData> per;
            for (const auto& f : csv.at("taus")) per.push_back(series(f));
            for (auto& x : v_tau(per, true))
                if (x.criterion == c) out.push_back(std::move(x));
        } else {
            out.push_back(make_verdict(c, false, "unknown criterion"));
        }
    }
    return out;
}

} // namespace kplab
