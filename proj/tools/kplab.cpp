// kplab command line: weights, data generation, evolution, diagnostics, schedule and scenarios.

#include "kplab/datagen.hpp"
#include "kplab/diagnostics.hpp"
#include "kplab/errors.hpp"
#include "kplab/experiments.hpp"
#include "kplab/io.hpp"
#include "kplab/schedule.hpp"
#include "kplab/solver.hpp"
#include "kplab/weights.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace kplab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-")
        std::cout << content;
    else
        atomic_write(out, content);
}

struct WeightArgs {
    double eps = 0.25, b = 1.25, nu = 1.0;
    int order = 4;
    std::string mollifier = "polynomial";
    void add(CLI::App* app) {
        app->add_option("--eps", eps, "ramp offset epsilon");
        app->add_option("--b", b, "plateau start b (b >= 5 eps)");
        app->add_option("--nu", nu, "window speed");
        app->add_option("--order", order, "bump exponent k");
        app->add_option("--mollifier", mollifier, "polynomial | exponential");
    }
    WeightSpec spec() const { return make_weight(eps, b, nu, order, mollifier_from_string(mollifier)); }
};

struct GridArgs {
    int nx = 256, ny = 256;
    double lx = 32, ly = 32;
    void add(CLI::App* app) {
        app->add_option("--nx", nx);
        app->add_option("--ny", ny);
        app->add_option("--lx", lx);
        app->add_option("--ly", ly);
    }
    Grid grid() const { return Grid(nx, ny, lx, ly); }
};

json weight_facts_json(const WeightFacts& f) {
    return {{"samples", f.samples}, {"zero_left", f.zero_left}, {"one_right", f.one_right},
            {"derivative_bound", f.derivative_bound}, {"plateau_bound", f.plateau_bound},
            {"support", f.support}, {"nested_one", f.nested_one}, {"c_second", f.c_second},
            {"c_third", f.c_third}, {"all", f.all()}};
}

json hypotheses_json(const HypothesisReport& h) {
    auto item = [](const RefinementCheck& c) {
        return json{{"value", c.value}, {"coarse", c.coarse}, {"ratio", c.ratio}, {"stable", c.stable}};
    };
    return {{"x0", h.x0}, {"n", h.n}, {"s", h.s}, {"tolerance", h.tolerance}, {"xs_norm", item(h.xs_norm)},
            {"xs_antiderivative", item(h.xs_antiderivative)}, {"windowed_hn", item(h.windowed_hn)},
            {"windowed_dy3", item(h.windowed_dy3)}, {"global_hn", item(h.global_hn)},
            {"dy3_required", h.dy3_required}, {"passed", h.passed}};
}

MultiIndex parse_alpha(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidConfig("alpha must be 'a1,a2'");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

int print_reports(const std::vector<Report>& reports) {
    bool ok = !reports.empty();
    for (const auto& r : reports) {
        if (!r.error.empty()) std::cout << r.name << ": ERROR " << r.error << "\n";
        for (const auto& v : r.verdicts)
            std::cout << r.name << ": " << (v.pass ? "PASS " : "FAIL ") << v.criterion << " (" << v.detail << ")\n";
        ok = ok && r.all_pass();
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kplab: KP-II numerical laboratory"};
    app.require_subcommand(1);

    // weights
    auto* weights = app.add_subcommand("weights", "cutoff weight profiles and facts");
    weights->require_subcommand(1);
    WeightArgs wa;
    auto* w_eval = weights->add_subcommand("eval", "sample chi and derivatives as JSON");
    wa.add(w_eval);
    double w_t = 0, w_xmin = -1, w_xmax = 3;
    int w_count = 401;
    std::string w_out;
    w_eval->add_option("--t", w_t, "time (shift nu t)");
    w_eval->add_option("--x-min", w_xmin);
    w_eval->add_option("--x-max", w_xmax);
    w_eval->add_option("--count", w_count);
    w_eval->add_option("--out", w_out, "output JSON (default stdout)");
    auto* w_check = weights->add_subcommand("check", "verify the weight facts");
    w_check->add_option("--eps", wa.eps);
    w_check->add_option("--b", wa.b);
    w_check->add_option("--nu", wa.nu);
    w_check->add_option("--order", wa.order);
    int w_samples = 10000;
    w_check->add_option("--samples", w_samples);

    // datagen
    auto* datagen = app.add_subcommand("datagen", "generate initial data as a checkpoint");
    GridArgs dg_grid;
    dg_grid.add(datagen);
    std::string dg_kind = "one_sided_rough", dg_out;
    DataSpec ds;
    double dg_s = 2.05, dg_tau = 0;
    bool dg_check = false;
    datagen->add_option("--kind", dg_kind, "one_sided_rough | smooth_packet");
    datagen->add_option("--x0", ds.x0);
    datagen->add_option("--x-singular", ds.x_singular);
    datagen->add_option("--gamma", ds.gamma);
    datagen->add_option("--n", ds.n_target);
    datagen->add_option("--amplitude", ds.amplitude);
    datagen->add_option("--width-x", ds.width_x);
    datagen->add_option("--width-y", ds.width_y);
    datagen->add_option("--packet-amplitude", ds.packet.amplitude);
    datagen->add_option("--packet-x", ds.packet.x_center);
    datagen->add_option("--packet-width", ds.packet.width_x);
    datagen->add_option("--packet-carrier", ds.packet.carrier);
    datagen->add_option("--tau", dg_tau, "mollify with radius tau");
    datagen->add_option("--out", dg_out, "checkpoint path")->required();
    datagen->add_flag("--check", dg_check, "print the hypothesis report");
    datagen->add_option("--s", dg_s, "Sobolev level for --check");

    // evolve
    auto* evolve_cmd = app.add_subcommand("evolve", "evolve a checkpoint and save the trajectory");
    std::string ev_in, ev_out, ev_scheme = "IFRK4";
    SolverConfig sc;
    int ev_samples = 21;
    bool ev_linear = false, ev_no_dealias = false;
    evolve_cmd->add_option("--in", ev_in, "initial checkpoint")->required();
    evolve_cmd->add_option("--out", ev_out, "trajectory path")->required();
    evolve_cmd->add_option("--dt", sc.dt);
    evolve_cmd->add_option("--t-end", sc.t_end);
    evolve_cmd->add_option("--scheme", ev_scheme);
    evolve_cmd->add_option("--p", sc.p);
    evolve_cmd->add_option("--samples", ev_samples);
    evolve_cmd->add_flag("--backward", sc.backward);
    evolve_cmd->add_flag("--linear", ev_linear);
    evolve_cmd->add_flag("--no-dealias", ev_no_dealias);
    evolve_cmd->add_flag("--absorber", sc.absorber.enabled);
    evolve_cmd->add_option("--absorber-width", sc.absorber.width);
    evolve_cmd->add_option("--absorber-strength", sc.absorber.strength);

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "bracket series and functionals of a trajectory");
    std::string dn_traj, dn_alpha = "0,0", dn_kind = "plain", dn_out;
    WeightArgs dn_w;
    dn_w.add(diagnose);
    int dn_n = 0;
    double dn_x0 = 0, dn_probe = 0, dn_t = 0;
    diagnose->add_option("--traj", dn_traj)->required();
    diagnose->add_option("--alpha", dn_alpha, "a1,a2");
    diagnose->add_option("--kind", dn_kind, "plain | prime | dprime");
    diagnose->add_option("--functional", dn_n, "emit the moving-window functional of order n instead");
    diagnose->add_option("--x0", dn_x0);
    diagnose->add_option("--energy-t", dn_t, "energy identity at this time (needs --energy-probe)");
    diagnose->add_option("--energy-probe", dn_probe);
    diagnose->add_option("--out", dn_out);

    // schedule
    auto* schedule = app.add_subcommand("schedule", "case schedule of the induction");
    int sch_n = 3;
    std::string sch_format = "json";
    bool sch_joint = false;
    schedule->add_option("--n", sch_n)->required();
    schedule->add_option("--format", sch_format)->check(CLI::IsMember({"json", "dot"}));
    schedule->add_flag("--joint-order4", sch_joint);

    // run / sweep / report
    auto* run = app.add_subcommand("run", "run one scenario");
    std::string run_config;
    run->add_option("--config", run_config)->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "run every *.json scenario in a directory");
    std::string sw_dir, sw_out;
    int sw_jobs = 1;
    sweep_cmd->add_option("--config-dir", sw_dir)->required();
    sweep_cmd->add_option("-j,--jobs", sw_jobs);
    sweep_cmd->add_option("--out", sw_out, "base directory for scenarios without output_dir");
    auto* report = app.add_subcommand("report", "aggregate and recheck scenario reports");
    std::string rp_in, rp_out;
    report->add_option("--in", rp_in)->required();
    report->add_option("--out", rp_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*w_eval) {
            const WeightSpec w = wa.spec();
            json j = {{"eps", w.eps}, {"b", w.b}, {"nu", w.nu}, {"order", w.order},
                      {"mollifier", to_string(w.mollifier)}, {"t", w_t}, {"ramp_length", w.ramp_length()},
                      {"derivative_bound", 1.0 / w.ramp_length()}};
            std::vector<double> xs, d0, d1, d2, d3;
            for (int i = 0; i < w_count; ++i) {
                const double x = w_xmin + (w_xmax - w_xmin) * i / std::max(1, w_count - 1);
                const double z = x + w.nu * w_t;
                xs.push_back(x);
                d0.push_back(eval_weight(w, z, 0));
                d1.push_back(eval_weight(w, z, 1));
                d2.push_back(eval_weight(w, z, 2));
                d3.push_back(eval_weight(w, z, 3));
            }
            j["x"] = xs;
            j["chi"] = d0;
            j["chi1"] = d1;
            j["chi2"] = d2;
            j["chi3"] = d3;
            emit(w_out, j.dump(2) + "\n");
            return 0;
        }
        if (*w_check) {
            const auto f = check_weight_facts(wa.spec(), w_samples);
            std::cout << weight_facts_json(f).dump(2) << "\n";
            return f.all() ? 0 : 1;
        }
        if (*datagen) {
            ds.kind = data_kind_from_string(dg_kind);
            ds.validate();
            Field u0 = make_data(dg_grid.grid(), ds);
            if (dg_tau > 0) u0 = mollify_data(u0, dg_tau);
            save_checkpoint(dg_out, u0, 0.0);
            if (dg_check) {
                const auto h = check_hypotheses(u0, ds.x0, ds.n_target, dg_s);
                std::cout << hypotheses_json(h).dump(2) << "\n";
                return h.passed ? 0 : 1;
            }
            return 0;
        }
        if (*evolve_cmd) {
            const Checkpoint cp = load_checkpoint(ev_in);
            sc.grid = cp.field.grid();
            sc.scheme = scheme_from_string(ev_scheme);
            sc.nonlinear = !ev_linear;
            sc.dealias = !ev_no_dealias;
            sc.validate();
            EvolveOptions o;
            o.sample_count = ev_samples;
            const auto traj = evolve(cp.field, sc, o);
            save_trajectory(ev_out, traj);
            std::cout << json{{"samples", traj.times.size()}, {"l2_drift", traj.l2_drift},
                              {"wrap_time", traj.wrap_time}}.dump()
                      << "\n";
            return 0;
        }
        if (*diagnose) {
            const Trajectory traj = load_trajectory(dn_traj);
            const WeightSpec w = dn_w.spec();
            if (dn_probe > 0) {
                const auto e = energy_identity_residual(traj, parse_alpha(dn_alpha), w, dn_t, dn_probe);
                emit(dn_out, json{{"t", e.t}, {"a1", e.a1}, {"a2", e.a2}, {"a3", e.a3}, {"a4", e.a4},
                                  {"a5", e.a5}, {"ddt_bracket", e.ddt_bracket}, {"residual", e.residual},
                                  {"relative", e.relative}, {"wrapped", e.wrapped}}.dump(2) + "\n");
                return 0;
            }
            if (dn_n > 0) {
                const auto f = theorem1_functional(traj, dn_n, dn_x0, w.eps, w.nu);
                emit(dn_out, series_csv(f.times, f.values, f.wrapped));
                return 0;
            }
            const std::string kind = dn_kind == "dprime" ? "double_prime" : dn_kind;
            const BracketSpec spec{parse_alpha(dn_alpha), bracket_kind_from_string(kind), w};
            const auto s = bracket_series(traj, spec);
            emit(dn_out, series_csv(s.times, s.values, s.wrapped));
            return 0;
        }
        if (*schedule) {
            const auto groups = case_schedule(sch_n, ScheduleOptions{sch_joint});
            dependency_closure(groups);
            std::cout << (sch_format == "dot" ? schedule_dot(groups) : schedule_json(groups));
            return 0;
        }
        if (*run) {
            ScenarioConfig cfg;
            try {
                cfg = load_scenario(run_config);
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            return print_reports({run_scenario(cfg)});
        }
        if (*sweep_cmd) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(sw_dir))
                if (e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            std::vector<ScenarioConfig> cfgs;
            for (const auto& f : files) {
                ScenarioConfig c = load_scenario(f.string());
                if (!sw_out.empty()) c.output_dir = (fs::path(sw_out) / c.name).string();
                cfgs.push_back(std::move(c));
            }
            return print_reports(sweep(cfgs, sw_jobs));
        }
        if (*report) {
            std::vector<fs::path> reports;
            if (fs::exists(fs::path(rp_in) / "report.json")) reports.push_back(fs::path(rp_in) / "report.json");
            for (const auto& e : fs::recursive_directory_iterator(rp_in))
                if (e.path().filename() == "report.json" && e.path().parent_path() != fs::path(rp_in))
                    reports.push_back(e.path());
            std::sort(reports.begin(), reports.end());
            json agg = {{"scenarios", json::array()}};
            bool ok = !reports.empty();
            for (const auto& p : reports) {
                std::ifstream in(p);
                const json r = json::parse(in);
                json entry = {{"name", r.at("name")}, {"kind", r.at("kind")}, {"dir", p.parent_path().string()},
                              {"error", r.at("error")}, {"verdicts", r.at("verdicts")}};
                bool consistent = true, pass = r.at("all_pass").get<bool>();
                if (r.at("error").get<std::string>().empty()) {
                    const auto again = recompute_verdicts(p.parent_path().string(), r);
                    const auto& orig = r.at("verdicts");
                    for (std::size_t i = 0; i < again.size(); ++i)
                        consistent = consistent && again[i].pass == orig[i].at("pass").get<bool>();
                }
                entry["recomputed_consistent"] = consistent;
                entry["all_pass"] = pass && consistent;
                ok = ok && pass && consistent;
                agg["scenarios"].push_back(entry);
            }
            agg["all_pass"] = ok;
            emit(rp_out, agg.dump(2) + "\n");
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
