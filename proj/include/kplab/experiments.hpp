#pragma once

#include "kplab/datagen.hpp"
#include "kplab/diagnostics.hpp"
#include "kplab/solver.hpp"
#include "kplab/weights.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kplab {

enum class ScenarioKind { propagation, backward, mollification };

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct ScenarioConfig {
    std::string name = "scenario";
    ScenarioKind kind = ScenarioKind::propagation;
    DataSpec data;
    std::optional<double> window;       ///< window anchor; data.x0 when unset
    SolverConfig solver;
    std::vector<WeightSpec> weights{WeightSpec{0.25, 1.25, 1.0}};
    int monitor_n = 3;
    int sample_count = 41;
    double sample_grading = 1.0;        ///< t_i = T (i / (N - 1))^grading
    double hypothesis_s = 2.05;
    double growth_factor = 10.0;        ///< K in "sup <= K * value at t = 0"
    std::optional<Grid> refine_grid;    ///< coarser grid for refinement checks
    int box_check = 0;                  ///< > 1: rerun on a box this many times longer in x
    double energy_probe = 0.0;          ///< > 0: record energy-identity samples
    double backward_time = 0.5;
    double backward_window = -8.0;      ///< left end of the right half-plane window
    std::vector<double> taus;
    MultiIndex mollify_alpha{3, 0};
    std::string output_dir;             ///< empty: nothing is written

    void validate() const;
    double window_x0() const { return window.value_or(data.x0); }
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& c);
ScenarioConfig load_scenario(const std::string& path);

struct Verdict {
    std::string criterion;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string name;
    ScenarioKind kind = ScenarioKind::propagation;
    std::vector<Verdict> verdicts;
    nlohmann::json details = nlohmann::json::object();
    std::vector<std::string> files;
    std::string error;

    bool all_pass() const;
    const Verdict* find(const std::string& criterion) const;
    nlohmann::json to_json() const;
};

Report run_propagation(const ScenarioConfig& cfg);
Report run_backward_contrast(const ScenarioConfig& cfg);
Report run_mollification_limit(const ScenarioConfig& cfg, const std::vector<double>& taus);
/// Dispatches on cfg.kind; solver and data errors are caught into Report::error.
Report run_scenario(const ScenarioConfig& cfg);

/// Runs the scenarios on `parallelism` worker threads; reports come back in input order.
std::vector<Report> sweep(const std::vector<ScenarioConfig>& configs, int parallelism);

/// Series CSV with header "t,value,wrapped_flag".
std::string series_csv(const std::vector<double>& t, const std::vector<double>& v, const std::vector<bool>& wrapped);
struct SeriesData {
    std::vector<double> t, value;
    std::vector<bool> wrapped;
};
SeriesData read_series_csv(const std::string& path);

/// Recomputes the verdicts of a scenario directory from its CSV files.
std::vector<Verdict> recompute_verdicts(const std::string& dir, const nlohmann::json& report);

} // namespace kplab
