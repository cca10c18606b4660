#pragma once

#include <map>
#include <optional>
#include <string>

#include "fcf/optimizer.hpp"

namespace fcf {

/// Transmit-side processing selected by a scenario.
enum class TxMode { Case1, Case2, Case3, Case4, Case5, Ols, Ola, Wola, FOfdm, CpOfdm };

TxMode parse_tx_mode(const std::string& s);
std::string tx_mode_name(TxMode m);

/// Victim allocation for inter-numerology interference measurements. The
/// victim carries no data; its placement follows from the interferer edge,
/// the guard band, and its own width.
struct VictimSpec {
    Rational scs_hz{15000};
    int n_prb{4};
    Rational guard_hz{90000};
    bool left{true};
};

/// Declarative description of one reproduction run. Parsed from JSON with a
/// fixed schema; unknown keys are rejected.
struct Scenario {
    std::string name;
    int n_long{128};
    Rational overlap{1, 2};
    Rational fs_hz{0};
    std::vector<SubbandConfig> subbands; ///< n_symbols = measurement burst
    TxMode mode{TxMode::Case1};
    std::vector<int> l_tbw; ///< optional FD window override

    // optimization block (FC cases only)
    bool optimize_windows{false};
    ObjectiveKind objective{ObjectiveKind::MinimizeMse};
    double a_des_db{-50.0};
    double mse_target_db{-37.0};
    std::uint64_t opt_seed{1};
    int opt_symbols{14};
    int max_outer{10};
    int max_inner{60};
    int n_starts{1};
    bool central_diff{true};

    // measurement block
    std::uint64_t meas_seed{7};
    int bits_per_symbol{2};
    Rational guard_hz{180000};

    std::optional<VictimSpec> victim;

    // sweep block
    std::string sweep_axis; ///< "guard_hz", "n_prb" or "a_des_db"
    std::vector<double> sweep_values;

    // baseline knobs
    int wola_slope_divisor{4}; ///< slope = high-rate CP / divisor
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
std::string serialize_scenario(const Scenario& sc); ///< normalized form

struct RunOptions {
    std::string out_dir{"."};
    std::optional<std::uint64_t> seed;     ///< overrides both scenario seeds
    std::optional<int> max_iters;          ///< overrides max_outer
    int jobs{1};
};

/// Executes derive -> (optimize?) -> synthesize -> measure and writes the
/// artifacts (summary.txt, per_subcarrier.csv, windows.txt, history.csv).
/// Returns 0 on success, 2 when the optimizer ends infeasible, 1 on a
/// configuration error (the message names the offending field).
int run_scenario(const std::string& path, const RunOptions& opts);

/// One row per sweep point into sweep.csv; points may run concurrently, rows
/// are merged in axis order.
int sweep_scenario(const std::string& path, const RunOptions& opts);

/// Emits fft_counts.csv and chain_counts.csv for the scenario's geometry.
int counts_scenario(const std::string& path, const RunOptions& opts);

/// Window file round trips for reproducibility.
int export_windows(const std::string& scenario_path, const std::string& out_file,
                   const RunOptions& opts);
int import_windows(const std::string& scenario_path, const std::string& window_file,
                   const RunOptions& opts);

/// In-process variant used by tests: runs like run_scenario but also returns
/// the summary map.
struct RunOutcome {
    int exit_code{1};
    std::map<std::string, std::string> summary;
};
RunOutcome run_scenario_collect(const Scenario& sc, const RunOptions& opts);

} // namespace fcf
