#pragma once

#include <cstdint>
#include <optional>

#include "fcf/fcfb.hpp"
#include "fcf/metrics.hpp"
#include "fcf/numerology.hpp"
#include "fcf/windowing.hpp"

namespace fcf {

/// How a time-domain window family enters the optimization.
enum class WindowAdjust {
    Fixed,    ///< held at its default (all-ones analysis, overlap-save synthesis)
    Full,     ///< every window sample is a parameter
    Reduced,  ///< conjugate-symmetric spectral parameterization
};

/// Which windows are adjustable. The FD transition weights always are.
struct CaseFlags {
    WindowAdjust analysis{WindowAdjust::Fixed};
    WindowAdjust synthesis{WindowAdjust::Fixed};
    int gamma{20}; ///< synthesis spectral bins in Reduced mode
};

/// The five standard configurations: 1 = FD only, 2 = +full synthesis,
/// 3 = +full analysis, 4 = +both full, 5 = +both reduced.
CaseFlags table_case(int number);

enum class ObjectiveKind {
    MinimizeMse, ///< min max_m MSE_AVG subject to SCR_m <= A_des
    MinimizeScr, ///< min max_m SCR subject to MSE_AVG,m <= target
};

struct OptimizationScenario {
    FcConfig cfg;                 ///< geometry; n_symbols is the optimization burst
    CaseFlags flags;
    std::vector<int> l_tbw;       ///< FD transition weights per subband
    std::vector<int> fd_passband; ///< FD passband width per subband, FC bins
    ObjectiveKind objective{ObjectiveKind::MinimizeMse};
    double a_des_db{-50.0};
    double mse_target_db{-37.0};
    Rational guard_hz{180000};
    std::uint64_t seed{1};
    int bits_per_symbol{2};

    // solver knobs
    int max_outer{10};
    int max_inner{60};
    std::int64_t max_evals{2000000};
    double fd_step{1e-6};
    bool central_diff{true};
    double feasibility_margin_db{0.5};
};

/// Passband width of the FD window in FC bins: smallest count covering the
/// active subcarriers.
int default_fd_passband(const FcConfig& cfg, int m);

/// Scenario with per-subband geometry defaults filled in (l_tbw covering
/// roughly two PRBs plus guard unless given, passband from the numerology).
void fill_scenario_defaults(OptimizationScenario& sc);

/// Adjustable parameters in the order: all xi, all phi (or full analysis
/// windows), then psi (or the full synthesis window).
struct ParamVector {
    std::vector<rvec> xi;
    std::vector<rvec> phi;
    rvec psi;
};

rvec flatten(const ParamVector& pv);
ParamVector unflatten(const rvec& flat, const OptimizationScenario& sc);
std::size_t param_count(const OptimizationScenario& sc);

/// Starting point: raised-cosine FD ramps, all-ones analysis, overlap-save
/// synthesis (spectrally truncated in Reduced mode).
rvec initial_params(const OptimizationScenario& sc);

/// Windows realized by a parameter vector under the scenario's case flags.
WindowSet build_window_set(const rvec& params, const OptimizationScenario& sc);

struct EvalResult {
    double objective{0.0};        ///< linear scale
    double objective_db{0.0};
    rvec mse_avg_db;
    rvec mse_max_db;
    rvec scr_db;                  ///< worst side per subband, -300 when unmeasurable
    rvec constraint_db;           ///< <= 0 when satisfied
};

/// Full chain evaluation: windows, FC synthesis of a seeded payload,
/// transparent high-rate CP-OFDM RX, ZF, metrics. Deterministic for a fixed
/// scenario seed.
EvalResult evaluate(const rvec& params, const OptimizationScenario& sc);

struct IterRecord {
    int outer{0};
    int inner_iters{0};
    double objective_db{0.0};
    double max_violation_db{0.0};
    std::int64_t evals{0};
};

struct OptimizeReport {
    rvec params;
    EvalResult result;
    bool feasible{false};
    std::vector<IterRecord> history;
    std::int64_t total_evals{0};
    double wall_seconds{0.0};
};

/// Augmented-Lagrangian solver with BFGS inner iterations and
/// finite-difference gradients. Never reports an infeasible point as
/// feasible; on iteration exhaustion the best found point is returned with
/// the flag cleared.
OptimizeReport optimize(const OptimizationScenario& sc);

/// optimize() from an explicit starting point (continuation / warm starts).
OptimizeReport optimize_from(const OptimizationScenario& sc, const rvec& start);

/// Runs optimize from k perturbed starting points and returns the feasible
/// best (ties broken by start index). The report history carries one record
/// per start with its final objective.
OptimizeReport multistart(const OptimizationScenario& sc, int k_starts, std::uint64_t seed);

} // namespace fcf
