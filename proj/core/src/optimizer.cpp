#include "fcf/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "fcf/ofdm.hpp"

namespace fcf {

CaseFlags table_case(int number) {
    switch (number) {
        case 1: return {WindowAdjust::Fixed, WindowAdjust::Fixed, 20};
        case 2: return {WindowAdjust::Fixed, WindowAdjust::Full, 20};
        case 3: return {WindowAdjust::Full, WindowAdjust::Fixed, 20};
        case 4: return {WindowAdjust::Full, WindowAdjust::Full, 20};
        case 5: return {WindowAdjust::Reduced, WindowAdjust::Reduced, 20};
        default: throw ConfigError("table_case: case number must be 1..5");
    }
}

int default_fd_passband(const FcConfig& cfg, int m) {
    const auto& sb = cfg.subbands[static_cast<std::size_t>(m)];
    const auto& sp = cfg.per_subband[static_cast<std::size_t>(m)];
    // smallest DC-symmetric bin count covering the active half-bandwidth,
    // l_act * scs / (2 f_BS) = l_act L_m / (2 L_OFDM) bins per side
    const std::int64_t num = static_cast<std::int64_t>(sb.l_act) * sp.l_short;
    const std::int64_t half = ceil_div(num, 2LL * sb.l_ofdm);
    return static_cast<int>(2 * half + 1);
}

void fill_scenario_defaults(OptimizationScenario& sc) {
    const std::size_t m_count = sc.cfg.subbands.size();
    if (sc.fd_passband.empty()) {
        for (std::size_t m = 0; m < m_count; ++m)
            sc.fd_passband.push_back(default_fd_passband(sc.cfg, static_cast<int>(m)));
    }
    if (sc.l_tbw.empty()) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const int l = sc.cfg.per_subband[m].l_short;
            const int lead = static_cast<int>(ceil_div(l - sc.fd_passband[m], 2));
            // cover 360 kHz (guard plus measurement band) where possible
            const Rational f_bs = sc.cfg.bin_spacing_hz();
            int want = static_cast<int>(ceil_div(Rational(360000).num * f_bs.den, f_bs.num));
            sc.l_tbw.push_back(std::clamp(want, 1, lead));
        }
    }
    if (sc.fd_passband.size() != m_count || sc.l_tbw.size() != m_count)
        throw ConfigError("scenario: per-subband FD window geometry incomplete");
}

namespace {

int analysis_params_for(const OptimizationScenario& sc, std::size_t m) {
    const auto& sb = sc.cfg.subbands[m];
    switch (sc.flags.analysis) {
        case WindowAdjust::Fixed: return 0;
        case WindowAdjust::Full: return sb.l_ofdm;
        case WindowAdjust::Reduced: return analysis_param_count(sb.l_ofdm, sb.l_act);
    }
    return 0;
}

int synthesis_params_for(const OptimizationScenario& sc) {
    switch (sc.flags.synthesis) {
        case WindowAdjust::Fixed: return 0;
        case WindowAdjust::Full: return sc.cfg.n_long;
        case WindowAdjust::Reduced: return 2 * sc.flags.gamma - 1;
    }
    return 0;
}

rvec ols_synthesis_mask(const FcConfig& cfg) { return ols_windows(cfg).synthesis; }

} // namespace

rvec flatten(const ParamVector& pv) {
    rvec out;
    for (const auto& v : pv.xi) out.insert(out.end(), v.begin(), v.end());
    for (const auto& v : pv.phi) out.insert(out.end(), v.begin(), v.end());
    out.insert(out.end(), pv.psi.begin(), pv.psi.end());
    return out;
}

std::size_t param_count(const OptimizationScenario& sc) {
    std::size_t n = 0;
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        n += static_cast<std::size_t>(sc.l_tbw[m]);
        n += static_cast<std::size_t>(analysis_params_for(sc, m));
    }
    n += static_cast<std::size_t>(synthesis_params_for(sc));
    return n;
}

ParamVector unflatten(const rvec& flat, const OptimizationScenario& sc) {
    if (flat.size() != param_count(sc))
        throw ConfigError("unflatten: parameter vector of length " + std::to_string(flat.size()) +
                          " does not match the scenario's " + std::to_string(param_count(sc)));
    ParamVector pv;
    std::size_t pos = 0;
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        pv.xi.emplace_back(flat.begin() + pos, flat.begin() + pos + sc.l_tbw[m]);
        pos += static_cast<std::size_t>(sc.l_tbw[m]);
    }
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        const std::size_t n = static_cast<std::size_t>(analysis_params_for(sc, m));
        pv.phi.emplace_back(flat.begin() + pos, flat.begin() + pos + n);
        pos += n;
    }
    const std::size_t n = static_cast<std::size_t>(synthesis_params_for(sc));
    pv.psi.assign(flat.begin() + pos, flat.begin() + pos + n);
    return pv;
}

rvec initial_params(const OptimizationScenario& sc) {
    ParamVector pv;
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        rvec xi(static_cast<std::size_t>(sc.l_tbw[m]));
        for (std::size_t p = 0; p < xi.size(); ++p)
            xi[p] = 0.5 * (1.0 - std::cos(M_PI * (static_cast<double>(p) + 0.5) /
                                          static_cast<double>(xi.size())));
        pv.xi.push_back(std::move(xi));
    }
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        const auto& sb = sc.cfg.subbands[m];
        switch (sc.flags.analysis) {
            case WindowAdjust::Fixed: pv.phi.emplace_back(); break;
            case WindowAdjust::Full:
                pv.phi.push_back(rvec(static_cast<std::size_t>(sb.l_ofdm), 1.0));
                break;
            case WindowAdjust::Reduced:
                pv.phi.push_back(analysis_dc_params(sb.l_ofdm, sb.l_act));
                break;
        }
    }
    switch (sc.flags.synthesis) {
        case WindowAdjust::Fixed: break;
        case WindowAdjust::Full: pv.psi = ols_synthesis_mask(sc.cfg); break;
        case WindowAdjust::Reduced:
            // smooth spectral truncation of the overlap-save mask: a feasible
            // start much closer to the plain operating point than a flat window
            pv.psi = synthesis_params_from_window(ols_synthesis_mask(sc.cfg), sc.flags.gamma);
            break;
    }
    return flatten(pv);
}

WindowSet build_window_set(const rvec& params, const OptimizationScenario& sc) {
    const ParamVector pv = unflatten(params, sc);
    WindowSet ws;
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        FdWindowSpec spec;
        spec.l_short = sc.cfg.per_subband[m].l_short;
        spec.l_act = sc.fd_passband[m];
        spec.l_tbw = sc.l_tbw[m];
        spec.xi = pv.xi[m];
        ws.fd.push_back(build_fd_window(spec));
    }
    for (std::size_t m = 0; m < sc.cfg.subbands.size(); ++m) {
        const auto& sb = sc.cfg.subbands[m];
        switch (sc.flags.analysis) {
            case WindowAdjust::Fixed:
                ws.analysis.push_back(rvec(static_cast<std::size_t>(sb.l_ofdm), 1.0));
                break;
            case WindowAdjust::Full: ws.analysis.push_back(pv.phi[m]); break;
            case WindowAdjust::Reduced:
                ws.analysis.push_back(build_analysis_window({sb.l_ofdm, sb.l_act, pv.phi[m]}));
                break;
        }
    }
    switch (sc.flags.synthesis) {
        case WindowAdjust::Fixed: ws.synthesis = ols_synthesis_mask(sc.cfg); break;
        case WindowAdjust::Full: ws.synthesis = pv.psi; break;
        case WindowAdjust::Reduced:
            ws.synthesis = build_synthesis_window({sc.cfg.n_long, sc.flags.gamma, pv.psi});
            break;
    }
    return ws;
}

namespace {

/// Everything that does not change while the windows are optimized: the
/// seeded payload, its CP-OFDM modulation, and the SCR band weights.
struct EvalContext {
    const OptimizationScenario& sc;
    std::vector<SymbolGrid> grids;
    std::vector<cvec> bursts;
    std::vector<std::optional<ScrAnalyzer>> scr_left;
    std::vector<std::optional<ScrAnalyzer>> scr_right;
    std::size_t out_len{0};

    explicit EvalContext(const OptimizationScenario& scenario) : sc(scenario) {
        const auto& cfg = sc.cfg;
        std::int64_t max_out = 0;
        for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
            const auto& sb = cfg.subbands[m];
            grids.push_back(random_qam_grid(sb.l_act, sb.n_symbols, sc.bits_per_symbol,
                                            sc.seed + 1000003 * m));
            bursts.push_back(cp_ofdm_modulate(grids.back(), sb.l_ofdm, sb.l_cp));
            max_out = std::max(max_out, static_cast<std::int64_t>(cfg.per_subband[m].interp) *
                                            cfg.per_subband[m].t_len);
        }
        out_len = static_cast<std::size_t>(max_out);
        const MeasurementFilter filter = design_measurement_filter(cfg.fs_hz);
        for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
            const auto [lo, hi] = occupied_band(cfg, static_cast<int>(m));
            scr_left.emplace_back(make_analyzer(lo, hi, Side::Left, filter));
            scr_right.emplace_back(make_analyzer(lo, hi, Side::Right, filter));
        }
    }

    std::optional<ScrAnalyzer> make_analyzer(Rational lo, Rational hi, Side side,
                                             const MeasurementFilter& filter) const {
        try {
            return ScrAnalyzer(out_len, sc.cfg.fs_hz, lo, hi, side, filter, sc.guard_hz);
        } catch (const ConfigError&) {
            return std::nullopt; // no measurement space on this side
        }
    }

    EvalResult run(const rvec& params) const {
        const auto& cfg = sc.cfg;
        EvalResult ev;
        const FcBlockPipeline pipeline(cfg, build_window_set(params, sc));
        const ComplexSignal out = fc_synthesize(bursts, pipeline);
        for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
            const auto& sb = cfg.subbands[m];
            const auto& sp = cfg.per_subband[m];
            const MseResult mse =
                measure_chain_mse(out.samples, grids[m], sp.interp * sb.l_ofdm,
                                  sp.interp * sb.l_cp, sb.center_bin, cfg.n_long);
            ev.mse_avg_db.push_back(to_db_floor(mse.mse_avg));
            ev.mse_max_db.push_back(to_db_floor(mse.mse_max));
            double scr = -300.0;
            if (scr_left[m] || scr_right[m]) {
                const cvec spec = scr_left[m] ? scr_left[m]->burst_spectrum(out.samples)
                                              : scr_right[m]->burst_spectrum(out.samples);
                if (scr_left[m]) scr = std::max(scr, scr_left[m]->measure_db_spectrum(spec));
                if (scr_right[m]) scr = std::max(scr, scr_right[m]->measure_db_spectrum(spec));
            }
            ev.scr_db.push_back(scr);
        }
        double obj_db = -400.0;
        for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
            if (sc.objective == ObjectiveKind::MinimizeMse) {
                obj_db = std::max(obj_db, ev.mse_avg_db[m]);
                ev.constraint_db.push_back(ev.scr_db[m] - sc.a_des_db);
            } else {
                obj_db = std::max(obj_db, ev.scr_db[m]);
                ev.constraint_db.push_back(ev.mse_avg_db[m] - sc.mse_target_db);
            }
        }
        ev.objective_db = obj_db;
        ev.objective = std::pow(10.0, obj_db / 10.0);
        return ev;
    }
};

struct AlWeights {
    rvec lambda;
    double mu{10.0};
    double f_scale{1.0};

    /// Augmented Lagrangian against a relaxed target: the constraint excess
    /// is the true excess minus the stage relaxation (dB scaled to O(1)).
    double value(const EvalResult& ev, double relax_db) const {
        double l = ev.objective / f_scale;
        for (std::size_t i = 0; i < ev.constraint_db.size(); ++i) {
            const double g = 0.1 * (ev.constraint_db[i] - relax_db);
            const double t = lambda[i] + mu * g;
            if (t > 0.0) l += (t * t - lambda[i] * lambda[i]) / (2.0 * mu);
        }
        return l;
    }
};

double max_violation_db(const EvalResult& ev) {
    double v = 0.0;
    for (double c : ev.constraint_db) v = std::max(v, c);
    return v;
}

} // namespace

EvalResult evaluate(const rvec& params, const OptimizationScenario& sc) {
    OptimizationScenario filled = sc;
    fill_scenario_defaults(filled);
    EvalContext ctx(filled);
    return ctx.run(params);
}

namespace {

OptimizeReport optimize_impl(const OptimizationScenario& sc, rvec x) {
    const auto t0 = std::chrono::steady_clock::now();
    EvalContext ctx(sc);
    std::int64_t evals = 0;
    auto eval = [&](const rvec& xv) {
        ++evals;
        return ctx.run(xv);
    };

    const std::size_t n = x.size();
    EvalResult ev = eval(x);

    rvec best_x = x;
    EvalResult best_ev = ev;
    auto better = [&](const EvalResult& a, const EvalResult& b) {
        // prefer feasible, then lower objective
        const bool fa = max_violation_db(a) <= sc.feasibility_margin_db;
        const bool fb = max_violation_db(b) <= sc.feasibility_margin_db;
        if (fa != fb) return fa;
        if (fa) return a.objective < b.objective;
        return max_violation_db(a) < max_violation_db(b);
    };

    OptimizeReport report;

    // Constraint homotopy: a badly violated start is walked toward the target
    // in relaxation stages so the iterates track the confinement/error
    // tradeoff instead of jumping to a poor feasible point.
    const double viol0 = std::max(0.0, max_violation_db(ev));
    const int n_stages = std::clamp(static_cast<int>(std::ceil(viol0 / 6.0)), 1, 5);
    int outer_total = 0;

    for (int stage = 0; stage < n_stages && evals < sc.max_evals; ++stage) {
    const double relax = viol0 * static_cast<double>(n_stages - 1 - stage) /
                         static_cast<double>(n_stages);
    AlWeights al;
    al.lambda.assign(ev.constraint_db.size(), 0.0);
    al.f_scale = std::max(ev.objective, 1e-12);
    double prev_viol = max_violation_db(ev) - relax;
    const int outer_budget = stage == n_stages - 1 ? sc.max_outer : std::min(3, sc.max_outer);

    for (int outer = 0; outer < outer_budget && evals < sc.max_evals; ++outer) {
        // BFGS on the augmented Lagrangian
        std::vector<rvec> h(n, rvec(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) h[i][i] = 1.0;
        double l_cur = al.value(ev, relax);
        rvec g(n, 0.0);
        auto gradient = [&](const rvec& at, double l_at) {
            rvec grad(n, 0.0);
            for (std::size_t j = 0; j < n && evals < sc.max_evals; ++j) {
                rvec xp = at;
                xp[j] += sc.fd_step;
                const double lp = al.value(eval(xp), relax);
                if (sc.central_diff) {
                    rvec xm = at;
                    xm[j] -= sc.fd_step;
                    const double lm = al.value(eval(xm), relax);
                    grad[j] = (lp - lm) / (2.0 * sc.fd_step);
                } else {
                    grad[j] = (lp - l_at) / sc.fd_step;
                }
            }
            return grad;
        };
        g = gradient(x, l_cur);
        int inner = 0;
        for (; inner < sc.max_inner && evals < sc.max_evals; ++inner) {
            // d = -H g
            rvec d(n, 0.0);
            double gnorm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) acc += h[i][k] * g[k];
                d[i] = -acc;
                gnorm = std::max(gnorm, std::abs(g[i]));
            }
            if (gnorm < 1e-7) break;
            double slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += d[i] * g[i];
            if (slope >= 0.0) {
                // reset to steepest descent if curvature went bad
                for (std::size_t i = 0; i < n; ++i) {
                    std::fill(h[i].begin(), h[i].end(), 0.0);
                    h[i][i] = 1.0;
                    d[i] = -g[i];
                }
                slope = 0.0;
                for (std::size_t i = 0; i < n; ++i) slope += d[i] * g[i];
            }
            double alpha = 1.0;
            rvec x_new;
            EvalResult ev_new;
            double l_new = l_cur;
            bool accepted = false;
            for (int ls = 0; ls < 30 && evals < sc.max_evals; ++ls) {
                x_new = x;
                for (std::size_t i = 0; i < n; ++i) x_new[i] += alpha * d[i];
                ev_new = eval(x_new);
                l_new = al.value(ev_new, relax);
                if (l_new <= l_cur + 1e-4 * alpha * slope) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            // damped BFGS update
            rvec s(n), yv(n);
            const rvec g_new = gradient(x_new, l_new);
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = x_new[i] - x[i];
                yv[i] = g_new[i] - g[i];
            }
            double sy = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sy += s[i] * yv[i];
                ss += s[i] * s[i];
            }
            if (sy > 1e-12 * std::sqrt(ss)) {
                // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
                const double rho = 1.0 / sy;
                rvec hy(n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < n; ++k) acc += h[i][k] * yv[k];
                    hy[i] = acc;
                }
                double yhy = 0.0;
                for (std::size_t i = 0; i < n; ++i) yhy += yv[i] * hy[i];
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t k = 0; k < n; ++k) {
                        h[i][k] += -rho * (hy[i] * s[k] + s[i] * hy[k]) +
                                   rho * rho * yhy * s[i] * s[k] + rho * s[i] * s[k];
                    }
                }
            }
            x = x_new;
            ev = ev_new;
            l_cur = l_new;
            g = g_new;
            if (better(ev, best_ev)) {
                best_ev = ev;
                best_x = x;
            }
        }

        const double viol_true = max_violation_db(ev);
        const double viol_stage = viol_true - relax;
        report.history.push_back({outer_total++, inner, ev.objective_db, viol_true, evals});
        if (better(ev, best_ev)) {
            best_ev = ev;
            best_x = x;
        }
        const bool polished = stage == n_stages - 1 ? outer > 0 : true;
        if (viol_stage <= 0.05 && polished) break;
        // multiplier and penalty update
        for (std::size_t i = 0; i < al.lambda.size(); ++i) {
            const double gi = 0.1 * (ev.constraint_db[i] - relax);
            al.lambda[i] = std::max(0.0, al.lambda[i] + al.mu * gi);
        }
        if (viol_stage > 0.8 * prev_viol && viol_stage > 0.05) al.mu = std::min(al.mu * 4.0, 1e6);
        prev_viol = viol_stage;
    }
    } // stage loop

    report.params = best_x;
    report.result = best_ev;
    report.feasible = max_violation_db(best_ev) <= sc.feasibility_margin_db;
    report.total_evals = evals;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace

OptimizeReport optimize(const OptimizationScenario& sc_in) {
    OptimizationScenario sc = sc_in;
    fill_scenario_defaults(sc);
    return optimize_impl(sc, initial_params(sc));
}

OptimizeReport optimize_from(const OptimizationScenario& sc_in, const rvec& start) {
    OptimizationScenario sc = sc_in;
    fill_scenario_defaults(sc);
    if (start.size() != param_count(sc))
        throw ConfigError("optimize_from: starting point length mismatches the scenario");
    return optimize_impl(sc, start);
}

OptimizeReport multistart(const OptimizationScenario& sc_in, int k_starts, std::uint64_t seed) {
    if (k_starts < 1) throw ConfigError("multistart: k_starts must be >= 1");
    OptimizationScenario sc = sc_in;
    fill_scenario_defaults(sc);
    std::optional<OptimizeReport> best;
    std::vector<IterRecord> spread;
    std::int64_t evals = 0;
    double wall = 0.0;
    for (int k = 0; k < k_starts; ++k) {
        OptimizeReport rep;
        if (k == 0) {
            rep = optimize_impl(sc, initial_params(sc));
        } else {
            // perturb the canonical start deterministically
            rvec x0 = initial_params(sc);
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
            for (auto& v : x0) {
                const double u1 = std::max(1e-12, static_cast<double>(rng()) / 1.8446744073709552e19);
                const double u2 = static_cast<double>(rng()) / 1.8446744073709552e19;
                v += 0.05 * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            }
            rep = optimize_impl(sc, x0);
        }
        evals += rep.total_evals;
        wall += rep.wall_seconds;
        spread.push_back({k, 0, rep.result.objective_db, max_violation_db(rep.result),
                          rep.total_evals});
        if (!best || (rep.feasible && !best->feasible) ||
            (rep.feasible == best->feasible && rep.result.objective < best->result.objective)) {
            best = rep;
        }
    }
    best->history = spread;
    best->total_evals = evals;
    best->wall_seconds = wall;
    return *best;
}

} // namespace fcf
