#include "fcf/scenario.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include "fcf/baselines.hpp"
#include "fcf/complexity.hpp"
#include "fcf/ofdm.hpp"

namespace fcf {

using nlohmann::json;

TxMode parse_tx_mode(const std::string& s) {
    if (s == "case1") return TxMode::Case1;
    if (s == "case2") return TxMode::Case2;
    if (s == "case3") return TxMode::Case3;
    if (s == "case4") return TxMode::Case4;
    if (s == "case5") return TxMode::Case5;
    if (s == "ols") return TxMode::Ols;
    if (s == "ola") return TxMode::Ola;
    if (s == "wola") return TxMode::Wola;
    if (s == "f_ofdm") return TxMode::FOfdm;
    if (s == "cp_ofdm") return TxMode::CpOfdm;
    throw ConfigError("tx_mode: unknown mode '" + s + "'");
}

std::string tx_mode_name(TxMode m) {
    switch (m) {
        case TxMode::Case1: return "case1";
        case TxMode::Case2: return "case2";
        case TxMode::Case3: return "case3";
        case TxMode::Case4: return "case4";
        case TxMode::Case5: return "case5";
        case TxMode::Ols: return "ols";
        case TxMode::Ola: return "ola";
        case TxMode::Wola: return "wola";
        case TxMode::FOfdm: return "f_ofdm";
        case TxMode::CpOfdm: return "cp_ofdm";
    }
    return "?";
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k))
            throw ConfigError("scenario: unknown key '" + k + "' in " + where);
    }
}

std::int64_t require_int(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ConfigError("scenario: missing key '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number_integer())
        throw ConfigError("scenario: key '" + std::string(key) + "' in " + where +
                          " must be an integer");
    return obj[key].get<std::int64_t>();
}

std::int64_t opt_int(const json& obj, const char* key, std::int64_t fallback) {
    return obj.contains(key) ? obj[key].get<std::int64_t>() : fallback;
}

Rational parse_overlap(const json& v) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError("scenario: fc.overlap must be a [numerator, denominator] pair");
    return Rational(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("scenario: JSON parse failure: ") + e.what());
    }
    check_keys(root,
               {"name", "fc", "subbands", "tx_mode", "fd_window", "optimization", "measurement",
                "victim", "sweep", "wola"},
               "scenario");
    Scenario sc;
    sc.name = root.value("name", "unnamed");
    if (!root.contains("fc")) throw ConfigError("scenario: missing 'fc' block");
    const json& fc = root["fc"];
    check_keys(fc, {"n_long", "overlap", "fs_hz"}, "fc");
    sc.n_long = static_cast<int>(require_int(fc, "n_long", "fc"));
    sc.fs_hz = Rational(require_int(fc, "fs_hz", "fc"));
    sc.overlap = fc.contains("overlap") ? parse_overlap(fc["overlap"]) : Rational(1, 2);

    if (!root.contains("subbands") || !root["subbands"].is_array() || root["subbands"].empty())
        throw ConfigError("scenario: 'subbands' must be a non-empty array");
    int idx = 0;
    for (const json& jsb : root["subbands"]) {
        check_keys(jsb, {"n_prb", "scs_hz", "l_ofdm", "l_cp", "center_bin", "n_symbols"},
                   "subbands[" + std::to_string(idx) + "]");
        SubbandConfig sb;
        sb.index = idx;
        sb.n_prb = static_cast<int>(require_int(jsb, "n_prb", "subband"));
        sb.l_act = 12 * sb.n_prb;
        sb.scs_hz = Rational(require_int(jsb, "scs_hz", "subband"));
        sb.l_ofdm = static_cast<int>(opt_int(jsb, "l_ofdm", derive_ofdm_ifft_length(sb.n_prb)));
        sb.l_cp = static_cast<int>(opt_int(jsb, "l_cp", (9LL * sb.l_ofdm) / 128));
        sb.center_bin = opt_int(jsb, "center_bin", 0);
        sb.n_symbols = static_cast<int>(opt_int(jsb, "n_symbols", 100));
        sc.subbands.push_back(sb);
        ++idx;
    }

    if (!root.contains("tx_mode")) throw ConfigError("scenario: missing 'tx_mode'");
    sc.mode = parse_tx_mode(root["tx_mode"].get<std::string>());

    if (root.contains("fd_window")) {
        const json& fd = root["fd_window"];
        check_keys(fd, {"l_tbw"}, "fd_window");
        if (fd.contains("l_tbw")) {
            for (const json& v : fd["l_tbw"]) sc.l_tbw.push_back(v.get<int>());
            if (sc.l_tbw.size() != sc.subbands.size())
                throw ConfigError("scenario: fd_window.l_tbw must list one value per subband");
        }
    }

    if (root.contains("optimization")) {
        const json& op = root["optimization"];
        check_keys(op,
                   {"objective", "a_des_db", "mse_target_db", "seed", "symbols", "max_outer",
                    "max_inner", "multistart", "central_diff"},
                   "optimization");
        sc.optimize_windows = true;
        const std::string obj = op.value("objective", "mse");
        if (obj == "mse") sc.objective = ObjectiveKind::MinimizeMse;
        else if (obj == "scr") sc.objective = ObjectiveKind::MinimizeScr;
        else throw ConfigError("scenario: optimization.objective must be 'mse' or 'scr'");
        sc.a_des_db = op.value("a_des_db", -50.0);
        sc.mse_target_db = op.value("mse_target_db", -37.0);
        sc.opt_seed = static_cast<std::uint64_t>(opt_int(op, "seed", 1));
        sc.opt_symbols = static_cast<int>(opt_int(op, "symbols", 14));
        sc.max_outer = static_cast<int>(opt_int(op, "max_outer", 10));
        sc.max_inner = static_cast<int>(opt_int(op, "max_inner", 60));
        sc.n_starts = static_cast<int>(opt_int(op, "multistart", 1));
        sc.central_diff = op.value("central_diff", true);
    }

    if (root.contains("measurement")) {
        const json& me = root["measurement"];
        check_keys(me, {"symbols", "seed", "bits_per_symbol", "guard_hz"}, "measurement");
        if (me.contains("symbols")) {
            const int b = static_cast<int>(me["symbols"].get<std::int64_t>());
            for (auto& sb : sc.subbands) sb.n_symbols = b;
        }
        sc.meas_seed = static_cast<std::uint64_t>(opt_int(me, "seed", 7));
        sc.bits_per_symbol = static_cast<int>(opt_int(me, "bits_per_symbol", 2));
        sc.guard_hz = Rational(opt_int(me, "guard_hz", 180000));
    }

    if (root.contains("victim")) {
        const json& vi = root["victim"];
        check_keys(vi, {"scs_hz", "n_prb", "guard_hz", "side"}, "victim");
        VictimSpec v;
        v.scs_hz = Rational(require_int(vi, "scs_hz", "victim"));
        v.n_prb = static_cast<int>(opt_int(vi, "n_prb", 4));
        v.guard_hz = Rational(opt_int(vi, "guard_hz", 90000));
        const std::string side = vi.value("side", "left");
        if (side != "left" && side != "right")
            throw ConfigError("scenario: victim.side must be 'left' or 'right'");
        v.left = side == "left";
        sc.victim = v;
    }

    if (root.contains("sweep")) {
        const json& sw = root["sweep"];
        check_keys(sw, {"axis", "values"}, "sweep");
        sc.sweep_axis = sw.value("axis", "");
        if (sw.contains("values"))
            for (const json& v : sw["values"]) sc.sweep_values.push_back(v.get<double>());
        if (sc.sweep_axis.empty() || sc.sweep_values.empty())
            throw ConfigError("scenario: sweep block needs a non-empty axis and values");
    }

    if (root.contains("wola")) {
        const json& wo = root["wola"];
        check_keys(wo, {"slope_divisor"}, "wola");
        sc.wola_slope_divisor = static_cast<int>(opt_int(wo, "slope_divisor", 4));
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& sc) {
    json root;
    root["name"] = sc.name;
    root["fc"] = {{"n_long", sc.n_long},
                  {"overlap", {sc.overlap.num, sc.overlap.den}},
                  {"fs_hz", sc.fs_hz.as_int()}};
    json subs = json::array();
    for (const auto& sb : sc.subbands) {
        subs.push_back({{"n_prb", sb.n_prb},
                        {"scs_hz", sb.scs_hz.as_int()},
                        {"l_ofdm", sb.l_ofdm},
                        {"l_cp", sb.l_cp},
                        {"center_bin", sb.center_bin},
                        {"n_symbols", sb.n_symbols}});
    }
    root["subbands"] = subs;
    root["tx_mode"] = tx_mode_name(sc.mode);
    if (!sc.l_tbw.empty()) root["fd_window"] = {{"l_tbw", sc.l_tbw}};
    if (sc.optimize_windows) {
        root["optimization"] = {
            {"objective", sc.objective == ObjectiveKind::MinimizeMse ? "mse" : "scr"},
            {"a_des_db", sc.a_des_db},
            {"mse_target_db", sc.mse_target_db},
            {"seed", sc.opt_seed},
            {"symbols", sc.opt_symbols},
            {"max_outer", sc.max_outer},
            {"max_inner", sc.max_inner},
            {"multistart", sc.n_starts},
            {"central_diff", sc.central_diff}};
    }
    root["measurement"] = {{"symbols", sc.subbands.front().n_symbols},
                           {"seed", sc.meas_seed},
                           {"bits_per_symbol", sc.bits_per_symbol},
                           {"guard_hz", sc.guard_hz.as_int()}};
    if (sc.victim) {
        root["victim"] = {{"scs_hz", sc.victim->scs_hz.as_int()},
                          {"n_prb", sc.victim->n_prb},
                          {"guard_hz", sc.victim->guard_hz.as_int()},
                          {"side", sc.victim->left ? "left" : "right"}};
    }
    if (!sc.sweep_axis.empty()) root["sweep"] = {{"axis", sc.sweep_axis}, {"values", sc.sweep_values}};
    if (sc.wola_slope_divisor != 4) root["wola"] = {{"slope_divisor", sc.wola_slope_divisor}};
    return root.dump(2) + "\n";
}

namespace {

bool is_fc_mode(TxMode m) {
    return m != TxMode::Wola && m != TxMode::FOfdm && m != TxMode::CpOfdm;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct PointResult {
    MetricsReport report;
    std::optional<double> ini_db;
    std::optional<OptimizeReport> opt;
    FcConfig cfg;
    WindowSet windows;
    bool has_windows{false};
};

FcConfig derive_cfg(const Scenario& sc, int n_symbols_override = 0) {
    std::vector<SubbandConfig> sbs = sc.subbands;
    if (n_symbols_override > 0)
        for (auto& sb : sbs) sb.n_symbols = n_symbols_override;
    return derive_fc_params(sbs, sc.n_long, sc.overlap, sc.fs_hz);
}

OptimizationScenario make_opt_scenario(const Scenario& sc, const RunOptions& opts) {
    OptimizationScenario os;
    os.cfg = derive_cfg(sc, sc.opt_symbols);
    switch (sc.mode) {
        case TxMode::Case1: os.flags = table_case(1); break;
        case TxMode::Case2: os.flags = table_case(2); break;
        case TxMode::Case3: os.flags = table_case(3); break;
        case TxMode::Case4: os.flags = table_case(4); break;
        case TxMode::Case5: os.flags = table_case(5); break;
        default: throw ConfigError("optimization requires a case1..case5 tx_mode");
    }
    os.l_tbw = sc.l_tbw;
    os.objective = sc.objective;
    os.a_des_db = sc.a_des_db;
    os.mse_target_db = sc.mse_target_db;
    os.guard_hz = sc.guard_hz;
    os.seed = opts.seed.value_or(sc.opt_seed);
    os.bits_per_symbol = sc.bits_per_symbol;
    os.max_outer = opts.max_iters.value_or(sc.max_outer);
    os.max_inner = sc.max_inner;
    os.central_diff = sc.central_diff;
    fill_scenario_defaults(os);
    return os;
}

cplx shift_phasor(std::int64_t center_bin, int n_long, std::size_t n) {
    const std::int64_t idx = mod_floor(center_bin * static_cast<std::int64_t>(n), n_long);
    return std::polar(1.0, 2.0 * M_PI * static_cast<double>(idx) / static_cast<double>(n_long));
}

/// Baseline transmit chains operate directly at the output rate.
ComplexSignal baseline_tx(const Scenario& sc, const FcConfig& cfg,
                          const std::vector<SymbolGrid>& grids) {
    cvec sum;
    for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
        const auto& sb = cfg.subbands[m];
        const auto& sp = cfg.per_subband[m];
        const int n_ofdm = sp.interp * sb.l_ofdm;
        const int n_cp = sp.interp * sb.l_cp;
        cvec x = cp_ofdm_modulate(grids[m], n_ofdm, n_cp);
        if (sc.mode == TxMode::Wola) {
            WolaConfig wc{n_cp / sc.wola_slope_divisor};
            cvec y = wola_tx(x, n_ofdm + n_cp, wc);
            y.resize(x.size()); // drop the trailing slope, keep the burst framing
            x = std::move(y);
        } else if (sc.mode == TxMode::FOfdm) {
            const int n_filt = n_ofdm / 2;
            const Rational scs = cfg.fs_hz / Rational(n_ofdm);
            const Rational cutoff = (Rational(sb.l_act, 2) + Rational(3, 2)) * scs;
            const FofdmConfig proto = design_fofdm_prototype(n_filt, cfg.fs_hz, cutoff);
            x = fofdm_tx(x, proto);
        }
        if (sb.center_bin != 0) {
            for (std::size_t n = 0; n < x.size(); ++n)
                x[n] *= shift_phasor(sb.center_bin, cfg.n_long, n);
        }
        if (sum.empty()) sum.assign(x.size(), cplx(0.0, 0.0));
        if (sum.size() != x.size())
            throw ConfigError("baseline tx: subband burst durations mismatch");
        for (std::size_t n = 0; n < x.size(); ++n) sum[n] += x[n];
    }
    return ComplexSignal{std::move(sum), cfg.fs_hz};
}

double run_ini_measurement(const Scenario& sc, const FcConfig& cfg, const ComplexSignal& tx) {
    const VictimSpec& v = *sc.victim;
    const Rational f_bs = cfg.bin_spacing_hz();
    // interferer band edge over all subbands
    Rational lo = Rational(cfg.subbands[0].center_bin) * f_bs;
    Rational hi = lo;
    for (const auto& sb : cfg.subbands) {
        const Rational c = Rational(sb.center_bin) * f_bs;
        const Rational half = Rational(sb.l_act) * sb.scs_hz / Rational(2);
        lo = std::min(lo, c - half);
        hi = std::max(hi, c + half);
    }
    VictimRxConfig vr;
    const Rational n_ofdm_r = cfg.fs_hz / v.scs_hz;
    if (!n_ofdm_r.is_integer())
        throw ConfigError("victim: fs/scs must be an integer DFT length");
    vr.n_ofdm = static_cast<int>(n_ofdm_r.as_int());
    const Rational cp_r = Rational(vr.n_ofdm) * Rational(144, 2048);
    vr.n_cp = static_cast<int>(cp_r.is_integer() ? cp_r.as_int() : (9LL * vr.n_ofdm) / 128);
    vr.l_act = 12 * v.n_prb;
    vr.fs_hz = cfg.fs_hz;
    const Rational vic_half = Rational(vr.l_act) * v.scs_hz / Rational(2);
    vr.center_hz = v.left ? lo - v.guard_hz - vic_half : hi + v.guard_hz + vic_half;
    return measure_ini_db(tx.samples, vr);
}

PointResult execute_scenario(const Scenario& sc, const RunOptions& opts) {
    PointResult pr;
    pr.cfg = derive_cfg(sc);
    const std::uint64_t meas_seed = opts.seed.value_or(sc.meas_seed);

    std::vector<SymbolGrid> grids;
    std::vector<cvec> bursts;
    for (std::size_t m = 0; m < pr.cfg.subbands.size(); ++m) {
        const auto& sb = pr.cfg.subbands[m];
        grids.push_back(random_qam_grid(sb.l_act, sb.n_symbols, sc.bits_per_symbol,
                                        meas_seed + 1000003 * m));
        bursts.push_back(cp_ofdm_modulate(grids.back(), sb.l_ofdm, sb.l_cp));
    }

    ComplexSignal tx;
    if (is_fc_mode(sc.mode)) {
        if (sc.mode == TxMode::Ols) {
            pr.windows = ols_windows(pr.cfg);
        } else if (sc.mode == TxMode::Ola) {
            pr.windows = ola_windows(pr.cfg);
        } else if (sc.optimize_windows) {
            OptimizationScenario os = make_opt_scenario(sc, opts);
            OptimizeReport rep = sc.n_starts > 1 ? multistart(os, sc.n_starts, os.seed)
                                                 : optimize(os);
            pr.windows = build_window_set(rep.params, os);
            pr.opt = std::move(rep);
        } else {
            OptimizationScenario os = make_opt_scenario(sc, opts);
            pr.windows = build_window_set(initial_params(os), os);
        }
        pr.has_windows = true;
        FcBlockPipeline pipeline(pr.cfg, pr.windows);
        tx = fc_synthesize(bursts, pipeline);
    } else {
        tx = baseline_tx(sc, pr.cfg, grids);
    }

    const MeasurementFilter filter = design_measurement_filter(pr.cfg.fs_hz);
    for (std::size_t m = 0; m < pr.cfg.subbands.size(); ++m) {
        const auto& sb = pr.cfg.subbands[m];
        const auto& sp = pr.cfg.per_subband[m];
        const MseResult mse = measure_chain_mse(tx.samples, grids[m], sp.interp * sb.l_ofdm,
                                                sp.interp * sb.l_cp, sb.center_bin, pr.cfg.n_long);
        rvec mse_db(mse.mse.size()), evm(mse.mse.size());
        for (std::size_t k = 0; k < mse.mse.size(); ++k) {
            mse_db[k] = to_db_floor(mse.mse[k]);
            evm[k] = 100.0 * std::sqrt(std::max(0.0, mse.mse[k]));
        }
        pr.report.mse_db.push_back(std::move(mse_db));
        pr.report.evm_pct.push_back(std::move(evm));
        pr.report.mse_avg_db.push_back(to_db_floor(mse.mse_avg));
        pr.report.mse_max_db.push_back(to_db_floor(mse.mse_max));
        double left = -300.0, right = -300.0;
        try {
            left = measure_scr_db(tx, pr.cfg, static_cast<int>(m), Side::Left, filter, sc.guard_hz);
        } catch (const ConfigError&) {
        }
        try {
            right = measure_scr_db(tx, pr.cfg, static_cast<int>(m), Side::Right, filter, sc.guard_hz);
        } catch (const ConfigError&) {
        }
        pr.report.scr_left_db.push_back(left);
        pr.report.scr_right_db.push_back(right);
    }
    if (sc.victim) pr.ini_db = run_ini_measurement(sc, pr.cfg, tx);
    return pr;
}

void write_summary_file(const std::filesystem::path& dir, const Scenario& sc,
                        const PointResult& pr, std::map<std::string, std::string>* collect) {
    std::map<std::string, std::string> kv;
    kv["scenario"] = sc.name;
    kv["tx_mode"] = tx_mode_name(sc.mode);
    for (std::size_t m = 0; m < pr.report.mse_avg_db.size(); ++m) {
        const std::string p = "subband" + std::to_string(m) + ".";
        kv[p + "mse_avg_db"] = fmt(pr.report.mse_avg_db[m]);
        kv[p + "mse_max_db"] = fmt(pr.report.mse_max_db[m]);
        kv[p + "scr_left_db"] = fmt(pr.report.scr_left_db[m]);
        kv[p + "scr_right_db"] = fmt(pr.report.scr_right_db[m]);
    }
    if (pr.ini_db) kv["ini_db"] = fmt(*pr.ini_db);
    if (pr.opt) {
        kv["opt.feasible"] = pr.opt->feasible ? "1" : "0";
        kv["opt.objective_db"] = fmt(pr.opt->result.objective_db);
        for (std::size_t m = 0; m < pr.opt->result.scr_db.size(); ++m)
            kv["opt.scr" + std::to_string(m) + "_db"] = fmt(pr.opt->result.scr_db[m]);
        kv["opt.total_evals"] = std::to_string(pr.opt->total_evals);
        kv["opt.outer_iters"] = std::to_string(pr.opt->history.size());
    }
    std::ofstream out(dir / "summary.txt");
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
    if (collect) *collect = std::move(kv);
}

void write_artifacts(const std::filesystem::path& dir, const Scenario& sc, const PointResult& pr,
                     std::map<std::string, std::string>* collect) {
    std::filesystem::create_directories(dir);
    write_summary_file(dir, sc, pr, collect);
    {
        std::ofstream csv(dir / "per_subcarrier.csv");
        pr.report.write_csv(csv);
    }
    if (pr.has_windows) {
        std::ofstream wf(dir / "windows.txt");
        save_windows(wf, pr.windows);
    }
    if (pr.opt) {
        std::ofstream hist(dir / "history.csv");
        hist << "outer,inner_iters,objective_db,max_violation_db,evals\n";
        for (const auto& h : pr.opt->history)
            hist << h.outer << "," << h.inner_iters << "," << fmt(h.objective_db) << ","
                 << fmt(h.max_violation_db) << "," << h.evals << "\n";
    }
}

} // namespace

RunOutcome run_scenario_collect(const Scenario& sc, const RunOptions& opts) {
    RunOutcome rc;
    PointResult pr = execute_scenario(sc, opts);
    write_artifacts(opts.out_dir, sc, pr, &rc.summary);
    rc.exit_code = (pr.opt && !pr.opt->feasible) ? 2 : 0;
    return rc;
}

int run_scenario(const std::string& path, const RunOptions& opts) {
    try {
        const Scenario sc = load_scenario(path);
        const RunOutcome rc = run_scenario_collect(sc, opts);
        for (const auto& [k, v] : rc.summary) std::cout << k << "=" << v << "\n";
        if (rc.exit_code == 2)
            std::cerr << "warning: optimizer finished infeasible, artifacts carry the best found\n";
        return rc.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

Scenario apply_axis(const Scenario& base, const std::string& axis, double value) {
    Scenario sc = base;
    sc.sweep_axis.clear();
    sc.sweep_values.clear();
    if (axis == "guard_hz") {
        if (!sc.victim) throw ConfigError("sweep: guard_hz axis needs a victim block");
        sc.victim->guard_hz = Rational(static_cast<std::int64_t>(value));
    } else if (axis == "n_prb") {
        auto& sb = sc.subbands.front();
        sb.n_prb = static_cast<int>(value);
        sb.l_act = 12 * sb.n_prb;
        const int l_ofdm = derive_ofdm_ifft_length(sb.n_prb);
        if (l_ofdm != sb.l_ofdm) {
            sb.l_cp = static_cast<int>((static_cast<std::int64_t>(sb.l_cp) * l_ofdm) / sb.l_ofdm);
            sb.l_ofdm = l_ofdm;
        }
    } else if (axis == "a_des_db") {
        sc.a_des_db = value;
    } else {
        throw ConfigError("sweep: unknown axis '" + axis + "'");
    }
    return sc;
}

} // namespace

int sweep_scenario(const std::string& path, const RunOptions& opts) {
    try {
        const Scenario base = load_scenario(path);
        if (base.sweep_axis.empty())
            throw ConfigError("sweep: scenario has no sweep block");
        std::vector<std::future<PointResult>> futs;
        const int jobs = std::max(1, opts.jobs);
        std::vector<PointResult> results(base.sweep_values.size());
        for (std::size_t i = 0; i < base.sweep_values.size(); i += static_cast<std::size_t>(jobs)) {
            const std::size_t hi = std::min(base.sweep_values.size(), i + static_cast<std::size_t>(jobs));
            futs.clear();
            for (std::size_t k = i; k < hi; ++k) {
                Scenario sc = apply_axis(base, base.sweep_axis, base.sweep_values[k]);
                futs.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                          [sc, &opts] { return execute_scenario(sc, opts); }));
            }
            for (std::size_t k = i; k < hi; ++k) results[k] = futs[k - i].get();
        }
        std::filesystem::create_directories(opts.out_dir);
        std::ofstream csv(std::filesystem::path(opts.out_dir) / "sweep.csv");
        csv << "index,axis,value,subband,mse_avg_db,mse_max_db,scr_left_db,scr_right_db,ini_db\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const PointResult& pr = results[i];
            for (std::size_t m = 0; m < pr.report.mse_avg_db.size(); ++m) {
                csv << i << "," << base.sweep_axis << "," << fmt(base.sweep_values[i]) << "," << m
                    << "," << fmt(pr.report.mse_avg_db[m]) << "," << fmt(pr.report.mse_max_db[m])
                    << "," << fmt(pr.report.scr_left_db[m]) << ","
                    << fmt(pr.report.scr_right_db[m]) << ","
                    << (pr.ini_db ? fmt(*pr.ini_db) : "nan") << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int counts_scenario(const std::string& path, const RunOptions& opts) {
    try {
        const Scenario sc = load_scenario(path);
        const FcConfig cfg = derive_cfg(sc, sc.optimize_windows ? sc.opt_symbols : 0);
        std::filesystem::create_directories(opts.out_dir);
        {
            std::ofstream csv(std::filesystem::path(opts.out_dir) / "fft_counts.csv");
            write_fft_count_csv(csv, {16, 24, 32, 48, 64, 128, 256, 384, 512, 768, 1024, 2048});
        }
        {
            std::ofstream csv(std::filesystem::path(opts.out_dir) / "chain_counts.csv");
            BaselineParams base;
            base.n_ofdm = cfg.per_subband.front().interp * cfg.subbands.front().l_ofdm;
            base.n_cp = cfg.per_subband.front().interp * cfg.subbands.front().l_cp;
            base.n_filt = base.n_ofdm / 2;
            base.interp = cfg.per_subband.front().interp;
            write_chain_count_csv(csv, cfg, base);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int export_windows(const std::string& scenario_path, const std::string& out_file,
                   const RunOptions& opts) {
    try {
        const Scenario sc = load_scenario(scenario_path);
        const FcConfig cfg = derive_cfg(sc);
        WindowSet ws;
        if (sc.mode == TxMode::Ols) {
            ws = ols_windows(cfg);
        } else if (sc.mode == TxMode::Ola) {
            ws = ola_windows(cfg);
        } else if (is_fc_mode(sc.mode)) {
            OptimizationScenario os = make_opt_scenario(sc, opts);
            ws = build_window_set(initial_params(os), os);
        } else {
            throw ConfigError("windows export: scenario has no FC window set");
        }
        std::ofstream out(out_file);
        if (!out) throw ConfigError("windows export: cannot write '" + out_file + "'");
        save_windows(out, ws);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int import_windows(const std::string& scenario_path, const std::string& window_file,
                   const RunOptions&) {
    try {
        const Scenario sc = load_scenario(scenario_path);
        const FcConfig cfg = derive_cfg(sc);
        std::ifstream in(window_file);
        if (!in) throw ConfigError("windows import: cannot open '" + window_file + "'");
        const WindowSet ws = load_windows(in);
        FcBlockPipeline pipeline(cfg, ws); // validates all dimensions
        std::cout << "windows: " << ws.fd.size() << " subband(s)";
        for (std::size_t m = 0; m < ws.fd.size(); ++m)
            std::cout << ", fd[" << m << "]=" << ws.fd[m].size() << " analysis[" << m
                      << "]=" << ws.analysis[m].size();
        std::cout << ", synthesis=" << ws.synthesis.size() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace fcf
