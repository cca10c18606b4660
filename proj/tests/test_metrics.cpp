#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fcf/fcfb.hpp"
#include "fcf/fft.hpp"
#include "fcf/metrics.hpp"
#include "fcf/optimizer.hpp"

using namespace fcf;

namespace {

cvec random_cvec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return 2.0 * (static_cast<double>(rng()) / 1.8446744073709552e19) - 1.0; };
    cvec v(n);
    for (auto& x : v) x = cplx(u(), u());
    return v;
}

/// White noise confined to |f| <= half_bw by brute-force spectral masking.
cvec confined_noise(std::size_t n, double half_bw_hz, double fs, std::uint64_t seed) {
    cvec x = random_cvec(n, seed);
    cvec spec = fft(x);
    for (std::size_t k = 0; k < n; ++k) {
        double f = fs * static_cast<double>(k) / static_cast<double>(n);
        if (f >= fs / 2.0) f -= fs;
        if (std::abs(f) > half_bw_hz) spec[k] = cplx(0.0, 0.0);
    }
    return ifft(spec);
}

} // namespace

TEST_CASE("measurement filter meets the mask on a dense grid") {
    const MeasurementFilter mf = design_measurement_filter(Rational(30720000));
    const double fs = 30.72e6;
    const double dc = mf.response_mag(0.0);
    CHECK(std::abs(20.0 * std::log10(dc)) < 0.01);

    double worst_pass = 0.0, worst_stop = -1e9;
    const int grid = 10000;
    for (int i = 0; i <= grid; ++i) {
        const double f = 0.5 * fs * static_cast<double>(i) / grid;
        const double mag_db = 20.0 * std::log10(std::max(mf.response_mag(f), 1e-300));
        if (f <= 90e3) worst_pass = std::max(worst_pass, std::abs(mag_db));
        if (f >= 97.5e3) worst_stop = std::max(worst_stop, mag_db);
    }
    CHECK(worst_pass <= 0.1);
    CHECK(worst_stop <= -100.0);

    const auto taps = static_cast<std::int64_t>(mf.implemented_taps());
    CHECK(taps >= 350);
    CHECK(taps <= 6000);
}

TEST_CASE("measurement filter scales to other sampling rates") {
    for (std::int64_t fs : {7680000LL, 122880000LL, 480000LL}) {
        const MeasurementFilter mf = design_measurement_filter(Rational(fs));
        const double half = static_cast<double>(fs) / 2.0;
        double worst_stop = -1e9;
        for (int i = 0; i <= 4000; ++i) {
            const double f = 97.5e3 + (half - 97.5e3) * static_cast<double>(i) / 4000;
            worst_stop = std::max(worst_stop,
                                  20.0 * std::log10(std::max(mf.response_mag(f), 1e-300)));
        }
        CAPTURE(fs);
        CHECK(worst_stop <= -100.0);
        CHECK(std::abs(20.0 * std::log10(mf.response_mag(45e3))) < 0.1);
    }
    CHECK_THROWS_AS(design_measurement_filter(Rational(150000)), ConfigError);
}

TEST_CASE("equivalent single-stage taps reproduce the cascade response") {
    const MeasurementFilter mf = design_measurement_filter(Rational(7680000));
    const rvec eq = mf.equivalent_taps();
    REQUIRE(static_cast<std::int64_t>(eq.size()) == mf.equivalent_order() + 1);
    for (double f : {0.0, 50e3, 93e3, 200e3, 1.0e6}) {
        const double w = 2.0 * M_PI * f / 7.68e6;
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < eq.size(); ++n) {
            re += eq[n] * std::cos(w * static_cast<double>(n));
            im -= eq[n] * std::sin(w * static_cast<double>(n));
        }
        CHECK(std::hypot(re, im) == doctest::Approx(mf.response_mag(f)).epsilon(1e-9));
    }
}

TEST_CASE("band-limited noise reads at the filter floor") {
    const Rational fs(7680000);
    const MeasurementFilter mf = design_measurement_filter(fs);
    ComplexSignal sig;
    sig.rate_hz = fs;
    sig.samples = confined_noise(1 << 15, 180e3, 7.68e6, 9);
    // allocation spans [-180, 180] kHz
    const double scr = measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Right, mf);
    CHECK(scr <= -100.0);
}

TEST_CASE("tone in the leakage band reports a large positive ratio") {
    const Rational fs(7680000);
    const MeasurementFilter mf = design_measurement_filter(fs);
    ComplexSignal sig;
    sig.rate_hz = fs;
    sig.samples.resize(1 << 14);
    for (std::size_t n = 0; n < sig.samples.size(); ++n)
        sig.samples[n] = std::polar(1.0, 2.0 * M_PI * 450e3 * static_cast<double>(n) / 7.68e6);
    const double scr = measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Right, mf);
    CHECK(scr > 50.0);
    CHECK(scr <= 200.0);
}

TEST_CASE("the confinement ratio ignores overall scaling") {
    const Rational fs(7680000);
    const MeasurementFilter mf = design_measurement_filter(fs);
    ComplexSignal sig;
    sig.rate_hz = fs;
    sig.samples = confined_noise(1 << 13, 400e3, 7.68e6, 10);
    const double a = measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Right, mf);
    for (auto& v : sig.samples) v *= 1000.0;
    const double b = measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Right, mf);
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("leakage band beyond Nyquist is rejected") {
    const Rational fs(480000);
    const MeasurementFilter mf = design_measurement_filter(fs);
    ComplexSignal sig;
    sig.rate_hz = fs;
    sig.samples = random_cvec(4096, 11);
    CHECK_THROWS_AS(
        measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Right, mf),
        ConfigError);
}

TEST_CASE("per-subcarrier MSE and aggregates") {
    SymbolGrid tx(24, 10);
    for (auto& v : tx.x) v = cplx(1.0, 0.0);
    SymbolGrid rx = tx;
    MseResult r = compute_mse(tx, rx);
    CHECK(to_db_floor(r.mse_avg) == -300.0);

    for (auto& v : rx.x) v += cplx(0.1, 0.0); // |e|^2 = 0.01 everywhere
    r = compute_mse(tx, rx);
    for (double v : r.mse) CHECK(10.0 * std::log10(v) == doctest::Approx(-20.0).epsilon(1e-9));
    CHECK(10.0 * std::log10(r.mse_avg) == doctest::Approx(-20.0));
    CHECK(10.0 * std::log10(r.mse_max) == doctest::Approx(-20.0));
    CHECK(100.0 * std::sqrt(r.mse[0]) == doctest::Approx(10.0)); // EVM percent
}

TEST_CASE("aggregate bounds and edge-set size") {
    SymbolGrid tx(36, 4);
    for (auto& v : tx.x) v = cplx(1.0, 0.0);
    SymbolGrid rx = tx;
    std::mt19937_64 rng(13);
    for (auto& v : rx.x)
        v += cplx(1e-2 * (static_cast<double>(rng()) / 1.8446744073709552e19), 0.0);
    const MseResult r = compute_mse(tx, rx);
    double mn = 1e9, mx = 0.0;
    for (double v : r.mse) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    CHECK(r.mse_avg >= mn);
    CHECK(r.mse_avg <= mx);
    // 36 active: edge mean over exactly 24 subcarriers
    double edge = 0.0;
    for (int k = 0; k < 12; ++k) edge += r.mse[static_cast<std::size_t>(k)];
    for (int k = 24; k < 36; ++k) edge += r.mse[static_cast<std::size_t>(k)];
    CHECK(r.mse_max == doctest::Approx(edge / 24.0).epsilon(1e-12));
    // 12 active: the edge sets coincide with the whole band
    SymbolGrid t2(12, 2), r2(12, 2);
    for (auto& v : t2.x) v = cplx(1.0, 0.0);
    r2 = t2;
    r2.at(0, 0) += cplx(0.3, 0.0);
    const MseResult s = compute_mse(t2, r2);
    CHECK(s.mse_max == doctest::Approx(s.mse_avg));
}

TEST_CASE("dimension mismatches are rejected") {
    SymbolGrid a(12, 2), b(12, 3);
    CHECK_THROWS_AS(compute_mse(a, b), ConfigError);
}

TEST_CASE("payload MSE estimate agrees with the impulse-driven second moment") {
    // small non-transparent bank so the intrinsic error is finite
    SubbandConfig sb;
    sb.n_prb = 1;
    sb.l_act = 12;
    sb.scs_hz = Rational(15000);
    sb.l_ofdm = 16;
    sb.l_cp = 2;
    sb.n_symbols = 3;
    FcConfig cfg = derive_fc_params({sb}, 32, Rational(1, 2), Rational(480000));
    WindowSet ws = ols_windows(cfg);
    // FD window with a realistic transition: passband 12, ramps of 2
    ws.fd[0] = build_fd_window({16, 12, 2, {0.3, 0.8}});
    FcBlockPipeline pipe(cfg, ws);
    const int n_ofdm = cfg.per_subband[0].interp * sb.l_ofdm;
    const int n_cp = cfg.per_subband[0].interp * sb.l_cp;

    auto run_chain = [&](const SymbolGrid& g) {
        const cvec burst = cp_ofdm_modulate(g, sb.l_ofdm, sb.l_cp);
        const ComplexSignal out = fc_synthesize({burst}, pipe);
        return cp_ofdm_demod_highrate(out.samples, n_ofdm, n_cp, sb.l_act, sb.n_symbols);
    };

    // columns of the end-to-end operator by driving unit impulses
    const int dims = sb.l_act * sb.n_symbols;
    std::vector<cvec> columns;
    for (int j = 0; j < dims; ++j) {
        SymbolGrid e(sb.l_act, sb.n_symbols);
        e.x[static_cast<std::size_t>(j)] = cplx(1.0, 0.0);
        columns.push_back(run_chain(e).x);
    }
    // per-subcarrier channel gain: symbol-average of the diagonal
    std::vector<cplx> gain(static_cast<std::size_t>(sb.l_act));
    for (int k = 0; k < sb.l_act; ++k) {
        cplx acc(0.0, 0.0);
        for (int s = 0; s < sb.n_symbols; ++s) {
            const int d = s * sb.l_act + k;
            acc += columns[static_cast<std::size_t>(d)][static_cast<std::size_t>(d)];
        }
        gain[static_cast<std::size_t>(k)] = acc / static_cast<double>(sb.n_symbols);
    }
    // predicted MSE for unit-power uncorrelated symbols
    rvec predicted(static_cast<std::size_t>(sb.l_act), 0.0);
    for (int k = 0; k < sb.l_act; ++k) {
        double acc = 0.0;
        for (int s = 0; s < sb.n_symbols; ++s) {
            const int row = s * sb.l_act + k;
            for (int j = 0; j < dims; ++j) {
                cplx t = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(row)] /
                         gain[static_cast<std::size_t>(k)];
                if (j == row) t -= cplx(1.0, 0.0);
                acc += std::norm(t);
            }
        }
        predicted[static_cast<std::size_t>(k)] = acc / static_cast<double>(sb.n_symbols);
    }
    double predicted_avg = 0.0;
    for (double v : predicted) predicted_avg += v;
    predicted_avg /= static_cast<double>(sb.l_act);

    // measured over many independent payloads with the same fixed gains
    double measured_avg = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const SymbolGrid g = random_qam_grid(sb.l_act, sb.n_symbols, 2, 500 + static_cast<std::uint64_t>(t));
        SymbolGrid rx = run_chain(g);
        for (int k = 0; k < sb.l_act; ++k)
            for (int s = 0; s < sb.n_symbols; ++s) rx.at(k, s) /= gain[static_cast<std::size_t>(k)];
        measured_avg += compute_mse(g, rx).mse_avg;
    }
    measured_avg /= trials;
    const double diff_db = std::abs(10.0 * std::log10(measured_avg) - 10.0 * std::log10(predicted_avg));
    CHECK(diff_db < 0.5);
}

TEST_CASE("left and right confinement agree for symmetric spectra") {
    // random-phase signal with a symmetric spectral magnitude: in-band flat,
    // skirts decaying to -60 dB; both sides read the same leakage
    const Rational fs(7680000);
    const MeasurementFilter mf = design_measurement_filter(fs);
    const std::size_t n = 1 << 15;
    std::mt19937_64 rng(29);
    cvec spec(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        double f = 7.68e6 * static_cast<double>(k) / static_cast<double>(n);
        if (f >= 7.68e6 / 2.0) f -= 7.68e6;
        const double a = std::abs(f);
        double mag = 0.0;
        if (a <= 180e3) mag = 1.0;
        else if (a <= 600e3) mag = std::pow(10.0, -60.0 / 20.0 * (a - 180e3) / 420e3);
        if (mag > 0.0) {
            const double phase = 2.0 * M_PI * (static_cast<double>(rng()) / 1.8446744073709552e19);
            spec[k] = std::polar(mag, phase);
        }
    }
    ComplexSignal sig;
    sig.rate_hz = fs;
    sig.samples = ifft(spec);
    const double nl = measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Left, mf);
    const double nr = measure_scr_db(sig, Rational(-180000), Rational(180000), Side::Right, mf);
    CHECK(std::abs(nl - nr) < 0.5);

    // the DC-straddling allocation sits half a subcarrier off the bin-locked
    // window, so the chain shows a small structural left/right offset
    SubbandConfig sb;
    sb.n_prb = 2;
    sb.l_act = 24;
    sb.scs_hz = Rational(15000);
    sb.l_ofdm = 128;
    sb.l_cp = 9;
    sb.n_symbols = 100;
    FcConfig cfg = derive_fc_params({sb}, 128, Rational(1, 2), Rational(7680000));
    OptimizationScenario sc;
    sc.cfg = cfg;
    fill_scenario_defaults(sc);
    const WindowSet ws = build_window_set(initial_params(sc), sc);
    FcBlockPipeline pipe(cfg, ws);
    const SymbolGrid g = random_qam_grid(24, 100, 2, 77);
    const cvec burst = cp_ofdm_modulate(g, 128, 9);
    const ComplexSignal out = fc_synthesize({burst}, pipe);
    const double left = measure_scr_db(out, cfg, 0, Side::Left, mf);
    const double right = measure_scr_db(out, cfg, 0, Side::Right, mf);
    CHECK(std::abs(left - right) < 2.5);
}

TEST_CASE("interference on an empty victim floor") {
    VictimRxConfig v;
    v.n_ofdm = 256;
    v.n_cp = 18;
    v.l_act = 48;
    v.center_hz = Rational(0);
    v.fs_hz = Rational(3840000);
    cvec zeros(static_cast<std::size_t>(3 * 274), cplx(0.0, 0.0));
    CHECK(measure_ini_db(zeros, v) == -300.0);
    cvec tooshort(10, cplx(0.0, 0.0));
    CHECK_THROWS_AS(measure_ini_db(tooshort, v), ConfigError);
}

TEST_CASE("report emitters are stable") {
    MetricsReport rep;
    rep.mse_db.push_back({-30.0, -31.5});
    rep.evm_pct.push_back({3.16227766017, 2.66072505986});
    rep.mse_avg_db.push_back(-30.7);
    rep.mse_max_db.push_back(-30.0);
    rep.scr_left_db.push_back(-50.1);
    rep.scr_right_db.push_back(-50.2);
    std::ostringstream csv;
    rep.write_csv(csv);
    CHECK(csv.str().find("subband,subcarrier,mse_db,evm_pct\n0,0,-30,3.16227766017\n") == 0);
    std::ostringstream sum;
    rep.write_summary(sum);
    CHECK(sum.str().find("subband0.mse_avg_db=-30.7") != std::string::npos);
}
