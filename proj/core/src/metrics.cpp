#include "fcf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fcf/fft.hpp"

namespace fcf {
namespace {

constexpr double kPassbandHalfHz = 90e3;   // 180 kHz measurement bandwidth
constexpr double kTransitionHz = 7.5e3;
constexpr double kStopbandDb = 105.0;      // 5 dB design margin over the 100 dB mask

double bessel_i0(double x) {
    // power series, converges quickly for the beta values used here
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

/// Kaiser lowpass with cutoff fc (Hz, mid-transition), transition width tw,
/// stopband attenuation att_db, at rate fs. DC gain normalized to one.
rvec kaiser_lowpass(double fc_hz, double tw_hz, double att_db, double fs_hz) {
    const double d_omega = 2.0 * M_PI * tw_hz / fs_hz;
    const double beta = att_db > 50.0 ? 0.1102 * (att_db - 8.7)
                        : att_db > 21.0
                            ? 0.5842 * std::pow(att_db - 21.0, 0.4) + 0.07886 * (att_db - 21.0)
                            : 0.0;
    int order = static_cast<int>(std::ceil((att_db - 7.95) / (2.285 * d_omega)));
    if (order % 2 != 0) ++order; // even order, odd symmetric length
    const int len = order + 1;
    const double mid = order / 2.0;
    const double i0b = bessel_i0(beta);
    rvec h(static_cast<std::size_t>(len));
    double sum = 0.0;
    for (int n = 0; n < len; ++n) {
        const double t = n - mid;
        const double x = 2.0 * fc_hz / fs_hz;
        const double sinc = t == 0.0 ? x : std::sin(M_PI * x * t) / (M_PI * t);
        const double r = 2.0 * t / order;
        const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        h[static_cast<std::size_t>(n)] = sinc * w;
        sum += h[static_cast<std::size_t>(n)];
    }
    for (auto& v : h) v /= sum;
    return h;
}

double fir_mag(const rvec& h, double omega) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        re += h[n] * std::cos(omega * static_cast<double>(n));
        im -= h[n] * std::sin(omega * static_cast<double>(n));
    }
    return std::hypot(re, im);
}

} // namespace

double MeasurementFilter::response_mag(double f_hz) const {
    const double fs = fs_hz.as_double();
    const double w = 2.0 * M_PI * f_hz / fs;
    double mag = fir_mag(h1, w);
    if (!h2.empty()) mag *= fir_mag(h2, w * upsample);
    return mag;
}

rvec MeasurementFilter::equivalent_taps() const {
    rvec eq(static_cast<std::size_t>(equivalent_order()) + 1, 0.0);
    for (std::size_t i = 0; i < h2.size(); ++i)
        for (std::size_t k = 0; k < h1.size(); ++k)
            eq[i * static_cast<std::size_t>(upsample) + k] += h2[i] * h1[k];
    return eq;
}

MeasurementFilter design_measurement_filter(Rational fs_hz) {
    const double fs = fs_hz.as_double();
    if (fs < 2.0 * (kPassbandHalfHz + kTransitionHz))
        throw ConfigError("design_measurement_filter: mask infeasible at fs = " + fs_hz.str());

    MeasurementFilter mf;
    mf.fs_hz = fs_hz;
    // Effective rate of the sharp stage around 550 kHz; below ~1.6 MHz a
    // single stage is already short enough.
    const double target_rate = 548571.43;
    int u = std::max(1, static_cast<int>(std::round(fs / target_rate)));
    while (u > 1 && fs / u < 2.2 * (kPassbandHalfHz + kTransitionHz)) --u;
    if (u <= 2) {
        mf.upsample = 1;
        mf.h1 = kaiser_lowpass(kPassbandHalfHz + kTransitionHz / 2.0, kTransitionHz,
                               kStopbandDb, fs);
        mf.h2 = {1.0};
        return mf;
    }
    mf.upsample = u;
    const double sub_rate = fs / u;
    // H2 sets the 7.5 kHz transition on the stride-u grid; H1 passes the
    // measurement band and stops H2's first image.
    mf.h2 = kaiser_lowpass(kPassbandHalfHz + kTransitionHz / 2.0, kTransitionHz, kStopbandDb,
                           sub_rate);
    const double stop_edge = sub_rate - (kPassbandHalfHz + kTransitionHz);
    const double pass_edge = kPassbandHalfHz + kTransitionHz;
    mf.h1 = kaiser_lowpass(0.5 * (pass_edge + stop_edge), stop_edge - pass_edge, kStopbandDb, fs);
    return mf;
}

namespace {

rvec band_weights(std::size_t fft_len, double fs, double center_hz,
                  const MeasurementFilter& filter) {
    rvec w(fft_len);
    for (std::size_t k = 0; k < fft_len; ++k) {
        double f = fs * static_cast<double>(k) / static_cast<double>(fft_len);
        if (f >= fs / 2.0) f -= fs; // signed frequency
        const double m = filter.response_mag(f - center_hz);
        w[k] = m * m;
    }
    return w;
}

double cap_scr(double p_leak, double p_sig) {
    if (p_sig <= 0.0) return 200.0;
    const double db = 10.0 * std::log10(std::max(p_leak, 1e-300) / p_sig);
    return std::min(db, 200.0);
}

} // namespace

ScrAnalyzer::ScrAnalyzer(std::size_t signal_len, Rational fs_hz, Rational edge_low_hz,
                         Rational edge_high_hz, Side side, const MeasurementFilter& filter,
                         Rational guard_hz) {
    fft_len_ = next_pow2(signal_len);
    const double fs = fs_hz.as_double();
    const double guard = guard_hz.as_double();
    double sig_center, leak_center;
    if (side == Side::Right) {
        sig_center = edge_high_hz.as_double() - kPassbandHalfHz;
        leak_center = edge_high_hz.as_double() + guard + kPassbandHalfHz;
    } else {
        sig_center = edge_low_hz.as_double() + kPassbandHalfHz;
        leak_center = edge_low_hz.as_double() - guard - kPassbandHalfHz;
    }
    const double nyq = fs / 2.0;
    if (std::abs(leak_center) + kPassbandHalfHz > nyq)
        throw ConfigError("measure_scr: leakage measurement band exceeds the Nyquist range");
    w_signal_ = band_weights(fft_len_, fs, sig_center, filter);
    w_leak_ = band_weights(fft_len_, fs, leak_center, filter);
    // edge taper standing in for the steady-state transient discard: without
    // it the burst's own start/stop splatter dominates the leakage band
    taper_.resize(signal_len);
    for (std::size_t n = 0; n < signal_len; ++n)
        taper_[n] = 0.5 * (1.0 - std::cos(2.0 * M_PI * (static_cast<double>(n) + 0.5) /
                                          static_cast<double>(signal_len)));
}

cvec ScrAnalyzer::burst_spectrum(const cvec& samples) const {
    cvec padded(fft_len_, cplx(0.0, 0.0));
    for (std::size_t n = 0; n < samples.size() && n < taper_.size(); ++n)
        padded[n] = samples[n] * taper_[n];
    return fft(padded);
}

double ScrAnalyzer::measure_db_spectrum(const cvec& spectrum) const {
    double p_sig = 0.0, p_leak = 0.0;
    for (std::size_t k = 0; k < fft_len_; ++k) {
        const double e = std::norm(spectrum[k]);
        p_sig += w_signal_[k] * e;
        p_leak += w_leak_[k] * e;
    }
    return cap_scr(p_leak, p_sig);
}

double ScrAnalyzer::measure_db(const cvec& samples) const {
    return measure_db_spectrum(burst_spectrum(samples));
}

double measure_scr_db(const ComplexSignal& signal, Rational edge_low_hz, Rational edge_high_hz,
                      Side side, const MeasurementFilter& filter, Rational guard_hz) {
    if (signal.samples.size() < 64)
        throw ConfigError("measure_scr: signal too short for a stable measurement");
    ScrAnalyzer an(signal.samples.size(), signal.rate_hz, edge_low_hz, edge_high_hz, side,
                   filter, guard_hz);
    return an.measure_db(signal.samples);
}

std::pair<Rational, Rational> occupied_band(const FcConfig& cfg, int m) {
    // subcarrier k sits at (k - l_act/2) scs from the center; the occupied
    // band extends half a spacing past the outermost subcarriers
    const auto& sb = cfg.subbands[static_cast<std::size_t>(m)];
    const Rational center = Rational(sb.center_bin) * cfg.bin_spacing_hz();
    const Rational lo = center - Rational(sb.l_act + 1) * sb.scs_hz / Rational(2);
    const Rational hi = center + Rational(sb.l_act - 1) * sb.scs_hz / Rational(2);
    return {lo, hi};
}

double measure_scr_db(const ComplexSignal& signal, const FcConfig& cfg, int m, Side side,
                      const MeasurementFilter& filter, Rational guard_hz) {
    const auto [lo, hi] = occupied_band(cfg, m);
    return measure_scr_db(signal, lo, hi, side, filter, guard_hz);
}

MseResult compute_mse(const SymbolGrid& tx, const SymbolGrid& rx_equalized, int n_edge) {
    if (tx.l_act != rx_equalized.l_act || tx.n_symbols != rx_equalized.n_symbols)
        throw ConfigError("compute_mse: grid dimensions mismatch");
    MseResult r;
    r.mse.assign(static_cast<std::size_t>(tx.l_act), 0.0);
    for (int k = 0; k < tx.l_act; ++k) {
        double acc = 0.0;
        for (int s = 0; s < tx.n_symbols; ++s) acc += std::norm(tx.at(k, s) - rx_equalized.at(k, s));
        r.mse[static_cast<std::size_t>(k)] = acc / static_cast<double>(tx.n_symbols);
    }
    r.mse_avg = 0.0;
    for (double v : r.mse) r.mse_avg += v;
    r.mse_avg /= static_cast<double>(tx.l_act);

    const int edge = std::min(n_edge, tx.l_act);
    double acc = 0.0;
    int count = 0;
    for (int k = 0; k < tx.l_act; ++k) {
        const bool left = k < edge;
        const bool right = k >= tx.l_act - edge;
        if (left || right) {
            acc += r.mse[static_cast<std::size_t>(k)];
            ++count;
        }
    }
    r.mse_max = count > 0 ? acc / count : 0.0;
    return r;
}

double to_db_floor(double linear, double floor_db) {
    if (linear <= 0.0) return floor_db;
    return std::max(10.0 * std::log10(linear), floor_db);
}

MseResult measure_chain_mse(const cvec& rx_signal, const SymbolGrid& tx_ref, int n_ofdm,
                            int n_cp, std::int64_t center_bin, int n_long, int n_edge) {
    MseResult worst;
    bool first = true;
    for (const int adv : {n_cp / 2}) {
        const SymbolGrid rx = cp_ofdm_demod_highrate(rx_signal, n_ofdm, n_cp, tx_ref.l_act,
                                                     tx_ref.n_symbols, center_bin, n_long, adv);
        const SymbolGrid eq = zf_equalize(rx, tx_ref);
        const MseResult r = compute_mse(tx_ref, eq, n_edge);
        if (first) {
            worst = r;
            first = false;
        } else {
            for (std::size_t k = 0; k < worst.mse.size(); ++k)
                worst.mse[k] = std::max(worst.mse[k], r.mse[k]);
            worst.mse_avg = std::max(worst.mse_avg, r.mse_avg);
            worst.mse_max = std::max(worst.mse_max, r.mse_max);
        }
    }
    return worst;
}

double measure_ini_db(const cvec& rx, const VictimRxConfig& victim) {
    const int sym_len = victim.n_ofdm + victim.n_cp;
    const int n_syms = static_cast<int>(rx.size() / static_cast<std::size_t>(sym_len));
    if (n_syms < 1)
        throw ConfigError("measure_ini: signal shorter than one victim OFDM symbol");
    cvec trimmed(rx.begin(), rx.begin() + static_cast<std::size_t>(n_syms) * sym_len);
    // shift the victim center to baseband; center/fs is rational so the
    // rotation is exact and periodic
    const Rational ratio = victim.center_hz / victim.fs_hz;
    if (ratio.num != 0) {
        const std::int64_t period = ratio.den;
        for (std::size_t n = 0; n < trimmed.size(); ++n) {
            const std::int64_t idx = mod_floor(ratio.num * static_cast<std::int64_t>(n), period);
            trimmed[n] *= std::polar(1.0, -2.0 * M_PI * static_cast<double>(idx) /
                                              static_cast<double>(period));
        }
    }
    const SymbolGrid g = cp_ofdm_demod_highrate(trimmed, victim.n_ofdm, victim.n_cp,
                                                victim.l_act, n_syms);
    double acc = 0.0;
    for (const auto& v : g.x) acc += std::norm(v);
    return to_db_floor(acc / static_cast<double>(g.x.size()));
}

namespace {
void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
}
} // namespace

void MetricsReport::write_csv(std::ostream& os) const {
    os << "subband,subcarrier,mse_db,evm_pct\n";
    for (std::size_t m = 0; m < mse_db.size(); ++m) {
        for (std::size_t k = 0; k < mse_db[m].size(); ++k) {
            os << m << "," << k << ",";
            put(os, mse_db[m][k]);
            os << ",";
            put(os, evm_pct[m][k]);
            os << "\n";
        }
    }
}

void MetricsReport::write_summary(std::ostream& os) const {
    for (std::size_t m = 0; m < mse_avg_db.size(); ++m) {
        os << "subband" << m << ".mse_avg_db=";
        put(os, mse_avg_db[m]);
        os << "\nsubband" << m << ".mse_max_db=";
        put(os, mse_max_db[m]);
        os << "\n";
        if (m < scr_left_db.size()) {
            os << "subband" << m << ".scr_left_db=";
            put(os, scr_left_db[m]);
            os << "\n";
        }
        if (m < scr_right_db.size()) {
            os << "subband" << m << ".scr_right_db=";
            put(os, scr_right_db[m]);
            os << "\n";
        }
    }
}

} // namespace fcf
