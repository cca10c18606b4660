#pragma once

#include <cstdint>
#include <utility>

#include "fcf/numerology.hpp"
#include "fcf/ofdm.hpp"
#include "fcf/signal.hpp"

namespace fcf {

/// Narrow-band power measurement filter: 180 kHz passband (one PRB at the
/// 15 kHz baseline spacing), 7.5 kHz transition, >= 100 dB stopband. Realized
/// as a two-stage lowpass H1(z) H2(z^U): H2 runs on a stride-U grid and sets
/// the sharp transition, H1 suppresses its spectral images. The single-stage
/// equivalent at full rate would need tens of thousands of taps.
struct MeasurementFilter {
    rvec h1;
    rvec h2;
    int upsample{1};
    Rational fs_hz{0};

    /// Magnitude of the single-stage-equivalent response at f (Hz).
    double response_mag(double f_hz) const;

    /// Number of stored coefficients across both stages.
    std::size_t implemented_taps() const { return h1.size() + h2.size(); }

    /// Order of the single-stage equivalent H1(z) H2(z^U).
    std::int64_t equivalent_order() const {
        return static_cast<std::int64_t>(h1.size()) - 1 +
               static_cast<std::int64_t>(upsample) * (static_cast<std::int64_t>(h2.size()) - 1);
    }

    /// Materialized single-stage-equivalent impulse response.
    rvec equivalent_taps() const;
};

/// Kaiser-window lowpass design meeting the SCR measurement mask at the given
/// sampling rate. Throws when the mask is infeasible (fs too low).
MeasurementFilter design_measurement_filter(Rational fs_hz);

enum class Side { Left, Right };

/// Spectral confinement ratio in dB: leaked power measured guard_hz past the
/// subband edge against the observable power in the edge PRB, both through
/// the measurement filter (applied as its exact power transfer on the burst
/// spectrum). Positive-degenerate results are capped at +200 dB.
double measure_scr_db(const ComplexSignal& signal, Rational edge_low_hz, Rational edge_high_hz,
                      Side side, const MeasurementFilter& filter,
                      Rational guard_hz = Rational(180000));

/// Occupied band of a subband: half a subcarrier spacing past the outermost
/// subcarriers of the DC-straddling allocation.
std::pair<Rational, Rational> occupied_band(const FcConfig& cfg, int m);

/// Convenience overload measuring against the subband's occupied band edges,
/// so the signal-side filter covers the edge PRB exactly.
double measure_scr_db(const ComplexSignal& signal, const FcConfig& cfg, int m, Side side,
                      const MeasurementFilter& filter, Rational guard_hz = Rational(180000));

/// Precomputed SCR weighting for repeated measurements of same-length bursts.
class ScrAnalyzer {
  public:
    ScrAnalyzer(std::size_t signal_len, Rational fs_hz, Rational edge_low_hz,
                Rational edge_high_hz, Side side, const MeasurementFilter& filter,
                Rational guard_hz = Rational(180000));
    double measure_db(const cvec& samples) const;

    /// Tapered zero-padded burst spectrum, shareable across analyzers of the
    /// same signal length.
    cvec burst_spectrum(const cvec& samples) const;
    double measure_db_spectrum(const cvec& spectrum) const;

  private:
    std::size_t fft_len_;
    rvec w_signal_;
    rvec w_leak_;
    rvec taper_;
};

/// Per-subcarrier MSE between normalized TX and equalized RX grids, linear
/// scale, averaged over symbols, plus the active-band mean and the edge-band
/// mean (n_edge subcarriers per edge).
struct MseResult {
    rvec mse;        ///< per subcarrier, linear
    double mse_avg;  ///< mean over active subcarriers, linear
    double mse_max;  ///< mean over edge subcarriers, linear
};

MseResult compute_mse(const SymbolGrid& tx, const SymbolGrid& rx_equalized, int n_edge = 12);

/// Transparent-receiver passband error with the two-point EVM timing
/// convention: the receiver DFT window is placed at one quarter and three
/// quarters of the CP, each result is ZF-equalized against the reference,
/// and the worse reading is reported (per-subcarrier element-wise maximum,
/// aggregates likewise).
MseResult measure_chain_mse(const cvec& rx_signal, const SymbolGrid& tx_ref, int n_ofdm,
                            int n_cp, std::int64_t center_bin = 0, int n_long = 1,
                            int n_edge = 12);

/// dB helpers with the report floor/cap conventions.
double to_db_floor(double linear, double floor_db = -300.0);

/// Mean interference power (dB relative to unit symbol power) landing on a
/// victim allocation that carries no data. The victim is demodulated with its
/// own CP-OFDM numerology; partial trailing symbols are ignored.
struct VictimRxConfig {
    int n_ofdm{0};             ///< victim DFT length at the signal rate
    int n_cp{0};
    int l_act{0};
    Rational center_hz{0};     ///< victim allocation center
    Rational fs_hz{0};
};

double measure_ini_db(const cvec& rx, const VictimRxConfig& victim);

/// Aggregated quality report of one measurement run.
struct MetricsReport {
    std::vector<rvec> mse_db;       ///< per subband, per subcarrier
    std::vector<rvec> evm_pct;      ///< per subband, per subcarrier
    rvec mse_avg_db;
    rvec mse_max_db;
    rvec scr_left_db;
    rvec scr_right_db;

    void write_csv(std::ostream& os) const;
    void write_summary(std::ostream& os) const;
};

} // namespace fcf
