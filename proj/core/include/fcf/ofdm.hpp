#pragma once

#include <cstdint>

#include "fcf/signal.hpp"

namespace fcf {

/// Frequency-domain symbols over active subcarriers, one column per OFDM
/// symbol. Active subcarriers map into the transform grid centered on the
/// subband center: for l_act entries, offsets -floor(l_act/2) .. ceil(l_act/2)-1
/// relative to the center (DC-straddling, no reserved DC null).
struct SymbolGrid {
    int l_act{0};
    int n_symbols{0};
    cvec x; ///< column-major: x[s * l_act + k]

    SymbolGrid() = default;
    SymbolGrid(int act, int syms) : l_act(act), n_symbols(syms), x(static_cast<std::size_t>(act) * syms) {}

    cplx& at(int k, int s) { return x[static_cast<std::size_t>(s) * l_act + k]; }
    const cplx& at(int k, int s) const { return x[static_cast<std::size_t>(s) * l_act + k]; }
};

/// Gray-mapped QAM grid with unit average power. bits_per_symbol is 2, 4, 6,
/// or 8 (QPSK .. 256-QAM). Deterministic for a fixed seed.
SymbolGrid random_qam_grid(int l_act, int n_symbols, int bits_per_symbol, std::uint64_t seed);

/// CP-OFDM modulation: per symbol, place active subcarriers into the l_ofdm
/// grid, unitary inverse DFT, prepend the last l_cp samples, serialize.
cvec cp_ofdm_modulate(const SymbolGrid& grid, int l_ofdm, int l_cp);

/// High-rate transparent CP-OFDM demodulation. The signal must hold
/// n_symbols*(n_ofdm+n_cp) samples after zero-pad removal. A subband centered
/// at center_bin (FC bins of an n_long engine) is first shifted to baseband so
/// arbitrary center bins demodulate coherently; pass center_bin=0, n_long=1
/// for a plain baseband signal. timing_advance starts each DFT window that
/// many samples inside the CP (the per-subcarrier phase ramp this introduces
/// is a constant absorbed by ZF equalization); quality measurements center
/// the window at half the CP so symmetric filter transients stay protected.
SymbolGrid cp_ofdm_demod_highrate(const cvec& signal, int n_ofdm, int n_cp, int l_act,
                                  int n_symbols, std::int64_t center_bin = 0, int n_long = 1,
                                  int timing_advance = 0);

/// Decimated-path demodulation: pick every interp-th sample (offset 0), then
/// demodulate at low rate. Includes the sqrt(interp) gain that restores unit
/// grid gain under the unitary interpolation convention. timing_advance is in
/// low-rate samples.
SymbolGrid cp_ofdm_demod_decimated(const cvec& signal, int l_ofdm, int l_cp, int interp,
                                   int l_act, int n_symbols, std::int64_t center_bin = 0,
                                   int n_long = 1, int timing_advance = 0);

/// Data-aided zero-forcing equalization: one complex gain per subcarrier,
/// least squares over symbols against the known reference grid.
SymbolGrid zf_equalize(const SymbolGrid& rx, const SymbolGrid& tx_ref);

} // namespace fcf
