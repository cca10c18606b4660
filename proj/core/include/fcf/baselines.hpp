#pragma once

#include "fcf/rational.hpp"
#include "fcf/signal.hpp"

namespace fcf {

/// Raised-cosine edge windowing with overlap-and-add. Ramps consume CP
/// samples; no symbol extension beyond a trailing slope at the burst end.
struct WolaConfig {
    int slope{0}; ///< samples per ramp, typically CP/4
};

/// TX windowing: each symbol gets a rising ramp over the head of its CP and a
/// cyclic postfix with a falling ramp that crossfades into the next symbol's
/// CP. Output length is the input length plus one trailing slope.
cvec wola_tx(const cvec& cp_ofdm_signal, int sym_len, const WolaConfig& cfg);

/// RX-side dual: the CP-side extension of each symbol body is windowed and
/// folded back cyclically, suppressing block-edge interference. Output keeps
/// the input framing, so a standard CP-OFDM demodulator applies afterwards.
cvec wola_rx(const cvec& signal, int sym_len, int n_cp, int n_ofdm, const WolaConfig& cfg);

/// Raised-cosine ramp value k of a slope, sampled at (k + 0.5)/slope.
double wola_ramp(int k, int slope);

/// Time-domain filtered-OFDM prototype: Hann-windowed sinc lowpass with
/// n_filt + 1 symmetric taps. A nonzero timing_shift retards the compensated
/// response by that many samples, parking the filter transient inside the CP
/// where the plain OFDM receiver tolerates it.
struct FofdmConfig {
    rvec prototype;
    int timing_shift{0};
};

FofdmConfig design_fofdm_prototype(int n_filt, Rational fs_hz, Rational cutoff_hz);

/// Convolves the burst with the prototype and compensates the group delay by
/// trimming, so the output aligns sample-for-sample with the input (shifted
/// by timing_shift when configured).
cvec fofdm_tx(const cvec& cp_ofdm_signal, const FofdmConfig& cfg);

} // namespace fcf
