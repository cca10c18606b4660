#pragma once

#include <cstdint>
#include <iosfwd>

#include "fcf/signal.hpp"

namespace fcf {

/// Frequency-domain window: passband of ones, two mirror-symmetric transition
/// ramps of l_tbw adjustable weights each, zeros elsewhere. l_act is the
/// passband width in FC bins of the emitted window.
struct FdWindowSpec {
    int l_short{0};
    int l_act{0};
    int l_tbw{0};
    rvec xi;
};

rvec build_fd_window(const FdWindowSpec& spec);

/// Time-domain analysis window of length l_ofdm, built from the reduced
/// conjugate-symmetric spectral parameterization. For l_act >= l_ofdm/2 the
/// window degenerates to all-ones and takes no parameters.
struct AnalysisWindowSpec {
    int l_ofdm{0};
    int l_act{0};
    rvec phi;
};

/// Length of the phi parameter vector: l_ofdm - 2*l_act + 2, or 0 when the
/// window degenerates.
int analysis_param_count(int l_ofdm, int l_act);

rvec build_analysis_window(const AnalysisWindowSpec& spec);

/// phi that reproduces the all-ones window (DC-only spectrum).
rvec analysis_dc_params(int l_ofdm, int l_act);

/// Time-domain synthesis window of length n_long parameterized by the lowest
/// gamma spectral bins (2*gamma - 1 real parameters).
struct SynthesisWindowSpec {
    int n_long{0};
    int gamma{20};
    rvec psi;
};

rvec build_synthesis_window(const SynthesisWindowSpec& spec);

/// psi reproducing the all-ones window.
rvec synthesis_dc_params(int n_long, int gamma);

/// psi whose window is the gamma-bin spectral truncation of an arbitrary
/// target window (e.g. the overlap-save mask). Feasible smooth start for
/// optimization.
rvec synthesis_params_from_window(const rvec& window, int gamma);

/// Reads the l_short samples of the CP-extended, periodically tiled analysis
/// window that FC block r covers. The window tiles with period
/// l_ofdm + l_cp; blocks straddling the zero-padded head or tail read the
/// periodic extension.
rvec align_analysis_window(const rvec& a_hat, std::int64_t r, int l_cp, int l_s, int s_f,
                           int l_short, std::int64_t r_max);

/// The three window families of a configured bank: per-subband FD window and
/// analysis window, shared synthesis window. An analysis entry is either a
/// CP-synchronized prototype of length L_OFDM (tiled over the symbol stream)
/// or, when flagged as a block mask, a fixed length-L_m per-block weighting
/// (the overlap-add special case).
struct WindowSet {
    std::vector<rvec> fd;
    std::vector<rvec> analysis;
    std::vector<std::uint8_t> analysis_is_block_mask; ///< empty means all false
    rvec synthesis;

    bool block_mask(std::size_t m) const {
        return m < analysis_is_block_mask.size() && analysis_is_block_mask[m] != 0;
    }
};

void save_windows(std::ostream& os, const WindowSet& ws);
WindowSet load_windows(std::istream& is);

} // namespace fcf
